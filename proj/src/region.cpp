#include "convlab/region.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "convlab/rng.hpp"

namespace convlab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_dimension(const Point& x, int n, const char* where) {
  if (static_cast<int>(x.size()) != n) throw Error(std::string(where) + ": dimension mismatch");
}

Point sub(const Point& a, const Point& b) {
  Point r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
  return r;
}

// Gauss-Newton on a holomorphic system; minimum-norm steps.
std::optional<Point> newton_project(const std::vector<Polynomial>& eqs, Point x, int iterations = 40) {
  const int n = static_cast<int>(x.size());
  const int m = static_cast<int>(eqs.size());
  std::vector<std::vector<Polynomial>> jac(m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < n; ++j) jac[i].push_back(partial_derivative(eqs[i], j));
  for (int it = 0; it < iterations; ++it) {
    Eigen::VectorXcd f(m);
    double fmax = 0.0;
    for (int i = 0; i < m; ++i) {
      f(i) = eqs[i].evaluate(x);
      fmax = std::max(fmax, std::abs(f(i)));
    }
    if (fmax <= 1e-14 * std::pow(1.0 + norm2(x), 4)) return x;
    Eigen::MatrixXcd J(m, n);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < n; ++j) J(i, j) = jac[i][j].evaluate(x);
    const Eigen::VectorXcd dx = J.completeOrthogonalDecomposition().solve(f);
    if (!dx.allFinite()) return std::nullopt;
    for (int j = 0; j < n; ++j) x[j] -= dx(j);
  }
  double fmax = 0.0;
  for (const auto& e : eqs) fmax = std::max(fmax, std::abs(e.evaluate(x)));
  if (fmax <= 1e-10 * std::pow(1.0 + norm2(x), 4)) return x;
  return std::nullopt;
}

double segment_distance(const Point& a, const Point& b, const Point& x, Point* nearest = nullptr) {
  const Point d = sub(b, a);
  const Point v = sub(x, a);
  double dd = 0.0, dv = 0.0;
  for (std::size_t i = 0; i < d.size(); ++i) {
    dd += std::norm(d[i]);
    dv += (std::conj(d[i]) * v[i]).real();
  }
  const double t = dd > 0.0 ? std::clamp(dv / dd, 0.0, 1.0) : 0.0;
  Point p(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) p[i] = a[i] + t * d[i];
  if (nearest) *nearest = p;
  return norm2(sub(x, p));
}

}  // namespace

std::string to_string(RegionKind k) {
  switch (k) {
    case RegionKind::Variety: return "variety";
    case RegionKind::Finite: return "finite";
    case RegionKind::Ball: return "ball";
    case RegionKind::Polydisk: return "polydisk";
    case RegionKind::Sphere: return "sphere";
    case RegionKind::Segment: return "segment";
    case RegionKind::Union: return "union";
    case RegionKind::Intersection: return "intersection";
    case RegionKind::Hyperplane: return "hyperplane";
    case RegionKind::Cover: return "cover";
  }
  return "?";
}

RegionKind region_kind_from_string(const std::string& s) {
  for (RegionKind k : {RegionKind::Variety, RegionKind::Finite, RegionKind::Ball, RegionKind::Polydisk,
                       RegionKind::Sphere, RegionKind::Segment, RegionKind::Union, RegionKind::Intersection,
                       RegionKind::Hyperplane, RegionKind::Cover})
    if (to_string(k) == s) return k;
  throw Error("unknown region kind '" + s + "'");
}

Point canonical_projective(const Point& x) {
  const double nx = norm2(x);
  if (nx == 0.0) throw Error("projective point: zero representative");
  Point y(x.size());
  Complex phase = 1.0;
  for (const auto& c : x)
    if (std::abs(c) > 1e-300) {
      phase = std::conj(c) / std::abs(c);
      break;
    }
  for (std::size_t i = 0; i < x.size(); ++i) y[i] = x[i] * phase / nx;
  return y;
}

double projective_distance(const Point& x, const Point& y) {
  if (x.size() != y.size()) throw Error("projective_distance: dimension mismatch");
  const double nx = norm2(x), ny = norm2(y);
  if (nx == 0.0 || ny == 0.0) throw Error("projective point: zero representative");
  Complex ip = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) ip += std::conj(x[i]) * y[i];
  const double c = std::min(1.0, std::abs(ip) / (nx * ny));
  return std::sqrt(std::max(0.0, 1.0 - c * c));
}

std::optional<int> ProjCover::piece_of(const Point& x, double tol) const {
  require_dimension(x, n, "ProjCover");
  const Point y = canonical_projective(x);
  Point e1(n, 0.0);
  e1[0] = 1.0;
  if (projective_distance(y, e1) <= tol) return 1;
  for (int k = 2; k <= n; ++k) {
    double tail = 0.0, head = 0.0;
    for (int i = k; i < n; ++i) tail += std::norm(y[i]);
    for (int i = 0; i < k - 1; ++i) head += std::norm(y[i]);
    if (std::sqrt(tail) <= tol && head <= M * M * std::norm(y[k - 1]) + tol) return k;
  }
  return std::nullopt;
}

double Hyperplane::distance(const Point& x) const {
  require_dimension(x, static_cast<int>(normal.size()), "Hyperplane");
  Complex s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += normal[i] * x[i];
  const double nx = norm2(x);
  if (nx == 0.0) throw Error("projective point: zero representative");
  return std::abs(s) / (nx * norm2(normal));
}

// ---------------------------------------------------------------------------

Region Region::variety(std::vector<Polynomial> equations, Space space) {
  if (equations.empty()) throw Error("variety: need at least one equation");
  Region r;
  r.kind_ = RegionKind::Variety;
  r.space_ = space;
  r.n_ = equations.front().dimension();
  for (const auto& e : equations) {
    if (e.dimension() != r.n_) throw Error("variety: equations of different dimension");
    if (space == Space::Projective && !e.is_homogeneous())
      throw Error("variety: projective equations must be homogeneous");
  }
  r.equations_ = std::move(equations);
  return r;
}

Region Region::finite(std::vector<Point> points, Space space) {
  if (points.empty()) throw Error("finite: empty point list");
  Region r;
  r.kind_ = RegionKind::Finite;
  r.space_ = space;
  r.n_ = static_cast<int>(points.front().size());
  for (auto& p : points) {
    require_dimension(p, r.n_, "finite");
    if (space == Space::Projective) p = canonical_projective(p);
  }
  r.points_ = std::move(points);
  return r;
}

Region Region::ball(Point center, double radius) {
  if (!(radius >= 0.0)) throw Error("ball: negative radius");
  Region r;
  r.kind_ = RegionKind::Ball;
  r.n_ = static_cast<int>(center.size());
  r.center_ = std::move(center);
  r.radius_ = radius;
  return r;
}

Region Region::polydisk(Point center, double radius) {
  Region r = ball(std::move(center), radius);
  r.kind_ = RegionKind::Polydisk;
  return r;
}

Region Region::sphere(Point center, double radius) {
  Region r = ball(std::move(center), radius);
  r.kind_ = RegionKind::Sphere;
  return r;
}

Region Region::segment(Point a, Point b) {
  if (a.size() != b.size() || a.empty()) throw Error("segment: endpoint dimension mismatch");
  Region r;
  r.kind_ = RegionKind::Segment;
  r.n_ = static_cast<int>(a.size());
  r.center_ = std::move(a);
  r.end_ = std::move(b);
  return r;
}

Region Region::union_of(std::vector<Region> parts) {
  if (parts.empty()) throw Error("union: no parts");
  Region r;
  r.kind_ = RegionKind::Union;
  r.n_ = parts.front().n_;
  r.space_ = parts.front().space_;
  for (const auto& p : parts)
    if (p.n_ != r.n_ || p.space_ != r.space_) throw Error("union: parts disagree on space");
  r.parts_ = std::move(parts);
  return r;
}

Region Region::intersection_of(std::vector<Region> parts) {
  Region r = union_of(std::move(parts));
  r.kind_ = RegionKind::Intersection;
  return r;
}

Region Region::hyperplane(Point normal) {
  const double nn = norm2(normal);
  if (nn == 0.0) throw Error("hyperplane: zero normal");
  Region r;
  r.kind_ = RegionKind::Hyperplane;
  r.space_ = Space::Projective;
  r.n_ = static_cast<int>(normal.size());
  for (auto& c : normal) c /= nn;
  r.center_ = std::move(normal);
  return r;
}

Region Region::cover(int n, double M) {
  if (n < 2 || !(M > 0.0)) throw Error("cover: need n >= 2 and M > 0");
  Region r;
  r.kind_ = RegionKind::Cover;
  r.space_ = Space::Projective;
  r.n_ = n;
  r.radius_ = M;
  return r;
}

bool Region::is_compact() const {
  switch (kind_) {
    case RegionKind::Variety: return space_ == Space::Projective;
    case RegionKind::Union:
      return std::all_of(parts_.begin(), parts_.end(), [](const Region& p) { return p.is_compact(); });
    case RegionKind::Intersection:
      return std::any_of(parts_.begin(), parts_.end(), [](const Region& p) { return p.is_compact(); });
    default: return true;
  }
}

bool Region::is_empty() const { return false; }

double Region::extent() const {
  switch (kind_) {
    case RegionKind::Ball:
    case RegionKind::Sphere: return norm2(center_) + radius_;
    case RegionKind::Polydisk: return norm2(center_) + radius_ * std::sqrt(static_cast<double>(n_));
    case RegionKind::Segment: return std::max(norm2(center_), norm2(end_));
    case RegionKind::Finite: {
      double m = 0.0;
      for (const auto& p : points_) m = std::max(m, norm2(p));
      return m;
    }
    case RegionKind::Union: {
      double m = 0.0;
      for (const auto& p : parts_) m = std::max(m, p.extent());
      return m;
    }
    case RegionKind::Intersection: {
      double m = kInf;
      for (const auto& p : parts_)
        if (p.is_compact()) m = std::min(m, p.extent());
      return m;
    }
    default: return space_ == Space::Projective ? 1.0 : kInf;
  }
}

std::optional<Point> Region::project(const Point& x) const {
  require_dimension(x, n_, "project");
  switch (kind_) {
    case RegionKind::Ball:
    case RegionKind::Sphere: {
      Point d = sub(x, center_);
      double nd = norm2(d);
      if (kind_ == RegionKind::Ball && nd <= radius_) return x;
      if (nd == 0.0) {
        d.assign(n_, 0.0);
        d[0] = 1.0;
        nd = 1.0;
      }
      Point p(n_);
      for (int i = 0; i < n_; ++i) p[i] = center_[i] + d[i] * (radius_ / nd);
      return p;
    }
    case RegionKind::Polydisk: {
      Point p = x;
      for (int i = 0; i < n_; ++i) {
        const Complex d = x[i] - center_[i];
        if (std::abs(d) > radius_) p[i] = center_[i] + d * (radius_ / std::abs(d));
      }
      return p;
    }
    case RegionKind::Segment: {
      Point p;
      segment_distance(center_, end_, x, &p);
      return p;
    }
    case RegionKind::Finite: {
      const Point* best = nullptr;
      double bd = kInf;
      for (const auto& q : points_) {
        const double d = space_ == Space::Projective ? projective_distance(q, x) : norm2(sub(q, x));
        if (d < bd) bd = d, best = &q;
      }
      return *best;
    }
    case RegionKind::Variety: {
      auto p = newton_project(equations_, x);
      if (p && space_ == Space::Projective) {
        if (norm2(*p) == 0.0) return std::nullopt;
        return canonical_projective(*p);
      }
      return p;
    }
    case RegionKind::Union: {
      std::optional<Point> best;
      double bd = kInf;
      for (const auto& part : parts_) {
        auto p = part.project(x);
        if (!p) continue;
        const double d = norm2(sub(*p, x));
        if (d < bd) bd = d, best = p;
      }
      return best;
    }
    default: return std::nullopt;
  }
}

// ---------------------------------------------------------------------------

Membership membership(const Region& r, const Point& x, double eps) {
  require_dimension(x, r.dimension(), "membership");
  const bool proj = r.space() == Space::Projective;
  Point y = proj ? canonical_projective(x) : x;
  const double scale = 1.0 + norm2(y);
  switch (r.kind()) {
    case RegionKind::Variety: {
      double res = 0.0, tol_ratio = 0.0;
      for (const auto& e : r.equations()) {
        const double v = std::abs(e.evaluate(y)) / std::pow(scale, std::max(0, e.degree()));
        res = std::max(res, v);
      }
      tol_ratio = res / eps;
      return {tol_ratio <= 1.0, res};
    }
    case RegionKind::Finite: {
      double res = kInf;
      for (const auto& p : r.points())
        res = std::min(res, proj ? projective_distance(p, y) : norm2(sub(p, y)));
      return {res <= eps * (proj ? 1.0 : scale), res};
    }
    case RegionKind::Ball: {
      const double res = std::max(0.0, norm2(sub(y, r.center())) - r.radius());
      return {res <= eps * scale, res};
    }
    case RegionKind::Polydisk: {
      double res = 0.0;
      for (int i = 0; i < r.dimension(); ++i)
        res = std::max(res, std::abs(y[i] - r.center()[i]) - r.radius());
      return {res <= eps * scale, std::max(0.0, res)};
    }
    case RegionKind::Sphere: {
      const double res = std::abs(norm2(sub(y, r.center())) - r.radius());
      return {res <= eps * scale, res};
    }
    case RegionKind::Segment: {
      const double res = segment_distance(r.center(), r.segment_end(), y);
      return {res <= eps * scale, res};
    }
    case RegionKind::Union: {
      Membership m{false, kInf};
      for (const auto& p : r.parts()) {
        const Membership c = membership(p, x, eps);
        m.member = m.member || c.member;
        m.residual = std::min(m.residual, c.residual);
      }
      return m;
    }
    case RegionKind::Intersection: {
      Membership m{true, 0.0};
      for (const auto& p : r.parts()) {
        const Membership c = membership(p, x, eps);
        m.member = m.member && c.member;
        m.residual = std::max(m.residual, c.residual);
      }
      return m;
    }
    case RegionKind::Hyperplane: {
      const double res = Hyperplane{r.normal()}.distance(y);
      return {res <= eps, res};
    }
    case RegionKind::Cover: {
      const ProjCover c = r.proj_cover();
      const int n = c.n;
      Point e1(n, 0.0);
      e1[0] = 1.0;
      double res = projective_distance(y, e1);
      for (int k = 2; k <= n; ++k) {
        double tail = 0.0, head = 0.0;
        for (int i = k; i < n; ++i) tail += std::norm(y[i]);
        for (int i = 0; i < k - 1; ++i) head += std::norm(y[i]);
        const double over = std::max(0.0, std::sqrt(head) - c.M * std::abs(y[k - 1]));
        res = std::min(res, std::max(std::sqrt(tail), over));
      }
      return {res <= eps, res};
    }
  }
  return {};
}

// ---------------------------------------------------------------------------

std::vector<Complex> univariate_roots(const std::vector<Complex>& coefficients) {
  std::vector<Complex> c = coefficients;
  while (!c.empty() && std::abs(c.back()) == 0.0) c.pop_back();
  if (c.size() <= 1) return {};
  const int d = static_cast<int>(c.size()) - 1;
  std::vector<Complex> roots;
  // factor out roots at zero exactly
  int zeros = 0;
  while (zeros < d && std::abs(c[zeros]) == 0.0) ++zeros;
  for (int i = 0; i < zeros; ++i) roots.push_back(0.0);
  const int m = d - zeros;
  if (m == 0) return roots;
  Eigen::MatrixXcd C = Eigen::MatrixXcd::Zero(m, m);
  for (int i = 1; i < m; ++i) C(i, i - 1) = 1.0;
  for (int i = 0; i < m; ++i) C(i, m - 1) = -c[zeros + i] / c[d];
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(C, false);
  auto eval = [&](Complex z, Complex& dp) {
    Complex p = c[d];
    dp = 0.0;
    for (int i = d - 1; i >= 0; --i) {
      dp = dp * z + p;
      p = p * z + c[i];
    }
    return p;
  };
  for (int i = 0; i < m; ++i) {
    Complex z = es.eigenvalues()(i);
    for (int it = 0; it < 3; ++it) {
      Complex dp;
      const Complex p = eval(z, dp);
      if (std::abs(dp) == 0.0) break;
      const Complex step = p / dp;
      if (!std::isfinite(std::abs(step))) break;
      z -= step;
    }
    roots.push_back(z);
  }
  return roots;
}

namespace {

Point sample_ball_like(CounterRng& rng, const Point& c, double radius, bool boundary) {
  const int n = static_cast<int>(c.size());
  Point x = boundary ? rng.unit_sphere(n) : rng.ball(n, 1.0);
  for (int i = 0; i < n; ++i) x[i] = c[i] + radius * x[i];
  return x;
}

Complex disk_point(CounterRng& rng, double radius) {
  const double r = radius * std::sqrt(rng.uniform());
  const double t = 2.0 * std::numbers::pi * rng.uniform();
  return std::polar(r, t);
}

void sample_variety(const Region& r, std::size_t count, SampleWindow w, CounterRng& rng, std::vector<Point>& out) {
  const int n = r.dimension();
  const Polynomial& first = r.equations().front();
  std::vector<int> solvable;
  for (int i = 0; i < n; ++i) {
    bool dep = false;
    for (const auto& [a, c] : first.terms()) {
      (void)c;
      if (a[i] > 0) dep = true;
    }
    if (dep) solvable.push_back(i);
  }
  if (solvable.empty()) {
    if (first.is_zero()) {  // whole space
      while (out.size() < count) {
        Point x(n);
        for (auto& c : x) c = disk_point(rng, w.radius);
        out.push_back(x);
      }
      return;
    }
    throw Error("sample: variety of a nonzero constant is empty");
  }
  const std::size_t budget = 400 * count + 1000;
  std::size_t attempts = 0;
  std::vector<Point> cache;  // n = 1: the finite root set
  while (out.size() < count) {
    if (++attempts > budget) throw Error("sample: variety sampler exhausted its budget (degenerate window?)");
    const int c = solvable[rng.uniform_int(0, static_cast<int>(solvable.size()) - 1)];
    Point x(n);
    for (int i = 0; i < n; ++i) x[i] = i == c ? Complex(0.0) : disk_point(rng, w.radius);
    std::vector<Complex> coeffs(first.degree() + 1, 0.0);
    for (const auto& [a, v] : first.terms()) {
      Complex m = v;
      for (int i = 0; i < n; ++i)
        if (i != c) m *= std::pow(x[i], a[i]);
      coeffs[a[c]] += m;
    }
    auto roots = univariate_roots(coeffs);
    // rotate so different attempts favor different roots
    if (!roots.empty()) std::rotate(roots.begin(), roots.begin() + rng.uniform_int(0, static_cast<int>(roots.size()) - 1), roots.end());
    for (const Complex z : roots) {
      Point p = x;
      p[c] = z;
      if (r.equations().size() > 1) {
        auto q = newton_project(r.equations(), p);
        if (!q) continue;
        p = *q;
      }
      bool inside = true;
      for (const auto& v : p) inside = inside && std::abs(v) <= w.radius * (1.0 + 1e-12);
      if (!inside) continue;
      if (r.space() == Space::Projective) {
        if (norm2(p) < 1e-8) continue;
        p = canonical_projective(p);
      }
      if (!membership(r, p).member) continue;
      out.push_back(p);
      if (out.size() == count) return;
    }
  }
}

void sample_into(const Region& r, std::size_t count, SampleWindow w, CounterRng& rng, std::vector<Point>& out) {
  const std::size_t target = out.size() + count;
  const int n = r.dimension();
  switch (r.kind()) {
    case RegionKind::Variety: {
      std::vector<Point> local;
      sample_variety(r, count, w, rng, local);
      out.insert(out.end(), local.begin(), local.end());
      return;
    }
    case RegionKind::Finite:
      for (std::size_t i = 0; out.size() < target; ++i) out.push_back(r.points()[i % r.points().size()]);
      return;
    case RegionKind::Ball:
      for (std::size_t i = 0; out.size() < target; ++i)
        out.push_back(sample_ball_like(rng, r.center(), r.radius(), i % 2 == 1));
      return;
    case RegionKind::Sphere:
      while (out.size() < target) out.push_back(sample_ball_like(rng, r.center(), r.radius(), true));
      return;
    case RegionKind::Polydisk:
      for (std::size_t i = 0; out.size() < target; ++i) {
        Point x(n);
        for (int j = 0; j < n; ++j)
          x[j] = r.center()[j] + (i % 2 ? std::polar(r.radius(), 2.0 * std::numbers::pi * rng.uniform())
                                        : disk_point(rng, r.radius()));
        out.push_back(x);
      }
      return;
    case RegionKind::Segment:
      while (out.size() < target) {
        const double t = rng.uniform();
        Point x(n);
        for (int j = 0; j < n; ++j) x[j] = r.center()[j] + t * (r.segment_end()[j] - r.center()[j]);
        out.push_back(x);
      }
      return;
    case RegionKind::Union: {
      const std::size_t parts = r.parts().size();
      for (std::size_t i = 0; i < parts; ++i) {
        const std::size_t share = count / parts + (i < count % parts ? 1 : 0);
        if (share) sample_into(r.parts()[i], share, w, rng, out);
      }
      return;
    }
    case RegionKind::Intersection: {
      // draw candidates from the thinnest part
      auto rank = [](RegionKind k) {
        switch (k) {
          case RegionKind::Finite: return 0;
          case RegionKind::Variety: return 1;
          case RegionKind::Segment: return 2;
          case RegionKind::Sphere: return 3;
          default: return 4;
        }
      };
      const Region* base = &r.parts().front();
      for (const Region& p : r.parts())
        if (rank(p.kind()) < rank(base->kind())) base = &p;
      std::size_t attempts = 0;
      while (out.size() < target) {
        if (++attempts > 200 * count + 1000) throw Error("sample: intersection sampler exhausted its budget");
        std::vector<Point> cand;
        sample_into(*base, 1, w, rng, cand);
        if (membership(r, cand.front(), 1e-7).member) out.push_back(cand.front());
      }
      return;
    }
    case RegionKind::Hyperplane: {
      const Point& a = r.normal();
      while (out.size() < target) {
        Point x = rng.unit_sphere(n);
        Complex s = 0.0;
        for (int j = 0; j < n; ++j) s += a[j] * x[j];
        for (int j = 0; j < n; ++j) x[j] -= s * std::conj(a[j]);
        if (norm2(x) < 1e-6) continue;
        out.push_back(canonical_projective(x));
      }
      return;
    }
    case RegionKind::Cover: {
      const ProjCover c = r.proj_cover();
      for (std::size_t i = 0; out.size() < target; ++i) {
        const int k = rng.uniform_int(1, n);
        Point x(n, 0.0);
        if (k == 1) {
          x[0] = 1.0;
        } else {
          x[k - 1] = std::polar(1.0, 2.0 * std::numbers::pi * rng.uniform());
          const Point head = i % 3 == 0 ? rng.unit_sphere(k - 1) : rng.ball(k - 1, 1.0);
          for (int j = 0; j < k - 1; ++j) x[j] = c.M * head[j];
        }
        out.push_back(canonical_projective(x));
      }
      return;
    }
  }
}

}  // namespace

std::vector<Point> sample(const Region& r, std::size_t count, SampleWindow window, std::uint64_t seed) {
  if (count < 1) throw Error("sample: count must be >= 1");
  CounterRng rng(seed, 0x5a3931e);
  std::vector<Point> out;
  out.reserve(count);
  sample_into(r, count, window, rng, out);
  return out;
}

// ---------------------------------------------------------------------------

AvoidingHyperplane find_avoiding_hyperplane(const ProjCover& cover, double epsilon, const std::optional<Point>& extra,
                                            std::size_t samples, std::uint64_t seed, int shrink_budget) {
  const int n = cover.n;
  if (n < 2) throw Error("find_avoiding_hyperplane: need n >= 2");
  if (!(epsilon > 0.0)) throw Error("find_avoiding_hyperplane: epsilon must be positive");
  if (extra) require_dimension(*extra, n, "find_avoiding_hyperplane");
  const Region k = Region::cover(n, cover.M);
  std::vector<Point> pts = sample(k, samples, {}, seed);
  // deterministic extremes of each piece: e_1 and boundary points with one head coordinate
  Point e1(n, 0.0);
  e1[0] = 1.0;
  pts.push_back(e1);
  for (int kk = 2; kk <= n; ++kk)
    for (int j = 0; j < kk - 1; ++j) {
      Point x(n, 0.0);
      x[kk - 1] = 1.0;
      x[j] = cover.M;
      pts.push_back(x);
      x[j] = -cover.M;
      pts.push_back(x);
    }
  constexpr double kRequired = 1e-9;
  AvoidingHyperplane out;
  out.samples = pts.size();
  double eps = epsilon;
  for (int step = 0; step <= shrink_budget; ++step, eps *= 0.5) {
    // V = span(e_j + eps e_{j+1}) has equation sum a_i x_i = 0 with a_{i+1} = -a_i / eps.
    Point a(n);
    a[0] = 1.0;
    for (int i = 1; i < n; ++i) a[i] = -a[i - 1] / eps;
    const double na = norm2(a);
    for (auto& c : a) c /= na;
    Hyperplane plane{a};
    double delta = std::numeric_limits<double>::infinity();
    for (const auto& p : pts) delta = std::min(delta, plane.distance(p));
    if (!(delta > kRequired)) continue;
    out.epsilon = eps;
    out.shrink_steps = step;
    if (extra && !(plane.distance(*extra) > kRequired)) {
      // The planes avoiding K form an open set; the planes through u form a
      // hyperplane of the dual space. Perturb within the former.
      CounterRng rng(seed, 0xa701d);
      bool found = false;
      for (int attempt = 0; attempt < 400 && !found; ++attempt) {
        const double eta = delta * std::pow(0.8, attempt % 40) * 0.5;
        Point b = a;
        const Point w = rng.unit_sphere(n);
        for (int i = 0; i < n; ++i) b[i] += eta * w[i];
        const double nb = norm2(b);
        for (auto& c : b) c /= nb;
        Hyperplane cand{b};
        double d2 = cand.distance(*extra);
        for (const auto& p : pts) d2 = std::min(d2, cand.distance(p));
        if (d2 > kRequired) {
          plane = cand;
          delta = d2;
          found = true;
        }
      }
      if (!found) continue;
      out.perturbed = true;
    } else if (extra) {
      delta = std::min(delta, plane.distance(*extra));
    }
    out.plane = plane;
    out.delta = delta;
    out.note = "separation certified on " + std::to_string(pts.size()) + " sampled points of K_M";
    return out;
  }
  throw Error("find_avoiding_hyperplane: certification failed after epsilon-shrink budget");
}

}  // namespace convlab
