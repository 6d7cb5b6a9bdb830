#include "convlab/pluripotential.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numbers>

#include "convlab/rng.hpp"

namespace convlab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

Vec monomials(const Point& x, const std::vector<Exponent>& exps) {
  const int n = static_cast<int>(x.size());
  int top = 0;
  for (const auto& a : exps) top = std::max(top, total_degree(a));
  std::vector<std::vector<Complex>> pw(n, std::vector<Complex>(top + 1, 1.0));
  for (int i = 0; i < n; ++i)
    for (int e = 1; e <= top; ++e) pw[i][e] = pw[i][e - 1] * x[i];
  Vec v(exps.size());
  for (std::size_t p = 0; p < exps.size(); ++p) {
    Complex m = 1.0;
    for (int i = 0; i < n; ++i) m *= pw[i][exps[p][i]];
    v(p) = m;
  }
  return v;
}

bool has_duplicates(const std::vector<Point>& pts) {
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j)
      if (pts[i] == pts[j]) return true;
  return false;
}

Mat vandermonde_matrix(const std::vector<Point>& pts, const std::vector<Exponent>& exps) {
  Mat A(exps.size(), pts.size());
  for (std::size_t q = 0; q < pts.size(); ++q) A.col(q) = monomials(pts[q], exps);
  return A;
}

double log_abs_det(const Eigen::PartialPivLU<Mat>& lu) {
  double s = 0.0;
  for (Eigen::Index i = 0; i < lu.matrixLU().rows(); ++i) {
    const double a = std::abs(lu.matrixLU()(i, i));
    if (a == 0.0) return -kInf;
    s += std::log(a);
  }
  return s;
}

std::vector<Point> dedupe(std::vector<Point> pts) {
  std::vector<Point> out;
  for (auto& p : pts)
    if (std::find(out.begin(), out.end(), p) == out.end()) out.push_back(std::move(p));
  return out;
}

double jitter_scale(const Region& E, SampleWindow w) {
  const double ext = E.extent();
  return std::isfinite(ext) && ext > 0.0 ? ext : w.radius;
}

}  // namespace

VandermondeValue vandermonde(const std::vector<Point>& points) {
  if (points.empty()) throw Error("vandermonde: need at least one point");
  const int n = static_cast<int>(points.front().size());
  for (const auto& p : points)
    if (static_cast<int>(p.size()) != n) throw Error("vandermonde: dimension mismatch");
  VandermondeValue out;
  if (has_duplicates(points)) return out;
  const auto exps = first_exponents(n, points.size());
  const Mat A = vandermonde_matrix(points, exps);
  const Eigen::PartialPivLU<Mat> lu(A);
  out.log_abs = log_abs_det(lu);
  if (std::isinf(out.log_abs)) return out;
  double phase = 0.0;
  for (Eigen::Index i = 0; i < A.rows(); ++i) phase += std::arg(lu.matrixLU()(i, i));
  const double sign = lu.permutationP().determinant();
  out.det = sign * std::polar(std::exp(out.log_abs), phase);
  return out;
}

FeketeConfig fekete_search(const Region& E, int k, const FeketeBudget& budget) {
  if (k < 1) throw Error("fekete_search: k must be >= 1");
  const int n = E.dimension();
  const auto counts = monomial_counts(n, k);
  const std::size_t m = static_cast<std::size_t>(counts.m_k);
  const auto exps = first_exponents(n, m);
  std::vector<Point> pool = E.kind() == RegionKind::Finite ? dedupe(E.points())
                                                           : sample(E, budget.pool, budget.window, budget.seed);
  std::vector<Vec> cols;
  cols.reserve(pool.size());
  for (const auto& p : pool) cols.push_back(monomials(p, exps));

  FeketeConfig out;
  out.k = k;
  // Greedy insertion: the bordered determinant grows by a - y.c with
  // y = A_j^{-T} r, so each candidate costs O(j).
  std::vector<std::size_t> chosen;
  double logV = 0.0;
  for (std::size_t j = 0; j < m; ++j) {
    Vec y;
    if (j > 0) {
      Mat A(j, j);
      Vec r(j);
      for (std::size_t q = 0; q < j; ++q) {
        A.col(q) = cols[chosen[q]].head(j);
        r(q) = cols[chosen[q]](j);
      }
      y = A.transpose().partialPivLu().solve(r);
    }
    double best = -1.0;
    std::size_t arg = 0;
    for (std::size_t c = 0; c < cols.size(); ++c) {
      if (std::find(chosen.begin(), chosen.end(), c) != chosen.end()) continue;
      Complex f = cols[c](j);
      if (j > 0) f -= (y.transpose() * cols[c].head(j))(0);
      const double a = std::abs(f);
      if (a > best) best = a, arg = c;
    }
    if (best <= 0.0) {
      // E has fewer than m_k points (or they are unisolvent-deficient): V = 0.
      logV = -kInf;
      for (std::size_t q = 0; chosen.size() < m; ++q) chosen.push_back(q % cols.size());
      break;
    }
    chosen.push_back(arg);
    logV += std::log(best);
  }
  for (std::size_t q : chosen) out.points.push_back(pool[q]);
  out.history.push_back(logV);

  if (std::isfinite(logV)) {
    CounterRng rng(budget.seed, 0xfe4e7e);
    const double scale = jitter_scale(E, budget.window);
    Mat A = vandermonde_matrix(out.points, exps);
    Eigen::PartialPivLU<Mat> lu(A);
    for (int sweep = 0; sweep < budget.sweeps; ++sweep) {
      bool improved = false;
      std::vector<Point> cand = pool;
      if (E.kind() != RegionKind::Finite) {
        const double step = 0.1 * scale * std::pow(0.75, sweep);
        for (const auto& p : out.points)
          for (int t = 0; t < budget.perturbations; ++t) {
            Point y = p;
            const Point d = rng.unit_sphere(n);
            for (int i = 0; i < n; ++i) y[i] += step * rng.uniform() * d[i];
            if (auto z = E.project(y); z && membership(E, *z, 1e-7).member) cand.push_back(*z);
          }
      }
      for (const auto& c : cand) {
        const Vec w = lu.solve(monomials(c, exps));
        Eigen::Index q = 0;
        const double g = w.cwiseAbs().maxCoeff(&q);
        if (g > 1.0 + 1e-10 && std::isfinite(g)) {
          out.points[q] = c;
          A.col(q) = monomials(c, exps);
          lu.compute(A);
          logV += std::log(g);
          improved = true;
        }
      }
      out.history.push_back(logV);
      if (!improved) break;
    }
    logV = vandermonde(out.points).log_abs;
  }
  out.logV = logV;
  out.d_k = std::isfinite(logV) ? std::exp(logV / static_cast<double>(counts.l_k)) : 0.0;
  return out;
}

TransfiniteDiameter transfinite_diameter(const Region& E, int k_max, const FeketeBudget& budget) {
  if (k_max < 2) throw Error("transfinite_diameter: k_max must be >= 2");
  TransfiniteDiameter out;
  for (int k = 1; k <= k_max; ++k) {
    FeketeBudget b = budget;
    b.seed = mix64(budget.seed * 131 + static_cast<std::uint64_t>(k));
    out.configs.push_back(fekete_search(E, k, b));
    out.d_k.push_back(out.configs.back().d_k);
  }
  constexpr double kFloor = 1e-6;
  if (E.kind() == RegionKind::Finite) {
    // d_k = 0 as soon as m_k exceeds the number of distinct points
    const std::size_t N = dedupe(E.points()).size();
    int k0 = 0;
    while (monomial_counts(E.dimension(), k0).m_k <= static_cast<long long>(N)) ++k0;
    out.pluripolar = true;
    out.d = 0.0;
    out.uncertainty = 0.0;
    out.note = "finite set of " + std::to_string(N) + " points: d_k = 0 for k >= " + std::to_string(k0);
    return out;
  }
  if (out.d_k.back() < kFloor) {
    out.pluripolar = true;
    out.d = 0.0;
    out.uncertainty = out.d_k.back();
    out.note = "d_k vanishes: pluripolar (capacity zero)";
    return out;
  }
  // log d_k ~ log d + c1 log(k+1)/k + c2/k, least squares over k >= 2.
  auto fit = [&](int k_lo) -> std::optional<double> {
    const int rows = k_max - k_lo + 1;
    if (rows < 3) return std::nullopt;
    Eigen::MatrixXd X(rows, 3);
    Eigen::VectorXd y(rows);
    for (int k = k_lo; k <= k_max; ++k) {
      X(k - k_lo, 0) = 1.0;
      X(k - k_lo, 1) = std::log(k + 1.0) / k;
      X(k - k_lo, 2) = 1.0 / k;
      y(k - k_lo) = std::log(out.d_k[k - 1]);
    }
    return std::exp(X.colPivHouseholderQr().solve(y)(0));
  };
  const auto all = fit(2);
  if (!all) {
    out.d = out.d_k.back();
    out.uncertainty = std::abs(out.d_k.back() - out.d_k[out.d_k.size() - 2]);
    out.note = "too few degrees to extrapolate; last d_k reported";
    return out;
  }
  out.d = *all;
  double unc = 0.0;
  if (const auto drop = fit(3)) unc = std::max(unc, std::abs(*drop - *all));
  if (const auto drop = fit(4)) unc = std::max(unc, std::abs(*drop - *all));
  // the limit cannot be far beyond the monotone trend of the last values
  unc = std::max(unc, 0.1 * std::abs(out.d_k.back() - out.d));
  out.uncertainty = unc;
  out.note = "extrapolated from d_k, k = 2.." + std::to_string(k_max);
  return out;
}

// ---------------------------------------------------------------------------

namespace {

Point region_center(const Region& E) {
  const int n = E.dimension();
  switch (E.kind()) {
    case RegionKind::Ball:
    case RegionKind::Polydisk:
    case RegionKind::Sphere: return E.center();
    case RegionKind::Segment: {
      Point c(n);
      for (int i = 0; i < n; ++i) c[i] = 0.5 * (E.center()[i] + E.segment_end()[i]);
      return c;
    }
    case RegionKind::Finite: {
      Point c(n, 0.0);
      for (const auto& p : E.points())
        for (int i = 0; i < n; ++i) c[i] += p[i] / static_cast<double>(E.points().size());
      return c;
    }
    default: return Point(n, 0.0);
  }
}

/// sup over E of |z_i - c_i|; exact for the geometric kinds.
double coordinate_radius(const Region& E, int i, const Point& c, const SupNormBudget& budget) {
  switch (E.kind()) {
    case RegionKind::Ball:
    case RegionKind::Polydisk:
    case RegionKind::Sphere: return E.radius() + std::abs(E.center()[i] - c[i]);
    case RegionKind::Segment:
      return std::max(std::abs(E.center()[i] - c[i]), std::abs(E.segment_end()[i] - c[i]));
    case RegionKind::Finite: {
      double r = 0.0;
      for (const auto& p : E.points()) r = std::max(r, std::abs(p[i] - c[i]));
      return r;
    }
    case RegionKind::Union: {
      double r = 0.0;
      for (const auto& part : E.parts()) r = std::max(r, coordinate_radius(part, i, c, budget));
      return r;
    }
    default: {
      const int n = E.dimension();
      const Polynomial lin = Polynomial::variable(n, i) - Polynomial::constant(n, c[i]);
      return sup_norm(NormedPoly(lin, 1), E, budget, NormKind::Root).upper;
    }
  }
}

/// sup over E of |p|, exact on finite sets.
double sup_abs(const Polynomial& p, const Region& E, const SupNormBudget& budget) {
  if (p.is_zero()) return 0.0;
  const int k = std::max(1, p.degree());
  const auto r = sup_norm(NormedPoly(p, k), E, budget, NormKind::Root);
  return std::pow(r.upper, k);
}

/// Product of affine forms vanishing on the finite set E and nonzero at x
/// (any point off E when x is empty).
Polynomial vanishing_product(const Region& E, const Point& x) {
  const int n = E.dimension();
  Polynomial p = Polynomial::constant(n, 1.0);
  for (const auto& s : E.points()) {
    Point w(n, 0.0);
    if (!x.empty() && x != s) {
      for (int i = 0; i < n; ++i) w[i] = std::conj(x[i] - s[i]);
    } else {
      w[0] = 1.0;
    }
    Complex c0 = 0.0;
    for (int i = 0; i < n; ++i) c0 -= w[i] * s[i];
    p *= Polynomial::linear_form(w) + Polynomial::constant(n, c0);
  }
  return p;
}

double torus_max(const Polynomial& p, double R, int samples, std::uint64_t seed) {
  const int n = p.dimension();
  CounterRng rng(seed, 0x70905);
  double best = 0.0;
  for (int s = 0; s < samples; ++s) {
    Point z(n);
    for (int i = 0; i < n; ++i)
      z[i] = n == 1 ? std::polar(R, 2.0 * std::numbers::pi * s / samples)
                    : std::polar(R, 2.0 * std::numbers::pi * rng.uniform());
    best = std::max(best, std::abs(p.evaluate(z)));
  }
  return best;
}

/// Lagrange basis of a unisolvent configuration: row q of A^{-1} holds the
/// coefficients of l_q in the monomials alpha(1..m).
struct Lagrange {
  std::vector<Exponent> exps;
  Mat inv;  // A^{-1}
  bool ok = false;

  Polynomial basis(std::size_t q, int n) const {
    Polynomial p(n);
    for (std::size_t a = 0; a < exps.size(); ++a) p.set_coefficient(exps[a], inv(q, a));
    return p;
  }
  Vec values(const Point& z) const { return inv * monomials(z, exps); }
};

Lagrange lagrange_of(const FeketeConfig& cfg, int n) {
  Lagrange L;
  L.exps = first_exponents(n, cfg.points.size());
  if (!std::isfinite(cfg.logV)) return L;
  const Mat A = vandermonde_matrix(cfg.points, L.exps);
  L.inv = A.partialPivLu().inverse();
  L.ok = L.inv.allFinite();
  return L;
}

}  // namespace

CapacityEstimate capacity(const Region& E, int k_max, const std::vector<double>& R_list, const FeketeBudget& budget) {
  if (k_max < 1) throw Error("capacity: k_max must be >= 1");
  if (R_list.empty()) throw Error("capacity: empty R list");
  if (!E.is_compact()) throw Error("capacity: region must be compact");
  const int n = E.dimension();
  CapacityEstimate out;
  out.R_list = R_list;
  SupNormBudget sb;
  sb.seed = budget.seed;
  sb.window = budget.window;
  const Point c = region_center(E);
  std::vector<double> rho(n);
  for (int i = 0; i < n; ++i) rho[i] = coordinate_radius(E, i, c, sb);

  std::vector<FeketeConfig> fek;
  for (int k = 1; k <= k_max; ++k) {
    FeketeBudget b = budget;
    b.seed = mix64(budget.seed * 131 + static_cast<std::uint64_t>(k));
    fek.push_back(fekete_search(E, k, b));
  }
  const bool finite = E.kind() == RegionKind::Finite;
  const std::size_t npts = finite ? dedupe(E.points()).size() : 0;

  for (int k = 1; k <= k_max; ++k) {
    // witness polynomials and their sup on E
    struct Witness {
      Polynomial p;
      double sup_e;
      std::string name;
    };
    std::vector<Witness> ws;
    for (int i = 0; i < n; ++i) {
      const Polynomial lin = Polynomial::variable(n, i) - Polynomial::constant(n, c[i]);
      ws.push_back({power(lin, k), std::pow(rho[i], k), "monomial ladder"});
    }
    if (finite && static_cast<int>(npts) <= k) {
      const Region Ed = Region::finite(dedupe(E.points()));
      ws.push_back({vanishing_product(Ed, {}), 0.0, "interpolation product"});
    }
    if (n == 1 && k >= 2 && std::isfinite(fek[k - 2].logV)) {
      Polynomial p = Polynomial::constant(1, 1.0);
      for (const auto& s : fek[k - 2].points) p *= Polynomial::variable(1, 0) - Polynomial::constant(1, s[0]);
      ws.push_back({p, sup_abs(p, E, sb) * (1.0 + 1e-3), "Fekete polynomial"});
    }
    const Lagrange lag = lagrange_of(fek[k - 1], n);
    for (double R : R_list) {
      CapacityEntry e;
      e.k = k;
      e.R = R;
      for (const auto& w : ws) {
        const double top = torus_max(w.p, R, 512, budget.seed + k);
        double L;
        if (w.sup_e == 0.0) L = top > 0.0 ? kInf : 0.0;
        else L = std::pow(top / w.sup_e, 1.0 / k) / R;
        if (w.name == "monomial ladder") {
          // exact: max over the polydisk of |z_i - c_i| is R + |c_i|
          const int i = static_cast<int>(&w - ws.data());
          L = rho[i] == 0.0 ? kInf : (R + std::abs(c[i])) / (R * rho[i]);
        }
        if (L > e.L_lower) e.L_lower = L, e.witness = w.name;
      }
      if (lag.ok) {
        // |p|_{Delta_R} <= sum_q |l_q|_{Delta_R} for |p|_E <= 1
        CounterRng rng(budget.seed, 0x1eb + k);
        double lam = 0.0;
        for (int s = 0; s < 512; ++s) {
          Point z(n);
          for (int i = 0; i < n; ++i)
            z[i] = n == 1 ? std::polar(R, 2.0 * std::numbers::pi * s / 512.0)
                          : std::polar(R, 2.0 * std::numbers::pi * rng.uniform());
          lam = std::max(lam, lag.values(z).cwiseAbs().sum());
        }
        e.L_upper = std::pow(lam, 1.0 / k) / R;
      } else {
        e.L_upper = kInf;
      }
      out.entries.push_back(e);
    }
  }
  for (double R : R_list) {
    double lo = 0.0, hi = 0.0;
    for (const auto& e : out.entries)
      if (e.R == R) lo = std::max(lo, e.L_lower), hi = std::max(hi, e.L_upper);
    out.L_R_lower.push_back(lo);
    out.L_R_upper.push_back(hi);
  }
  for (int k = 1; k <= k_max; ++k) {
    double lo = 0.0;
    for (const auto& e : out.entries)
      if (e.k == k) lo = std::max(lo, e.L_lower);
    out.c_upper_by_k.push_back(lo > 0.0 ? 1.0 / lo : kInf);
  }
  // limsup over R: the largest R in the list
  const std::size_t last = static_cast<std::size_t>(std::max_element(R_list.begin(), R_list.end()) - R_list.begin());
  out.c_upper = out.L_R_lower[last] > 0.0 ? 1.0 / out.L_R_lower[last] : kInf;
  out.c_lower = std::isfinite(out.L_R_upper[last]) && out.L_R_upper[last] > 0.0 ? 1.0 / out.L_R_upper[last] : 0.0;
  out.c_lower = std::min(out.c_lower, out.c_upper);
  if (n == 1) {
    const auto td = transfinite_diameter(E, std::max(2, k_max), budget);
    out.d_cross = td.d;
  }
  out.note = "c_upper from explicit witnesses; c_lower from sampled Lebesgue sums over k <= " + std::to_string(k_max);
  return out;
}

double bernstein_ratio(const Region& E, const Polynomial& p, int d, const SupNormBudget& budget) {
  if (d < 1 || p.degree() > d) throw Error("bernstein_ratio: need 1 <= deg p <= d");
  if (p.is_zero()) return 0.0;
  const double se = sup_abs(p, E, budget);
  const double top = p.max_abs_coefficient();
  if (se == 0.0) return kInf;
  return std::pow(top / se, 1.0 / d);
}

BernsteinResult bernstein_constant(const Region& E, int d_max, int trials, const SupNormBudget& budget) {
  if (d_max < 1 || trials < 1) throw Error("bernstein_constant: need d_max >= 1 and trials >= 1");
  const int n = E.dimension();
  BernsteinResult out;
  CounterRng rng(budget.seed, 0xbe25);
  const std::vector<Point> anchors = sample(E, 64, budget.window, budget.seed + 1);
  for (int d = 1; d <= d_max; ++d) {
    double best = out.per_degree.empty() ? 0.0 : out.per_degree.back();
    for (int t = 0; t < trials; ++t) {
      Polynomial p(n);
      if (t % 2 == 0) {
        for (int e = 0; e <= d; ++e)
          for (const auto& a : exponents_of_degree(n, e)) p.set_coefficient(a, rng.complex_normal());
      } else {
        // products of affine forms through points of E
        p = Polynomial::constant(n, 1.0);
        for (int f = 0; f < d; ++f) {
          const Point& s = anchors[rng.uniform_int(0, static_cast<int>(anchors.size()) - 1)];
          const Point w = rng.unit_sphere(n);
          Complex c0 = 0.0;
          for (int i = 0; i < n; ++i) c0 -= w[i] * s[i];
          p *= Polynomial::linear_form(w) + Polynomial::constant(n, c0);
        }
      }
      SupNormBudget b = budget;
      b.seed = mix64(budget.seed + 1000 * d + t);
      const double r = bernstein_ratio(E, p, d, b);
      if (std::isinf(r)) out.infinite = true;
      best = std::max(best, r);
    }
    out.per_degree.push_back(best);
  }
  out.value = out.per_degree.back();
  if (out.infinite) out.note = "|p|_E = 0 for a nonzero polynomial: capacity zero";
  else if (d_max >= 3 && out.per_degree.back() > 1.5 * out.per_degree[out.per_degree.size() / 2])
    out.note = "ratio still growing with d: possible capacity zero";
  return out;
}

namespace {

struct Candidate {
  double value = 0.0;
  std::optional<NormedPoly> witness;
  std::string method;
  bool infinite = false;
};

void offer(Candidate& best, double v, NormedPoly w, const std::string& method, bool infinite = false) {
  if (std::isfinite(v) && v > best.value) best = {v, std::move(w), method, infinite};
}

double projective_root(const NormedPoly& h, const Point& x) { return root_value(h, x) / norm2(x); }

Candidate projective_extremal(const Region& E, const Point& x, int k, const SupNormBudget& sb) {
  const int n = E.dimension();
  Candidate best{1.0, std::nullopt, "constant", false};
  const Point u = canonical_projective(x);
  for (int i = 0; i < n; ++i) {
    // rho_i = sup over E of |x_i|/|x|
    const NormedPoly lin(Polynomial::variable(n, i), 1, true);
    const double rho = E.kind() == RegionKind::Finite
                           ? [&] {
                               double r = 0.0;
                               for (const auto& p : E.points()) r = std::max(r, normalized_value(lin, p));
                               return r;
                             }()
                           : sup_norm(lin, E, sb).upper;
    if (rho > 0.0) {
      const NormedPoly w(power(Polynomial::variable(n, i) * (1.0 / rho), k), k, true);
      offer(best, projective_root(w, u), w, "monomial ladder");
    } else if (std::abs(u[i]) > 0.0) {
      const double M = std::ldexp(1.0, k);
      const NormedPoly w(power(Polynomial::variable(n, i) * M, k), k, true);
      offer(best, projective_root(w, u), w, "monomial ladder", true);
    }
  }
  if (E.kind() == RegionKind::Finite && static_cast<int>(E.points().size()) <= k) {
    Polynomial h = Polynomial::constant(n, 1.0);
    bool on = false;
    for (const auto& s : E.points()) {
      Complex sx = 0.0;
      for (int j = 0; j < n; ++j) sx += std::conj(s[j]) * u[j];
      Point w(n);
      for (int j = 0; j < n; ++j) w[j] = std::conj(u[j] - sx * s[j]);
      if (norm2(w) < 1e-12) on = true;
      h *= Polynomial::linear_form(w);
    }
    if (!on) {
      const int deg = static_cast<int>(E.points().size());
      // pad to weight k with a factor that is nonzero at u
      h *= power(Polynomial::linear_form([&] {
                   Point c(n);
                   for (int j = 0; j < n; ++j) c[j] = std::conj(u[j]);
                   return c;
                 }()),
                 k - deg);
      const double M = std::ldexp(1.0, k);
      const NormedPoly w(h * std::pow(M, k), k, true);
      offer(best, projective_root(w, u), w, "interpolation product", true);
    }
  }
  return best;
}

}  // namespace

ExtremalEstimate extremal_lower(const Region& E, const Point& x, int k_max, const ExtremalBudget& budget) {
  if (k_max < 1) throw Error("extremal_lower: k_max must be >= 1");
  if (static_cast<int>(x.size()) != E.dimension()) throw Error("extremal_lower: dimension mismatch");
  const int n = E.dimension();
  ExtremalEstimate out;
  Candidate best{1.0, NormedPoly(Polynomial::constant(n, 1.0), 1), "constant", false};
  if (E.space() == Space::Projective) {
    best.witness = NormedPoly(power(Polynomial::linear_form([&] {
                                Point c = canonical_projective(x);
                                for (auto& v : c) v = std::conj(v);
                                return c;
                              }()), 1),
                              1, true);
    for (int k = 1; k <= k_max; ++k) {
      Candidate c = projective_extremal(E, x, k, budget.sup);
      if (c.value > best.value) best = c;
      out.by_k.push_back(best.value);
    }
    out.value = best.witness ? projective_root(*best.witness, canonical_projective(x)) : best.value;
    out.witness = best.witness;
    out.method = best.method;
    out.infinite = best.infinite;
    return out;
  }
  const Point c = region_center(E);
  std::vector<double> rho(n);
  for (int i = 0; i < n; ++i) rho[i] = coordinate_radius(E, i, c, budget.sup);
  const bool finite = E.kind() == RegionKind::Finite;
  const std::vector<Point> Ed = finite ? dedupe(E.points()) : std::vector<Point>{};
  const std::vector<Point> probe_set = finite ? Ed : sample(E, 400, budget.sup.window, budget.sup.seed + 7);
  CounterRng rng(budget.sup.seed, 0xe47e);

  for (int k = 1; k <= k_max; ++k) {
    const double M = std::ldexp(1.0, k);
    for (int i = 0; i < n; ++i) {
      const Polynomial lin = Polynomial::variable(n, i) - Polynomial::constant(n, c[i]);
      if (rho[i] > 0.0) {
        const NormedPoly w(power(lin * (1.0 / rho[i]), k), k);
        offer(best, root_value(w, x), w, "monomial ladder");
      } else if (std::abs(x[i] - c[i]) > 0.0) {
        const NormedPoly w(power(lin * M, k), k);
        offer(best, root_value(w, x), w, "monomial ladder", true);
      }
    }
    if (finite && static_cast<int>(Ed.size()) <= k) {
      const Polynomial prod = vanishing_product(Region::finite(Ed), x);
      if (std::abs(prod.evaluate(x)) > 0.0) {
        const NormedPoly w(prod * std::pow(M, k), k);
        offer(best, root_value(w, x), w, "interpolation product", true);
      }
    }
    if (budget.use_fekete && E.is_compact()) {
      FeketeBudget fb = budget.fekete;
      fb.seed = mix64(budget.fekete.seed * 131 + static_cast<std::uint64_t>(k));
      const FeketeConfig cfg = fekete_search(E, k, fb);
      const Lagrange lag = lagrange_of(cfg, n);
      if (lag.ok) {
        const Vec lx = lag.values(x);
        Vec coef(lx.size());
        for (Eigen::Index q = 0; q < lx.size(); ++q)
          coef(q) = std::abs(lx(q)) > 0.0 ? std::conj(lx(q)) / std::abs(lx(q)) : Complex(1.0);
        // coordinate ascent on the coefficients against the probe set
        std::vector<Vec> ls;
        for (const auto& s : probe_set) ls.push_back(lag.values(s));
        auto objective = [&](const Vec& cf) {
          double sup = 0.0;
          for (const auto& l : ls) sup = std::max(sup, std::abs((cf.transpose() * l)(0)));
          const double at = std::abs((cf.transpose() * lx)(0));
          return sup > 0.0 ? at / sup : 0.0;
        };
        double f = objective(coef);
        for (int step = 0; step < budget.ascent_steps; ++step) {
          const Eigen::Index q = rng.uniform_int(0, static_cast<int>(coef.size()) - 1);
          Vec trial = coef;
          trial(q) += 0.3 * std::pow(0.97, step) * rng.complex_normal();
          const double g = objective(trial);
          if (g > f) coef = trial, f = g;
        }
        Polynomial p(n);
        for (Eigen::Index q = 0; q < coef.size(); ++q) p += lag.basis(q, n) * coef(q);
        const double se = sup_abs(p, E, budget.sup) * (1.0 + 1e-3);
        if (se > 0.0) {
          const NormedPoly w(p * (1.0 / se), k);
          offer(best, root_value(w, x), w, "Fekete-Lagrange");
        }
      }
    }
    out.by_k.push_back(best.value);
  }
  out.witness = best.witness;
  out.value = best.witness ? root_value(*best.witness, x) : best.value;
  out.method = best.method;
  out.infinite = best.infinite;
  return out;
}

std::string to_string(HullVerdict v) {
  switch (v) {
    case HullVerdict::InsideHull: return "INSIDE_HULL";
    case HullVerdict::OutsideHull: return "OUTSIDE_HULL";
    case HullVerdict::Unresolved: return "UNRESOLVED";
  }
  return "?";
}

HullResult ghull_member(const Region& E, const Point& x, double phi_max, int k_max, const ExtremalBudget& budget) {
  if (k_max < 3) throw Error("ghull_member: k_max must be >= 3");
  HullResult out;
  const ExtremalEstimate est = extremal_lower(E, x, k_max, budget);
  out.by_k = est.by_k;
  const auto& b = out.by_k;
  const std::size_t K = b.size();
  const bool rising = b[K - 1] > b[K - 2] && b[K - 2] > b[K - 3];
  if (b.back() > phi_max && (rising || est.infinite)) {
    out.verdict = HullVerdict::OutsideHull;
    out.reason = "witness values exceed the threshold and keep growing in k";
    return out;
  }
  const double settled = b[K - 1 - (K - 1) / 3];
  if (b.back() <= phi_max && b.back() <= settled * 1.01) {
    out.verdict = HullVerdict::InsideHull;
    out.reason = "witness values saturate below the threshold";
    return out;
  }
  out.reason = "no saturation and no clear growth";
  return out;
}

}  // namespace convlab
