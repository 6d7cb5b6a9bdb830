#include "convlab/synthesis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>

#include "convlab/exact.hpp"
#include "convlab/parallel.hpp"
#include "convlab/rng.hpp"

namespace convlab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

Point sub(const Point& a, const Point& b) {
  Point d(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) d[i] = a[i] - b[i];
  return d;
}

double max_abs_coord(const Point& x) {
  double m = 0.0;
  for (const Complex& c : x) m = std::max(m, std::abs(c));
  return m;
}

/// Lower bound for |p| on the polydisk of radius delta around c, from the
/// Taylor coefficients of p at c.
double local_lower(const Polynomial& p, const Point& c, double delta) {
  const int n = p.dimension();
  std::map<Exponent, Complex, GradedLex> t;
  for (const auto& [alpha, a] : p.terms()) {
    // all beta <= alpha
    Exponent beta(n, 0);
    while (true) {
      Complex v = a;
      for (int i = 0; i < n; ++i) {
        v *= static_cast<double>(binomial(alpha[i], beta[i]));
        if (alpha[i] > beta[i]) v *= std::pow(c[i], alpha[i] - beta[i]);
      }
      t[beta] += v;
      int i = 0;
      while (i < n && beta[i] == alpha[i]) beta[i++] = 0;
      if (i == n) break;
      ++beta[i];
    }
  }
  double lower = 0.0;
  for (const auto& [beta, v] : t) {
    const int d = total_degree(beta);
    if (d == 0) lower += std::abs(v);
    else lower -= std::abs(v) * std::pow(delta, d);
  }
  return lower;
}

std::vector<Complex> univariate_coefficients(const Polynomial& p) {
  std::vector<Complex> c(std::max(0, p.degree()) + 1, 0.0);
  for (const auto& [a, v] : p.terms()) c[a[0]] = v;
  return c;
}

/// Zeros of a homogeneous binary form as canonical points of P^1.
std::vector<Point> binary_form_zeros(const Polynomial& p) {
  const Polynomial q = p.dehomogenize_first();
  std::vector<Point> out;
  if (q.degree() > 0)
    for (const Complex w : univariate_roots(univariate_coefficients(q))) out.push_back(canonical_projective({1.0, w}));
  if (q.degree() < p.degree()) out.push_back({0.0, 1.0});
  return out;
}

}  // namespace

// ---------------------------------------------------------------- TargetSet

Polynomial TargetSet::chain(int m) const {
  if (m < 1 || components.empty()) throw Error("target: block index out of range");
  Polynomial g = components[0];
  for (int i = 1; i < std::min(m, blocks()); ++i) g *= components[i];
  return g;
}

double TargetSet::distance(const Point& x) const {
  if (static_cast<int>(x.size()) != n) throw Error("target: dimension mismatch");
  const bool proj = space == Space::Projective;
  double best = kInf;
  for (const Point& p : points) best = std::min(best, proj ? projective_distance(p, x) : norm2(sub(p, x)));
  for (const Polynomial& c : components) {
    if (!proj && n == 1) {
      if (c.degree() < 1) continue;
      for (const Complex z : univariate_roots(univariate_coefficients(c))) best = std::min(best, std::abs(z - x[0]));
    } else if (proj && n == 2) {
      for (const Point& z : binary_form_zeros(c)) best = std::min(best, projective_distance(z, x));
    } else {
      const Region v = Region::variety({c}, space);
      if (auto q = v.project(x)) best = std::min(best, proj ? projective_distance(*q, x) : norm2(sub(*q, x)));
      else {
        // no Newton convergence: fall back to the Lipschitz radius
        const Point y = proj ? canonical_projective(x) : x;
        double lo = 0.0, hi = 4.0;
        for (int it = 0; it < 30; ++it) {
          const double mid = 0.5 * (lo + hi);
          (local_lower(c, y, mid) > 0.0 ? lo : hi) = mid;
        }
        best = std::min(best, lo);
      }
    }
  }
  return best;
}

bool TargetSet::contains(const Point& x, double tol) const {
  const bool proj = space == Space::Projective;
  const Point y = proj ? canonical_projective(x) : x;
  for (const Point& p : points)
    if ((proj ? projective_distance(p, y) : norm2(sub(p, y))) <= tol) return true;
  for (const Polynomial& c : components) {
    const double scale = std::pow(1.0 + norm2(y), std::max(0, c.degree()));
    if (c.evaluate_snapped(y) == 0.0 || std::abs(c.evaluate(y)) <= tol * scale) return true;
  }
  return false;
}

Region TargetSet::region() const {
  std::vector<Region> parts;
  if (!points.empty()) parts.push_back(Region::finite(points, space));
  for (const Polynomial& c : components) parts.push_back(Region::variety({c}, space));
  if (parts.empty()) throw Error("target: empty");
  return parts.size() == 1 ? parts[0] : Region::union_of(parts);
}

namespace {

/// Certified: no point of the target within delta of x.
bool far_from(const TargetSet& t, const Point& x, double delta) {
  const bool proj = t.space == Space::Projective;
  if ((!proj && t.n == 1) || (proj && t.n == 2)) return t.distance(x) >= delta;
  const Point y = proj ? canonical_projective(x) : x;
  for (const Point& p : t.points)
    if ((proj ? projective_distance(p, y) : norm2(sub(p, y))) < delta) return false;
  for (const Polynomial& c : t.components)
    if (!(local_lower(c, y, delta) > 0.0)) return false;
  return true;
}

bool in_tail(const TargetSet& t, const Point& x, double pad = 0.0) {
  if (!t.tail) return false;
  const Region& r = *t.tail;
  if (pad > 0.0 && (r.kind() == RegionKind::Ball || r.kind() == RegionKind::Polydisk)) {
    if (r.kind() == RegionKind::Ball) return norm2(sub(x, r.center())) <= r.radius() + pad;
    return max_abs_coord(sub(x, r.center())) <= r.radius() + pad;
  }
  return membership(r, x).member;
}

}  // namespace

// -------------------------------------------------------------- BetaWitness

double BetaWitness::log_value(const Point& x) const {
  const int v = p.weight();
  const double lp = p.poly().log_abs(x);
  double l = (a * lp + v * (b - a) * std::log(static_cast<double>(m))) / q();
  if (u) {
    Complex dot = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) dot += x[i] * (*u)[i];
    l += static_cast<double>(v * (b - a)) * std::log(std::abs(dot)) / q();
    l -= std::log(norm2(x));
  }
  return l;
}

double BetaWitness::value(const Point& x) const { return std::exp(log_value(x)); }

Polynomial BetaWitness::expand() const {
  const int v = p.weight();
  Polynomial h = power(p.poly(), a);
  if (u) {
    Point coeffs(u->size());
    for (std::size_t i = 0; i < u->size(); ++i) coeffs[i] = static_cast<double>(m) * (*u)[i];
    h *= power(Polynomial::linear_form(coeffs), v * (b - a));
  } else {
    h = h * std::pow(static_cast<double>(m), v * (b - a));
  }
  return h;
}

TermRule BetaWitness::rule(int e) const {
  const int v = p.weight();
  TermRule r;
  r.factors.push_back({p.poly(), 0, a * e, std::nullopt});
  if (u) {
    Point coeffs(u->size());
    for (std::size_t i = 0; i < u->size(); ++i) coeffs[i] = static_cast<double>(m) * (*u)[i];
    r.factors.push_back({Polynomial::linear_form(coeffs), 0, v * (b - a) * e, std::nullopt});
  } else {
    r.scale.form = "m_pow";
    r.scale.m = m;
    r.scale.a = 0;
    r.scale.b = v * (b - a) * e;
  }
  r.exp_a = 0;
  r.exp_b = q() * e;
  r.k_start = 0;
  r.k_end = 0;
  return r;
}

std::pair<int, int> choose_beta(double r, int m, double sample_norm, int b_max) {
  if (m < 1) throw Error("choose_beta: m must be >= 1");
  if (b_max < 2) throw Error("choose_beta: b_max must be >= 2");
  std::pair<int, int> best{0, 0};
  double best_beta = 0.0;
  const double lm = std::log(static_cast<double>(m));
  const double lr = r > 0.0 ? std::log(r) : -kInf;
  for (int b = 2; b <= b_max; ++b)
    for (int a = b - 1; a >= 1; --a) {
      const double beta = static_cast<double>(a) / b;
      if (beta <= best_beta) break;
      if (std::gcd(a, b) != 1) continue;
      if (!(beta * (lr - lm) > -std::log(2.0) + 1e-9)) continue;
      if (sample_norm > 0.0 && !(std::log(sample_norm) < -lm / beta)) continue;
      best = {a, b};
      best_beta = beta;
      break;
    }
  return best;
}

BetaWitness beta_construct(const NormedPoly& p, int m, double r, const Point& y, const std::vector<Point>& e_samples,
                           int b_max, std::optional<double> p_norm) {
  if (m < 1) throw Error("beta_construct: m must be >= 1");
  if (p.poly().is_zero()) throw Error("beta_construct: p = 0");
  const bool proj = p.homogeneous();
  const double pn = p_norm ? *p_norm : sup_norm(p).upper;
  if (pn > 1.0 + 1e-12) throw Error("beta_construct: ||(p,v)|| exceeds 1");
  const double at_y = proj ? normalized_value(p, y) : root_value(p, y);
  if (at_y < r) throw Error("beta_construct: value at y is below r");
  double sn = 0.0;
  for (const Point& x : e_samples) {
    if (p.poly().evaluate_snapped(x) == 0.0) continue;
    sn = std::max(sn, proj ? normalized_value(p, x) : root_value(p, x));
  }
  const auto [a, b] = choose_beta(r, m, sn, b_max);
  if (a == 0) throw Error("beta_construct: no feasible beta (r too small relative to m)");
  BetaWitness w{p, a, b, m, y, std::nullopt, r, pn, sn};
  if (proj) {
    const double ny = norm2(y);
    Point u(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) u[i] = std::conj(y[i]) / ny;
    w.u = u;
  }
  return w;
}

WitnessCheck recheck_witness(const BetaWitness& w, const TargetSet& target, std::uint64_t seed, double tol) {
  WitnessCheck out;
  const bool proj = w.u.has_value();
  const double m = w.m;
  // (i) on fresh samples of E_m (intersected with B_m, or K_m when projective)
  const Polynomial g = target.chain(w.m);
  CounterRng rng(seed, 0x1c1);
  std::vector<Point> pts;
  if (!proj && target.n == 1) {
    for (const Complex z : univariate_roots(univariate_coefficients(g)))
      if (std::abs(z) <= m) pts.push_back({z});
  } else {
    const Region v = Region::variety({g}, target.space);
    for (const Point& x : sample(v, 200, {m}, rng.next_u64())) {
      if (proj && !ProjCover{target.n, m}.contains(x)) continue;
      if (!proj && norm2(x) > m) continue;
      pts.push_back(x);
    }
  }
  for (const Point& x : pts) {
    if (w.p.poly().evaluate_snapped(x) == 0.0) continue;
    out.clause_i = std::max(out.clause_i, w.value(x));
  }
  // (ii) global samples over many scales
  for (int i = 0; i < 4000; ++i) {
    const double rad = proj ? 1.0 : std::exp(rng.uniform(std::log(1e-3), std::log(1e4)));
    const Point x = rng.ball(target.n, rad);
    if (norm2(x) == 0.0) continue;
    double val = w.value(x);
    if (!proj) val /= std::sqrt(1.0 + norm2(x) * norm2(x));
    out.clause_ii = std::max(out.clause_ii, val);
  }
  out.clause_iii = w.value(w.y);
  out.ok = out.clause_i <= 1.0 + tol && out.clause_ii <= m * (1.0 + tol) && out.clause_iii > m / 2.0 * (1.0 - tol);
  return out;
}

// ------------------------------------------------------------------ reports

std::string to_string(Exactness e) { return e == Exactness::Exact ? "EXACT" : "WINDOWED"; }

std::size_t SynthesisReport::inconsistent() const {
  return static_cast<std::size_t>(
      std::count_if(verdicts.begin(), verdicts.end(), [](const ProbeResult& r) { return !r.consistent; }));
}

std::size_t SynthesisReport::indeterminate() const {
  return static_cast<std::size_t>(std::count_if(verdicts.begin(), verdicts.end(), [](const ProbeResult& r) {
    return r.verdict.kind == Verdict::Indeterminate;
  }));
}

std::vector<Probe> make_probes(const TargetSet& target, const ProbePlan& plan) {
  const bool proj = target.space == Space::Projective;
  CounterRng rng(plan.seed, 0x9be);
  std::vector<Probe> out;
  if (plan.on_target > 0) {
    std::vector<Point> on = target.points;
    if (!target.components.empty()) {
      const std::size_t per = (plan.on_target + target.blocks() - 1) / target.blocks();
      for (int i = 0; i < target.blocks(); ++i) {
        const Region v = Region::variety({target.components[i]}, target.space);
        for (Point& x : sample(v, per, {plan.window}, rng.next_u64())) on.push_back(std::move(x));
      }
    }
    std::vector<Point> kept;
    for (Point& x : on)
      if (!in_tail(target, x)) kept.push_back(std::move(x));
    if (kept.empty()) throw Error("make_probes: no target points outside the tail region");
    for (std::size_t i = 0; i < plan.on_target; ++i) out.push_back({kept[i % kept.size()], true});
  }
  std::size_t got = 0, attempts = 0;
  while (got < plan.off_target) {
    if (++attempts > 1000 * plan.off_target + 1000) throw Error("make_probes: could not place off-target probes");
    Point x(target.n);
    if (proj) {
      x = rng.unit_sphere(target.n);
    } else {
      for (auto& c : x) c = Complex(rng.uniform(-plan.window, plan.window), rng.uniform(-plan.window, plan.window));
    }
    if (in_tail(target, x)) continue;
    if (!far_from(target, x, plan.min_distance)) continue;
    out.push_back({x, false});
    ++got;
  }
  return out;
}

SynthesisReport verify(const SeriesSpec& spec, const TargetSet& target, const std::vector<Probe>& probes, long horizon,
                       const ClassifierConfig& cfg) {
  if (spec.n != target.n || spec.space != target.space) throw Error("verify: spec and target disagree on the space");
  SynthesisReport rep;
  rep.spec = spec;
  rep.horizon = horizon;
  rep.classifier = cfg;
  rep.class_ok = spec.space == Space::Projective || check_class(spec, 1, 0, horizon);
  rep.verdicts.resize(probes.size());
  const bool proj = spec.space == Space::Projective;
  const double tail = cfg.tail_frac > 0.0 ? cfg.tail_frac : 0.5;
  parallel_for(probes.size(), [&](std::size_t i) {
    ProbeResult& pr = rep.verdicts[i];
    pr.x = probes[i].x;
    pr.on_target = probes[i].on_target;
    pr.distance = target.distance(pr.x);
    const CoefficientStream s =
        proj ? restrict_projective(spec, pr.x, horizon) : restrict_affine(spec, pr.x, horizon);
    const double unit = proj ? norm2(pr.x) : 1.0;
    pr.verdict = classify(s, cfg);
    double head = 0.0, all = 0.0, last = 0.0;
    const long D = horizon;
    for (long j = 1; j <= D; ++j) {
      const double r = s.r(j) / unit;
      all = std::max(all, r);
      if (4 * j <= D) head = std::max(head, r);
      if (static_cast<double>(j) > D * (1.0 - tail)) last = std::max(last, r);
    }
    const double base = proj ? 0.0 : norm2(pr.x);
    // r_j = m exactly can round up by an ulp
    const double shave = 1.0 - 1e-12;
    pr.level_half = static_cast<int>(std::ceil(std::max({base, head, 1e-300}) * shave));
    pr.level = static_cast<int>(std::ceil(std::max({base, all, 1e-300}) * shave));
    pr.escapes = last > head * (1.0 + 1e-12);
    if (pr.on_target) pr.consistent = pr.verdict.kind == Verdict::Converges && !pr.escapes;
    else pr.consistent = pr.verdict.kind == Verdict::Diverges && pr.escapes;
  });
  return rep;
}

// ------------------------------------------------------------------ variety

ClassifierConfig variety_classifier(int degree) {
  ClassifierConfig c;
  c.lo_frac = 0.5;
  c.slope_min = 0.5 / degree;
  c.slope_conv = 0.1 / degree;
  return c;
}

namespace {

ClassifierConfig joint_classifier(double expected_slope) {
  ClassifierConfig c;
  c.lo_frac = 0.5;
  c.slope_min = 0.5 * expected_slope;
  c.slope_conv = 0.1 * expected_slope;
  return c;
}

}  // namespace

SynthesisReport synth_variety(const Polynomial& p, long horizon) {
  const int d = p.degree();
  if (d < 1) throw Error("synth_variety: p is constant");
  SeriesSpec spec;
  spec.n = p.dimension();
  spec.tag = ClassTag{1, 0};
  TermRule r;
  r.factors.push_back({p, 1, 0, std::nullopt});
  r.scale.form = "k^k";
  r.scale.c = 1.0;
  r.exp_a = d;
  r.exp_b = 0;
  r.k_start = 1;
  spec.rules.push_back(r);

  TargetSet target;
  target.n = p.dimension();
  target.components = {p};
  const ProbePlan plan;
  SynthesisReport rep = verify(spec, target, make_probes(target, plan), horizon, variety_classifier(d));
  rep.mode = "variety";
  rep.exactness = Exactness::Exact;
  rep.certified_window = {plan.window, plan.min_distance, std::nullopt, 0, 0};
  // joint coefficients of (k p)^k t^{kd} sit at total degree kd..2kd
  rep.joint = hartogs_joint_check(spec, horizon, joint_classifier(0.5 / d));
  return rep;
}

// -------------------------------------------------------------- enumeration

namespace {

std::vector<Rational> rationals_of_height(int L) {
  std::vector<Rational> out{Rational(0)};
  for (int b = 1; b <= L; ++b)
    for (int a = 1; a <= L; ++a)
      if (std::gcd(a, b) == 1) {
        out.push_back(Rational(a, b));
        out.push_back(Rational(-a, b));
      }
  std::sort(out.begin(), out.end(), [](const Rational& x, const Rational& y) {
    const auto hx = height(x), hy = height(y);
    if (hx != hy) return hx < hy;
    if (abs(x) != abs(y)) return abs(x) < abs(y);
    return x > y;
  });
  return out;
}

}  // namespace

ClassifierConfig enumeration_classifier() {
  ClassifierConfig c;
  c.lo_frac = 0.0;
  c.slope_min = 0.05;
  c.slope_conv = 0.01;
  return c;
}

SynthesisReport synth_enumeration(const TargetSet& K, const EnumerationConfig& cfg) {
  if (K.space != Space::Affine || K.points.empty() || !K.components.empty())
    throw Error("synth_enumeration: K must be a finite affine point set");
  if (cfg.height < 1 || cfg.max_degree < 1) throw Error("synth_enumeration: height and degree must be >= 1");
  const int n = K.n;
  std::vector<RationalPoint> kp;
  for (const Point& x : K.points) kp.push_back(to_rational_point(x));
  const std::vector<Exponent> mons = first_exponents(n, static_cast<std::size_t>(binomial(n + cfg.max_degree, n)));
  const std::size_t M = mons.size();
  const std::vector<Rational> values = rationals_of_height(cfg.height);
  std::vector<int> hv;
  for (const Rational& q : values) hv.push_back(height(q).convert_to<int>());

  // Powers of the K points per monomial, exactly.
  std::vector<std::vector<ComplexRational>> monval(kp.size(), std::vector<ComplexRational>(M));
  for (std::size_t i = 0; i < kp.size(); ++i)
    for (std::size_t j = 0; j < M; ++j) {
      ComplexRational v{1, 0};
      for (int c = 0; c < n; ++c)
        for (int e = 0; e < mons[j][c]; ++e) v = v * kp[i][c];
      monval[i][j] = v;
    }

  struct Member {
    std::vector<int> idx;  // value index per monomial
    int k;
    int level;
  };
  std::vector<std::vector<Member>> by_level(cfg.height + 1);
  long total = 0;
  std::vector<int> idx(M, 0);
  const int V = static_cast<int>(values.size());
  while (true) {
    int level = 0, deg = -1;
    for (std::size_t j = 0; j < M; ++j)
      if (idx[j] != 0) {
        level = std::max(level, hv[idx[j]]);
        deg = std::max(deg, total_degree(mons[j]));
      }
    if (deg >= 0) {
      bool ok = true;
      for (std::size_t i = 0; i < kp.size() && ok; ++i) {
        ComplexRational s{0, 0};
        for (std::size_t j = 0; j < M; ++j)
          if (idx[j] != 0) s = s + ComplexRational{values[idx[j]], 0} * monval[i][j];
        ok = s.norm() <= 1;
      }
      if (ok)
        for (int k = std::max(1, deg); k <= cfg.max_degree; ++k) {
          by_level[level].push_back({idx, k, level});
          if (++total > cfg.max_terms)
            throw Error("synth_enumeration: budget exhausted after " + std::to_string(total) + " members");
        }
    }
    std::size_t j = 0;
    while (j < M && ++idx[j] == V) idx[j++] = 0;
    if (j == M) break;
  }

  // Pack level L into exponents (S(L-1), S L]; r_j k_j strictly increasing.
  long S = 2;
  for (const auto& lv : by_level) S = std::max<long>(S, 2 * static_cast<long>(lv.size()) + 2);
  SeriesSpec spec;
  spec.n = n;
  spec.tag = ClassTag{1, 0};
  for (int L = 1; L <= cfg.height; ++L) {
    long e = S * (L - 1);
    for (const Member& mb : by_level[L]) {
      e = (e / mb.k + 1) * mb.k;
      RationalPolynomial rp(n);
      for (std::size_t j = 0; j < M; ++j)
        if (mb.idx[j] != 0) rp.set_coefficient(mons[j], {values[mb.idx[j]], 0});
      TermRule r;
      r.factors.push_back({rp.to_polynomial(), 0, static_cast<int>(e / mb.k), rp});
      r.exp_a = 0;
      r.exp_b = static_cast<int>(e);
      r.k_start = 0;
      r.k_end = 0;
      spec.rules.push_back(std::move(r));
    }
  }
  const long D = S * cfg.height;

  std::vector<Probe> probes;
  for (const Point& x : K.points) probes.push_back({x, true});
  if (n == 1)
    for (int i = 0; i < cfg.grid; ++i)
      for (int j = 0; j < cfg.grid; ++j) {
        const double step = 2.0 * cfg.window / (cfg.grid - 1);
        const Point x{Complex(-cfg.window + i * step, -cfg.window + j * step)};
        if (K.distance(x) >= cfg.min_distance) probes.push_back({x, false});
      }
  SynthesisReport rep = verify(spec, K, probes, D, enumeration_classifier());
  rep.mode = "enumeration";
  rep.notes.push_back("members: " + std::to_string(total) + ", levels: " + std::to_string(cfg.height) +
                      ", stride: " + std::to_string(S));
  return rep;
}

// -------------------------------------------------------------------- block

namespace {

struct Cell {
  Point center;
  bool active = true;  // inside the certified window
};

struct BlockResult {
  std::vector<BetaWitness> witnesses;
  std::vector<char> covered;  // per cell
};

/// Grid of cells: polydisk |s_i| <= W in C^n, or the two charts of P^1.
std::vector<Cell> make_cells(const TargetSet& t, const BlockConfig& cfg, double& h) {
  std::vector<Cell> cells;
  if (t.space == Space::Projective) {
    if (t.n != 2) throw Error("synth_projective: only P^1 targets are supported");
    h = cfg.epsilon;
    const int g = static_cast<int>(std::ceil(2.0 / h));
    h = 2.0 / g;
    for (int chart = 0; chart < 2; ++chart)
      for (int i = 0; i < g; ++i)
        for (int j = 0; j < g; ++j) {
          const Complex w(-1.0 + (i + 0.5) * h, -1.0 + (j + 0.5) * h);
          if (chart == 1 && std::abs(w) >= 1.0 - 0.75 * h) continue;  // seam handled by chart 0
          cells.push_back({chart == 0 ? Point{1.0, w} : Point{w, 1.0}});
        }
    return cells;
  }
  const int dims = 2 * t.n;
  int g = static_cast<int>(std::ceil(2.0 * cfg.window / cfg.epsilon));
  while (std::pow(static_cast<double>(g), dims) > static_cast<double>(cfg.max_cells)) --g;
  if (g < 2) throw Error("synth_block: cell budget too small");
  h = 2.0 * cfg.window / g;
  std::vector<int> ix(dims, 0);
  while (true) {
    Point c(t.n);
    for (int i = 0; i < t.n; ++i)
      c[i] = Complex(-cfg.window + (ix[2 * i] + 0.5) * h, -cfg.window + (ix[2 * i + 1] + 0.5) * h);
    cells.push_back({c});
    int k = 0;
    while (k < dims && ++ix[k] == g) ix[k++] = 0;
    if (k == dims) break;
  }
  return cells;
}

BlockResult build_block(const TargetSet& t, const BlockConfig& cfg, int m, const std::vector<Cell>& cells, double h) {
  const bool proj = t.space == Space::Projective;
  const Polynomial g = t.chain(m);
  const int v = g.degree();
  if (v < 1) throw Error("synth_block: g_m is constant");
  SupNormBudget sb;
  sb.seed = cfg.seed + static_cast<std::uint64_t>(m);
  const double S = 1.1 * sup_norm(NormedPoly(g, v, proj), sb).upper;
  const NormedPoly p(g * std::pow(S, -v), v, proj);
  const double p_norm = 1.0 / 1.1;

  std::vector<Point> e_samples;
  if (!proj && t.n == 1) {
    for (const Complex z : univariate_roots(univariate_coefficients(g)))
      if (std::abs(z) <= m) e_samples.push_back({z});
  } else {
    const Region var = Region::variety({g}, t.space);
    for (const Point& x : sample(var, 400, {static_cast<double>(m)}, sb.seed)) {
      if (proj ? !ProjCover{t.n, static_cast<double>(m)}.contains(x) : norm2(x) > m) continue;
      e_samples.push_back(x);
    }
  }

  // Per cell: lower bounds for |p|^{1/v}, |<x,u>| pieces and |x| upper bound.
  const double rad = h / std::sqrt(2.0);  // polydisk radius containing a cell
  std::vector<double> lroot(cells.size(), 0.0);
  std::vector<char> need(cells.size(), 0);
  const TargetSet Em{t.space, t.n,
                     std::vector<Polynomial>(t.components.begin(), t.components.begin() + std::min(m, t.blocks())), {},
                     {}};
  for (std::size_t c = 0; c < cells.size(); ++c) {
    if (!far_from(Em, cells[c].center, cfg.epsilon)) continue;
    need[c] = 1;
    const double lo = local_lower(p.poly(), cells[c].center, rad);
    lroot[c] = lo > 0.0 ? std::pow(lo, 1.0 / v) : 0.0;
  }

  BlockResult out;
  out.covered.assign(cells.size(), 0);
  std::vector<double> far(cells.size(), kInf);
  std::vector<char> dropped(cells.size(), 0);
  auto open = [&](std::size_t c) { return need[c] && !out.covered[c] && !dropped[c]; };
  const double half = m / 2.0;
  while (true) {
    std::size_t pick = cells.size();
    double best = -1.0;
    for (std::size_t c = 0; c < cells.size(); ++c)
      if (open(c) && far[c] > best) best = far[c], pick = c;
    if (pick == cells.size()) break;
    if (out.witnesses.size() >= cfg.max_witnesses) {
      for (std::size_t c = 0; c < cells.size(); ++c)
        if (open(c)) dropped[c] = 1;
      break;
    }
    const Point y = cells[pick].center;
    // projective: a smaller r buys a smaller beta and a wider cap around y
    const double r = proj ? 0.5 * normalized_value(p, y) : root_value(p, y);
    const auto [a, b] = choose_beta(r, m, 0.0, cfg.b_max);
    if (a == 0) {
      dropped[pick] = 1;
      continue;
    }
    BetaWitness w = beta_construct(p, m, r, y, e_samples, cfg.b_max, p_norm);
    const double beta = w.beta();
    for (std::size_t c = 0; c < cells.size(); ++c) {
      if (!open(c)) continue;
      double lower;
      if (!proj) {
        lower = std::pow(lroot[c], beta) * std::pow(static_cast<double>(m), 1.0 - beta);
      } else {
        const Point& x = cells[c].center;
        Complex dot = 0.0;
        for (int i = 0; i < t.n; ++i) dot += x[i] * (*w.u)[i];
        const double lin = std::max(0.0, std::abs(dot) - rad);
        lower = std::pow(lroot[c], beta) * std::pow(m * lin, 1.0 - beta) / (norm2(x) + rad);
      }
      if (lower > half) out.covered[c] = 1;
    }
    if (!out.covered[pick]) dropped[pick] = 1;
    for (std::size_t c = 0; c < cells.size(); ++c) {
      const double d = proj ? projective_distance(cells[c].center, y) : norm2(sub(cells[c].center, y));
      far[c] = std::min(far[c], d);
    }
    out.witnesses.push_back(std::move(w));
  }
  for (std::size_t c = 0; c < cells.size(); ++c)
    if (!need[c]) out.covered[c] = 2;  // not required in this block
  return out;
}

ClassifierConfig block_classifier(int m_max) {
  ClassifierConfig c;
  c.lo_frac = 0.0;
  c.slope_min = 0.25;
  c.slope_conv = 0.1;
  c.tail_frac = 1.0 / (2.0 * m_max);
  c.j_min = 8;
  return c;
}

SynthesisReport block_synth(const TargetSet& t, const BlockConfig& cfg) {
  const bool proj = t.space == Space::Projective;
  if (t.components.empty()) throw Error("synthesize: target has no components");
  for (const Polynomial& c : t.components) {
    if (c.dimension() != t.n) throw Error("synthesize: component dimension mismatch");
    if (proj && !c.is_homogeneous()) throw Error("synth_projective: components must be homogeneous");
  }
  const int m_max = cfg.m_max;
  if (m_max < 2) throw Error("synthesize: m_max must be >= 2");
  double h = 0.0;
  std::vector<Cell> cells = make_cells(t, cfg, h);
  const double pad = 0.5 * h;

  std::vector<BlockResult> blocks(m_max);
  parallel_for(static_cast<std::size_t>(m_max), [&](std::size_t i) {
    blocks[i] = build_block(t, cfg, static_cast<int>(i) + 1, cells, h);
  });

  // Certified cells: away from E_{m_max}, outside the tail, covered in every block.
  const TargetSet Emax{t.space, t.n,
                       std::vector<Polynomial>(t.components.begin(), t.components.begin() + std::min(m_max, t.blocks())),
                       {}, {}};
  std::size_t active = 0, uncovered = 0;
  for (std::size_t c = 0; c < cells.size(); ++c) {
    Cell& cell = cells[c];
    if (!far_from(Emax, cell.center, cfg.epsilon) || in_tail(t, cell.center, pad * std::sqrt(2.0 * t.n))) {
      cell.active = false;
      continue;
    }
    for (const BlockResult& b : blocks)
      if (!b.covered[c]) cell.active = false;
    if (cell.active) ++active;
    else ++uncovered;
  }

  // Exponent layout: block m occupies (S(m-1), S m], filled from the top.
  long sum_max = 0, q_max = 0;
  for (const BlockResult& b : blocks) {
    long s = 0;
    for (const BetaWitness& w : b.witnesses) s += w.q(), q_max = std::max<long>(q_max, w.q());
    sum_max = std::max(sum_max, s);
  }
  const long S = std::max(sum_max, 2 * q_max) + 1;
  SeriesSpec spec;
  spec.n = t.n;
  spec.space = t.space;
  if (!proj) spec.tag = ClassTag{1, 0};
  SynthesisReport rep;
  for (int m = 1; m <= m_max; ++m) {
    const auto& ws = blocks[m - 1].witnesses;
    std::vector<TermRule> rules(ws.size());
    long e = S * m + 1;
    for (std::size_t k = ws.size(); k-- > 0;) {
      const long q = ws[k].q();
      e = ((e - 1) / q) * q;
      if (e <= S * (m - 1)) throw Error("synthesize: exponent layout overflow");
      rules[k] = ws[k].rule(static_cast<int>(e / q));
    }
    for (auto& r : rules) spec.rules.push_back(std::move(r));
    for (const auto& w : ws) rep.witnesses.push_back(w);
  }
  const long D = S * m_max;

  // Probes: the truncated target and points of certified cells.
  ProbePlan plan;
  plan.window = cfg.window;
  plan.min_distance = cfg.epsilon;
  plan.seed = cfg.seed;
  plan.off_target = 0;
  TargetSet on = Emax;
  on.tail = t.tail;
  std::vector<Probe> probes = make_probes(on, plan);
  CounterRng rng(cfg.seed, 0x0ff);
  std::vector<std::size_t> act;
  for (std::size_t c = 0; c < cells.size(); ++c)
    if (cells[c].active) act.push_back(c);
  for (std::size_t i = 0; i < 150 && !act.empty(); ++i) {
    const Cell& cell = cells[act[rng.next_u64() % act.size()]];
    Point x = cell.center;
    const std::size_t k = proj ? (std::abs(x[0]) == 1.0 ? 1 : 0) : 0;
    for (std::size_t j = k; j < (proj ? k + 1 : x.size()); ++j)
      x[j] += Complex(rng.uniform(-pad, pad), rng.uniform(-pad, pad));
    if (!far_from(Emax, x, cfg.epsilon)) continue;
    probes.push_back({x, false});
  }

  ClassifierConfig cc = block_classifier(m_max);
  SynthesisReport v = verify(spec, Emax, probes, D, cc);
  v.witnesses = std::move(rep.witnesses);
  v.mode = proj ? "projective" : "block";
  v.exactness = Exactness::Windowed;
  v.certified_window = {proj ? 1.0 : cfg.window, cfg.epsilon, t.tail, active, uncovered};
  v.notes.push_back("cells: " + std::to_string(cells.size()) + ", certified: " + std::to_string(active) +
                    ", stride: " + std::to_string(S));
  if (proj) {
    // K_m is non-occupying: some hyperplane misses it
    for (int m = 1; m <= m_max; ++m) {
      const AvoidingHyperplane hp =
          find_avoiding_hyperplane(ProjCover{t.n, static_cast<double>(m)}, 0.5, std::nullopt, 2000, cfg.seed + m);
      v.notes.push_back("K_" + std::to_string(m) + " avoided by a hyperplane at distance " + std::to_string(hp.delta));
    }
  }
  if (active > 0) v.joint = hartogs_joint_check(spec, D, joint_classifier(0.5));
  return v;
}

}  // namespace

SynthesisReport synth_block(const TargetSet& target, const BlockConfig& cfg) {
  if (target.space != Space::Affine) throw Error("synth_block: affine target expected");
  return block_synth(target, cfg);
}

SynthesisReport synth_projective(const TargetSet& target, const BlockConfig& cfg) {
  if (target.space != Space::Projective) throw Error("synth_projective: projective target expected");
  return block_synth(target, cfg);
}

}  // namespace convlab
