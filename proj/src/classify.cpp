#include <algorithm>
#include <cmath>

#include "convlab/rng.hpp"
#include "convlab/series.hpp"

namespace convlab {

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Converges: return "CONVERGES";
    case Verdict::Diverges: return "DIVERGES";
    case Verdict::Indeterminate: return "INDETERMINATE";
  }
  return "?";
}

ConvergenceVerdict classify(const CoefficientStream& s, const ClassifierConfig& cfg) {
  if (s.size() == 0) throw Error("classify: empty coefficient stream");
  const long D = static_cast<long>(s.size()) - 1;
  if (D < cfg.j_min) throw Error("classify: window too small (D = " + std::to_string(D) + ")");
  ConvergenceVerdict v;
  v.j_min = std::max<long>(1, static_cast<long>(std::ceil(cfg.lo_frac * static_cast<double>(D))));
  v.j_max = D;

  long last = -1;
  for (long j = D; j >= 1; --j)
    if (!s.c[j].is_zero()) {
      last = j;
      break;
    }
  std::vector<double> lj, lr;
  double max_lr = -std::numeric_limits<double>::infinity();
  for (long j = v.j_min; j <= D; ++j) {
    if (s.c[j].is_zero()) continue;
    const double l = s.c[j].log_abs / static_cast<double>(j);
    lj.push_back(std::log(static_cast<double>(j)));
    lr.push_back(l);
    max_lr = std::max(max_lr, l);
  }
  v.nonzero = lj.size();
  if (lj.empty()) {
    v.kind = Verdict::Converges;
    v.margin = cfg.slope_conv;
    v.reason = "no nonzero coefficients in window";
    return v;
  }
  v.growth_estimate = std::exp(max_lr);
  if (cfg.tail_frac > 0.0 && static_cast<double>(last) < static_cast<double>(D) * (1.0 - cfg.tail_frac)) {
    v.kind = Verdict::Converges;
    v.margin = cfg.slope_conv;
    v.reason = "coefficients vanish beyond j = " + std::to_string(last);
    return v;
  }
  if (lj.size() < 3) {
    v.reason = "too few nonzero coefficients in window";
    return v;
  }
  // Least-squares slope of the running-max envelope in log-log coordinates.
  double env = -std::numeric_limits<double>::infinity();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double m = static_cast<double>(lj.size());
  for (std::size_t i = 0; i < lj.size(); ++i) {
    env = std::max(env, lr[i]);
    sx += lj[i];
    sy += env;
    sxx += lj[i] * lj[i];
    sxy += lj[i] * env;
  }
  const double den = m * sxx - sx * sx;
  v.slope = den > 0.0 ? (m * sxy - sx * sy) / den : 0.0;
  if (v.slope >= cfg.slope_min) {
    v.kind = Verdict::Diverges;
    v.growth_estimate = std::numeric_limits<double>::infinity();
    v.margin = v.slope - cfg.slope_min;
    v.reason = "growth trend in |c_j|^(1/j)";
    return v;
  }
  if (v.slope <= cfg.slope_conv) {
    const double bound = cfg.expected_bound ? 1.5 * std::max(1.0, *cfg.expected_bound) : 0.0;
    if (cfg.expected_bound && v.growth_estimate > bound) {
      v.margin = bound - v.growth_estimate;
      v.reason = "no trend but |c_j|^(1/j) exceeds the expected bound";
      return v;
    }
    v.kind = Verdict::Converges;
    v.margin = cfg.slope_conv - v.slope;
    v.reason = "bounded |c_j|^(1/j)";
    return v;
  }
  v.margin = -std::min(v.slope - cfg.slope_conv, cfg.slope_min - v.slope);
  v.reason = "trend between thresholds";
  return v;
}

namespace {

constexpr long kExpandTermLimit = 50000;

double log_binomial(long n, long k) {
  return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

void take_max(LogValue& acc, double l) {
  if (acc.is_zero() || l > acc.log_abs) acc = {l, 0.0};
}

}  // namespace

ConvergenceVerdict hartogs_joint_check(const SeriesSpec& spec, long D, const ClassifierConfig& cfg) {
  const bool affine = spec.space == Space::Affine;
  if (affine && !check_class(spec, 1, 0, D)) throw Error("hartogs_joint_check: series is not in Class (1,0)");
  CoefficientStream joint;
  joint.c.assign(D + 1, LogValue{});
  for (const TermIndex& t : term_indices(spec, D)) {
    const TermRule& r = spec.rules[t.rule];
    const double scale = r.scale.log_abs(t.k);
    if (std::isinf(scale) && scale < 0) continue;
    const long deg = r.degree(t.k);
    const long shift = affine ? t.exponent : 0;
    if (deg <= 128 && log_binomial(spec.n + deg, spec.n) < std::log(static_cast<double>(kExpandTermLimit))) {
      Polynomial p = Polynomial::constant(spec.n, 1.0);
      for (const auto& f : r.factors) {
        const long e = f.power(t.k);
        if (e > 0) p *= power(f.base, static_cast<int>(e));
      }
      for (const auto& [a, c] : p.terms()) {
        const long N = shift + total_degree(a);
        if (N <= D) take_max(joint.c[N], scale + std::log(std::abs(c)));
      }
    } else {
      // sqrt(mean |P|^2 / #monomials) <= max |b_alpha| on the unit torus.
      CounterRng rng(mix64(t.exponent), t.rule);
      double acc = 0.0;
      int used = 0;
      double mx = -std::numeric_limits<double>::infinity();
      std::vector<double> logs;
      for (int i = 0; i < 64; ++i) {
        Point x(spec.n);
        for (auto& c : x) c = std::polar(1.0, 2.0 * M_PI * rng.uniform());
        double l = 0.0;
        for (const auto& f : r.factors) {
          const long e = f.power(t.k);
          if (e > 0) l += static_cast<double>(e) * f.base.log_abs(x);
        }
        logs.push_back(2.0 * l);
        mx = std::max(mx, 2.0 * l);
      }
      for (double l : logs)
        if (std::isfinite(l)) acc += std::exp(l - mx), ++used;
      if (used == 0) continue;
      const double lmean = mx + std::log(acc / 64.0);
      const long N = shift + deg;
      if (N <= D) take_max(joint.c[N], scale + 0.5 * (lmean - log_binomial(spec.n + deg, spec.n)));
    }
  }
  return classify(joint, cfg);
}

}  // namespace convlab
