#include "convlab/series.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <ostream>
#include <sstream>

namespace convlab {

double Scale::log_abs(long k) const {
  const double lv = std::abs(value) == 0.0 ? -std::numeric_limits<double>::infinity() : std::log(std::abs(value));
  if (form == "const") return lv;
  if (form == "k^k") return k <= 0 ? lv : lv + c * static_cast<double>(k) * std::log(static_cast<double>(k));
  if (form == "m_pow") {
    if (!(m > 0.0)) throw Error("scale m_pow: m must be positive");
    return lv + static_cast<double>(a * k + b) * std::log(m);
  }
  throw Error("unknown scale form '" + form + "'");
}

long TermRule::degree(long k) const {
  long d = 0;
  for (const auto& f : factors) d += static_cast<long>(std::max(0, f.base.degree())) * f.power(k);
  return d;
}

namespace {

bool homogeneous_rule(const TermRule& r) {
  return std::all_of(r.factors.begin(), r.factors.end(), [](const Factor& f) { return f.base.is_homogeneous(); });
}

long rule_key(const SeriesSpec& spec, const TermRule& r, long k) {
  return spec.space == Space::Projective ? r.degree(k) : r.exponent(k);
}

long key_slope(const SeriesSpec& spec, const TermRule& r) {
  if (spec.space == Space::Affine) return r.exp_a;
  long s = 0;
  for (const auto& f : r.factors) s += static_cast<long>(std::max(0, f.base.degree())) * f.a;
  return s;
}

void validate_rule(const SeriesSpec& spec, const TermRule& r) {
  for (const auto& f : r.factors)
    if (f.base.dimension() != spec.n) throw Error("series rule: factor dimension mismatch");
  if (r.k_start < 0) throw Error("series rule: k_start must be >= 0");
  if (r.bounded() && r.k_end < r.k_start) throw Error("series rule: empty k range");
  if (!r.bounded() && key_slope(spec, r) <= 0) throw Error("series rule: unbounded rule with non-increasing exponent");
  for (const auto& f : r.factors) {
    if (f.a < 0) throw Error("series rule: negative power slope");
    if (f.power(r.k_start) < 0) throw Error("series rule: negative power");
  }
}

void add_log(LogValue& acc, const LogValue& v) {
  if (v.is_zero()) return;
  if (acc.is_zero()) {
    acc = v;
    return;
  }
  const double m = std::max(acc.log_abs, v.log_abs);
  const Complex z = std::polar(std::exp(acc.log_abs - m), acc.arg) + std::polar(std::exp(v.log_abs - m), v.arg);
  if (std::abs(z) == 0.0) acc = LogValue{};
  else acc = {m + std::log(std::abs(z)), std::arg(z)};
}

Polynomial rule_product(const TermRule& r, long k, int n) {
  Polynomial p = Polynomial::constant(n, 1.0);
  for (const auto& f : r.factors) {
    const long e = f.power(k);
    if (e > 0) p *= power(f.base, static_cast<int>(e));
  }
  return p;
}

}  // namespace

std::vector<TermIndex> term_indices(const SeriesSpec& spec, long D) {
  std::vector<TermIndex> out;
  for (std::size_t i = 0; i < spec.rules.size(); ++i) {
    const TermRule& r = spec.rules[i];
    validate_rule(spec, r);
    for (long k = r.k_start; !r.bounded() || k <= r.k_end; ++k) {
      const long q = rule_key(spec, r, k);
      if (q < 0) throw Error("series rule: negative exponent");
      if (q > D) {
        if (key_slope(spec, r) > 0) break;
        continue;
      }
      out.push_back({q, i, k});
    }
  }
  std::sort(out.begin(), out.end(), [](const TermIndex& a, const TermIndex& b) {
    return a.exponent != b.exponent ? a.exponent < b.exponent : a.rule < b.rule;
  });
  for (std::size_t i = 1; i < out.size(); ++i)
    if (out[i].exponent == out[i - 1].exponent)
      throw Error("series: exponent collision at q = " + std::to_string(out[i].exponent));
  return out;
}

std::vector<Term> materialize(const SeriesSpec& spec, long D) {
  std::vector<Term> out;
  for (const TermIndex& t : term_indices(spec, D)) {
    const TermRule& r = spec.rules[t.rule];
    const Complex s = std::polar(std::exp(r.scale.log_abs(t.k)), r.scale.arg());
    out.push_back({t.exponent, rule_product(r, t.k, spec.n) * s, t.rule, t.k});
  }
  return out;
}

bool check_class(const SeriesSpec& spec, int A, int B, long D) {
  if (D < 1) throw Error("check_class: horizon must be >= 1");
  for (const TermIndex& t : term_indices(spec, D)) {
    const TermRule& r = spec.rules[t.rule];
    if (r.degree(t.k) > A * t.exponent + B) return false;
  }
  // Beyond D both sides are affine in k: compare at the ends and by slope.
  for (const TermRule& r : spec.rules) {
    const long q0 = rule_key(spec, r, r.k_start);
    if (r.degree(r.k_start) > A * q0 + B) return false;
    if (r.bounded()) {
      if (r.degree(r.k_end) > A * rule_key(spec, r, r.k_end) + B) return false;
    } else {
      long deg_slope = 0;
      for (const auto& f : r.factors) deg_slope += static_cast<long>(std::max(0, f.base.degree())) * f.a;
      if (deg_slope > A * key_slope(spec, r)) return false;
    }
  }
  return true;
}

SeriesSpec normalize_to_10(const SeriesSpec& spec, int A, int B) {
  if (A < 1 || B < 0) throw Error("normalize_to_10: need A >= 1, B >= 0");
  if (spec.space != Space::Affine) throw Error("normalize_to_10: affine series only");
  if (!check_class(spec, A, B, 256)) throw Error("normalize_to_10: series is not in the stated class");
  const int N = A + B;
  SeriesSpec g = spec;
  for (auto& r : g.rules) {
    r.exp_a *= N;
    r.exp_b = N * r.exp_b + N;
  }
  g.tag = ClassTag{1, 0};
  return g;
}

LogValue term_value(const TermRule& rule, long k, const Point& s) {
  LogValue v{rule.scale.log_abs(k), rule.scale.arg()};
  if (v.is_zero()) return LogValue{};
  for (const auto& f : rule.factors) {
    const long e = f.power(k);
    if (e == 0) continue;
    const Complex z = f.base.evaluate_snapped(s);
    if (std::abs(z) == 0.0) return LogValue{};
    v.log_abs += static_cast<double>(e) * std::log(std::abs(z));
    v.arg += static_cast<double>(e) * std::arg(z);
  }
  v.arg = std::remainder(v.arg, 2.0 * M_PI);
  return v;
}

double CoefficientStream::r(std::size_t j) const {
  if (j == 0 || c[j].is_zero()) return 0.0;
  return std::exp(c[j].log_abs / static_cast<double>(j));
}

Complex CoefficientStream::value(std::size_t j) const {
  if (c[j].is_zero()) return 0.0;
  return std::polar(std::exp(c[j].log_abs), c[j].arg);
}

CoefficientStream restrict_affine(const SeriesSpec& spec, const Point& s, long D) {
  if (static_cast<int>(s.size()) != spec.n) throw Error("restrict_affine: dimension mismatch");
  if (spec.space != Space::Affine) throw Error("restrict_affine: projective series");
  CoefficientStream out;
  out.c.assign(D + 1, LogValue{});
  // Evaluate each factor base once.
  std::vector<std::vector<Complex>> base(spec.rules.size());
  for (std::size_t i = 0; i < spec.rules.size(); ++i)
    for (const auto& f : spec.rules[i].factors) base[i].push_back(f.base.evaluate_snapped(s));
  for (const TermIndex& t : term_indices(spec, D)) {
    const TermRule& r = spec.rules[t.rule];
    LogValue v{r.scale.log_abs(t.k), r.scale.arg()};
    for (std::size_t f = 0; f < r.factors.size() && !v.is_zero(); ++f) {
      const long e = r.factors[f].power(t.k);
      if (e == 0) continue;
      const Complex z = base[t.rule][f];
      if (std::abs(z) == 0.0) {
        v = LogValue{};
        break;
      }
      v.log_abs += static_cast<double>(e) * std::log(std::abs(z));
      v.arg += static_cast<double>(e) * std::arg(z);
    }
    if (!v.is_zero()) v.arg = std::remainder(v.arg, 2.0 * M_PI);
    out.c[t.exponent] = v;
  }
  return out;
}

CoefficientStream restrict_projective(const SeriesSpec& spec, const Point& x, long D) {
  if (static_cast<int>(x.size()) != spec.n) throw Error("restrict_projective: dimension mismatch");
  if (norm2(x) == 0.0) throw Error("restrict_projective: x = 0");
  CoefficientStream out;
  out.c.assign(D + 1, LogValue{});
  for (std::size_t i = 0; i < spec.rules.size(); ++i) {
    const TermRule& r = spec.rules[i];
    validate_rule(spec, r);
    std::vector<int> low_deg;
    long lslope = 0;
    for (const auto& f : r.factors) {
      int lo = f.base.degree();
      for (const auto& [a, c] : f.base.terms()) {
        (void)c;
        lo = std::min(lo, total_degree(a));
      }
      low_deg.push_back(std::max(0, lo));
      lslope += static_cast<long>(low_deg.back()) * f.a;
    }
    if (!r.bounded() && lslope == 0)
      throw Error("restrict_projective: infinitely many terms contribute to a fixed degree");
    for (long k = r.k_start; !r.bounded() || k <= r.k_end; ++k) {
      // every monomial of the k-th coefficient has degree >= low
      long low = 0;
      for (std::size_t f = 0; f < r.factors.size(); ++f) low += low_deg[f] * r.factors[f].power(k);
      if (low > D) break;
      if (homogeneous_rule(r)) {
        add_log(out.c[r.degree(k)], term_value(r, k, x));
      } else {
        const Polynomial p = rule_product(r, k, spec.n);
        const LogValue sc{r.scale.log_abs(k), r.scale.arg()};
        for (int d = 0; d <= std::min<long>(D, p.degree()); ++d) {
          const Complex h = homogeneous_part(p, d).evaluate_snapped(x);
          if (std::abs(h) == 0.0) continue;
          add_log(out.c[d], {sc.log_abs + std::log(std::abs(h)), sc.arg + std::arg(h)});
        }
      }
    }
  }
  return out;
}

CoefficientStream stream_from_values(const std::vector<Complex>& c) {
  CoefficientStream out;
  for (const Complex z : c)
    out.c.push_back(std::abs(z) == 0.0 ? LogValue{} : LogValue{std::log(std::abs(z)), std::arg(z)});
  return out;
}

void write_stream_csv(std::ostream& os, const CoefficientStream& s) {
  std::ostringstream line;
  line.precision(17);
  line << "j,re,im,r_j\n";
  for (std::size_t j = 0; j < s.size(); ++j) {
    const Complex z = s.value(j);
    line << j << ',' << z.real() << ',' << z.imag() << ',' << s.r(j) << '\n';
  }
  os << line.str();
}

}  // namespace convlab
