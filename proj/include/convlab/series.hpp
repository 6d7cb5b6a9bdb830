#pragma once

#include <cmath>
#include <iosfwd>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "convlab/exact.hpp"
#include "convlab/polynomial.hpp"
#include "convlab/region.hpp"

namespace convlab {

/// base^(a k + b). `exact` carries the rational coefficients when the
/// polynomial was built in exact mode.
struct Factor {
  Polynomial base;
  int a = 1;
  int b = 0;
  std::optional<RationalPolynomial> exact;

  long power(long k) const { return a * k + b; }
  bool operator==(const Factor&) const = default;
};

/// Scalar sequence s(k):
///   "k^k"   : value * (k^k)^c
///   "const" : value
///   "m_pow" : value * m^(a k + b)
struct Scale {
  std::string form = "const";
  double c = 1.0;
  Complex value = 1.0;
  double m = 1.0;
  int a = 0;
  int b = 0;

  double log_abs(long k) const;
  double arg() const { return std::arg(value); }
  bool operator==(const Scale&) const = default;
};

/// Emits, for k in [k_start, k_end] (k_end = -1: unbounded), the term
///   scale(k) * prod_i factor_i^(a_i k + b_i)  at exponent  exp_a k + exp_b.
struct TermRule {
  std::vector<Factor> factors;
  Scale scale;
  int exp_a = 1;
  int exp_b = 0;
  long k_start = 1;
  long k_end = -1;

  long exponent(long k) const { return exp_a * k + exp_b; }
  /// Total degree of the k-th coefficient polynomial (upper bound when
  /// cancellation is possible; exact for products).
  long degree(long k) const;
  bool bounded() const { return k_end >= 0; }
  bool operator==(const TermRule&) const = default;
};

struct ClassTag {
  int A = 1;
  int B = 0;
  bool operator==(const ClassTag&) const = default;
};

/// f(s,t) = sum_j P_j(s) t^j (affine) or f(x) = sum_nu P_nu(x) with
/// homogeneous P_nu (projective).
struct SeriesSpec {
  int n = 1;
  Space space = Space::Affine;
  std::vector<TermRule> rules;
  std::optional<ClassTag> tag;

  bool operator==(const SeriesSpec&) const = default;
};

struct Term {
  long exponent = 0;
  Polynomial coefficient;
  std::size_t rule = 0;
  long k = 0;
};

/// All terms with exponent <= D (projective: degree <= D), sorted by
/// exponent. Throws Error on an exponent collision.
std::vector<Term> materialize(const SeriesSpec& spec, long D);

/// Rule-level (k, exponent) pairs with exponent <= D, sorted; no expansion.
struct TermIndex {
  long exponent = 0;
  std::size_t rule = 0;
  long k = 0;
};
std::vector<TermIndex> term_indices(const SeriesSpec& spec, long D);

bool check_class(const SeriesSpec& spec, int A, int B, long D);
SeriesSpec normalize_to_10(const SeriesSpec& spec, int A, int B);

/// log|P(s)| and arg P(s) for one rule term, evaluated factor by factor.
struct LogValue {
  double log_abs = -std::numeric_limits<double>::infinity();
  double arg = 0.0;
  bool is_zero() const { return std::isinf(log_abs) && log_abs < 0; }
};
LogValue term_value(const TermRule& rule, long k, const Point& s);

/// c_0..c_D in log-polar form.
struct CoefficientStream {
  std::vector<LogValue> c;
  std::size_t size() const { return c.size(); }
  double r(std::size_t j) const;  // |c_j|^{1/j}; 0 for zero coefficients
  Complex value(std::size_t j) const;
};

CoefficientStream restrict_affine(const SeriesSpec& spec, const Point& s, long D);
CoefficientStream restrict_projective(const SeriesSpec& spec, const Point& x, long D);
CoefficientStream stream_from_values(const std::vector<Complex>& c);

void write_stream_csv(std::ostream& os, const CoefficientStream& s);

enum class Verdict { Converges, Diverges, Indeterminate };
std::string to_string(Verdict v);

struct ClassifierConfig {
  double lo_frac = 0.5;      // window [lo_frac D, D]
  double slope_min = 0.25;   // DIVERGES when the envelope slope reaches this
  double slope_conv = 0.1;   // CONVERGES when it stays below this
  double tail_frac = 0.0;    // > 0: nothing nonzero in the last tail_frac D => CONVERGES
  std::optional<double> expected_bound;
  long j_min = 8;
};

struct ConvergenceVerdict {
  Verdict kind = Verdict::Indeterminate;
  double growth_estimate = 0.0;  // max r_j over the window
  long j_min = 0;
  long j_max = 0;
  double slope = 0.0;            // d log R / d log j of the running-max envelope
  double margin = 0.0;           // distance to the nearest threshold
  std::size_t nonzero = 0;
  std::string reason;
};

ConvergenceVerdict classify(const CoefficientStream& s, const ClassifierConfig& cfg = {});

/// Root test on the (n+1)-variable series (affine) or the n-variable series
/// (projective), grouped by total degree.
ConvergenceVerdict hartogs_joint_check(const SeriesSpec& spec, long D, const ClassifierConfig& cfg = {});

}  // namespace convlab
