#pragma once

#include <string>
#include <vector>

#include "convlab/polynomial.hpp"

namespace convlab {

/// Plurisubharmonic functions of logarithmic growth built from a grammar
/// that is closed under the operations used here:
///   scale * log|p|  (scale > 0), max, nonnegative sums, constants, and
///   log sum_i exp(u_i + c_i).
class WeightFunction {
public:
  enum class Kind { LogAbs, Max, Sum, Const, LogSumExp };

  static WeightFunction log_abs(Polynomial p, double scale = 1.0);
  static WeightFunction max_of(std::vector<WeightFunction> parts);
  static WeightFunction sum_of(std::vector<WeightFunction> parts, std::vector<double> weights = {});
  static WeightFunction constant(int n, double c);
  static WeightFunction log_sum_exp(std::vector<WeightFunction> parts, std::vector<double> offsets = {});

  Kind kind() const { return kind_; }
  int dimension() const { return n_; }
  const Polynomial& poly() const { return poly_; }
  double scale() const { return scale_; }
  const std::vector<WeightFunction>& parts() const { return parts_; }
  const std::vector<double>& weights() const { return weights_; }

  /// u(x); -inf allowed.
  double operator()(const Point& x) const;
  /// Upper bound for sup u over |z| <= exp(log_r), valid for huge radii.
  double sup_bound(double log_r) const;
  std::string to_string() const;

private:
  WeightFunction() = default;
  Kind kind_ = Kind::Const;
  int n_ = 1;
  Polynomial poly_;
  double scale_ = 1.0;  // LogAbs scale, or the constant value
  std::vector<WeightFunction> parts_;
  std::vector<double> weights_;  // Sum weights or LogSumExp offsets
};

/// Absolutely homogeneous functions on C^{n+1}, coordinates (x_0, x):
///   |P|^{1/q} with P homogeneous of degree q, max, nonnegative sums.
class HFunction {
public:
  enum class Kind { AbsPow, Max, Sum };

  static HFunction abs_pow(Polynomial P, int q);
  static HFunction max_of(std::vector<HFunction> parts);
  static HFunction sum_of(std::vector<HFunction> parts, std::vector<double> weights = {});

  Kind kind() const { return kind_; }
  int dimension() const { return n_; }
  double operator()(const Point& x) const;

private:
  friend WeightFunction h_to_l(const HFunction& h);
  HFunction() = default;
  Kind kind_ = Kind::AbsPow;
  int n_ = 1;
  Polynomial poly_;
  int q_ = 1;
  std::vector<HFunction> parts_;
  std::vector<double> weights_;
};

/// x |-> log h(1, x).
WeightFunction h_to_l(const HFunction& h);

/// v = sum_j v_j with
///   v_j = max(2^{-j}(u/M_j - 1), 2^{-j} log|x| - 1)   if |x| < exp 2^j,
///   v_j = 2^{-j} log|x| - 1                           otherwise.
class SaddulaevTransform {
public:
  SaddulaevTransform(WeightFunction u, int j_max);

  const std::vector<double>& M() const { return M_; }  // M_1..M_{j_max}
  int j_max() const { return j_max_; }

  double term(int j, const Point& x) const;
  double partial_sum(const Point& x, int J) const;
  /// S_{j_max}(x); the floor on the -inf set of u, where the full series is -inf.
  double operator()(const Point& x) const;
  /// Index from which every later v_j is <= 0 at x (partial sums nonincreasing).
  int monotone_from(const Point& x) const;
  /// Lower bound on the neglected tail sum_{j > j_max} v_j (the tail is <= 0
  /// once j_max >= monotone_from(x)).
  double tail_lower(const Point& x) const;

private:
  WeightFunction u_;
  int j_max_;
  std::vector<double> M_;
};

struct SaddulaevRow {
  Point x;
  bool on_E = false;
  double v = 0.0;
  double log_plus = 0.0;
  double tail_lower = 0.0;
  int monotone_from = 0;
  bool bound_ok = true;      // v <= log+|x| + 1e-9
  bool monotone_ok = true;   // partial sums nonincreasing from monotone_from on
  bool floor_ok = true;      // E points at the floor, off points finite
};

struct SaddulaevReport {
  std::vector<SaddulaevRow> rows;
  bool all_ok = true;
};

SaddulaevReport saddulaev_report(const SaddulaevTransform& v, const std::vector<Point>& e_samples,
                                 const std::vector<Point>& off_samples);

}  // namespace convlab
