#pragma once

#include <complex>
#include <cstddef>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace convlab {

using Complex = std::complex<double>;
using Point = std::vector<Complex>;
using Exponent = std::vector<int>;

/// Raised on malformed input: dimension mismatches, bad arguments, parse errors.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// -inf stand-in used in reports.
constexpr double kLogFloor = -1e12;

double norm2(const Point& x);  // Euclidean |x|
int total_degree(const Exponent& alpha);

/// Degree-graded lexicographic order: |a| first, then lexicographic on the
/// exponent vectors. This is the order that numbers monomials 1, 2, 3, ...
struct GradedLex {
  bool operator()(const Exponent& a, const Exponent& b) const;
};

struct MonomialIndex {
  Exponent exponent;
  std::size_t position = 0;  // 1-based
};

long long binomial(long long n, long long k);

/// alpha(i) for the i-th monomial (1-based) in n variables.
MonomialIndex monomial_at(int n, std::size_t i);
/// Inverse of monomial_at.
std::size_t index_of(const Exponent& alpha);

struct MonomialCounts {
  long long m_k = 0;  // number of monomials of degree <= k
  long long l_k = 0;  // sum of degrees of those monomials
};
MonomialCounts monomial_counts(int n, int k);

/// All exponents of total degree exactly d, in lexicographic order.
std::vector<Exponent> exponents_of_degree(int n, int d);
/// The first `count` exponents alpha(1..count).
std::vector<Exponent> first_exponents(int n, std::size_t count);

/// Sparse multivariate polynomial with complex double coefficients.
/// Zero coefficients are never stored; the zero polynomial has degree -1.
class Polynomial {
public:
  using TermMap = std::map<Exponent, Complex, GradedLex>;

  Polynomial() = default;
  explicit Polynomial(int n);
  Polynomial(int n, TermMap terms);

  static Polynomial constant(int n, Complex c);
  static Polynomial variable(int n, int i);  // x_i, 0-based
  static Polynomial monomial(const Exponent& alpha, Complex c = 1.0);
  /// sum_i a_i x_i
  static Polynomial linear_form(const Point& a);

  int dimension() const { return n_; }
  int degree() const;
  bool is_zero() const { return terms_.empty(); }
  bool is_homogeneous() const;
  const TermMap& terms() const { return terms_; }
  Complex coefficient(const Exponent& alpha) const;
  void set_coefficient(const Exponent& alpha, Complex c);

  Complex evaluate(const Point& x) const;
  /// evaluate(), but exactly 0 when |p(x)| is within the rounding error of
  /// the evaluation (so sampled points on {p = 0} count as zeros).
  Complex evaluate_snapped(const Point& x) const;
  /// log|p(x)|, -inf at zeros.
  double log_abs(const Point& x) const;

  Polynomial operator+(const Polynomial& o) const;
  Polynomial operator-(const Polynomial& o) const;
  Polynomial operator*(const Polynomial& o) const;
  Polynomial operator*(Complex c) const;
  Polynomial& operator+=(const Polynomial& o);
  Polynomial& operator*=(const Polynomial& o);
  bool operator==(const Polynomial& o) const;

  Polynomial homogeneous_part(int k) const;
  /// Substitute x_0 = 1 and drop that variable (n -> n-1).
  Polynomial dehomogenize_first() const;
  /// Sum of |a_alpha|.
  double coefficient_l1() const;
  double max_abs_coefficient() const;
  /// Upper bound on |grad p| (Euclidean, complex) over the polydisk of
  /// polyradius `radius` per coordinate.
  double gradient_bound(double radius) const;

  std::string to_string() const;

private:
  void prune();
  int n_ = 0;
  TermMap terms_;
};

Polynomial power(const Polynomial& p, int e);
Polynomial homogeneous_part(const Polynomial& p, int k);
Polynomial partial_derivative(const Polynomial& p, int i);

/// A pair (p, k) with deg p <= k, either in the affine family or the
/// homogeneous family (then every term has degree exactly k).
class NormedPoly {
public:
  NormedPoly(Polynomial poly, int weight, bool homogeneous = false);

  const Polynomial& poly() const { return poly_; }
  int weight() const { return weight_; }
  bool homogeneous() const { return homogeneous_; }

private:
  Polynomial poly_;
  int weight_;
  bool homogeneous_;
};

/// |(p(x),k)| = |p(x)|^{1/k}
double root_value(const NormedPoly& np, const Point& x);
/// ||(p(x),k)||: |p(x)|^{1/k}/(1+|x|^2)^{1/2} for affine pairs,
/// |h(x)|^{1/k}/|x| for homogeneous pairs (x != 0).
double normalized_value(const NormedPoly& np, const Point& x);
/// (p^a, a k): normalized values are unchanged pointwise.
NormedPoly raise(const NormedPoly& np, int a);

}  // namespace convlab
