#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <map>
#include <string>
#include <vector>

#include "convlab/polynomial.hpp"

namespace convlab {

using Rational = boost::multiprecision::cpp_rational;

struct ComplexRational {
  Rational re = 0;
  Rational im = 0;

  ComplexRational operator+(const ComplexRational& o) const { return {re + o.re, im + o.im}; }
  ComplexRational operator*(const ComplexRational& o) const {
    return {re * o.re - im * o.im, re * o.im + im * o.re};
  }
  bool is_zero() const { return re == 0 && im == 0; }
  Rational norm() const { return re * re + im * im; }  // |z|^2
  Complex to_complex() const;
  bool operator==(const ComplexRational&) const = default;
};

using RationalPoint = std::vector<ComplexRational>;

/// Parses "-3", "7/4", "0.125" or "1e-3" exactly.
Rational parse_rational(const std::string& text);
std::string format_rational(const Rational& q);
/// Rational height max(|numerator|, denominator).
boost::multiprecision::cpp_int height(const Rational& q);

/// Polynomial with exact complex-rational coefficients.
class RationalPolynomial {
public:
  using TermMap = std::map<Exponent, ComplexRational, GradedLex>;

  RationalPolynomial() = default;
  explicit RationalPolynomial(int n) : n_(n) {}

  int dimension() const { return n_; }
  int degree() const;
  const TermMap& terms() const { return terms_; }
  void set_coefficient(const Exponent& alpha, const ComplexRational& c);

  ComplexRational evaluate(const RationalPoint& x) const;
  Polynomial to_polynomial() const;
  bool operator==(const RationalPolynomial&) const = default;

private:
  int n_ = 0;
  TermMap terms_;
};

RationalPoint to_rational_point(const Point& x, long long max_denominator = 1000000);

}  // namespace convlab
