#include "convlab/exact.hpp"

#include <cmath>

namespace convlab {

using boost::multiprecision::cpp_int;

Complex ComplexRational::to_complex() const {
  return {static_cast<double>(re), static_cast<double>(im)};
}

Rational parse_rational(const std::string& text) {
  if (text.empty()) throw Error("parse_rational: empty string");
  const auto slash = text.find('/');
  try {
    if (slash != std::string::npos)
      return Rational(cpp_int(text.substr(0, slash)), cpp_int(text.substr(slash + 1)));
    std::string mantissa = text;
    long exp10 = 0;
    const auto e = mantissa.find_first_of("eE");
    if (e != std::string::npos) {
      exp10 = std::stol(mantissa.substr(e + 1));
      mantissa = mantissa.substr(0, e);
    }
    const auto dot = mantissa.find('.');
    if (dot != std::string::npos) {
      exp10 -= static_cast<long>(mantissa.size() - dot - 1);
      mantissa.erase(dot, 1);
    }
    if (mantissa.empty() || mantissa == "-" || mantissa == "+") throw Error("bad number");
    if (mantissa[0] == '+') mantissa.erase(0, 1);
    const Rational q{cpp_int(mantissa)};
    cpp_int scale = 1;
    for (long i = 0; i < std::labs(exp10); ++i) scale *= 10;
    return exp10 >= 0 ? Rational(q * scale) : Rational(q / scale);
  } catch (const Error&) {
    throw Error("parse_rational: cannot parse '" + text + "'");
  } catch (const std::exception&) {
    throw Error("parse_rational: cannot parse '" + text + "'");
  }
}

std::string format_rational(const Rational& q) {
  const cpp_int num = boost::multiprecision::numerator(q);
  const cpp_int den = boost::multiprecision::denominator(q);
  return den == 1 ? num.str() : num.str() + "/" + den.str();
}

cpp_int height(const Rational& q) {
  cpp_int num = boost::multiprecision::numerator(q);
  if (num < 0) num = -num;
  const cpp_int den = boost::multiprecision::denominator(q);
  return num > den ? num : den;
}

int RationalPolynomial::degree() const {
  if (terms_.empty()) return -1;
  return total_degree(terms_.rbegin()->first);
}

void RationalPolynomial::set_coefficient(const Exponent& alpha, const ComplexRational& c) {
  if (static_cast<int>(alpha.size()) != n_) throw Error("RationalPolynomial: exponent length mismatch");
  if (c.is_zero())
    terms_.erase(alpha);
  else
    terms_[alpha] = c;
}

ComplexRational RationalPolynomial::evaluate(const RationalPoint& x) const {
  if (static_cast<int>(x.size()) != n_) throw Error("RationalPolynomial::evaluate: dimension mismatch");
  ComplexRational sum;
  for (const auto& [a, c] : terms_) {
    ComplexRational m = c;
    for (int i = 0; i < n_; ++i)
      for (int e = 0; e < a[i]; ++e) m = m * x[i];
    sum = sum + m;
  }
  return sum;
}

Polynomial RationalPolynomial::to_polynomial() const {
  Polynomial p(n_);
  for (const auto& [a, c] : terms_) p.set_coefficient(a, c.to_complex());
  return p;
}

namespace {
Rational approximate(double v, long long max_den) {
  // continued fraction convergents
  if (!std::isfinite(v)) throw Error("to_rational_point: non-finite coordinate");
  cpp_int h0 = 0, h1 = 1, k0 = 1, k1 = 0;
  double x = v;
  for (int it = 0; it < 64; ++it) {
    const double a = std::floor(x);
    const cpp_int ai(static_cast<long long>(a));
    const cpp_int h2 = ai * h1 + h0, k2 = ai * k1 + k0;
    if (k2 > max_den) break;
    h0 = h1; h1 = h2; k0 = k1; k1 = k2;
    const double frac = x - a;
    if (frac < 1e-15) break;
    x = 1.0 / frac;
  }
  return Rational(h1, k1);
}
}  // namespace

RationalPoint to_rational_point(const Point& x, long long max_denominator) {
  RationalPoint out;
  for (const auto& c : x) out.push_back({approximate(c.real(), max_denominator), approximate(c.imag(), max_denominator)});
  return out;
}

}  // namespace convlab
