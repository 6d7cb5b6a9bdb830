#include "convlab/polynomial.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

namespace convlab {

double norm2(const Point& x) {
  double s = 0.0;
  for (const auto& c : x) s += std::norm(c);
  return std::sqrt(s);
}

int total_degree(const Exponent& alpha) {
  return std::accumulate(alpha.begin(), alpha.end(), 0);
}

bool GradedLex::operator()(const Exponent& a, const Exponent& b) const {
  const int da = total_degree(a), db = total_degree(b);
  if (da != db) return da < db;
  return a < b;
}

long long binomial(long long n, long long k) {
  if (k < 0 || n < 0 || k > n) return 0;
  k = std::min(k, n - k);
  long long r = 1;
  for (long long i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

namespace {

// Number of exponents in `vars` variables with total degree exactly d.
long long count_of_degree(int vars, int d) {
  if (d < 0) return 0;
  if (vars == 0) return d == 0 ? 1 : 0;
  return binomial(d + vars - 1, vars - 1);
}

// r-th (0-based) exponent of degree d in lexicographic order.
Exponent unrank(int n, int d, long long r) {
  Exponent alpha(n, 0);
  int remaining = d;
  for (int i = 0; i < n - 1; ++i) {
    for (int a = 0; a <= remaining; ++a) {
      const long long c = count_of_degree(n - 1 - i, remaining - a);
      if (r < c) {
        alpha[i] = a;
        remaining -= a;
        break;
      }
      r -= c;
    }
  }
  alpha[n - 1] = remaining;
  return alpha;
}

long long rank(const Exponent& alpha) {
  const int n = static_cast<int>(alpha.size());
  int remaining = total_degree(alpha);
  long long r = 0;
  for (int i = 0; i < n - 1; ++i) {
    for (int a = 0; a < alpha[i]; ++a) r += count_of_degree(n - 1 - i, remaining - a);
    remaining -= alpha[i];
  }
  return r;
}

}  // namespace

MonomialIndex monomial_at(int n, std::size_t i) {
  if (n < 1 || i < 1) throw Error("monomial_at: need n >= 1 and i >= 1");
  int d = 0;
  long long before = 0;
  while (true) {
    const long long c = count_of_degree(n, d);
    if (static_cast<long long>(i) <= before + c) break;
    before += c;
    ++d;
  }
  return {unrank(n, d, static_cast<long long>(i) - before - 1), i};
}

std::size_t index_of(const Exponent& alpha) {
  const int n = static_cast<int>(alpha.size());
  if (n < 1) throw Error("index_of: empty exponent");
  for (int a : alpha)
    if (a < 0) throw Error("index_of: negative exponent");
  const int d = total_degree(alpha);
  const long long before = d == 0 ? 0 : binomial(n + d - 1, d - 1);  // m_{d-1}
  return static_cast<std::size_t>(before + rank(alpha) + 1);
}

MonomialCounts monomial_counts(int n, int k) {
  if (n < 1 || k < 0) throw Error("monomial_counts: need n >= 1, k >= 0");
  return {binomial(n + k, k), n * binomial(n + k, k - 1)};
}

std::vector<Exponent> exponents_of_degree(int n, int d) {
  std::vector<Exponent> out;
  const long long c = count_of_degree(n, d);
  out.reserve(static_cast<std::size_t>(c));
  for (long long r = 0; r < c; ++r) out.push_back(unrank(n, d, r));
  return out;
}

std::vector<Exponent> first_exponents(int n, std::size_t count) {
  std::vector<Exponent> out;
  out.reserve(count);
  for (int d = 0; out.size() < count; ++d)
    for (auto& e : exponents_of_degree(n, d)) {
      if (out.size() == count) break;
      out.push_back(std::move(e));
    }
  return out;
}

// ---------------------------------------------------------------------------

Polynomial::Polynomial(int n) : n_(n) {
  if (n < 1) throw Error("Polynomial: dimension must be >= 1");
}

Polynomial::Polynomial(int n, TermMap terms) : n_(n), terms_(std::move(terms)) {
  if (n < 1) throw Error("Polynomial: dimension must be >= 1");
  for (const auto& [a, c] : terms_) {
    (void)c;
    if (static_cast<int>(a.size()) != n) throw Error("Polynomial: exponent length mismatch");
    for (int e : a)
      if (e < 0) throw Error("Polynomial: negative exponent");
  }
  prune();
}

Polynomial Polynomial::constant(int n, Complex c) {
  Polynomial p(n);
  p.set_coefficient(Exponent(n, 0), c);
  return p;
}

Polynomial Polynomial::variable(int n, int i) {
  if (i < 0 || i >= n) throw Error("Polynomial::variable: index out of range");
  Exponent a(n, 0);
  a[i] = 1;
  return monomial(a);
}

Polynomial Polynomial::monomial(const Exponent& alpha, Complex c) {
  Polynomial p(static_cast<int>(alpha.size()));
  p.set_coefficient(alpha, c);
  return p;
}

Polynomial Polynomial::linear_form(const Point& a) {
  const int n = static_cast<int>(a.size());
  Polynomial p(n);
  for (int i = 0; i < n; ++i) {
    Exponent e(n, 0);
    e[i] = 1;
    p.set_coefficient(e, a[i]);
  }
  return p;
}

void Polynomial::prune() {
  for (auto it = terms_.begin(); it != terms_.end();) {
    if (it->second == Complex(0.0, 0.0))
      it = terms_.erase(it);
    else
      ++it;
  }
}

int Polynomial::degree() const {
  if (terms_.empty()) return -1;
  return total_degree(terms_.rbegin()->first);
}

bool Polynomial::is_homogeneous() const {
  if (terms_.empty()) return true;
  return total_degree(terms_.begin()->first) == total_degree(terms_.rbegin()->first);
}

Complex Polynomial::coefficient(const Exponent& alpha) const {
  auto it = terms_.find(alpha);
  return it == terms_.end() ? Complex(0.0) : it->second;
}

void Polynomial::set_coefficient(const Exponent& alpha, Complex c) {
  if (static_cast<int>(alpha.size()) != n_) throw Error("set_coefficient: exponent length mismatch");
  if (c == Complex(0.0))
    terms_.erase(alpha);
  else
    terms_[alpha] = c;
}

Complex Polynomial::evaluate(const Point& x) const {
  if (static_cast<int>(x.size()) != n_) throw Error("evaluate: dimension mismatch");
  if (terms_.empty()) return 0.0;
  const int d = degree();
  // powers[i][e] = x_i^e
  std::vector<std::vector<Complex>> powers(n_, std::vector<Complex>(d + 1));
  for (int i = 0; i < n_; ++i) {
    powers[i][0] = 1.0;
    for (int e = 1; e <= d; ++e) powers[i][e] = powers[i][e - 1] * x[i];
  }
  Complex sum = 0.0;
  for (const auto& [a, c] : terms_) {
    Complex m = c;
    for (int i = 0; i < n_; ++i)
      if (a[i]) m *= powers[i][a[i]];
    sum += m;
  }
  return sum;
}

Complex Polynomial::evaluate_snapped(const Point& x) const {
  const Complex v = evaluate(x);
  if (terms_.empty()) return v;
  double mag = 0.0;
  for (const auto& [a, c] : terms_) {
    double m = std::abs(c);
    for (int i = 0; i < n_; ++i)
      if (a[i]) m *= std::pow(std::abs(x[i]), a[i]);
    mag += m;
  }
  const double err = 16.0 * (degree() + 2) * std::numeric_limits<double>::epsilon() * mag;
  return std::abs(v) <= err ? Complex(0.0) : v;
}

double Polynomial::log_abs(const Point& x) const {
  const double v = std::abs(evaluate(x));
  return v == 0.0 ? -std::numeric_limits<double>::infinity() : std::log(v);
}

Polynomial Polynomial::operator+(const Polynomial& o) const {
  Polynomial r = *this;
  r += o;
  return r;
}

Polynomial& Polynomial::operator+=(const Polynomial& o) {
  if (o.n_ != n_) throw Error("Polynomial +: dimension mismatch");
  for (const auto& [a, c] : o.terms_) terms_[a] += c;
  prune();
  return *this;
}

Polynomial Polynomial::operator-(const Polynomial& o) const { return *this + o * Complex(-1.0); }

Polynomial Polynomial::operator*(Complex c) const {
  Polynomial r(n_);
  if (c == Complex(0.0)) return r;
  for (const auto& [a, v] : terms_) r.terms_[a] = v * c;
  r.prune();
  return r;
}

Polynomial Polynomial::operator*(const Polynomial& o) const {
  if (o.n_ != n_) throw Error("Polynomial *: dimension mismatch");
  Polynomial r(n_);
  Exponent e(n_);
  for (const auto& [a, c] : terms_)
    for (const auto& [b, d] : o.terms_) {
      for (int i = 0; i < n_; ++i) e[i] = a[i] + b[i];
      r.terms_[e] += c * d;
    }
  r.prune();
  return r;
}

Polynomial& Polynomial::operator*=(const Polynomial& o) { return *this = *this * o; }

bool Polynomial::operator==(const Polynomial& o) const { return n_ == o.n_ && terms_ == o.terms_; }

Polynomial Polynomial::homogeneous_part(int k) const {
  Polynomial r(n_);
  for (const auto& [a, c] : terms_)
    if (total_degree(a) == k) r.terms_.emplace(a, c);
  return r;
}

Polynomial Polynomial::dehomogenize_first() const {
  if (n_ < 2) throw Error("dehomogenize_first: need at least two variables");
  Polynomial r(n_ - 1);
  for (const auto& [a, c] : terms_) r.terms_[Exponent(a.begin() + 1, a.end())] += c;
  r.prune();
  return r;
}

double Polynomial::coefficient_l1() const {
  double s = 0.0;
  for (const auto& [a, c] : terms_) {
    (void)a;
    s += std::abs(c);
  }
  return s;
}

double Polynomial::max_abs_coefficient() const {
  double s = 0.0;
  for (const auto& [a, c] : terms_) {
    (void)a;
    s = std::max(s, std::abs(c));
  }
  return s;
}

double Polynomial::gradient_bound(double radius) const {
  // |d/dx_i x^a| <= a_i r^{|a|-1} on the polydisk; sum the partials in l2.
  double s = 0.0;
  for (int i = 0; i < n_; ++i) {
    double g = 0.0;
    for (const auto& [a, c] : terms_)
      if (a[i] > 0) g += std::abs(c) * a[i] * std::pow(radius, total_degree(a) - 1);
    s += g * g;
  }
  return std::sqrt(s);
}

std::string Polynomial::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [a, c] : terms_) {
    if (!first) os << " + ";
    first = false;
    os << "(" << c.real();
    if (c.imag() != 0.0) os << (c.imag() < 0 ? "-" : "+") << std::abs(c.imag()) << "i";
    os << ")";
    for (int i = 0; i < n_; ++i)
      if (a[i]) os << "*x" << i + 1 << (a[i] > 1 ? "^" + std::to_string(a[i]) : "");
  }
  return os.str();
}

Polynomial power(const Polynomial& p, int e) {
  if (e < 0) throw Error("power: negative exponent");
  Polynomial result = Polynomial::constant(p.dimension(), 1.0);
  Polynomial base = p;
  while (e > 0) {
    if (e & 1) result *= base;
    e >>= 1;
    if (e) base *= base;
  }
  return result;
}

Polynomial homogeneous_part(const Polynomial& p, int k) { return p.homogeneous_part(k); }

Polynomial partial_derivative(const Polynomial& p, int i) {
  if (i < 0 || i >= p.dimension()) throw Error("partial_derivative: index out of range");
  Polynomial d(p.dimension());
  for (const auto& [a, c] : p.terms()) {
    if (a[i] == 0) continue;
    Exponent b = a;
    --b[i];
    d.set_coefficient(b, d.coefficient(b) + c * static_cast<double>(a[i]));
  }
  return d;
}

// ---------------------------------------------------------------------------

NormedPoly::NormedPoly(Polynomial poly, int weight, bool homogeneous)
    : poly_(std::move(poly)), weight_(weight), homogeneous_(homogeneous) {
  if (weight_ < 1) throw Error("NormedPoly: weight must be >= 1");
  if (poly_.degree() > weight_) throw Error("NormedPoly: degree exceeds weight");
  if (homogeneous_)
    for (const auto& [a, c] : poly_.terms()) {
      (void)c;
      if (total_degree(a) != weight_) throw Error("NormedPoly: term degree differs from weight");
    }
}

double root_value(const NormedPoly& np, const Point& x) {
  return std::pow(std::abs(np.poly().evaluate(x)), 1.0 / np.weight());
}

double normalized_value(const NormedPoly& np, const Point& x) {
  const double r = root_value(np, x);
  const double nx = norm2(x);
  if (np.homogeneous()) {
    if (nx == 0.0) throw Error("normalized_value: homogeneous pair at x = 0");
    return r / nx;
  }
  return r / std::sqrt(1.0 + nx * nx);
}

NormedPoly raise(const NormedPoly& np, int a) {
  if (a < 1) throw Error("raise: power must be >= 1");
  return NormedPoly(power(np.poly(), a), np.weight() * a, np.homogeneous());
}

}  // namespace convlab
