#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <functional>
#include <set>

#include "convlab/norms.hpp"
#include "convlab/polynomial.hpp"
#include "convlab/rng.hpp"

using namespace convlab;

namespace {

// Brute-force ordering: every exponent with |a| <= d, sorted by (|a|, lex).
std::vector<Exponent> brute_order(int n, int d) {
  std::vector<Exponent> all;
  Exponent a(n, 0);
  std::function<void(int, int)> rec = [&](int i, int left) {
    if (i == n) {
      all.push_back(a);
      return;
    }
    for (int e = 0; e <= left; ++e) {
      a[i] = e;
      rec(i + 1, left - e);
    }
    a[i] = 0;
  };
  rec(0, d);
  std::sort(all.begin(), all.end(), [](const Exponent& x, const Exponent& y) {
    const int sx = std::accumulate(x.begin(), x.end(), 0), sy = std::accumulate(y.begin(), y.end(), 0);
    if (sx != sy) return sx < sy;
    return x < y;
  });
  return all;
}

Polynomial s(int n, int i) { return Polynomial::variable(n, i); }
Polynomial c(int n, Complex v) { return Polynomial::constant(n, v); }

}  // namespace

TEST_CASE("monomial_at examples") {
  CHECK(monomial_at(2, 1).exponent == Exponent{0, 0});
  CHECK(monomial_at(2, 4).exponent == Exponent{0, 2});
  CHECK(monomial_at(1, 5).exponent == Exponent{4});
  CHECK(monomial_at(2, 2).exponent == Exponent{0, 1});
  CHECK(monomial_at(2, 3).exponent == Exponent{1, 0});
  CHECK(monomial_at(2, 6).exponent == Exponent{2, 0});
}

TEST_CASE("monomial_at matches brute-force ordering and index_of inverts it") {
  for (int n = 1; n <= 3; ++n) {
    const auto ref = brute_order(n, n == 1 ? 500 : (n == 2 ? 31 : 14));
    REQUIRE(ref.size() >= 500);
    for (std::size_t i = 1; i <= 500; ++i) {
      const MonomialIndex mi = monomial_at(n, i);
      CHECK(mi.exponent == ref[i - 1]);
      CHECK(mi.position == i);
      CHECK(index_of(mi.exponent) == i);
    }
  }
}

TEST_CASE("monomial_counts examples and closed forms") {
  CHECK(monomial_counts(2, 2).m_k == 6);
  CHECK(monomial_counts(2, 2).l_k == 8);
  CHECK(monomial_counts(1, 1).m_k == 2);
  CHECK(monomial_counts(1, 1).l_k == 1);
  CHECK(monomial_counts(1, 3).m_k == 4);
  CHECK(monomial_counts(1, 3).l_k == 6);
  for (int n = 1; n <= 3; ++n) {
    CHECK(monomial_counts(n, 0).m_k == 1);
    CHECK(monomial_counts(n, 0).l_k == 0);
  }
}

TEST_CASE("m_k increments count exponents of exact degree; l_k is the degree sum") {
  for (int n = 1; n <= 3; ++n) {
    const auto all = brute_order(n, 10);
    for (int k = 0; k <= 10; ++k) {
      long long exact = 0, upto = 0, degsum = 0;
      for (const auto& a : all) {
        const int d = std::accumulate(a.begin(), a.end(), 0);
        if (d == k) ++exact;
        if (d <= k) ++upto, degsum += d;
      }
      const auto mc = monomial_counts(n, k);
      CHECK(mc.m_k == upto);
      CHECK(mc.l_k == degsum);
      if (k > 0) CHECK(mc.m_k - monomial_counts(n, k - 1).m_k == exact);
      CHECK(static_cast<long long>(exponents_of_degree(n, k).size()) == exact);
    }
  }
}

TEST_CASE("evaluate examples") {
  CHECK(std::abs((s(2, 0) * s(2, 1)).evaluate({2.0, 3.0}) - Complex(6.0)) < 1e-15);
  const Polynomial p = s(1, 0) * s(1, 0) + c(1, 1.0);
  CHECK(std::abs(p.evaluate({Complex(0, 1)})) < 1e-15);
  Polynomial q = c(1, 1.0);
  for (int i = 1; i <= 3; ++i) q *= s(1, 0) - c(1, 1.0 / i);
  CHECK(std::abs(q.evaluate({0.5})) < 1e-15);
  CHECK(Polynomial(2).evaluate({1.0, 2.0}) == Complex(0.0));
  CHECK_THROWS_AS(q.evaluate({1.0, 2.0}), Error);
}

TEST_CASE("zero polynomial conventions") {
  const Polynomial z(3);
  CHECK(z.degree() == -1);
  CHECK(z.is_zero());
  CHECK(normalized_value(NormedPoly(z, 2), {1.0, 2.0, 3.0}) == 0.0);
  Polynomial p = s(2, 0) - s(2, 0);
  CHECK(p.is_zero());
  CHECK(p.terms().empty());
}

TEST_CASE("normalized_value examples") {
  CHECK(normalized_value(NormedPoly(s(1, 0) * 2.0, 2), {1.0}) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(normalized_value(NormedPoly(s(2, 0) * s(2, 1), 2, true), {1.0, 1.0}) ==
        doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-14));
  CHECK(normalized_value(NormedPoly(s(1, 0), 1), {3.0}) == doctest::Approx(3.0 / std::sqrt(10.0)).epsilon(1e-14));
  CHECK_THROWS_AS(normalized_value(NormedPoly(s(2, 0), 1, true), {0.0, 0.0}), Error);
}

TEST_CASE("NormedPoly rejects degree above weight and inhomogeneous pairs") {
  CHECK_THROWS_AS(NormedPoly(s(1, 0) * s(1, 0), 1), Error);
  CHECK_THROWS_AS(NormedPoly(s(2, 0) + c(2, 1.0), 1, true), Error);
  CHECK_NOTHROW(NormedPoly(s(2, 0) * s(2, 1), 2, true));
}

TEST_CASE("homogeneous scale covariance and the power identity") {
  CounterRng rng(3);
  const Polynomial h = s(2, 0) * s(2, 0) * Complex(1, 2) + s(2, 0) * s(2, 1) * 3.0 - s(2, 1) * s(2, 1);
  const NormedPoly hp(h, 2, true);
  const Polynomial p = s(2, 0) * s(2, 1) + s(2, 1) * 0.5 - c(2, Complex(0, 2));
  const NormedPoly pp(p, 3);
  for (int t = 0; t < 200; ++t) {
    const Point x = rng.ball(2, 3.0);
    const Complex lam = rng.complex_normal() * 4.0;
    Point lx = x;
    for (auto& v : lx) v *= lam;
    CHECK(normalized_value(hp, lx) == doctest::Approx(normalized_value(hp, x)).epsilon(1e-11));
    for (int a = 2; a <= 4; ++a) {
      CHECK(normalized_value(raise(pp, a), x) == doctest::Approx(normalized_value(pp, x)).epsilon(1e-11));
      const Polynomial pa = power(p, a);
      CHECK(normalized_value(NormedPoly(pa, 3 * a), x) == doctest::Approx(normalized_value(pp, x)).epsilon(1e-10));
    }
  }
}

TEST_CASE("arithmetic and homogeneous decomposition") {
  CounterRng rng(5);
  const Polynomial p = s(3, 0) * s(3, 1) * s(3, 2) + s(3, 0) * 2.0 - c(3, 1.0) + s(3, 2) * s(3, 2) * Complex(0, 1);
  const Polynomial q = s(3, 1) - s(3, 2) * 3.0;
  Polynomial sum(3);
  for (int k = 0; k <= p.degree(); ++k) {
    const Polynomial hk = homogeneous_part(p, k);
    CHECK((hk.is_zero() || hk.is_homogeneous()));
    sum += hk;
  }
  CHECK(sum == p);
  for (int t = 0; t < 50; ++t) {
    const Point x = rng.ball(3, 2.0);
    CHECK(std::abs((p * q).evaluate(x) - p.evaluate(x) * q.evaluate(x)) < 1e-12);
    CHECK(std::abs((p + q).evaluate(x) - (p.evaluate(x) + q.evaluate(x))) < 1e-12);
    CHECK(std::abs(power(q, 3).evaluate(x) - std::pow(q.evaluate(x), 3)) < 1e-10);
  }
  CHECK((p * q).degree() == p.degree() + q.degree());
}

TEST_CASE("sup_norm examples") {
  // Oracle: dense radial grid of |x|/(1+|x|^2)^{1/2}.
  double oracle = 0.0;
  for (int i = 0; i <= 100000; ++i) {
    const double r = std::pow(10.0, -3.0 + 9.0 * i / 100000.0);
    oracle = std::max(oracle, r / std::sqrt(1.0 + r * r));
  }
  const SupNormResult g = sup_norm(NormedPoly(s(1, 0), 1));
  CHECK(g.lower <= g.upper);
  CHECK(g.upper == doctest::Approx(oracle).epsilon(1e-3));
  CHECK(g.lower == doctest::Approx(1.0).epsilon(1e-3));

  const SupNormResult h = sup_norm(NormedPoly(s(2, 0), 1, true));
  CHECK(h.lower == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(h.upper >= h.lower);

  const SupNormResult z = sup_norm(NormedPoly(s(1, 0), 1), Region::finite({{0.0}}));
  CHECK(z.lower == 0.0);
  CHECK(z.upper == 0.0);
}

TEST_CASE("sup_norm: nested regions give lb(E) <= ub(F)") {
  const NormedPoly p(s(1, 0) * s(1, 0) - s(1, 0) * Complex(0.5, 1) + c(1, 2.0), 2);
  SupNormBudget b;
  b.samples = 800;
  for (double r : {0.5, 1.0, 1.5}) {
    const auto e = sup_norm(p, Region::ball({0.0}, r), b, NormKind::Root);
    const auto f = sup_norm(p, Region::ball({0.0}, 2 * r), b, NormKind::Root);
    CHECK(e.lower <= f.upper + 1e-12);
    CHECK(e.lower <= e.upper + 1e-12);
  }
  const auto e = sup_norm(p, Region::sphere({0.0}, 1.0), b, NormKind::Root);
  const auto f = sup_norm(p, Region::ball({0.0}, 1.0), b, NormKind::Root);
  CHECK(e.lower <= f.upper + 1e-12);
}
