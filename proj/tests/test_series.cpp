#include <doctest.h>

#include <cmath>
#include <sstream>

#include "convlab/rng.hpp"
#include "convlab/series.hpp"

using namespace convlab;

namespace {

Polynomial var(int n, int i) { return Polynomial::variable(n, i); }

// sum_k scale(k) * base^(pa k + pb) t^(ea k + eb), k >= k0
TermRule rule(Polynomial base, int pa, int pb, int ea, int eb, const std::string& form = "const", long k0 = 1,
              long k1 = -1) {
  TermRule r;
  r.factors.push_back({std::move(base), pa, pb, std::nullopt});
  r.scale.form = form;
  r.exp_a = ea;
  r.exp_b = eb;
  r.k_start = k0;
  r.k_end = k1;
  return r;
}

SeriesSpec affine(int n, std::vector<TermRule> rules) {
  SeriesSpec s;
  s.n = n;
  s.rules = std::move(rules);
  return s;
}

SeriesSpec projective(int n, std::vector<TermRule> rules) {
  SeriesSpec s = affine(n, std::move(rules));
  s.space = Space::Projective;
  return s;
}

// sum_j (j s)^j t^j
SeriesSpec jj_series() { return affine(1, {rule(var(1, 0), 1, 0, 1, 0, "k^k")}); }

// Least-squares slope of y on x, for oracle comparisons.
double ls_slope(const std::vector<double>& x, const std::vector<double>& y) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double m = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) sx += x[i], sy += y[i], sxx += x[i] * x[i], sxy += x[i] * y[i];
  return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

}  // namespace

TEST_CASE("check_class examples") {
  CHECK(check_class(affine(1, {rule(var(1, 0), 1, 0, 1, 0)}), 1, 0, 64));
  CHECK_FALSE(check_class(affine(1, {rule(var(1, 0), 2, 0, 1, 0)}), 1, 0, 64));
  CHECK(check_class(affine(1, {rule(var(1, 0), 2, 1, 1, 0)}), 2, 1, 64));
  // the bound beyond the horizon comes from the rule slopes
  CHECK_FALSE(check_class(affine(1, {rule(var(1, 0), 2, 0, 1, 40)}), 1, 0, 10));
}

TEST_CASE("normalize_to_10 examples") {
  const SeriesSpec f = affine(1, {rule(var(1, 0), 2, 0, 1, 0, "const", 0)});
  const SeriesSpec g = normalize_to_10(f, 2, 0);
  const auto terms = materialize(g, 40);
  REQUIRE(!terms.empty());
  for (const auto& t : terms) {
    CHECK(t.exponent == 2 * t.k + 2);
    CHECK(t.coefficient == power(var(1, 0), static_cast<int>(2 * t.k)));
  }
  CHECK(check_class(g, 1, 0, 200));
  REQUIRE(g.tag.has_value());
  CHECK(*g.tag == ClassTag{1, 0});

  TermRule one;
  one.k_start = 0;
  one.k_end = 0;
  one.exp_a = 1;
  one.exp_b = 0;
  const SeriesSpec h = normalize_to_10(affine(1, {one}), 2, 1);
  const auto ht = materialize(h, 10);
  REQUIRE(ht.size() == 1);
  CHECK(ht[0].exponent == 3);
  CHECK(ht[0].coefficient == Polynomial::constant(1, 1.0));

  const SeriesSpec jj = jj_series();
  const SeriesSpec jg = normalize_to_10(jj, 1, 1);
  CHECK(classify(restrict_affine(jj, {1.0}, 64)).kind == Verdict::Diverges);
  CHECK(classify(restrict_affine(jg, {1.0}, 128)).kind == Verdict::Diverges);
  CHECK_THROWS_AS(normalize_to_10(affine(1, {rule(var(1, 0), 2, 0, 1, 0)}), 1, 0), Error);
}

TEST_CASE("restrict_affine examples") {
  const SeriesSpec f = jj_series();
  const auto z = restrict_affine(f, {0.0}, 30);
  for (std::size_t j = 1; j < z.size(); ++j) CHECK(z.value(j) == Complex(0.0));
  const auto h = restrict_affine(f, {0.5}, 30);
  for (int j = 1; j <= 30; ++j)
    CHECK(std::abs(h.value(j)) == doctest::Approx(std::pow(j / 2.0, j)).epsilon(1e-12));
  const SeriesSpec g = affine(2, {rule(var(2, 0) * var(2, 1), 1, 0, 2, 0, "k^k")});
  const auto gs = restrict_affine(g, {1.0, 1.0}, 40);
  for (int k = 1; k <= 20; ++k) {
    CHECK(std::abs(gs.value(2 * k)) == doctest::Approx(std::pow(k, k)).epsilon(1e-12));
    CHECK(gs.value(2 * k - 1) == Complex(0.0));
  }
  CHECK_THROWS_AS(restrict_affine(g, {1.0}, 10), Error);
}

TEST_CASE("restrict_affine agrees with materialize") {
  CounterRng rng(9);
  TermRule r = rule(var(2, 0) - var(2, 1) * Complex(0, 2), 1, 1, 3, 1, "k^k");
  r.scale.c = 0.5;
  r.scale.value = Complex(0.3, -0.2);
  r.factors.push_back({var(2, 1) + Polynomial::constant(2, 1.0), 1, 0, std::nullopt});
  const SeriesSpec f = affine(2, {r, rule(var(2, 0), 1, 0, 3, 0)});
  const auto terms = materialize(f, 50);
  for (int t = 0; t < 20; ++t) {
    const Point x = rng.ball(2, 1.5);
    const auto st = restrict_affine(f, x, 50);
    for (const auto& term : terms) {
      // expanded evaluation is only accurate up to sum |a_alpha| |x^alpha|
      Point ax;
      for (const Complex& v : x) ax.push_back(std::abs(v));
      double bound = 0.0;
      for (const auto& [alpha, c] : term.coefficient.terms())
        bound += std::abs(c) * std::abs(Polynomial::monomial(alpha).evaluate(ax));
      const Complex want = term.coefficient.evaluate(x);
      CHECK(std::abs(st.value(term.exponent) - want) <= 1e-12 * bound + 1e-300);
      const TermRule& r = f.rules[term.rule];
      Complex direct = std::polar(std::exp(r.scale.log_abs(term.k)), r.scale.arg());
      for (const auto& fac : r.factors) direct *= std::pow(fac.base.evaluate(x), fac.power(term.k));
      CHECK(std::abs(st.value(term.exponent) - direct) <= 1e-10 * std::abs(direct));
    }
  }
}

TEST_CASE("restrict_projective examples") {
  const SeriesSpec f = projective(2, {rule(var(2, 0) * var(2, 1), 1, 0, 1, 0, "const", 0)});
  const auto a = restrict_projective(f, {1.0, 1.0}, 40);
  for (int j = 0; j <= 20; ++j) CHECK(std::abs(a.value(2 * j) - Complex(1.0)) < 1e-14);
  const auto b = restrict_projective(f, {1.0, 0.0}, 40);
  for (std::size_t k = 1; k < b.size(); ++k) CHECK(b.value(k) == Complex(0.0));
  const SeriesSpec g = projective(3, {rule(var(3, 0), 1, 0, 1, 0, "k^k")});
  const auto c = restrict_projective(g, {1.0, 0.0, 0.0}, 30);
  for (int k = 1; k <= 30; ++k) CHECK(std::abs(c.value(k)) == doctest::Approx(std::pow(k, k)).epsilon(1e-12));
  CHECK_THROWS_AS(restrict_projective(g, {0.0, 0.0, 0.0}, 10), Error);
}

TEST_CASE("classify examples") {
  std::vector<Complex> geo, fact, zero(65, 0.0);
  for (int j = 0; j <= 64; ++j) geo.push_back(std::pow(2.0, j));
  for (int j = 0; j <= 60; ++j) fact.push_back(std::exp(std::lgamma(j + 1.0)));
  const auto g = classify(stream_from_values(geo));
  CHECK(g.kind == Verdict::Converges);
  CHECK(g.growth_estimate == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(std::isfinite(g.growth_estimate));

  const auto f = classify(stream_from_values(fact));
  CHECK(f.kind == Verdict::Diverges);
  CHECK(f.margin > 0.0);
  // oracle: (j!)^{1/j} ~ j/e, so log r_j has slope close to 1 against log j
  std::vector<double> lx, ly;
  for (int j = 30; j <= 60; ++j) lx.push_back(std::log(j)), ly.push_back(std::lgamma(j + 1.0) / j);
  CHECK(f.slope == doctest::Approx(ls_slope(lx, ly)).epsilon(0.05));

  const auto z = classify(stream_from_values(zero));
  CHECK(z.kind == Verdict::Converges);
  CHECK(z.growth_estimate == 0.0);

  CHECK_THROWS_AS(classify(stream_from_values(std::vector<Complex>(5, 1.0))), Error);
}

TEST_CASE("classify: verdict does not depend on interleaved zero coefficients") {
  for (int kind = 0; kind < 3; ++kind) {
    std::vector<Complex> dense, sparse;
    for (int j = 0; j <= 64; ++j) {
      const double v = kind == 0 ? std::pow(1.7, j) : kind == 1 ? std::pow(j, j) : std::pow(0.3, j);
      dense.push_back(v);
      sparse.push_back(j % 3 == 1 ? 0.0 : v);
    }
    CHECK(classify(stream_from_values(dense)).kind == classify(stream_from_values(sparse)).kind);
  }
}

TEST_CASE("classify: CONVERGES has finite growth, DIVERGES exceeds the slope threshold") {
  CounterRng rng(21);
  for (int t = 0; t < 200; ++t) {
    std::vector<Complex> c;
    const double rate = rng.uniform(-1.0, 2.0), base = rng.uniform(0.1, 5.0);
    for (int j = 0; j <= 64; ++j)
      c.push_back(rng.complex_normal() * std::pow(base, j) * std::exp(rate * j * std::log(std::max(j, 1))));
    const ClassifierConfig cfg;
    const auto v = classify(stream_from_values(c), cfg);
    if (v.kind == Verdict::Converges) CHECK(std::isfinite(v.growth_estimate));
    if (v.kind == Verdict::Diverges) CHECK(v.slope >= cfg.slope_min);
    if (rate > 0.4) CHECK(v.kind == Verdict::Diverges);
    if (rate < 0.0) CHECK(v.kind == Verdict::Converges);
  }
}

TEST_CASE("hartogs_joint_check examples") {
  CHECK(hartogs_joint_check(affine(1, {rule(var(1, 0), 1, 0, 1, 0)}), 64).kind == Verdict::Converges);
  CHECK(hartogs_joint_check(jj_series(), 64).kind == Verdict::Diverges);
  CHECK(hartogs_joint_check(affine(1, {}), 64).kind == Verdict::Converges);
}

TEST_CASE("materialize: deterministic, prefix-stable, increasing, collision-checked") {
  const SeriesSpec f = affine(2, {rule(var(2, 0), 1, 0, 2, 0), rule(var(2, 1), 1, 0, 2, 1, "k^k")});
  const auto a = materialize(f, 60), b = materialize(f, 60), c = materialize(f, 120);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].exponent == b[i].exponent);
    CHECK(a[i].coefficient == b[i].coefficient);
    CHECK(a[i].exponent == c[i].exponent);
    if (i > 0) CHECK(a[i].exponent > a[i - 1].exponent);
  }
  const SeriesSpec clash = affine(1, {rule(var(1, 0), 1, 0, 2, 0), rule(var(1, 0), 2, 0, 4, 0)});
  CHECK_THROWS_AS(materialize(clash, 20), Error);
}

TEST_CASE("projective restriction verdicts are scale invariant") {
  // H_k = k^k (x1 - 2 x2)^k: diverges off the line x1 = 2 x2, vanishes on it
  const SeriesSpec f = projective(2, {rule(var(2, 0) - var(2, 1) * 2.0, 1, 0, 1, 0, "k^k")});
  CounterRng rng(4);
  for (int t = 0; t < 100; ++t) {
    const Point x = t % 10 == 0 ? Point{2.0, 1.0} : rng.unit_sphere(2);
    const Complex lam = std::polar(std::exp(rng.uniform(-3.0, 3.0)), rng.uniform(0.0, 6.28));
    const Point lx{x[0] * lam, x[1] * lam};
    const auto v1 = classify(restrict_projective(f, x, 64));
    const auto v2 = classify(restrict_projective(f, lx, 64));
    CHECK(v1.kind == v2.kind);
    CHECK(v1.kind == (t % 10 == 0 ? Verdict::Converges : Verdict::Diverges));
  }
}

TEST_CASE("normalize_to_10 preserves probe verdicts") {
  CounterRng rng(12);
  const SeriesSpec f = affine(1, {rule(var(1, 0) - Polynomial::constant(1, 0.5), 1, 0, 1, 0, "k^k")});
  const SeriesSpec g = normalize_to_10(f, 2, 1);
  for (int t = 0; t < 50; ++t) {
    const Point x = t == 0 ? Point{0.5} : rng.ball(1, 2.0);
    const auto a = classify(restrict_affine(f, x, 64));
    const auto b = classify(restrict_affine(g, x, 3 * 64));
    if (a.kind != Verdict::Indeterminate && b.kind != Verdict::Indeterminate) CHECK(a.kind == b.kind);
    CHECK(a.kind == (t == 0 ? Verdict::Converges : Verdict::Diverges));
  }
}

TEST_CASE("bounded normalized term values give CONVERGES") {
  // P_j = (s/3)^j: ||(P_j(s), j)|| <= 1 for every s, so the restriction converges everywhere
  const SeriesSpec f = affine(1, {rule(var(1, 0) * (1.0 / 3.0), 1, 0, 1, 0)});
  CounterRng rng(2);
  for (int t = 0; t < 50; ++t) {
    const Point x = rng.ball(1, 10.0);
    CHECK(classify(restrict_affine(f, x, 64)).kind == Verdict::Converges);
  }
}

TEST_CASE("coefficient stream CSV") {
  std::ostringstream os;
  write_stream_csv(os, stream_from_values({1.0, 2.0, 0.0}));
  CHECK(os.str() == "j,re,im,r_j\n0,1,0,0\n1,2,0,2\n2,0,0,0\n");
}
