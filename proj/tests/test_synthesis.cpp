#include <doctest.h>

#include <cmath>
#include <numeric>

#include "convlab/rng.hpp"
#include "convlab/synthesis.hpp"

using namespace convlab;

namespace {

Polynomial var(int n, int i) { return Polynomial::variable(n, i); }
Polynomial cst(int n, Complex c) { return Polynomial::constant(n, c); }

TargetSet harmonic_target() {
  TargetSet t;
  for (int i = 1; i <= 8; ++i) t.components.push_back(var(1, 0) - cst(1, 1.0 / i));
  t.tail = Region::ball({0.0}, 1.0 / 9);
  return t;
}

const SynthesisReport& harmonic_report() {
  static const SynthesisReport r = synth_block(harmonic_target());
  return r;
}

TargetSet projective_axis() {
  TargetSet t;
  t.space = Space::Projective;
  t.n = 2;
  t.components.push_back(var(2, 0));
  return t;
}

const SynthesisReport& projective_report() {
  static const SynthesisReport r = synth_projective(projective_axis());
  return r;
}

Verdict verdict_at(const SynthesisReport& r, const TargetSet& t, const Point& x) {
  const auto v = verify(r.spec, t, {{x, t.contains(x)}}, r.horizon, r.classifier);
  return v.verdicts.front().verdict.kind;
}

// Brute-force largest a/b < 1, b <= b_max, with (r/m)^(a/b) > 1/2 and sample_norm < m^(-b/a).
double oracle_beta(double r, double m, double sample_norm, int b_max) {
  double best = 0.0;
  for (int b = 2; b <= b_max; ++b)
    for (int a = 1; a < b; ++a) {
      if (std::gcd(a, b) != 1) continue;
      const double beta = static_cast<double>(a) / b;
      if (!(std::pow(r / m, beta) > 0.5)) continue;
      if (sample_norm > 0.0 && !(sample_norm < std::pow(m, -1.0 / beta))) continue;
      best = std::max(best, beta);
    }
  return best;
}

}  // namespace

TEST_CASE("synth_variety examples") {
  const SynthesisReport axes = synth_variety(var(2, 0) * var(2, 1));
  CHECK(axes.exactness == Exactness::Exact);
  CHECK(axes.class_ok);
  CHECK(axes.ok());
  const auto on = restrict_affine(axes.spec, {0.0, 5.0}, 64);
  for (std::size_t j = 1; j < on.size(); ++j) CHECK(on.value(j) == Complex(0.0));
  CHECK(classify(on, axes.classifier).kind == Verdict::Converges);
  const auto off = restrict_affine(axes.spec, {1.0, 1.0}, 64);
  for (int k = 1; k <= 32; ++k) CHECK(std::abs(off.value(2 * k)) == doctest::Approx(std::pow(k, k)).epsilon(1e-12));
  CHECK(classify(off, axes.classifier).kind == Verdict::Diverges);
  REQUIRE(axes.joint.has_value());
  CHECK(axes.joint->kind == Verdict::Diverges);

  const SynthesisReport line = synth_variety(var(1, 0) - cst(1, 1.0));
  CHECK(classify(restrict_affine(line.spec, {1.0}, 64), line.classifier).kind == Verdict::Converges);
  const auto zero = restrict_affine(line.spec, {0.0}, 64);
  for (int k = 1; k <= 64; ++k) CHECK(std::abs(zero.value(k)) == doctest::Approx(std::pow(k, k)).epsilon(1e-12));
  CHECK(classify(zero, line.classifier).kind == Verdict::Diverges);
  CHECK_THROWS_AS(synth_variety(cst(1, 2.0)), Error);
}

TEST_CASE("synth_variety: every probe consistent, joint series divergent") {
  const Polynomial a = var(2, 0), b = var(2, 1);
  for (const Polynomial& p : {var(1, 0) - cst(1, 1.0), a * b, a * a + b * b}) {
    const SynthesisReport r = synth_variety(p);
    CHECK(r.ok());
    CHECK(r.indeterminate() == 0);
    CHECK(check_class(r.spec, 1, 0, 4 * r.horizon));
    CHECK(r.verdicts.size() >= 200);
    REQUIRE(r.joint.has_value());
    CHECK(r.joint->kind == Verdict::Diverges);
    for (const auto& pr : r.verdicts)
      CHECK(pr.verdict.kind == (pr.on_target ? Verdict::Converges : Verdict::Diverges));
  }
}

TEST_CASE("verify examples") {
  const SynthesisReport axes = synth_variety(var(2, 0) * var(2, 1));
  TargetSet t;
  t.n = 2;
  t.components = {var(2, 0) * var(2, 1)};
  const auto v = verify(axes.spec, t, {{{0.0, 5.0}, true}, {{1.0, 1.0}, false}}, 64, axes.classifier);
  CHECK(v.verdicts[0].level == 5);
  CHECK(v.verdicts[0].consistent);
  CHECK(v.verdicts[1].escapes);
  CHECK(v.verdicts[1].consistent);
  CHECK(v.verdicts[1].level > v.verdicts[1].level_half);

  SeriesSpec geo;
  TermRule r;
  r.factors.push_back({var(1, 0), 1, 0, std::nullopt});
  geo.rules.push_back(r);
  TargetSet all;
  const auto g = verify(geo, all, {{{7.0}, false}}, 64, {});
  CHECK(g.verdicts[0].level == 7);
  CHECK(g.verdicts[0].verdict.kind == Verdict::Converges);
}

TEST_CASE("choose_beta matches a brute-force search") {
  CounterRng rng(14);
  for (int t = 0; t < 300; ++t) {
    const int m = rng.uniform_int(1, 9);
    const double r = m * rng.uniform(0.4, 1.0);
    const double sn = t % 2 ? 0.0 : rng.uniform(0.0, 0.9) / m;
    const auto [a, b] = choose_beta(r, m, sn, 64);
    const double want = oracle_beta(r, m, sn, 64);
    if (want == 0.0) {
      CHECK(a == 0);
      continue;
    }
    REQUIRE(b > 0);
    CHECK(std::gcd(a, b) == 1);
    CHECK(static_cast<double>(a) / b == doctest::Approx(want).epsilon(1e-12));
  }
  // r = m: every beta < 1 passes, the largest is 63/64
  CHECK(choose_beta(3.0, 3, 0.0, 64) == std::pair<int, int>{63, 64});
  CHECK(choose_beta(1e-20, 8, 0.0, 64) == std::pair<int, int>{0, 0});
}

TEST_CASE("beta_construct examples") {
  const NormedPoly p(var(1, 0), 1);
  // ||(z,1)|| = sup |z| / (1 + |z|^2)^{1/2} = 1
  const BetaWitness w = beta_construct(p, 2, 0.7, {1.0}, {{0.0}}, 64, 1.0);
  CHECK(w.beta() == doctest::Approx(oracle_beta(0.7, 2, 0.0, 64)));
  CHECK(w.q() == w.b);
  // |(h(1),q)| = |p(1)|^beta m^(1-beta) = 2^(1-beta) > m/2 = 1
  CHECK(w.value({1.0}) == doctest::Approx(std::pow(2.0, 1.0 - w.beta())).epsilon(1e-12));
  CHECK(w.value({1.0}) > 1.0);
  CHECK(w.value({0.0}) == 0.0);
  const Polynomial h = w.expand();
  CHECK(h.degree() == w.a);
  CHECK(std::abs(h.evaluate({1.0})) == doctest::Approx(std::pow(2.0, w.b - w.a)).epsilon(1e-12));

  TargetSet t;
  t.components = {var(1, 0)};
  const WitnessCheck c = recheck_witness(w, t, 5);
  CHECK(c.ok);
  CHECK(c.clause_i == 0.0);
  CHECK(c.clause_ii <= 2.0);
  CHECK(c.clause_iii > 1.0);

  // too small r relative to m
  CHECK_THROWS_AS(beta_construct(p, 8, 1e-20, {1e-20}, {{0.0}}, 64, 1.0), Error);
}

TEST_CASE("block synthesis examples") {
  const TargetSet t = harmonic_target();
  const SynthesisReport& r = harmonic_report();
  CHECK(r.exactness == Exactness::Windowed);
  CHECK(r.class_ok);
  CHECK(r.ok());
  CHECK(verdict_at(r, t, {1.0 / 3}) == Verdict::Converges);
  CHECK(verdict_at(r, t, {0.4}) == Verdict::Diverges);
  // at 1/3 blocks m >= 3 vanish and blocks m < 3 stay below m
  for (const auto& w : r.witnesses) {
    if (w.m >= 3) CHECK(w.p.poly().evaluate_snapped({1.0 / 3}) == Complex(0.0));
    if (w.m < 3) CHECK(w.value({1.0 / 3}) / std::sqrt(1.0 + 1.0 / 9) <= 2.0);
  }
}

TEST_CASE("block synthesis: witnesses re-verify on fresh samples") {
  const TargetSet t = harmonic_target();
  const SynthesisReport& r = harmonic_report();
  REQUIRE(!r.witnesses.empty());
  std::size_t bad = 0;
  for (const auto& w : r.witnesses)
    if (!recheck_witness(w, t, 1234).ok) ++bad;
  CHECK(bad == 0);
}

TEST_CASE("block synthesis: exponents increase and the joint series diverges") {
  const SynthesisReport& r = harmonic_report();
  const auto idx = term_indices(r.spec, r.horizon);
  for (std::size_t i = 1; i < idx.size(); ++i) CHECK(idx[i].exponent > idx[i - 1].exponent);
  CHECK(check_class(r.spec, 1, 0, r.horizon));
  REQUIRE(r.joint.has_value());
  CHECK(r.joint->kind == Verdict::Diverges);
}

TEST_CASE("block synthesis of a single variety agrees with synth_variety") {
  TargetSet t;
  t.components = {var(1, 0) - cst(1, 1.0)};
  const SynthesisReport b = synth_block(t);
  const SynthesisReport v = synth_variety(t.components[0]);
  CHECK(b.ok());
  ProbePlan plan;
  plan.on_target = 10;
  plan.off_target = 60;
  plan.window = 1.9;
  plan.min_distance = 0.1;
  for (const Probe& p : make_probes(t, plan)) {
    const auto a = verify(b.spec, t, {p}, b.horizon, b.classifier).verdicts.front().verdict.kind;
    const auto c = verify(v.spec, t, {p}, v.horizon, v.classifier).verdicts.front().verdict.kind;
    CHECK(a == c);
  }
}

TEST_CASE("projective synthesis examples") {
  const TargetSet t = projective_axis();
  const SynthesisReport& r = projective_report();
  CHECK(r.ok());
  CHECK(verdict_at(r, t, {0.0, 1.0}) == Verdict::Converges);
  CHECK(verdict_at(r, t, {1.0, 1.0}) == Verdict::Diverges);
  CHECK(verdict_at(r, t, {2.0, 2.0}) == verdict_at(r, t, {1.0, 1.0}));
  for (const auto& w : r.witnesses) CHECK(recheck_witness(w, t, 77).ok);
  // f = sum of homogeneous P_nu of strictly increasing degree
  const auto terms = materialize(r.spec, 2000);
  for (std::size_t i = 0; i < terms.size(); ++i) {
    CHECK(terms[i].coefficient.is_homogeneous());
    if (i > 0) CHECK(terms[i].exponent > terms[i - 1].exponent);
  }
}

TEST_CASE("enumeration synthesis examples") {
  TargetSet zero;
  zero.points = {{0.0}};
  const SynthesisReport z = synth_enumeration(zero);
  CHECK(z.ok());
  CHECK(verdict_at(z, zero, {0.0}) == Verdict::Converges);
  CHECK(verdict_at(z, zero, {1.0}) == Verdict::Diverges);

  TargetSet two;
  two.points = {{0.0}, {1.0}};
  const SynthesisReport t = synth_enumeration(two);
  CHECK(t.ok());
  CHECK(verdict_at(t, two, {0.5}) == Verdict::Diverges);
  CHECK(verdict_at(t, two, {1.0}) == Verdict::Converges);
  const auto idx = term_indices(t.spec, t.horizon);
  for (std::size_t i = 1; i < idx.size(); ++i) CHECK(idx[i].exponent > idx[i - 1].exponent);
  CHECK(check_class(t.spec, 1, 0, t.horizon));
}
