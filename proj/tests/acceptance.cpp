// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on any FAIL.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>

#include "convlab/pluripotential.hpp"
#include "convlab/rng.hpp"
#include "convlab/series.hpp"
#include "convlab/synthesis.hpp"
#include "convlab/weight.hpp"

using namespace convlab;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;
  std::string failures;
  void require(bool cond, const std::string& what) {
    if (cond) return;
    failures += (pass ? "" : "; ") + what;
    pass = false;
  }
};

using Clock = std::chrono::steady_clock;
double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

Polynomial var(int n, int i) { return Polynomial::variable(n, i); }
Polynomial cst(int n, Complex c) { return Polynomial::constant(n, c); }
Region circle() { return Region::sphere({0.0}, 1.0); }

void circle_diameter(Outcome& o) {
  for (int k : {2, 4, 8}) {
    const auto t0 = Clock::now();
    const FeketeConfig f = fekete_search(circle(), k);
    const double dt = seconds_since(t0);
    const double want = std::pow(k + 1.0, 1.0 / k);  // roots of unity
    const double rel = std::abs(f.d_k - want) / want;
    o.detail << "k=" << k << " d_k=" << f.d_k << " rel=" << rel << " t=" << dt << "s ";
    o.require(rel <= 0.02, "k=" + std::to_string(k) + " outside 2%");
    o.require(dt < 30.0, "k=" + std::to_string(k) + " over 30 s");
  }
}

void capacity_diameter(Outcome& o) {
  for (double rho : {0.5, 1.0, 2.0}) {
    const Region disk = Region::ball({0.0}, rho);
    const CapacityEstimate c = capacity(disk, 8);
    const TransfiniteDiameter d = transfinite_diameter(disk, 8);
    const double lo = std::max(c.c_lower, d.d - d.uncertainty);
    const double hi = std::min(c.c_upper, d.d + d.uncertainty);
    o.detail << "rho=" << rho << " c=[" << c.c_lower << "," << c.c_upper << "] d=" << d.d << "+-" << d.uncertainty
             << " ";
    o.require(lo <= 1.05 * hi, "rho=" + std::to_string(rho) + " no overlap within 5%");
  }
}

void finite_pluripolar(Outcome& o) {
  std::vector<Point> three{{0.0}, {0.5}, {Complex(0, 1)}};
  std::vector<Point> five;
  for (int i = 0; i < 5; ++i) five.push_back({std::polar(0.5 + 0.1 * i, 1.3 * i)});
  std::vector<Point> planar;
  for (int i = 0; i < 5; ++i) planar.push_back({std::polar(0.5, 1.3 * i), Complex(0.1 * i * i, 0.2)});
  for (const auto& pts : {three, five, planar}) {
    const int n = static_cast<int>(pts[0].size());
    const Region E = Region::finite(pts);
    const TransfiniteDiameter d = transfinite_diameter(E, 8);
    for (int k = 1; k <= 8; ++k)
      if (monomial_counts(n, k).m_k > static_cast<long long>(pts.size()))
        o.require(d.d_k[k - 1] == 0.0, "d_k nonzero past the point count");
    o.require(d.pluripolar, "finite set not flagged");
    if (n == 1) {
      const CapacityEstimate c = capacity(E, 8);
      o.detail << "N=" << pts.size() << " c_upper(k=8)=" << c.c_upper_by_k.back() << " ";
      o.require(c.c_upper_by_k.size() == 8 && c.c_upper_by_k.back() < 1e-3, "capacity bound not below 1e-3");
    }
  }
}

void variety_synthesis(Outcome& o) {
  const Polynomial a = var(2, 0), b = var(2, 1);
  for (const Polynomial& p : {var(1, 0) - cst(1, 1.0), a * b, a * a + b * b}) {
    const SynthesisReport r = synth_variety(p, 64);
    std::size_t on = 0, wrong = 0, indet = 0, thin = 0;
    for (const auto& pr : r.verdicts) {
      on += pr.on_target;
      if (pr.verdict.kind != (pr.on_target ? Verdict::Converges : Verdict::Diverges) || !pr.consistent) ++wrong;
      if (pr.verdict.kind == Verdict::Indeterminate && (pr.on_target || pr.distance >= 0.05)) ++indet;
      if (pr.verdict.margin <= 0.0) ++thin;
    }
    o.detail << p.to_string() << ": " << r.verdicts.size() << " probes (" << on << " on) wrong=" << wrong
             << " joint=" << (r.joint ? to_string(r.joint->kind) : "none") << " ";
    o.require(r.class_ok, "class check failed");
    o.require(r.verdicts.size() >= 200 && on >= 50, "too few probes");
    o.require(wrong == 0 && indet == 0 && thin == 0, "misclassified probes");
    o.require(r.joint && r.joint->kind == Verdict::Diverges, "joint series not DIVERGES");
  }
}

void block_synthesis(Outcome& o) {
  TargetSet t;
  for (int i = 1; i <= 8; ++i) t.components.push_back(var(1, 0) - cst(1, 1.0 / i));
  t.tail = Region::ball({0.0}, 1.0 / 9);
  BlockConfig cfg;
  cfg.m_max = 8;
  const SynthesisReport r = synth_block(t, cfg);
  std::size_t bad_w = 0, bad_on = 0, bad_off = 0;
  for (const auto& w : r.witnesses)
    if (!recheck_witness(w, t, 20241019, 1e-6).ok) ++bad_w;
  for (const auto& pr : r.verdicts) {
    if (pr.on_target && pr.verdict.kind != Verdict::Converges) ++bad_on;
    if (!pr.on_target && pr.verdict.kind != Verdict::Diverges) ++bad_off;
  }
  o.detail << r.witnesses.size() << " witnesses (" << bad_w << " failed), " << r.verdicts.size()
           << " probes, on-bad=" << bad_on << " off-bad=" << bad_off << " exactness=" << to_string(r.exactness);
  o.require(!r.witnesses.empty() && bad_w == 0, "witness recheck failed");
  o.require(!r.verdicts.empty() && bad_on == 0 && bad_off == 0, "probe verdicts wrong");
  o.require(r.exactness == Exactness::Windowed, "exactness not WINDOWED");
}

void projective_invariance(Outcome& o) {
  TargetSet t;
  t.space = Space::Projective;
  t.n = 2;
  t.components.push_back(var(2, 0));
  const SynthesisReport r = synth_projective(t);
  ProbePlan plan;
  plan.on_target = 10;
  plan.off_target = 40;
  plan.seed = 31;
  const std::vector<Probe> probes = make_probes(t, plan);
  CounterRng rng(53);
  std::size_t disagree = 0, total = 0;
  for (const Probe& p : probes) {
    std::vector<Probe> batch{p};
    for (int i = 0; i < 100; ++i) {
      const Complex lam = std::polar(std::exp(rng.uniform(-3.0, 3.0)), rng.uniform(0.0, 2 * M_PI));
      Point lx = p.x;
      for (auto& c : lx) c *= lam;
      batch.push_back({lx, p.on_target});
    }
    const auto v = verify(r.spec, t, batch, r.horizon, r.classifier);
    for (std::size_t i = 1; i < v.verdicts.size(); ++i, ++total)
      if (v.verdicts[i].verdict.kind != v.verdicts[0].verdict.kind) ++disagree;
  }
  o.detail << probes.size() << " probes x 100 scalings, disagreements=" << disagree << "/" << total;
  o.require(probes.size() == 50, "probe count");
  o.require(disagree == 0, "verdicts differ under scaling");
}

void saddulaev(Outcome& o) {
  const SaddulaevTransform v(WeightFunction::log_abs(var(1, 0)), 40);
  std::vector<Point> grid;
  for (int i = 0; i < 1000; ++i) {
    const double r = 3.0 * (i / 25) / 39.0;  // 40 radii in [0, 3], 25 angles each
    grid.push_back({std::polar(r, 2 * M_PI * (i % 25) / 25.0)});
  }
  std::size_t bound = 0, mono = 0, unit_bad = 0;
  for (const Point& x : grid) {
    const double val = v(x);
    const double ax = std::abs(x[0]);
    if (ax == 0.0) continue;
    if (val > std::max(0.0, std::log(ax)) + 1e-6) ++bound;
    const int j0 = v.monotone_from(x);
    for (int J = j0 + 1; J <= 40; ++J)
      if (v.partial_sum(x, J) > v.partial_sum(x, J - 1) + 1e-12) ++mono;
  }
  // at |x| = 1 every term is -2^{-j}: S_40 = -(1 - 2^{-40})
  double oracle = 0.0;
  for (int j = 1; j <= 40; ++j) oracle -= std::ldexp(1.0, -j);
  for (int t = 0; t < 64; ++t) {
    const double val = v({std::polar(1.0, 2 * M_PI * t / 64)});
    if (std::abs(val - oracle) > 1e-3 || std::abs(val + 1.0) > 1e-3) ++unit_bad;
  }
  const double at0 = v({0.0});
  o.detail << "grid=" << grid.size() << " bound-viol=" << bound << " mono-viol=" << mono << " unit-bad=" << unit_bad
           << " v(0)=" << at0;
  o.require(bound == 0, "v exceeds log+|x|");
  o.require(mono == 0, "partial sums not eventually monotone");
  o.require(unit_bad == 0, "v not within 1e-3 of -1 on |x| = 1");
  o.require(at0 == kLogFloor, "v(0) not at the floor");
}

void extremal_circle(Outcome& o) {
  for (double r : {1.0, 2.0, 5.0}) {
    const ExtremalEstimate e = extremal_lower(circle(), {r}, 8);
    const bool monomial = e.witness && e.witness->poly().terms().size() == 1;
    o.detail << "|x|=" << r << " Phi>=" << e.value << " ";
    o.require(e.value >= 0.98 * std::max(1.0, r), "lower bound short at |x|=" + std::to_string(r));
    o.require(r == 1.0 || monomial, "witness is not a monomial");
  }
  const Region origin = Region::finite({{0.0}});
  o.require(ghull_member(origin, {0.0}).verdict == HullVerdict::InsideHull, "0 not in hull of {0}");
  o.require(ghull_member(origin, {1.0}).verdict == HullVerdict::OutsideHull, "1 in hull of {0}");
  o.require(ghull_member(origin, {Complex(0.3, -0.4)}).verdict == HullVerdict::OutsideHull, "0.3-0.4i in hull of {0}");
  std::size_t outside = 0;
  for (Complex z : {Complex(0.0), Complex(0.5), Complex(1.0), Complex(0, 2), Complex(-3.0), Complex(5.0)})
    if (ghull_member(circle(), {z}).verdict != HullVerdict::InsideHull) ++outside;
  o.detail << "circle hull misses=" << outside;
  o.require(outside == 0, "circle hull verdict not INSIDE");
}

// Random class (A,B) spec: base^(a k + b) t^(ea k + eb) with deg(base)(a k + b) <= A(ea k + eb) + B.
SeriesSpec random_class_spec(CounterRng& rng, int A, int B, Complex& root) {
  SeriesSpec s;
  s.n = 1;
  TermRule r;
  const int ea = rng.uniform_int(1, 2);
  const int eb = rng.uniform_int(0, 2);
  const int deg = rng.uniform_int(1, 2);
  const int a = std::max(1, (A * ea) / deg);
  const int b = rng.uniform_int(0, std::max(0, (A * eb + B) / deg));
  root = Complex(rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0));
  Polynomial base = var(1, 0) - cst(1, root);
  if (deg == 2) base *= var(1, 0) - cst(1, Complex(rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)));
  r.factors.push_back({base, a, b, std::nullopt});
  r.scale.form = rng.uniform_int(0, 1) ? "k^k" : "const";
  r.exp_a = ea;
  r.exp_b = eb;
  s.rules.push_back(r);
  return s;
}

void class_reduction(Outcome& o) {
  CounterRng rng(2024);
  std::size_t specs = 0, probes = 0, differ = 0, indet = 0;
  while (specs < 100) {
    const int A = rng.uniform_int(1, 4);
    const int B = rng.uniform_int(0, 4 - A);
    Complex root;
    const SeriesSpec f = random_class_spec(rng, A, B, root);
    if (!check_class(f, A, B, 256)) continue;
    ++specs;
    const SeriesSpec g = normalize_to_10(f, A, B);
    const int N = A + B;
    // long horizon: bounded-but-rising |c_j|^(1/j) has a 1/k slope transient
    const long Df = 512 * f.rules[0].exp_a;
    ClassifierConfig cf, cg;
    cf.slope_min = 0.25 / f.rules[0].exp_a;
    cf.slope_conv = 0.1 / f.rules[0].exp_a;
    cg.slope_min = cf.slope_min / N;
    cg.slope_conv = cf.slope_conv / N;
    std::vector<Point> xs{{root}};
    for (int i = 0; i < 9; ++i) xs.push_back(rng.ball(1, 2.0));
    for (const Point& x : xs) {
      const auto vf = classify(restrict_affine(f, x, Df), cf);
      const auto vg = classify(restrict_affine(g, x, N * (Df + 1)), cg);
      ++probes;
      if (vf.kind != vg.kind) ++differ;
      if (vf.kind == Verdict::Indeterminate) ++indet;
    }
  }
  o.detail << specs << " specs, " << probes << " probes, differing=" << differ << " indeterminate=" << indet;
  o.require(differ == 0, "verdicts changed under normalize_to_10");
}

void enumeration(Outcome& o) {
  const auto t0 = Clock::now();
  for (const std::vector<Point>& K : {std::vector<Point>{{0.0}}, std::vector<Point>{{0.0}, {1.0}}}) {
    TargetSet t;
    t.points = K;
    const SynthesisReport r = synth_enumeration(t);
    std::vector<Probe> grid;
    for (int i = 0; i < 10; ++i)
      for (int j = 0; j < 10; ++j) {
        const Point x{Complex(-2.0 + 0.5 * i, -2.0 + 0.5 * j)};
        grid.push_back({x, t.contains(x)});
      }
    const auto v = verify(r.spec, t, grid, r.horizon, r.classifier);
    std::size_t wrong = 0, on = 0;
    for (const auto& pr : v.verdicts) {
      on += pr.on_target;
      if (pr.verdict.kind != (pr.on_target ? Verdict::Converges : Verdict::Diverges)) ++wrong;
    }
    bool exact = !r.spec.rules.empty();
    for (const auto& rule : r.spec.rules)
      for (const auto& f : rule.factors) exact = exact && f.exact.has_value();
    o.detail << "|K|=" << K.size() << " grid=" << grid.size() << " on=" << on << " wrong=" << wrong << " ";
    o.require(on == K.size(), "grid misses K");
    o.require(wrong == 0, "grid verdicts wrong");
    o.require(exact, "series not in exact-rational form");
  }
  const double dt = seconds_since(t0);
  o.detail << "t=" << dt << "s";
  o.require(dt < 300.0, "over 5 minutes");
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<void(Outcome&)>>> criteria{
      {"circle transfinite diameter", circle_diameter},
      {"capacity-diameter agreement on disks", capacity_diameter},
      {"pluripolarity of finite sets", finite_pluripolar},
      {"variety synthesis exactness", variety_synthesis},
      {"block synthesis on {1/i}", block_synthesis},
      {"projective scale invariance", projective_invariance},
      {"Saddulaev transform of log|s|", saddulaev},
      {"extremal function and G-hull of the circle", extremal_circle},
      {"class reduction to (1,0)", class_reduction},
      {"enumeration synthesizer", enumeration},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    const auto t0 = Clock::now();
    try {
      criteria[i].second(o);
    } catch (const std::exception& e) {
      o.require(false, std::string("exception: ") + e.what());
    }
    failed += !o.pass;
    std::printf("%s %2zu %s (%.1fs): %s%s%s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(),
                seconds_since(t0), o.detail.str().c_str(), o.pass ? "" : " | ", o.failures.c_str());
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
