#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "convlab/norms.hpp"
#include "convlab/polynomial.hpp"
#include "convlab/region.hpp"
#include "convlab/series.hpp"

namespace convlab {

/// Target convergence set.
///   Affine:     E = union_m {g_m = 0} with g_m = prod_{i<=m} p_i, or the
///               finite set `points` (enumeration mode).
///   Projective: the same with homogeneous p_i, points of P^{n-1}.
/// `tail`, when set, is the region where the untruncated part of a countable
/// union accumulates; it is excluded from certification.
struct TargetSet {
  Space space = Space::Affine;
  int n = 1;
  std::vector<Polynomial> components;
  std::vector<Point> points;
  std::optional<Region> tail;

  Polynomial chain(int m) const;  // g_m; constant past the last component
  int blocks() const { return static_cast<int>(components.size()); }
  /// Distance from x to the (truncated) target; projective distance for
  /// projective targets.
  double distance(const Point& x) const;
  bool contains(const Point& x, double tol = 1e-9) const;
  Region region() const;
};

struct BetaWitness {
  NormedPoly p{Polynomial(1), 1};
  int a = 1;
  int b = 2;
  int m = 1;
  Point y;
  std::optional<Point> u;  // projective: conj(y)/|y|
  double r = 0.0;
  double p_norm = 1.0;     // upper bound for ||(p,v)||
  double sample_norm = 0.0;  // max over the E_m samples
  int q() const { return b * p.weight(); }
  double beta() const { return static_cast<double>(a) / b; }
  /// |(h(x),q)| (affine) or ||(h(x),q)|| (projective), in log form.
  double value(const Point& x) const;
  double log_value(const Point& x) const;
  /// h as an explicit polynomial (small degrees only).
  Polynomial expand() const;
  /// The rule emitting h^e at exponent (or degree) q e.
  TermRule rule(int e) const;
};

/// Largest a/b < 1 with b <= b_max, (r/m)^{a/b} > 1/2 and, when
/// sample_norm > 0, sample_norm < m^{-b/a}. Returns {0, 0} when none.
std::pair<int, int> choose_beta(double r, int m, double sample_norm, int b_max);

BetaWitness beta_construct(const NormedPoly& p, int m, double r, const Point& y,
                           const std::vector<Point>& e_samples, int b_max = 64,
                           std::optional<double> p_norm = std::nullopt);

struct WitnessCheck {
  double clause_i = 0.0;    // max |(h,q)| on fresh E_m samples (<= 1)
  double clause_ii = 0.0;   // max ||(h(x),q)|| on fresh global samples (<= m)
  double clause_iii = 0.0;  // value at y (> m/2)
  bool ok = false;
};
WitnessCheck recheck_witness(const BetaWitness& w, const TargetSet& target, std::uint64_t seed,
                             double tol = 1e-6);

enum class Exactness { Exact, Windowed };
std::string to_string(Exactness e);

struct CertifiedWindow {
  double radius = 0.0;   // polydisk |s_i| <= radius (projective: both P^1 charts)
  double epsilon = 0.0;  // excluded neighborhood of the target
  std::optional<Region> excluded;  // tail region
  std::size_t cells = 0;
  std::size_t uncovered = 0;  // cells dropped after budget exhaustion
  bool empty() const { return radius <= 0.0; }
};

struct Probe {
  Point x;
  bool on_target = false;
};

struct ProbeResult {
  Point x;
  bool on_target = false;
  double distance = 0.0;
  ConvergenceVerdict verdict;
  int level = 0;           // smallest m with |s| <= m and max r_j <= m over the horizon
  int level_half = 0;      // the same over the first quarter of the horizon
  bool escapes = false;    // max r_j in the tail exceeds the first-quarter max
  bool consistent = false;
};

struct SynthesisReport {
  std::string mode;
  SeriesSpec spec;
  long horizon = 0;
  ClassifierConfig classifier;
  std::vector<ProbeResult> verdicts;
  CertifiedWindow certified_window;
  Exactness exactness = Exactness::Exact;
  std::vector<BetaWitness> witnesses;
  std::optional<ConvergenceVerdict> joint;
  bool class_ok = false;
  std::vector<std::string> notes;

  std::size_t inconsistent() const;
  std::size_t indeterminate() const;
  bool ok() const { return class_ok && inconsistent() == 0; }
};

struct ProbePlan {
  std::size_t on_target = 50;
  std::size_t off_target = 150;
  double window = 2.0;
  double min_distance = 0.05;
  std::uint64_t seed = 7;
};

/// Seeded probes: samples of the target and points of the window at
/// distance >= min_distance from it (and outside the tail region).
std::vector<Probe> make_probes(const TargetSet& target, const ProbePlan& plan);

ClassifierConfig variety_classifier(int degree);

SynthesisReport synth_variety(const Polynomial& p, long horizon = 64);

struct EnumerationConfig {
  int height = 6;      // coefficient height bound
  int max_degree = 2;  // k <= max_degree
  long max_terms = 2000000;
  // off-target probes: grid x grid lattice on [-window, window]^2 (n = 1)
  int grid = 10;
  double window = 2.0;
  double min_distance = 0.25;
};
ClassifierConfig enumeration_classifier();
SynthesisReport synth_enumeration(const TargetSet& K, const EnumerationConfig& cfg = {});

struct BlockConfig {
  int m_max = 8;
  double window = 2.0;
  double epsilon = 0.05;
  int b_max = 64;
  std::size_t max_witnesses = 400;  // per block
  std::size_t max_cells = 40000;
  std::uint64_t seed = 11;
};
SynthesisReport synth_block(const TargetSet& target, const BlockConfig& cfg = {});
SynthesisReport synth_projective(const TargetSet& target, const BlockConfig& cfg = {});

/// Classifies each probe and computes the empirical E_m level of every probe
/// from the coefficient values alone.
SynthesisReport verify(const SeriesSpec& spec, const TargetSet& target, const std::vector<Probe>& probes,
                       long horizon, const ClassifierConfig& cfg);

/// Horizon and classifier stored with a synthesized spec.
struct VerifySettings {
  long horizon = 64;
  ClassifierConfig classifier;
};

}  // namespace convlab
