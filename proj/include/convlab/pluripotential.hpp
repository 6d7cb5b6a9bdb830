#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "convlab/norms.hpp"
#include "convlab/polynomial.hpp"
#include "convlab/region.hpp"

namespace convlab {

struct VandermondeValue {
  Complex det = 0.0;
  double log_abs = -std::numeric_limits<double>::infinity();  // log|V|
};

/// det(s_q^{alpha(p)}), rows alpha(1..j), columns the points.
VandermondeValue vandermonde(const std::vector<Point>& points);

struct FeketeConfig {
  std::vector<Point> points;
  int k = 0;
  double logV = -std::numeric_limits<double>::infinity();
  double d_k = 0.0;  // exp(logV / l_k)
  std::vector<double> history;  // logV after insertion and after each sweep
};

struct FeketeBudget {
  std::size_t pool = 1500;  // candidate points sampled from E
  int sweeps = 40;          // exchange sweeps
  int perturbations = 6;    // jittered copies of each current point per sweep
  SampleWindow window{};
  std::uint64_t seed = 1;
};

FeketeConfig fekete_search(const Region& E, int k, const FeketeBudget& budget = {});

struct TransfiniteDiameter {
  std::vector<FeketeConfig> configs;  // k = 1..k_max
  std::vector<double> d_k;
  double d = 0.0;
  double uncertainty = 0.0;
  bool pluripolar = false;
  std::string note;
};

TransfiniteDiameter transfinite_diameter(const Region& E, int k_max, const FeketeBudget& budget = {});

struct CapacityEntry {
  int k = 0;
  double R = 0.0;
  double L_lower = 0.0;  // from an explicit witness (inf when |p|_E = 0)
  double L_upper = 0.0;  // from the Fekete-Lagrange Lebesgue bound (inf when unavailable)
  std::string witness;
};

struct CapacityEstimate {
  std::vector<CapacityEntry> entries;
  std::vector<double> R_list;
  std::vector<double> L_R_lower;  // sup over k, per R
  std::vector<double> L_R_upper;
  double c_lower = 0.0;  // heuristic
  double c_upper = 0.0;  // witness-based
  std::vector<double> c_upper_by_k;  // 1 / max_R L_lower at each k
  std::optional<double> d_cross;     // n = 1: extrapolated d(E) for comparison
  std::string note;
};

CapacityEstimate capacity(const Region& E, int k_max, const std::vector<double>& R_list = {4, 8, 16, 32},
                          const FeketeBudget& budget = {});

struct BernsteinResult {
  std::vector<double> per_degree;  // running max of the ratio for d = 1..d_max
  double value = 0.0;
  bool infinite = false;
  std::string note;
};

/// max_alpha |a_alpha|^{1/d} / |p|_E^{1/d} for one polynomial of degree <= d;
/// +inf when |p|_E = 0.
double bernstein_ratio(const Region& E, const Polynomial& p, int d, const SupNormBudget& budget = {});

BernsteinResult bernstein_constant(const Region& E, int d_max, int trials, const SupNormBudget& budget = {});

struct ExtremalEstimate {
  double value = 1.0;             // certified by re-evaluating the witness
  std::optional<NormedPoly> witness;  // normalized so that |(p,k)|_E <= 1
  std::string method = "constant";
  bool infinite = false;          // |p|_E = 0 for a witness nonzero at x
  std::vector<double> by_k;       // best value using degree <= k, k = 1..k_max
};

struct ExtremalBudget {
  SupNormBudget sup{};
  FeketeBudget fekete{};
  int ascent_steps = 60;
  bool use_fekete = true;
};

ExtremalEstimate extremal_lower(const Region& E, const Point& x, int k_max, const ExtremalBudget& budget = {});

enum class HullVerdict { InsideHull, OutsideHull, Unresolved };
std::string to_string(HullVerdict v);

struct HullResult {
  HullVerdict verdict = HullVerdict::Unresolved;
  std::vector<double> by_k;
  std::string reason;
};

HullResult ghull_member(const Region& E, const Point& x, double phi_max = 100.0, int k_max = 12,
                        const ExtremalBudget& budget = {});

}  // namespace convlab
