#pragma once

#include <cstdint>

#include "convlab/polynomial.hpp"
#include "convlab/region.hpp"

namespace convlab {

enum class NormKind {
  Normalized,  // ||(p(x),k)||
  Root,        // |(p(x),k)| = |p(x)|^{1/k}
};

double point_value(const NormedPoly& np, const Point& x, NormKind kind);

struct SupNormBudget {
  std::size_t samples = 2000;
  int starts = 12;        // local-ascent starts
  int iterations = 80;    // ascent steps per start
  double r_max = 1024.0;  // largest sphere for GLOBAL
  SampleWindow window{};
  std::uint64_t seed = 1;
};

struct SupNormResult {
  double lower = 0.0;             // max over evaluated points
  double upper = 0.0;             // refined maximum with slack
  bool lower_certified = true;
  bool upper_heuristic = true;    // false when the sup was computed exactly
  Point argmax;
};

/// ||(p,k)|| over all of C^n (or P^{n-1} for homogeneous pairs).
SupNormResult sup_norm(const NormedPoly& np, const SupNormBudget& budget = {});
/// sup over a region, in either norm.
SupNormResult sup_norm(const NormedPoly& np, const Region& region, const SupNormBudget& budget = {},
                       NormKind kind = NormKind::Normalized);

}  // namespace convlab
