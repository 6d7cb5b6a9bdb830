#pragma once

#include <cstdint>

#include "convlab/polynomial.hpp"

namespace convlab {

/// Counter-based generator: the n-th draw of stream s under seed k is a pure
/// hash of (k, s, n), so results never depend on call interleaving.
class CounterRng {
public:
  explicit CounterRng(std::uint64_t seed, std::uint64_t stream = 0) : seed_(seed), stream_(stream) {}

  std::uint64_t next_u64();
  double uniform();                       // [0, 1)
  double uniform(double lo, double hi);
  double normal();
  Complex complex_normal();               // E|z|^2 = 1
  int uniform_int(int lo, int hi);        // inclusive
  /// Independent generator for a sub-task (probe index, block number, ...).
  CounterRng split(std::uint64_t tag) const;

  /// Uniform point on the unit sphere of C^n.
  Point unit_sphere(int n);
  /// Uniform point in the ball of C^n with given radius.
  Point ball(int n, double radius);

private:
  std::uint64_t seed_;
  std::uint64_t stream_;
  std::uint64_t counter_ = 0;
};

std::uint64_t mix64(std::uint64_t x);

}  // namespace convlab
