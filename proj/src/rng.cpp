#include "convlab/rng.hpp"

#include <cmath>
#include <numbers>

namespace convlab {

std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t CounterRng::next_u64() {
  return mix64(mix64(seed_ ^ mix64(stream_)) + counter_++);
}

double CounterRng::uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

double CounterRng::uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

double CounterRng::normal() {
  double u1 = uniform();
  while (u1 <= 0.0) u1 = uniform();
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

Complex CounterRng::complex_normal() {
  const double a = normal(), b = normal();
  return Complex(a, b) / std::sqrt(2.0);
}

int CounterRng::uniform_int(int lo, int hi) {
  const auto span = static_cast<std::uint64_t>(hi - lo + 1);
  return lo + static_cast<int>(next_u64() % span);
}

CounterRng CounterRng::split(std::uint64_t tag) const {
  return CounterRng(seed_, mix64(stream_ * 0x100000001b3ULL + tag + 1));
}

Point CounterRng::unit_sphere(int n) {
  Point x(n);
  double s = 0.0;
  do {
    s = 0.0;
    for (auto& c : x) {
      c = complex_normal();
      s += std::norm(c);
    }
  } while (s == 0.0);
  s = std::sqrt(s);
  for (auto& c : x) c /= s;
  return x;
}

Point CounterRng::ball(int n, double radius) {
  Point x = unit_sphere(n);
  // real dimension 2n
  const double r = radius * std::pow(uniform(), 1.0 / (2.0 * n));
  for (auto& c : x) c *= r;
  return x;
}

}  // namespace convlab
