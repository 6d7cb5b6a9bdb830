#include "convlab/norms.hpp"

#include <algorithm>
#include <cmath>

#include "convlab/rng.hpp"

namespace convlab {

double point_value(const NormedPoly& np, const Point& x, NormKind kind) {
  return kind == NormKind::Root ? root_value(np, x) : normalized_value(np, x);
}

namespace {

constexpr double kSlack = 1e-3;

struct Tracker {
  double best = 0.0;
  Point arg;
  void offer(double v, const Point& x) {
    if (std::isfinite(v) && (arg.empty() || v > best)) best = v, arg = x;
  }
};

// Random-direction compass search; `admit` maps a trial point to a feasible
// one (or rejects it).
template <class Value, class Admit>
void ascend(Point x, double fx, double step, int iterations, CounterRng& rng, Value value, Admit admit, Tracker& t) {
  const int n = static_cast<int>(x.size());
  for (int it = 0; it < iterations && step > 1e-10; ++it) {
    const Point d = rng.unit_sphere(n);
    bool improved = false;
    for (double sign : {1.0, -1.0}) {
      Point y = x;
      for (int i = 0; i < n; ++i) y[i] += sign * step * (1.0 + norm2(x)) * d[i];
      auto z = admit(y);
      if (!z) continue;
      const double fz = value(*z);
      if (std::isfinite(fz) && fz > fx) {
        x = *z, fx = fz, improved = true;
        t.offer(fz, x);
        break;
      }
    }
    if (!improved) step *= 0.7;
    else step *= 1.2;
  }
}

}  // namespace

SupNormResult sup_norm(const NormedPoly& np, const SupNormBudget& budget) {
  const int n = np.poly().dimension();
  CounterRng rng(budget.seed, 0x5b9);
  Tracker t;
  SupNormResult out;
  if (np.poly().is_zero()) {
    out.upper_heuristic = false;
    out.argmax.assign(n, 0.0);
    return out;
  }
  auto value = [&](const Point& x) { return normalized_value(np, x); };
  std::vector<std::pair<double, Point>> pool;
  if (np.homogeneous()) {
    for (std::size_t s = 0; s < budget.samples; ++s) {
      const Point x = rng.unit_sphere(n);
      const double v = value(x);
      t.offer(v, x);
      pool.emplace_back(v, x);
    }
  } else {
    std::vector<double> radii{0.0, 0.5};
    for (double r = 1.0; r <= budget.r_max; r *= 2.0) radii.push_back(r);
    const std::size_t per = std::max<std::size_t>(1, budget.samples / (radii.size() + 1));
    for (double r : radii)
      for (std::size_t s = 0; s < (r == 0.0 ? 1 : per); ++s) {
        Point x = rng.unit_sphere(n);
        for (auto& c : x) c *= r;
        const double v = value(x);
        t.offer(v, x);
        pool.emplace_back(v, x);
      }
  }
  std::sort(pool.begin(), pool.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
  const auto admit_sphere = [&](const Point& y) -> std::optional<Point> {
    if (np.homogeneous()) {
      const double ny = norm2(y);
      if (ny == 0.0) return std::nullopt;
      Point z = y;
      for (auto& c : z) c /= ny;
      return z;
    }
    return y;
  };
  for (int s = 0; s < budget.starts && s < static_cast<int>(pool.size()); ++s)
    ascend(pool[s].second, pool[s].first, 0.25, budget.iterations, rng, value, admit_sphere, t);

  double limit = 0.0;
  if (!np.homogeneous() && np.poly().degree() == np.weight()) {
    // Limit at infinity along u: |p_k(u)|^{1/k}, p_k the leading form.
    const NormedPoly lead(homogeneous_part(np.poly(), np.weight()), np.weight(), true);
    SupNormBudget b = budget;
    b.seed = mix64(budget.seed + 17);
    const SupNormResult lr = sup_norm(lead, b);
    limit = lr.lower;
    if (limit > t.best) {
      t.best = limit;
      t.arg = lr.argmax;  // direction of approach
    }
  }
  out.lower = t.best;
  out.upper = t.best * (1.0 + kSlack);
  out.argmax = t.arg;
  return out;
}

SupNormResult sup_norm(const NormedPoly& np, const Region& region, const SupNormBudget& budget, NormKind kind) {
  if (np.poly().dimension() != region.dimension()) throw Error("sup_norm: dimension mismatch");
  SupNormResult out;
  if (region.is_empty()) {
    out.upper_heuristic = false;
    return out;
  }
  if (np.poly().is_zero()) {
    out.upper_heuristic = false;
    return out;
  }
  auto value = [&](const Point& x) { return point_value(np, x, kind); };
  Tracker t;
  if (region.kind() == RegionKind::Finite) {
    for (const auto& p : region.points()) t.offer(value(p), p);
    out.lower = out.upper = t.best;
    out.upper_heuristic = false;
    out.argmax = t.arg;
    return out;
  }
  const std::vector<Point> pts = sample(region, budget.samples, budget.window, budget.seed);
  std::vector<std::pair<double, Point>> pool;
  for (const auto& p : pts) {
    const double v = value(p);
    t.offer(v, p);
    pool.emplace_back(v, p);
  }
  std::sort(pool.begin(), pool.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
  CounterRng rng(budget.seed, 0x5b8);
  const auto admit = [&](const Point& y) -> std::optional<Point> {
    auto z = region.project(y);
    if (!z) return std::nullopt;
    for (const auto& c : *z)
      if (std::abs(c) > budget.window.radius * (1.0 + 1e-12) && !region.is_compact()) return std::nullopt;
    if (!membership(region, *z).member) return std::nullopt;
    return z;
  };
  for (int s = 0; s < budget.starts && s < static_cast<int>(pool.size()); ++s)
    ascend(pool[s].second, pool[s].first, 0.1, budget.iterations, rng, value, admit, t);
  out.lower = t.best;
  out.upper = t.best * (1.0 + kSlack);
  out.argmax = t.arg;
  return out;
}

}  // namespace convlab
