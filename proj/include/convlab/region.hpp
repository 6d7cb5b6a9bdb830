#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "convlab/polynomial.hpp"

namespace convlab {

enum class Space { Affine, Projective };

enum class RegionKind {
  Variety,
  Finite,
  Ball,
  Polydisk,
  Sphere,   // boundary of a ball, e.g. the unit circle
  Segment,  // closed real segment [a, b] in C^n
  Union,
  Intersection,
  Hyperplane,
  Cover,    // the projective cover set K_M
};

std::string to_string(RegionKind k);
RegionKind region_kind_from_string(const std::string& s);

/// Unit-sphere representative with the first nonzero coordinate rotated to
/// be positive real. Throws on the zero vector.
Point canonical_projective(const Point& x);
/// sin of the Fubini-Study angle between [x] and [y].
double projective_distance(const Point& x, const Point& y);

/// K_M = S_1 u ... u S_n in P^{n-1}.
struct ProjCover {
  int n = 2;
  double M = 1.0;

  /// Index k (1-based) of a piece S_k containing [x], if any.
  std::optional<int> piece_of(const Point& x, double tol = 1e-12) const;
  bool contains(const Point& x, double tol = 1e-12) const { return piece_of(x, tol).has_value(); }
};

/// Projective hyperplane V = {[x] : sum_i a_i x_i = 0}, |a| = 1.
struct Hyperplane {
  Point normal;
  double distance(const Point& x) const;  // projective distance from [x] to V
};

/// Closed-set descriptor over C^n (affine) or P^{n-1} (projective; points are
/// nonzero representatives in C^n).
class Region {
public:
  static Region variety(std::vector<Polynomial> equations, Space space = Space::Affine);
  static Region finite(std::vector<Point> points, Space space = Space::Affine);
  static Region ball(Point center, double radius);
  static Region polydisk(Point center, double radius);
  static Region sphere(Point center, double radius);
  static Region segment(Point a, Point b);
  static Region union_of(std::vector<Region> parts);
  static Region intersection_of(std::vector<Region> parts);
  static Region hyperplane(Point normal);
  static Region cover(int n, double M);

  RegionKind kind() const { return kind_; }
  Space space() const { return space_; }
  int dimension() const { return n_; }

  const std::vector<Polynomial>& equations() const { return equations_; }
  const std::vector<Point>& points() const { return points_; }
  const Point& center() const { return center_; }
  double radius() const { return radius_; }
  const Point& segment_end() const { return end_; }
  const std::vector<Region>& parts() const { return parts_; }
  const Point& normal() const { return center_; }
  ProjCover proj_cover() const { return {n_, radius_}; }

  bool is_compact() const;
  bool is_empty() const;
  /// Bound R with |x| <= R for every member (compact kinds only).
  double extent() const;

  /// Nearest member point when it can be computed (geometric kinds, finite
  /// sets, and Newton projection for varieties).
  std::optional<Point> project(const Point& x) const;

private:
  Region() = default;
  RegionKind kind_ = RegionKind::Finite;
  Space space_ = Space::Affine;
  int n_ = 1;
  std::vector<Polynomial> equations_;
  std::vector<Point> points_;
  Point center_;
  Point end_;
  double radius_ = 0.0;
  std::vector<Region> parts_;
};

struct Membership {
  bool member = false;
  double residual = 0.0;
};

constexpr double kDefaultMembershipEps = 1e-9;

Membership membership(const Region& r, const Point& x, double eps_mem = kDefaultMembershipEps);

/// Sampling window: coordinates satisfy |x_i| <= radius.
struct SampleWindow {
  double radius = 2.0;
};

/// Deterministic member points. Throws Error when the budget is exhausted
/// before `count` members are found (degenerate window).
std::vector<Point> sample(const Region& r, std::size_t count, SampleWindow window, std::uint64_t seed);

struct AvoidingHyperplane {
  Hyperplane plane;
  double epsilon = 0.0;  // the epsilon in v_j = e_j + epsilon e_{j+1}
  double delta = 0.0;    // min sampled distance from K (and u) to the plane
  int shrink_steps = 0;
  bool perturbed = false;
  std::size_t samples = 0;
  std::string note;
};

/// Hyperplane missing K_M (and the extra point u if given), certified on
/// `samples` points of K_M. Throws Error after the shrink budget.
AvoidingHyperplane find_avoiding_hyperplane(const ProjCover& cover, double epsilon,
                                            const std::optional<Point>& extra = std::nullopt,
                                            std::size_t samples = 4000, std::uint64_t seed = 1,
                                            int shrink_budget = 30);

/// Roots of a univariate polynomial with complex coefficients c[0] + c[1] z + ...
std::vector<Complex> univariate_roots(const std::vector<Complex>& coefficients);

}  // namespace convlab
