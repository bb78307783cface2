#pragma once

#include <complex>
#include <cstddef>
#include <numbers>
#include <utility>
#include <vector>

namespace conjbound {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Reduce an angle to [0, 2*pi).
double normalize_angle(double theta) noexcept;

// Shortest angular separation of two angles, in [0, pi].
double angular_separation(double a, double b) noexcept;

// A point of the open unit disk in polar form.
class DiskPoint {
 public:
  DiskPoint() = default;
  // Throws DomainError unless 0 <= r < 1.
  DiskPoint(double r, double theta);

  static DiskPoint from_complex(std::complex<double> z);

  double r() const noexcept { return r_; }
  double theta() const noexcept { return theta_; }
  std::complex<double> to_complex() const noexcept { return std::polar(r_, theta_); }

  friend bool operator==(const DiskPoint&, const DiskPoint&) = default;

 private:
  double r_ = 0.0;
  double theta_ = 0.0;
};

// One closed arc of the circle: angles start .. start + length (counterclockwise).
struct Arc {
  double start = 0.0;   // in [0, 2*pi)
  double length = 0.0;  // in [0, 2*pi]; zero for a single point

  double end() const noexcept { return start + length; }
  friend bool operator==(const Arc&, const Arc&) = default;
};

// A closed subset of the unit circle given as a finite union of arcs and points.
class BoundarySet {
 public:
  BoundarySet() = default;

  // Each pair is [alpha, beta] in radians with beta >= alpha; beta - alpha >= 2*pi
  // yields the whole circle.  Overlapping or touching arcs are merged.
  static BoundarySet from_intervals(const std::vector<std::pair<double, double>>& intervals);
  static BoundarySet full_circle();
  static BoundarySet point(double theta);
  static BoundarySet points(const std::vector<double>& thetas);

  bool empty() const noexcept { return arcs_.empty(); }
  bool is_full_circle() const noexcept { return full_; }

  // Arcs sorted by start, pairwise disjoint.
  const std::vector<Arc>& arcs() const noexcept { return arcs_; }

  // |E*|, the total angular length.
  double total_length() const noexcept;

  bool contains(double theta, double slack = 0.0) const;

  // Angular distance from theta to the set, in [0, pi].  Throws on empty set.
  double angular_distance(double theta) const;

  // Angle of a nearest point of the set.
  double nearest_angle(double theta) const;

  // Arc endpoints (start and end of every arc; a point contributes once).
  std::vector<double> endpoints() const;

  // Intervals [a, b] with 0 <= a <= b <= 2*pi covering the set without wrap.
  std::vector<std::pair<double, double>> unwrapped_intervals() const;

 private:
  std::vector<Arc> arcs_;
  bool full_ = false;
};

// rho_E(z) = dist(z, E).  Throws DomainError("empty boundary set") on empty E.
double rho(const DiskPoint& z, const BoundarySet& e);
double rho(std::complex<double> z, const BoundarySet& e);

struct ScalingGap {
  double rho_z = 0.0;         // rho(z)
  double twice_rho_tau = 0.0; // 2 rho(tau z)
};

// Both sides of rho(z) <= 2 rho(tau z); tau must lie in (0, 1).
ScalingGap scaling_gap(const DiskPoint& z, double tau, const BoundarySet& e);

struct GridLayer {
  int k = 0;
  double radius = 0.0;          // 1 - 2^-k
  std::vector<double> angles;   // sorted in [0, 2*pi)
};

struct SamplingGrid {
  std::vector<GridLayer> layers;
  std::size_t point_count() const noexcept;
};

inline constexpr int kMaxGridDepth = 40;

// Layers k = 1..max_depth at radius 1 - 2^-k.  Each layer holds a uniform set of
// angular_budget angles plus offsets m * 2^-(k+2), m = 1..16, on both sides of
// every arc endpoint.  Arcs separated by gaps below 2^-k are treated as one
// cluster at that layer, so only cluster endpoints are refined.
SamplingGrid build_grid(const BoundarySet& e, int max_depth, int angular_budget);

}  // namespace conjbound
