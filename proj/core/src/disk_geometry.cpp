#include "conjbound/disk_geometry.hpp"

#include <algorithm>
#include <cmath>
#include <iterator>

#include "conjbound/errors.hpp"

namespace conjbound {

double normalize_angle(double theta) noexcept {
  double t = std::fmod(theta, kTwoPi);
  if (t < 0.0) t += kTwoPi;
  if (t >= kTwoPi) t = 0.0;
  return t;
}

double angular_separation(double a, double b) noexcept {
  const double d = normalize_angle(a - b);
  return std::min(d, kTwoPi - d);
}

DiskPoint::DiskPoint(double r, double theta) : r_(r), theta_(normalize_angle(theta)) {
  if (!(r >= 0.0 && r < 1.0) || !std::isfinite(theta)) {
    throw DomainError("DiskPoint requires 0 <= r < 1");
  }
}

DiskPoint DiskPoint::from_complex(std::complex<double> z) {
  return DiskPoint(std::abs(z), std::arg(z));
}

BoundarySet BoundarySet::from_intervals(const std::vector<std::pair<double, double>>& intervals) {
  BoundarySet set;
  std::vector<std::pair<double, double>> pieces;  // unwrapped, inside [0, 2pi]
  for (auto [alpha, beta] : intervals) {
    if (!std::isfinite(alpha) || !std::isfinite(beta) || beta < alpha) {
      throw DomainError("boundary arc requires finite alpha <= beta");
    }
    if (beta - alpha >= kTwoPi) {
      return full_circle();
    }
    const double a = normalize_angle(alpha);
    const double b = a + (beta - alpha);
    if (b <= kTwoPi) {
      pieces.emplace_back(a, b);
    } else {
      pieces.emplace_back(a, kTwoPi);
      pieces.emplace_back(0.0, b - kTwoPi);
    }
  }
  std::sort(pieces.begin(), pieces.end());
  std::vector<std::pair<double, double>> merged;
  for (const auto& p : pieces) {
    if (!merged.empty() && p.first <= merged.back().second) {
      merged.back().second = std::max(merged.back().second, p.second);
    } else {
      merged.push_back(p);
    }
  }
  // Join the arc ending at 2pi with the arc starting at 0.
  if (merged.size() >= 2 && merged.front().first == 0.0 && merged.back().second >= kTwoPi) {
    merged.front().first = merged.back().first - kTwoPi;
    merged.pop_back();
  }
  if (merged.size() == 1 && merged.front().second - merged.front().first >= kTwoPi) {
    return full_circle();
  }
  for (const auto& [a, b] : merged) {
    set.arcs_.push_back(Arc{normalize_angle(a), b - a});
  }
  std::sort(set.arcs_.begin(), set.arcs_.end(),
            [](const Arc& x, const Arc& y) { return x.start < y.start; });
  return set;
}

BoundarySet BoundarySet::full_circle() {
  BoundarySet set;
  set.arcs_.push_back(Arc{0.0, kTwoPi});
  set.full_ = true;
  return set;
}

BoundarySet BoundarySet::point(double theta) { return from_intervals({{theta, theta}}); }

BoundarySet BoundarySet::points(const std::vector<double>& thetas) {
  std::vector<std::pair<double, double>> iv;
  iv.reserve(thetas.size());
  for (double t : thetas) iv.emplace_back(t, t);
  return from_intervals(iv);
}

double BoundarySet::total_length() const noexcept {
  if (full_) return kTwoPi;
  double sum = 0.0;
  for (const auto& a : arcs_) sum += a.length;
  return sum;
}

double BoundarySet::angular_distance(double theta) const {
  if (arcs_.empty()) throw DomainError("empty boundary set");
  if (full_) return 0.0;
  const double t = normalize_angle(theta);
  // Arcs are sorted by start; the candidates are the arc starting at or before t
  // (possibly wrapping into t) and its successor.
  auto it = std::upper_bound(arcs_.begin(), arcs_.end(), t,
                             [](double v, const Arc& a) { return v < a.start; });
  const std::size_t n = arcs_.size();
  const std::size_t hi = static_cast<std::size_t>(std::distance(arcs_.begin(), it)) % n;
  const std::size_t lo = (hi + n - 1) % n;
  double best = kPi;
  for (std::size_t idx : {lo, hi}) {
    const Arc& a = arcs_[idx];
    const double offset = normalize_angle(t - a.start);
    if (offset <= a.length) return 0.0;
    best = std::min(best, std::min(offset - a.length, kTwoPi - offset));
  }
  return best;
}

bool BoundarySet::contains(double theta, double slack) const {
  if (arcs_.empty()) return false;
  return angular_distance(theta) <= slack;
}

double BoundarySet::nearest_angle(double theta) const {
  if (arcs_.empty()) throw DomainError("empty boundary set");
  if (full_) return normalize_angle(theta);
  const double t = normalize_angle(theta);
  double best = kTwoPi;
  double best_angle = 0.0;
  auto it = std::upper_bound(arcs_.begin(), arcs_.end(), t,
                             [](double v, const Arc& a) { return v < a.start; });
  const std::size_t n = arcs_.size();
  const std::size_t hi = static_cast<std::size_t>(std::distance(arcs_.begin(), it)) % n;
  const std::size_t lo = (hi + n - 1) % n;
  for (std::size_t idx : {lo, hi}) {
    const Arc& a = arcs_[idx];
    const double offset = normalize_angle(t - a.start);
    if (offset <= a.length) return t;
    const double to_end = offset - a.length;
    const double to_start = kTwoPi - offset;
    if (to_end < best) {
      best = to_end;
      best_angle = normalize_angle(a.end());
    }
    if (to_start < best) {
      best = to_start;
      best_angle = a.start;
    }
  }
  return best_angle;
}

std::vector<double> BoundarySet::endpoints() const {
  std::vector<double> out;
  if (full_) return out;
  for (const auto& a : arcs_) {
    out.push_back(a.start);
    if (a.length > 0.0) out.push_back(normalize_angle(a.end()));
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<std::pair<double, double>> BoundarySet::unwrapped_intervals() const {
  std::vector<std::pair<double, double>> out;
  if (full_) {
    out.emplace_back(0.0, kTwoPi);
    return out;
  }
  for (const auto& a : arcs_) {
    const double b = a.end();
    if (b <= kTwoPi) {
      out.emplace_back(a.start, b);
    } else {
      out.emplace_back(a.start, kTwoPi);
      out.emplace_back(0.0, b - kTwoPi);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

namespace {

// |r e^{i theta} - e^{i phi}| written through the angular gap d, stable near the circle.
double chord_distance(double r, double d) {
  const double s = std::sin(0.5 * d);
  return std::sqrt((1.0 - r) * (1.0 - r) + 4.0 * r * s * s);
}

}  // namespace

double rho(const DiskPoint& z, const BoundarySet& e) {
  return chord_distance(z.r(), e.angular_distance(z.theta()));
}

double rho(std::complex<double> z, const BoundarySet& e) {
  const double r = std::abs(z);
  if (!(r < 1.0)) throw DomainError("rho requires |z| < 1");
  return chord_distance(r, e.angular_distance(std::arg(z)));
}

ScalingGap scaling_gap(const DiskPoint& z, double tau, const BoundarySet& e) {
  if (!(tau > 0.0 && tau < 1.0)) throw DomainError("scaling_gap requires tau in (0, 1)");
  const DiskPoint shrunk(tau * z.r(), z.theta());
  return ScalingGap{rho(z, e), 2.0 * rho(shrunk, e)};
}

std::size_t SamplingGrid::point_count() const noexcept {
  std::size_t n = 0;
  for (const auto& l : layers) n += l.angles.size();
  return n;
}

namespace {

// Endpoints of the clusters formed by merging arcs whose gaps are below min_gap.
std::vector<double> cluster_endpoints(const BoundarySet& e, double min_gap) {
  std::vector<double> out;
  if (e.is_full_circle() || e.empty()) return out;
  const auto& arcs = e.arcs();
  const std::size_t n = arcs.size();
  // A cluster boundary sits at every gap at least min_gap wide.
  std::vector<std::size_t> wide;  // index i: gap after arc i is wide
  for (std::size_t i = 0; i < n; ++i) {
    const Arc& a = arcs[i];
    const Arc& next = arcs[(i + 1) % n];
    double gap = next.start - a.end();
    if (i + 1 == n) gap += kTwoPi;
    if (gap >= min_gap) wide.push_back(i);
  }
  if (wide.empty()) {
    // Everything is one cluster; refine at the ends of the widest gap.
    for (const auto& a : arcs) {
      out.push_back(a.start);
      out.push_back(normalize_angle(a.end()));
    }
    return out;
  }
  for (std::size_t i : wide) {
    out.push_back(normalize_angle(arcs[i].end()));
    out.push_back(arcs[(i + 1) % n].start);
  }
  return out;
}

}  // namespace

SamplingGrid build_grid(const BoundarySet& e, int max_depth, int angular_budget) {
  if (angular_budget <= 0) throw DomainError("build_grid requires a positive angular budget");
  if (max_depth <= 0 || max_depth > kMaxGridDepth) {
    throw DomainError("build_grid requires 1 <= max_depth <= 40");
  }
  if (e.empty()) throw DomainError("empty boundary set");
  SamplingGrid grid;
  grid.layers.reserve(static_cast<std::size_t>(max_depth));
  for (int k = 1; k <= max_depth; ++k) {
    GridLayer layer;
    layer.k = k;
    layer.radius = 1.0 - std::ldexp(1.0, -k);
    std::vector<double>& angles = layer.angles;
    for (int j = 0; j < angular_budget; ++j) {
      angles.push_back(kTwoPi * static_cast<double>(j) / static_cast<double>(angular_budget));
    }
    const double step = std::ldexp(1.0, -(k + 2));
    for (double endpoint : cluster_endpoints(e, std::ldexp(1.0, -k))) {
      angles.push_back(endpoint);
      for (int m = 1; m <= 16; ++m) {
        angles.push_back(normalize_angle(endpoint + m * step));
        angles.push_back(normalize_angle(endpoint - m * step));
      }
    }
    std::sort(angles.begin(), angles.end());
    angles.erase(std::unique(angles.begin(), angles.end(),
                             [](double a, double b) { return std::abs(a - b) < 1e-15; }),
                 angles.end());
    grid.layers.push_back(std::move(layer));
  }
  return grid;
}

}  // namespace conjbound
