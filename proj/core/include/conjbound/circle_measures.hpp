#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "conjbound/disk_geometry.hpp"
#include "conjbound/quadrature.hpp"

namespace conjbound {

struct Atom {
  double theta = 0.0;  // normalized to [0, 2*pi)
  double mass = 0.0;
};

// Density on [a, b] with 0 <= a < b <= 2*pi: either a constant or the affine
// function slope * theta + offset.
struct DensityPiece {
  enum class Kind { Constant, Linear };

  double a = 0.0;
  double b = 0.0;
  Kind kind = Kind::Constant;
  double slope = 0.0;
  double offset = 0.0;  // the constant value for Kind::Constant

  static DensityPiece constant(double a, double b, double c);
  static DensityPiece linear(double a, double b, double slope, double offset);

  double density(double theta) const noexcept { return slope * theta + offset; }
  // Signed mass of [a, min(t, b)).
  double mass_below(double t) const noexcept;
  double mass() const noexcept { return mass_below(b); }
  double variation() const noexcept;
};

// Middle-thirds Cantor measure of total mass `mass` on [a, b], truncated at
// `depth`: each of the 2^depth level-depth intervals carries mass * 2^-depth,
// spread uniformly.
struct CantorGenerator {
  double a = 0.0;
  double b = 1.0;
  int depth = 14;
  double mass = 1.0;

  double length() const noexcept { return b - a; }
  double level_length(int level) const noexcept { return length() * std::pow(3.0, -level); }
  // Left endpoints of the level-depth intervals, ascending.
  std::vector<double> leaf_starts() const;
  // mass of [a, t).
  double cdf(double t) const noexcept;
};

inline constexpr int kMaxCantorDepth = 24;

// A finite signed Borel measure on the circle: atoms + piecewise density + an
// optional Cantor component.
class CircleMeasure {
 public:
  CircleMeasure() = default;
  CircleMeasure(std::vector<Atom> atoms, std::vector<DensityPiece> pieces,
                std::optional<CantorGenerator> cantor = std::nullopt);

  static CircleMeasure atom(double theta, double mass = 1.0);

  const std::vector<Atom>& atoms() const noexcept { return atoms_; }
  const std::vector<DensityPiece>& pieces() const noexcept { return pieces_; }
  const std::optional<CantorGenerator>& cantor() const noexcept { return cantor_; }

  double total_mass() const noexcept;
  double total_variation() const noexcept;
  bool is_nonnegative() const noexcept;

  // psi(theta) = mu([0, theta)) and the right limit mu([0, theta]), theta in [0, 2*pi].
  double primitive(double theta) const noexcept;
  double primitive_right(double theta) const noexcept;

  // Closed support as a boundary set (points for atoms, arcs otherwise).
  BoundarySet support() const;

  // Angles where the measure is not smooth (atoms, piece ends, Cantor base ends).
  std::vector<double> breakpoints() const;

 private:
  std::vector<Atom> atoms_;
  std::vector<DensityPiece> pieces_;
  std::optional<CantorGenerator> cantor_;
};

// theta -> psi(theta) with a separate right limit for jump points.
class Primitive {
 public:
  using Rule = std::function<double(double)>;

  Primitive(Rule left, Rule right) : left_(std::move(left)), right_(std::move(right)) {}
  static Primitive of_measure(const CircleMeasure& mu);
  static Primitive continuous(Rule f);

  double operator()(double theta) const { return left_(theta); }
  double right(double theta) const { return right_(theta); }

 private:
  Rule left_;
  Rule right_;
};

// int g d mu.  Atoms contribute g(theta_j) m_j, densities by adaptive
// quadrature, the Cantor part by a three-point Gauss rule on every leaf.
double stieltjes_integral(const std::function<double(double)>& g, const CircleMeasure& mu,
                          const quad::Options& opt = {});

// ---------------------------------------------------------------------------
// Cantor tree integration.
//
// The depth-d measure restricted to a level-j interval is a scaled copy of the
// depth-(d-j) measure.  Its variance and fourth central moment (unit length)
// obey V_n = V_{n-1}/9 + 1/9 and M_n = M_{n-1}/81 + 2 V_{n-1}/27 + 1/81 with
// V_0 = 1/12, M_0 = 1/80, which gives a three-point rule exact through degree
// five.  Intervals closer than kappa * length to a singular point are split.

struct SingularPoint {
  double angle = 0.0;
  double softening = 0.0;  // e.g. 1 - |z| for kernels peaked at arg z
};

namespace detail {

struct CantorMoments {
  std::array<double, kMaxCantorDepth + 1> variance{};
  std::array<double, kMaxCantorDepth + 1> fourth{};
};

const CantorMoments& cantor_moments();

}  // namespace detail

template <class T, class Smooth, class Leaf>
T cantor_integrate(const CantorGenerator& c, std::span<const SingularPoint> singular,
                   double kappa, Smooth&& smooth, Leaf&& leaf) {
  const auto& mom = detail::cantor_moments();
  T total{};
  auto visit = [&](auto&& self, double x, int level, double mass) -> void {
    const double len = c.level_length(level);
    const double center = x + 0.5 * len;
    bool far = std::isfinite(kappa);
    for (const auto& s : singular) {
      if (!far) break;
      const double gap = std::max(angular_separation(center, s.angle) - 0.5 * len, 0.0);
      far = std::hypot(gap, s.softening) >= kappa * len;
    }
    const int remaining = c.depth - level;
    if (far) {
      const double v = mom.variance[remaining];
      const double m4 = mom.fourth[remaining];
      const double spread = len * std::sqrt(m4 / v);
      const double w1 = v * v / (2.0 * m4);
      total += mass * ((1.0 - 2.0 * w1) * smooth(center) +
                       w1 * (smooth(center - spread) + smooth(center + spread)));
      return;
    }
    if (remaining == 0) {
      total += leaf(x, x + len, mass);
      return;
    }
    const double third = len / 3.0;
    self(self, x, level + 1, 0.5 * mass);
    self(self, x + 2.0 * third, level + 1, 0.5 * mass);
  };
  visit(visit, c.a, 0, c.mass);
  return total;
}

// ---------------------------------------------------------------------------
// Modulus of continuity on E and the Holder exponent fit.

// Sorted sample of a primitive on E: points with left and right values.
struct PrimitiveSamples {
  std::vector<double> points;
  std::vector<double> left;
  std::vector<double> right;
};

// Discretize E (unwrapped to [0, 2*pi]) at spacing <= resolution, arc ends included.
std::vector<double> discretize_set(const BoundarySet& e, double resolution);
PrimitiveSamples sample_primitive(const Primitive& psi, const BoundarySet& e, double resolution);

// sup{|psi(y) - psi(x)| : x, y in E, |x - y| < delta}, where a jump at an E-point
// counts as the pair of its one-sided values.
double modulus_of_continuity(const Primitive& psi, const BoundarySet& e, double delta);
double modulus_from_samples(const PrimitiveSamples& s, double delta);

struct HolderEstimate {
  double gamma = 0.0;
  double std_error = 0.0;
  double lower = 0.0;
  double upper = 0.0;
  bool infinite = false;  // omega_E identically zero
  std::vector<double> deltas;
  std::vector<double> omegas;
};

// Least-squares slope of log omega_E(2^-j) against log 2^-j for j = 3..max_level.
HolderEstimate holder_exponent(const Primitive& psi, const BoundarySet& e, int max_level = 12);
HolderEstimate holder_from_omegas(std::vector<double> deltas, std::vector<double> omegas);

// ---------------------------------------------------------------------------
// The arc measure nu_w^lambda(l) = int_l |zeta - w|^-lambda |d zeta|.

struct NuOptions {
  quad::Options integral{std::numeric_limits<double>::infinity(), 1e-10,
                         std::size_t{1} << 18};
};

double nu_interval(const DiskPoint& w, double lambda, double a, double b,
                   const NuOptions& opt = {});
double nu_exact(const DiskPoint& w, double lambda, const BoundarySet& e,
                const NuOptions& opt = {});

// The three-case bracket bounding nu_w^lambda(E) (without its constant C(lambda)).
double nu_bound_lemma1(const DiskPoint& w, double lambda, const BoundarySet& e);

struct LayerCakeResult {
  double direct = 0.0;
  double layered = 0.0;
};

// direct  = int_E g^q d nu_w^lambda
// layered = q int_0^inf y^(q-1) nu_w^lambda({theta in E : g(theta) > y}) dy
// g must be monotone between consecutive breakpoints.
LayerCakeResult layer_cake(const std::function<double(double)>& g,
                           std::span<const double> breakpoints, double lambda,
                           const DiskPoint& w, const BoundarySet& e, double q,
                           const NuOptions& opt = {});

}  // namespace conjbound
