#pragma once

#include <complex>
#include <functional>
#include <limits>
#include <vector>

#include "conjbound/circle_measures.hpp"
#include "conjbound/disk_geometry.hpp"
#include "conjbound/kernels.hpp"
#include "conjbound/quadrature.hpp"

namespace conjbound {

// u(z) = int P_alpha(z conj(zeta)) d mu(zeta), with conjugate int Q_alpha.
struct HarmonicSpec {
  CircleMeasure measure;
  KernelOrder order{0.0};
};

struct EvalOptions {
  quad::Options integral{std::numeric_limits<double>::infinity(), 1e-12,
                         std::size_t{1} << 16};
  double cantor_kappa = 16.0;
};

// F(z) = u(z) + i u~(z) = int S_alpha(z e^{-it}) d mu(t); u~(0) = 0.
std::complex<double> eval_F(const HarmonicSpec& spec, std::complex<double> z,
                            const EvalOptions& opt = {});
double eval_u(const HarmonicSpec& spec, const DiskPoint& z, const EvalOptions& opt = {});
double eval_conjugate(const HarmonicSpec& spec, const DiskPoint& z, const EvalOptions& opt = {});

// int_a^b S_0(z e^{-it}) dt in closed form (b >= a, any length).
std::complex<double> arc_schwarz_integral(std::complex<double> z, double a, double b);

// (1/2pi) int (R e^{iθ} + z)/(R e^{iθ} - z) u(R e^{iθ}) dθ + i imF0, where
// u_on_circle receives the angle θ.  Requires |z| < R < 1.
std::complex<double> conj_via_schwarz(const std::function<double(double)>& u_on_circle, double R,
                                      std::complex<double> z, double imF0 = 0.0);

// ((1+z)/(1-z))^(1/2), principal branch, f(0) = 1.
std::complex<double> example1(std::complex<double> z);
// The Poisson kernel pair of the unit atom at 1.
double example2_poisson(std::complex<double> z);
double example2_conjugate(std::complex<double> z);
// |Q(z)| |1 - z| along z = 1 - t e^{i pi/4}; requires the point to lie in the disk.
double example2_sharpness(double t);

// Nevanlinna recovery of 2 pi mu([0, theta)) from int_0^theta u(r e^{iφ}) dφ,
// sampled at r_n = 1 - 2^-n (n = 4..depth) and extrapolated in 1 - r_n.
struct Recovery {
  double value = 0.0;       // raw limit, 2 pi mu([0, theta))
  double normalized = 0.0;  // value / 2pi
  double change = 0.0;      // relative change of the last two extrapolants
  std::vector<double> radii;
  std::vector<double> partials;  // int_0^theta u(r_n e^{iφ}) dφ
};

inline constexpr int kDefaultRecoveryDepth = 14;

// For a spec the radial integrals are done in closed form against the
// measure (the alpha = 0 Poisson integral of mu, which is u_alpha).
Recovery recover_psi(const HarmonicSpec& spec, double theta, int depth = kDefaultRecoveryDepth);
Recovery recover_psi(const std::function<double(std::complex<double>)>& u, double theta,
                     int depth = kDefaultRecoveryDepth);

// M_inf(r, u) or M_1(r, u) = (1/2pi) int |u|.  Angles are refined within 4 (1 - r)
// of the points of E when E is nonempty.
enum class MeanKind { One, Infinity };
double circle_means(const std::function<double(std::complex<double>)>& u, double r, MeanKind p,
                    const BoundarySet& e = {});

struct DjrbashianReport {
  std::vector<double> radii;
  std::vector<double> values;  // int_0^{2pi} |u_alpha(r e^{iφ})| dφ
  double sup = 0.0;
};

DjrbashianReport djrbashian_condition(const HarmonicSpec& spec, const std::vector<double>& radii);

}  // namespace conjbound
