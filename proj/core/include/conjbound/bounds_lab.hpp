#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "conjbound/circle_measures.hpp"
#include "conjbound/disk_geometry.hpp"
#include "conjbound/harmonic_eval.hpp"

namespace conjbound {

using HarmonicFn = std::function<double(std::complex<double>)>;

// Growth exponents (q, gamma) of |u(z)| <= C0 (1 - |z|)^gamma / rho^q(z).
class GrowthProfile {
 public:
  // Throws DomainError unless q > 0 and gamma <= q.
  GrowthProfile(double q, double gamma);
  double q() const noexcept { return q_; }
  double gamma() const noexcept { return gamma_; }

 private:
  double q_;
  double gamma_;
};

enum class MajorantCase {
  LogOverPower,  // q > gamma >= 0: log(1/(1-|z|)) / rho^(q-gamma)
  PowerRatio,    // q > 0 > gamma:  (1-|z|)^gamma / rho^q
  LogRho,        // q = gamma > 0:  log(1/rho)
};

MajorantCase majorant_case(const GrowthProfile& profile);

// The conjugate majorant without its constant.  Requires 1/2 <= |z| < 1.
double majorant_thm1(const DiskPoint& z, const GrowthProfile& profile, const BoundarySet& e);

enum class Verdict { Bounded, Growing, Inconclusive };
std::string to_string(Verdict v);

// "bounded" needs a finite global sup, last/previous layer sup below
// ratio_limit, and exp(least-squares slope of log sup per layer over the last
// half of the layers) below trend_limit.
struct VerdictRule {
  double ratio_limit = 1.25;
  double trend_limit = 1.05;
  int min_layers = 4;
};

struct VerdictStats {
  Verdict verdict = Verdict::Inconclusive;
  double last_ratio = 0.0;
  double trend = 0.0;
};

VerdictStats judge(const std::vector<double>& sups, const VerdictRule& rule);

struct LayerRecord {
  int k = 0;
  double radius = 0.0;
  double sup = 0.0;
  double argmax_r = 0.0;
  double argmax_theta = 0.0;
  double argmax_rho = 0.0;
  std::size_t points = 0;
  std::size_t skipped = 0;
};

struct VerificationReport {
  std::vector<LayerRecord> layers;
  double constant = 0.0;  // global sup of the tested ratio
  double last_ratio = 0.0;
  double trend = 0.0;
  Verdict verdict = Verdict::Inconclusive;
  std::size_t evaluated = 0;
  std::size_t skipped = 0;
};

struct SweepOptions {
  int threads = 1;
  VerdictRule rule;
  double max_skip_fraction = 0.01;
};

// Per-layer sup of |u(z)| rho^q(z) (1 - |z|)^-gamma.  Points whose evaluation
// throws or is non-finite are skipped; more than max_skip_fraction of them is
// an error.
VerificationReport fit_hypothesis(const HarmonicFn& u, const GrowthProfile& profile,
                                  const BoundarySet& e, const SamplingGrid& grid,
                                  const SweepOptions& opt = {});

struct Thm1Report {
  VerificationReport hypothesis;
  VerificationReport conclusion;  // |u~| / majorant
  VerificationReport log_probe;   // |u~| / (majorant without the log factor)
  // Least-squares slope of the probe sup against log(1/(1 - r_k)) over the last
  // half of the layers, divided by the final sup; near 1 for pure log growth.
  double probe_log_rate = 0.0;
  bool probe_grows_logarithmically = false;
  Verdict verdict = Verdict::Inconclusive;
};

Thm1Report verify_thm1(const HarmonicFn& u, const HarmonicFn& u_conj, const GrowthProfile& profile,
                       const BoundarySet& e, const SamplingGrid& grid, const SweepOptions& opt = {});

struct GrowthOrder {
  double sigma = 0.0;
  bool infinite = false;
  bool zero_function = false;
  std::vector<int> layers;           // layers used in the regression
  std::vector<double> sups;          // sup |u| per used layer
  std::vector<double> rhos;          // rho at the argmax per used layer
  std::vector<double> local_slopes;  // between consecutive used layers
};

GrowthOrder growth_order(const HarmonicFn& u, const BoundarySet& e, const SamplingGrid& grid,
                         const SweepOptions& opt = {});

// int_{1/2}^x phi(t)/t dt, x >= 1/2.
double phi_tilde(const std::function<double(double)>& phi, double x);

struct AlmostIncreasing {
  bool holds = true;
  double worst = 0.0;  // max over sampled x2 > x1 of (phi(x2)/x2^a) / (phi(x1)/x1^a)
};

// Tests phi(x2)/x2^a <= c phi(x1)/x1^a on a log-spaced sample of [1/2, x_max].
AlmostIncreasing almost_increasing_check(const std::function<double(double)>& phi, double a,
                                         double c, double x_max = 1e6, int samples = 512);

struct Thm3Options {
  int holder_level = 12;
  double exponent_margin = 0.05;
  int recovery_depth = 10;
  std::size_t recovery_samples = 2048;
  int converse_level = 8;
  SweepOptions sweep;
};

struct Thm3Report {
  HolderEstimate holder;
  double exponent = 0.0;  // alpha + 1 - gamma_hat + margin
  VerificationReport growth;
  GrowthOrder order;
  bool converse_run = false;
  double converse_gamma = 0.0;
  std::vector<double> converse_deltas;
  std::vector<double> converse_values;  // omega(delta) delta^-gamma / log(1/delta)
  std::size_t converse_skipped = 0;     // points where recovery did not settle
  VerdictStats converse;
  Verdict verdict = Verdict::Inconclusive;
};

// gamma, when given, must lie in (0, 1); otherwise the estimated exponent is
// used for the converse direction when it lies in (0, 1).
Thm3Report thm3_experiment(const CircleMeasure& mu, double alpha, std::optional<double> gamma,
                           const BoundarySet& e, const SamplingGrid& grid,
                           const Thm3Options& opt = {});

// Randomized domination check nu_exact <= C nu_bound_lemma1.  Each
// configuration draws 1..4 arcs and a point w with rho(w) log-uniform in
// [1e-4, 0.5]; configuration i depends only on (seed, i).
struct Lemma1Sample {
  BoundarySet e;
  DiskPoint w;
  double rho = 0.0;
  double exact = 0.0;
  double bound = 0.0;
  double ratio = 0.0;
};

struct Lemma1Sweep {
  double lambda = 0.0;
  std::vector<Lemma1Sample> samples;
  double fitted_c = 0.0;                    // max ratio over all samples
  std::vector<double> decade_edges;         // rho bins
  std::vector<double> decade_fit;           // max ratio per bin (0 when empty)
  std::vector<std::size_t> decade_count;
  double fine_over_coarse = 0.0;            // fit on the smallest-rho bin / largest-rho bin
  bool pass = false;                        // finite fit and fine_over_coarse < 2
};

Lemma1Sweep lemma1_sweep(double lambda, int configs, std::uint64_t seed, int threads = 1,
                         const NuOptions& opt = {});

// Throws DomainError("measure support escapes E") unless supp mu lies in E.
void require_support_inside(const CircleMeasure& mu, const BoundarySet& e);

}  // namespace conjbound
