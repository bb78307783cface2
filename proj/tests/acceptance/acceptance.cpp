// One line per acceptance criterion; exit status 0 only when all pass.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "conjbound/bounds_lab.hpp"
#include "conjbound/circle_measures.hpp"
#include "conjbound/disk_geometry.hpp"
#include "conjbound/fractional.hpp"
#include "conjbound/harmonic_eval.hpp"
#include "conjbound/kernels.hpp"
#include "conjbound_cli/cli.hpp"

using namespace conjbound;
using cplx = std::complex<double>;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// 1. D^a(r^a P_0(r e^{it})) against P_a(r e^{it}).
Outcome kernel_identity() {
  const auto t0 = std::chrono::steady_clock::now();
  double worst = 0.0;
  for (double a : {0.5, 1.0, 1.5}) {
    for (int i = 1; i <= 9; ++i) {
      const double r = 0.1 * i;
      for (int j = 0; j < 16; ++j) {
        const double t = kTwoPi * j / 16.0;
        const RadialFunction h = RadialFunction::real(
            [a, t](double x) { return std::pow(x, a) * poisson_kernel(std::polar(x, t), KernelOrder(0.0)); });
        const double got = frac_derivative(h, FracOrder(a), r).real();
        const double want = poisson_kernel(std::polar(r, t), KernelOrder(a));
        worst = std::max(worst, std::abs(got - want) / std::abs(want));
      }
    }
  }
  const double secs = seconds_since(t0);
  return {worst < 1e-4 && secs < 60.0,
          "max rel err " + sci(worst) + " (< 1e-4), " + sci(secs) + " s (< 60 s)"};
}

// 2. Fractional integrals of monomials and the inversion D^a D^-a = id.
Outcome fractional_oracle() {
  double worst_int = 0.0, worst_inv = 0.0;
  for (double a : {0.25, 0.5, 0.75, 1.5}) {
    for (int n = 0; n <= 4; ++n) {
      const RadialFunction h = RadialFunction::real([n](double x) { return std::pow(x, n); });
      FracOptions inner;
      inner.integral = {std::numeric_limits<double>::infinity(), 1e-13, std::size_t{1} << 12};
      const RadialFunction lifted([&h, a, inner](double x) {
        return x > 0.0 ? frac_integral(h, a, x, inner) : cplx{};
      });
      for (double r : {0.3, 0.6, 0.9}) {
        const double exact = std::tgamma(n + 1.0) / std::tgamma(n + 1.0 + a) * std::pow(r, n + a);
        const double got = frac_integral(h, a, r).real();
        worst_int = std::max(worst_int, std::abs(got - exact) / exact);
        const double back = frac_derivative(lifted, FracOrder(a), r).real();
        worst_inv = std::max(worst_inv, std::abs(back - std::pow(r, n)) / std::pow(r, n));
      }
    }
  }
  return {worst_int < 1e-6 && worst_inv < 1e-5,
          "integral rel err " + sci(worst_int) + " (< 1e-6), inversion rel err " + sci(worst_inv) +
              " (< 1e-5)"};
}

// 3. Finite-difference Cauchy-Riemann residual of (u, u~) for random atomic measures.
Outcome cauchy_riemann() {
  std::mt19937_64 eng(20240611);
  auto uni = [&eng] { return static_cast<double>(eng() >> 11) * 0x1.0p-53; };
  double worst = 0.0;
  std::size_t points = 0;
  const double h = 1e-4;
  for (int m = 0; m < 10; ++m) {
    const int count = 1 + static_cast<int>(uni() * 5.0);
    std::vector<Atom> atoms;
    std::vector<double> angles;
    for (int i = 0; i < count; ++i) {
      atoms.push_back({kTwoPi * uni(), 2.0 * uni() - 1.0});
      angles.push_back(atoms.back().theta);
    }
    const HarmonicSpec spec{CircleMeasure(atoms, {}), KernelOrder(0.0)};
    const BoundarySet e = BoundarySet::points(angles);
    const SamplingGrid grid = build_grid(e, 8, 64);
    auto F = [&spec](cplx z) { return eval_F(spec, z); };
    for (const auto& layer : grid.layers) {
      for (double t : layer.angles) {
        const cplx z = std::polar(layer.radius, t);
        if (rho(z, e) <= 0.05) continue;
        const cplx dx = (F(z + h) - F(z - h)) / (2.0 * h);
        const cplx dy = (F(z + cplx(0, h)) - F(z - cplx(0, h))) / (2.0 * h);
        const double ux = dx.real(), vx = dx.imag(), uy = dy.real(), vy = dy.imag();
        const double res = std::abs(ux - vy) + std::abs(uy + vx);
        const double scale = std::hypot(ux, uy) + std::hypot(vx, vy) + std::abs(F(z));
        worst = std::max(worst, res / scale);
        ++points;
      }
    }
  }
  return {worst < 1e-5 && points > 0,
          "max rel residual " + sci(worst) + " (< 1e-5) over " + std::to_string(points) + " points"};
}

// 4. nu_exact <= C * bracket over seeded configurations, stable across rho decades.
Outcome lemma1_domination() {
  bool ok = true;
  std::string detail;
  for (double lam : {0.5, 1.0, 2.0, 3.0}) {
    const Lemma1Sweep s = lemma1_sweep(lam, 200, 7);
    ok = ok && s.pass;
    detail += "lambda " + sci(lam) + ": C " + sci(s.fitted_c) + ", fine/coarse " +
              sci(s.fine_over_coarse) + "; ";
  }
  detail += "(< 2)";
  return {ok, detail};
}

// 5. Exact nu identities on the whole circle.
Outcome nu_identities() {
  const BoundarySet full = BoundarySet::full_circle();
  double worst0 = 0.0, worst2 = 0.0;
  for (double lam : {0.5, 1.0, 2.0, 3.0}) {
    worst0 = std::max(worst0, std::abs(nu_exact(DiskPoint(0.0, 0.0), lam, full) - kTwoPi) / kTwoPi);
  }
  for (const DiskPoint& w : {DiskPoint(0.3, 0.0), DiskPoint(0.9, 1.0), DiskPoint(0.99, 0.0)}) {
    const double v = nu_exact(w, 2.0, full) * (1.0 - w.r() * w.r());
    worst2 = std::max(worst2, std::abs(v - kTwoPi) / kTwoPi);
  }
  return {worst0 < 1e-10 && worst2 < 1e-8,
          "nu_0 rel err " + sci(worst0) + " (< 1e-10), weighted nu_w^2 rel err " + sci(worst2) +
              " (< 1e-8)"};
}

// 6. |Q(z)| |1 - z| = sqrt 2 along 1 - z = t e^{i pi/4}.
Outcome example2() {
  double worst = 0.0;
  for (int i = 1; i <= 6; ++i) {
    worst = std::max(worst, std::abs(example2_sharpness(std::pow(10.0, -i)) - std::sqrt(2.0)));
  }
  return {worst <= 1e-9, "max |product - sqrt 2| " + sci(worst) + " (<= 1e-9)"};
}

// 7. Poisson pair against the majorant, positive and negative control.
Outcome thm1_controls() {
  const auto t0 = std::chrono::steady_clock::now();
  const HarmonicSpec spec{CircleMeasure::atom(0.0), KernelOrder(0.0)};
  auto u = [&spec](cplx z) { return eval_F(spec, z).real(); };
  auto v = [&spec](cplx z) { return eval_F(spec, z).imag(); };
  const BoundarySet e = BoundarySet::point(0.0);
  const SamplingGrid grid = build_grid(e, 20, 64);
  const Thm1Report pos = verify_thm1(u, v, GrowthProfile(2.0, 1.0), e, grid);
  const Thm1Report neg = verify_thm1(u, v, GrowthProfile(1.75, 1.0), e, grid);
  const double secs = seconds_since(t0);
  const bool ok = pos.verdict == Verdict::Bounded && neg.verdict == Verdict::Growing &&
                  grid.layers.back().k == 20 && secs < 300.0;
  return {ok, "(2,1) " + to_string(pos.verdict) + " [trend " + sci(pos.conclusion.trend) +
                  "], (1.75,1) " + to_string(neg.verdict) + " [trend " +
                  sci(neg.conclusion.trend) + "], depth 20, " + sci(secs) + " s (< 300 s)"};
}

// 8. Cantor measure: Holder exponent and the growth fit it implies.
Outcome thm3_cantor() {
  const CantorGenerator gen{1.0, 4.0, 14, 1.0};
  const CircleMeasure mu({}, {}, gen);
  const BoundarySet e = mu.support();
  const HolderEstimate est = holder_exponent(Primitive::of_measure(mu), e, 12);
  const double target = std::log(2.0) / std::log(3.0);
  const HarmonicSpec spec{mu, KernelOrder(0.0)};
  auto u = [&spec](cplx z) { return eval_F(spec, z).real(); };
  const SamplingGrid grid = build_grid(e, 12, 128);
  const double q = 0.0 + 1.0 - est.gamma + 0.05;
  const VerificationReport rep = fit_hypothesis(u, GrowthProfile(q, 0.0), e, grid);
  const bool ok = std::abs(est.gamma - target) <= 0.05 && rep.verdict == Verdict::Bounded;
  return {ok, "gamma_hat " + sci(est.gamma) + " (log2/log3 +- 0.05), fit q=" + sci(q) + " " +
                  to_string(rep.verdict) + " [ratio " + sci(rep.last_ratio) + ", trend " +
                  sci(rep.trend) + "]"};
}

// 9. Growth order of the kernel atoms and of a bounded function.
Outcome growth_orders() {
  const BoundarySet e = BoundarySet::point(0.0);
  const SamplingGrid grid = build_grid(e, 16, 64);
  bool ok = true;
  std::string detail;
  for (double a : {0.0, 0.5, 1.0}) {
    const HarmonicSpec spec{CircleMeasure::atom(0.0), KernelOrder(a)};
    const GrowthOrder g = growth_order([&spec](cplx z) { return eval_F(spec, z).real(); }, e, grid);
    ok = ok && !g.infinite && std::abs(g.sigma - (a + 1.0)) <= 0.05;
    detail += "alpha " + sci(a) + ": " + sci(g.sigma) + "; ";
  }
  // Poisson integral of the density 1 + cos(t) / 2: bounded.
  const GrowthOrder b = growth_order([](cplx z) { return 1.0 + 0.5 * z.real(); }, e, grid);
  ok = ok && std::abs(b.sigma) <= 0.05 && !b.infinite;
  detail += "bounded: " + sci(b.sigma) + " (target +- 0.05)";
  return {ok, detail};
}

// 10. Recovery of jumps and of a density primitive.
Outcome recovery() {
  const std::vector<Atom> atoms{{0.7, 0.5}, {2.1, 1.25}, {4.4, 0.75}};
  const HarmonicSpec spec{CircleMeasure(atoms, {}), KernelOrder(0.0)};
  const int n = 256;
  std::vector<double> psi(n + 1);
  for (int i = 0; i <= n; ++i) psi[i] = recover_psi(spec, kTwoPi * i / n, 14).value;
  const double res = kTwoPi / n;
  double worst_loc = 0.0, worst_mag = 0.0;
  int found = 0;
  for (int i = 0; i < n; ++i) {
    const double jump = psi[i + 1] - psi[i];
    if (jump < 0.5 * kTwoPi * 0.5) continue;
    ++found;
    const double mid = 0.5 * res * (2 * i + 1);
    const Atom* nearest = &atoms[0];
    for (const auto& a : atoms) {
      if (std::abs(a.theta - mid) < std::abs(nearest->theta - mid)) nearest = &a;
    }
    worst_loc = std::max(worst_loc, std::abs(nearest->theta - mid));
    worst_mag = std::max(worst_mag, std::abs(jump - kTwoPi * nearest->mass) / (kTwoPi * nearest->mass));
  }
  // Constant density 0.3 on [1, 3].
  const HarmonicSpec dens{CircleMeasure({}, {DensityPiece::constant(1.0, 3.0, 0.3)}), KernelOrder(0.0)};
  double worst_d = 0.0;
  for (double t : {1.5, 2.0, 2.5, 3.5, 5.0}) {
    const double want = kTwoPi * 0.3 * (std::min(t, 3.0) - 1.0);
    worst_d = std::max(worst_d, std::abs(recover_psi(dens, t, 14).value - want) / want);
  }
  const bool ok = found == 3 && worst_loc <= res && worst_mag < 0.01 && worst_d < 0.01;
  return {ok, std::to_string(found) + " jumps, location err " + sci(worst_loc) + " (<= " + sci(res) +
                  "), magnitude rel err " + sci(worst_mag) + " (< 1%), density rel err " +
                  sci(worst_d) + " (< 1%)"};
}

// 11. Layer-cake representation.
Outcome layer_cake_check() {
  double worst = 0.0;
  auto rel = [](const LayerCakeResult& r) { return std::abs(r.direct - r.layered) / std::abs(r.direct); };
  const DiskPoint w(0.9, 0.6);
  {
    const BoundarySet e = BoundarySet::from_intervals({{0.2, 1.3}, {3.0, 4.0}});
    worst = std::max(worst, rel(layer_cake([](double) { return 1.7; }, {}, 1.5, w, e, 2.0)));
  }
  {
    const BoundarySet e = BoundarySet::from_intervals({{0.2, 1.3}, {3.0, 4.0}});
    auto g = [](double t) { return t < 2.0 ? 0.5 : 2.0; };
    const std::vector<double> br{2.0};
    worst = std::max(worst, rel(layer_cake(g, br, 2.0, w, e, 1.5)));
  }
  {
    const BoundarySet e = BoundarySet::from_intervals({{0.0, 2.5}});
    const BoundarySet ep = BoundarySet::point(1.0);
    const double R = 0.95;
    auto g = [&](double t) { return 1.0 / rho(DiskPoint(R, t), ep); };
    const std::vector<double> br{1.0};
    worst = std::max(worst, rel(layer_cake(g, br, 1.0, w, e, 2.0)));
    worst = std::max(worst, rel(layer_cake(g, br, 0.5, DiskPoint(0.99, 1.2), e, 1.0)));
  }
  return {worst < 1e-6, "max rel diff " + sci(worst) + " (< 1e-6)"};
}

// 12. Equal configuration, equal bytes, for every command.
Outcome determinism() {
  const fs::path dir = fs::temp_directory_path() / "conjbound_acceptance";
  fs::create_directories(dir);
  auto put = [&](const std::string& name, const std::string& text) {
    std::ofstream(dir / name) << text;
    return (dir / name).string();
  };
  const std::string atom = put("atom_spec.json", R"({"alpha": 0, "measure": {"atoms": [[0, 1]]}})");
  const std::string three = put("three.json",
      R"({"alpha": 0, "measure": {"atoms": [[0.7, 0.5], [2.1, 1.25], [4.4, 0.75]]}})");
  const std::string measure = put("measure.json", R"({"atoms": [[0, 1]]})");
  const std::string pt = put("point.json", R"({"arcs": [[0, 0]]})");
  const std::vector<std::vector<std::string>> commands{
      {"kernel", "eval", "--alpha", "0.5", "--z", "0.7,1"},
      {"frac", "derivative", "--alpha", "1.5", "--func", "kernel:1.5,0.5", "--r", "0.6"},
      {"nu", "--lambda", "2", "--w", "0.9,1"},
      {"eval", "--spec", three, "--z", "0.8,2", "--conjugate"},
      {"recover", "--spec", three, "--theta", "3", "--depth", "12"},
      {"means", "--p", "1", "--r", "0.9", "--spec", atom},
      {"thm1", "--spec", atom, "--q", "2", "--gamma", "1", "--set", pt, "--depth", "12"},
      {"thm3", "--measure", measure, "--alpha", "0", "--set", pt, "--depth", "12"},
      {"order", "--spec", atom, "--set", pt, "--depth", "12"},
      {"lemma1-sweep", "--lambda", "1", "--configs", "40"},
      {"example1"},
      {"example2"},
  };
  int same = 0;
  std::string bad;
  for (const auto& cmd : commands) {
    std::string texts[3];
    for (int run = 0; run < 3; ++run) {
      const fs::path out = dir / ("run" + std::to_string(run) + ".out");
      std::vector<std::string> args{"--seed", "11", "--threads", run == 2 ? "2" : "1", "--out", out.string()};
      args.insert(args.end(), cmd.begin(), cmd.end());
      std::ostringstream o, e;
      cli::run(args, o, e);
      std::ifstream in(out, std::ios::binary);
      std::ostringstream ss;
      ss << in.rdbuf();
      texts[run] = ss.str();
    }
    if (!texts[0].empty() && texts[0] == texts[1] && texts[0] == texts[2]) {
      ++same;
    } else {
      bad += " " + cmd[0];
    }
  }
  fs::remove_all(dir);
  const int total = static_cast<int>(commands.size());
  return {same == total, std::to_string(same) + "/" + std::to_string(total) +
                             " commands byte-identical across runs and thread counts" +
                             (bad.empty() ? "" : "; differing:" + bad)};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"kernel identity", kernel_identity},
      {"fractional oracle", fractional_oracle},
      {"conjugate pair (Cauchy-Riemann)", cauchy_riemann},
      {"arc measure domination", lemma1_domination},
      {"exact arc measure identities", nu_identities},
      {"conjugate kernel sharpness", example2},
      {"conjugate majorant controls", thm1_controls},
      {"Cantor round trip", thm3_cantor},
      {"growth order", growth_orders},
      {"boundary recovery", recovery},
      {"layer cake", layer_cake_check},
      {"determinism", determinism},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    failed += o.pass ? 0 : 1;
    std::printf("[%s] %2zu %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(),
                o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
