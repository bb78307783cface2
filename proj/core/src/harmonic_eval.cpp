#include "conjbound/harmonic_eval.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "conjbound/errors.hpp"
#include "conjbound/fractional.hpp"

namespace conjbound {

using cplx = std::complex<double>;

namespace {

// Breakpoints grading toward `foot` (and its 2pi shifts) at the scale `width`.
void add_graded(std::vector<double>& out, double foot, double width, double a, double b) {
  width = std::max(width, 1e-300);
  for (double shift : {-kTwoPi, 0.0, kTwoPi}) {
    const double c = foot + shift;
    if (c < a - kPi || c > b + kPi) continue;
    out.push_back(c);
    for (double d = width; d < kPi; d *= 4.0) {
      out.push_back(c - d);
      out.push_back(c + d);
    }
  }
}

// Change of arg(e^{it} - z) for t from a to b, b - a <= pi/2.  The change is
// positive and at least (b - a)/2 because Re 1/(1 - z e^{-it}) > 1/2.
double arg_change_short(cplx z, double a, double b) {
  const cplx pa = std::polar(1.0, a) - z;
  const cplx pb = std::polar(1.0, b) - z;
  const cplx q = std::conj(pa) * pb;
  const double v = std::atan2(q.imag(), q.real());
  return v > 0.0 ? v : v + kTwoPi;
}

double gauss3_mean(const std::function<double(double)>& g, double a, double b) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a) * std::sqrt(0.6);
  return (8.0 * g(c) + 5.0 * (g(c - h) + g(c + h))) / 18.0;
}

}  // namespace

cplx arc_schwarz_integral(cplx z, double a, double b) {
  if (!(std::norm(z) < 1.0)) throw DomainError("kernel requires |z| < 1");
  if (b < a) throw DomainError("arc integral requires b >= a");
  if (b == a) return 0.0;
  const double len = b - a;
  const int pieces = std::max(1, static_cast<int>(std::ceil(len / (0.5 * kPi))));
  double darg = 0.0;
  for (int i = 0; i < pieces; ++i) {
    const double lo = a + len * i / pieces;
    const double hi = (i + 1 == pieces) ? b : a + len * (i + 1) / pieces;
    darg += arg_change_short(z, lo, hi);
  }
  const double log_ratio = std::log(std::abs(std::polar(1.0, b) - z) /
                                    std::abs(std::polar(1.0, a) - z));
  return cplx(-len + 2.0 * darg, -2.0 * log_ratio);
}

cplx eval_F(const HarmonicSpec& spec, cplx z, const EvalOptions& opt) {
  if (!(std::norm(z) < 1.0)) throw DomainError("evaluation point must lie in the open disk");
  const KernelOrder order = spec.order;
  const bool poisson = order.alpha() == 0.0;
  const double arg_z = normalize_angle(std::arg(z));
  const double soft = 1.0 - std::abs(z);
  auto kernel = [&](double t) { return schwarz_kernel(z * std::polar(1.0, -t), order); };

  cplx total{};
  for (const auto& at : spec.measure.atoms()) total += at.mass * kernel(at.theta);

  for (const auto& p : spec.measure.pieces()) {
    if (poisson && p.kind == DensityPiece::Kind::Constant) {
      total += p.offset * arc_schwarz_integral(z, p.a, p.b);
      continue;
    }
    std::vector<double> cuts;
    add_graded(cuts, arg_z, soft, p.a, p.b);
    auto f = [&](double t) { return kernel(t) * p.density(t); };
    total += quad::integrate<cplx>(f, p.a, p.b, cuts, opt.integral).value;
  }

  if (const auto& c = spec.measure.cantor()) {
    const std::array<SingularPoint, 1> sing{SingularPoint{arg_z, soft}};
    auto leaf = [&](double a, double b, double mass) -> cplx {
      if (poisson) return mass / (b - a) * arc_schwarz_integral(z, a, b);
      std::vector<double> cuts;
      add_graded(cuts, arg_z, soft, a, b);
      return mass / (b - a) * quad::integrate<cplx>(kernel, a, b, cuts, opt.integral).value;
    };
    total += cantor_integrate<cplx>(*c, sing, opt.cantor_kappa, kernel, leaf);
  }
  return total;
}

double eval_u(const HarmonicSpec& spec, const DiskPoint& z, const EvalOptions& opt) {
  return eval_F(spec, z.to_complex(), opt).real();
}

double eval_conjugate(const HarmonicSpec& spec, const DiskPoint& z, const EvalOptions& opt) {
  return eval_F(spec, z.to_complex(), opt).imag();
}

cplx conj_via_schwarz(const std::function<double(double)>& u_on_circle, double R, cplx z,
                      double imF0) {
  if (!(R > 0.0 && R < 1.0)) throw DomainError("Schwarz integral requires R in (0, 1)");
  if (!(std::abs(z) < R)) throw DomainError("Schwarz integral requires |z| < R");
  auto f = [&](double t) {
    const cplx w = std::polar(R, t);
    return (w + z) / (w - z) * u_on_circle(t);
  };
  const auto res = quad::integrate_periodic<cplx>(f, 1e-13, 64, std::size_t{1} << 22);
  return res.value / kTwoPi + cplx(0.0, imF0);
}

cplx example1(cplx z) {
  if (!(std::norm(z) < 1.0)) throw DomainError("example1 requires |z| < 1");
  return std::sqrt((1.0 + z) / (1.0 - z));
}

double example2_poisson(cplx z) { return poisson_kernel(z, KernelOrder(0.0)); }

double example2_conjugate(cplx z) {
  if (!(std::norm(z) < 1.0)) throw DomainError("kernel requires |z| < 1");
  const cplx w = 1.0 - z;
  return 2.0 * (z - 1.0).imag() / std::norm(w);
}

double example2_sharpness(double t) {
  if (!(t > 0.0)) throw DomainError("example2 requires t > 0");
  const cplx z = 1.0 - std::polar(t, 0.25 * kPi);
  if (!(std::norm(z) < 1.0)) throw DomainError("example2 point lies outside the disk");
  return std::abs(example2_conjugate(z)) * std::abs(1.0 - z);
}

// ---------------------------------------------------------------------------

namespace {

void require_recovery_args(double theta, int depth) {
  if (!(theta >= 0.0 && theta <= kTwoPi)) throw DomainError("recovery requires theta in [0, 2pi]");
  if (depth < 6 || depth > kMaxGridDepth) throw DomainError("recovery depth must lie in 6..40");
}

// int_0^theta P_0(r e^{i(φ - t)}) dφ = Re J(r, t - theta, t).
double radial_partial(const CircleMeasure& mu, double r, double theta) {
  const cplx z(r, 0.0);
  auto g = [&](double t) { return arc_schwarz_integral(z, t - theta, t).real(); };
  double total = 0.0;
  for (const auto& at : mu.atoms()) total += at.mass * g(at.theta);
  const quad::Options opt{std::numeric_limits<double>::infinity(), 1e-11, std::size_t{1} << 16};
  for (const auto& p : mu.pieces()) {
    std::vector<double> cuts;
    add_graded(cuts, 0.0, 1.0 - r, p.a, p.b);
    add_graded(cuts, theta, 1.0 - r, p.a, p.b);
    auto f = [&](double t) { return g(t) * p.density(t); };
    total += quad::integrate<double>(f, p.a, p.b, cuts, opt).value;
  }
  if (const auto& c = mu.cantor()) {
    const std::array<SingularPoint, 2> sing{SingularPoint{0.0, 1.0 - r},
                                            SingularPoint{theta, 1.0 - r}};
    const std::function<double(double)> gf = g;
    auto leaf = [&](double a, double b, double mass) { return mass * gauss3_mean(gf, a, b); };
    total += cantor_integrate<double>(*c, sing, 16.0, g, leaf);
  }
  return total;
}

Recovery extrapolate(std::vector<double> radii, std::vector<double> partials) {
  // Richardson in 1 - r_n, which halves per level; at most three eliminations.
  const std::size_t n = partials.size();
  std::vector<std::vector<double>> table(n);
  for (std::size_t i = 0; i < n; ++i) {
    table[i].push_back(partials[i]);
    double factor = 2.0;
    for (std::size_t j = 1; j <= std::min<std::size_t>(i, 3); ++j, factor *= 2.0) {
      table[i].push_back(table[i][j - 1] + (table[i][j - 1] - table[i - 1][j - 1]) / (factor - 1.0));
    }
  }
  Recovery out;
  const std::size_t col = std::min<std::size_t>(n - 2, 3);
  out.value = table[n - 1][col];
  const double prev = table[n - 2][col];
  double scale = 0.0;
  for (double p : partials) scale = std::max(scale, std::abs(p));
  const double denom = std::max({std::abs(out.value), 1e-3 * scale, 1e-300});
  out.change = std::abs(out.value - prev) / denom;
  out.normalized = out.value / kTwoPi;
  out.radii = std::move(radii);
  out.partials = std::move(partials);
  if (out.change > 0.1) throw NumericalError("recovery did not stabilize");
  return out;
}

}  // namespace

Recovery recover_psi(const HarmonicSpec& spec, double theta, int depth) {
  require_recovery_args(theta, depth);
  std::vector<double> radii, partials;
  for (int n = 4; n <= depth; ++n) {
    const double r = 1.0 - std::ldexp(1.0, -n);
    radii.push_back(r);
    partials.push_back(theta == 0.0 ? 0.0 : radial_partial(spec.measure, r, theta));
  }
  return extrapolate(std::move(radii), std::move(partials));
}

Recovery recover_psi(const std::function<double(cplx)>& u, double theta, int depth) {
  require_recovery_args(theta, depth);
  const quad::Options opt{std::numeric_limits<double>::infinity(), 1e-10, std::size_t{1} << 18};
  std::vector<double> radii, partials;
  for (int n = 4; n <= depth; ++n) {
    const double r = 1.0 - std::ldexp(1.0, -n);
    radii.push_back(r);
    auto f = [&](double phi) { return u(std::polar(r, phi)); };
    partials.push_back(theta == 0.0 ? 0.0 : quad::integrate<double>(f, 0.0, theta, opt).value);
  }
  return extrapolate(std::move(radii), std::move(partials));
}

double circle_means(const std::function<double(cplx)>& u, double r, MeanKind p,
                    const BoundarySet& e) {
  if (!(r > 0.0 && r < 1.0)) throw DomainError("circle means require r in (0, 1)");
  const double width = 1.0 - r;
  const std::vector<double> ends = e.empty() ? std::vector<double>{} : e.endpoints();
  auto absu = [&](double t) { return std::abs(u(std::polar(r, t))); };

  if (p == MeanKind::One) {
    std::vector<double> cuts;
    for (double x : ends) add_graded(cuts, x, width, 0.0, kTwoPi);
    const quad::Options opt{std::numeric_limits<double>::infinity(), 1e-10, std::size_t{1} << 18};
    return quad::integrate<double>(absu, 0.0, kTwoPi, cuts, opt).value / kTwoPi;
  }

  std::vector<double> cand;
  constexpr int kUniform = 1024;
  for (int i = 0; i < kUniform; ++i) cand.push_back(kTwoPi * i / kUniform);
  for (double x : ends) {
    for (int j = -32; j <= 32; ++j) cand.push_back(normalize_angle(x + j * 4.0 * width / 32.0));
  }
  std::sort(cand.begin(), cand.end());
  std::size_t best = 0;
  double best_val = -1.0;
  std::vector<double> vals(cand.size());
  for (std::size_t i = 0; i < cand.size(); ++i) {
    vals[i] = absu(cand[i]);
    if (vals[i] > best_val) {
      best_val = vals[i];
      best = i;
    }
  }
  // Golden-section refinement between the neighbours of the best candidate.
  const std::size_t n = cand.size();
  double lo = best == 0 ? cand[n - 1] - kTwoPi : cand[best - 1];
  double hi = best + 1 == n ? cand[0] + kTwoPi : cand[best + 1];
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = hi - g * (hi - lo), x2 = lo + g * (hi - lo);
  double f1 = absu(x1), f2 = absu(x2);
  for (int it = 0; it < 60 && hi - lo > 1e-14; ++it) {
    if (f1 > f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - g * (hi - lo);
      f1 = absu(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + g * (hi - lo);
      f2 = absu(x2);
    }
  }
  return std::max({best_val, f1, f2});
}

DjrbashianReport djrbashian_condition(const HarmonicSpec& spec, const std::vector<double>& radii) {
  const double alpha = spec.order.alpha();
  auto u = [&spec](cplx z) { return eval_F(spec, z).real(); };
  const std::vector<double> breaks = spec.measure.breakpoints();
  const quad::Options opt{std::numeric_limits<double>::infinity(), 1e-8, std::size_t{1} << 15};
  DjrbashianReport out;
  for (double r : radii) {
    if (!(r > 0.0 && r < 1.0)) throw DomainError("radii must lie in (0, 1)");
    std::vector<double> cuts;
    for (double x : breaks) add_graded(cuts, x, 1.0 - r, 0.0, kTwoPi);
    auto f = [&](double phi) { return std::abs(u_alpha_eval(u, alpha, DiskPoint(r, phi))); };
    const double v = quad::integrate<double>(f, 0.0, kTwoPi, cuts, opt).value;
    out.radii.push_back(r);
    out.values.push_back(v);
    out.sup = std::max(out.sup, v);
  }
  return out;
}

}  // namespace conjbound
