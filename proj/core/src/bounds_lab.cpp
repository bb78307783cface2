#include "conjbound/bounds_lab.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include "conjbound/errors.hpp"
#include "conjbound/parallel.hpp"
#include "conjbound/quadrature.hpp"

namespace conjbound {

GrowthProfile::GrowthProfile(double q, double gamma) : q_(q), gamma_(gamma) {
  if (!(q > 0.0) || !std::isfinite(q)) throw DomainError("growth profile requires q > 0");
  if (!(gamma <= q) || !std::isfinite(gamma)) throw DomainError("growth profile requires gamma <= q");
}

MajorantCase majorant_case(const GrowthProfile& profile) {
  const double q = profile.q(), g = profile.gamma();
  if (q > g && g >= 0.0) return MajorantCase::LogOverPower;
  if (q > 0.0 && g < 0.0) return MajorantCase::PowerRatio;
  if (q == g && q > 0.0) return MajorantCase::LogRho;
  throw DomainError("profile outside the majorant cases");
}

namespace {

double majorant_from(MajorantCase c, const GrowthProfile& p, double r, double rh,
                     bool with_log = true) {
  switch (c) {
    case MajorantCase::LogOverPower: {
      const double power = std::pow(rh, -(p.q() - p.gamma()));
      return with_log ? -std::log1p(-r) * power : power;
    }
    case MajorantCase::PowerRatio:
      return std::pow(1.0 - r, p.gamma()) * std::pow(rh, -p.q());
    case MajorantCase::LogRho:
      return with_log ? -std::log(rh) : 1.0;
  }
  return 0.0;
}

}  // namespace

double majorant_thm1(const DiskPoint& z, const GrowthProfile& profile, const BoundarySet& e) {
  if (z.r() < 0.5) throw DomainError("majorant requires 1/2 <= |z| < 1");
  const MajorantCase c = majorant_case(profile);
  return majorant_from(c, profile, z.r(), rho(z, e));
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Bounded:
      return "bounded";
    case Verdict::Growing:
      return "growing";
    case Verdict::Inconclusive:
      return "inconclusive";
  }
  return "inconclusive";
}

namespace {

// Least-squares slope of ys against xs.
double ls_slope(const std::vector<double>& xs, const std::vector<double>& ys) {
  const double n = static_cast<double>(xs.size());
  const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
  const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  return sxx > 0.0 ? sxy / sxx : 0.0;
}

}  // namespace

VerdictStats judge(const std::vector<double>& sups, const VerdictRule& rule) {
  VerdictStats st;
  for (double s : sups) {
    if (!std::isfinite(s)) {
      st.verdict = Verdict::Growing;
      st.last_ratio = st.trend = std::numeric_limits<double>::infinity();
      return st;
    }
  }
  const int n = static_cast<int>(sups.size());
  if (n < std::max(rule.min_layers, 3)) return st;
  const double last = sups[n - 1], prev = sups[n - 2];
  if (prev > 0.0) {
    st.last_ratio = last / prev;
  } else {
    st.last_ratio = last > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
  }
  std::vector<double> xs, ys;
  for (int i = n - std::max(3, n / 2); i < n; ++i) {
    if (sups[i] > 0.0) {
      xs.push_back(i);
      ys.push_back(std::log(sups[i]));
    }
  }
  st.trend = xs.size() >= 2 ? std::exp(ls_slope(xs, ys)) : 0.0;
  const bool bounded = st.last_ratio < rule.ratio_limit && st.trend < rule.trend_limit;
  st.verdict = bounded ? Verdict::Bounded : Verdict::Growing;
  return st;
}

namespace {

struct PointSample {
  double r = 0.0;
  double theta = 0.0;
  double rho = 0.0;
  double a = 0.0;  // first channel, e.g. |u|
  double b = 0.0;  // second channel, e.g. |u~|
  bool ok = false;
};

using Layers = std::vector<std::vector<PointSample>>;

// Evaluate one or two functions at every grid point, one layer per task.
Layers sample_layers(const HarmonicFn& fa, const HarmonicFn* fb, const BoundarySet& e,
                     const SamplingGrid& grid, const SweepOptions& opt) {
  if (e.empty()) throw DomainError("empty boundary set");
  auto work = [&](std::size_t li) {
    const GridLayer& layer = grid.layers[li];
    std::vector<PointSample> out(layer.angles.size());
    for (std::size_t j = 0; j < layer.angles.size(); ++j) {
      PointSample& s = out[j];
      s.r = layer.radius;
      s.theta = layer.angles[j];
      const DiskPoint z(s.r, s.theta);
      s.rho = rho(z, e);
      try {
        const std::complex<double> w = z.to_complex();
        s.a = std::abs(fa(w));
        s.b = fb ? std::abs((*fb)(w)) : 0.0;
        s.ok = std::isfinite(s.a) && std::isfinite(s.b);
      } catch (const std::exception&) {
        s.ok = false;
      }
    }
    return out;
  };
  Layers layers = parallel_map<std::vector<PointSample>>(grid.layers.size(), opt.threads, work);
  std::size_t total = 0, skipped = 0;
  for (const auto& l : layers) {
    total += l.size();
    for (const auto& s : l) skipped += s.ok ? 0 : 1;
  }
  if (total > 0 && static_cast<double>(skipped) > opt.max_skip_fraction * static_cast<double>(total)) {
    throw NumericalError("evaluation failed at " + std::to_string(skipped) + " of " +
                         std::to_string(total) + " grid points");
  }
  return layers;
}

// Ratio of a sample, or NaN to exclude the point.
using RatioFn = std::function<double(const PointSample&)>;

VerificationReport build_report(const SamplingGrid& grid, const Layers& layers, const RatioFn& ratio,
                                const VerdictRule& rule) {
  VerificationReport rep;
  std::vector<double> sups;
  for (std::size_t li = 0; li < layers.size(); ++li) {
    LayerRecord rec;
    rec.k = grid.layers[li].k;
    rec.radius = grid.layers[li].radius;
    bool have = false;
    for (const auto& s : layers[li]) {
      if (!s.ok) {
        ++rec.skipped;
        continue;
      }
      const double v = ratio(s);
      if (std::isnan(v)) continue;
      ++rec.points;
      // Ties break toward the point nearest E.
      const bool better = !have || v > rec.sup * (1.0 + 1e-12) ||
                          (v >= rec.sup * (1.0 - 1e-12) && s.rho < rec.argmax_rho);
      if (better) {
        have = true;
        rec.sup = v;
        rec.argmax_r = s.r;
        rec.argmax_theta = s.theta;
        rec.argmax_rho = s.rho;
      }
    }
    rep.evaluated += rec.points;
    rep.skipped += rec.skipped;
    rep.constant = std::max(rep.constant, rec.sup);
    sups.push_back(rec.sup);
    rep.layers.push_back(rec);
  }
  const VerdictStats st = judge(sups, rule);
  rep.verdict = st.verdict;
  rep.last_ratio = st.last_ratio;
  rep.trend = st.trend;
  return rep;
}

RatioFn hypothesis_ratio(const GrowthProfile& p) {
  return [p](const PointSample& s) {
    return s.a * std::pow(s.rho, p.q()) * std::pow(1.0 - s.r, -p.gamma());
  };
}

}  // namespace

VerificationReport fit_hypothesis(const HarmonicFn& u, const GrowthProfile& profile,
                                  const BoundarySet& e, const SamplingGrid& grid,
                                  const SweepOptions& opt) {
  const Layers layers = sample_layers(u, nullptr, e, grid, opt);
  return build_report(grid, layers, hypothesis_ratio(profile), opt.rule);
}

Thm1Report verify_thm1(const HarmonicFn& u, const HarmonicFn& u_conj, const GrowthProfile& profile,
                       const BoundarySet& e, const SamplingGrid& grid, const SweepOptions& opt) {
  const MajorantCase c = majorant_case(profile);
  for (const auto& layer : grid.layers) {
    if (layer.radius < 0.5) throw DomainError("majorant requires 1/2 <= |z| < 1");
  }
  const Layers layers = sample_layers(u, &u_conj, e, grid, opt);
  Thm1Report rep;
  rep.hypothesis = build_report(grid, layers, hypothesis_ratio(profile), opt.rule);
  auto conclusion = [&](bool with_log) {
    return [&, with_log](const PointSample& s) {
      const double m = majorant_from(c, profile, s.r, s.rho, with_log);
      // The log(1/rho) majorant is not positive once rho >= 1; such points carry no bound.
      if (!(m > 0.0)) return std::numeric_limits<double>::quiet_NaN();
      return s.b / m;
    };
  };
  rep.conclusion = build_report(grid, layers, conclusion(true), opt.rule);
  rep.log_probe = build_report(grid, layers, conclusion(false), opt.rule);

  const auto& pl = rep.log_probe.layers;
  const std::size_t n = pl.size();
  if (n >= 3) {
    std::vector<double> xs, ys;
    for (std::size_t i = n - std::max<std::size_t>(3, n / 2); i < n; ++i) {
      xs.push_back(-std::log1p(-pl[i].radius));
      ys.push_back(pl[i].sup);
    }
    const double last = pl.back().sup;
    rep.probe_log_rate = last > 0.0 ? ls_slope(xs, ys) * xs.back() / last : 0.0;
    rep.probe_grows_logarithmically = rep.probe_log_rate > 0.5;
  }

  const Verdict h = rep.hypothesis.verdict, k = rep.conclusion.verdict;
  if (h == Verdict::Growing || k == Verdict::Growing) {
    rep.verdict = Verdict::Growing;
  } else if (h == Verdict::Bounded && k == Verdict::Bounded) {
    rep.verdict = Verdict::Bounded;
  } else {
    rep.verdict = Verdict::Inconclusive;
  }
  return rep;
}

namespace {

GrowthOrder order_from_layers(const SamplingGrid& grid, const Layers& layers) {
  GrowthOrder out;
  const VerificationReport rep =
      build_report(grid, layers, [](const PointSample& s) { return s.a; }, VerdictRule{});
  if (rep.constant == 0.0) {
    out.zero_function = true;
    return out;
  }
  std::vector<double> xs, ys;
  for (const auto& rec : rep.layers) {
    if (rec.sup > 0.0 && rec.argmax_rho < 0.1 && rec.argmax_rho > 0.0) {
      out.layers.push_back(rec.k);
      out.sups.push_back(rec.sup);
      out.rhos.push_back(rec.argmax_rho);
      xs.push_back(-std::log(rec.argmax_rho));
      ys.push_back(std::log(rec.sup));
    }
  }
  if (xs.size() < 2) {
    // Nowhere close to E, so no power of 1/rho is forced.
    return out;
  }
  for (std::size_t i = 1; i < xs.size(); ++i) {
    const double dx = xs[i] - xs[i - 1];
    out.local_slopes.push_back(dx != 0.0 ? (ys[i] - ys[i - 1]) / dx : 0.0);
  }
  const double slope = ls_slope(xs, ys);
  out.sigma = std::max(0.0, slope);
  const auto& ls = out.local_slopes;
  const std::size_t m = ls.size();
  if (m >= 3 && ls[m - 1] > ls[m - 2] && ls[m - 2] > ls[m - 3] && ls[m - 1] > slope + 0.5) {
    out.infinite = true;
    out.sigma = std::numeric_limits<double>::infinity();
  }
  return out;
}

}  // namespace

GrowthOrder growth_order(const HarmonicFn& u, const BoundarySet& e, const SamplingGrid& grid,
                         const SweepOptions& opt) {
  const Layers layers = sample_layers(u, nullptr, e, grid, opt);
  return order_from_layers(grid, layers);
}

double phi_tilde(const std::function<double(double)>& phi, double x) {
  if (!(x >= 0.5)) throw DomainError("phi_tilde requires x >= 1/2");
  if (x == 0.5) return 0.0;
  // t = e^s turns phi(t)/t dt into phi(e^s) ds.
  auto f = [&](double s) { return phi(std::exp(s)); };
  const quad::Options opt{1e-12, 1e-12, std::size_t{1} << 16};
  return quad::integrate<double>(f, std::log(0.5), std::log(x), opt).value;
}

AlmostIncreasing almost_increasing_check(const std::function<double(double)>& phi, double a,
                                         double c, double x_max, int samples) {
  if (!(a > 0.0)) throw DomainError("almost-increasing check requires a > 0");
  if (!(c >= 1.0)) throw DomainError("almost-increasing check requires c >= 1");
  if (!(x_max > 0.5) || samples < 2) throw DomainError("almost-increasing check needs a sample range");
  AlmostIncreasing out;
  double running_min = std::numeric_limits<double>::infinity();
  const double l0 = std::log(0.5), l1 = std::log(x_max);
  for (int i = 0; i < samples; ++i) {
    const double x = std::exp(l0 + (l1 - l0) * i / (samples - 1));
    const double g = phi(x) / std::pow(x, a);
    if (i > 0) {
      const double ratio = running_min > 0.0 ? g / running_min
                                             : (g > 0.0 ? std::numeric_limits<double>::infinity() : 0.0);
      out.worst = std::max(out.worst, ratio);
    }
    running_min = std::min(running_min, g);
  }
  out.holds = out.worst <= c;
  return out;
}

// ---------------------------------------------------------------------------

void require_support_inside(const CircleMeasure& mu, const BoundarySet& e) {
  if (e.empty()) throw DomainError("empty boundary set");
  const auto iv = e.unwrapped_intervals();
  constexpr double tol = 1e-12;
  auto covered = [&](double a, double b) {
    for (const auto& [lo, hi] : iv) {
      if (lo <= a + tol && b <= hi + tol) return true;
    }
    return false;
  };
  for (const auto& at : mu.atoms()) {
    if (at.mass != 0.0 && !e.contains(at.theta, tol)) throw DomainError("measure support escapes E");
  }
  for (const auto& p : mu.pieces()) {
    if (p.variation() != 0.0 && !covered(p.a, p.b)) throw DomainError("measure support escapes E");
  }
  if (const auto& c = mu.cantor()) {
    if (c->mass != 0.0) {
      const double len = c->level_length(c->depth);
      for (double s : c->leaf_starts()) {
        if (!covered(s, s + len)) throw DomainError("measure support escapes E");
      }
    }
  }
}

namespace {

double unit_uniform(std::mt19937_64& eng) {
  return static_cast<double>(eng() >> 11) * 0x1.0p-53;
}

Lemma1Sample draw_lemma1(double lambda, std::uint64_t seed, std::size_t index, const NuOptions& opt) {
  std::mt19937_64 eng(seed * 0x9E3779B97F4A7C15ull + index);
  const int arcs = 1 + static_cast<int>(unit_uniform(eng) * 4.0);
  std::vector<std::pair<double, double>> iv;
  for (int i = 0; i < arcs; ++i) {
    const double start = kTwoPi * unit_uniform(eng);
    const double len = 0.01 + 0.99 * unit_uniform(eng);
    iv.emplace_back(start, start + len);
  }
  Lemma1Sample s;
  s.e = BoundarySet::from_intervals(iv);
  const double target = std::exp(std::log(1e-4) + (std::log(0.5) - std::log(1e-4)) * unit_uniform(eng));
  // A point of E, moved off the set by less than the target distance.
  const auto& pick = s.e.arcs()[static_cast<std::size_t>(unit_uniform(eng) * s.e.arcs().size())];
  const double base = pick.start + pick.length * unit_uniform(eng);
  const double phi = normalize_angle(base + (2.0 * unit_uniform(eng) - 1.0) * 0.9 * target);
  // rho(0) = 1 > target and rho(s e^{i phi}) -> dist(e^{i phi}, E) < target as s -> 1.
  double lo = 0.0, hi = 1.0 - 1e-15;
  for (int it = 0; it < 200 && hi - lo > 1e-16; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (rho(DiskPoint(mid, phi), s.e) > target) lo = mid; else hi = mid;
  }
  s.w = DiskPoint(0.5 * (lo + hi), phi);
  s.rho = rho(s.w, s.e);
  s.exact = nu_exact(s.w, lambda, s.e, opt);
  s.bound = nu_bound_lemma1(s.w, lambda, s.e);
  s.ratio = s.exact / s.bound;
  return s;
}

}  // namespace

Lemma1Sweep lemma1_sweep(double lambda, int configs, std::uint64_t seed, int threads,
                         const NuOptions& opt) {
  if (!(lambda > 0.0)) throw DomainError("nu requires lambda > 0");
  if (configs <= 0) throw DomainError("lemma1 sweep needs at least one configuration");
  Lemma1Sweep out;
  out.lambda = lambda;
  out.samples = parallel_map<Lemma1Sample>(static_cast<std::size_t>(configs), threads,
                                           [&](std::size_t i) { return draw_lemma1(lambda, seed, i, opt); });
  out.decade_edges = {1e-4, 1e-3, 1e-2, 1e-1, 0.5 + 1e-12};
  out.decade_fit.assign(out.decade_edges.size() - 1, 0.0);
  out.decade_count.assign(out.decade_edges.size() - 1, 0);
  bool finite = true;
  for (const auto& s : out.samples) {
    finite = finite && std::isfinite(s.ratio);
    out.fitted_c = std::max(out.fitted_c, s.ratio);
    for (std::size_t b = 0; b + 1 < out.decade_edges.size(); ++b) {
      if (s.rho >= out.decade_edges[b] * (1.0 - 1e-9) && s.rho < out.decade_edges[b + 1]) {
        out.decade_fit[b] = std::max(out.decade_fit[b], s.ratio);
        ++out.decade_count[b];
        break;
      }
    }
  }
  const double coarse = out.decade_fit.back();
  out.fine_over_coarse = coarse > 0.0 ? out.decade_fit.front() / coarse
                                      : std::numeric_limits<double>::infinity();
  out.pass = finite && out.decade_count.front() > 0 && out.decade_count.back() > 0 &&
             out.fine_over_coarse < 2.0;
  return out;
}

Thm3Report thm3_experiment(const CircleMeasure& mu, double alpha, std::optional<double> gamma,
                           const BoundarySet& e, const SamplingGrid& grid, const Thm3Options& opt) {
  if (!(alpha >= 0.0)) throw DomainError("experiment requires alpha >= 0");
  if (gamma && !(*gamma > 0.0 && *gamma < 1.0)) throw DomainError("experiment requires gamma in (0, 1)");
  require_support_inside(mu, e);

  Thm3Report rep;
  rep.holder = holder_exponent(Primitive::of_measure(mu), e, opt.holder_level);
  const double g_hat = rep.holder.infinite ? 1.0 : std::clamp(rep.holder.gamma, 0.0, 1.0);
  rep.exponent = alpha + 1.0 - g_hat + opt.exponent_margin;

  HarmonicSpec spec{mu, KernelOrder(alpha)};
  const HarmonicFn u = [&spec](std::complex<double> z) { return eval_F(spec, z).real(); };
  const Layers layers = sample_layers(u, nullptr, e, grid, opt.sweep);
  rep.growth = build_report(grid, layers, hypothesis_ratio(GrowthProfile(rep.exponent, 0.0)),
                            opt.sweep.rule);
  rep.order = order_from_layers(grid, layers);

  const double g_conv = gamma ? *gamma : g_hat;
  if (g_conv > 0.0 && g_conv < 1.0) {
    rep.converse_run = true;
    rep.converse_gamma = g_conv;
    std::vector<double> pts = discretize_set(e, std::ldexp(1.0, -(opt.converse_level + 6)));
    if (pts.size() > opt.recovery_samples) {
      std::vector<double> thin;
      const double step = static_cast<double>(pts.size() - 1) / (opt.recovery_samples - 1);
      for (std::size_t i = 0; i < opt.recovery_samples; ++i) {
        thin.push_back(pts[static_cast<std::size_t>(std::llround(i * step))]);
      }
      pts = std::move(thin);
    }
    const auto raw = parallel_map<double>(pts.size(), opt.sweep.threads, [&](std::size_t i) {
      try {
        return recover_psi(spec, pts[i], opt.recovery_depth).normalized;
      } catch (const NumericalError&) {
        return std::numeric_limits<double>::quiet_NaN();
      }
    });
    std::vector<double> kept, values;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      if (std::isnan(raw[i])) {
        ++rep.converse_skipped;
      } else {
        kept.push_back(pts[i]);
        values.push_back(raw[i]);
      }
    }
    if (static_cast<double>(rep.converse_skipped) >
        opt.sweep.max_skip_fraction * static_cast<double>(pts.size())) {
      throw NumericalError("recovery failed at " + std::to_string(rep.converse_skipped) + " of " +
                           std::to_string(pts.size()) + " points");
    }
    PrimitiveSamples samples{kept, values, values};
    std::vector<double> sups;
    for (int j = 3; j <= opt.converse_level; ++j) {
      const double d = std::ldexp(1.0, -j);
      const double w = modulus_from_samples(samples, d);
      rep.converse_deltas.push_back(d);
      const double v = w * std::pow(d, -g_conv) / std::log(1.0 / d);
      rep.converse_values.push_back(v);
      sups.push_back(v);
    }
    rep.converse = judge(sups, opt.sweep.rule);
  }

  if (rep.growth.verdict == Verdict::Growing ||
      (rep.converse_run && rep.converse.verdict == Verdict::Growing)) {
    rep.verdict = Verdict::Growing;
  } else if (rep.growth.verdict == Verdict::Bounded &&
             (!rep.converse_run || rep.converse.verdict == Verdict::Bounded)) {
    rep.verdict = Verdict::Bounded;
  }
  return rep;
}

}  // namespace conjbound
