#include "conjbound_cli/cli.hpp"

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "conjbound/bounds_lab.hpp"
#include "conjbound/circle_measures.hpp"
#include "conjbound/disk_geometry.hpp"
#include "conjbound/errors.hpp"
#include "conjbound/fractional.hpp"
#include "conjbound/harmonic_eval.hpp"
#include "conjbound/io.hpp"
#include "conjbound/kernels.hpp"

namespace conjbound::cli {

using nlohmann::json;
using cplx = std::complex<double>;

namespace {

// Input/output problems map to the usage exit code.
class IoError : public std::runtime_error {
 public:
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

struct Globals {
  std::uint64_t seed = 1;
  int threads = 0;
  std::optional<double> tol_integral;
  std::optional<double> tol_derivative;
  std::string out;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// "r,theta" -> DiskPoint.
DiskPoint parse_point(const std::string& s) {
  const auto comma = s.find(',');
  if (comma == std::string::npos) throw DomainError("point must be given as \"r,theta\"");
  char* end = nullptr;
  const std::string a = s.substr(0, comma), b = s.substr(comma + 1);
  const double r = std::strtod(a.c_str(), &end);
  if (end != a.c_str() + a.size() || a.empty()) throw DomainError("bad radius '" + a + "'");
  const double t = std::strtod(b.c_str(), &end);
  if (end != b.c_str() + b.size() || b.empty()) throw DomainError("bad angle '" + b + "'");
  return DiskPoint(r, t);
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

class Emitter {
 public:
  Emitter(const Globals& g, std::ostream& out) : g_(g), out_(out) {}

  void write(const std::string& text) {
    if (g_.out.empty()) {
      out_ << text;
      return;
    }
    std::ofstream f(g_.out, std::ios::binary | std::ios::trunc);
    if (!f) throw IoError("cannot write '" + g_.out + "'");
    f << text;
    if (!f) throw IoError("write failed for '" + g_.out + "'");
  }
  void json_out(const json& j) { write(j.dump(2) + "\n"); }

 private:
  const Globals& g_;
  std::ostream& out_;
};

void write_side_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError("cannot write '" + path + "'");
  f << text;
}

int threads_of(const Globals& g) {
  if (g.threads > 0) return g.threads;
  if (const char* env = std::getenv("CONJBOUND_THREADS")) {
    const int t = std::atoi(env);
    if (t > 0) return t;
  }
  return 1;
}

FracOptions frac_options(const Globals& g) {
  FracOptions o;
  if (g.tol_integral) o.integral.abs_tol = *g.tol_integral;
  if (g.tol_derivative) o.derivative_rel_tol = *g.tol_derivative;
  return o;
}

NuOptions nu_options(const Globals& g) {
  NuOptions o;
  if (g.tol_integral) o.integral.rel_tol = *g.tol_integral;
  return o;
}

json report_json(const VerificationReport& rep) { return json::parse(io::to_json(rep)); }

std::string report_csv(const VerificationReport& rep) {
  std::string s = "k,layer_radius,sup_ratio,argmax_r,argmax_theta\n";
  for (const auto& l : rep.layers) {
    s += std::to_string(l.k) + "," + fmt(l.radius) + "," + fmt(l.sup) + "," + fmt(l.argmax_r) +
         "," + fmt(l.argmax_theta) + "\n";
  }
  return s;
}

json cplx_json(cplx v) { return json::array({v.real(), v.imag()}); }

// --func one | monomial:n | kernel:a,theta
RadialFunction parse_func(const std::string& spec) {
  if (spec == "one") return RadialFunction::real([](double) { return 1.0; });
  if (spec.rfind("monomial:", 0) == 0) {
    const int n = std::stoi(spec.substr(9));
    if (n < 0) throw DomainError("monomial degree must be >= 0");
    return RadialFunction::real([n](double x) { return std::pow(x, n); });
  }
  if (spec.rfind("kernel:", 0) == 0) {
    const std::string body = spec.substr(7);
    const auto comma = body.find(',');
    if (comma == std::string::npos) throw DomainError("kernel function needs a,theta");
    const double a = std::stod(body.substr(0, comma));
    const double t = std::stod(body.substr(comma + 1));
    // x^a P_0(x e^{i theta})
    return RadialFunction::real([a, t](double x) {
      return std::pow(x, a) * poisson_kernel(std::polar(x, t), KernelOrder(0.0));
    });
  }
  throw DomainError("unknown --func '" + spec + "'");
}

HarmonicSpec load_spec(const std::string& path) { return io::parse_spec(read_file(path)); }

BoundarySet set_or_support(const std::string& path, const CircleMeasure& mu) {
  if (!path.empty()) return io::parse_boundary_set(read_file(path));
  BoundarySet e = mu.support();
  if (e.empty()) throw DomainError("measure has empty support; pass --set");
  return e;
}

int verdict_exit(Verdict v) { return v == Verdict::Bounded ? kExitPass : kExitFail; }

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Numerical harness for harmonic conjugate growth estimates", "conjbound"};
  app.require_subcommand(1);
  Globals g;
  app.add_option("--seed", g.seed, "Seed for randomized sweeps");
  app.add_option("--threads", g.threads, "Worker threads (default: CONJBOUND_THREADS or 1)");
  app.add_option("--tol-integral", g.tol_integral, "Quadrature tolerance override");
  app.add_option("--tol-derivative", g.tol_derivative, "Relative tolerance of fractional derivatives");
  app.add_option("--out", g.out, "Write the report to this file instead of stdout");
  app.fallthrough();

  int code = kExitPass;
  Emitter emit(g, out);

  // kernel eval
  auto* kernel = app.add_subcommand("kernel", "Djrbashian kernels");
  kernel->require_subcommand(1);
  auto* keval = kernel->add_subcommand("eval", "S_alpha, P_alpha, Q_alpha at a point");
  double k_alpha = 0.0;
  std::string k_z;
  keval->add_option("--alpha", k_alpha, "Kernel order (> -1)")->required();
  keval->add_option("--z", k_z, "Point as \"r,theta\"")->required();
  keval->callback([&] {
    const DiskPoint z = parse_point(k_z);
    const KernelOrder order(k_alpha);
    const cplx s = schwarz_kernel(z.to_complex(), order);
    emit.json_out({{"alpha", k_alpha},
                   {"z", {z.r(), z.theta()}},
                   {"S", cplx_json(s)},
                   {"P", s.real()},
                   {"Q", s.imag()}});
  });

  // frac integral|derivative
  auto* frac = app.add_subcommand("frac", "Riemann-Liouville operators along the radius");
  frac->require_subcommand(1);
  double f_alpha = 0.0, f_r = 0.0;
  std::string f_func;
  auto add_frac_opts = [&](CLI::App* c) {
    c->add_option("--alpha", f_alpha, "Order (> 0)")->required();
    c->add_option("--func", f_func, "one | monomial:n | kernel:a,theta")->required();
    c->add_option("--r", f_r, "Radius in (0, 1)")->required();
  };
  auto* fint = frac->add_subcommand("integral", "D^-alpha h(r)");
  auto* fder = frac->add_subcommand("derivative", "D^alpha h(r)");
  add_frac_opts(fint);
  add_frac_opts(fder);
  auto frac_run = [&](bool derivative) {
    const RadialFunction h = parse_func(f_func);
    const FracOptions o = frac_options(g);
    const FracValue v = derivative ? frac_derivative_detailed(h, FracOrder(f_alpha), f_r, o)
                                   : frac_integral_detailed(h, f_alpha, f_r, o);
    emit.json_out({{"operator", derivative ? "derivative" : "integral"},
                   {"alpha", f_alpha},
                   {"func", f_func},
                   {"r", f_r},
                   {"value", cplx_json(v.value)},
                   {"error", v.error},
                   {"converged", v.converged}});
    if (!v.converged) code = kExitFail;
  };
  fint->callback([&] { frac_run(false); });
  fder->callback([&] { frac_run(true); });

  // nu
  auto* nu = app.add_subcommand("nu", "Arc measure nu_w^lambda of E and its bracket bound");
  double n_lambda = 0.0;
  std::string n_w, n_set;
  nu->add_option("--lambda", n_lambda, "Exponent (> 0)")->required();
  nu->add_option("--w", n_w, "Point as \"r,theta\"")->required();
  nu->add_option("--set", n_set, "Boundary set JSON (default: the whole circle)");
  nu->callback([&] {
    const DiskPoint w = parse_point(n_w);
    const BoundarySet e = n_set.empty() ? BoundarySet::full_circle()
                                        : io::parse_boundary_set(read_file(n_set));
    const double exact = nu_exact(w, n_lambda, e, nu_options(g));
    const double bound = nu_bound_lemma1(w, n_lambda, e);
    emit.json_out({{"lambda", n_lambda},
                   {"w", {w.r(), w.theta()}},
                   {"rho", rho(w, e)},
                   {"length", e.total_length()},
                   {"nu", exact},
                   {"bound", bound},
                   {"ratio", exact / bound}});
  });

  // eval
  auto* ev = app.add_subcommand("eval", "u (and u~) of a harmonic spec at a point");
  std::string e_spec, e_z;
  bool e_conj = false;
  ev->add_option("--spec", e_spec, "HarmonicSpec JSON")->required();
  ev->add_option("--z", e_z, "Point as \"r,theta\"")->required();
  ev->add_flag("--conjugate", e_conj, "Also report the conjugate u~");
  ev->callback([&] {
    const HarmonicSpec spec = load_spec(e_spec);
    const DiskPoint z = parse_point(e_z);
    const cplx F = eval_F(spec, z.to_complex());
    json j{{"alpha", spec.order.alpha()}, {"z", {z.r(), z.theta()}}, {"u", F.real()}};
    if (e_conj) j["conjugate"] = F.imag();
    emit.json_out(j);
  });

  // recover
  auto* rec = app.add_subcommand("recover", "Recover 2pi mu([0, theta)) from radial integrals");
  std::string r_spec;
  double r_theta = 0.0;
  int r_depth = kDefaultRecoveryDepth;
  rec->add_option("--spec", r_spec, "HarmonicSpec JSON")->required();
  rec->add_option("--theta", r_theta, "Angle in [0, 2pi]")->required();
  rec->add_option("--depth", r_depth, "Finest radius 1 - 2^-depth");
  rec->callback([&] {
    const HarmonicSpec spec = load_spec(r_spec);
    const Recovery res = recover_psi(spec, r_theta, r_depth);
    emit.json_out({{"theta", r_theta},
                   {"raw", res.value},
                   {"normalized", res.normalized},
                   {"exact_normalized", spec.measure.primitive(r_theta)},
                   {"change", res.change},
                   {"radii", res.radii},
                   {"partials", res.partials}});
  });

  // means
  auto* means = app.add_subcommand("means", "Circle means M_1 or M_inf of u");
  std::string m_p, m_spec, m_set;
  double m_r = 0.0;
  means->add_option("--p", m_p, "1 or inf")->required()->check(CLI::IsMember({"1", "inf"}));
  means->add_option("--r", m_r, "Radius in (0, 1)")->required();
  means->add_option("--spec", m_spec, "HarmonicSpec JSON (default: unit atom at 0)");
  means->add_option("--set", m_set, "Boundary set used to refine angles (default: support)");
  means->callback([&] {
    const HarmonicSpec spec = m_spec.empty() ? HarmonicSpec{CircleMeasure::atom(0.0), KernelOrder(0.0)}
                                             : load_spec(m_spec);
    const BoundarySet e = set_or_support(m_set, spec.measure);
    auto u = [&spec](cplx z) { return eval_F(spec, z).real(); };
    const MeanKind kind = m_p == "1" ? MeanKind::One : MeanKind::Infinity;
    emit.json_out({{"p", m_p}, {"r", m_r}, {"mean", circle_means(u, m_r, kind, e)}});
  });

  // thm1
  auto* thm1 = app.add_subcommand("thm1", "Conjugate majorant sweep for a growth profile");
  std::string t_spec, t_set, t_csv;
  double t_q = 0.0, t_gamma = 0.0;
  int t_depth = 20, t_budget = 64;
  thm1->add_option("--spec", t_spec, "HarmonicSpec JSON")->required();
  thm1->add_option("--q", t_q, "Exponent q > 0")->required();
  thm1->add_option("--gamma", t_gamma, "Exponent gamma <= q")->required();
  thm1->add_option("--set", t_set, "Boundary set JSON (default: support of the measure)");
  thm1->add_option("--depth", t_depth, "Layers k = 1..depth at radius 1 - 2^-k");
  thm1->add_option("--budget", t_budget, "Uniform angles per layer");
  thm1->add_option("--csv", t_csv, "Also write the conclusion layers as CSV");
  thm1->callback([&] {
    const HarmonicSpec spec = load_spec(t_spec);
    const BoundarySet e = set_or_support(t_set, spec.measure);
    const GrowthProfile profile(t_q, t_gamma);
    const SamplingGrid grid = build_grid(e, t_depth, t_budget);
    SweepOptions so;
    so.threads = threads_of(g);
    auto u = [&spec](cplx z) { return eval_F(spec, z).real(); };
    auto v = [&spec](cplx z) { return eval_F(spec, z).imag(); };
    const Thm1Report rep = verify_thm1(u, v, profile, e, grid, so);
    json j = report_json(rep.conclusion);
    j["verdict"] = to_string(rep.verdict);
    j["conclusion_verdict"] = to_string(rep.conclusion.verdict);
    j["profile"] = {{"q", t_q}, {"gamma", t_gamma}};
    j["hypothesis"] = report_json(rep.hypothesis);
    json probe = report_json(rep.log_probe);
    probe["log_rate"] = rep.probe_log_rate;
    probe["grows_logarithmically"] = rep.probe_grows_logarithmically;
    j["log_probe"] = probe;
    emit.json_out(j);
    if (!t_csv.empty()) write_side_file(t_csv, report_csv(rep.conclusion));
    code = verdict_exit(rep.verdict);
  });

  // thm3
  auto* thm3 = app.add_subcommand("thm3", "Smoothness of mu on E versus growth of u");
  std::string h_measure, h_set;
  double h_alpha = 0.0;
  std::optional<double> h_gamma;
  int h_depth = 12, h_budget = 128;
  thm3->add_option("--measure", h_measure, "Measure JSON")->required();
  thm3->add_option("--alpha", h_alpha, "Kernel order >= 0")->required();
  thm3->add_option("--set", h_set, "Boundary set JSON (default: support of the measure)");
  thm3->add_option("--gamma", h_gamma, "Exponent in (0, 1) for the converse check");
  thm3->add_option("--depth", h_depth, "Grid depth");
  thm3->add_option("--budget", h_budget, "Uniform angles per layer");
  thm3->callback([&] {
    const CircleMeasure mu = io::parse_measure(read_file(h_measure));
    const BoundarySet e = set_or_support(h_set, mu);
    const SamplingGrid grid = build_grid(e, h_depth, h_budget);
    Thm3Options o;
    o.sweep.threads = threads_of(g);
    const Thm3Report rep = thm3_experiment(mu, h_alpha, h_gamma, e, grid, o);
    json j{{"holder",
            {{"gamma", rep.holder.infinite ? json(nullptr) : json(rep.holder.gamma)},
             {"std_error", rep.holder.std_error},
             {"lower", rep.holder.infinite ? json(nullptr) : json(rep.holder.lower)},
             {"upper", rep.holder.infinite ? json(nullptr) : json(rep.holder.upper)},
             {"infinite", rep.holder.infinite}}},
           {"exponent", rep.exponent},
           {"growth", report_json(rep.growth)},
           {"order", {{"sigma", rep.order.infinite ? json("inf") : json(rep.order.sigma)},
                      {"layers", rep.order.layers}}},
           {"verdict", to_string(rep.verdict)}};
    if (rep.converse_run) {
      j["converse"] = {{"gamma", rep.converse_gamma},
                       {"deltas", rep.converse_deltas},
                       {"values", rep.converse_values},
                       {"skipped", rep.converse_skipped},
                       {"last_ratio", rep.converse.last_ratio},
                       {"trend", rep.converse.trend},
                       {"verdict", to_string(rep.converse.verdict)}};
    } else {
      j["converse"] = nullptr;
    }
    emit.json_out(j);
    code = verdict_exit(rep.verdict);
  });

  // order
  auto* order = app.add_subcommand("order", "Order of growth of u near E");
  std::string o_spec, o_set;
  int o_depth = 16, o_budget = 64;
  order->add_option("--spec", o_spec, "HarmonicSpec JSON")->required();
  order->add_option("--set", o_set, "Boundary set JSON (default: support of the measure)");
  order->add_option("--depth", o_depth, "Grid depth (>= 12)");
  order->add_option("--budget", o_budget, "Uniform angles per layer");
  order->callback([&] {
    if (o_depth < 12) throw DomainError("order requires --depth >= 12");
    const HarmonicSpec spec = load_spec(o_spec);
    const BoundarySet e = set_or_support(o_set, spec.measure);
    const SamplingGrid grid = build_grid(e, o_depth, o_budget);
    SweepOptions so;
    so.threads = threads_of(g);
    auto u = [&spec](cplx z) { return eval_F(spec, z).real(); };
    const GrowthOrder go = growth_order(u, e, grid, so);
    emit.json_out({{"sigma", go.infinite ? json("inf") : json(go.sigma)},
                   {"infinite", go.infinite},
                   {"zero_function", go.zero_function},
                   {"layers", go.layers},
                   {"sups", go.sups},
                   {"rhos", go.rhos},
                   {"local_slopes", go.local_slopes}});
  });

  // lemma1-sweep
  auto* l1 = app.add_subcommand("lemma1-sweep", "Randomized domination of nu by the bracket bound");
  std::vector<double> l_lambdas;
  int l_configs = 200;
  l1->add_option("--lambda", l_lambdas, "Exponents (default: 0.5 1 2 3)");
  l1->add_option("--configs", l_configs, "Configurations per exponent");
  l1->callback([&] {
    if (l_lambdas.empty()) l_lambdas = {0.5, 1.0, 2.0, 3.0};
    json runs = json::array();
    bool all = true;
    for (double lam : l_lambdas) {
      const Lemma1Sweep s = lemma1_sweep(lam, l_configs, g.seed, threads_of(g), nu_options(g));
      runs.push_back({{"lambda", lam},
                      {"configs", s.samples.size()},
                      {"fitted_c", s.fitted_c},
                      {"decade_edges", s.decade_edges},
                      {"decade_fit", s.decade_fit},
                      {"decade_count", s.decade_count},
                      {"fine_over_coarse", s.fine_over_coarse},
                      {"pass", s.pass}});
      all = all && s.pass;
    }
    emit.json_out({{"seed", g.seed}, {"runs", runs}, {"pass", all}});
    code = all ? kExitPass : kExitFail;
  });

  // example1
  auto* ex1 = app.add_subcommand("example1", "Square-root example: Re f |1 - z|^(1/2) near 1");
  int x_samples = 32;
  ex1->add_option("--samples", x_samples, "Points per approach direction");
  ex1->callback([&] {
    std::string csv = "dist,direction,re_f,im_f,scaled_re\n";
    bool ok = std::abs(example1(0.0) - cplx(1.0, 0.0)) < 1e-15;
    for (double dir : {0.0, 0.25 * kPi, 0.45 * kPi, -0.25 * kPi, -0.45 * kPi}) {
      for (int i = 0; i < x_samples; ++i) {
        const double d = 0.1 * std::pow(1e-6 / 0.1, static_cast<double>(i) / std::max(1, x_samples - 1)) * 0.999;
        const cplx z = 1.0 - std::polar(d, dir);
        if (!(std::norm(z) < 1.0)) continue;
        const cplx f = example1(z);
        const double scaled = f.real() * std::sqrt(std::abs(1.0 - z));
        ok = ok && scaled >= 0.9 && scaled <= 1.5;
        csv += fmt(d) + "," + fmt(dir) + "," + fmt(f.real()) + "," + fmt(f.imag()) + "," + fmt(scaled) + "\n";
      }
    }
    emit.write(csv);
    code = ok ? kExitPass : kExitFail;
  });

  // example2
  auto* ex2 = app.add_subcommand("example2", "|Q(z)| |1 - z| along 1 - z = t e^{i pi/4}");
  int y_steps = 6;
  ex2->add_option("--steps", y_steps, "t = 1e-1 .. 1e-steps");
  ex2->callback([&] {
    std::string csv = "t,product\n";
    bool ok = y_steps >= 1;
    for (int i = 1; i <= y_steps; ++i) {
      const double t = std::pow(10.0, -i);
      const double p = example2_sharpness(t);
      ok = ok && std::abs(p - std::sqrt(2.0)) <= 1e-9;
      csv += fmt(t) + "," + fmt(p) + "\n";
    }
    emit.write(csv);
    code = ok ? kExitPass : kExitFail;
  });

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitPass;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitPass;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ParseError& e) {
    err << "input error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const IoError& e) {
    err << "io error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const DomainError& e) {
    err << "domain error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << "\n";
    return kExitFail;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return code;
}

}  // namespace conjbound::cli
