#include "conjbound/circle_measures.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numeric>

#include "conjbound/errors.hpp"

namespace conjbound {

DensityPiece DensityPiece::constant(double a, double b, double c) {
  DensityPiece p;
  p.a = a;
  p.b = b;
  p.kind = Kind::Constant;
  p.offset = c;
  return p;
}

DensityPiece DensityPiece::linear(double a, double b, double slope, double offset) {
  DensityPiece p;
  p.a = a;
  p.b = b;
  p.kind = Kind::Linear;
  p.slope = slope;
  p.offset = offset;
  return p;
}

double DensityPiece::mass_below(double t) const noexcept {
  const double hi = std::clamp(t, a, b);
  return 0.5 * slope * (hi * hi - a * a) + offset * (hi - a);
}

double DensityPiece::variation() const noexcept {
  if (slope == 0.0) return std::abs(offset) * (b - a);
  const double root = -offset / slope;
  if (root <= a || root >= b) return std::abs(mass());
  return std::abs(mass_below(root)) + std::abs(mass() - mass_below(root));
}

std::vector<double> CantorGenerator::leaf_starts() const {
  const std::size_t count = std::size_t{1} << depth;
  std::vector<double> out(count);
  for (std::size_t i = 0; i < count; ++i) {
    double x = a;
    for (int j = 1; j <= depth; ++j) {
      if ((i >> (depth - j)) & 1u) x += 2.0 * level_length(j);
    }
    out[i] = x;
  }
  return out;
}

double CantorGenerator::cdf(double t) const noexcept {
  double x = (t - a) / length();
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return mass;
  double acc = 0.0;
  double weight = 1.0;
  for (int j = 0; j < depth; ++j) {
    if (x < 1.0 / 3.0) {
      x *= 3.0;
    } else if (x <= 2.0 / 3.0) {
      return mass * (acc + 0.5 * weight);
    } else {
      acc += 0.5 * weight;
      x = 3.0 * x - 2.0;
    }
    weight *= 0.5;
  }
  return mass * (acc + weight * x);
}

CircleMeasure::CircleMeasure(std::vector<Atom> atoms, std::vector<DensityPiece> pieces,
                             std::optional<CantorGenerator> cantor)
    : atoms_(std::move(atoms)), pieces_(std::move(pieces)), cantor_(std::move(cantor)) {
  for (auto& at : atoms_) {
    if (!std::isfinite(at.theta) || !std::isfinite(at.mass)) throw DomainError("atom must be finite");
    at.theta = normalize_angle(at.theta);
  }
  std::sort(atoms_.begin(), atoms_.end(),
            [](const Atom& x, const Atom& y) { return x.theta < y.theta; });
  for (const auto& p : pieces_) {
    if (!(p.a >= 0.0 && p.a < p.b && p.b <= kTwoPi)) {
      throw DomainError("density piece requires 0 <= a < b <= 2*pi");
    }
    if (!std::isfinite(p.slope) || !std::isfinite(p.offset)) throw DomainError("density must be finite");
  }
  if (cantor_) {
    const auto& c = *cantor_;
    if (!(c.a >= 0.0 && c.a < c.b && c.b <= kTwoPi)) {
      throw DomainError("cantor base requires 0 <= a < b <= 2*pi");
    }
    if (c.depth < 0 || c.depth > kMaxCantorDepth) throw DomainError("cantor depth out of range");
    if (!std::isfinite(c.mass)) throw DomainError("cantor mass must be finite");
  }
}

CircleMeasure CircleMeasure::atom(double theta, double mass) {
  return CircleMeasure({Atom{theta, mass}}, {});
}

double CircleMeasure::total_mass() const noexcept {
  double m = 0.0;
  for (const auto& a : atoms_) m += a.mass;
  for (const auto& p : pieces_) m += p.mass();
  if (cantor_) m += cantor_->mass;
  return m;
}

double CircleMeasure::total_variation() const noexcept {
  double m = 0.0;
  for (const auto& a : atoms_) m += std::abs(a.mass);
  for (const auto& p : pieces_) m += p.variation();
  if (cantor_) m += std::abs(cantor_->mass);
  return m;
}

bool CircleMeasure::is_nonnegative() const noexcept {
  for (const auto& a : atoms_) {
    if (a.mass < 0.0) return false;
  }
  for (const auto& p : pieces_) {
    if (p.density(p.a) < 0.0 || p.density(p.b) < 0.0) return false;
  }
  return !cantor_ || cantor_->mass >= 0.0;
}

double CircleMeasure::primitive(double theta) const noexcept {
  double m = 0.0;
  for (const auto& a : atoms_) {
    if (a.theta < theta) m += a.mass;
  }
  for (const auto& p : pieces_) m += p.mass_below(theta);
  if (cantor_) m += cantor_->cdf(theta);
  return m;
}

double CircleMeasure::primitive_right(double theta) const noexcept {
  double m = primitive(theta);
  for (const auto& a : atoms_) {
    if (a.theta == theta) m += a.mass;
  }
  return m;
}

BoundarySet CircleMeasure::support() const {
  std::vector<std::pair<double, double>> iv;
  for (const auto& a : atoms_) iv.emplace_back(a.theta, a.theta);
  for (const auto& p : pieces_) iv.emplace_back(p.a, p.b);
  if (cantor_) {
    const double len = cantor_->level_length(cantor_->depth);
    for (double s : cantor_->leaf_starts()) iv.emplace_back(s, s + len);
  }
  return BoundarySet::from_intervals(iv);
}

std::vector<double> CircleMeasure::breakpoints() const {
  std::vector<double> out;
  for (const auto& a : atoms_) out.push_back(a.theta);
  for (const auto& p : pieces_) {
    out.push_back(p.a);
    out.push_back(p.b);
  }
  if (cantor_) {
    out.push_back(cantor_->a);
    out.push_back(cantor_->b);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

Primitive Primitive::of_measure(const CircleMeasure& mu) {
  return Primitive([mu](double t) { return mu.primitive(t); },
                   [mu](double t) { return mu.primitive_right(t); });
}

Primitive Primitive::continuous(Rule f) { return Primitive(f, f); }

namespace detail {

const CantorMoments& cantor_moments() {
  static const CantorMoments table = [] {
    CantorMoments m;
    m.variance[0] = 1.0 / 12.0;
    m.fourth[0] = 1.0 / 80.0;
    for (int n = 1; n <= kMaxCantorDepth; ++n) {
      const double v = m.variance[n - 1];
      m.variance[n] = v / 9.0 + 1.0 / 9.0;
      m.fourth[n] = m.fourth[n - 1] / 81.0 + 2.0 * v / 27.0 + 1.0 / 81.0;
    }
    return m;
  }();
  return table;
}

}  // namespace detail

namespace {

// Three-point Gauss-Legendre on [a, b] against the uniform probability measure.
template <class F>
double gauss3_mean(F&& g, double a, double b) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a) * std::sqrt(0.6);
  return (8.0 * g(c) + 5.0 * (g(c - h) + g(c + h))) / 18.0;
}

}  // namespace

double stieltjes_integral(const std::function<double(double)>& g, const CircleMeasure& mu,
                          const quad::Options& opt) {
  double total = 0.0;
  for (const auto& a : mu.atoms()) {
    const double v = g(a.theta);
    if (!std::isfinite(v)) throw NumericalError("non-finite integrand at an atom");
    total += v * a.mass;
  }
  for (const auto& p : mu.pieces()) {
    auto f = [&](double t) { return g(t) * p.density(t); };
    total += quad::integrate<double>(f, p.a, p.b, opt).value;
  }
  if (const auto& c = mu.cantor()) {
    const double inf = std::numeric_limits<double>::infinity();
    total += cantor_integrate<double>(
        *c, std::span<const SingularPoint>{}, inf, [](double) { return 0.0; },
        [&](double a, double b, double mass) { return mass * gauss3_mean(g, a, b); });
  }
  return total;
}

// ---------------------------------------------------------------------------

std::vector<double> discretize_set(const BoundarySet& e, double resolution) {
  if (!(resolution > 0.0)) throw DomainError("discretization resolution must be positive");
  std::vector<double> out;
  for (const auto& [a, b] : e.unwrapped_intervals()) {
    const double len = b - a;
    const auto n = static_cast<std::size_t>(std::ceil(len / resolution));
    out.push_back(a);
    for (std::size_t i = 1; i < n; ++i) {
      out.push_back(a + len * static_cast<double>(i) / static_cast<double>(n));
    }
    if (n > 0) out.push_back(b);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

PrimitiveSamples sample_primitive(const Primitive& psi, const BoundarySet& e, double resolution) {
  PrimitiveSamples s;
  s.points = discretize_set(e, resolution);
  s.left.reserve(s.points.size());
  s.right.reserve(s.points.size());
  for (double x : s.points) {
    s.left.push_back(psi(x));
    s.right.push_back(psi.right(x));
  }
  return s;
}

double modulus_from_samples(const PrimitiveSamples& s, double delta) {
  if (!(delta > 0.0)) throw DomainError("modulus of continuity requires delta > 0");
  const std::size_t n = s.points.size();
  if (n == 0) return 0.0;
  std::vector<double> hi(n), lo(n);
  double best = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    hi[i] = std::max(s.left[i], s.right[i]);
    lo[i] = std::min(s.left[i], s.right[i]);
    best = std::max(best, hi[i] - lo[i]);
  }
  // For each i the window is (i, j_end) with points[j] - points[i] < delta.
  std::deque<std::size_t> max_q, min_q;
  std::size_t j_end = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (j_end < i + 1) j_end = i + 1;
    while (j_end < n && s.points[j_end] - s.points[i] < delta) {
      while (!max_q.empty() && hi[max_q.back()] <= hi[j_end]) max_q.pop_back();
      max_q.push_back(j_end);
      while (!min_q.empty() && lo[min_q.back()] >= lo[j_end]) min_q.pop_back();
      min_q.push_back(j_end);
      ++j_end;
    }
    while (!max_q.empty() && max_q.front() <= i) max_q.pop_front();
    while (!min_q.empty() && min_q.front() <= i) min_q.pop_front();
    if (!max_q.empty()) best = std::max(best, hi[max_q.front()] - lo[i]);
    if (!min_q.empty()) best = std::max(best, hi[i] - lo[min_q.front()]);
  }
  return best;
}

double modulus_of_continuity(const Primitive& psi, const BoundarySet& e, double delta) {
  if (!(delta > 0.0)) throw DomainError("modulus of continuity requires delta > 0");
  return modulus_from_samples(sample_primitive(psi, e, delta / 64.0), delta);
}

HolderEstimate holder_from_omegas(std::vector<double> deltas, std::vector<double> omegas) {
  HolderEstimate est;
  est.deltas = deltas;
  est.omegas = omegas;
  std::vector<double> xs, ys;
  for (std::size_t i = 0; i < deltas.size(); ++i) {
    if (omegas[i] > 0.0) {
      xs.push_back(std::log(deltas[i]));
      ys.push_back(std::log(omegas[i]));
    }
  }
  if (xs.empty()) {
    est.infinite = true;
    est.gamma = est.lower = est.upper = std::numeric_limits<double>::infinity();
    return est;
  }
  if (xs.size() < 3) throw NumericalError("holder_exponent needs at least three positive samples");
  const double n = static_cast<double>(xs.size());
  const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
  const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  const double slope = sxy / sxx;
  double rss = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double r = ys[i] - (my + slope * (xs[i] - mx));
    rss += r * r;
  }
  est.gamma = slope;
  est.std_error = std::sqrt(rss / (n - 2.0) / sxx);
  est.lower = slope - 2.0 * est.std_error;
  est.upper = slope + 2.0 * est.std_error;
  return est;
}

HolderEstimate holder_exponent(const Primitive& psi, const BoundarySet& e, int max_level) {
  if (max_level < 5) throw DomainError("holder_exponent requires max_level >= 5");
  // One fine sample serves every delta: its spacing is below (finest delta) / 64.
  const PrimitiveSamples samples = sample_primitive(psi, e, std::ldexp(1.0, -max_level) / 64.0);
  std::vector<double> deltas, omegas;
  for (int j = 3; j <= max_level; ++j) {
    const double d = std::ldexp(1.0, -j);
    deltas.push_back(d);
    omegas.push_back(modulus_from_samples(samples, d));
  }
  return holder_from_omegas(std::move(deltas), std::move(omegas));
}

// ---------------------------------------------------------------------------

namespace {

double inverse_power_distance(double s, double theta, double t, double lambda) {
  const double h = std::sin(0.5 * (t - theta));
  const double d2 = (1.0 - s) * (1.0 - s) + 4.0 * s * h * h;
  return std::pow(d2, -0.5 * lambda);
}

// Breakpoints grading geometrically toward the foot of w (and its 2*pi shifts).
std::vector<double> foot_breakpoints(double s, double theta, double a, double b) {
  std::vector<double> out;
  const double width = std::max(1.0 - s, 1e-300);
  for (double shift : {-kTwoPi, 0.0, kTwoPi}) {
    const double foot = theta + shift;
    if (foot < a - kPi || foot > b + kPi) continue;
    out.push_back(foot);
    for (double d = width; d < kPi; d *= 4.0) {
      out.push_back(foot - d);
      out.push_back(foot + d);
    }
  }
  return out;
}

}  // namespace

double nu_interval(const DiskPoint& w, double lambda, double a, double b, const NuOptions& opt) {
  if (!(lambda > 0.0)) throw DomainError("nu requires lambda > 0");
  if (b <= a) return 0.0;
  const double s = w.r();
  const double theta = w.theta();
  if (s == 0.0) return b - a;
  auto f = [&](double t) { return inverse_power_distance(s, theta, t, lambda); };
  const auto cuts = foot_breakpoints(s, theta, a, b);
  return quad::integrate<double>(f, a, b, cuts, opt.integral).value;
}

double nu_exact(const DiskPoint& w, double lambda, const BoundarySet& e, const NuOptions& opt) {
  if (!(lambda > 0.0)) throw DomainError("nu requires lambda > 0");
  double total = 0.0;
  for (const auto& [a, b] : e.unwrapped_intervals()) total += nu_interval(w, lambda, a, b, opt);
  return total;
}

double nu_bound_lemma1(const DiskPoint& w, double lambda, const BoundarySet& e) {
  if (!(lambda > 0.0)) throw DomainError("nu requires lambda > 0");
  const double r = rho(w, e);
  const double half = 0.5 * e.total_length();
  if (lambda > 1.0) return std::pow(r, 1.0 - lambda) - std::pow(r + half, 1.0 - lambda);
  if (lambda == 1.0) return std::log1p(e.total_length() / r);
  return std::pow(r + half, 1.0 - lambda) - std::pow(r, 1.0 - lambda);
}

namespace {

struct MonotonePiece {
  double a;
  double b;
  double ga;  // g just inside a
  double gb;  // g just inside b
};

}  // namespace

LayerCakeResult layer_cake(const std::function<double(double)>& g,
                           std::span<const double> breakpoints, double lambda,
                           const DiskPoint& w, const BoundarySet& e, double q,
                           const NuOptions& opt) {
  if (!(q > 0.0)) throw DomainError("layer_cake requires q > 0");
  if (!(lambda > 0.0)) throw DomainError("nu requires lambda > 0");

  // Split E at the breakpoints into pieces on which g is monotone.
  std::vector<MonotonePiece> pieces;
  for (const auto& [a, b] : e.unwrapped_intervals()) {
    std::vector<double> cuts{a, b};
    for (double x : breakpoints) {
      for (double shift : {0.0, kTwoPi, -kTwoPi}) {
        const double y = x + shift;
        if (y > a && y < b) cuts.push_back(y);
      }
    }
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
      const double lo = cuts[i], hi = cuts[i + 1];
      const double eta = 1e-12 * (hi - lo);
      pieces.push_back({lo, hi, g(lo + eta), g(hi - eta)});
    }
  }
  double g_max = 0.0;
  std::vector<double> levels;
  for (const auto& p : pieces) {
    for (double v : {p.ga, p.gb}) {
      if (!std::isfinite(v) || v > 1e300) throw NumericalError("layer-cake requires bounded integrand");
      if (v < 0.0) throw DomainError("layer-cake requires a nonnegative integrand");
      g_max = std::max(g_max, v);
      levels.push_back(std::pow(v, q));
    }
  }

  LayerCakeResult out;
  // Direct: int g^q |e^{it} - w|^-lambda dt, piece by piece.
  for (const auto& p : pieces) {
    auto f = [&](double t) {
      const double v = g(t);
      if (!std::isfinite(v)) throw NumericalError("layer-cake requires bounded integrand");
      return std::pow(v, q) * inverse_power_distance(w.r(), w.theta(), t, lambda);
    };
    const auto cuts = foot_breakpoints(w.r(), w.theta(), p.a, p.b);
    out.direct += quad::integrate<double>(f, p.a, p.b, cuts, opt.integral).value;
  }

  // nu of the super-level set {g > y}; each piece contributes one sub-interval.
  auto level_measure = [&](double y) {
    double total = 0.0;
    for (const auto& p : pieces) {
      const bool a_in = p.ga > y;
      const bool b_in = p.gb > y;
      if (a_in && b_in) {
        total += nu_interval(w, lambda, p.a, p.b, opt);
      } else if (a_in != b_in) {
        double lo = p.a, hi = p.b;  // g(lo) side is inside iff a_in
        while (hi - lo > 1e-10) {
          const double mid = 0.5 * (lo + hi);
          if ((g(mid) > y) == a_in) lo = mid; else hi = mid;
        }
        const double c = 0.5 * (lo + hi);
        total += a_in ? nu_interval(w, lambda, p.a, c, opt) : nu_interval(w, lambda, c, p.b, opt);
      }
    }
    return total;
  };
  // q int_0^G y^(q-1) N(y) dy = int_0^(G^q) N(Y^(1/q)) dY.
  if (g_max > 0.0) {
    std::sort(levels.begin(), levels.end());
    levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
    quad::Options outer{std::numeric_limits<double>::infinity(), 1e-10, std::size_t{1} << 14};
    auto f = [&](double big_y) { return level_measure(std::pow(big_y, 1.0 / q)); };
    out.layered = quad::integrate<double>(f, 0.0, std::pow(g_max, q), levels, outer).value;
  }
  return out;
}

}  // namespace conjbound
