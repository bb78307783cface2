#pragma once

// Adaptive Gauss-Kronrod (7/15) quadrature for real or complex integrands.
//
// The global strategy keeps a heap of panels and bisects the one with the
// largest error estimate until the summed estimate drops below
//   min(abs_tol, rel_tol * sum|panel|)
// or the evaluation budget is exhausted.  The resulting partition can be
// reused with integrate_on_partition(), which evaluates a fixed rule; that is
// what makes numerically differentiated integrals smooth in their parameters.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <queue>
#include <span>
#include <type_traits>
#include <vector>

#include "conjbound/errors.hpp"

namespace conjbound::quad {

struct Options {
  double abs_tol = 1e-8;
  double rel_tol = 1e-10;
  std::size_t max_evals = std::size_t{1} << 16;
};

template <class T>
struct Result {
  T value{};
  double error = 0.0;
  std::size_t evals = 0;
  bool converged = false;
  std::vector<double> partition;  // sorted panel endpoints
};

namespace detail {

inline constexpr double kXgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr double kWgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr double kWg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

inline double magnitude(double v) { return std::abs(v); }
inline double magnitude(const std::complex<double>& v) { return std::abs(v); }

inline bool finite_value(double v) { return std::isfinite(v); }
inline bool finite_value(const std::complex<double>& v) {
  return std::isfinite(v.real()) && std::isfinite(v.imag());
}

template <class T>
struct Panel {
  double a = 0.0;
  double b = 0.0;
  T value{};
  double error = 0.0;
  double abs_value = 0.0;
};

template <class T, class F>
Panel<T> gk15(F& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const T fc = f(center);
  if (!finite_value(fc)) throw NumericalError("non-finite integrand sample");
  T kronrod = fc * kWgk[7];
  T gauss = fc * kWg[3];
  double abs_k = magnitude(fc) * kWgk[7];
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kXgk[j];
    const T f1 = f(center - dx);
    const T f2 = f(center + dx);
    if (!finite_value(f1) || !finite_value(f2)) {
      throw NumericalError("non-finite integrand sample");
    }
    kronrod += (f1 + f2) * kWgk[j];
    abs_k += (magnitude(f1) + magnitude(f2)) * kWgk[j];
    if (j % 2 == 1) gauss += (f1 + f2) * kWg[j / 2];
  }
  Panel<T> p;
  p.a = a;
  p.b = b;
  p.value = kronrod * half;
  p.abs_value = abs_k * std::abs(half);
  const double diff = magnitude((kronrod - gauss) * half);
  // QUADPACK-style sharpening of the raw Gauss/Kronrod difference.
  double err = diff;
  if (diff > 0.0) {
    const double scaled = 200.0 * diff / std::max(p.abs_value, 1e-300);
    err = p.abs_value * std::min(1.0, std::pow(scaled, 1.5));
  }
  const double roundoff = 50.0 * std::numeric_limits<double>::epsilon() * p.abs_value;
  p.error = std::max(err, roundoff);
  return p;
}

template <class T>
struct PanelLess {
  bool operator()(const Panel<T>& x, const Panel<T>& y) const { return x.error < y.error; }
};

}  // namespace detail

inline constexpr std::size_t kEvalsPerPanel = 15;

// Integrate f over [a, b], starting from the given interior breakpoints.
template <class T, class F>
Result<T> integrate(F&& f, double a, double b, std::span<const double> breakpoints,
                    const Options& opt = {}) {
  Result<T> out;
  if (!(a < b)) {
    if (a == b) {
      out.converged = true;
      out.partition = {a, b};
      return out;
    }
    throw DomainError("integrate: reversed interval");
  }
  std::vector<double> cuts;
  cuts.push_back(a);
  for (double x : breakpoints) {
    if (x > a && x < b) cuts.push_back(x);
  }
  cuts.push_back(b);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  std::priority_queue<detail::Panel<T>, std::vector<detail::Panel<T>>, detail::PanelLess<T>> heap;
  T total{};
  double total_err = 0.0;
  double total_abs = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    auto p = detail::gk15<T>(f, cuts[i], cuts[i + 1]);
    out.evals += kEvalsPerPanel;
    total += p.value;
    total_err += p.error;
    total_abs += p.abs_value;
    heap.push(std::move(p));
  }
  auto tolerance = [&] {
    const double rel = opt.rel_tol * total_abs;
    return total_abs > 0.0 ? std::min(opt.abs_tol, rel) : opt.abs_tol;
  };
  while (total_err > tolerance() && out.evals + 2 * kEvalsPerPanel <= opt.max_evals) {
    auto worst = heap.top();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b)) break;  // cannot split further
    heap.pop();
    auto left = detail::gk15<T>(f, worst.a, mid);
    auto right = detail::gk15<T>(f, mid, worst.b);
    out.evals += 2 * kEvalsPerPanel;
    total += left.value + right.value - worst.value;
    total_err += left.error + right.error - worst.error;
    total_abs += left.abs_value + right.abs_value - worst.abs_value;
    heap.push(std::move(left));
    heap.push(std::move(right));
  }
  // Re-sum from the panels to shed accumulated cancellation in the running totals.
  std::vector<detail::Panel<T>> panels;
  panels.reserve(heap.size());
  while (!heap.empty()) {
    panels.push_back(heap.top());
    heap.pop();
  }
  std::sort(panels.begin(), panels.end(),
            [](const auto& x, const auto& y) { return x.a < y.a; });
  T sum{};
  double err = 0.0;
  total_abs = 0.0;
  out.partition.reserve(panels.size() + 1);
  for (const auto& p : panels) {
    sum += p.value;
    err += p.error;
    total_abs += p.abs_value;
    out.partition.push_back(p.a);
  }
  out.partition.push_back(b);
  out.value = sum;
  out.error = err;
  out.converged = err <= (total_abs > 0.0 ? std::min(opt.abs_tol, opt.rel_tol * total_abs)
                                          : opt.abs_tol);
  return out;
}

template <class T, class F>
Result<T> integrate(F&& f, double a, double b, const Options& opt = {}) {
  return integrate<T>(std::forward<F>(f), a, b, std::span<const double>{}, opt);
}

// Fixed-rule evaluation on a partition produced by integrate().
template <class T, class F>
T integrate_on_partition(F&& f, std::span<const double> partition) {
  T sum{};
  for (std::size_t i = 0; i + 1 < partition.size(); ++i) {
    sum += detail::gk15<T>(f, partition[i], partition[i + 1]).value;
  }
  return sum;
}

// Trapezoidal rule on a periodic integrand over [0, 2*pi), doubling the node
// count until two successive estimates agree to rel_tol.  Spectrally accurate
// for smooth periodic functions.
template <class T, class F>
Result<T> integrate_periodic(F&& f, double rel_tol = 1e-12, std::size_t min_nodes = 64,
                             std::size_t max_nodes = std::size_t{1} << 20) {
  const double two_pi = 2.0 * std::acos(-1.0);
  Result<T> out;
  std::size_t n = min_nodes;
  T sum{};
  double abs_sum = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    const T v = f(two_pi * static_cast<double>(j) / static_cast<double>(n));
    if (!detail::finite_value(v)) throw NumericalError("non-finite integrand sample");
    sum += v;
    abs_sum += detail::magnitude(v);
  }
  out.evals = n;
  T estimate = sum * (two_pi / static_cast<double>(n));
  while (n < max_nodes) {
    // New nodes sit at the midpoints of the current ones.
    T extra{};
    for (std::size_t j = 0; j < n; ++j) {
      const double t = two_pi * (static_cast<double>(j) + 0.5) / static_cast<double>(n);
      const T v = f(t);
      if (!detail::finite_value(v)) throw NumericalError("non-finite integrand sample");
      extra += v;
      abs_sum += detail::magnitude(v);
    }
    out.evals += n;
    sum += extra;
    n *= 2;
    const T next = sum * (two_pi / static_cast<double>(n));
    const double change = detail::magnitude(next - estimate);
    estimate = next;
    const double scale = abs_sum * two_pi / static_cast<double>(n);
    if (change <= rel_tol * std::max(scale, 1e-300)) {
      out.converged = true;
      out.error = change;
      break;
    }
    out.error = change;
  }
  out.value = estimate;
  return out;
}

}  // namespace conjbound::quad
