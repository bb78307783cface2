#pragma once

// Riemann-Liouville fractional integrals and derivatives in the radial variable.
//
//   D^-a h(r) = 1/Gamma(a) int_0^r (r - x)^(a-1) h(x) dx,
//   D^a h(r)  = d^p/dr^p D^-(p-a) h(r),   a in (p-1, p].
//
// Writing a = n + b with b in (0, 1] and substituting x = r (1 - s^(1/b)) turns
// the weight into the smooth factor s^(n/b):
//
//   D^-a h(r) = r^a / (b Gamma(a)) int_0^1 s^(n/b) h(r (1 - s^(1/b))) ds.
//
// This is the n-fold integer integral composed with the order-b step, done in
// a single quadrature.

#include <complex>
#include <functional>

#include "conjbound/disk_geometry.hpp"
#include "conjbound/quadrature.hpp"

namespace conjbound {

// A real- or complex-valued function on [0, 1).
class RadialFunction {
 public:
  using Rule = std::function<std::complex<double>(double)>;

  RadialFunction() = default;
  explicit RadialFunction(Rule rule) : rule_(std::move(rule)) {}
  static RadialFunction real(std::function<double(double)> f);

  std::complex<double> operator()(double r) const { return rule_(r); }

 private:
  Rule rule_;
};

// alpha > 0 with p = ceil(alpha), so alpha lies in (p - 1, p].
class FracOrder {
 public:
  explicit FracOrder(double alpha);
  double alpha() const noexcept { return alpha_; }
  int p() const noexcept { return p_; }

 private:
  double alpha_;
  int p_;
};

struct FracOptions {
  quad::Options integral{1e-8, 1e-12, std::size_t{1} << 16};
  double derivative_rel_tol = 1e-5;
  double initial_step_factor = 1e-3;  // h0 = factor * (1 - r)
  int richardson_levels = 3;
};

struct FracValue {
  std::complex<double> value;
  double error = 0.0;  // quadrature or extrapolation error estimate
  bool converged = true;
};

FracValue frac_integral_detailed(const RadialFunction& h, double alpha, double r,
                                 const FracOptions& opt = {});
std::complex<double> frac_integral(const RadialFunction& h, double alpha, double r,
                                   const FracOptions& opt = {});

FracValue frac_derivative_detailed(const RadialFunction& h, FracOrder order, double r,
                                   const FracOptions& opt = {});
std::complex<double> frac_derivative(const RadialFunction& h, FracOrder order, double r,
                                     const FracOptions& opt = {});

// u_alpha(r e^{i phi}) = r^-alpha D^-alpha u(r e^{i phi}) along the ray.  Negative
// alpha (> -1) applies the fractional derivative of order -alpha instead.
// Radii below 1e-6 are evaluated at 1e-6.
double u_alpha_eval(const std::function<double(std::complex<double>)>& u, double alpha,
                    const DiskPoint& z, const FracOptions& opt = {});

struct IllinSides {
  double lhs = 0.0;  // D^-gamma of x -> |1 - x zeta|^-alpha at r
  double rhs = 0.0;  // |1 - r zeta|^-(alpha - gamma)
};

// Requires 0 <= gamma < alpha, |zeta| <= 1, r in (0, 1).
IllinSides illin_ratio(double gamma, double alpha, std::complex<double> zeta, double r,
                       const FracOptions& opt = {});

}  // namespace conjbound
