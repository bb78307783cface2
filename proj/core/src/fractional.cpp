#include "conjbound/fractional.hpp"

#include <array>
#include <cmath>
#include <vector>

#include "conjbound/errors.hpp"
#include "conjbound/kernels.hpp"

namespace conjbound {

using cplx = std::complex<double>;

RadialFunction RadialFunction::real(std::function<double(double)> f) {
  return RadialFunction([f = std::move(f)](double r) { return cplx(f(r), 0.0); });
}

FracOrder::FracOrder(double alpha) : alpha_(alpha), p_(0) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) throw DomainError("fractional order requires alpha > 0");
  p_ = static_cast<int>(std::ceil(alpha));
}

namespace {

// Split a = n + b with b in (0, 1].
struct OrderSplit {
  int n;
  double b;
};

OrderSplit split_order(double a) {
  int n = static_cast<int>(std::ceil(a)) - 1;
  double b = a - n;
  if (b <= 0.0) {  // guards a = integer + rounding
    n -= 1;
    b += 1.0;
  }
  return {n, b};
}

// The substituted integrand on [0, 1] for fixed h, a and r.
struct SubstitutedIntegrand {
  const RadialFunction& h;
  OrderSplit split;
  double r;

  cplx operator()(double s) const {
    const double inv_b = 1.0 / split.b;
    const double x = r * (1.0 - std::pow(s, inv_b));
    const cplx hv = h(x);
    if (!std::isfinite(hv.real()) || !std::isfinite(hv.imag())) {
      throw NumericalError("non-finite sample of the radial function");
    }
    if (split.n == 0) return hv;
    return std::pow(s, split.n * inv_b) * hv;
  }
};

double prefactor(double a, OrderSplit split, double r) {
  return std::pow(r, a) / (split.b * gamma_fn(a));
}

std::vector<double> graded_breakpoints() {
  std::vector<double> b;
  for (int j = 12; j >= 1; --j) b.push_back(std::ldexp(1.0, -j));
  b.push_back(1.0 - 1.0 / 16.0);
  return b;
}

const std::vector<double>& breakpoints() {
  static const std::vector<double> b = graded_breakpoints();
  return b;
}

void require_radius(double r) {
  if (!(r > 0.0 && r < 1.0)) throw DomainError("fractional operators require r in (0, 1)");
}

}  // namespace

FracValue frac_integral_detailed(const RadialFunction& h, double alpha, double r,
                                 const FracOptions& opt) {
  if (!(alpha > 0.0)) throw DomainError("fractional integral requires alpha > 0");
  require_radius(r);
  const OrderSplit split = split_order(alpha);
  SubstitutedIntegrand f{h, split, r};
  const auto res = quad::integrate<cplx>(f, 0.0, 1.0, breakpoints(), opt.integral);
  const double pre = prefactor(alpha, split, r);
  return FracValue{pre * res.value, pre * res.error, res.converged};
}

cplx frac_integral(const RadialFunction& h, double alpha, double r, const FracOptions& opt) {
  return frac_integral_detailed(h, alpha, r, opt).value;
}

FracValue frac_derivative_detailed(const RadialFunction& h, FracOrder order, double r,
                                   const FracOptions& opt) {
  require_radius(r);
  const int p = order.p();
  const double lift = p - order.alpha();  // order of the inner integral, in [0, 1)
  const double h0 = opt.initial_step_factor * (1.0 - r);
  const int levels = std::max(1, opt.richardson_levels);
  const double reach = 0.5 * p * h0;
  if (h0 < 1e-12 || r + reach >= 1.0) throw NumericalError("stencil exceeds domain");
  if (r - reach <= 0.0) throw NumericalError("stencil exceeds domain");

  // Inner integral with its adaptive partition frozen at r, so that g is a
  // smooth function of the radius across the stencil.
  std::function<cplx(double)> g;
  std::vector<double> partition;
  if (lift > 1e-14) {
    const OrderSplit split = split_order(lift);
    SubstitutedIntegrand f{h, split, r};
    quad::Options tight = opt.integral;
    tight.abs_tol = std::min(tight.abs_tol, 1e-13);
    tight.rel_tol = std::min(tight.rel_tol, 1e-13);
    partition = quad::integrate<cplx>(f, 0.0, 1.0, breakpoints(), tight).partition;
    g = [&h, split, lift, &partition](double rho) {
      SubstitutedIntegrand fr{h, split, rho};
      return prefactor(lift, split, rho) * quad::integrate_on_partition<cplx>(fr, partition);
    };
  } else {
    g = [&h](double rho) { return h(rho); };
  }

  // Binomial central difference of order p; the error expands in even powers of the step.
  std::vector<double> binom(static_cast<std::size_t>(p) + 1, 1.0);
  for (int k = 1; k <= p; ++k) binom[k] = binom[k - 1] * (p - k + 1) / k;
  auto central = [&](double step) {
    cplx acc{};
    for (int k = 0; k <= p; ++k) {
      const double sign = (k % 2 == 0) ? 1.0 : -1.0;
      acc += sign * binom[k] * g(r + (0.5 * p - k) * step);
    }
    return acc / std::pow(step, p);
  };

  std::vector<std::vector<cplx>> table(static_cast<std::size_t>(levels));
  double step = h0;
  for (int i = 0; i < levels; ++i, step *= 0.5) {
    table[i].push_back(central(step));
    double factor = 4.0;
    for (int j = 1; j <= i; ++j, factor *= 4.0) {
      table[i].push_back(table[i][j - 1] + (table[i][j - 1] - table[i - 1][j - 1]) / (factor - 1.0));
    }
  }
  FracValue out;
  out.value = table.back().back();
  if (levels >= 2) {
    out.error = std::abs(out.value - table[levels - 2].back());
  }
  out.converged = out.error <= opt.derivative_rel_tol * std::max(std::abs(out.value), 1e-300);
  return out;
}

cplx frac_derivative(const RadialFunction& h, FracOrder order, double r, const FracOptions& opt) {
  return frac_derivative_detailed(h, order, r, opt).value;
}

double u_alpha_eval(const std::function<double(cplx)>& u, double alpha, const DiskPoint& z,
                    const FracOptions& opt) {
  if (alpha == 0.0) return u(z.to_complex());
  if (!(alpha > -1.0)) throw DomainError("u_alpha requires alpha > -1");
  const double r = std::max(z.r(), 1e-6);
  const double theta = z.theta();
  RadialFunction along = RadialFunction::real([&u, theta](double x) { return u(std::polar(x, theta)); });
  if (alpha > 0.0) {
    return (std::pow(r, -alpha) * frac_integral(along, alpha, r, opt)).real();
  }
  return (std::pow(r, -alpha) * frac_derivative(along, FracOrder(-alpha), r, opt)).real();
}

namespace {

// |1 - x zeta| without cancellation near the circle.
double one_minus_abs(double x, cplx zeta) {
  const double m = std::abs(zeta);
  const double s = std::sin(0.5 * std::arg(zeta));
  const double q = 1.0 - x * m;
  return std::sqrt(q * q + 4.0 * x * m * s * s);
}

}  // namespace

IllinSides illin_ratio(double gamma, double alpha, cplx zeta, double r, const FracOptions& opt) {
  if (!(gamma >= 0.0 && gamma < alpha)) throw DomainError("illin_ratio requires 0 <= gamma < alpha");
  if (std::abs(zeta) > 1.0 + 1e-15) throw DomainError("illin_ratio requires |zeta| <= 1");
  require_radius(r);
  IllinSides out;
  out.rhs = std::pow(one_minus_abs(r, zeta), -(alpha - gamma));
  if (gamma == 0.0) {
    out.lhs = std::pow(one_minus_abs(r, zeta), -alpha);
    return out;
  }
  RadialFunction f = RadialFunction::real(
      [alpha, zeta](double x) { return std::pow(one_minus_abs(x, zeta), -alpha); });
  out.lhs = frac_integral(f, gamma, r, opt).real();
  return out;
}

}  // namespace conjbound
