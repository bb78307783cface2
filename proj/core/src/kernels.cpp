#include "conjbound/kernels.hpp"

#include <algorithm>
#include <cmath>

#include "conjbound/disk_geometry.hpp"
#include "conjbound/errors.hpp"

namespace conjbound {

KernelOrder::KernelOrder(double alpha) : alpha_(alpha) {
  if (!(alpha > -1.0) || !std::isfinite(alpha)) {
    throw DomainError("kernel order requires alpha > -1");
  }
}

double gamma_fn(double x) {
  if (!(x > 0.0)) throw DomainError("gamma_fn requires x > 0");
  return std::tgamma(x);
}

namespace {

void require_disk(std::complex<double> z) {
  if (!(std::norm(z) < 1.0)) throw DomainError("kernel requires |z| < 1");
}

}  // namespace

std::complex<double> schwarz_kernel(std::complex<double> z, KernelOrder order) {
  require_disk(z);
  const double a = order.alpha();
  const std::complex<double> one_minus = 1.0 - z;
  if (a == 0.0) return 2.0 / one_minus - 1.0;
  // Re(1 - z) > 0, so the principal power never meets its cut.
  return gamma_fn(1.0 + a) * (2.0 * std::pow(one_minus, -(a + 1.0)) - 1.0);
}

double poisson_kernel(std::complex<double> z, KernelOrder order) {
  return schwarz_kernel(z, order).real();
}

double conjugate_kernel(std::complex<double> z, KernelOrder order) {
  return schwarz_kernel(z, order).imag();
}

std::complex<double> schwarz_kernel_dt(double r, double t, KernelOrder order) {
  const std::complex<double> z = std::polar(r, t);
  require_disk(z);
  const double a = order.alpha();
  const std::complex<double> i(0.0, 1.0);
  return gamma_fn(1.0 + a) * 2.0 * (a + 1.0) * std::pow(1.0 - z, -(a + 2.0)) * i * z;
}

KernelDerivSides kernel_deriv_sides(double r, double t, KernelOrder order, double h) {
  if (!(r >= 0.5 && r < 1.0)) throw DomainError("kernel_deriv_sides requires r in [1/2, 1)");
  if (!(std::abs(t) <= kPi)) throw DomainError("kernel_deriv_sides requires |t| <= pi");
  if (h <= 0.0) h = 1e-5 * std::max(1.0 - r, std::abs(t));
  const double a = order.alpha();
  KernelDerivSides out;
  out.step = h;
  const double fp = poisson_kernel(std::polar(r, t + h), order);
  const double fm = poisson_kernel(std::polar(r, t - h), order);
  out.lhs = std::abs(fp - fm) / (2.0 * h);
  const double radial = std::pow(1.0 - r, -(a + 2.0));
  out.rhs = t == 0.0 ? radial : std::min(radial, std::pow(std::abs(t), -(a + 2.0)));
  return out;
}

}  // namespace conjbound
