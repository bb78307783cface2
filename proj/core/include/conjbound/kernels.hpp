#pragma once

#include <complex>

namespace conjbound {

// Order of the Djrbashian kernel; alpha > -1.
class KernelOrder {
 public:
  // Throws DomainError unless alpha > -1.
  explicit KernelOrder(double alpha);
  double alpha() const noexcept { return alpha_; }

 private:
  double alpha_;
};

// Gamma(x) for x > 0.
double gamma_fn(double x);

// S_alpha(z) = Gamma(1+alpha) * (2 (1-z)^-(alpha+1) - 1), principal branch.
// All kernel functions throw DomainError for |z| >= 1.
std::complex<double> schwarz_kernel(std::complex<double> z, KernelOrder order);
double poisson_kernel(std::complex<double> z, KernelOrder order);    // Re S_alpha
double conjugate_kernel(std::complex<double> z, KernelOrder order);  // Im S_alpha

// d/dt S_alpha(r e^{it}), closed form.
std::complex<double> schwarz_kernel_dt(double r, double t, KernelOrder order);

struct KernelDerivSides {
  double lhs = 0.0;  // |central difference of d/dt P_alpha(r e^{it})|
  double rhs = 0.0;  // min{(1-r)^-(alpha+2), |t|^-(alpha+2)}
  double step = 0.0;
};

// h <= 0 selects the default step 1e-5 * max(1 - r, |t|).  Requires r in [1/2, 1).
KernelDerivSides kernel_deriv_sides(double r, double t, KernelOrder order, double h = 0.0);

}  // namespace conjbound
