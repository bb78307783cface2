#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "conjbound/disk_geometry.hpp"
#include "conjbound/errors.hpp"
#include "conjbound/kernels.hpp"
#include "conjbound/quadrature.hpp"

using namespace conjbound;
using cplx = std::complex<double>;

TEST_CASE("kernel order domain") {
  CHECK_THROWS_AS(KernelOrder(-1.0), DomainError);
  CHECK_NOTHROW(KernelOrder(-0.5));
  CHECK_THROWS_AS(schwarz_kernel(cplx(1.0, 0.0), KernelOrder(0.0)), DomainError);
  CHECK_THROWS_AS(poisson_kernel(cplx(0.0, 1.2), KernelOrder(0.5)), DomainError);
}

TEST_CASE("gamma function against known values") {
  CHECK(gamma_fn(1.0) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(gamma_fn(0.5) == doctest::Approx(std::sqrt(std::acos(-1.0))).epsilon(1e-13));
  CHECK(gamma_fn(5.0) == doctest::Approx(24.0).epsilon(1e-13));
  CHECK(gamma_fn(2.5) == doctest::Approx(1.329340388179137).epsilon(1e-13));
  CHECK_THROWS_AS(gamma_fn(0.0), DomainError);
}

TEST_CASE("kernel examples") {
  for (double a : {0.0, 0.5, 1.3}) {
    CHECK(std::abs(schwarz_kernel(0.0, KernelOrder(a)) - std::tgamma(1.0 + a)) < 1e-14);
    CHECK(conjugate_kernel(0.0, KernelOrder(a)) == 0.0);
  }
  CHECK(std::abs(schwarz_kernel(0.5, KernelOrder(1.0)) - 7.0) < 1e-13);
  for (double r : {0.1, 0.5, 0.95}) {
    CHECK(poisson_kernel(r, KernelOrder(0.0)) == doctest::Approx((1 + r) / (1 - r)));
    CHECK(std::abs(conjugate_kernel(r, KernelOrder(0.0))) < 1e-15);
  }
  std::mt19937_64 eng(1);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 100; ++i) {
    const cplx z = std::polar(0.999 * u(eng), kTwoPi * u(eng));
    const cplx s0 = 2.0 / (1.0 - z) - 1.0;
    CHECK(std::abs(schwarz_kernel(z, KernelOrder(0.0)) - s0) <= 1e-13 * std::abs(s0));
    // Q_0 = 2 Im z / |1 - z|^2, the conjugate Poisson kernel.
    CHECK(conjugate_kernel(z, KernelOrder(0.0)) ==
          doctest::Approx(2.0 * z.imag() / std::norm(1.0 - z)).epsilon(1e-12));
  }
}

TEST_CASE("kernel identities on random points") {
  std::mt19937_64 eng(2);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 300; ++i) {
    const KernelOrder a(-0.9 + 3.0 * u(eng));
    const cplx z = std::polar(0.99 * u(eng), kTwoPi * u(eng));
    const cplx s = schwarz_kernel(z, a);
    const double p = poisson_kernel(z, a), q = conjugate_kernel(z, a);
    CHECK(p * p + q * q == doctest::Approx(std::norm(s)).epsilon(1e-12));
    CHECK(poisson_kernel(std::conj(z), a) == doctest::Approx(p).epsilon(1e-12));
    CHECK(conjugate_kernel(std::conj(z), a) == doctest::Approx(-q).epsilon(1e-12));
    // Independent evaluation through exp/log of the power.
    const cplx direct = std::tgamma(1.0 + a.alpha()) *
                        (2.0 * std::exp(-(a.alpha() + 1.0) * std::log(1.0 - z)) - 1.0);
    CHECK(std::abs(s - direct) <= 1e-11 * std::abs(direct));
  }
}

TEST_CASE("kernel mean value over circles") {
  for (double a : {0.0, 0.5, 2.0}) {
    for (double r : {0.3, 0.8, 0.95}) {
      auto f = [a, r](double t) { return schwarz_kernel(std::polar(r, t), KernelOrder(a)); };
      const auto res = quad::integrate_periodic<cplx>(f, 1e-13, 64, std::size_t{1} << 18);
      const cplx mean = res.value / kTwoPi;
      CHECK(std::abs(mean - std::tgamma(1.0 + a)) < 1e-8);
    }
  }
}

TEST_CASE("closed-form t-derivative") {
  for (double a : {0.0, 0.7, 1.5}) {
    for (double r : {0.5, 0.9}) {
      for (double t : {-2.0, 0.3, 1.0}) {
        const double h = 1e-5;
        const cplx fd = (schwarz_kernel(std::polar(r, t + h), KernelOrder(a)) -
                         schwarz_kernel(std::polar(r, t - h), KernelOrder(a))) /
                        (2.0 * h);
        const cplx d = schwarz_kernel_dt(r, t, KernelOrder(a));
        CHECK(std::abs(d - fd) <= 1e-6 * std::abs(d));
      }
    }
  }
}

TEST_CASE("kernel derivative sides") {
  const KernelDerivSides s = kernel_deriv_sides(0.5, kPi, KernelOrder(0.0));
  CHECK(s.rhs == doctest::Approx(1.0 / (kPi * kPi)));
  CHECK(std::isfinite(s.lhs));
  CHECK(kernel_deriv_sides(0.9, 0.0, KernelOrder(0.0)).rhs == doctest::Approx(100.0));
  CHECK_THROWS_AS(kernel_deriv_sides(0.4, 0.1, KernelOrder(0.0)), DomainError);

  // Fitted constant over a dyadic sweep must settle under refinement.
  for (double a : {0.0, 1.0}) {
    std::vector<double> fits;
    for (int depth : {12, 14, 16}) {
      double sup = 0.0;
      for (int k = 1; k <= depth; ++k) {
        const double r = 1.0 - std::ldexp(1.0, -k);
        for (int j = 0; j <= depth; ++j) {
          const double t = kPi * std::ldexp(1.0, -j);
          const KernelDerivSides d = kernel_deriv_sides(r, t, KernelOrder(a));
          sup = std::max(sup, d.lhs / d.rhs);
        }
      }
      fits.push_back(sup);
    }
    CHECK(std::isfinite(fits.back()));
    CHECK(std::abs(fits[2] - fits[1]) < 0.1 * fits[1]);
  }
}
