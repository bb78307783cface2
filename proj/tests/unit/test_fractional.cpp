#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

#include "conjbound/errors.hpp"
#include "conjbound/fractional.hpp"
#include "conjbound/kernels.hpp"
#include "conjbound/quadrature.hpp"

using namespace conjbound;
using cplx = std::complex<double>;

namespace {

RadialFunction monomial(int n) {
  return RadialFunction::real([n](double x) { return std::pow(x, n); });
}

double beta_oracle(int n, double a, double r) {
  return std::tgamma(n + 1.0) / std::tgamma(n + 1.0 + a) * std::pow(r, n + a);
}

// Brute-force Riemann-Liouville integral for a in (0, 1]: substitute
// x = r - v^(1/a) directly (independent of the library's substitution).
double brute_rl(const std::function<double(double)>& h, double a, double r) {
  auto f = [&](double v) { return h(r - std::pow(v, 1.0 / a)); };
  const double top = std::pow(r, a);
  const auto res = quad::integrate<double>(f, 0.0, top, {1e-13, 1e-13, std::size_t{1} << 18});
  return res.value / (a * std::tgamma(a));
}

FracOptions precise() {
  FracOptions o;
  o.integral = {std::numeric_limits<double>::infinity(), 1e-13, std::size_t{1} << 14};
  return o;
}

}  // namespace

TEST_CASE("order split") {
  CHECK(FracOrder(0.3).p() == 1);
  CHECK(FracOrder(1.0).p() == 1);
  CHECK(FracOrder(1.2).p() == 2);
  CHECK(FracOrder(2.0).p() == 2);
  CHECK_THROWS_AS(FracOrder(0.0), DomainError);
  CHECK_THROWS_AS(FracOrder(-1.0), DomainError);
}

TEST_CASE("fractional integral examples") {
  const RadialFunction one = monomial(0);
  CHECK(frac_integral(one, 1.0, 0.7).real() == doctest::Approx(0.7).epsilon(1e-12));
  const double half = frac_integral(one, 0.5, 0.4).real();
  CHECK(half == doctest::Approx(2.0 * std::sqrt(0.4 / kPi)).epsilon(1e-10));
  CHECK(half == doctest::Approx(brute_rl([](double) { return 1.0; }, 0.5, 0.4)).epsilon(1e-8));
  CHECK_THROWS_AS(frac_integral(one, 0.0, 0.5), DomainError);
  CHECK_THROWS_AS(frac_integral(one, 0.5, 1.0), DomainError);
  const RadialFunction bad = RadialFunction::real([](double) { return std::nan(""); });
  CHECK_THROWS_AS(frac_integral(bad, 0.5, 0.5), NumericalError);
}

TEST_CASE("monomials against the Beta identity") {
  for (double a : {0.25, 0.5, 0.75, 1.0, 1.5, 2.3}) {
    for (int n = 0; n <= 4; ++n) {
      for (double r : {0.2, 0.6, 0.95}) {
        CHECK(frac_integral(monomial(n), a, r).real() ==
              doctest::Approx(beta_oracle(n, a, r)).epsilon(1e-10));
      }
    }
  }
}

TEST_CASE("brute-force oracle on a non-polynomial function") {
  auto h = [](double x) { return std::exp(-x) * std::cos(3.0 * x); };
  for (double a : {0.3, 0.8}) {
    CHECK(frac_integral(RadialFunction::real(h), a, 0.77).real() ==
          doctest::Approx(brute_rl(h, a, 0.77)).epsilon(1e-9));
  }
}

TEST_CASE("semigroup on monomials") {
  const FracOptions inner = precise();
  for (double a : {0.3, 0.6}) {
    for (double b : {0.4, 1.2}) {
      for (int n = 0; n <= 3; ++n) {
        const RadialFunction h = monomial(n);
        const RadialFunction once([&h, b, &inner](double x) {
          return x > 0.0 ? frac_integral(h, b, x, inner) : cplx{};
        });
        const double composed = frac_integral(once, a, 0.6, inner).real();
        CHECK(composed == doctest::Approx(beta_oracle(n, a + b, 0.6)).epsilon(1e-7));
      }
    }
  }
}

TEST_CASE("fractional derivative examples") {
  for (double a : {0.3, 0.5, 1.2}) {
    const RadialFunction h = RadialFunction::real([a](double x) { return std::pow(x, a); });
    for (double r : {0.3, 0.8}) {
      CHECK(frac_derivative(h, FracOrder(a), r).real() ==
            doctest::Approx(std::tgamma(1.0 + a)).epsilon(1e-6));
    }
  }
  CHECK(frac_derivative(monomial(2), FracOrder(1.0), 0.4).real() == doctest::Approx(0.8).epsilon(1e-8));
  CHECK_THROWS_AS(frac_derivative(monomial(2), FracOrder(1.0), 0.0), DomainError);
  FracOptions wide;
  wide.initial_step_factor = 10.0;
  CHECK_THROWS_WITH_AS(frac_derivative(monomial(2), FracOrder(1.0), 0.9, wide),
                       "stencil exceeds domain", NumericalError);
}

TEST_CASE("inversion on monomials") {
  const FracOptions inner = precise();
  for (double a : {0.25, 0.5, 0.75, 1.5}) {
    for (int n = 0; n <= 4; ++n) {
      const RadialFunction h = monomial(n);
      const RadialFunction lifted([&h, a, &inner](double x) {
        return x > 0.0 ? frac_integral(h, a, x, inner) : cplx{};
      });
      const double r = 0.55;
      CHECK(frac_derivative(lifted, FracOrder(a), r).real() ==
            doctest::Approx(std::pow(r, n)).epsilon(1e-5));
    }
  }
}

TEST_CASE("kernel identity along rays") {
  for (double a : {0.5, 1.0, 1.5}) {
    for (double t : {0.0, 0.4, 2.0}) {
      const RadialFunction h([a, t](double x) {
        return std::pow(x, a) * schwarz_kernel(std::polar(x, t), KernelOrder(0.0));
      });
      for (double r : {0.2, 0.5, 0.8}) {
        const cplx want = schwarz_kernel(std::polar(r, t), KernelOrder(a));
        CHECK(std::abs(frac_derivative(h, FracOrder(a), r) - want) <= 1e-4 * std::abs(want));
      }
    }
  }
}

TEST_CASE("linearity on random combinations") {
  std::mt19937_64 eng(4);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int i = 0; i < 20; ++i) {
    const double c1 = u(eng), c2 = u(eng), a = 0.1 + 1.8 * std::abs(u(eng));
    auto f = [](double x) { return std::sin(x) + 1.0; };
    auto g = [](double x) { return x * x * x - x; };
    const RadialFunction comb = RadialFunction::real([&](double x) { return c1 * f(x) + c2 * g(x); });
    const double r = 0.3 + 0.6 * std::abs(u(eng));
    const FracOptions o = precise();
    const double lhs = frac_integral(comb, a, r, o).real();
    const double rhs = c1 * frac_integral(RadialFunction::real(f), a, r, o).real() +
                       c2 * frac_integral(RadialFunction::real(g), a, r, o).real();
    CHECK(std::abs(lhs - rhs) <= 1e-10 * (std::abs(lhs) + 1.0));
    // Finite differences carry rounding noise of order eps / h^p, reported
    // by the extrapolation error estimate.
    const FracValue dl = frac_derivative_detailed(comb, FracOrder(a), r);
    const FracValue df = frac_derivative_detailed(RadialFunction::real(f), FracOrder(a), r);
    const FracValue dg = frac_derivative_detailed(RadialFunction::real(g), FracOrder(a), r);
    const double dr = c1 * df.value.real() + c2 * dg.value.real();
    const double noise = dl.error + std::abs(c1) * df.error + std::abs(c2) * dg.error;
    CHECK(std::abs(dl.value.real() - dr) <= 1e-10 * (std::abs(dr) + 1.0) + 10.0 * noise);
  }
}

TEST_CASE("u_alpha") {
  auto one = [](cplx) { return 1.0; };
  auto u = [](cplx z) { return poisson_kernel(z, KernelOrder(0.0)); };
  const DiskPoint z(0.6, 1.1);
  CHECK(u_alpha_eval(u, 0.0, z) == u(z.to_complex()));
  for (double a : {0.3, 1.0, 2.5}) {
    CHECK(u_alpha_eval(one, a, z) == doctest::Approx(1.0 / std::tgamma(1.0 + a)).epsilon(1e-9));
  }
  CHECK(u_alpha_eval(one, 0.5, DiskPoint(0.0, 0.0)) ==
        doctest::Approx(1.0 / std::tgamma(1.5)).epsilon(1e-6));
  CHECK(u_alpha_eval([](cplx z) { return z.real(); }, -0.5, DiskPoint(0.5, 0.0)) ==
        doctest::Approx(std::pow(0.5, 0.5) * std::tgamma(2.0) / std::tgamma(1.5) * std::pow(0.5, 0.5))
            .epsilon(1e-5));
  CHECK_THROWS_AS(u_alpha_eval(one, -1.0, z), DomainError);
}

TEST_CASE("fractional integral of kernel powers") {
  const IllinSides z0 = illin_ratio(0.5, 1.0, 0.0, 0.7);
  CHECK(z0.rhs == doctest::Approx(1.0));
  CHECK(z0.lhs == doctest::Approx(std::pow(0.7, 0.5) / std::tgamma(1.5)).epsilon(1e-9));
  const IllinSides g0 = illin_ratio(0.0, 2.0, std::polar(1.0, 0.3), 0.9);
  CHECK(g0.lhs == g0.rhs);
  CHECK_THROWS_AS(illin_ratio(1.0, 1.0, 0.5, 0.5), DomainError);
  CHECK_THROWS_AS(illin_ratio(0.5, 1.0, 1.5, 0.5), DomainError);

  for (auto [g, a] : {std::pair{0.5, 1.0}, std::pair{0.5, 2.0}, std::pair{1.0, 3.0}}) {
    std::vector<double> fits;
    for (int depth : {10, 14}) {
      double sup = 0.0;
      for (int k = 1; k <= depth; ++k) {
        const double r = 1.0 - std::ldexp(1.0, -k);
        for (double t : {0.0, 0.01, 0.1, 1.0, 3.0}) {
          const IllinSides s = illin_ratio(g, a, std::polar(1.0, t), r);
          sup = std::max(sup, s.lhs / s.rhs);
        }
      }
      fits.push_back(sup);
    }
    CHECK(std::isfinite(fits[1]));
    CHECK(fits[1] < 1.1 * fits[0]);
  }
}
