#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>

#include "oracles.hpp"
#include "rmtgaps/kernels.hpp"

using namespace rmt;

TEST_CASE("cue kernel diagonal and special values") {
  CHECK(cue_kernel(5, 1.0, 1.0) == doctest::Approx(5.0 / two_pi).epsilon(1e-12));
  CHECK(cue_kernel(2, 1.0, 1.0 - 0.5 * two_pi) ==
        doctest::Approx(0.0).scale(1.0).epsilon(1e-12));
  CHECK(cue_kernel(3, 0.25 * two_pi, 0.0) ==
        doctest::Approx(1.0 / two_pi).epsilon(1e-12));
}

TEST_CASE("cue kernel translation invariance") {
  for (double s : {0.3, 1.7, 4.4}) {
    CHECK(cue_kernel(9, 0.4 + s, 1.1 + s) ==
          doctest::Approx(cue_kernel(9, 0.4, 1.1)).epsilon(1e-12));
  }
}

TEST_CASE("cue kernel equals the mode sum") {
  for (int n : {1, 2, 7, 32}) {
    for (double d : {0.05, 0.9, 2.4}) {
      std::complex<double> acc(0.0, 0.0);
      for (int k = 0; k < n; ++k)
        acc += std::polar(1.0 / two_pi, (k - 0.5 * (n - 1)) * d);
      CHECK(std::abs(acc.imag()) < 1e-12);
      CHECK(cue_kernel(n, d, 0.0) == doctest::Approx(acc.real()).epsilon(1e-12));
    }
  }
}

TEST_CASE("hermite function values at zero") {
  const double p0 = std::pow(two_pi, -0.25);
  CHECK(hermite_psi(0, 0.0) == doctest::Approx(p0).epsilon(1e-12));
  CHECK(hermite_psi(1, 0.0) == doctest::Approx(0.0).scale(1.0).epsilon(1e-14));
  CHECK(hermite_psi(2, 0.0) ==
        doctest::Approx(-p0 / std::sqrt(2.0)).epsilon(1e-12));
  CHECK_THROWS_AS(hermite_psi(hermite_max_order + 1, 0.0), InvalidInput);
}

TEST_CASE("hermite parity") {
  for (int k : {0, 1, 2, 5, 8}) {
    const double sign = k % 2 ? -1.0 : 1.0;
    CHECK(hermite_psi(k, -1.3) ==
          doctest::Approx(sign * hermite_psi(k, 1.3)).epsilon(1e-12));
  }
}

TEST_CASE("hermite orthonormality by quadrature") {
  // Gauss-Legendre on [-L, L]; integrand decays like e^{-x^2/2}
  const int order = 400;
  for (int j : {0, 3, 17, 64}) {
    for (int k : {0, 3, 17, 64}) {
      const double L = 2.0 * std::sqrt(static_cast<double>(std::max(j, k))) + 10.0;
      const double val = oracle::integrate(
          [&](double x) { return hermite_psi(j, x) * hermite_psi(k, x); }, -L,
          L, 4000);
      CHECK(val == doctest::Approx(j == k ? 1.0 : 0.0).scale(1.0).epsilon(1e-8));
      (void)order;
    }
  }
}

TEST_CASE("hermite derivative identity") {
  for (int k : {1, 2, 6}) {
    for (double x : {-0.7, 0.2, 1.9}) {
      const double h = 1e-6;
      const double fd =
          (hermite_psi(k, x + h) - hermite_psi(k, x - h)) / (2.0 * h);
      CHECK(hermite_psi_deriv(k, x) == doctest::Approx(fd).epsilon(1e-7));
    }
  }
}

TEST_CASE("gue kernel base cases") {
  CHECK(gue_kernel(1, 0.0, 0.0) ==
        doctest::Approx(1.0 / std::sqrt(two_pi)).epsilon(1e-12));
  CHECK(gue_kernel(4, 0.1, -0.3) ==
        doctest::Approx(gue_kernel(4, -0.3, 0.1)).epsilon(1e-12));
  CHECK(gue_kernel(6, 0.4, 0.4) > 0.0);
}

TEST_CASE("gue kernel trace equals rank") {
  const double tr = oracle::integrate(
      [](double x) { return gue_kernel(6, x, x); }, -5.0, 5.0, 8000);
  CHECK(tr == doctest::Approx(6.0).epsilon(1e-6));
}

TEST_CASE("gue kernel diagonal matches the confluent limit") {
  for (double x : {-1.2, 0.0, 0.9}) {
    const double h = 1e-5;
    CHECK(gue_kernel(8, x, x) ==
          doctest::Approx(gue_kernel(8, x + h, x - h)).epsilon(1e-6));
  }
}

TEST_CASE("semicircle density") {
  CHECK(rho_sc(0.0) == doctest::Approx(2.0 / two_pi).epsilon(1e-12));
  CHECK(rho_sc(2.0) == 0.0);
  CHECK(rho_sc(-2.0) == 0.0);
  CHECK(rho_sc(2.5) == 0.0);
  CHECK(rho_sc(1.0) == doctest::Approx(std::sqrt(3.0) / two_pi).epsilon(1e-12));
}
