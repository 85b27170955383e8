// Shared independent oracles for the test suite: closed forms, a dense-matrix
// eigenvalue sampler, quadrature, KS statistics, and high-precision Toeplitz
// determinant fixtures computed offline with a 100+ digit Levinson recursion.
#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <vector>

#include "rmtgaps/rng.hpp"

namespace oracle {

inline double normal_cdf(double x) {
  return 0.5 * std::erfc(-x / std::sqrt(2.0));
}

// Composite Simpson; enough for the smooth integrands used in tests.
inline double integrate(const std::function<double(double)>& f, double lo,
                        double hi, int panels = 2048) {
  const double h = (hi - lo) / panels;
  double acc = f(lo) + f(hi);
  for (int i = 1; i < panels; ++i)
    acc += f(lo + i * h) * (i % 2 ? 4.0 : 2.0);
  return acc * h / 3.0;
}

// Eigenvalues of a dense GUE matrix (independent Gaussian entries of
// variance 1/n), by a dense Hermitian eigensolver. Independent of the
// tridiagonal sampler under test.
inline std::vector<double> dense_gue_eigenvalues(int n, rmt::Seed seed) {
  rmt::Rng rng(seed);
  Eigen::MatrixXcd h(n, n);
  const double diag_sd = 1.0 / std::sqrt(static_cast<double>(n));
  const double off_sd = 1.0 / std::sqrt(2.0 * n);
  for (int i = 0; i < n; ++i) {
    h(i, i) = diag_sd * rng.normal();
    for (int j = i + 1; j < n; ++j) {
      h(i, j) = std::complex<double>(off_sd * rng.normal(),
                                     off_sd * rng.normal());
      h(j, i) = std::conj(h(i, j));
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(
      h, Eigen::EigenvaluesOnly);
  std::vector<double> ev(es.eigenvalues().data(),
                         es.eigenvalues().data() + n);
  std::sort(ev.begin(), ev.end());
  return ev;
}

// Asymptotic Kolmogorov tail Q(lambda) = 2 sum (-1)^{j-1} e^{-2 j^2 lambda^2}.
inline double kolmogorov_q(double lambda) {
  if (lambda < 1e-8) return 1.0;
  double acc = 0.0;
  for (int j = 1; j <= 100; ++j) {
    const double term = 2.0 * std::exp(-2.0 * j * j * lambda * lambda);
    acc += (j % 2 ? term : -term);
    if (term < 1e-12) break;
  }
  return std::min(std::max(acc, 0.0), 1.0);
}

// One-sample KS p-value for sorted data against a cdf.
inline double ks_p_value(const std::vector<double>& sorted,
                         const std::function<double(double)>& cdf) {
  const std::size_t n = sorted.size();
  double d = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double f = cdf(sorted[i]);
    d = std::max(d, std::abs(f - static_cast<double>(i) / n));
    d = std::max(d, std::abs(f - static_cast<double>(i + 1) / n));
  }
  const double rn = std::sqrt(static_cast<double>(n));
  return kolmogorov_q((rn + 0.12 + 0.11 / rn) * d);
}

// Two-sample KS p-value (both samples sorted).
inline double ks2_p_value(std::vector<double> a, std::vector<double> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    if (a[i] <= b[j])
      ++i;
    else
      ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / a.size() -
                             static_cast<double>(j) / b.size()));
  }
  const double ne = static_cast<double>(a.size()) * b.size() /
                    (a.size() + b.size());
  const double rn = std::sqrt(ne);
  return kolmogorov_q((rn + 0.12 + 0.11 / rn) * d);
}

// ln D_n(alpha) reference values from an offline arbitrary-precision
// Levinson recursion (values verified stable under precision doubling).
struct ToeplitzFixture {
  int n;
  double alpha;
  double log_det;
};

inline const std::vector<ToeplitzFixture>& toeplitz_fixtures() {
  static const std::vector<ToeplitzFixture> table = {
      {30, 0.8, -75.0589639071894},   {40, 0.8, -132.691276276808},
      {50, 0.8, -206.7532154504294},  {100, 0.8, -823.6441932599746},
      {200, 0.8, -3290.688064258429}, {400, 0.8, -13158.34364304589},
      {100, 0.4, -202.5334211405612}, {200, 2.0, -24626.77874508022},
  };
  return table;
}

}  // namespace oracle
