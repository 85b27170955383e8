#include "rmtgaps/kernels.hpp"

#include <algorithm>
#include <cmath>

namespace rmt {

namespace {
constexpr double inv_two_pi = 1.0 / two_pi;
// (2pi)^{-1/4}
const double psi0_norm = std::pow(two_pi, -0.25);
}  // namespace

double cue_kernel(int n, double x, double y) {
  const double half = 0.5 * (x - y);
  const double s = std::sin(half);
  if (s == 0.0) return n * inv_two_pi;
  return inv_two_pi * std::sin(n * half) / s;
}

void hermite_psi_all(int kmax, double x, std::vector<double>& out) {
  if (kmax > hermite_max_order)
    throw InvalidInput("hermite_psi: order exceeds configured max");
  out.resize(static_cast<std::size_t>(kmax) + 1);
  double p0 = psi0_norm * std::exp(-0.25 * x * x);
  out[0] = p0;
  if (kmax == 0) return;
  double p1 = x * p0;
  out[1] = p1;
  for (int k = 1; k < kmax; ++k) {
    const double p2 = (x * p1 - std::sqrt(static_cast<double>(k)) * p0) /
                      std::sqrt(static_cast<double>(k + 1));
    p0 = p1;
    p1 = p2;
    out[k + 1] = p2;
  }
}

double hermite_psi(int k, double x) {
  if (k > hermite_max_order)
    throw InvalidInput("hermite_psi: order exceeds configured max");
  double p0 = psi0_norm * std::exp(-0.25 * x * x);
  if (k == 0) return p0;
  double p1 = x * p0;
  for (int j = 1; j < k; ++j) {
    const double p2 = (x * p1 - std::sqrt(static_cast<double>(j)) * p0) /
                      std::sqrt(static_cast<double>(j + 1));
    p0 = p1;
    p1 = p2;
  }
  return p1;
}

double hermite_psi_deriv(int k, double x) {
  const double pk = hermite_psi(k, x);
  const double pm = k > 0 ? hermite_psi(k - 1, x) : 0.0;
  return -0.5 * x * pk + std::sqrt(static_cast<double>(k)) * pm;
}

double gue_kernel(int n, double x, double y) {
  const double rn = std::sqrt(static_cast<double>(n));
  std::vector<double> px, py;
  if (x == y) {
    // Confluent limit via the recurrence derivative
    // psi_k' = -(x/2) psi_k + sqrt(k) psi_{k-1}:
    //   K(x,x) = n (sqrt(n) psi_{n-1}(s)^2 - sqrt(n-1) psi_{n-2}(s) psi_n(s))
    // with s = x sqrt(n).
    hermite_psi_all(n, x * rn, px);
    const double pn = px[n];
    const double pn1 = px[n - 1];
    const double pn2 = n >= 2 ? px[n - 2] : 0.0;
    return n * (rn * pn1 * pn1 -
                std::sqrt(static_cast<double>(n - 1)) * pn2 * pn);
  }
  hermite_psi_all(n, x * rn, px);
  hermite_psi_all(n, y * rn, py);
  return rn * (px[n] * py[n - 1] - px[n - 1] * py[n]) / (x - y);
}

double rho_sc(double x) {
  const double t = 4.0 - x * x;
  return t > 0.0 ? std::sqrt(t) * inv_two_pi : 0.0;
}

}  // namespace rmt
