#pragma once

#include <vector>

#include "rmtgaps/types.hpp"

namespace rmt {

// Maximum Hermite-function order accepted by hermite_psi.
inline constexpr int hermite_max_order = 4096;

// Sine kernel of the n-point circular unitary ensemble,
//   K_n(x, y) = (1/2pi) sin(n(x-y)/2) / sin((x-y)/2),
// with the confluent value n/(2pi) on the diagonal.
double cue_kernel(int n, double x, double y);

// Oscillator wavefunction psi_k(x) = e^{-x^2/4} h_k(x) / sqrt(sqrt(2pi) k!)
// with h_k the monic Hermite polynomials orthogonal against e^{-x^2/2}.
double hermite_psi(int k, double x);

// Fills out[0..kmax] with psi_0(x) .. psi_kmax(x) by the three-term recurrence.
void hermite_psi_all(int kmax, double x, std::vector<double>& out);

// Derivative psi_k'(x) = -(x/2) psi_k(x) + sqrt(k) psi_{k-1}(x).
double hermite_psi_deriv(int k, double x);

// Hermite kernel of the n-point Gaussian unitary ensemble under the
// e^{-n lambda^2 / 2} normalization; diagonal by the analytic confluent limit.
double gue_kernel(int n, double x, double y);

// Semicircle density sqrt((4-x^2)_+) / (2pi).
double rho_sc(double x);

}  // namespace rmt
