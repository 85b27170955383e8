#pragma once

#include <vector>

#include "rmtgaps/types.hpp"

namespace rmt {

// Pivots below this are treated as a singular determinant (log prob -inf).
inline constexpr double pivot_floor = 1e-300;

// Fourier coefficient of the indicator of the complement of an arc of size
// 2*alpha: (1/2pi) int_alpha^{2pi-alpha} e^{i m theta} dtheta.
double toeplitz_entry(int m, double alpha);

// log D_n(alpha): probability that an arc of size 2*alpha holds no CUE
// eigenangle, as the log-determinant of the n x n Toeplitz matrix of
// toeplitz_entry(j-k, alpha). Levinson recursion in log space.
HoleResult log_hole_cue(int n, double alpha);

// Same determinant by dense Cholesky; O(n^3) cross-check route for tests and
// as fallback when the Levinson recursion loses positivity.
HoleResult log_hole_cue_cholesky(int n, double alpha);

// Hole probability of a union of arcs as log det(I_n - G), G the Gram matrix
// of the Fourier basis over the union.
HoleResult gram_hole_cue(int n, const ArcUnion& arcs);

// Hole probability of a union of real intervals for GUE(n) as
// log det(I_n - G) with G the Gram matrix of phi_k(x) = n^{1/4} psi_k(x
// sqrt(n)) over the union, assembled by per-interval Gauss-Legendre
// quadrature. quad_order <= 0 selects the default rule max(64, 2n+32).
HoleResult gram_hole_gue(int n, const IntervalUnion& intervals,
                         int quad_order = 0);

// n^2 ln cos(alpha/2) - (1/4) ln(n sin(alpha/2)) + c0_hat.
double asymptotic_log_dn(int n, double alpha, double c0_hat);

struct C0Estimate {
  double c0_hat;
  double spread;  // max pairwise disagreement across alphas
};

// Least-squares fit of the residuals log D_n - leading terms against
// c0 + A/(n sin(alpha/2)) over n_grid, averaged over alphas.
C0Estimate estimate_c0(const std::vector<double>& alphas,
                       const std::vector<int>& n_grid);

}  // namespace rmt
