#pragma once

#include "rmtgaps/types.hpp"

namespace rmt::detail {

// High-precision fallbacks for the determinant routes. The arc Toeplitz /
// Gram matrices are prolate-like: their smallest eigenvalue decays roughly
// like exp(c * n * log cos(alpha/2)), so once it drops below machine epsilon
// every double-precision factorization loses the determinant. These routines
// redo the factorization in MPFR arithmetic with the working precision chosen
// from that decay rate and validated by a second run at higher precision.
//
// All of them serialize on an internal mutex (the precision setting of the
// MPFR wrapper is process-global).

// log det of the order-n Toeplitz matrix with symbol of the arc (-alpha, alpha).
double mp_levinson_logdet(int n, double alpha, double* min_pivot);

// log det(I - G) for the arc-union Gram matrix (complex Hermitian, handled
// through its 2n x 2n real symmetric form). Arcs are used as given.
double mp_cue_gram_logdet(int n, const ArcUnion& arcs, double* min_pivot);

// log det(I - G) for the interval-union Gram matrix, entries assembled with
// high-precision Gauss-Legendre nodes and oscillator-function recurrences.
// log_hint is a rough magnitude of the answer (used to seed the precision);
// pass 0 when unknown.
double mp_gue_gram_logdet(int n, const IntervalUnion& intervals, int order,
                          double log_hint, double* min_pivot);

// A-priori size of |log det| for the single-arc Toeplitz problem; the
// precision heuristics key off this.
double toeplitz_log_scale(int n, double alpha);

}  // namespace rmt::detail
