#pragma once

#include <Eigen/Dense>

#include "rmtgaps/types.hpp"

namespace rmt::detail {

// Gram matrix G_{jk} = sum over arcs of (1/2pi) int e^{i(j-k)theta} dtheta.
// Input arcs are used as given (no normalization).
Eigen::MatrixXcd cue_arc_gram(int n, const ArcUnion& arcs);

// log det(I - G) through a Cholesky factorization, -inf on pivot collapse.
double hermitian_logdet_id_minus(const Eigen::MatrixXcd& g, double* min_pivot);

}  // namespace rmt::detail
