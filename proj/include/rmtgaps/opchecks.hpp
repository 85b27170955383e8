#pragma once

#include <Eigen/Dense>

#include "rmtgaps/types.hpp"

namespace rmt {

// Finite symmetric pair with Id - B positive definite and Id - A positive
// semidefinite (checked on construction of every report).
struct SymOpPair {
  Eigen::MatrixXd a_mat;
  Eigen::MatrixXd b_mat;
};

struct ComparisonReport {
  double lower;            // 1 - |A-B|_2^2 ||(Id-B)^{-1}||^2
  double mid;              // exp(Tr((A-B)(Id-B)^{-1})) det(Id-A)/det(Id-B)
  double upper;            // always 1
  double trace_bound_lhs;  // |Tr((A-B)(Id-B)^{-1})|
  double trace_bound_rhs;  // |Tr(A-B)| + |A-B|_2 |B|_2 ||(Id-B)^{-1}||
};

ComparisonReport comparison_bounds(const SymOpPair& pair);

struct EigenBoundResult {
  double lhs;  // 1 - lambda_1(B)
  double rhs;  // det(Id-B) e^{Tr B - 1}
  bool holds;
};

EigenBoundResult lowest_eigen_bound(const Eigen::MatrixXd& b_mat);

enum class Ensemble { cue, gue };

struct NegCorrResult {
  double joint;  // log hole prob of the union
  double sum;    // sum of individual log hole probs
  bool holds;    // joint <= sum + 1e-12
};

NegCorrResult negative_correlation(int n, const ArcUnion& set1,
                                   const ArcUnion& set2);
NegCorrResult negative_correlation(int n, const IntervalUnion& set1,
                                   const IntervalUnion& set2);

struct SplittingResult {
  double ratio;       // det(Id-A)/det(Id-B)
  double trace_term;  // Tr((A-B)(Id-B)^{-1})
};

// A is the Gram operator of the union of the k arcs I(y_j, F_n(x_j)); B the
// direct sum of the per-arc operators. Arcs must be pairwise disjoint.
SplittingResult splitting_ratio(int n, const std::vector<double>& x_list,
                                const std::vector<double>& y_list,
                                double c0_hat);

// P(no point in `hole`, at least one point in every occupied set), by
// inclusion-exclusion over exact hole determinants with Kahan summation.
// Returns the log probability. At most 12 occupied sets. If the alternating
// sum loses more than 8 digits to cancellation, a note is appended to
// *warning when given.
double occupancy_hole(int n, const ArcUnion& hole,
                      const std::vector<ArcUnion>& occupied,
                      std::string* warning = nullptr);
double occupancy_hole(int n, const IntervalUnion& hole,
                      const std::vector<IntervalUnion>& occupied,
                      std::string* warning = nullptr);

struct HoleComparison {
  double p_gue;      // log prob over [x, x + delta_n / rho_sc(x)]
  double p_cue;      // log D_n(pi delta_n)
  double difference; // exp(p_gue) - exp(p_cue)
  double hs_diff;    // ||A - B||_2 of the rescaled kernels on (0, n delta_n)
  double trace_a;    // Tr A (tends to -n delta_n)
  double trace_b;    // Tr B
};

HoleComparison cue_gue_hole_gap(int n, double x, double delta_n);

struct LowerBoundResult {
  double lhs;  // log hole prob of the union of [y_j, y_j + a_j]
  double rhs;  // ln(1 - 1/ln n) + sum_j log D_n(a_j sqrt(4-y_j^2)/2)
  bool holds;
};

// Checks the geometric hypotheses (pairwise separation >= eps0/ln n
// including the endpoints of I, widths inside the G_n window, bulk-density
// ratio <= 1 + C0/ln n) and throws InvalidInput listing violations.
LowerBoundResult union_hole_lower_bound(int n, const BulkInterval& I,
                                        const std::vector<double>& y_list,
                                        const std::vector<double>& a_list,
                                        double eps0, double c_big,
                                        double c0_hat);

}  // namespace rmt
