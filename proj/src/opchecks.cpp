#include "rmtgaps/opchecks.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <sstream>
#include <vector>

#include "rmtgaps/holeprob.hpp"
#include "rmtgaps/kernels.hpp"
#include "rmtgaps/rescaling.hpp"
#include "gram_internal.hpp"
#include "quadrature.hpp"

namespace rmt {

namespace {

constexpr double neg_inf = -std::numeric_limits<double>::infinity();

void require_symmetric(const Eigen::MatrixXd& m, const char* name) {
  if (m.rows() != m.cols())
    throw InvalidInput(std::string(name) + " must be square");
  const double asym = (m - m.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-12)
    throw InvalidInput(std::string(name) + " is not symmetric to 1e-12");
}

}  // namespace

ComparisonReport comparison_bounds(const SymOpPair& pair) {
  const Eigen::MatrixXd& a = pair.a_mat;
  const Eigen::MatrixXd& b = pair.b_mat;
  require_symmetric(a, "a_mat");
  require_symmetric(b, "b_mat");
  if (a.rows() != b.rows())
    throw InvalidInput("a_mat and b_mat must have the same shape");
  const int n = static_cast<int>(a.rows());

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig_a(a, Eigen::EigenvaluesOnly);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig_b(b, Eigen::EigenvaluesOnly);
  const double lam1_b = eig_b.eigenvalues().maxCoeff();
  if (!(lam1_b < 1.0))
    throw InvalidInput("comparison_bounds: Id - B is not positive definite");
  if (!(eig_a.eigenvalues().maxCoeff() <= 1.0 + 1e-12))
    throw InvalidInput("comparison_bounds: Id - A is not positive semidefinite");

  const double inv_norm = 1.0 / (1.0 - lam1_b);
  const Eigen::MatrixXd diff = a - b;
  const double hs_diff = diff.norm();

  const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(n, n);
  const Eigen::MatrixXd inv = (id - b).llt().solve(id);
  const double trace_term = diff.cwiseProduct(inv.transpose()).sum();

  // det(Id-A)/det(Id-B) from the spectra, carried in log scale
  double log_ratio = 0.0;
  bool a_singular = false;
  for (int i = 0; i < n; ++i) {
    const double da = 1.0 - eig_a.eigenvalues()(i);
    if (da <= 0.0) {
      a_singular = true;
      break;
    }
    log_ratio += std::log(da) - std::log(1.0 - eig_b.eigenvalues()(i));
  }

  ComparisonReport rep;
  rep.lower = 1.0 - hs_diff * hs_diff * inv_norm * inv_norm;
  rep.mid = a_singular ? 0.0 : std::exp(trace_term + log_ratio);
  rep.upper = 1.0;
  rep.trace_bound_lhs = std::abs(trace_term);
  rep.trace_bound_rhs = std::abs(diff.trace()) + hs_diff * b.norm() * inv_norm;
  return rep;
}

EigenBoundResult lowest_eigen_bound(const Eigen::MatrixXd& b_mat) {
  require_symmetric(b_mat, "b_mat");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(b_mat,
                                                     Eigen::EigenvaluesOnly);
  const double lam1 = eig.eigenvalues().maxCoeff();
  if (!(lam1 < 1.0))
    throw InvalidInput("lowest_eigen_bound: Id - B is not positive definite");
  double log_det = 0.0;
  for (int i = 0; i < eig.eigenvalues().size(); ++i)
    log_det += std::log(1.0 - eig.eigenvalues()(i));
  EigenBoundResult r;
  r.lhs = 1.0 - lam1;
  r.rhs = std::exp(log_det + b_mat.trace() - 1.0);
  r.holds = r.lhs >= r.rhs;
  return r;
}

NegCorrResult negative_correlation(int n, const ArcUnion& set1,
                                   const ArcUnion& set2) {
  ArcUnion combined = set1;
  combined.insert(combined.end(), set2.begin(), set2.end());
  validate_arc_union(combined);
  NegCorrResult r;
  r.joint = gram_hole_cue(n, combined).log_prob;
  r.sum = gram_hole_cue(n, set1).log_prob + gram_hole_cue(n, set2).log_prob;
  r.holds = !(r.joint > r.sum + 1e-12);
  return r;
}

NegCorrResult negative_correlation(int n, const IntervalUnion& set1,
                                   const IntervalUnion& set2) {
  IntervalUnion combined = set1;
  combined.insert(combined.end(), set2.begin(), set2.end());
  validate_interval_union(combined);
  NegCorrResult r;
  r.joint = gram_hole_gue(n, combined).log_prob;
  r.sum = gram_hole_gue(n, set1).log_prob + gram_hole_gue(n, set2).log_prob;
  r.holds = !(r.joint > r.sum + 1e-12);
  return r;
}

SplittingResult splitting_ratio(int n, const std::vector<double>& x_list,
                                const std::vector<double>& y_list,
                                double c0_hat) {
  if (x_list.empty() || x_list.size() != y_list.size())
    throw InvalidInput("splitting_ratio: need matching nonempty x and y lists");
  const RescaleParams params(n, c0_hat);
  ArcUnion arcs;
  for (std::size_t j = 0; j < x_list.size(); ++j) {
    double start = std::fmod(y_list[j], two_pi);
    if (start < 0.0) start += two_pi;
    arcs.push_back(Arc{start, f_n(params, x_list[j])});
  }
  try {
    validate_arc_union(arcs);
  } catch (const InvalidInput&) {
    throw InvalidInput("splitting_ratio: arcs overlap");
  }

  double log_sum = 0.0;
  std::vector<Eigen::MatrixXcd> grams;
  for (const Arc& a : arcs) {
    log_sum += gram_hole_cue(n, {a}).log_prob;
    grams.push_back(detail::cue_arc_gram(n, {a}));
  }
  const double log_union = gram_hole_cue(n, arcs).log_prob;

  // Operators represented on the (chi_j phi_k) basis: B is block diagonal
  // with blocks G_j^T, A repeats the same column blocks across rows, and
  // (Id-B)^{-1} inherits the block structure.
  double trace_term = 0.0;
  const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(n, n);
  for (std::size_t j = 0; j < grams.size(); ++j) {
    const Eigen::MatrixXcd block = grams[j].transpose();
    const Eigen::MatrixXcd diag_diff = block - block;  // A_jj - B_jj
    const Eigen::MatrixXcd y = (id - block).llt().solve(diag_diff);
    trace_term += y.trace().real();
  }

  SplittingResult r;
  r.ratio = std::exp(log_union - log_sum);
  r.trace_term = trace_term;
  return r;
}

namespace {

template <class SetT, class HoleFn>
double occupancy_hole_impl(const SetT& hole, const std::vector<SetT>& occupied,
                           std::string* warning, HoleFn&& hole_fn) {
  if (occupied.size() > 12)
    throw InvalidInput("occupancy_hole: at most 12 occupied sets");
  double sum = 0.0, carry = 0.0, sum_abs = 0.0;
  const std::size_t subsets = std::size_t{1} << occupied.size();
  for (std::size_t mask = 0; mask < subsets; ++mask) {
    SetT joined = hole;
    int bits = 0;
    for (std::size_t j = 0; j < occupied.size(); ++j)
      if (mask & (std::size_t{1} << j)) {
        joined.insert(joined.end(), occupied[j].begin(), occupied[j].end());
        ++bits;
      }
    const double p = std::exp(hole_fn(joined));
    const double term = (bits % 2 == 0) ? p : -p;
    sum_abs += p;
    const double y = term - carry;
    const double t = sum + y;
    carry = (t - sum) - y;
    sum = t;
  }
  if (warning && sum_abs > 0.0 && std::abs(sum) < 1e-8 * sum_abs)
    *warning += "occupancy_hole: alternating sum lost more than 8 digits; ";
  if (!(sum > 0.0)) return neg_inf;
  return std::log(std::min(sum, 1.0));
}

}  // namespace

double occupancy_hole(int n, const ArcUnion& hole,
                      const std::vector<ArcUnion>& occupied,
                      std::string* warning) {
  ArcUnion all = hole;
  for (const auto& s : occupied) all.insert(all.end(), s.begin(), s.end());
  validate_arc_union(all);
  return occupancy_hole_impl(hole, occupied, warning, [n](const ArcUnion& j) {
    return gram_hole_cue(n, j).log_prob;
  });
}

double occupancy_hole(int n, const IntervalUnion& hole,
                      const std::vector<IntervalUnion>& occupied,
                      std::string* warning) {
  IntervalUnion all = hole;
  for (const auto& s : occupied) all.insert(all.end(), s.begin(), s.end());
  validate_interval_union(all);
  return occupancy_hole_impl(hole, occupied, warning,
                             [n](const IntervalUnion& j) {
                               return gram_hole_gue(n, j).log_prob;
                             });
}

HoleComparison cue_gue_hole_gap(int n, double x, double delta_n) {
  if (n < 2) throw InvalidInput("cue_gue_hole_gap: n must be at least 2");
  const double rho = rho_sc(x);
  if (!(rho > 0.0))
    throw InvalidInput("cue_gue_hole_gap: x must lie inside the bulk");
  if (!(delta_n > 0.0 && delta_n < 0.5))
    throw InvalidInput("cue_gue_hole_gap: delta_n must lie in (0, 1/2)");

  HoleComparison r;
  r.p_gue =
      gram_hole_gue(n, {Interval{x, x + delta_n / rho}}).log_prob;
  const double pi = 0.5 * two_pi;
  r.p_cue = log_hole_cue(n, pi * delta_n).log_prob;
  r.difference = std::exp(r.p_gue) - std::exp(r.p_cue);

  // rescaled kernels on (0, n delta_n)
  const double len = n * delta_n;
  const int order =
      std::max(128, 16 * static_cast<int>(std::ceil(len)) + 64);
  const detail::QuadRule& rule = detail::gauss_legendre(order);
  const double rn = std::sqrt(static_cast<double>(n));
  std::vector<double> u(order), w(order), xg(order), pn(order), pn1(order),
      diag_a(order);
  std::vector<double> psi;
  for (int i = 0; i < order; ++i) {
    u[i] = 0.5 * len * (1.0 + rule.nodes[i]);
    w[i] = 0.5 * len * rule.weights[i];
    xg[i] = x + u[i] / (n * rho);
    hermite_psi_all(n, xg[i] * rn, psi);
    pn[i] = psi[n];
    pn1[i] = psi[n - 1];
    const double pn2 = n >= 2 ? psi[n - 2] : 0.0;
    diag_a[i] = -1.0 / (n * rho) *
                (n * (rn * pn1[i] * pn1[i] -
                      std::sqrt(n - 1.0) * pn2 * pn[i]));
  }
  double trace_a = 0.0, trace_b = 0.0, hs2 = 0.0;
  const double cue_scale = two_pi / n;
  for (int i = 0; i < order; ++i) {
    trace_a += w[i] * diag_a[i];
    trace_b += w[i] * (-cue_scale * cue_kernel(n, 0.0, 0.0));
    for (int j = 0; j < order; ++j) {
      double a_ij;
      if (i == j) {
        a_ij = diag_a[i];
      } else {
        const double k_gue =
            rn * (pn[i] * pn1[j] - pn1[i] * pn[j]) / (xg[i] - xg[j]);
        a_ij = -k_gue / (n * rho);
      }
      const double b_ij =
          -cue_scale * cue_kernel(n, cue_scale * u[i], cue_scale * u[j]);
      hs2 += w[i] * w[j] * (a_ij - b_ij) * (a_ij - b_ij);
    }
  }
  r.hs_diff = std::sqrt(std::max(hs2, 0.0));
  r.trace_a = trace_a;
  r.trace_b = trace_b;
  return r;
}

LowerBoundResult union_hole_lower_bound(int n, const BulkInterval& I,
                                        const std::vector<double>& y_list,
                                        const std::vector<double>& a_list,
                                        double eps0, double c_big,
                                        double c0_hat) {
  const std::size_t k = y_list.size();
  if (k == 0 || a_list.size() != k)
    throw InvalidInput("union_hole_lower_bound: need matching nonempty lists");
  if (!(eps0 > 0.0 && eps0 < 1.0) || !(c_big > 0.0))
    throw InvalidInput("union_hole_lower_bound: need eps0 in (0,1), C0 > 0");
  const RescaleParams params(n, c0_hat);
  const double s = s_of_interval(I);
  const double win_lo = g_n(params, -c_big) / s;
  const double win_hi = g_n(params, c_big) / s;
  const double width_cap = eps0 / (2.0 * params.ln_n);
  const double sep = eps0 / params.ln_n;

  std::ostringstream bad;
  std::vector<double> pts = {I.a};
  pts.insert(pts.end(), y_list.begin(), y_list.end());
  pts.push_back(I.b);
  for (std::size_t i = 0; i < k; ++i) {
    if (!(y_list[i] >= I.a && y_list[i] <= I.b))
      bad << "y[" << i << "] outside I; ";
    if (!(a_list[i] > win_lo && a_list[i] < win_hi && a_list[i] > 0.0 &&
          a_list[i] < width_cap))
      bad << "a[" << i << "] outside the width window; ";
    if (!(std::sqrt(4.0 - y_list[i] * y_list[i]) / s <=
          1.0 + c_big / params.ln_n))
      bad << "density ratio at y[" << i << "] exceeds 1 + C0/ln n; ";
  }
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j)
      if (std::abs(pts[i] - pts[j]) < sep)
        bad << "separation between points " << i << " and " << j
            << " below eps0/ln n; ";
  const std::string msg = bad.str();
  if (!msg.empty())
    throw InvalidInput("union_hole_lower_bound: hypothesis violations: " + msg);

  IntervalUnion holes;
  for (std::size_t i = 0; i < k; ++i)
    holes.push_back(Interval{y_list[i], y_list[i] + a_list[i]});
  LowerBoundResult r;
  r.lhs = gram_hole_gue(n, holes).log_prob;
  r.rhs = std::log(1.0 - 1.0 / params.ln_n);
  for (std::size_t i = 0; i < k; ++i)
    r.rhs += log_hole_cue(
                 n, 0.5 * a_list[i] * std::sqrt(4.0 - y_list[i] * y_list[i]))
                 .log_prob;
  r.holds = r.lhs >= r.rhs;
  return r;
}

}  // namespace rmt
