#include "rmtgaps/holeprob.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <vector>

#include "rmtgaps/kernels.hpp"
#include "gram_internal.hpp"
#include "mp_linalg.hpp"
#include "quadrature.hpp"

namespace rmt {

namespace {

constexpr double neg_inf = -std::numeric_limits<double>::infinity();

// Compensated accumulator for long sums of logs.
struct KahanSum {
  double sum = 0.0;
  double carry = 0.0;
  void add(double v) {
    const double y = v - carry;
    const double t = sum + y;
    carry = (t - sum) - y;
    sum = t;
  }
};

double arc_tol() { return 1e-12; }

}  // namespace

// ---- set helpers declared in types.hpp ----

void validate_arc_union(const ArcUnion& arcs) {
  double total = 0.0;
  std::vector<std::pair<double, double>> segs;
  for (const Arc& a : arcs) {
    if (!std::isfinite(a.start) || !std::isfinite(a.length) ||
        a.length <= 0.0 || a.length >= two_pi)
      throw InvalidInput("arc length must lie in (0, 2pi)");
    total += a.length;
    double lo = std::fmod(a.start, two_pi);
    if (lo < 0.0) lo += two_pi;
    segs.emplace_back(lo, lo + a.length);
  }
  if (total >= two_pi)
    throw InvalidInput("arc union must have total length < 2pi");
  std::sort(segs.begin(), segs.end());
  for (std::size_t i = 0; i + 1 < segs.size(); ++i)
    if (segs[i + 1].first < segs[i].second - arc_tol())
      throw InvalidInput("arcs overlap");
  if (segs.size() >= 2 &&
      segs.front().first + two_pi < segs.back().second - arc_tol())
    throw InvalidInput("arcs overlap across the wrap point");
}

ArcUnion normalize_arc_union(const ArcUnion& arcs) {
  if (arcs.empty()) return {};
  std::vector<std::pair<double, double>> segs;
  for (const Arc& a : arcs) {
    if (!std::isfinite(a.start) || !std::isfinite(a.length) ||
        a.length <= 0.0 || a.length >= two_pi)
      throw InvalidInput("arc length must lie in (0, 2pi)");
    double lo = std::fmod(a.start, two_pi);
    if (lo < 0.0) lo += two_pi;
    segs.emplace_back(lo, lo + a.length);
  }
  std::sort(segs.begin(), segs.end());
  std::vector<std::pair<double, double>> merged;
  for (const auto& s : segs) {
    if (!merged.empty() && s.first <= merged.back().second + 1e-15)
      merged.back().second = std::max(merged.back().second, s.second);
    else
      merged.push_back(s);
  }
  // fold overlap across 2pi back onto the leading segments
  while (merged.size() >= 2 && merged.back().second > two_pi &&
         merged.front().first + two_pi <= merged.back().second + 1e-15) {
    merged.back().second =
        std::max(merged.back().second, merged.front().second + two_pi);
    merged.erase(merged.begin());
  }
  ArcUnion out;
  for (const auto& s : merged)
    out.push_back(Arc{s.first, std::min(s.second - s.first, two_pi)});
  return out;
}

void validate_interval_union(const IntervalUnion& intervals) {
  for (const Interval& iv : intervals)
    if (!std::isfinite(iv.lo) || !std::isfinite(iv.hi) || iv.lo >= iv.hi)
      throw InvalidInput("interval must satisfy lo < hi");
  IntervalUnion sorted = intervals;
  std::sort(sorted.begin(), sorted.end(),
            [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
  for (std::size_t i = 0; i + 1 < sorted.size(); ++i)
    if (sorted[i + 1].lo < sorted[i].hi - arc_tol())
      throw InvalidInput("intervals overlap");
}

IntervalUnion normalize_interval_union(const IntervalUnion& intervals) {
  IntervalUnion sorted;
  for (const Interval& iv : intervals) {
    if (!std::isfinite(iv.lo) || !std::isfinite(iv.hi) || iv.lo >= iv.hi)
      throw InvalidInput("interval must satisfy lo < hi");
    sorted.push_back(iv);
  }
  std::sort(sorted.begin(), sorted.end(),
            [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
  IntervalUnion merged;
  for (const Interval& iv : sorted) {
    if (!merged.empty() && iv.lo <= merged.back().hi + 1e-15)
      merged.back().hi = std::max(merged.back().hi, iv.hi);
    else
      merged.push_back(iv);
  }
  return merged;
}

// ---- hole probabilities ----

double toeplitz_entry(int m, double alpha) {
  if (!(alpha >= 0.0 && alpha <= 3.1415926535897933))
    throw InvalidInput("toeplitz_entry: alpha must lie in [0, pi]");
  if (m == 0) return 1.0 - alpha / (0.5 * two_pi);
  return -std::sin(m * alpha) / (0.5 * two_pi * m);
}

HoleResult log_hole_cue(int n, double alpha) {
  if (n < 1) throw InvalidInput("log_hole_cue: n must be positive");
  std::vector<double> t(n);
  for (int m = 0; m < n; ++m) t[m] = toeplitz_entry(m, alpha);

  double e = t[0];
  double min_pivot = e;
  if (e <= pivot_floor) return {neg_inf, HoleMethod::toeplitz, min_pivot};
  // Past this determinant size the smallest eigenvalue is below double
  // epsilon and the recursion silently loses accuracy; switch to the
  // high-precision route.
  if (detail::toeplitz_log_scale(n, alpha) > 30.0) {
    const double v = detail::mp_levinson_logdet(n, alpha, &min_pivot);
    return {v, HoleMethod::toeplitz, min_pivot};
  }
  KahanSum logdet;
  logdet.add(std::log(e));
  std::vector<double> a(n, 0.0), a_prev(n, 0.0);
  for (int k = 1; k < n; ++k) {
    KahanSum acc;
    acc.add(t[k]);
    for (int j = 1; j < k; ++j) acc.add(a_prev[j] * t[k - j]);
    const double rho = -acc.sum / e;
    const double one_minus = (1.0 - rho) * (1.0 + rho);
    if (!(one_minus > 0.0) || !std::isfinite(one_minus)) {
      const double v = detail::mp_levinson_logdet(n, alpha, &min_pivot);
      return {v, HoleMethod::toeplitz, min_pivot};
    }
    for (int j = 1; j < k; ++j) a[j] = a_prev[j] + rho * a_prev[k - j];
    a[k] = rho;
    std::copy(a.begin(), a.begin() + k + 1, a_prev.begin());
    e *= one_minus;
    min_pivot = std::min(min_pivot, e);
    if (e <= pivot_floor) return {neg_inf, HoleMethod::toeplitz, min_pivot};
    logdet.add(std::log(e));
  }
  return {std::min(logdet.sum, 0.0), HoleMethod::toeplitz, min_pivot};
}

HoleResult log_hole_cue_cholesky(int n, double alpha) {
  if (n < 1) throw InvalidInput("log_hole_cue_cholesky: n must be positive");
  std::vector<long double> t(n);
  for (int m = 0; m < n; ++m)
    t[m] = static_cast<long double>(toeplitz_entry(m, alpha));
  std::vector<long double> l(static_cast<std::size_t>(n) * n, 0.0L);
  auto L = [&](int i, int j) -> long double& {
    return l[static_cast<std::size_t>(i) * n + j];
  };
  long double logdet = 0.0L;
  double min_pivot = std::numeric_limits<double>::infinity();
  for (int j = 0; j < n; ++j) {
    long double d = t[0];
    for (int k = 0; k < j; ++k) d -= L(j, k) * L(j, k);
    min_pivot = std::min(min_pivot, static_cast<double>(d));
    if (!(d > static_cast<long double>(pivot_floor)))
      return {neg_inf, HoleMethod::toeplitz, min_pivot};
    const long double root = std::sqrt(d);
    L(j, j) = root;
    logdet += std::log(d);
    for (int i = j + 1; i < n; ++i) {
      long double s = t[std::abs(i - j)];
      for (int k = 0; k < j; ++k) s -= L(i, k) * L(j, k);
      L(i, j) = s / root;
    }
  }
  return {std::min(static_cast<double>(logdet), 0.0), HoleMethod::toeplitz,
          min_pivot};
}

namespace detail {

Eigen::MatrixXcd cue_arc_gram(int n, const ArcUnion& arcs) {
  using Cplx = std::complex<double>;
  Eigen::MatrixXcd g_mat = Eigen::MatrixXcd::Zero(n, n);
  for (int d = 0; d < n; ++d) {
    Cplx g(0.0, 0.0);
    for (const Arc& a : arcs) {
      const double lo = a.start, hi = a.start + a.length;
      if (d == 0)
        g += Cplx(a.length / two_pi, 0.0);
      else
        g += (std::polar(1.0, d * hi) - std::polar(1.0, d * lo)) /
             Cplx(0.0, two_pi * d);
    }
    for (int j = d; j < n; ++j) {
      g_mat(j, j - d) = g;
      if (d > 0) g_mat(j - d, j) = std::conj(g);
    }
  }
  return g_mat;
}

double hermitian_logdet_id_minus(const Eigen::MatrixXcd& g, double* min_pivot) {
  const int n = static_cast<int>(g.rows());
  Eigen::MatrixXcd m_mat = Eigen::MatrixXcd::Identity(n, n) - g;
  Eigen::LLT<Eigen::MatrixXcd> llt(m_mat);
  if (llt.info() != Eigen::Success) {
    if (min_pivot) *min_pivot = 0.0;
    return neg_inf;
  }
  KahanSum logdet;
  double mp = std::numeric_limits<double>::infinity();
  const auto& lfac = llt.matrixLLT();
  for (int j = 0; j < n; ++j) {
    const double d = lfac(j, j).real() * lfac(j, j).real();
    mp = std::min(mp, d);
    if (d <= pivot_floor) {
      if (min_pivot) *min_pivot = mp;
      return neg_inf;
    }
    logdet.add(std::log(d));
  }
  if (min_pivot) *min_pivot = mp;
  return std::min(logdet.sum, 0.0);
}

}  // namespace detail

HoleResult gram_hole_cue(int n, const ArcUnion& arcs) {
  if (n < 1) throw InvalidInput("gram_hole_cue: n must be positive");
  const ArcUnion merged = normalize_arc_union(arcs);
  if (merged.empty()) return {0.0, HoleMethod::gram_cue, 1.0};
  double total = 0.0;
  for (const Arc& a : merged) total += a.length;
  if (total >= two_pi)
    throw InvalidInput("gram_hole_cue: union covers the whole circle");
  // The double factorization is limited by the smallest eigenvalue of
  // Id - G, not by the determinant itself. An arc occupies about
  // q = n len / 2pi modes and its log determinant -L spreads over them
  // roughly linearly, so the deepest eigenvalue is about e^{-2L/q}. The
  // backward error of a double Cholesky is then ~eps e^{2L/q}; stay in
  // double only while that leaves the requested digits intact. The observed
  // pivots cannot be trusted here: rounding noise inflates the tiny ones.
  double deep = 0.0, scale_sum = 0.0;
  for (const Arc& a : merged) {
    const double l_arc = detail::toeplitz_log_scale(n, std::min(0.5 * a.length, 3.0));
    const double q_arc = std::max(1.0, n * a.length / two_pi);
    deep = std::max(deep, 2.0 * l_arc / q_arc);
    scale_sum += l_arc;
  }
  double min_pivot = 0.0;
  double logdet = neg_inf;
  if (deep <= 16.0 + std::max(1.0, std::log(scale_sum)))
    logdet = detail::hermitian_logdet_id_minus(detail::cue_arc_gram(n, merged),
                                               &min_pivot);
  if (!std::isfinite(logdet))
    logdet = detail::mp_cue_gram_logdet(n, merged, &min_pivot);
  return {logdet, HoleMethod::gram_cue, min_pivot};
}

namespace {

// log det(I_n - G) for the GUE projection Gram matrix at a fixed rule order.
HoleResult gue_gram_at_order(int n, const IntervalUnion& merged, int order) {
  Eigen::MatrixXd g = Eigen::MatrixXd::Zero(n, n);
  const double rn = std::sqrt(static_cast<double>(n));
  const double scale = std::pow(static_cast<double>(n), 0.25);
  const detail::QuadRule& rule = detail::gauss_legendre(order);
  std::vector<double> psi;
  Eigen::VectorXd phi(n);
  for (const Interval& iv : merged) {
    const double mid = 0.5 * (iv.lo + iv.hi);
    const double halfw = 0.5 * (iv.hi - iv.lo);
    for (int q = 0; q < order; ++q) {
      const double x = mid + halfw * rule.nodes[q];
      const double w = halfw * rule.weights[q];
      hermite_psi_all(n - 1, x * rn, psi);
      for (int k = 0; k < n; ++k) phi[k] = scale * psi[k];
      g.selfadjointView<Eigen::Lower>().rankUpdate(phi, w);
    }
  }
  Eigen::MatrixXd m_mat = Eigen::MatrixXd::Identity(n, n);
  m_mat -= Eigen::MatrixXd(g.selfadjointView<Eigen::Lower>());
  Eigen::LLT<Eigen::MatrixXd> llt(m_mat);
  if (llt.info() != Eigen::Success)
    return {neg_inf, HoleMethod::gram_gue, 0.0};
  KahanSum logdet;
  double min_pivot = std::numeric_limits<double>::infinity();
  const auto& lfac = llt.matrixLLT();
  for (int j = 0; j < n; ++j) {
    const double d = lfac(j, j) * lfac(j, j);
    min_pivot = std::min(min_pivot, d);
    if (d <= pivot_floor) return {neg_inf, HoleMethod::gram_gue, min_pivot};
    logdet.add(std::log(d));
  }
  return {std::min(logdet.sum, 0.0), HoleMethod::gram_gue, min_pivot};
}

}  // namespace

HoleResult gram_hole_gue(int n, const IntervalUnion& intervals,
                         int quad_order) {
  if (n < 1) throw InvalidInput("gram_hole_gue: n must be positive");
  const IntervalUnion merged = normalize_interval_union(intervals);
  if (merged.empty()) return {0.0, HoleMethod::gram_gue, 1.0};
  for (const Interval& iv : merged)
    if (iv.lo < -10.0 || iv.hi > 10.0)
      throw InvalidInput("gram_hole_gue: intervals must lie within [-10, 10]");
  const int order = quad_order > 0 ? quad_order : std::max(64, 2 * n + 32);

  const HoleResult coarse = gue_gram_at_order(n, merged, order);
  const HoleResult fine = gue_gram_at_order(n, merged, 2 * order);
  const bool finite_pair =
      std::isfinite(coarse.log_prob) && std::isfinite(fine.log_prob);
  const double tol = 1e-8 * std::max(1.0, std::abs(fine.log_prob));
  if (finite_pair && fine.log_prob > -20.0 &&
      std::abs(fine.log_prob - coarse.log_prob) <= tol)
    return fine;
  // Double arithmetic cannot hold determinants this small (or disagreement
  // may itself be a precision artifact); redo in high precision.
  double mp_c = 0.0, mp_f = 0.0, min_pivot = 0.0;
  mp_c = detail::mp_gue_gram_logdet(n, merged, order, fine.log_prob, nullptr);
  mp_f = detail::mp_gue_gram_logdet(n, merged, 2 * order, fine.log_prob,
                                    &min_pivot);
  if (!std::isfinite(mp_c) && !std::isfinite(mp_f))
    return {neg_inf, HoleMethod::gram_gue, min_pivot};
  const double mp_tol = 1e-8 * std::max(1.0, std::abs(mp_f));
  if (!(std::abs(mp_f - mp_c) <= mp_tol))
    throw NumericalError("gram_hole_gue: quadrature order too low");
  return {mp_f, HoleMethod::gram_gue, min_pivot};
}

double asymptotic_log_dn(int n, double alpha, double c0_hat) {
  if (n < 1 || !(alpha > 0.0 && alpha < 0.5 * two_pi))
    throw InvalidInput("asymptotic_log_dn: need n >= 1, alpha in (0, pi)");
  const double nn = static_cast<double>(n);
  return nn * nn * std::log(std::cos(0.5 * alpha)) -
         0.25 * std::log(nn * std::sin(0.5 * alpha)) + c0_hat;
}

C0Estimate estimate_c0(const std::vector<double>& alphas,
                       const std::vector<int>& n_grid) {
  if (alphas.empty() || n_grid.size() < 2)
    throw InvalidInput("estimate_c0: need at least one alpha and two n");
  for (std::size_t i = 0; i + 1 < n_grid.size(); ++i)
    if (n_grid[i + 1] <= n_grid[i])
      throw InvalidInput("estimate_c0: n_grid must be increasing");

  std::vector<double> fits;
  for (double alpha : alphas) {
    // least squares r_n ~ c0 + A * u with u = 1/(n sin(alpha/2))
    double su = 0, suu = 0, sr = 0, sur = 0;
    const double m = static_cast<double>(n_grid.size());
    for (int n : n_grid) {
      const double r =
          log_hole_cue(n, alpha).log_prob - asymptotic_log_dn(n, alpha, 0.0);
      if (!std::isfinite(r))
        throw NumericalError("estimate_c0: singular determinant in the fit");
      const double u = 1.0 / (n * std::sin(0.5 * alpha));
      su += u;
      suu += u * u;
      sr += r;
      sur += u * r;
    }
    const double denom = m * suu - su * su;
    fits.push_back((suu * sr - su * sur) / denom);
  }
  const auto [lo, hi] = std::minmax_element(fits.begin(), fits.end());
  C0Estimate est;
  est.spread = *hi - *lo;
  est.c0_hat = 0.0;
  for (double c : fits) est.c0_hat += c;
  est.c0_hat /= static_cast<double>(fits.size());
  if (est.spread > 1e-2)
    throw NumericalError("estimate_c0: fit unstable across alphas");
  return est;
}

}  // namespace rmt
