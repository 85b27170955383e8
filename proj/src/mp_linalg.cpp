#include "mp_linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <mutex>
#include <vector>

#include <boost/math/constants/constants.hpp>
#include <boost/multiprecision/mpfr.hpp>

#include "quadrature.hpp"
#include "rmtgaps/holeprob.hpp"

namespace rmt::detail {

namespace {

using mpf = boost::multiprecision::number<
    boost::multiprecision::mpfr_float_backend<0>,
    boost::multiprecision::et_off>;

constexpr double neg_inf = -std::numeric_limits<double>::infinity();
constexpr unsigned max_bits = 1u << 18;

std::mutex& mp_mutex() {
  static std::mutex m;
  return m;
}

void set_bits(unsigned bits) {
  mpf::default_precision(static_cast<unsigned>(bits * 0.30103) + 4);
}

struct MpDet {
  double logdet = 0.0;
  double min_pivot = std::numeric_limits<double>::infinity();
  bool floored = false;
};

// Runs `fn` at increasing precision until two runs (at p and 1.5p bits)
// agree to 1e-10 relative, starting from the caller's estimate.
template <class Fn>
MpDet adaptive_logdet(unsigned start_bits, Fn&& fn) {
  unsigned bits = std::clamp(start_bits, 96u, max_bits);
  for (;;) {
    set_bits(bits);
    const MpDet a = fn();
    set_bits(bits + bits / 2);
    const MpDet b = fn();
    if (a.floored && b.floored) return b;
    if (!a.floored && !b.floored) {
      const double tol = 1e-10 * std::max(1.0, std::abs(b.logdet));
      if (std::abs(a.logdet - b.logdet) <= tol) return b;
    }
    if (bits >= max_bits)
      throw NumericalError(
          "high-precision determinant did not converge within the precision "
          "cap");
    bits *= 2;
  }
}

MpDet levinson_run(int n, double alpha) {
  const mpf pi = boost::math::constants::pi<mpf>();
  const mpf a = alpha;
  std::vector<mpf> t(n);
  t[0] = 1 - a / pi;
  for (int m = 1; m < n; ++m) t[m] = -sin(m * a) / (pi * m);

  MpDet out;
  const mpf floor_v = pivot_floor;
  mpf e = t[0];
  out.min_pivot = e.convert_to<double>();
  if (e <= floor_v) {
    out.logdet = neg_inf;
    out.floored = true;
    return out;
  }
  mpf logdet = log(e);
  std::vector<mpf> cur(n), prev(n);
  for (int k = 1; k < n; ++k) {
    mpf acc = t[k];
    for (int j = 1; j < k; ++j) acc += prev[j] * t[k - j];
    const mpf rho = -acc / e;
    for (int j = 1; j < k; ++j) cur[j] = prev[j] + rho * prev[k - j];
    cur[k] = rho;
    for (int j = 1; j <= k; ++j) prev[j] = cur[j];
    e *= (1 - rho) * (1 + rho);
    out.min_pivot = std::min(out.min_pivot, e.convert_to<double>());
    if (e <= floor_v) {
      out.logdet = neg_inf;
      out.floored = true;
      return out;
    }
    logdet += log(e);
  }
  out.logdet = std::min(logdet.convert_to<double>(), 0.0);
  return out;
}

// In-place lower Cholesky of a dense symmetric matrix held row-major in `m`.
MpDet cholesky_logdet(std::vector<mpf>& m, int dim, double scale) {
  MpDet out;
  const mpf floor_v = pivot_floor;
  mpf logdet = 0;
  auto at = [&](int i, int j) -> mpf& {
    return m[static_cast<std::size_t>(i) * dim + j];
  };
  for (int j = 0; j < dim; ++j) {
    mpf d = at(j, j);
    for (int k = 0; k < j; ++k) d -= at(j, k) * at(j, k);
    out.min_pivot = std::min(out.min_pivot, d.convert_to<double>());
    if (d <= floor_v) {
      out.logdet = neg_inf;
      out.floored = true;
      return out;
    }
    const mpf root = sqrt(d);
    at(j, j) = root;
    logdet += log(d);
    for (int i = j + 1; i < dim; ++i) {
      mpf s = at(i, j);
      for (int k = 0; k < j; ++k) s -= at(i, k) * at(j, k);
      at(i, j) = s / root;
    }
  }
  out.logdet = std::min(scale * logdet.convert_to<double>(), 0.0);
  return out;
}

// In-place lower Cholesky L L^H of a Hermitian matrix held as separate real
// and imaginary row-major parts; the determinant is the product of the (real)
// pivots.
MpDet cholesky_logdet_hermitian(std::vector<mpf>& re, std::vector<mpf>& im,
                                int dim) {
  MpDet out;
  const mpf floor_v = pivot_floor;
  mpf logdet = 0;
  auto re_at = [&](int i, int j) -> mpf& {
    return re[static_cast<std::size_t>(i) * dim + j];
  };
  auto im_at = [&](int i, int j) -> mpf& {
    return im[static_cast<std::size_t>(i) * dim + j];
  };
  for (int j = 0; j < dim; ++j) {
    mpf d = re_at(j, j);
    for (int k = 0; k < j; ++k)
      d -= re_at(j, k) * re_at(j, k) + im_at(j, k) * im_at(j, k);
    out.min_pivot = std::min(out.min_pivot, d.convert_to<double>());
    if (d <= floor_v) {
      out.logdet = neg_inf;
      out.floored = true;
      return out;
    }
    const mpf root = sqrt(d);
    logdet += log(d);
    for (int i = j + 1; i < dim; ++i) {
      mpf sr = re_at(i, j);
      mpf si = im_at(i, j);
      for (int k = 0; k < j; ++k) {
        // subtract L_ik * conj(L_jk)
        sr -= re_at(i, k) * re_at(j, k) + im_at(i, k) * im_at(j, k);
        si -= im_at(i, k) * re_at(j, k) - re_at(i, k) * im_at(j, k);
      }
      re_at(i, j) = sr / root;
      im_at(i, j) = si / root;
    }
  }
  out.logdet = std::min(logdet.convert_to<double>(), 0.0);
  return out;
}

MpDet cue_gram_run(int n, const ArcUnion& arcs) {
  const mpf two_pi_mp = 2 * boost::math::constants::pi<mpf>();
  // g_d = sum over arcs of (e^{id hi} - e^{id lo}) / (2 pi i d)
  std::vector<mpf> re(n), im(n);
  for (int d = 0; d < n; ++d) {
    mpf r = 0, i = 0;
    for (const Arc& arc : arcs) {
      const mpf lo = mpf(arc.start);
      const mpf hi = mpf(arc.start) + mpf(arc.length);
      if (d == 0) {
        r += (hi - lo) / two_pi_mp;
      } else {
        const mpf den = two_pi_mp * d;
        r += (sin(d * hi) - sin(d * lo)) / den;
        i -= (cos(d * hi) - cos(d * lo)) / den;
      }
    }
    re[d] = r;
    im[d] = i;
  }
  std::vector<mpf> mr(static_cast<std::size_t>(n) * n),
      mi(static_cast<std::size_t>(n) * n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const int d = std::abs(i - j);
      const std::size_t idx = static_cast<std::size_t>(i) * n + j;
      mr[idx] = (i == j ? mpf(1) : mpf(0)) - re[d];
      mi[idx] = (i >= j ? -im[d] : im[d]);
    }
  }
  return cholesky_logdet_hermitian(mr, mi, n);
}

// Gauss-Legendre nodes refined to the working precision by Newton iteration
// seeded from the double-precision rule.
void mp_gauss_legendre(int order, std::vector<mpf>& nodes,
                       std::vector<mpf>& weights) {
  const QuadRule& seed = gauss_legendre(order);
  nodes.resize(order);
  weights.resize(order);
  for (int i = 0; i < order; ++i) {
    mpf x = seed.nodes[i];
    mpf p = 0, dp = 0;
    for (int iter = 0; iter < 8; ++iter) {
      mpf p0 = 1, p1 = x;
      for (int j = 2; j <= order; ++j) {
        const mpf p2 = ((2 * j - 1) * x * p1 - (j - 1) * p0) / j;
        p0 = p1;
        p1 = p2;
      }
      p = p1;
      dp = order * (x * p1 - p0) / (x * x - 1);
      const mpf step = p / dp;
      x -= step;
      if (abs(step) < ldexp(mpf(1), -static_cast<int>(
                                        mpf::default_precision() * 3.3)))
        break;
    }
    nodes[i] = x;
    weights[i] = 2 / ((1 - x * x) * dp * dp);
  }
}

void mp_psi_all(int kmax, const mpf& x, std::vector<mpf>& out) {
  out.resize(static_cast<std::size_t>(kmax) + 1);
  const mpf two_pi_mp = 2 * boost::math::constants::pi<mpf>();
  mpf p0 = exp(-x * x / 4) / sqrt(sqrt(two_pi_mp));
  out[0] = p0;
  if (kmax == 0) return;
  mpf p1 = x * p0;
  out[1] = p1;
  for (int k = 1; k < kmax; ++k) {
    const mpf p2 = (x * p1 - sqrt(mpf(k)) * p0) / sqrt(mpf(k + 1));
    p0 = p1;
    p1 = p2;
    out[k + 1] = p2;
  }
}

MpDet gue_gram_run(int n, const IntervalUnion& intervals, int order) {
  std::vector<mpf> nodes, weights;
  mp_gauss_legendre(order, nodes, weights);
  const mpf rn = sqrt(mpf(n));
  const mpf scale = sqrt(rn);
  std::vector<mpf> g(static_cast<std::size_t>(n) * n, mpf(0));
  auto at = [&](int i, int j) -> mpf& {
    return g[static_cast<std::size_t>(i) * n + j];
  };
  std::vector<mpf> psi, phi(n);
  for (const Interval& iv : intervals) {
    const mpf mid = (mpf(iv.lo) + mpf(iv.hi)) / 2;
    const mpf halfw = (mpf(iv.hi) - mpf(iv.lo)) / 2;
    for (int q = 0; q < order; ++q) {
      const mpf x = mid + halfw * nodes[q];
      const mpf w = halfw * weights[q];
      mp_psi_all(n - 1, x * rn, psi);
      for (int k = 0; k < n; ++k) phi[k] = scale * psi[k];
      for (int i = 0; i < n; ++i)
        for (int j = 0; j <= i; ++j) at(i, j) += w * phi[i] * phi[j];
    }
  }
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j <= i; ++j) {
      const mpf v = (i == j ? mpf(1) : mpf(0)) - at(i, j);
      at(i, j) = v;
      at(j, i) = v;
    }
  }
  return cholesky_logdet(g, n, 1.0);
}

unsigned bits_from_scale(double log_scale) {
  if (!std::isfinite(log_scale)) return max_bits;
  const double b = 96.0 + 1.4427 * log_scale;
  return b >= static_cast<double>(max_bits)
             ? max_bits
             : static_cast<unsigned>(b);
}

}  // namespace

double toeplitz_log_scale(int n, double alpha) {
  const double c = std::cos(0.5 * alpha);
  if (!(c > 0.0)) return std::numeric_limits<double>::infinity();
  return -static_cast<double>(n) * n * std::log(c);
}

double mp_levinson_logdet(int n, double alpha, double* min_pivot) {
  std::lock_guard<std::mutex> lock(mp_mutex());
  // Smallest pivot decays like exp(2 n log cos(alpha/2)) and the smallest
  // eigenvalue roughly like the 10th power of that; 12 gives headroom.
  const double per_n = toeplitz_log_scale(n, alpha) / std::max(1, n);
  const MpDet r = adaptive_logdet(bits_from_scale(12.0 * per_n),
                                  [&] { return levinson_run(n, alpha); });
  if (min_pivot) *min_pivot = r.min_pivot;
  return r.floored ? neg_inf : r.logdet;
}

double mp_cue_gram_logdet(int n, const ArcUnion& arcs, double* min_pivot) {
  std::lock_guard<std::mutex> lock(mp_mutex());
  double decay = 0.0;
  for (const Arc& a : arcs)
    decay += toeplitz_log_scale(n, std::min(0.5 * a.length, 3.0)) /
             std::max(1, n);
  const MpDet r = adaptive_logdet(bits_from_scale(12.0 * decay),
                                  [&] { return cue_gram_run(n, arcs); });
  if (min_pivot) *min_pivot = r.min_pivot;
  return r.floored ? neg_inf : r.logdet;
}

double mp_gue_gram_logdet(int n, const IntervalUnion& intervals, int order,
                          double log_hint, double* min_pivot) {
  std::lock_guard<std::mutex> lock(mp_mutex());
  const double hint =
      std::isfinite(log_hint) ? std::abs(log_hint) : 16.0 * n;
  const MpDet r =
      adaptive_logdet(bits_from_scale(12.0 * hint + 64.0), [&] {
        return gue_gram_run(n, intervals, order);
      });
  if (min_pivot) *min_pivot = r.min_pivot;
  return r.floored ? neg_inf : r.logdet;
}

}  // namespace rmt::detail
