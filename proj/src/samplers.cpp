#include "rmtgaps/samplers.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <vector>

namespace rmt {

namespace {

using Cplx = std::complex<double>;

// In-place iterative radix-2 FFT; inverse leaves out the 1/m factor.
void fft(std::vector<Cplx>& a, bool inverse) {
  const std::size_t m = a.size();
  for (std::size_t i = 1, j = 0; i < m; ++i) {
    std::size_t bit = m >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  for (std::size_t len = 2; len <= m; len <<= 1) {
    const double ang = (inverse ? 1.0 : -1.0) * two_pi / len;
    const Cplx wl = std::polar(1.0, ang);
    for (std::size_t i = 0; i < m; i += len) {
      Cplx w(1.0, 0.0);
      for (std::size_t j = 0; j < len / 2; ++j) {
        const Cplx u = a[i + j];
        const Cplx v = a[i + j + len / 2] * w;
        a[i + j] = u + v;
        a[i + j + len / 2] = u - v;
        w *= wl;
      }
    }
  }
}

// Sequential conditional sampler for the projection process with features
// phi_k(x) = e^{i(k-(n-1)/2)x}/sqrt(2pi). State: the projection M onto the
// span of the selected feature vectors, kept as its diagonal sums
// c_d = sum_l M_{l+d,l}, so each proposal is O(n).
class CueState {
 public:
  explicit CueState(int n)
      : n_(n), c_(n, Cplx(0.0, 0.0)), basis_(n, n), proj_(n) {
    fft_len_ = 1;
    while (fft_len_ < static_cast<std::size_t>(2 * n)) fft_len_ <<= 1;
  }

  // sum_{k,l} M_{kl} e^{i(k-l)x}; real, in [0, j] up to rounding
  double projection_mass(double x) const {
    const Cplx w = std::polar(1.0, x);
    Cplx pw = w;
    double acc = c_[0].real();
    for (int d = 1; d < n_; ++d) {
      acc += 2.0 * (c_[d] * pw).real();
      pw *= w;
    }
    return acc;
  }

  // Orthogonalize the feature vector of x against the accepted basis
  // (classical Gram-Schmidt, two passes) and fold the new unit vector into
  // the diagonal sums.
  void add_point(double x) {
    Eigen::VectorXcd v(n_);
    for (int k = 0; k < n_; ++k) v[k] = std::polar(1.0, -k * x);
    if (count_ > 0) {
      const auto basis = basis_.leftCols(count_);
      auto proj = proj_.head(count_);
      for (int pass = 0; pass < 2; ++pass) {
        proj.noalias() = basis.adjoint() * v;
        v.noalias() -= basis * proj;
      }
    }
    const double norm2 = v.squaredNorm();
    if (!(norm2 > 1e-24 * n_))
      throw NumericalError("sample_cue: orthogonalization collapsed");
    v *= 1.0 / std::sqrt(norm2);

    std::vector<Cplx> pad(fft_len_, Cplx(0.0, 0.0));
    std::copy(v.data(), v.data() + n_, pad.begin());
    fft(pad, false);
    for (auto& z : pad) z = Cplx(std::norm(z), 0.0);
    fft(pad, true);
    const double scale = 1.0 / static_cast<double>(fft_len_);
    for (int d = 0; d < n_; ++d) c_[d] += pad[d] * scale;
    basis_.col(count_++) = v;
  }

 private:
  int n_;
  int count_ = 0;
  std::size_t fft_len_;
  std::vector<Cplx> c_;
  Eigen::MatrixXcd basis_;
  Eigen::VectorXcd proj_;
};

// Eigenvalues of a symmetric tridiagonal matrix by the implicit-shift QL
// iteration, eigenvalues only. d is the diagonal, e the subdiagonal
// (e[i] couples i and i+1).
void tridiag_eigenvalues(std::vector<double>& d, std::vector<double>& e) {
  const int n = static_cast<int>(d.size());
  if (n == 1) return;
  e.resize(n, 0.0);
  e[n - 1] = 0.0;
  for (int l = 0; l < n; ++l) {
    int iter = 0;
    int m;
    do {
      for (m = l; m < n - 1; ++m) {
        const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
        if (std::abs(e[m]) <= std::numeric_limits<double>::epsilon() * dd)
          break;
      }
      if (m != l) {
        if (iter++ == 50)
          throw NumericalError("sample_gue: QL iteration did not converge");
        double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
        double r = std::hypot(g, 1.0);
        g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
        double s = 1.0, c = 1.0, p = 0.0;
        int i;
        for (i = m - 1; i >= l; --i) {
          double f = s * e[i];
          const double b = c * e[i];
          r = std::hypot(f, g);
          e[i + 1] = r;
          if (r == 0.0) {
            d[i + 1] -= p;
            e[m] = 0.0;
            break;
          }
          s = f / r;
          c = g / r;
          g = d[i + 1] - p;
          r = (d[i] - g) * s + 2.0 * c * b;
          p = s * r;
          d[i + 1] = g + p;
          g = c * r - b;
        }
        if (r == 0.0 && i >= l) continue;
        d[l] -= p;
        e[l] = g;
        e[m] = 0.0;
      }
    } while (m != l);
  }
}

}  // namespace

CueSpectrum sample_cue(int n, Seed seed) {
  if (n < 1 || n > 2048)
    throw InvalidInput("sample_cue: n must lie in [1, 2048]");
  Rng rng(seed);
  CueState state(n);
  std::vector<double> angles;
  angles.reserve(n);
  for (int j = 0; j < n; ++j) {
    long proposals = 0;
    for (;;) {
      if (++proposals > 1000000)
        throw NumericalError("sample_cue: rejection loop stalled");
      const double x = two_pi * rng.uniform();
      // accept with prob (K(x,x) - projection)/envelope = (n - mass)/n
      const double mass = state.projection_mass(x);
      if (rng.uniform() * n < n - mass) {
        state.add_point(x);
        angles.push_back(x);
        break;
      }
    }
  }
  std::sort(angles.begin(), angles.end());
  return CueSpectrum{std::move(angles)};
}

GueSpectrum sample_gue(int n, Seed seed) {
  if (n < 1 || n > 65536)
    throw InvalidInput("sample_gue: n must lie in [1, 65536]");
  Rng rng(seed);
  std::vector<double> d(n), e;
  for (int i = 0; i < n; ++i) d[i] = rng.normal();
  e.resize(std::max(n - 1, 0));
  for (int i = 0; i < n - 1; ++i) e[i] = rng.chi_over_sqrt2(2 * (n - 1 - i));
  tridiag_eigenvalues(d, e);
  const double inv = 1.0 / std::sqrt(static_cast<double>(n));
  for (double& v : d) v *= inv;
  std::sort(d.begin(), d.end());
  return GueSpectrum{std::move(d)};
}

GapList extract_gaps_cue(const CueSpectrum& s) {
  const std::size_t n = s.angles.size();
  if (n == 0) throw InvalidInput("extract_gaps_cue: empty spectrum");
  if (!std::is_sorted(s.angles.begin(), s.angles.end()))
    throw InvalidInput("extract_gaps_cue: angles must be sorted");
  std::vector<double> gaps;
  gaps.reserve(n);
  for (std::size_t i = 0; i + 1 < n; ++i)
    gaps.push_back(s.angles[i + 1] - s.angles[i]);
  gaps.push_back(two_pi - s.angles[n - 1] + s.angles[0]);
  std::sort(gaps.begin(), gaps.end(), std::greater<double>());
  return GapList{std::move(gaps)};
}

GapList extract_gaps_gue(const GueSpectrum& s, const BulkInterval& I) {
  if (!std::is_sorted(s.values.begin(), s.values.end()))
    throw InvalidInput("extract_gaps_gue: values must be sorted");
  std::vector<double> gaps;
  for (std::size_t i = 0; i + 1 < s.values.size(); ++i) {
    const double lo = s.values[i], hi = s.values[i + 1];
    if (lo >= I.a && hi <= I.b) gaps.push_back(hi - lo);
  }
  std::sort(gaps.begin(), gaps.end(), std::greater<double>());
  return GapList{std::move(gaps)};
}

}  // namespace rmt
