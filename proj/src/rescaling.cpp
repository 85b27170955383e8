#include "rmtgaps/rescaling.hpp"

#include <cmath>

#include "rmtgaps/holeprob.hpp"
#include "quadrature.hpp"

namespace rmt {

namespace {
constexpr double pi = 0.5 * two_pi;
}

double RescaleParams::c2(const BulkInterval& I) const {
  return c0_hat + m0_of_interval(I);
}

double f_n(const RescaleParams& p, double x) {
  const double l = p.ln_n;
  return (8.0 * x + 3.0 * std::log(2.0 * l)) /
             (2.0 * p.n * std::sqrt(2.0 * l)) +
         std::sqrt(32.0 * l) / p.n;
}

double g_n(const RescaleParams& p, double x) {
  const double l = p.ln_n;
  return (8.0 * x - 5.0 * std::log(2.0 * l)) /
             (2.0 * p.n * std::sqrt(2.0 * l)) +
         std::sqrt(32.0 * l) / p.n;
}

double tau_from_gap_cue(const RescaleParams& p, double m) {
  if (!(m > 0.0 && m < two_pi))
    throw InvalidInput("tau_from_gap_cue: gap must lie in (0, 2pi)");
  const double l = p.ln_n;
  return std::sqrt(2.0 * l) * (p.n * m - std::sqrt(32.0 * l)) / 4.0 -
         0.375 * std::log(2.0 * l);
}

double tau_from_gap_gue(const RescaleParams& p, double m_star,
                        const BulkInterval& I) {
  if (!(m_star > 0.0))
    throw InvalidInput("tau_from_gap_gue: gap must be positive");
  const double l = p.ln_n;
  return std::sqrt(2.0 * l) *
             (p.n * s_of_interval(I) * m_star - std::sqrt(32.0 * l)) / 4.0 +
         0.625 * std::log(2.0 * l);
}

double s_of_interval(const BulkInterval& I) {
  return std::min(std::sqrt(4.0 - I.a * I.a), std::sqrt(4.0 - I.b * I.b));
}

double m_of_interval(const BulkInterval& I) {
  const double s = I.a + I.b;
  if (s < 0.0) {
    if (I.a == 0.0) throw InvalidInput("m_of_interval: endpoint a is 0");
    return (4.0 - I.a * I.a) / std::abs(I.a);
  }
  if (s > 0.0) {
    if (I.b == 0.0) throw InvalidInput("m_of_interval: endpoint b is 0");
    return (4.0 - I.b * I.b) / std::abs(I.b);
  }
  if (I.a == 0.0) throw InvalidInput("m_of_interval: endpoint a is 0");
  return 2.0 * (4.0 - I.a * I.a) / std::abs(I.a);
}

double m0_of_interval(const BulkInterval& I) {
  const double s = I.a + I.b;
  if (s < 0.0) {
    if (I.a == 0.0) throw InvalidInput("m0_of_interval: endpoint a is 0");
    return 1.5 * std::log(4.0 - I.a * I.a) - std::log(4.0 * std::abs(I.a));
  }
  if (s > 0.0) {
    if (I.b == 0.0) throw InvalidInput("m0_of_interval: endpoint b is 0");
    return 1.5 * std::log(4.0 - I.b * I.b) - std::log(4.0 * std::abs(I.b));
  }
  if (I.a == 0.0) throw InvalidInput("m0_of_interval: endpoint a is 0");
  return 1.5 * std::log(4.0 - I.a * I.a) - std::log(2.0 * std::abs(I.a));
}

double GumbelLaw::pdf(double x) const {
  const double log_lambda = location - x;
  const double lambda = std::exp(log_lambda);
  return std::exp(order * log_lambda - lambda - std::lgamma(order));
}

double GumbelLaw::cdf(double x) const {
  const double log_lambda = location - x;
  const double lambda = std::exp(log_lambda);
  double acc = 0.0;
  for (int j = 0; j < order; ++j)
    acc += std::exp(j * log_lambda - lambda - std::lgamma(j + 1.0));
  return std::min(acc, 1.0);
}

double check_lemma1(const RescaleParams& p, double x) {
  const double half = 0.5 * f_n(p, x);
  if (!(half > 0.0 && half < pi))
    throw InvalidInput("check_lemma1: arc half-size outside (0, pi)");
  return p.n * std::sqrt(2.0 * p.ln_n) *
         std::exp(log_hole_cue(p.n, half).log_prob);
}

double check_lemma8(const RescaleParams& p, double x, double z) {
  const double half = 0.5 * (1.0 + z / p.ln_n) * g_n(p, x);
  if (!(half > 0.0 && half < pi))
    throw InvalidInput("check_lemma8: arc half-size outside (0, pi)");
  return p.n / std::sqrt(2.0 * p.ln_n) *
         std::exp(log_hole_cue(p.n, half).log_prob);
}

Lemma9Result check_lemma9(const RescaleParams& p, double x, double w) {
  const double base = 0.5 * g_n(p, x);
  if (!(w >= 1.0) || !(w * base < 0.5 * pi))
    throw InvalidInput("check_lemma9: need w >= 1 and w g_n/2 < pi/2");
  Lemma9Result r;
  r.lhs = log_hole_cue(p.n, w * base).log_prob;
  r.rhs = 1.0 - (w - 1.0) * p.ln_n + log_hole_cue(p.n, base).log_prob;
  r.holds = r.lhs <= r.rhs;
  return r;
}

double check_lemma10(const RescaleParams& p, double x, const BulkInterval& I,
                     double rel_tol) {
  const double base = 0.5 * g_n(p, x);
  const double s_inv = 1.0 / s_of_interval(I);
  // the arc is largest where sqrt(4 - y^2) peaks over I
  const double peak =
      (I.a <= 0.0 && I.b >= 0.0)
          ? 2.0
          : std::max(std::sqrt(4.0 - I.a * I.a), std::sqrt(4.0 - I.b * I.b));
  if (!(base > 0.0 && peak * s_inv * base < pi))
    throw InvalidInput("check_lemma10: integrand arc outside (0, pi)");
  auto integrand = [&](double y) {
    const double alpha = std::sqrt(4.0 - y * y) * s_inv * base;
    return std::exp(log_hole_cue(p.n, alpha).log_prob);
  };
  const double coarse = detail::integrate_gl(integrand, I.a, I.b, 40);
  const double value = detail::integrate_adaptive(integrand, I.a, I.b, rel_tol,
                                                  coarse == 0.0 ? 1.0 : coarse);
  return p.n * std::sqrt(2.0 * p.ln_n) * value;
}

}  // namespace rmt
