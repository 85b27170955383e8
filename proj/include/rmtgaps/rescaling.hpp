#pragma once

#include "rmtgaps/types.hpp"

namespace rmt {

// Dimension-derived quantities for the gap rescaling maps. c0_hat comes from
// estimate_c0; no literature constant is baked in.
struct RescaleParams {
  int n;
  double ln_n;
  double c0_hat;

  RescaleParams(int n_, double c0_hat_) : n(n_), c0_hat(c0_hat_) {
    if (n_ < 3) throw InvalidInput("RescaleParams requires n >= 3");
    ln_n = std::log(static_cast<double>(n_));
  }

  double c1() const { return c0_hat + std::log(1.5707963267948966); }  // + ln(pi/2)
  double c2(const BulkInterval& I) const;
};

// Gap-size map for the circular ensemble:
//   F_n(x) = (8x + 3 ln(2 ln n)) / (2n (2 ln n)^{1/2}) + (32 ln n)^{1/2}/n.
double f_n(const RescaleParams& p, double x);

// Gap-size map for the bulk GUE comparison:
//   G_n(x) = (8x - 5 ln(2 ln n)) / (2n (2 ln n)^{1/2}) + (32 ln n)^{1/2}/n.
double g_n(const RescaleParams& p, double x);

// Inverse of F_n composed with the gap scaling; m is a circular gap size.
double tau_from_gap_cue(const RescaleParams& p, double m);

// Inverse of G_n for interval-restricted GUE gaps; m_star is the raw gap.
double tau_from_gap_gue(const RescaleParams& p, double m_star,
                        const BulkInterval& I);

// S(I) = inf over I of sqrt(4 - x^2).
double s_of_interval(const BulkInterval& I);

// M(I): (4-a^2)/|a| if a+b<0, (4-b^2)/|b| if a+b>0, 2(4-a^2)/|a| if a+b=0.
// Throws InvalidInput when the determining endpoint is 0 (the constant
// degenerates there).
double m_of_interval(const BulkInterval& I);

// M0(I) = ln(M(I) S(I) / 4), in the closed per-case form.
double m0_of_interval(const BulkInterval& I);

// Limit law of the k-th largest rescaled gap: with lambda(x) = e^{c-x},
// density lambda^k e^{-lambda} / (k-1)!.
struct GumbelLaw {
  double location;  // c
  int order;        // k >= 1
  GumbelLaw(double c, int k) : location(c), order(k) {
    if (k < 1) throw InvalidInput("GumbelLaw requires order >= 1");
  }
  double pdf(double x) const;
  double cdf(double x) const;
};

// Finite-n value of n (2 ln n)^{1/2} D_n(F_n(x)/2); tends to e^{c0 - x}.
double check_lemma1(const RescaleParams& p, double x);

// Finite-n value of n (2 ln n)^{-1/2} D_n((1 + z/ln n) G_n(x)/2);
// tends to e^{c0 - x - 2z}.
double check_lemma8(const RescaleParams& p, double x, double z);

struct Lemma9Result {
  double lhs;  // log D_n(w G_n(x)/2)
  double rhs;  // 1 - (w-1) ln n + log D_n(G_n(x)/2)
  bool holds;
};

// Bound D_n(w G_n(x)/2) <= e^{1-(w-1) ln n} D_n(G_n(x)/2), in log space.
Lemma9Result check_lemma9(const RescaleParams& p, double x, double w);

// Finite-n value of
//   n (2 ln n)^{1/2} int_I D_n(sqrt(4-y^2)/S(I) * G_n(x)/2) dy,
// by adaptive Gauss-Legendre; tends to M(I) e^{c0 - x}.
double check_lemma10(const RescaleParams& p, double x, const BulkInterval& I,
                     double rel_tol = 1e-10);

}  // namespace rmt
