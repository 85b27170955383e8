#pragma once

#include <cmath>
#include <cstddef>
#include <mutex>
#include <unordered_map>
#include <vector>

namespace rmt::detail {

struct QuadRule {
  std::vector<double> nodes;    // on [-1, 1]
  std::vector<double> weights;
};

// Gauss-Legendre nodes/weights by Newton iteration on P_m.
inline QuadRule make_gauss_legendre(int m) {
  QuadRule rule;
  rule.nodes.resize(m);
  rule.weights.resize(m);
  const double pi = 3.14159265358979323846;
  for (int i = 0; i < (m + 1) / 2; ++i) {
    double x = std::cos(pi * (i + 0.75) / (m + 0.5));
    double pp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = 0.0;
      for (int j = 0; j < m; ++j) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j + 1.0) * x * p1 - j * p2) / (j + 1.0);
      }
      pp = m * (x * p0 - p1) / (x * x - 1.0);
      const double dx = p0 / pp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    rule.nodes[i] = -x;
    rule.nodes[m - 1 - i] = x;
    rule.weights[i] = 2.0 / ((1.0 - x * x) * pp * pp);
    rule.weights[m - 1 - i] = rule.weights[i];
  }
  return rule;
}

inline const QuadRule& gauss_legendre(int m) {
  static std::mutex mu;
  static std::unordered_map<int, QuadRule> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(m);
  if (it == cache.end()) it = cache.emplace(m, make_gauss_legendre(m)).first;
  return it->second;
}

// Integrates f over [lo, hi] with an m-point rule.
template <class F>
double integrate_gl(F&& f, double lo, double hi, int m) {
  const QuadRule& rule = gauss_legendre(m);
  const double mid = 0.5 * (lo + hi);
  const double halfw = 0.5 * (hi - lo);
  double acc = 0.0;
  for (int i = 0; i < m; ++i)
    acc += rule.weights[i] * f(mid + halfw * rule.nodes[i]);
  return acc * halfw;
}

// Adaptive bisection driven by a 20/40-point error estimate.
template <class F>
double integrate_adaptive(F&& f, double lo, double hi, double rel_tol,
                          double scale, int depth = 0) {
  const double coarse = integrate_gl(f, lo, hi, 20);
  const double fine = integrate_gl(f, lo, hi, 40);
  if (std::abs(fine - coarse) <= rel_tol * std::abs(scale) || depth > 30)
    return fine;
  const double mid = 0.5 * (lo + hi);
  return integrate_adaptive(f, lo, mid, rel_tol, scale, depth + 1) +
         integrate_adaptive(f, mid, hi, rel_tol, scale, depth + 1);
}

}  // namespace rmt::detail
