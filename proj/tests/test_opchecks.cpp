#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>

#include "oracles.hpp"
#include "rmtgaps/holeprob.hpp"
#include "rmtgaps/opchecks.hpp"
#include "rmtgaps/rescaling.hpp"
#include "rmtgaps/samplers.hpp"

using namespace rmt;

namespace {

// Symmetric matrix with eigenvalues drawn uniformly from [0, cap].
Eigen::MatrixXd random_contraction(int n, double cap, Rng& rng) {
  Eigen::MatrixXd g(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) g(i, j) = rng.normal();
  const Eigen::MatrixXd q =
      Eigen::HouseholderQR<Eigen::MatrixXd>(g).householderQ();
  Eigen::VectorXd ev(n);
  for (int i = 0; i < n; ++i) ev(i) = cap * rng.uniform();
  return q * ev.asDiagonal() * q.transpose();
}

std::pair<ArcUnion, ArcUnion> random_disjoint_arc_pair(Rng& rng) {
  const double s1 = two_pi * rng.uniform();
  const double l1 = 0.1 + 0.8 * rng.uniform();
  const double s2 = std::fmod(s1 + l1 + 0.2 + rng.uniform(), two_pi);
  double l2 = 0.1 + 0.6 * rng.uniform();
  // keep the second arc clear of the first across the wrap point
  const double gap_back =
      std::fmod(s1 - s2 + two_pi, two_pi);
  if (l2 > gap_back - 0.05) l2 = std::max(0.05, gap_back - 0.05);
  return {{Arc{s1, l1}}, {Arc{s2, l2}}};
}

std::pair<IntervalUnion, IntervalUnion> random_disjoint_interval_pair(
    Rng& rng) {
  const double a = -2.0 + 1.5 * rng.uniform();
  const double b = a + 0.1 + 0.5 * rng.uniform();
  const double c = b + 0.05 + 0.5 * rng.uniform();
  const double d = c + 0.1 + 0.5 * rng.uniform();
  return {{Interval{a, b}}, {Interval{c, d}}};
}

}  // namespace

TEST_CASE("comparison bounds for identical operators") {
  Rng rng(Seed{21, 0});
  const Eigen::MatrixXd b = random_contraction(5, 0.8, rng);
  const ComparisonReport r = comparison_bounds({b, b});
  CHECK(r.lower == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(r.mid == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(r.upper == 1.0);
  CHECK(r.trace_bound_lhs == doctest::Approx(0.0).scale(1.0).epsilon(1e-10));
}

TEST_CASE("comparison bounds scalar case") {
  Eigen::MatrixXd a(1, 1), b(1, 1);
  a(0, 0) = 0.2;
  b(0, 0) = 0.1;
  const ComparisonReport r = comparison_bounds({a, b});
  CHECK(r.mid ==
        doctest::Approx(std::exp(0.1 / 0.9) * (0.8 / 0.9)).epsilon(1e-13));
  CHECK(r.lower == doctest::Approx(1.0 - 0.01 / 0.81).epsilon(1e-13));
  CHECK(r.lower <= r.mid);
  CHECK(r.mid <= r.upper);
}

TEST_CASE("comparison bounds hold on random pairs") {
  Rng rng(Seed{22, 0});
  for (int trial = 0; trial < 300; ++trial) {
    const int n = 1 + static_cast<int>(6.0 * rng.uniform());
    const Eigen::MatrixXd a = random_contraction(n, 1.0, rng);
    const Eigen::MatrixXd b = random_contraction(n, 0.95, rng);
    const ComparisonReport r = comparison_bounds({a, b});
    CHECK(r.mid <= r.upper + 1e-10);
    if (r.lower > 0.0) CHECK(r.mid >= r.lower - 1e-10);
    CHECK(r.trace_bound_lhs <= r.trace_bound_rhs + 1e-10);
  }
}

TEST_CASE("comparison bounds reject an expanding B") {
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(2, 2);
  Eigen::MatrixXd b = Eigen::MatrixXd::Identity(2, 2) * 1.5;
  CHECK_THROWS_AS(comparison_bounds({a, b}), InvalidInput);
}

TEST_CASE("lowest eigenvalue bound") {
  Eigen::MatrixXd half = Eigen::MatrixXd::Identity(1, 1) * 0.5;
  const EigenBoundResult r1 = lowest_eigen_bound(half);
  CHECK(r1.lhs == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(r1.rhs == doctest::Approx(0.5 * std::exp(-0.5)).epsilon(1e-13));
  CHECK(r1.holds);

  const EigenBoundResult r0 = lowest_eigen_bound(Eigen::MatrixXd::Zero(3, 3));
  CHECK(r0.lhs == doctest::Approx(1.0));
  CHECK(r0.rhs == doctest::Approx(std::exp(-1.0)).epsilon(1e-13));
  CHECK(r0.holds);

  Rng rng(Seed{23, 0});
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 1 + static_cast<int>(5.0 * rng.uniform());
    const EigenBoundResult r =
        lowest_eigen_bound(random_contraction(n, 0.95, rng));
    CHECK(r.holds);
  }
}

TEST_CASE("negative correlation of hole events") {
  // degenerate case: one of the sets empty gives exact equality
  const NegCorrResult eq = negative_correlation(6, ArcUnion{Arc{1.0, 0.5}},
                                                ArcUnion{});
  CHECK(eq.joint == doctest::Approx(eq.sum).epsilon(1e-12));
  CHECK(eq.holds);

  Rng rng(Seed{24, 0});
  for (int trial = 0; trial < 40; ++trial) {
    const int n = 2 + static_cast<int>(14.0 * rng.uniform());
    const auto [s1, s2] = random_disjoint_arc_pair(rng);
    CHECK(negative_correlation(n, s1, s2).holds);
    const auto [i1, i2] = random_disjoint_interval_pair(rng);
    CHECK(negative_correlation(n, i1, i2).holds);
  }
}

TEST_CASE("splitting ratio") {
  const double c0 = -0.4385;
  const SplittingResult single = splitting_ratio(64, {0.0}, {1.0}, c0);
  CHECK(single.ratio == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(single.trace_term == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));

  for (int n : {64, 256}) {
    const SplittingResult r =
        splitting_ratio(n, {0.0, 0.5}, {1.0, 4.0}, c0);
    CHECK(r.ratio <= 1.0 + 1e-10);
    CHECK(std::abs(r.trace_term) <= 1e-8);
  }
  CHECK_THROWS_AS(splitting_ratio(64, {0.0, 0.0}, {1.0, 1.0 + 1e-6}, c0),
                  InvalidInput);
  CHECK_THROWS_AS(splitting_ratio(64, {0.0}, {}, c0), InvalidInput);
}

TEST_CASE("occupancy probability basics") {
  // no occupied sets: plain hole probability
  CHECK(occupancy_hole(6, ArcUnion{Arc{0.0, 0.9}}, {}) ==
        doctest::Approx(gram_hole_cue(6, {Arc{0.0, 0.9}}).log_prob)
            .epsilon(1e-12));
  CHECK(occupancy_hole(3, IntervalUnion{Interval{-0.4, 0.4}}, {}) ==
        doctest::Approx(gram_hole_gue(3, {Interval{-0.4, 0.4}}).log_prob)
            .epsilon(1e-12));
  std::vector<ArcUnion> many(13, ArcUnion{Arc{0.0, 0.1}});
  CHECK_THROWS_AS(occupancy_hole(4, ArcUnion{Arc{3.0, 0.1}}, many),
                  InvalidInput);
  // warning parameter is accepted and left clean in a benign case
  std::string warning;
  occupancy_hole(6, ArcUnion{Arc{0.0, 0.5}},
                 {ArcUnion{Arc{1.0, 1.0}}, ArcUnion{Arc{3.0, 1.0}}}, &warning);
  CHECK(warning.empty());
}

TEST_CASE("occupancy probability against monte carlo") {
  const int n = 8, trials = 100000;
  const ArcUnion hole{Arc{0.0, 0.7}};
  const std::vector<ArcUnion> occupied{ArcUnion{Arc{1.2, 0.8}},
                                       ArcUnion{Arc{4.0, 1.0}}};
  const double p = std::exp(occupancy_hole(n, hole, occupied));
  int count = 0;
  for (int t = 0; t < trials; ++t) {
    const CueSpectrum s =
        sample_cue(n, Seed{31, static_cast<std::uint64_t>(t)});
    bool hole_empty = true, occ1 = false, occ2 = false;
    for (double a : s.angles) {
      if (a < 0.7) hole_empty = false;
      if (a >= 1.2 && a <= 2.0) occ1 = true;
      if (a >= 4.0 && a <= 5.0) occ2 = true;
    }
    count += hole_empty && occ1 && occ2;
  }
  const double freq = static_cast<double>(count) / trials;
  const double se = std::sqrt(p * (1.0 - p) / trials);
  CHECK(std::abs(freq - p) < 3.0 * se);
}

TEST_CASE("kernel comparison on a shared window") {
  const int n = 64;
  const double delta = 0.05;
  const HoleComparison r = cue_gue_hole_gap(n, 0.0, delta);
  CHECK(r.trace_b == doctest::Approx(-n * delta).epsilon(1e-10));
  CHECK(r.trace_a == doctest::Approx(-n * delta).epsilon(0.05));
  CHECK(std::abs(r.difference) < 0.05);
  CHECK(r.hs_diff < 0.5);
  CHECK_THROWS_AS(cue_gue_hole_gap(64, 2.5, 0.1), InvalidInput);
  CHECK_THROWS_AS(cue_gue_hole_gap(64, 0.0, 0.7), InvalidInput);
}

TEST_CASE("union lower bound") {
  const int n = 256;
  const double c0 = -0.4385;
  const BulkInterval I(-1.0, -0.5);
  const RescaleParams p(n, c0);
  const double a = g_n(p, 0.0) / s_of_interval(I);
  const LowerBoundResult r =
      union_hole_lower_bound(n, I, {-0.9}, {a}, 0.3, 1.0, c0);
  CHECK(r.holds);
  CHECK(r.lhs >= r.rhs);

  // width far outside the admissible window is rejected with an explanation
  CHECK_THROWS_AS(union_hole_lower_bound(n, I, {-0.9}, {0.5}, 0.3, 1.0, c0),
                  InvalidInput);
  // separation violation: two centers closer than eps0 / ln n
  CHECK_THROWS_AS(
      union_hole_lower_bound(n, I, {-0.9, -0.9 + 1e-4}, {a, a}, 0.3, 1.0, c0),
      InvalidInput);
}
