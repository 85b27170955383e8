#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace rmt {

inline constexpr double two_pi = 6.283185307179586476925286766559;

struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct InvalidInput : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Arc [start, start+length] (mod 2pi) on the circle.
struct Arc {
  double start;   // in [0, 2pi)
  double length;  // in (0, 2pi)
};

using ArcUnion = std::vector<Arc>;

struct Interval {
  double lo;
  double hi;
};

using IntervalUnion = std::vector<Interval>;

// Compact subinterval of the bulk (-2, 2).
struct BulkInterval {
  double a;
  double b;
  BulkInterval(double a_, double b_) : a(a_), b(b_) {
    if (!(-2.0 < a && a < b && b < 2.0))
      throw InvalidInput("BulkInterval must satisfy -2 < a < b < 2");
  }
};

enum class HoleMethod { toeplitz, gram_cue, gram_gue };

struct HoleResult {
  double log_prob;   // natural log, <= 0 (may be -inf)
  HoleMethod method;
  double min_pivot;  // smallest Cholesky/Levinson pivot seen
};

// Sorted eigenangle configuration in [0, 2pi).
struct CueSpectrum {
  std::vector<double> angles;
};

// Sorted eigenvalue configuration on the real line.
struct GueSpectrum {
  std::vector<double> values;
};

// Decreasing list of positive gaps.
struct GapList {
  std::vector<double> gaps;
};

// Validates that arcs are pairwise disjoint mod 2pi with total length < 2pi.
void validate_arc_union(const ArcUnion& arcs);

// Validates pairwise disjoint intervals with lo < hi.
void validate_interval_union(const IntervalUnion& intervals);

// Sorts arcs and merges touching/overlapping ones; the hole probability
// depends only on the union as a set.
ArcUnion normalize_arc_union(const ArcUnion& arcs);

IntervalUnion normalize_interval_union(const IntervalUnion& intervals);

}  // namespace rmt
