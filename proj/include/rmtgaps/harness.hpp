#pragma once

#include <cstdint>
#include <exception>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "rmtgaps/opchecks.hpp"
#include "rmtgaps/rescaling.hpp"
#include "rmtgaps/samplers.hpp"
#include "rmtgaps/types.hpp"

namespace rmt {

struct ExperimentConfig {
  Ensemble ensemble = Ensemble::cue;
  int n = 64;
  int trials = 1000;
  int k = 1;  // gap order
  std::optional<BulkInterval> interval;  // required for gue
  std::uint64_t seed_root = 0;
  std::vector<double> x_grid;
  std::string output_path;
  int threads = 0;  // 0 = library default; affects speed only

  void validate() const;
};

struct EmpiricalDistribution {
  std::vector<double> samples;  // sorted, finite entries only
  double mean = 0.0;
  double variance = 0.0;
  double ks_distance_vs_reference = 0.0;
  int degenerate_trials = 0;  // trials with fewer than k gaps (tau = -inf)
};

struct PoissonCheckReport {
  double empirical_factorial_moment = 0.0;
  double standard_error = 0.0;
  double exact_target = 0.0;       // finite-n determinant value (k = 1)
  double asymptotic_target = 0.0;  // Poisson-limit product
  std::map<int, double> empirical_count_histogram;  // frequencies, sum 1
  std::map<int, double> poisson_reference;          // Poisson(e^{c1-x}) pmf
  double tv_distance = 0.0;  // histogram vs reference
};

// Runs `trials` independent evaluations of fn(trial_index) and collects the
// results by index. The OpenMP path and the serial reference path produce
// identical output by construction; `parallel` selects between them.
template <class T, class Fn>
std::vector<T> run_trials(int trials, Fn&& fn, bool parallel,
                          int threads = 0) {
  if (trials < 0) throw InvalidInput("run_trials: negative trial count");
  std::vector<T> out(static_cast<std::size_t>(trials));
#ifdef _OPENMP
  if (parallel) {
    std::exception_ptr first_error;
#pragma omp parallel for schedule(dynamic) \
    num_threads(threads > 0 ? threads : omp_get_max_threads())
    for (int i = 0; i < trials; ++i) {
      try {
        out[i] = fn(static_cast<std::uint64_t>(i));
      } catch (...) {
#pragma omp critical
        if (!first_error) first_error = std::current_exception();
      }
    }
    if (first_error) std::rethrow_exception(first_error);
    return out;
  }
#else
  (void)parallel;
  (void)threads;
#endif
  for (int i = 0; i < trials; ++i) out[i] = fn(static_cast<std::uint64_t>(i));
  return out;
}

// One gap list per trial, decreasing. For GUE the gaps are restricted to the
// configured interval.
std::vector<GapList> sample_gap_trials(const ExperimentConfig& cfg,
                                       bool parallel = true);

// Per-trial k-th largest gap mapped through the tau rescaling, aggregated
// against the Gumbel-k reference with location c1 (CUE) or c2 (GUE).
EmpiricalDistribution run_gumbel(const ExperimentConfig& cfg, double c0_hat,
                                 const std::vector<GapList>* precomputed = nullptr);

// Lemma-2-style factorial moment and Poisson count statistics for CUE at the
// points of x_grid (k = len(x_grid)). Reports per-x for k = 1; the joint
// product statistic when x_grid has several entries.
std::vector<PoissonCheckReport> poisson_factorial_check(
    const ExperimentConfig& cfg, const std::vector<double>& x_grid,
    double c0_hat, const std::vector<GapList>* precomputed = nullptr);

// Membership of (y_1..y_k) in Sigma_k(a_1..a_k) evaluated two ways:
// by the defining disjoint-union construction and by the equivalent
// condition list. Returns {definitional, conditional}.
struct MembershipResult {
  bool definitional;
  bool conditional;
  bool agree() const { return definitional == conditional; }
};

MembershipResult sigma_membership_crosscheck(const CueSpectrum& s,
                                             const std::vector<double>& y_list,
                                             const std::vector<double>& a_list);

MembershipResult sigma_membership_crosscheck(const GueSpectrum& s,
                                             const std::vector<double>& y_list,
                                             const std::vector<double>& a_list,
                                             const BulkInterval& I);

// Kolmogorov-Smirnov sup-distance between sorted samples and a reference CDF.
double ks_statistic(const std::vector<double>& sorted_samples,
                    const std::function<double(double)>& cdf);

// CSV with a header row, 17 significant digits, '.' separator, LF endings.
void write_csv(const std::string& path,
               const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows);

std::string format_g17(double v);

// FNV-1a content hash used in JSON summaries.
std::uint64_t content_hash(const std::string& text);

}  // namespace rmt
