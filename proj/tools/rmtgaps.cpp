// Command-line front end: exact hole probabilities, constant estimation,
// sampling, the Gumbel and Poisson experiments, and the lemma check suites.
// Every subcommand emits CSV rows (with --output) plus a JSON summary on
// stdout. Exit codes: 0 success, 1 invalid input, 2 numerical failure.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "rmtgaps/harness.hpp"
#include "rmtgaps/holeprob.hpp"
#include "rmtgaps/kernels.hpp"
#include "rmtgaps/opchecks.hpp"
#include "rmtgaps/rescaling.hpp"
#include "rmtgaps/rng.hpp"
#include "rmtgaps/samplers.hpp"

using json = nlohmann::json;
using namespace rmt;

namespace {

constexpr const char* version_string = "0.1.0";

struct CsvOut {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;

  std::string text() const {
    std::ostringstream os;
    for (std::size_t i = 0; i < header.size(); ++i)
      os << (i ? "," : "") << header[i];
    os << '\n';
    for (const auto& row : rows) {
      for (std::size_t i = 0; i < row.size(); ++i)
        os << (i ? "," : "") << format_g17(row[i]);
      os << '\n';
    }
    return os.str();
  }
};

int g_threads = 0;

void emit(const std::string& subcommand, const json& config,
          const json& results, const std::vector<std::string>& warnings,
          const CsvOut& csv, const std::string& output_path) {
  const std::string text = csv.text();
  if (!output_path.empty()) {
    std::ofstream out(output_path, std::ios::binary);
    if (!out) throw InvalidInput("cannot open output path " + output_path);
    out << text;
  }
  json summary;
  summary["config"] = config;
  summary["config"]["subcommand"] = subcommand;
  summary["results"] = results;
  summary["warnings"] = warnings;
  summary["version"] = version_string;
  summary["csv_hash"] = content_hash(text);
  std::cout << summary.dump(2) << "\n";
}

ArcUnion parse_arcs(const std::vector<std::string>& specs) {
  ArcUnion arcs;
  for (const std::string& s : specs) {
    const auto pos = s.find(':');
    if (pos == std::string::npos)
      throw InvalidInput("arc spec must be start:length");
    arcs.push_back(Arc{std::stod(s.substr(0, pos)),
                       std::stod(s.substr(pos + 1))});
  }
  return arcs;
}

IntervalUnion parse_intervals(const std::vector<std::string>& specs) {
  IntervalUnion ivs;
  for (const std::string& s : specs) {
    const auto pos = s.find(':');
    if (pos == std::string::npos)
      throw InvalidInput("interval spec must be lo:hi");
    ivs.push_back(Interval{std::stod(s.substr(0, pos)),
                           std::stod(s.substr(pos + 1))});
  }
  return ivs;
}

double default_c0() {
  return estimate_c0({0.4, 0.6, 0.8}, {50, 100, 200, 400}).c0_hat;
}

// ---- subcommand bodies ----

int cmd_hole(const std::string& ensemble, int n, double arc_size,
             const std::vector<std::string>& arc_specs,
             const std::vector<std::string>& interval_specs, int quad_order,
             const std::string& output) {
  CsvOut csv;
  json cfg{{"ensemble", ensemble}, {"n", n}};
  HoleResult r{};
  double measure = 0.0;
  if (ensemble == "cue") {
    if (!arc_specs.empty()) {
      const ArcUnion arcs = parse_arcs(arc_specs);
      for (const Arc& a : arcs) measure += a.length;
      r = gram_hole_cue(n, arcs);
    } else {
      if (!(arc_size > 0.0)) throw InvalidInput("need --arc-size or --arcs");
      measure = arc_size;
      r = log_hole_cue(n, 0.5 * arc_size);
    }
  } else if (ensemble == "gue") {
    const IntervalUnion ivs = parse_intervals(interval_specs);
    if (ivs.empty()) throw InvalidInput("gue needs --intervals");
    for (const Interval& iv : ivs) measure += iv.hi - iv.lo;
    r = gram_hole_gue(n, ivs, quad_order);
  } else {
    throw InvalidInput("ensemble must be cue or gue");
  }
  csv.header = {"n", "set_measure", "log_prob", "min_pivot"};
  csv.rows.push_back({static_cast<double>(n), measure, r.log_prob,
                      r.min_pivot});
  emit("hole", cfg,
       json{{"log_prob", r.log_prob}, {"min_pivot", r.min_pivot}}, {}, csv,
       output);
  return 0;
}

int cmd_c0(const std::vector<double>& alphas, const std::vector<int>& n_grid,
           const std::string& output) {
  CsvOut csv;
  csv.header = {"alpha", "n", "log_d", "residual"};
  for (double alpha : alphas)
    for (int n : n_grid) {
      const double ld = log_hole_cue(n, alpha).log_prob;
      csv.rows.push_back(
          {alpha, static_cast<double>(n), ld,
           ld - asymptotic_log_dn(n, alpha, 0.0)});
    }
  const C0Estimate est = estimate_c0(alphas, n_grid);
  emit("c0", json{{"alphas", alphas}, {"n_grid", n_grid}},
       json{{"c0_hat", est.c0_hat}, {"spread", est.spread}}, {}, csv, output);
  return 0;
}

int cmd_sample(const std::string& ensemble, int n, int trials,
               std::uint64_t seed, const std::vector<double>& interval,
               const std::string& what, const std::string& output) {
  ExperimentConfig cfg;
  cfg.ensemble = ensemble == "gue" ? Ensemble::gue : Ensemble::cue;
  cfg.n = n;
  cfg.trials = trials;
  cfg.seed_root = seed;
  cfg.threads = g_threads;
  if (cfg.ensemble == Ensemble::gue) {
    if (interval.size() != 2) throw InvalidInput("gue needs --interval a b");
    cfg.interval = BulkInterval(interval[0], interval[1]);
  }
  cfg.validate();
  CsvOut csv;
  csv.header = {"trial", "index", "value"};
  if (what == "gaps") {
    const auto gap_lists = sample_gap_trials(cfg);
    for (int t = 0; t < trials; ++t)
      for (std::size_t i = 0; i < gap_lists[t].gaps.size(); ++i)
        csv.rows.push_back({static_cast<double>(t), static_cast<double>(i),
                            gap_lists[t].gaps[i]});
  } else {
    const auto values = run_trials<std::vector<double>>(
        trials,
        [&](std::uint64_t t) {
          if (cfg.ensemble == Ensemble::cue)
            return sample_cue(n, Seed{seed, t}).angles;
          return sample_gue(n, Seed{seed, t}).values;
        },
        true, g_threads);
    for (int t = 0; t < trials; ++t)
      for (std::size_t i = 0; i < values[t].size(); ++i)
        csv.rows.push_back(
            {static_cast<double>(t), static_cast<double>(i), values[t][i]});
  }
  emit("sample",
       json{{"ensemble", ensemble}, {"n", n}, {"trials", trials},
            {"seed", seed}, {"what", what}},
       json{{"rows", csv.rows.size()}}, {}, csv, output);
  return 0;
}

int cmd_gumbel(const std::string& ensemble, int n, int k, int trials,
               std::uint64_t seed, const std::vector<double>& interval,
               double c0, const std::string& output) {
  ExperimentConfig cfg;
  cfg.ensemble = ensemble == "gue" ? Ensemble::gue : Ensemble::cue;
  cfg.n = n;
  cfg.k = k;
  cfg.trials = trials;
  cfg.seed_root = seed;
  cfg.threads = g_threads;
  if (cfg.ensemble == Ensemble::gue) {
    if (interval.size() != 2) throw InvalidInput("gue needs --interval a b");
    cfg.interval = BulkInterval(interval[0], interval[1]);
  }
  cfg.validate();
  if (std::isnan(c0)) c0 = default_c0();

  const auto gap_lists = sample_gap_trials(cfg);
  const RescaleParams params(n, c0);
  CsvOut csv;
  csv.header = {"trial", "tau"};
  for (int t = 0; t < trials; ++t) {
    double tau = -std::numeric_limits<double>::infinity();
    const auto& gaps = gap_lists[t].gaps;
    if (static_cast<int>(gaps.size()) >= k) {
      const double m = gaps[k - 1];
      tau = cfg.ensemble == Ensemble::cue
                ? tau_from_gap_cue(params, m)
                : tau_from_gap_gue(params, m, *cfg.interval);
    }
    csv.rows.push_back({static_cast<double>(t), tau});
  }
  const EmpiricalDistribution dist = run_gumbel(cfg, c0, &gap_lists);
  const double location = cfg.ensemble == Ensemble::cue
                              ? params.c1()
                              : params.c2(*cfg.interval);
  emit("gumbel",
       json{{"ensemble", ensemble}, {"n", n}, {"k", k}, {"trials", trials},
            {"seed", seed}, {"c0_hat", c0}},
       json{{"mean", dist.mean},
            {"variance", dist.variance},
            {"ks_distance", dist.ks_distance_vs_reference},
            {"degenerate_trials", dist.degenerate_trials},
            {"gumbel_location", location}},
       {}, csv, output);
  return 0;
}

int cmd_poisson(int n, int trials, std::uint64_t seed,
                const std::vector<double>& x_grid, double c0,
                const std::string& output) {
  ExperimentConfig cfg;
  cfg.ensemble = Ensemble::cue;
  cfg.n = n;
  cfg.k = static_cast<int>(x_grid.size());
  cfg.trials = trials;
  cfg.seed_root = seed;
  cfg.threads = g_threads;
  cfg.validate();
  if (std::isnan(c0)) c0 = default_c0();
  const auto reports = poisson_factorial_check(cfg, x_grid, c0);
  CsvOut csv;
  csv.header = {"x",           "empirical_moment", "standard_error",
                "exact_target", "asymptotic_target", "tv_distance"};
  json jreports = json::array();
  for (std::size_t i = 0; i < reports.size(); ++i) {
    const auto& r = reports[i];
    const double x =
        i < x_grid.size() ? x_grid[i] : std::numeric_limits<double>::quiet_NaN();
    csv.rows.push_back({x, r.empirical_factorial_moment, r.standard_error,
                        r.exact_target, r.asymptotic_target, r.tv_distance});
    json hist, ref;
    for (const auto& [count, freq] : r.empirical_count_histogram)
      hist[std::to_string(count)] = freq;
    for (const auto& [count, p] : r.poisson_reference)
      ref[std::to_string(count)] = p;
    jreports.push_back(json{{"empirical_moment", r.empirical_factorial_moment},
                            {"standard_error", r.standard_error},
                            {"exact_target", r.exact_target},
                            {"asymptotic_target", r.asymptotic_target},
                            {"tv_distance", r.tv_distance},
                            {"count_histogram", hist},
                            {"poisson_reference", ref}});
  }
  emit("poisson",
       json{{"n", n}, {"trials", trials}, {"seed", seed},
            {"x_grid", x_grid}, {"c0_hat", c0}},
       json{{"reports", jreports}}, {}, csv, output);
  return 0;
}

// Random generators for the check suites.

ArcUnion random_disjoint_arc_pair(Rng& rng, Arc& first, Arc& second) {
  for (;;) {
    first = Arc{two_pi * rng.uniform(), 0.2 + 1.0 * rng.uniform()};
    second = Arc{two_pi * rng.uniform(), 0.2 + 1.0 * rng.uniform()};
    try {
      validate_arc_union({first, second});
      return {first, second};
    } catch (const InvalidInput&) {
    }
  }
}

void random_disjoint_interval_pair(Rng& rng, Interval& first,
                                   Interval& second) {
  for (;;) {
    const double a1 = -1.5 + 3.0 * rng.uniform();
    const double a2 = -1.5 + 3.0 * rng.uniform();
    first = Interval{a1, a1 + 0.05 + 0.5 * rng.uniform()};
    second = Interval{a2, a2 + 0.05 + 0.5 * rng.uniform()};
    if (first.hi > 1.5 || second.hi > 1.5) continue;
    if (first.hi <= second.lo || second.hi <= first.lo) return;
  }
}

Eigen::MatrixXd random_contraction(Rng& rng, int dim, double radius) {
  Eigen::MatrixXd m(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j <= i; ++j) m(i, j) = m(j, i) = rng.normal();
  const Eigen::VectorXd ev =
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(m).eigenvalues();
  const double top = std::max(std::abs(ev(0)), std::abs(ev(dim - 1)));
  return m * (radius / std::max(top, 1e-12));
}

int cmd_checks(const std::string& suite, const std::string& ensemble, int n,
               int instances, std::uint64_t seed, double c0,
               const std::string& output) {
  CsvOut csv;
  json results;
  std::vector<std::string> warnings;
  int violations = 0;
  Rng rng(Seed{seed, 0x5eedULL});

  if (suite == "lemma4") {
    csv.header = {"instance", "joint", "sum", "slack"};
    for (int i = 0; i < instances; ++i) {
      NegCorrResult r{};
      if (ensemble == "gue") {
        Interval a{}, b{};
        random_disjoint_interval_pair(rng, a, b);
        r = negative_correlation(n, IntervalUnion{a}, IntervalUnion{b});
      } else {
        Arc a{}, b{};
        random_disjoint_arc_pair(rng, a, b);
        r = negative_correlation(n, ArcUnion{a}, ArcUnion{b});
      }
      if (!r.holds) ++violations;
      csv.rows.push_back({static_cast<double>(i), r.joint, r.sum,
                          r.sum - r.joint});
    }
  } else if (suite == "lemma6") {
    csv.header = {"instance",     "lower",     "mid",
                  "slack_lower",  "slack_upper", "trace_lhs", "trace_rhs"};
    for (int i = 0; i < instances; ++i) {
      const int dim = 1 + static_cast<int>(rng.uniform() * 8);
      const Eigen::MatrixXd b = random_contraction(rng, dim, 0.9);
      Eigen::MatrixXd a = b + random_contraction(rng, dim, 0.05);
      const Eigen::VectorXd ev =
          Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(a).eigenvalues();
      if (ev(dim - 1) > 1.0) a *= 1.0 / (ev(dim - 1) + 1e-9);
      const ComparisonReport r = comparison_bounds(SymOpPair{a, b});
      const double s1 = r.mid - r.lower, s2 = r.upper - r.mid;
      const double s3 = r.trace_bound_rhs - r.trace_bound_lhs;
      if (s1 < -1e-10 || s2 < -1e-10 || s3 < -1e-10) ++violations;
      csv.rows.push_back({static_cast<double>(i), r.lower, r.mid, s1, s2,
                          r.trace_bound_lhs, r.trace_bound_rhs});
    }
  } else if (suite == "lemma7") {
    csv.header = {"instance", "lhs", "rhs", "holds"};
    for (int i = 0; i < instances; ++i) {
      const int dim = 1 + static_cast<int>(rng.uniform() * 8);
      const EigenBoundResult r =
          lowest_eigen_bound(random_contraction(rng, dim, 0.95));
      if (!r.holds) ++violations;
      csv.rows.push_back({static_cast<double>(i), r.lhs, r.rhs,
                          r.holds ? 1.0 : 0.0});
    }
  } else if (suite == "lemma9") {
    const RescaleParams params(n, 0.0);
    csv.header = {"w", "lhs", "rhs", "holds"};
    for (double w : {1.1, 1.25, 1.5, 1.75, 2.0}) {
      const Lemma9Result r = check_lemma9(params, 0.0, w);
      if (!r.holds) ++violations;
      csv.rows.push_back({w, r.lhs, r.rhs, r.holds ? 1.0 : 0.0});
    }
  } else if (suite == "splitting") {
    if (std::isnan(c0)) c0 = default_c0();
    csv.header = {"n", "ratio", "trace_term"};
    const SplittingResult r =
        splitting_ratio(n, {0.0, 0.5}, {1.0, 4.0}, c0);
    if (!(r.ratio <= 1.0 + 1e-10) || !(std::abs(r.trace_term) <= 1e-8))
      ++violations;
    csv.rows.push_back({static_cast<double>(n), r.ratio, r.trace_term});
  } else if (suite == "lemma12") {
    csv.header = {"n",      "p_gue",  "p_cue",  "difference",
                  "hs_diff", "trace_a", "trace_b"};
    const double delta_n = std::sqrt(std::log(n)) / n;
    const HoleComparison r = cue_gue_hole_gap(n, 0.0, delta_n);
    csv.rows.push_back({static_cast<double>(n), r.p_gue, r.p_cue,
                        r.difference, r.hs_diff, r.trace_a, r.trace_b});
  } else if (suite == "lemma14") {
    if (std::isnan(c0)) c0 = default_c0();
    const RescaleParams params(n, c0);
    const BulkInterval I(-1.0, -0.5);
    const double a = g_n(params, 0.0) / s_of_interval(I);
    const LowerBoundResult r =
        union_hole_lower_bound(n, I, {-0.9}, {a}, 0.3, 1.0, c0);
    if (!r.holds) ++violations;
    csv.header = {"n", "lhs", "rhs", "holds"};
    csv.rows.push_back({static_cast<double>(n), r.lhs, r.rhs,
                        r.holds ? 1.0 : 0.0});
  } else if (suite == "membership") {
    csv.header = {"instance", "definitional", "conditional", "agree"};
    for (int i = 0; i < instances; ++i) {
      const int dim = 3 + static_cast<int>(rng.uniform() * 6);
      const int k = 1 + static_cast<int>(rng.uniform() * 3);
      std::vector<double> ys(k), as(k);
      MembershipResult r{};
      if (ensemble == "gue") {
        const BulkInterval I(-1.2, 1.2);
        const GueSpectrum s = sample_gue(dim, Seed{seed, 1000ull + i});
        for (int j = 0; j < k; ++j) {
          ys[j] = -1.2 + 2.4 * rng.uniform();
          as[j] = 0.02 + 0.8 * rng.uniform();
        }
        r = sigma_membership_crosscheck(s, ys, as, I);
      } else {
        const CueSpectrum s = sample_cue(dim, Seed{seed, 1000ull + i});
        for (int j = 0; j < k; ++j) {
          ys[j] = two_pi * rng.uniform();
          as[j] = 0.05 + 1.5 * rng.uniform();
        }
        r = sigma_membership_crosscheck(s, ys, as);
      }
      if (!r.agree()) ++violations;
      csv.rows.push_back({static_cast<double>(i), r.definitional ? 1.0 : 0.0,
                          r.conditional ? 1.0 : 0.0, r.agree() ? 1.0 : 0.0});
    }
  } else {
    throw InvalidInput("unknown suite " + suite);
  }

  results["instances"] = csv.rows.size();
  results["violations"] = violations;
  results["all_hold"] = violations == 0;
  emit("checks",
       json{{"suite", suite}, {"ensemble", ensemble}, {"n", n},
            {"instances", instances}, {"seed", seed}},
       results, warnings, csv, output);
  return violations == 0 ? 0 : 2;
}

int cmd_limits(int n, const std::vector<double>& x_grid,
               const std::vector<double>& interval, double c0,
               const std::string& output) {
  if (std::isnan(c0)) c0 = default_c0();
  const RescaleParams params(n, c0);
  std::optional<BulkInterval> I;
  if (interval.size() == 2) I.emplace(interval[0], interval[1]);
  CsvOut csv;
  csv.header = {"x", "lemma1", "lemma8_z0", "lemma8_z1", "lemma10"};
  for (double x : x_grid) {
    const double l10 =
        I ? check_lemma10(params, x, *I)
          : std::numeric_limits<double>::quiet_NaN();
    csv.rows.push_back({x, check_lemma1(params, x), check_lemma8(params, x, 0.0),
                        check_lemma8(params, x, 1.0), l10});
  }
  emit("limits", json{{"n", n}, {"x_grid", x_grid}, {"c0_hat", c0}},
       json{{"rows", csv.rows.size()}}, {}, csv, output);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exact finite-n spectral gap statistics for circular and "
               "Gaussian unitary ensembles"};
  app.set_config("--config");
  app.require_subcommand(1);

  app.add_option("--threads", g_threads,
                 "worker thread count (0 = library default; results never "
                 "depend on it)")
      ->envname("RMTGAPS_THREADS");

  std::string ensemble = "cue", output, what = "spectrum", suite;
  int n = 64, trials = 1000, k = 1, instances = 100, quad_order = 0;
  std::uint64_t seed = 0;
  double arc_size = 0.0, c0 = std::numeric_limits<double>::quiet_NaN();
  std::vector<std::string> arc_specs, interval_specs;
  std::vector<double> alphas{0.4, 0.6, 0.8}, x_grid{0.0}, interval;
  std::vector<int> n_grid{50, 100, 200, 400};

  auto* hole = app.add_subcommand("hole", "exact hole probabilities");
  hole->add_option("--ensemble", ensemble);
  hole->add_option("--n", n)->required();
  hole->add_option("--arc-size", arc_size, "single-arc length (cue)");
  hole->add_option("--arcs", arc_specs, "start:length list (cue)");
  hole->add_option("--intervals", interval_specs, "lo:hi list (gue)");
  hole->add_option("--quad-order", quad_order);
  hole->add_option("--output", output);

  auto* c0cmd = app.add_subcommand("c0", "estimate the expansion constant");
  c0cmd->add_option("--alphas", alphas);
  c0cmd->add_option("--n-grid", n_grid);
  c0cmd->add_option("--output", output);

  auto* sample = app.add_subcommand("sample", "emit spectra or gap lists");
  sample->add_option("--ensemble", ensemble);
  sample->add_option("--n", n)->required();
  sample->add_option("--trials", trials);
  sample->add_option("--seed", seed);
  sample->add_option("--interval", interval)->expected(2);
  sample->add_option("--what", what)->check(CLI::IsMember({"spectrum", "gaps"}));
  sample->add_option("--output", output);

  auto* gumbel = app.add_subcommand("gumbel", "k-th largest gap experiment");
  gumbel->add_option("--ensemble", ensemble);
  gumbel->add_option("--n", n)->required();
  gumbel->add_option("--k", k);
  gumbel->add_option("--trials", trials);
  gumbel->add_option("--seed", seed);
  gumbel->add_option("--interval", interval)->expected(2);
  gumbel->add_option("--c0", c0);
  gumbel->add_option("--output", output);

  auto* poisson = app.add_subcommand("poisson", "factorial moment and count "
                                                "statistics");
  poisson->add_option("--n", n)->required();
  poisson->add_option("--trials", trials);
  poisson->add_option("--seed", seed);
  poisson->add_option("--x-grid", x_grid);
  poisson->add_option("--c0", c0);
  poisson->add_option("--output", output);

  auto* checks = app.add_subcommand("checks", "lemma check suites");
  checks->add_option("--suite", suite)->required()->check(CLI::IsMember(
      {"lemma4", "lemma6", "lemma7", "lemma9", "splitting", "lemma12",
       "lemma14", "membership"}));
  checks->add_option("--ensemble", ensemble);
  checks->add_option("--n", n);
  checks->add_option("--instances", instances);
  checks->add_option("--seed", seed);
  checks->add_option("--c0", c0);
  checks->add_option("--output", output);

  auto* limits = app.add_subcommand("limits", "finite-n limit tables");
  limits->add_option("--n", n)->required();
  limits->add_option("--x-grid", x_grid);
  limits->add_option("--interval", interval)->expected(2);
  limits->add_option("--c0", c0);
  limits->add_option("--output", output);

  CLI11_PARSE(app, argc, argv);

  try {
    if (hole->parsed())
      return cmd_hole(ensemble, n, arc_size, arc_specs, interval_specs,
                      quad_order, output);
    if (c0cmd->parsed()) return cmd_c0(alphas, n_grid, output);
    if (sample->parsed())
      return cmd_sample(ensemble, n, trials, seed, interval, what, output);
    if (gumbel->parsed())
      return cmd_gumbel(ensemble, n, k, trials, seed, interval, c0, output);
    if (poisson->parsed())
      return cmd_poisson(n, trials, seed, x_grid, c0, output);
    if (checks->parsed())
      return cmd_checks(suite, ensemble, n, instances, seed, c0, output);
    if (limits->parsed())
      return cmd_limits(n, x_grid, interval, c0, output);
  } catch (const InvalidInput& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return 1;
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 2;
  }
  return 1;
}
