#include "rmtgaps/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numeric>

#include "rmtgaps/holeprob.hpp"

namespace rmt {

namespace {

double circ_mod(double x) {
  double r = std::fmod(x, two_pi);
  if (r < 0.0) r += two_pi;
  return r;
}

bool in_closed_arc(double theta, double start, double length) {
  return circ_mod(theta - start) <= length;
}

bool arcs_intersect(double s1, double l1, double s2, double l2) {
  return circ_mod(s2 - s1) <= l1 || circ_mod(s1 - s2) <= l2;
}

double sample_mean(const std::vector<double>& v) {
  if (v.empty()) return 0.0;
  return std::accumulate(v.begin(), v.end(), 0.0) / v.size();
}

double sample_variance(const std::vector<double>& v, double mean) {
  if (v.size() < 2) return 0.0;
  double acc = 0.0;
  for (double x : v) acc += (x - mean) * (x - mean);
  return acc / (v.size() - 1.0);
}

}  // namespace

void ExperimentConfig::validate() const {
  if (n < 1) throw InvalidInput("config: n must be positive");
  if (trials < 1) throw InvalidInput("config: trials must be positive");
  if (k < 1) throw InvalidInput("config: k must be positive");
  if (threads < 0) throw InvalidInput("config: threads must be nonnegative");
  if (ensemble == Ensemble::gue && !interval)
    throw InvalidInput("config: gue requires an interval");
  if (ensemble == Ensemble::cue && n > 2048)
    throw InvalidInput("config: cue sampling limited to n <= 2048");
}

std::vector<GapList> sample_gap_trials(const ExperimentConfig& cfg,
                                       bool parallel) {
  cfg.validate();
  const ExperimentConfig local = cfg;
  return run_trials<GapList>(
      cfg.trials,
      [&local](std::uint64_t i) {
        const Seed seed{local.seed_root, i};
        if (local.ensemble == Ensemble::cue)
          return extract_gaps_cue(sample_cue(local.n, seed));
        return extract_gaps_gue(sample_gue(local.n, seed), *local.interval);
      },
      parallel, cfg.threads);
}

EmpiricalDistribution run_gumbel(const ExperimentConfig& cfg, double c0_hat,
                                 const std::vector<GapList>* precomputed) {
  cfg.validate();
  std::vector<GapList> local;
  if (!precomputed) {
    local = sample_gap_trials(cfg);
    precomputed = &local;
  }
  const RescaleParams params(cfg.n, c0_hat);
  EmpiricalDistribution out;
  for (const GapList& gl : *precomputed) {
    if (static_cast<int>(gl.gaps.size()) < cfg.k) {
      ++out.degenerate_trials;
      continue;
    }
    const double m = gl.gaps[cfg.k - 1];
    const double tau = cfg.ensemble == Ensemble::cue
                           ? tau_from_gap_cue(params, m)
                           : tau_from_gap_gue(params, m, *cfg.interval);
    out.samples.push_back(tau);
  }
  std::sort(out.samples.begin(), out.samples.end());
  out.mean = sample_mean(out.samples);
  out.variance = sample_variance(out.samples, out.mean);
  const double location = cfg.ensemble == Ensemble::cue
                              ? params.c1()
                              : params.c2(*cfg.interval);
  const GumbelLaw law(location, cfg.k);
  out.ks_distance_vs_reference =
      ks_statistic(out.samples, [&law](double x) { return law.cdf(x); });
  return out;
}

namespace {

// sum over tuples of distinct indices of prod_j f_j(i_j), for k <= 3,
// by inclusion-exclusion over coincidence patterns
double distinct_tuple_sum(const std::vector<std::vector<double>>& f) {
  const std::size_t k = f.size();
  auto dot = [&](std::size_t a, std::size_t b) {
    double acc = 0.0;
    for (std::size_t i = 0; i < f[a].size(); ++i) acc += f[a][i] * f[b][i];
    return acc;
  };
  auto dot3 = [&](std::size_t a, std::size_t b, std::size_t c) {
    double acc = 0.0;
    for (std::size_t i = 0; i < f[a].size(); ++i)
      acc += f[a][i] * f[b][i] * f[c][i];
    return acc;
  };
  std::vector<double> s(k);
  for (std::size_t j = 0; j < k; ++j)
    s[j] = std::accumulate(f[j].begin(), f[j].end(), 0.0);
  if (k == 1) return s[0];
  if (k == 2) return s[0] * s[1] - dot(0, 1);
  if (k == 3)
    return s[0] * s[1] * s[2] - dot(0, 1) * s[2] - dot(0, 2) * s[1] -
           dot(1, 2) * s[0] + 2.0 * dot3(0, 1, 2);
  throw InvalidInput("poisson_factorial_check: k <= 3 supported");
}

}  // namespace

std::vector<PoissonCheckReport> poisson_factorial_check(
    const ExperimentConfig& cfg, const std::vector<double>& x_grid,
    double c0_hat, const std::vector<GapList>* precomputed) {
  cfg.validate();
  if (cfg.ensemble != Ensemble::cue)
    throw InvalidInput("poisson_factorial_check: cue only");
  if (x_grid.empty())
    throw InvalidInput("poisson_factorial_check: empty x grid");
  const std::size_t k = x_grid.size();
  std::vector<GapList> local;
  if (!precomputed) {
    ExperimentConfig c = cfg;
    local = sample_gap_trials(c);
    precomputed = &local;
  }
  const RescaleParams params(cfg.n, c0_hat);
  const double c1 = params.c1();

  // rescaled gap lists, one per trial
  std::vector<std::vector<double>> taus(precomputed->size());
  for (std::size_t t = 0; t < precomputed->size(); ++t) {
    taus[t].reserve((*precomputed)[t].gaps.size());
    for (double m : (*precomputed)[t].gaps)
      taus[t].push_back(tau_from_gap_cue(params, m));
  }

  std::vector<PoissonCheckReport> reports;
  for (double x : x_grid) {
    PoissonCheckReport rep;
    std::vector<double> stat(taus.size());
    std::map<int, int> counts;
    for (std::size_t t = 0; t < taus.size(); ++t) {
      double acc = 0.0;
      int cnt = 0;
      for (double tau : taus[t]) {
        if (tau > x) {
          acc += tau - x;
          ++cnt;
        }
      }
      stat[t] = acc;
      counts[cnt]++;
    }
    rep.empirical_factorial_moment = sample_mean(stat);
    rep.standard_error = std::sqrt(
        sample_variance(stat, rep.empirical_factorial_moment) / stat.size());
    rep.exact_target = 0.25 * cfg.n * std::sqrt(2.0 * params.ln_n) * two_pi *
                       std::exp(log_hole_cue(cfg.n, 0.5 * f_n(params, x))
                                    .log_prob);
    rep.asymptotic_target = std::exp(c1 - x);

    const double lambda = std::exp(c1 - x);
    int max_count = 0;
    for (const auto& [c, cnt] : counts) max_count = std::max(max_count, c);
    double tv = 0.0;
    double ref_mass = 0.0;
    for (int c = 0; c <= max_count + 2; ++c) {
      const double freq =
          counts.count(c) ? counts[c] / static_cast<double>(taus.size()) : 0.0;
      const double ref =
          std::exp(c * std::log(lambda) - lambda - std::lgamma(c + 1.0));
      rep.empirical_count_histogram[c] = freq;
      rep.poisson_reference[c] = ref;
      tv += std::abs(freq - ref);
      ref_mass += ref;
    }
    rep.tv_distance = 0.5 * (tv + (1.0 - ref_mass));
    reports.push_back(std::move(rep));
  }

  if (k >= 2) {
    PoissonCheckReport joint;
    std::vector<double> stat(taus.size());
    for (std::size_t t = 0; t < taus.size(); ++t) {
      std::vector<std::vector<double>> f(k);
      for (std::size_t j = 0; j < k; ++j) {
        f[j].resize(taus[t].size());
        for (std::size_t i = 0; i < taus[t].size(); ++i)
          f[j][i] = std::max(taus[t][i] - x_grid[j], 0.0);
      }
      stat[t] = distinct_tuple_sum(f);
    }
    joint.empirical_factorial_moment = sample_mean(stat);
    joint.standard_error = std::sqrt(
        sample_variance(stat, joint.empirical_factorial_moment) /
        stat.size());
    joint.exact_target = std::numeric_limits<double>::quiet_NaN();
    joint.asymptotic_target = 1.0;
    for (double x : x_grid) joint.asymptotic_target *= std::exp(c1 - x);
    joint.tv_distance = 0.0;
    reports.push_back(std::move(joint));
  }
  return reports;
}

MembershipResult sigma_membership_crosscheck(const CueSpectrum& s,
                                             const std::vector<double>& y_list,
                                             const std::vector<double>& a_list) {
  const std::size_t k = y_list.size();
  const std::size_t n = s.angles.size();
  if (k == 0 || a_list.size() != k)
    throw InvalidInput("membership: need matching nonempty y and a lists");
  if (n == 0 || !std::is_sorted(s.angles.begin(), s.angles.end()))
    throw InvalidInput("membership: spectrum must be nonempty and sorted");
  const std::vector<double>& th = s.angles;

  // definitional: each y_j must sit in the unique open gap that admits the
  // closed arc [y_j, y_j + a_j]; the gap indices must be distinct
  bool definitional = true;
  std::vector<std::size_t> used;
  for (std::size_t j = 0; j < k && definitional; ++j) {
    const double y = circ_mod(y_list[j]);
    auto it = std::upper_bound(th.begin(), th.end(), y);
    std::size_t gap;
    double lo, hi;
    if (it == th.begin() || it == th.end()) {
      gap = n - 1;  // wraparound gap (theta_{n-1}, theta_0 + 2pi)
      lo = th[n - 1];
      hi = th[0] + two_pi;
    } else {
      gap = static_cast<std::size_t>(it - th.begin()) - 1;
      lo = th[gap];
      hi = th[gap + 1];
    }
    double yy = y;
    if (yy < lo) yy += two_pi;
    if (!(yy > lo && yy + a_list[j] < hi)) {
      definitional = false;
      break;
    }
    used.push_back(gap);
  }
  if (definitional) {
    std::sort(used.begin(), used.end());
    definitional = std::adjacent_find(used.begin(), used.end()) == used.end();
  }

  // Conditions (i) disjoint arcs, (ii) no eigenangle in any arc,
  // (iii) spectrum separates every ordered pair of y's.
  bool conditional = true;
  for (std::size_t l = 0; l < k && conditional; ++l)
    for (std::size_t j = l + 1; j < k && conditional; ++j)
      if (arcs_intersect(circ_mod(y_list[l]), a_list[l], circ_mod(y_list[j]),
                         a_list[j]))
        conditional = false;
  for (std::size_t j = 0; j < k && conditional; ++j)
    for (double theta : th)
      if (in_closed_arc(theta, circ_mod(y_list[j]), a_list[j])) {
        conditional = false;
        break;
      }
  for (std::size_t p = 0; p < k && conditional; ++p)
    for (std::size_t q = 0; q < k && conditional; ++q) {
      const double yp = circ_mod(y_list[p]), yq = circ_mod(y_list[q]);
      if (!(yp < yq)) continue;
      bool inside = false, outside = false;
      for (double theta : th) {
        if (theta > yp && theta < yq) inside = true;
        if (theta < yp || theta > yq) outside = true;
      }
      if (!inside || !outside) conditional = false;
    }

  return {definitional, conditional};
}

MembershipResult sigma_membership_crosscheck(const GueSpectrum& s,
                                             const std::vector<double>& y_list,
                                             const std::vector<double>& a_list,
                                             const BulkInterval& I) {
  const std::size_t k = y_list.size();
  const std::size_t n = s.values.size();
  if (k == 0 || a_list.size() != k)
    throw InvalidInput("membership: need matching nonempty y and a lists");
  if (n == 0 || !std::is_sorted(s.values.begin(), s.values.end()))
    throw InvalidInput("membership: spectrum must be nonempty and sorted");
  const std::vector<double>& lam = s.values;
  for (double y : y_list)
    if (!(y > I.a && y < I.b)) return {false, false};

  bool definitional = true;
  std::vector<std::size_t> used;
  for (std::size_t j = 0; j < k && definitional; ++j) {
    const double y = y_list[j];
    auto it = std::upper_bound(lam.begin(), lam.end(), y);
    if (it == lam.begin() || it == lam.end()) {
      definitional = false;
      break;
    }
    const std::size_t gap = static_cast<std::size_t>(it - lam.begin()) - 1;
    const double lo = lam[gap], hi = lam[gap + 1];
    if (!(y > lo && y + a_list[j] < hi && lo >= I.a && hi <= I.b)) {
      definitional = false;
      break;
    }
    used.push_back(gap);
  }
  if (definitional) {
    std::sort(used.begin(), used.end());
    definitional = std::adjacent_find(used.begin(), used.end()) == used.end();
  }

  bool conditional = true;
  for (std::size_t l = 0; l < k && conditional; ++l)
    for (std::size_t j = l + 1; j < k && conditional; ++j)
      if (std::max(y_list[l], y_list[j]) <=
          std::min(y_list[l] + a_list[l], y_list[j] + a_list[j]))
        conditional = false;
  for (std::size_t j = 0; j < k && conditional; ++j)
    for (double v : lam)
      if (v >= y_list[j] && v <= y_list[j] + a_list[j]) {
        conditional = false;
        break;
      }
  if (conditional) {
    std::vector<double> pts = {I.a};
    pts.insert(pts.end(), y_list.begin(), y_list.end());
    pts.push_back(I.b);
    for (std::size_t p = 0; p < pts.size() && conditional; ++p)
      for (std::size_t q = 0; q < pts.size() && conditional; ++q) {
        if (!(pts[p] < pts[q])) continue;
        bool hit = false;
        for (double v : lam)
          if (v >= pts[p] && v <= pts[q]) {
            hit = true;
            break;
          }
        if (!hit) conditional = false;
      }
  }
  return {definitional, conditional};
}

double ks_statistic(const std::vector<double>& sorted_samples,
                    const std::function<double(double)>& cdf) {
  const std::size_t n = sorted_samples.size();
  if (n == 0) return 0.0;
  double sup = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double f = cdf(sorted_samples[i]);
    sup = std::max(sup, std::abs(f - static_cast<double>(i) / n));
    sup = std::max(sup, std::abs(f - static_cast<double>(i + 1) / n));
  }
  return sup;
}

std::string format_g17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_csv(const std::string& path,
               const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidInput("write_csv: cannot open " + path);
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (i) out << ',';
    out << header[i];
  }
  out << '\n';
  for (const auto& row : rows) {
    if (row.size() != header.size())
      throw InvalidInput("write_csv: row width does not match header");
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out << ',';
      out << format_g17(row[i]);
    }
    out << '\n';
  }
}

std::uint64_t content_hash(const std::string& text) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

}  // namespace rmt
