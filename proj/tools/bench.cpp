// Compares the serial reference path of the trial runner against the
// OpenMP path and reports timings plus an identity check on the outputs.

#include <chrono>
#include <cstdio>
#include <string>

#include "rmtgaps/harness.hpp"
#include "rmtgaps/samplers.hpp"

using namespace rmt;

namespace {

double time_gaps(const ExperimentConfig& cfg, bool parallel,
                 std::vector<GapList>& out) {
  const auto t0 = std::chrono::steady_clock::now();
  out = sample_gap_trials(cfg, parallel);
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

}  // namespace

int main(int argc, char** argv) {
  int n = 128, trials = 200;
  if (argc > 1) n = std::stoi(argv[1]);
  if (argc > 2) trials = std::stoi(argv[2]);

  for (const Ensemble ens : {Ensemble::cue, Ensemble::gue}) {
    ExperimentConfig cfg;
    cfg.ensemble = ens;
    cfg.n = n;
    cfg.trials = trials;
    cfg.seed_root = 20260824;
    if (ens == Ensemble::gue) cfg.interval = BulkInterval(-1.0, 1.0);

    std::vector<GapList> serial, parallel;
    const double ts = time_gaps(cfg, false, serial);
    const double tp = time_gaps(cfg, true, parallel);
    bool identical = serial.size() == parallel.size();
    for (std::size_t i = 0; identical && i < serial.size(); ++i)
      identical = serial[i].gaps == parallel[i].gaps;
    std::printf("%s n=%d trials=%d  serial %.3fs  openmp %.3fs  speedup %.2fx  outputs %s\n",
                ens == Ensemble::cue ? "cue" : "gue", n, trials, ts, tp,
                ts / tp, identical ? "identical" : "DIFFER");
    if (!identical) return 1;
  }
  return 0;
}
