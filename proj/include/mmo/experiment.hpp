#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "mmo/channel.hpp"
#include "mmo/config.hpp"
#include "mmo/objectives.hpp"

namespace mmo {

enum class Exec { Serial, Parallel };

using TrialFn = std::function<std::vector<double>(std::uint64_t seed)>;

// out[t] = fn(base_seed + t). Results are stored by index, so the parallel
// path gives the same bits as the serial one.
std::vector<std::vector<double>> run_trials(const TrialFn& fn, int trials, std::uint64_t base_seed, Exec exec);

struct Summary {
  double mean = 0.0;
  double stderr_ = 0.0;
};
// Serial reduction in trial order, one summary per metric column.
std::vector<Summary> summarize(const std::vector<std::vector<double>>& results);

struct SweepRow {
  double snr_db;
  std::string metric;
  double mean;
  double stderr_;
  int trials;
  std::uint64_t seed;
};

// Per-trial kernels. Each takes one seed and returns the metric columns named
// by metric_names(kind, ...).
std::vector<std::string> metric_names(const ExperimentConfig& cfg);
TrialFn make_trial(const ExperimentConfig& cfg, double snr_db);

std::vector<SweepRow> run_experiment(const ExperimentConfig& cfg, Exec exec = Exec::Parallel);
std::string to_csv(const std::vector<SweepRow>& rows);
// Writes the CSV to cfg.output_path (or `path` when non-empty).
void run(const ExperimentConfig& cfg, const std::string& path = "");

// Single-instance report for `mmo solve`.
std::string solve_report(const ExperimentConfig& cfg);

// Three-hop style chain evaluated under the true error statistics.
struct ChainOutcome {
  double capacity_bits = 0.0;
  double max_mse = 0.0;
  double sum_mse = 0.0;
};
ChainOutcome evaluate_chain_design(const std::vector<ProblemSpec>& truth, BoundMode mode, bool robust,
                                   const NamedObjective& objective);

ProblemSpec spec_from_draw(const ChannelDraw& draw, const Correlations& corr, double noise_var, double snr_db);

}  // namespace mmo
