#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mmo/channel.hpp"
#include "mmo/mmop.hpp"

namespace mmo {

enum class ExperimentKind { BoundGap, SumMseCompare, MultiHopCapacity, MultiHopMaxMse, Solve };

const char* to_string(ExperimentKind kind);

struct ExperimentConfig {
  ExperimentKind experiment = ExperimentKind::Solve;
  ExpCorrModel model;
  std::vector<double> snr_db_grid{0, 5, 10, 15, 20, 25, 30};
  int trials = 500;
  std::uint64_t seed = 42;
  int hops = 3;
  std::string objective;  // empty: the experiment's natural objective
  BoundMode mode = BoundMode::Lower;
  std::string output_path;
  double noise_var = 1.0;
  int max_iters = 100;
  double tol = 1e-8;

  std::vector<std::string> problems() const;
  void validate() const;
  std::string effective_objective() const;
};

// key = value lines, '#' comments, [model] and [sweep] sections.
ExperimentConfig parse_config_text(const std::string& text);
ExperimentConfig parse_config(const std::string& path);

// "0:5:30", "5,15,25" or a single value.
std::vector<double> parse_snr_grid(const std::string& text);

// MMO_SEED, when set, replaces the configured seed.
void apply_env_overrides(ExperimentConfig& cfg);

}  // namespace mmo
