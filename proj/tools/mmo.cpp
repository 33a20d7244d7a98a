#include <cstdint>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "mmo/config.hpp"
#include "mmo/error.hpp"
#include "mmo/experiment.hpp"
#include "mmo/verify.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Robust MIMO transceiver design: closed-form solver, sweeps and checks"};
  app.require_subcommand(1);

  std::string config_path, out_path;
  std::uint64_t seed = 42;
  std::string inject;

  auto* solve = app.add_subcommand("solve", "Solve one channel draw and print the design");
  solve->add_option("--config", config_path, "Config file")->required()->check(CLI::ExistingFile);

  auto* sweep = app.add_subcommand("sweep", "Run a Monte Carlo sweep over the SNR grid and write CSV");
  sweep->add_option("--config", config_path, "Config file")->required()->check(CLI::ExistingFile);
  sweep->add_option("--out", out_path, "Output CSV (overrides the config's output key)");

  auto* verify = app.add_subcommand("verify", "Run the invariant and property suite");
  verify->add_option("--seed", seed, "Base seed for randomized checks");
  // testing hook: appends a check that always fails under the given name
  verify->add_option("--inject-failure", inject)->group("");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*solve) {
      auto cfg = mmo::parse_config(config_path);
      mmo::apply_env_overrides(cfg);
      std::cout << mmo::solve_report(cfg);
      return 0;
    }
    if (*sweep) {
      auto cfg = mmo::parse_config(config_path);
      mmo::apply_env_overrides(cfg);
      if (out_path.empty() && cfg.output_path.empty()) throw mmo::Error(mmo::Errc::ConfigError, "no --out and no output key");
      mmo::run(cfg, out_path);
      return 0;
    }
    if (*verify) {
      auto checks = mmo::verify_checks();
      if (!inject.empty())
        checks.push_back({inject, [](std::uint64_t) { return mmo::CheckResult{false, "injected failure"}; }});
      return mmo::run_verify(seed, std::cout, checks) == 0 ? 0 : 1;
    }
  } catch (const mmo::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
