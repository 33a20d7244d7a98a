#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "mmo/config.hpp"
#include "mmo/error.hpp"
#include "mmo/experiment.hpp"
#include "mmo/verify.hpp"

using namespace mmo;

TEST_CASE("minimal config uses the defaults") {
  const ExperimentConfig c = parse_config_text("experiment = solve\n");
  CHECK(c.trials == 500);
  CHECK(c.seed == 42);
  CHECK(c.experiment == ExperimentKind::Solve);
  CHECK(c.model.n_t == 4);
}

TEST_CASE("config sections and values") {
  const ExperimentConfig c = parse_config_text(
      "# bound gap\nexperiment = bound_gap\n[model]\nalpha_t = 0.3\nsigma_e2 = 0.01\n"
      "[sweep]\nsnr_db = 0:5:30\ntrials = 12 # short\nseed = 7\nmode = upper\n");
  CHECK(c.model.alpha_t == 0.3);
  CHECK(c.snr_db_grid == std::vector<double>{0, 5, 10, 15, 20, 25, 30});
  CHECK(c.trials == 12);
  CHECK(c.seed == 7);
  CHECK(c.mode == BoundMode::Upper);
  CHECK(parse_snr_grid("5,15,25") == std::vector<double>{5, 15, 25});
}

TEST_CASE("config errors list every field") {
  try {
    parse_config_text("[model]\nalpha_t = x\nbogus = 1\n[sweep]\ntrials = 0\n");
    CHECK(false);
  } catch (const Error& e) {
    const std::string w = e.what();
    CHECK(e.code() == Errc::ConfigError);
    CHECK(w.find("experiment") != std::string::npos);
    CHECK(w.find("model.alpha_t") != std::string::npos);
    CHECK(w.find("model.bogus") != std::string::npos);
    CHECK(w.find("sweep.trials") != std::string::npos);
    CHECK(w.find("line 2") != std::string::npos);
  }
  CHECK_THROWS_AS(parse_config_text("experiment = solve\n[sweep]\nsnr_db = 10,5\n"), Error);
  CHECK_THROWS_AS(parse_config_text("experiment = solve\n[sweep]\nobjective = ber\n"), Error);
  try {
    parse_config("/nonexistent/cfg.ini");
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == Errc::IoError);
  }
}

TEST_CASE("MMO_SEED overrides the seed") {
  ExperimentConfig c = parse_config_text("experiment = solve\n");
  setenv("MMO_SEED", "99", 1);
  apply_env_overrides(c);
  unsetenv("MMO_SEED");
  CHECK(c.seed == 99);
}

namespace {

ExperimentConfig tiny(ExperimentKind k) {
  ExperimentConfig c;
  c.experiment = k;
  c.model = {0.45, 0.45, 0.01, 4, 4};
  c.snr_db_grid = {5, 15};
  c.trials = 3;
  c.seed = 11;
  return c;
}

}  // namespace

TEST_CASE("csv layout") {
  const auto rows = run_experiment(tiny(ExperimentKind::BoundGap));
  const std::string csv = to_csv(rows);
  CHECK(csv.rfind("snr_db,metric,mean,stderr,trials,seed\n", 0) == 0);
  CHECK(csv.find("5,lower_eig1,") != std::string::npos);
  CHECK(csv.find("15,upper_eig4,") != std::string::npos);
  CHECK(rows.size() == 2 * 9);
}

TEST_CASE("every experiment runs and is deterministic") {
  for (auto k : {ExperimentKind::BoundGap, ExperimentKind::SumMseCompare, ExperimentKind::MultiHopCapacity,
                 ExperimentKind::MultiHopMaxMse, ExperimentKind::Solve}) {
    ExperimentConfig c = tiny(k);
    c.trials = 1;
    const std::string a = to_csv(run_experiment(c)), b = to_csv(run_experiment(c, Exec::Serial));
    CHECK(a == b);
  }
}

TEST_CASE("run writes the file") {
  ExperimentConfig c = tiny(ExperimentKind::BoundGap);
  const std::string path = "test_cli_out.csv";
  run(c, path);
  std::ifstream f(path);
  std::stringstream ss;
  ss << f.rdbuf();
  CHECK(ss.str() == to_csv(run_experiment(c)));
  std::remove(path.c_str());
  try {
    run(c, "/nonexistent/dir/out.csv");
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == Errc::IoError);
  }
}

TEST_CASE("solve report") {
  ExperimentConfig c = tiny(ExperimentKind::Solve);
  const std::string r = solve_report(c);
  CHECK(r.find("eta_f") != std::string::npos);
  CHECK(r.find("F:") != std::string::npos);
}

TEST_CASE("verify reports an injected failure by name") {
  std::vector<Check> checks = {{"ok.check", [](std::uint64_t) { return CheckResult{}; }},
                               {"broken.check", [](std::uint64_t) { return CheckResult{false, "injected"}; }},
                               {"throwing.check", [](std::uint64_t) -> CheckResult { throw std::runtime_error("boom"); }}};
  std::ostringstream os;
  CHECK(run_verify(1, os, checks) == 2);
  CHECK(os.str().find("FAIL broken.check: injected") != std::string::npos);
  CHECK(os.str().find("FAIL throwing.check") != std::string::npos);
  CHECK(os.str().find("PASS ok.check") != std::string::npos);
}
