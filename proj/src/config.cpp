#include "mmo/config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>

#include "mmo/error.hpp"
#include "mmo/objectives.hpp"

namespace mmo {

const char* to_string(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::BoundGap: return "bound_gap";
    case ExperimentKind::SumMseCompare: return "sum_mse_compare";
    case ExperimentKind::MultiHopCapacity: return "multihop_capacity";
    case ExperimentKind::MultiHopMaxMse: return "multihop_max_mse";
    case ExperimentKind::Solve: return "solve";
  }
  return "?";
}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

bool to_double(const std::string& s, double& out) {
  char* end = nullptr;
  out = std::strtod(s.c_str(), &end);
  return !s.empty() && end == s.c_str() + s.size() && std::isfinite(out);
}

bool to_int(const std::string& s, long long& out) {
  char* end = nullptr;
  out = std::strtoll(s.c_str(), &end, 10);
  return !s.empty() && end == s.c_str() + s.size();
}

bool to_u64(const std::string& s, std::uint64_t& out) {
  if (s.empty() || s[0] == '-') return false;
  char* end = nullptr;
  out = std::strtoull(s.c_str(), &end, 10);
  return end == s.c_str() + s.size();
}

}  // namespace

std::vector<double> parse_snr_grid(const std::string& text) {
  std::vector<double> out;
  const std::string t = trim(text);
  if (std::count(t.begin(), t.end(), ':') == 2) {
    const auto a = t.find(':'), b = t.find(':', a + 1);
    double lo, step, hi;
    if (!to_double(trim(t.substr(0, a)), lo) || !to_double(trim(t.substr(a + 1, b - a - 1)), step) ||
        !to_double(trim(t.substr(b + 1)), hi) || !(step > 0) || hi < lo)
      throw Error(Errc::ConfigError, "bad range '" + t + "', expected start:step:stop");
    const long long n = static_cast<long long>(std::floor((hi - lo) / step + 1e-9));
    if (n > 100000) throw Error(Errc::ConfigError, "range too long");
    for (long long i = 0; i <= n; ++i) out.push_back(lo + static_cast<double>(i) * step);
    return out;
  }
  std::stringstream ss(t);
  std::string item;
  while (std::getline(ss, item, ',')) {
    double v;
    if (!to_double(trim(item), v)) throw Error(Errc::ConfigError, "bad SNR value '" + trim(item) + "'");
    out.push_back(v);
  }
  return out;
}

std::vector<std::string> ExperimentConfig::problems() const {
  std::vector<std::string> errs;
  if (trials < 1) errs.push_back("trials: must be >= 1");
  if (snr_db_grid.empty()) errs.push_back("snr_db: grid is empty");
  for (size_t i = 1; i < snr_db_grid.size(); ++i)
    if (!(snr_db_grid[i] > snr_db_grid[i - 1])) {
      errs.push_back("snr_db: grid must be strictly increasing");
      break;
    }
  if (hops < 1) errs.push_back("hops: must be >= 1");
  if (!(noise_var > 0)) errs.push_back("noise_var: must be positive");
  if (max_iters < 1) errs.push_back("max_iters: must be >= 1");
  if (!(tol > 0)) errs.push_back("tol: must be positive");
  try {
    model.validate();
  } catch (const Error& e) {
    errs.push_back(std::string("model: ") + e.what());
  }
  if (!objective.empty()) {
    try {
      lookup_objective(objective);
    } catch (const Error&) {
      errs.push_back("objective: unknown objective '" + objective + "'");
    }
  }
  return errs;
}

void ExperimentConfig::validate() const {
  const auto errs = problems();
  if (errs.empty()) return;
  std::string msg = "invalid configuration";
  for (const auto& e : errs) msg += "\n  " + e;
  throw Error(Errc::ConfigError, msg);
}

std::string ExperimentConfig::effective_objective() const {
  switch (experiment) {
    case ExperimentKind::SumMseCompare: return "sum-mse";
    case ExperimentKind::MultiHopCapacity: return "capacity";
    case ExperimentKind::MultiHopMaxMse: return "max-mse";
    default: return objective.empty() ? "sum-mse" : objective;
  }
}

ExperimentConfig parse_config_text(const std::string& text) {
  ExperimentConfig cfg;
  std::vector<std::string> errs;
  bool have_experiment = false;
  std::string section;
  std::map<std::string, int> seen;

  std::stringstream in(text);
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string where = "line " + std::to_string(line_no) + ": ";
    std::string line = raw.substr(0, raw.find('#'));
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') {
        errs.push_back(where + "unterminated section header");
        continue;
      }
      section = trim(line.substr(1, line.size() - 2));
      if (section != "model" && section != "sweep") errs.push_back(where + "unknown section [" + section + "]");
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      errs.push_back(where + "expected key = value");
      continue;
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string val = trim(line.substr(eq + 1));
    const std::string full = section.empty() ? key : section + "." + key;
    if (seen[full]++) errs.push_back(where + "duplicate key '" + full + "'");
    auto bad = [&](const std::string& why) { errs.push_back(where + full + ": " + why); };

    double d;
    long long i;
    std::uint64_t u;
    if (full == "experiment") {
      have_experiment = true;
      if (val == "bound_gap") cfg.experiment = ExperimentKind::BoundGap;
      else if (val == "sum_mse_compare") cfg.experiment = ExperimentKind::SumMseCompare;
      else if (val == "multihop_capacity") cfg.experiment = ExperimentKind::MultiHopCapacity;
      else if (val == "multihop_max_mse") cfg.experiment = ExperimentKind::MultiHopMaxMse;
      else if (val == "solve") cfg.experiment = ExperimentKind::Solve;
      else bad("unknown experiment '" + val + "'");
    } else if (full == "model.alpha_t") {
      to_double(val, d) ? void(cfg.model.alpha_t = d) : bad("not a number");
    } else if (full == "model.beta_r") {
      to_double(val, d) ? void(cfg.model.beta_r = d) : bad("not a number");
    } else if (full == "model.sigma_e2") {
      to_double(val, d) ? void(cfg.model.sigma_e2 = d) : bad("not a number");
    } else if (full == "model.n_t" || full == "model.n_r") {
      if (!to_int(val, i) || i < 1 || i > 64) {
        bad("expected an integer in [1, 64]");
      } else {
        (full == "model.n_t" ? cfg.model.n_t : cfg.model.n_r) = static_cast<Index>(i);
      }
    } else if (full == "sweep.snr_db") {
      try {
        cfg.snr_db_grid = parse_snr_grid(val);
      } catch (const Error& e) {
        bad(e.what());
      }
    } else if (full == "sweep.trials") {
      to_int(val, i) && i >= 1 && i <= 100000000 ? void(cfg.trials = static_cast<int>(i)) : bad("expected a positive integer");
    } else if (full == "sweep.seed") {
      to_u64(val, u) ? void(cfg.seed = u) : bad("expected a nonnegative integer");
    } else if (full == "sweep.hops") {
      to_int(val, i) && i >= 1 && i <= 64 ? void(cfg.hops = static_cast<int>(i)) : bad("expected an integer in [1, 64]");
    } else if (full == "sweep.objective") {
      cfg.objective = val;
    } else if (full == "sweep.mode") {
      if (val == "exact") cfg.mode = BoundMode::Exact;
      else if (val == "lower") cfg.mode = BoundMode::Lower;
      else if (val == "upper") cfg.mode = BoundMode::Upper;
      else bad("expected exact, lower or upper");
    } else if (full == "sweep.output") {
      cfg.output_path = val;
    } else if (full == "sweep.noise_var") {
      to_double(val, d) ? void(cfg.noise_var = d) : bad("not a number");
    } else if (full == "sweep.max_iters") {
      to_int(val, i) && i >= 1 ? void(cfg.max_iters = static_cast<int>(i)) : bad("expected a positive integer");
    } else if (full == "sweep.tol") {
      to_double(val, d) ? void(cfg.tol = d) : bad("not a number");
    } else {
      errs.push_back(where + "unknown key '" + full + "'");
    }
  }
  if (!have_experiment) errs.push_back("experiment: missing required field");

  for (auto& e : cfg.problems()) errs.push_back(std::move(e));
  if (!errs.empty()) {
    std::string msg = "invalid configuration";
    for (const auto& e : errs) msg += "\n  " + e;
    throw Error(Errc::ConfigError, msg);
  }
  return cfg;
}

ExperimentConfig parse_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw Error(Errc::IoError, "cannot open config '" + path + "'");
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_config_text(ss.str());
}

void apply_env_overrides(ExperimentConfig& cfg) {
  if (const char* s = std::getenv("MMO_SEED")) {
    std::uint64_t u;
    if (!to_u64(s, u)) throw Error(Errc::ConfigError, "MMO_SEED must be a nonnegative integer");
    cfg.seed = u;
  }
}

}  // namespace mmo
