#pragma once

#include <cstdint>
#include <functional>
#include <ostream>
#include <string>
#include <vector>

namespace mmo {

struct CheckResult {
  bool pass = true;
  std::string detail;
};

struct Check {
  std::string name;
  std::function<CheckResult(std::uint64_t seed)> run;
};

// The invariant and property suite behind `mmo verify`.
const std::vector<Check>& verify_checks();

// Prints one line per check; returns the number of failures.
int run_verify(std::uint64_t seed, std::ostream& os, const std::vector<Check>& checks);
int run_verify(std::uint64_t seed, std::ostream& os);

}  // namespace mmo
