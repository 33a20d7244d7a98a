#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mmo/mmop.hpp"
#include "mmo/objective_case.hpp"

namespace mmo {

struct IterConfig {
  int max_iters = 100;
  double tol = 1e-8;  // relative objective change
  std::uint64_t seed = 0;
};

struct IterResult {
  CMatrix f;
  CMatrix g;
  std::vector<double> trace;  // sum MSE after each precoder update, trace[0] at init
  int iterations = 0;
};

// Exact robust sum MSE Tr[(F^H H^H K_F^{-1} H F + I)^{-1}].
double robust_sum_mse(const CMatrix& f, const ProblemSpec& spec);

// Alternating robust LMMSE descent. Only the plain sum-MSE objective is
// supported: Case 3 with N = I, or Case 7 with the "sum-mse" function.
// Starts from `init` when given, otherwise from a seeded random precoder
// scaled to full power.
IterResult iterative_lmmse(const ProblemSpec& spec, const IterConfig& cfg, const ObjectiveCase& objective,
                           const std::optional<CMatrix>& init = std::nullopt);

// Design on the estimate as if it were exact (psi = 0, sigma = I).
ProblemSpec nominal_spec(const ProblemSpec& spec);
PrecoderSolution non_robust_baseline(const ProblemSpec& spec, std::span<const double> weights = {});

struct OpTally {
  int decompositions = 0;
  int products = 0;
  int inversions = 0;
  std::string describe() const;
};
// Matrix operations on the closed-form path (reduce + assemble), counted by hand.
OpTally closed_form_op_tally();

}  // namespace mmo
