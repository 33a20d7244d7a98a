#include <cmath>

#include "doctest.h"
#include "mmo/bench.hpp"
#include "mmo/error.hpp"
#include "mmo/objectives.hpp"
#include "test_util.hpp"

using namespace mmo;
using namespace mmo::test;

TEST_CASE("iterative benchmark matches the closed form without error correlation") {
  Rng rng(41);
  for (int t = 0; t < 3; ++t) {
    ProblemSpec s = random_spec(3, 3, rng);
    s.psi.setZero();
    s.sigma = eye(3);
    const double cf = robust_sum_mse(solve(s, BoundMode::Exact).f_opt, s);
    const IterResult r = iterative_lmmse(s, {3000, 1e-15, 5}, Case3{eye(3)});
    CHECK(rel(r.trace.back(), cf) <= 1e-6);
  }
}

TEST_CASE("closed-form start is already stationary") {
  Rng rng(42);
  ProblemSpec s = random_spec(3, 3, rng);
  s.sigma = eye(3);
  const PrecoderSolution p = solve(s, BoundMode::Exact);
  const IterResult r = iterative_lmmse(s, {100, 1e-8, 0}, Case3{eye(3)}, p.f_opt);
  CHECK(r.iterations <= 2);
  CHECK(rel(r.trace.back(), robust_sum_mse(p.f_opt, s)) <= 1e-8);
}

TEST_CASE("objective trace is non-increasing") {
  Rng rng(43);
  const ProblemSpec s = random_spec(4, 4, rng);
  const IterResult r = iterative_lmmse(s, {200, 1e-12, 9}, Case7{AdditiveSchur::Concave, lookup_objective("sum-mse").fn});
  REQUIRE(r.trace.size() >= 2);
  for (size_t i = 1; i < r.trace.size(); ++i) CHECK(r.trace[i] <= r.trace[i - 1]);
  CHECK(r.f.squaredNorm() <= s.power * (1 + 1e-9));
}

TEST_CASE("only sum MSE is supported") {
  Rng rng(44);
  const ProblemSpec s = random_spec(2, 2, rng);
  try {
    iterative_lmmse(s, {}, Case1{eye(2)});
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == Errc::NotSupported);
  }
  CHECK_THROWS_AS(iterative_lmmse(s, {}, Case3{2.0 * eye(2)}), Error);
}

TEST_CASE("non-robust baseline") {
  Rng rng(45);
  ProblemSpec s = random_spec(3, 3, rng);
  s.psi.setZero();
  const PrecoderSolution a = non_robust_baseline(s), b = solve(nominal_spec(s), BoundMode::Exact);
  CHECK((a.f_opt - b.f_opt).norm() == 0.0);
  // psi = 0 makes K_psi = I, so the robust design is the nominal one
  CHECK((a.f_opt - solve(s, BoundMode::Lower).f_opt).norm() < 1e-12 * a.f_opt.norm());
}

TEST_CASE("op tally is reported") {
  const OpTally t = closed_form_op_tally();
  CHECK(t.decompositions + t.products + t.inversions == 11);
  CHECK(t.describe().find("11") != std::string::npos);
}
