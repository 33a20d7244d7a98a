#include <cmath>

#include "doctest.h"
#include "mmo/error.hpp"
#include "mmo/multihop.hpp"
#include "test_util.hpp"

using namespace mmo;
using namespace mmo::test;

TEST_CASE("single hop reproduces the single-hop solve") {
  Rng rng(31);
  const ProblemSpec s = random_spec(4, 4, rng);
  const HopSolution h = solve_hop(s, BoundMode::Lower);
  const PrecoderSolution p = solve(s, BoundMode::Lower);
  CHECK(h.f_k == p.f_opt);
  CHECK(h.eta_fk == p.eta_f);
  ProblemSpec z = s;
  z.psi.setZero();
  CHECK(solve_hop(z, BoundMode::Lower).eta_fk == doctest::Approx(z.noise_var));
  const RVector v = h.basis_k.gains().cwiseProduct(h.f_sq);
  for (Index i = 1; i < v.size(); ++i) CHECK(v(i) <= v(i - 1) * (1 + 1e-10));
  const RVector sv = svd(h.m_k).singular_values;
  CHECK(sv.maxCoeff() < 1);
}

TEST_CASE("one-hop concave rotation diagonalises") {
  Rng rng(32);
  const std::vector<HopSolution> hops{solve_hop(random_spec(3, 3, rng), BoundMode::Lower)};
  const auto qs = chain_rotations(hops, ChainSchur::Concave);
  const CMatrix c = chain_product(hops, qs);
  const CMatrix g = c.adjoint() * c;
  CHECK((g - CMatrix(g.diagonal().asDiagonal())).norm() < 1e-12);
}

TEST_CASE("singular value product bound on diagonals") {
  CHECK(sv_product_bound_holds({diag({2, 1}), diag({3, 1})}));
  CHECK(sv_product_bound_holds({diag({2, 1}), CMatrix::Zero(2, 2), diag({5, 5})}));
  // equality holds on aligned diagonals
  const RVector sv = svd(diag({3, 1}) * diag({2, 1})).singular_values;
  CHECK(sv(0) == doctest::Approx(6).epsilon(1e-10));
  CHECK(sv(1) == doctest::Approx(1).epsilon(1e-10));
  CHECK_THROWS_AS(sv_product_bound_holds({CMatrix::Zero(2, 3), CMatrix::Zero(3, 3)}), Error);
}

TEST_CASE("singular value product bound on random triples") {
  Rng rng(33);
  std::uniform_int_distribution<int> d(1, 5);
  for (int t = 0; t < 200; ++t) {
    const int a = d(rng), b = d(rng), c = d(rng), e = d(rng);
    CHECK(sv_product_bound_holds({complex_gaussian(b, a, rng), complex_gaussian(c, b, rng), complex_gaussian(e, c, rng)}));
  }
}

TEST_CASE("aligned two-hop chain multiplies singular values") {
  // M_k diagonal with matching bases: Q_2 is a permutation/phase only
  HopSolution a, b;
  a.m_k = diag({0.9, 0.5});
  b.m_k = diag({0.8, 0.3});
  const auto qs = chain_rotations({a, b}, ChainSchur::Concave);
  const RVector sv = svd(chain_product({a, b}, qs)).singular_values;
  CHECK(sv(0) == doctest::Approx(0.72));
  CHECK(sv(1) == doctest::Approx(0.15));
}

TEST_CASE("three-hop rotations attain the product bound") {
  Rng rng(34);
  std::vector<HopSolution> hops;
  for (int k = 0; k < 3; ++k) hops.push_back(solve_hop(random_spec(4, 4, rng), BoundMode::Lower));
  const RVector got = svd(chain_product(hops, chain_rotations(hops, ChainSchur::Concave))).singular_values;
  RVector want = RVector::Ones(4);
  for (const auto& h : hops) want = want.cwiseProduct(svd(h.m_k).singular_values);
  for (Index i = 0; i < 4; ++i) CHECK(got(i) == doctest::Approx(want(i)).epsilon(1e-8));
}

TEST_CASE("parallel carriers") {
  Rng rng(35);
  MultiHopSpec spec;
  spec.topology = Topology::Parallel;
  spec.total_power = 4.0;
  const ProblemSpec s = random_spec(3, 3, rng);
  spec.hops = {s, s};
  auto sol = solve_parallel(spec, BoundMode::Lower, Allocation::CapacityWaterfill);
  CHECK(sol[0].f_sq.sum() == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(sol[1].f_sq.sum() == doctest::Approx(2.0).epsilon(1e-9));

  ProblemSpec dead = s;
  dead.h.setZero();
  spec.hops = {s, dead};
  sol = solve_parallel(spec, BoundMode::Lower, Allocation::SumMseWaterfill);
  CHECK(sol[1].f_sq.sum() == 0.0);
  CHECK(sol[0].f_sq.sum() == doctest::Approx(4.0).epsilon(1e-10));
  CHECK(sol[1].f_k.norm() == 0.0);

  spec.hops = {random_spec(3, 3, rng), random_spec(3, 3, rng)};
  sol = solve_parallel(spec, BoundMode::Lower, Allocation::CapacityWaterfill);
  double rate = -1;
  for (const auto& h : sol) {
    const RVector g = h.basis_k.gains();
    for (Index i = 0; i < g.size(); ++i)
      if (h.f_sq(i) > 0) {
        const double r = g(i) / (1 + g(i) * h.f_sq(i));
        if (rate < 0) rate = r;
        CHECK(r == doctest::Approx(rate).epsilon(1e-8));
      }
    CHECK(rel(h.f_k.squaredNorm(), h.f_sq.sum()) <= 1e-8);
  }
}

TEST_CASE("chain moments on a noiseless identity relay") {
  // unit channels, no errors: the destination sees the source through the relays
  const ProblemSpec s{eye(2), CMatrix::Zero(2, 2), eye(2), 1e-12, 1.0};
  const ChainMoments m = propagate_chain({s, s}, {eye(2), eye(2)}, {eye(2), eye(2)});
  CHECK((m.cross - eye(2)).norm() < 1e-12);
  CHECK((chain_mse(m, lmmse_receiver(m))).norm() < 1e-9);
}
