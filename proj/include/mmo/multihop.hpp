#pragma once

#include <span>
#include <vector>

#include "mmo/mmop.hpp"
#include "mmo/objectives.hpp"

namespace mmo {

enum class Topology { Serial, Parallel };

struct MultiHopSpec {
  std::vector<ProblemSpec> hops;
  Topology topology = Topology::Serial;
  double total_power = 0.0;  // Parallel only
};

struct HopSolution {
  CMatrix f_k;
  CMatrix q_k;
  double eta_fk = 0.0;
  EigenmodeBasis basis_k;
  CMatrix m_k;  // (Z Z^H + I)^{-1/2} Z with Z = K_F^{-1/2} H F
  CMatrix relay_k;  // (Z Z^H + I)^{-1/2} K_F^{-1/2}: what the next node applies
  RVector f_sq;
};

// Rotation rule for the first hop of a chain.
enum class ChainSchur { Concave, AdditiveConvex, MultiplicativeConvex };

HopSolution solve_hop(const ProblemSpec& hop, BoundMode mode, std::span<const double> weights = {});
HopSolution solve_hop(const ProblemSpec& hop, BoundMode mode, Allocation rule);
// Completes a hop from an arbitrary precoder.
HopSolution hop_from_precoder(const ProblemSpec& hop, const CMatrix& f);

std::vector<CMatrix> chain_rotations(const std::vector<HopSolution>& hops, ChainSchur schur);
CMatrix chain_product(const std::vector<HopSolution>& hops, const std::vector<CMatrix>& qs);

bool sv_product_bound_holds(const std::vector<CMatrix>& mats, double slack = 1e-9);

std::vector<HopSolution> solve_parallel(const MultiHopSpec& spec, BoundMode mode, Allocation rule);

// Second moments at the destination of an amplify-and-forward chain driven by
// unit-power symbols s: cross = E[u s^H], cov = E[u u^H]. Channel errors enter
// through each hop's (psi, sigma) statistics.
struct ChainMoments {
  CMatrix cross;
  CMatrix cov;
};

ChainMoments propagate_chain(const std::vector<ProblemSpec>& hops, const std::vector<CMatrix>& forward,
                             const std::vector<CMatrix>& relay);
double chain_capacity_nats(const ChainMoments& m);
// E[(G u - s)(G u - s)^H]
CMatrix chain_mse(const ChainMoments& m, const CMatrix& g);
CMatrix lmmse_receiver(const ChainMoments& m);

}  // namespace mmo
