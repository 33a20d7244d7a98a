#pragma once

#include <span>
#include <vector>

#include "mmo/linalg.hpp"

namespace mmo {

enum class BoundMode { Exact, Lower, Upper };

const char* to_string(BoundMode mode);

// One robust single-hop transceiver problem. The channel estimate h is
// N_R x N_T; the true channel differs by an error with row covariance sigma
// and column covariance psi.
struct ProblemSpec {
  CMatrix h;
  CMatrix psi;
  CMatrix sigma;
  double noise_var = 1.0;
  double power = 1.0;

  Index n_t() const { return h.cols(); }
  Index n_r() const { return h.rows(); }
  Index streams() const { return std::min(h.rows(), h.cols()); }
  void validate() const;
};

struct EigenmodeBasis {
  CMatrix u_pi;
  RVector lambda_pi;  // descending, length = streams
  CMatrix v_pi;
  CMatrix k_psi;
  double alpha = 0.0;
  BoundMode mode = BoundMode::Lower;

  // Kept so F can be assembled without the spec at hand.
  CMatrix psi;
  CMatrix tx_inv_sqrt;  // (alpha P psi + noise I)^{-1/2}
  double power = 0.0;
  double noise_var = 1.0;

  RVector gains() const { return lambda_pi.cwiseAbs2(); }
};

struct WaterfillInput {
  RVector gains;
  RVector weights;
  double power = 0.0;
};

struct WaterfillResult {
  RVector f_sq;
  double mu = 0.0;  // multiplier; for the capacity variant, the water level
};

struct PrecoderSolution {
  CMatrix f_opt;     // N_T x streams
  RVector lambda_f;  // f_n, not squared
  double eta_f = 0.0;
  CMatrix q_opt;
  BoundMode mode = BoundMode::Lower;
  EigenmodeBasis basis;

  RVector f_sq() const { return lambda_f.cwiseAbs2(); }
};

EigenmodeBasis reduce_to_mmop(const ProblemSpec& spec, BoundMode mode);

// Weighted sum-MSE allocation: f^2 = (sqrt(w / (g mu)) - 1/g)^+.
WaterfillResult waterfill(const WaterfillInput& input);
// Capacity allocation: f^2 = (mu - 1/g)^+.
WaterfillResult waterfill_capacity(const RVector& gains, double power);

// Builds F from an allocation on a basis. eta uses the closed form.
PrecoderSolution assemble(const EigenmodeBasis& basis, const RVector& f_sq);

// Empty weights mean unit weights.
PrecoderSolution solve(const ProblemSpec& spec, BoundMode mode, std::span<const double> weights = {});

PrecoderSolution solve_qos(const EigenmodeBasis& basis, std::span<const double> targets);

// K_F = Tr(F F^H Psi) Sigma + noise I
CMatrix effective_noise(const CMatrix& f, const ProblemSpec& spec);
// F^H H^H K_F^{-1} H F
CMatrix objective_matrix(const CMatrix& f, const ProblemSpec& spec);

struct EtaForms {
  double fixed_point;  // sigma^2 / (1 - alpha Tr(A^{-1/2} Psi A^{-1/2} V L^2 V^H))
  double closed;       // P / Tr(A^{-1} V L^2 V^H)
};
EtaForms eta_forms(const EigenmodeBasis& basis, const RVector& f_sq);

struct ParetoPoint {
  RVector f_sq;
  RVector eigenvalues;  // descending
};

std::vector<ParetoPoint> pareto_oracle(const ProblemSpec& spec, BoundMode mode, int grid);
// Strict dominance: >= in every component and > margin in at least one.
bool dominates(const RVector& a, const RVector& b, double margin = 0.0);
// True if some point beats `eigs` by more than `margin` in every component.
bool dominated_by_any(const RVector& eigs, const std::vector<ParetoPoint>& points, double margin);
std::vector<ParetoPoint> non_dominated(const std::vector<ParetoPoint>& points);

}  // namespace mmo
