#pragma once

#include <cstdint>

#include "mmo/linalg.hpp"

namespace mmo {

// Exponential (Kronecker) correlation model for the channel estimate and its
// error. Psi is the transmit-side error correlation, Sigma the receive side.
struct ExpCorrModel {
  double alpha_t = 0.45;
  double beta_r = 0.45;
  double sigma_e2 = 0.001;
  Index n_t = 4;
  Index n_r = 4;

  void validate() const;
};

struct Correlations {
  CMatrix psi;    // n_t x n_t, [psi]_ij = sigma_e2 * alpha_t^|i-j|
  CMatrix sigma;  // n_r x n_r, [sigma]_ij = beta_r^|i-j|
};

struct ChannelDraw {
  CMatrix h_bar;
  CMatrix delta_h;
  CMatrix h;
};

Correlations build_correlations(const ExpCorrModel& model);

// Holds the square roots so Monte Carlo loops do not refactor them per trial.
class ChannelSampler {
 public:
  explicit ChannelSampler(const ExpCorrModel& model);

  // Deterministic in `seed`. H_bar and dH come from separate substreams.
  ChannelDraw draw(std::uint64_t seed) const;

  const ExpCorrModel& model() const { return model_; }
  const Correlations& correlations() const { return corr_; }

 private:
  ExpCorrModel model_;
  Correlations corr_;
  CMatrix sigma_half_;
  CMatrix psi_unit_half_;  // (psi / sigma_e2)^{1/2}
};

ChannelDraw sample_channel(const ExpCorrModel& model, std::uint64_t seed);

double db_to_linear(double db);
double linear_to_db(double lin);

}  // namespace mmo
