#include "mmo/channel.hpp"

#include <cmath>

#include "mmo/error.hpp"
#include "mmo/random.hpp"

namespace mmo {

namespace {

CMatrix exp_corr(Index n, double rho, double scale) {
  CMatrix m(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j)
      m(i, j) = scale * std::pow(rho, static_cast<double>(std::abs(i - j)));
  return m;
}

}  // namespace

void ExpCorrModel::validate() const {
  if (!(alpha_t >= 0.0 && alpha_t < 1.0)) throw Error(Errc::ConfigError, "alpha_t must lie in [0,1)");
  if (!(beta_r >= 0.0 && beta_r < 1.0)) throw Error(Errc::ConfigError, "beta_r must lie in [0,1)");
  if (!(sigma_e2 > 0.0 && sigma_e2 < 1.0)) throw Error(Errc::ConfigError, "sigma_e2 must lie in (0,1)");
  if (n_t < 1 || n_r < 1) throw Error(Errc::ConfigError, "antenna counts must be positive");
}

Correlations build_correlations(const ExpCorrModel& model) {
  model.validate();
  return {exp_corr(model.n_t, model.alpha_t, model.sigma_e2), exp_corr(model.n_r, model.beta_r, 1.0)};
}

ChannelSampler::ChannelSampler(const ExpCorrModel& model)
    : model_(model), corr_(build_correlations(model)) {
  sigma_half_ = psd_sqrt(corr_.sigma);
  psi_unit_half_ = psd_sqrt(corr_.psi / model.sigma_e2);
}

ChannelDraw ChannelSampler::draw(std::uint64_t seed) const {
  Rng est_rng(derive_seed(seed, 0));
  Rng err_rng(derive_seed(seed, 1));
  const CMatrix w_est = complex_gaussian(model_.n_r, model_.n_t, est_rng);
  const CMatrix w_err = complex_gaussian(model_.n_r, model_.n_t, err_rng);

  const double se = model_.sigma_e2;
  ChannelDraw d;
  // dH ~ CN(0, sigma_e2 * Sigma (x) Psi_unit^T); H_bar carries the rest of the unit variance.
  d.delta_h = std::sqrt(se) * sigma_half_ * w_err * psi_unit_half_;
  d.h_bar = std::sqrt(1.0 - se) * sigma_half_ * w_est * psi_unit_half_;
  d.h = d.h_bar + d.delta_h;
  return d;
}

ChannelDraw sample_channel(const ExpCorrModel& model, std::uint64_t seed) {
  return ChannelSampler(model).draw(seed);
}

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
double linear_to_db(double lin) { return 10.0 * std::log10(lin); }

}  // namespace mmo
