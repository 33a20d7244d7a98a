#include "mmo/mmop.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>

#include "mmo/error.hpp"

namespace mmo {

const char* to_string(BoundMode mode) {
  switch (mode) {
    case BoundMode::Exact: return "exact";
    case BoundMode::Lower: return "lower";
    case BoundMode::Upper: return "upper";
  }
  return "?";
}

void ProblemSpec::validate() const {
  require_finite(h, "channel");
  if (psi.rows() != n_t() || psi.cols() != n_t())
    throw Error(Errc::DimensionMismatch, "psi must be N_T x N_T");
  if (sigma.rows() != n_r() || sigma.cols() != n_r())
    throw Error(Errc::DimensionMismatch, "sigma must be N_R x N_R");
  require_psd(psi, "psi");
  require_psd(sigma, "sigma");
  if (!(noise_var > 0.0) || !std::isfinite(noise_var)) throw Error(Errc::NonFinite, "noise_var must be positive");
  if (!(power > 0.0) || !std::isfinite(power)) throw Error(Errc::NonFinite, "power must be positive");
}

EigenmodeBasis reduce_to_mmop(const ProblemSpec& spec, BoundMode mode) {
  spec.validate();
  if (mode == BoundMode::Exact && !is_scaled_identity(spec.psi) && !is_scaled_identity(spec.sigma))
    throw Error(Errc::ExactModeUnavailable, "neither psi nor sigma is proportional to I");

  const RVector sig_ev = herm_eig(spec.sigma, Order::Descending).values;
  EigenmodeBasis b;
  b.mode = mode;
  b.alpha = std::max(mode == BoundMode::Upper ? sig_ev(0) : sig_ev(sig_ev.size() - 1), 0.0);
  b.psi = spec.psi;
  b.power = spec.power;
  b.noise_var = spec.noise_var;

  const double p_psi = spec.power * std::max(lambda_max(spec.psi), 0.0);
  const double denom = p_psi * b.alpha + spec.noise_var;
  const Index nr = spec.n_r(), nt = spec.n_t();
  b.k_psi = (p_psi / denom) * spec.sigma + (spec.noise_var / denom) * CMatrix::Identity(nr, nr);

  const CMatrix tx = b.alpha * spec.power * spec.psi + spec.noise_var * CMatrix::Identity(nt, nt);
  b.tx_inv_sqrt = psd_inv_sqrt(tx);
  const CMatrix pi = psd_inv_sqrt(b.k_psi) * spec.h * b.tx_inv_sqrt;
  Svd s = svd(pi);
  b.u_pi = std::move(s.u);
  b.v_pi = std::move(s.v);
  b.lambda_pi = std::move(s.singular_values);
  return b;
}

namespace {

// Modes with lambda <= 1e-12 lambda_1, i.e. gain <= 1e-24 gain_1, carry nothing.
std::vector<bool> active_modes(const RVector& gains) {
  const double top = gains.size() ? gains.maxCoeff() : 0.0;
  std::vector<bool> act(static_cast<size_t>(gains.size()));
  for (Index i = 0; i < gains.size(); ++i) act[static_cast<size_t>(i)] = top > 0 && gains(i) > 1e-24 * top;
  return act;
}

void check_gains(const RVector& gains, double power) {
  if (!gains.allFinite()) throw Error(Errc::NonFinite, "gains must be finite");
  if ((gains.array() < 0).any()) throw Error(Errc::DimensionMismatch, "gains must be nonnegative");
  if (!(power > 0.0) || !std::isfinite(power)) throw Error(Errc::NonFinite, "power must be positive");
}

// Solves total(mu) = power for a decreasing total; returns mu.
double bisect_decreasing(const std::function<double(double)>& total, double hi, double power) {
  double lo = hi;
  for (int k = 0; k < 4000 && total(lo) < power; ++k) lo *= 0.5;
  for (int k = 0; k < 400 && hi - lo > 1e-13 * hi; ++k) {
    const double mid = 0.5 * (lo + hi);
    (total(mid) > power ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

WaterfillResult waterfill(const WaterfillInput& in) {
  const RVector& g = in.gains;
  const RVector& w = in.weights;
  if (g.size() != w.size()) throw Error(Errc::DimensionMismatch, "gains and weights differ in length");
  check_gains(g, in.power);
  if (!w.allFinite() || (w.array() <= 0).any()) throw Error(Errc::DimensionMismatch, "weights must be positive");
  const auto act = active_modes(g);
  if (std::none_of(act.begin(), act.end(), [](bool a) { return a; }))
    throw Error(Errc::AllGainsZero, "no mode has positive gain");

  // sqrt(w g) must be non-increasing, otherwise the ordered structure breaks.
  for (Index i = 1; i < g.size(); ++i) {
    const double prev = std::sqrt(w(i - 1) * g(i - 1)), cur = std::sqrt(w(i) * g(i));
    if (cur > prev * (1 + 1e-12) + 1e-300)
      throw Error(Errc::WeightOrderViolation, "sqrt(w_n g_n) increases at index " + std::to_string(i));
  }

  const Index n = g.size();
  auto alloc = [&](double mu) {
    RVector f = RVector::Zero(n);
    for (Index i = 0; i < n; ++i)
      if (act[static_cast<size_t>(i)]) f(i) = std::max(std::sqrt(w(i) / (g(i) * mu)) - 1.0 / g(i), 0.0);
    return f;
  };
  double hi = 0.0;
  for (Index i = 0; i < n; ++i)
    if (act[static_cast<size_t>(i)]) hi = std::max(hi, w(i) * g(i));
  double mu = bisect_decreasing([&](double m) { return alloc(m).sum(); }, hi, in.power);

  // Polish on the identified active set: 1/sqrt(mu) = (P + sum 1/g) / sum sqrt(w/g).
  RVector f = alloc(mu);
  double inv_g = 0.0, sq = 0.0;
  for (Index i = 0; i < n; ++i)
    if (f(i) > 0) {
      inv_g += 1.0 / g(i);
      sq += std::sqrt(w(i) / g(i));
    }
  if (sq > 0) {
    const double r = (in.power + inv_g) / sq;
    const double mu_cf = 1.0 / (r * r);
    const RVector f_cf = alloc(mu_cf);
    bool same_set = true;
    for (Index i = 0; i < n; ++i) same_set = same_set && ((f(i) > 0) == (f_cf(i) > 0));
    if (same_set && std::abs(f_cf.sum() - in.power) <= std::abs(f.sum() - in.power)) {
      mu = mu_cf;
      f = f_cf;
    }
  }
  return {f, mu};
}

WaterfillResult waterfill_capacity(const RVector& g, double power) {
  check_gains(g, power);
  const auto act = active_modes(g);
  if (std::none_of(act.begin(), act.end(), [](bool a) { return a; }))
    throw Error(Errc::AllGainsZero, "no mode has positive gain");
  const Index n = g.size();
  auto alloc = [&](double level) {
    RVector f = RVector::Zero(n);
    for (Index i = 0; i < n; ++i)
      if (act[static_cast<size_t>(i)]) f(i) = std::max(level - 1.0 / g(i), 0.0);
    return f;
  };
  // total is increasing in the level; bisect on 1/level to reuse the helper.
  double gmax = 0.0;
  for (Index i = 0; i < n; ++i)
    if (act[static_cast<size_t>(i)]) gmax = std::max(gmax, g(i));
  const double inv = bisect_decreasing([&](double x) { return alloc(1.0 / x).sum(); }, gmax, power);
  double level = 1.0 / inv;
  RVector f = alloc(level);
  double inv_g = 0.0;
  int k = 0;
  for (Index i = 0; i < n; ++i)
    if (f(i) > 0) {
      inv_g += 1.0 / g(i);
      ++k;
    }
  if (k > 0) {
    const double level_cf = (power + inv_g) / k;
    const RVector f_cf = alloc(level_cf);
    if (std::abs(f_cf.sum() - power) <= std::abs(f.sum() - power)) {
      level = level_cf;
      f = f_cf;
    }
  }
  return {f, level};
}

PrecoderSolution assemble(const EigenmodeBasis& b, const RVector& f_sq) {
  const Index d = b.lambda_pi.size();
  if (f_sq.size() != d) throw Error(Errc::DimensionMismatch, "allocation length != number of modes");
  PrecoderSolution s;
  s.mode = b.mode;
  s.basis = b;
  s.lambda_f = f_sq.cwiseMax(0.0).cwiseSqrt();
  s.q_opt = CMatrix::Identity(d, d);
  const CMatrix t = b.tx_inv_sqrt * b.v_pi.leftCols(d) * s.lambda_f.cast<cplx>().asDiagonal();
  const double used = f_sq.sum();
  const double denom = t.squaredNorm();
  if (used <= 0.0 || denom <= 0.0) {
    s.eta_f = b.noise_var;
    s.f_opt = CMatrix::Zero(b.tx_inv_sqrt.rows(), d);
    return s;
  }
  s.eta_f = used / denom;
  s.f_opt = std::sqrt(s.eta_f) * t;
  return s;
}

PrecoderSolution solve(const ProblemSpec& spec, BoundMode mode, std::span<const double> weights) {
  const EigenmodeBasis b = reduce_to_mmop(spec, mode);
  const Index d = b.lambda_pi.size();
  RVector w = RVector::Ones(d);
  if (!weights.empty()) {
    if (static_cast<Index>(weights.size()) != d) throw Error(Errc::DimensionMismatch, "weights length != number of modes");
    for (Index i = 0; i < d; ++i) w(i) = weights[static_cast<size_t>(i)];
  }
  const WaterfillResult wf = waterfill({b.gains(), w, spec.power});
  return assemble(b, wf.f_sq);
}

PrecoderSolution solve_qos(const EigenmodeBasis& b, std::span<const double> targets) {
  const Index d = b.lambda_pi.size();
  if (static_cast<Index>(targets.size()) != d) throw Error(Errc::DimensionMismatch, "targets length != number of modes");
  const RVector g = b.gains();
  const auto act = active_modes(g);
  RVector f_sq = RVector::Zero(d);
  for (Index i = 0; i < d; ++i) {
    const double t = targets[static_cast<size_t>(i)];
    if (!(t >= 0.0) || !std::isfinite(t)) throw Error(Errc::InfeasibleTarget, "targets must be finite and nonnegative");
    if (i > 0 && t > targets[static_cast<size_t>(i - 1)] * (1 + 1e-12))
      throw Error(Errc::InfeasibleTarget, "targets must be descending");
    if (t == 0.0) continue;
    if (!act[static_cast<size_t>(i)]) throw Error(Errc::InfeasibleTarget, "positive target on a zero-gain mode");
    f_sq(i) = t / g(i);
  }
  // The allocation's own total is the power budget of this design.
  EigenmodeBasis scaled = b;
  scaled.power = f_sq.sum();
  return assemble(scaled, f_sq);
}

CMatrix effective_noise(const CMatrix& f, const ProblemSpec& spec) {
  if (f.rows() != spec.n_t()) throw Error(Errc::DimensionMismatch, "precoder rows != N_T");
  const double tr = (f.adjoint() * spec.psi * f).trace().real();
  return tr * spec.sigma + spec.noise_var * CMatrix::Identity(spec.n_r(), spec.n_r());
}

CMatrix objective_matrix(const CMatrix& f, const ProblemSpec& spec) {
  const CMatrix k = effective_noise(f, spec);
  Eigen::LLT<CMatrix> llt(hermitian_part(k));
  if (llt.info() != Eigen::Success) throw Error(Errc::SingularK, "K_F is not positive definite");
  const CMatrix hf = spec.h * f;
  return hermitian_part(hf.adjoint() * llt.solve(hf));
}

EtaForms eta_forms(const EigenmodeBasis& b, const RVector& f_sq) {
  const Index d = b.lambda_pi.size();
  const CMatrix t = b.tx_inv_sqrt * b.v_pi.leftCols(d) * f_sq.cwiseSqrt().cast<cplx>().asDiagonal();
  const double trace_psi = (t.adjoint() * b.psi * t).trace().real();
  return {b.noise_var / (1.0 - b.alpha * trace_psi), b.power / t.squaredNorm()};
}

namespace {

void enumerate(int depth, int d, int remaining, std::vector<int>& k, const std::function<void()>& emit) {
  if (depth == d) {
    emit();
    return;
  }
  for (int i = 0; i <= remaining; ++i) {
    k[static_cast<size_t>(depth)] = i;
    enumerate(depth + 1, d, remaining - i, k, emit);
  }
}

}  // namespace

std::vector<ParetoPoint> pareto_oracle(const ProblemSpec& spec, BoundMode mode, int grid) {
  if (spec.streams() > 3) throw Error(Errc::TooLarge, "pareto_oracle supports at most 3 modes");
  if (grid < 1 || grid > 200) throw Error(Errc::TooLarge, "grid must lie in [1, 200]");
  const EigenmodeBasis b = reduce_to_mmop(spec, mode);
  const int d = static_cast<int>(b.lambda_pi.size());
  const CMatrix base = b.tx_inv_sqrt * b.v_pi.leftCols(d);

  std::vector<ParetoPoint> out;
  std::vector<int> k(static_cast<size_t>(d));
  enumerate(0, d, grid, k, [&] {
    RVector f_sq(d);
    for (int i = 0; i < d; ++i) f_sq(i) = spec.power * k[static_cast<size_t>(i)] / grid;
    const CMatrix t = base * f_sq.cwiseSqrt().cast<cplx>().asDiagonal();
    // eta from the fixed point eta = alpha Tr(F F^H Psi) + noise with F = sqrt(eta) t
    const double tp = (t.adjoint() * spec.psi * t).trace().real();
    const double eta = spec.noise_var / (1.0 - b.alpha * tp);
    const CMatrix f = std::sqrt(eta) * t;
    out.push_back({f_sq, herm_eig(objective_matrix(f, spec), Order::Descending).values});
  });
  return out;
}

bool dominates(const RVector& a, const RVector& b, double margin) {
  bool strict = false;
  for (Index i = 0; i < a.size(); ++i) {
    if (a(i) < b(i)) return false;
    if (a(i) > b(i) + margin) strict = true;
  }
  return strict;
}

bool dominated_by_any(const RVector& eigs, const std::vector<ParetoPoint>& points, double margin) {
  for (const auto& p : points)
    if (((p.eigenvalues - eigs).array() > margin).all()) return true;
  return false;
}

std::vector<ParetoPoint> non_dominated(const std::vector<ParetoPoint>& points) {
  std::vector<ParetoPoint> out;
  for (const auto& p : points) {
    bool beaten = false;
    for (const auto& q : points)
      if (dominates(q.eigenvalues, p.eigenvalues, 1e-12)) {
        beaten = true;
        break;
      }
    if (!beaten) out.push_back(p);
  }
  return out;
}

}  // namespace mmo
