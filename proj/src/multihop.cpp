#include "mmo/multihop.hpp"

#include <algorithm>
#include <cmath>

#include "mmo/error.hpp"
#include "mmo/unitary.hpp"

namespace mmo {

HopSolution hop_from_precoder(const ProblemSpec& hop, const CMatrix& f) {
  HopSolution s;
  s.f_k = f;
  s.q_k = CMatrix::Identity(f.cols(), f.cols());
  const CMatrix k_inv_sqrt = psd_inv_sqrt(effective_noise(f, hop));
  const CMatrix z = k_inv_sqrt * hop.h * f;
  const CMatrix w = psd_inv_sqrt(hermitian_part(z * z.adjoint()) + CMatrix::Identity(z.rows(), z.rows()));
  s.m_k = w * z;
  s.relay_k = w * k_inv_sqrt;
  return s;
}

namespace {

HopSolution finish(const ProblemSpec& hop, const PrecoderSolution& p) {
  HopSolution s = hop_from_precoder(hop, p.f_opt);
  s.eta_fk = p.eta_f;
  s.basis_k = p.basis;
  s.f_sq = p.f_sq();
  return s;
}

}  // namespace

HopSolution solve_hop(const ProblemSpec& hop, BoundMode mode, std::span<const double> weights) {
  return finish(hop, solve(hop, mode, weights));
}

HopSolution solve_hop(const ProblemSpec& hop, BoundMode mode, Allocation rule) {
  const EigenmodeBasis b = reduce_to_mmop(hop, mode);
  return finish(hop, assemble(b, allocate(b, rule)));
}

std::vector<CMatrix> chain_rotations(const std::vector<HopSolution>& hops, ChainSchur schur) {
  const size_t k = hops.size();
  if (k == 0) return {};
  std::vector<Svd> f(k);
  for (size_t i = 0; i < k; ++i) f[i] = svd(hops[i].m_k);
  std::vector<CMatrix> qs(k);
  for (size_t i = 1; i < k; ++i) {
    if (hops[i].m_k.cols() != hops[i - 1].m_k.rows())
      throw Error(Errc::DimensionMismatch, "hop " + std::to_string(i + 1) + " input does not match previous output");
    qs[i] = f[i].v * f[i - 1].u.adjoint();
  }
  // First hop: everything downstream is fixed, rotate C^H C.
  CMatrix c = hops[0].m_k;
  for (size_t i = 1; i < k; ++i) c = hops[i].m_k * qs[i] * c;
  const CMatrix u = herm_eig(hermitian_part(c.adjoint() * c), Order::Descending).vectors;
  const Index d = u.rows();
  switch (schur) {
    case ChainSchur::Concave: qs[0] = u; break;
    case ChainSchur::AdditiveConvex: qs[0] = u * dft_matrix(d).adjoint(); break;
    case ChainSchur::MultiplicativeConvex: {
      const RVector lam = herm_eig(hermitian_part(c.adjoint() * c), Order::Descending).values;
      const RVector mse = (RVector::Ones(d) - lam).cwiseMax(1e-300);
      qs[0] = u * equal_diag_cholesky_rotation(mse.cast<cplx>().asDiagonal().toDenseMatrix()).q;
      break;
    }
  }
  return qs;
}

CMatrix chain_product(const std::vector<HopSolution>& hops, const std::vector<CMatrix>& qs) {
  if (hops.size() != qs.size()) throw Error(Errc::DimensionMismatch, "one rotation per hop expected");
  CMatrix c = hops.at(0).m_k * qs.at(0);
  for (size_t i = 1; i < hops.size(); ++i) c = hops[i].m_k * qs[i] * c;
  return c;
}

bool sv_product_bound_holds(const std::vector<CMatrix>& mats, double slack) {
  if (mats.empty()) return true;
  CMatrix prod = mats.back();
  for (size_t i = mats.size() - 1; i-- > 0;) {
    if (prod.cols() != mats[i].rows()) throw Error(Errc::DimensionMismatch, "matrices do not chain");
    prod = prod * mats[i];
  }
  const RVector lhs = svd(prod).singular_values;
  std::vector<RVector> sv;
  for (const auto& m : mats) sv.push_back(svd(m).singular_values);
  Index dim = lhs.size();
  for (const auto& s : sv) dim = std::min(dim, s.size());
  double l = 1.0, r = 1.0;
  for (Index k = 0; k < dim; ++k) {
    l *= lhs(k);
    double term = 1.0;
    for (const auto& s : sv) term *= s(k);
    r *= term;
    if (l > r + slack * std::max(r, kAbsFloor)) return false;
  }
  return true;
}

std::vector<HopSolution> solve_parallel(const MultiHopSpec& spec, BoundMode mode, Allocation rule) {
  if (spec.topology != Topology::Parallel) throw Error(Errc::NotApplicable, "solve_parallel needs a Parallel spec");
  if (!(spec.total_power > 0.0)) throw Error(Errc::NonFinite, "total power must be positive");
  const size_t k = spec.hops.size();
  if (k == 0) return {};

  // Each carrier's basis depends on its own power through alpha P Psi, so the
  // shared water level is found by a short fixed point on the power split.
  std::vector<double> split(k, spec.total_power / static_cast<double>(k));
  std::vector<EigenmodeBasis> bases(k);
  std::vector<RVector> alloc(k);
  for (int iter = 0; iter < 50; ++iter) {
    std::vector<Index> offs(k + 1, 0);
    for (size_t c = 0; c < k; ++c) {
      ProblemSpec s = spec.hops[c];
      s.power = std::max(split[c], 1e-12 * spec.total_power);
      bases[c] = reduce_to_mmop(s, mode);
      offs[c + 1] = offs[c] + bases[c].lambda_pi.size();
    }
    RVector g(offs[k]);
    for (size_t c = 0; c < k; ++c) g.segment(offs[c], bases[c].lambda_pi.size()) = bases[c].gains();
    // one water level across the union of modes
    std::vector<Index> idx(static_cast<size_t>(g.size()));
    for (Index i = 0; i < g.size(); ++i) idx[static_cast<size_t>(i)] = i;
    std::stable_sort(idx.begin(), idx.end(), [&](Index a, Index b) { return g(a) > g(b); });
    RVector gs(g.size());
    for (Index i = 0; i < g.size(); ++i) gs(i) = g(idx[static_cast<size_t>(i)]);
    const RVector fs = rule == Allocation::CapacityWaterfill
                           ? waterfill_capacity(gs, spec.total_power).f_sq
                           : waterfill({gs, RVector::Ones(gs.size()), spec.total_power}).f_sq;
    RVector f(g.size());
    for (Index i = 0; i < g.size(); ++i) f(idx[static_cast<size_t>(i)]) = fs(i);

    double change = 0.0;
    for (size_t c = 0; c < k; ++c) {
      alloc[c] = f.segment(offs[c], bases[c].lambda_pi.size());
      const double p = alloc[c].sum();
      change = std::max(change, std::abs(p - split[c]));
      split[c] = p;
    }
    if (change <= 1e-12 * spec.total_power) break;
  }

  std::vector<HopSolution> out;
  for (size_t c = 0; c < k; ++c) {
    EigenmodeBasis b = bases[c];
    b.power = split[c];
    HopSolution h;
    if (split[c] > 0.0) {
      h = finish(spec.hops[c], assemble(b, alloc[c]));
    } else {
      const PrecoderSolution p = assemble(b, RVector::Zero(b.lambda_pi.size()));
      h.f_k = p.f_opt;
      h.q_k = p.q_opt;
      h.eta_fk = p.eta_f;
      h.basis_k = b;
      h.f_sq = p.f_sq();
      h.m_k = CMatrix::Zero(spec.hops[c].n_r(), p.f_opt.cols());
      h.relay_k = CMatrix::Identity(spec.hops[c].n_r(), spec.hops[c].n_r()) / std::sqrt(spec.hops[c].noise_var);
    }
    out.push_back(std::move(h));
  }
  return out;
}

ChainMoments propagate_chain(const std::vector<ProblemSpec>& hops, const std::vector<CMatrix>& forward,
                             const std::vector<CMatrix>& relay) {
  if (hops.size() != forward.size() || hops.size() != relay.size())
    throw Error(Errc::DimensionMismatch, "hop, forward and relay counts differ");
  const Index d = forward.at(0).cols();
  ChainMoments m{CMatrix::Identity(d, d), CMatrix::Identity(d, d)};
  for (size_t k = 0; k < hops.size(); ++k) {
    const ProblemSpec& h = hops[k];
    const CMatrix& x = forward[k];
    const CMatrix& t = relay[k];
    if (x.cols() != m.cov.rows() || x.rows() != h.n_t() || t.cols() != h.n_r())
      throw Error(Errc::DimensionMismatch, "hop " + std::to_string(k + 1) + " does not conform");
    const CMatrix a = t * h.h * x;
    // E[dH X R X^H dH^H] = Tr(X R X^H Psi) Sigma
    const double err = (x * m.cov * x.adjoint() * h.psi).trace().real();
    const CMatrix noise = err * h.sigma + h.noise_var * CMatrix::Identity(h.n_r(), h.n_r());
    m.cov = hermitian_part(a * m.cov * a.adjoint() + t * noise * t.adjoint());
    m.cross = a * m.cross;
  }
  return m;
}

double chain_capacity_nats(const ChainMoments& m) {
  const Index d = m.cross.cols();
  const CMatrix e = hermitian_part(CMatrix::Identity(d, d) - m.cross.adjoint() * pd_inverse(m.cov) * m.cross);
  return -log_det_pd(e);
}

CMatrix chain_mse(const ChainMoments& m, const CMatrix& g) {
  const Index d = m.cross.cols();
  return hermitian_part(g * m.cov * g.adjoint() - g * m.cross - m.cross.adjoint() * g.adjoint() +
                        CMatrix::Identity(d, d));
}

CMatrix lmmse_receiver(const ChainMoments& m) { return m.cross.adjoint() * pd_inverse(m.cov); }

}  // namespace mmo
