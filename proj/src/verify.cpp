#include "mmo/verify.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "mmo/bench.hpp"
#include "mmo/channel.hpp"
#include "mmo/error.hpp"
#include "mmo/experiment.hpp"
#include "mmo/multihop.hpp"
#include "mmo/objectives.hpp"
#include "mmo/random.hpp"
#include "mmo/unitary.hpp"

namespace mmo {

namespace {

CMatrix eye(Index n) { return CMatrix::Identity(n, n); }

double rel(double a, double b) { return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-300}); }

template <class... Args>
std::string str(const Args&... a) {
  std::ostringstream os;
  os.precision(6);
  (os << ... << a);
  return os.str();
}

// Collects the first failure with a message.
struct Expect {
  CheckResult r;
  void that(bool ok, const std::string& what) {
    if (!ok && r.pass) r = {false, what};
  }
};

ProblemSpec random_spec(Index nr, Index nt, Rng& rng, bool sigma_identity = false) {
  ProblemSpec s;
  s.h = complex_gaussian(nr, nt, rng);
  std::uniform_real_distribution<double> u(0.01, 0.3);
  s.psi = u(rng) * random_psd(nt, rng) / static_cast<double>(nt);
  s.sigma = sigma_identity ? eye(nr) : CMatrix(random_pd(nr, rng) / static_cast<double>(nr));
  s.noise_var = 0.5 + u(rng);
  s.power = std::exp(std::uniform_real_distribution<double>(0.0, 4.0)(rng));
  return s;
}

ObjectiveCase random_case(int which, Index d, Rng& rng) {
  const CMatrix n = random_pd(d, rng);
  const CMatrix a = complex_gaussian(d, d, rng);
  const auto& sum = lookup_objective("sum-mse").fn;
  const auto& mx = lookup_objective("max-mse").fn;
  const auto& cap = lookup_objective("capacity").fn;
  switch (which) {
    case 1: return Case1{n};
    case 2: return Case2{a};
    case 3: return Case3{n};
    case 4: return Case4{n, random_pd(2, rng)};
    case 5: return Case5{a, n};
    case 6: return Case6{a};
    case 7: return Case7{AdditiveSchur::Concave, cap};
    case 8: return Case7{AdditiveSchur::Convex, mx};
    case 9: return Case8{MultiplicativeSchur::Concave, cap};
    default: return Case8{MultiplicativeSchur::Convex, sum};
  }
}

// ---- linalg ----

CheckResult linalg_ordering(std::uint64_t seed) {
  Rng rng(seed);
  Expect e;
  for (int t = 0; t < 20; ++t) {
    const CMatrix m = hermitian_part(complex_gaussian(5, 5, rng));
    const RVector d = herm_eig(m, Order::Descending).values, a = herm_eig(m, Order::Ascending).values;
    for (Index i = 1; i < 5; ++i) {
      e.that(d(i) <= d(i - 1), "descending spectrum increases");
      e.that(a(i) >= a(i - 1), "ascending spectrum decreases");
    }
    const RVector s = svd(complex_gaussian(4, 6, rng)).singular_values;
    for (Index i = 1; i < s.size(); ++i) e.that(s(i) <= s(i - 1), "singular values not descending");
  }
  return e.r;
}

CheckResult linalg_unitarity(std::uint64_t seed) {
  Rng rng(seed);
  Expect e;
  for (int t = 0; t < 20; ++t) {
    const Index n = 2 + t % 5;
    const CMatrix u = herm_eig(hermitian_part(complex_gaussian(n, n, rng)), Order::Descending).vectors;
    const Svd s = svd(complex_gaussian(n, n + 1, rng));
    const double tol = 1e-9 * std::sqrt(static_cast<double>(n));
    e.that((u.adjoint() * u - eye(n)).norm() <= tol, "eigenvectors not unitary");
    e.that((s.u.adjoint() * s.u - eye(n)).norm() <= tol, "U not unitary");
    e.that((s.v.adjoint() * s.v - eye(n + 1)).norm() <= tol, "V not unitary");
  }
  return e.r;
}

CheckResult linalg_sqrt(std::uint64_t seed) {
  Rng rng(seed);
  Expect e;
  for (int t = 0; t < 20; ++t) {
    const Index n = 2 + t % 4;
    const CMatrix m = random_psd(n, rng, 1 + t % n);
    const CMatrix r = psd_sqrt(m);
    e.that((r * r - m).norm() <= 1e-9 * std::max(1.0, m.norm()), "sqrt(m)^2 != m");
    const CMatrix p = random_pd(n, rng);
    const CMatrix w = psd_inv_sqrt(p);
    e.that((w * p * w - eye(n)).norm() <= 1e-9 * static_cast<double>(n), "m^{-1/2} m m^{-1/2} != I");
  }
  return e.r;
}

CheckResult linalg_kron(std::uint64_t seed) {
  Rng rng(seed);
  Expect e;
  for (int t = 0; t < 10; ++t) {
    const CMatrix a = complex_gaussian(2, 3, rng), b = complex_gaussian(3, 2, rng);
    const CMatrix c = complex_gaussian(3, 2, rng), d = complex_gaussian(2, 4, rng);
    const CMatrix lhs = kron(a, b) * kron(c, d), rhs = kron(a * c, b * d);
    e.that((lhs - rhs).norm() <= 1e-10 * std::max(1.0, rhs.norm()), "mixed product fails");
  }
  return e.r;
}

// ---- channel ----

CheckResult channel_covariance(std::uint64_t seed) {
  const ExpCorrModel model{0.5, 0.3, 0.2, 3, 3};
  const ChannelSampler s(model);
  const auto& c = s.correlations();
  struct Idx { Index i, j, k, l; };
  const std::vector<Idx> pairs = {{0, 0, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 1}, {1, 2, 2, 1}, {2, 1, 0, 0}};
  const int n = 10000;
  std::vector<std::vector<cplx>> prod(pairs.size());
  std::vector<double> hvar;
  for (int t = 0; t < n; ++t) {
    const ChannelDraw d = s.draw(seed + static_cast<std::uint64_t>(t));
    for (size_t p = 0; p < pairs.size(); ++p) {
      const auto& q = pairs[p];
      prod[p].push_back(d.delta_h(q.i, q.j) * std::conj(d.delta_h(q.k, q.l)));
    }
    hvar.push_back(std::norm(d.h(1, 1)));
  }
  Expect e;
  auto within = [&](const std::vector<double>& x, double target, const std::string& what) {
    double m = 0, v = 0;
    for (double a : x) m += a;
    m /= n;
    for (double a : x) v += (a - m) * (a - m);
    const double se = std::sqrt(v / (n - 1.0) / n);
    // 4 standard errors: several moments are checked at once
    e.that(std::abs(m - target) <= 4 * se + 1e-12, str(what, ": mean ", m, " target ", target, " se ", se));
  };
  for (size_t p = 0; p < pairs.size(); ++p) {
    const auto& q = pairs[p];
    const cplx target = c.sigma(q.i, q.k) * c.psi(q.j, q.l);
    std::vector<double> re, im;
    for (auto z : prod[p]) {
      re.push_back(z.real());
      im.push_back(z.imag());
    }
    within(re, target.real(), str("E[dH dH*] real, pair ", p));
    within(im, target.imag(), str("E[dH dH*] imag, pair ", p));
  }
  within(hvar, 1.0, "E|H_ij|^2");
  return e.r;
}

CheckResult channel_independence(std::uint64_t seed) {
  const ChannelSampler s({0.45, 0.45, 0.1, 4, 4});
  const int n = 10000;
  std::vector<double> re;
  for (int t = 0; t < n; ++t) {
    const ChannelDraw d = s.draw(seed + static_cast<std::uint64_t>(t));
    re.push_back((d.h_bar(0, 0) * std::conj(d.delta_h(0, 0))).real());
  }
  double m = 0, v = 0;
  for (double a : re) m += a;
  m /= n;
  for (double a : re) v += (a - m) * (a - m);
  const double se = std::sqrt(v / (n - 1.0) / n);
  Expect e;
  e.that(std::abs(m) <= 4 * se, str("estimate and error correlated: ", m, " se ", se));
  const ChannelDraw a = s.draw(seed), b = s.draw(seed);
  e.that(a.h == b.h && a.h_bar == b.h_bar, "draw not deterministic");
  e.that(a.h == CMatrix(a.h_bar + a.delta_h), "h != h_bar + delta_h");
  return e.r;
}

CheckResult channel_snr(std::uint64_t) {
  Expect e;
  for (double db : {-10.0, 0.0, 3.0, 17.5, 30.0}) {
    e.that(rel(linear_to_db(db_to_linear(db)), db) <= 1e-12 || std::abs(db) < 1e-12, "dB round trip");
    const ChannelSampler s({0.45, 0.45, 0.01, 2, 2});
    const ProblemSpec p = spec_from_draw(s.draw(1), s.correlations(), 2.0, db);
    e.that(rel(p.power / p.noise_var, std::pow(10.0, db / 10.0)) <= 1e-12, "P / noise != SNR");
  }
  return e.r;
}

// ---- mmop ----

template <class F>
CheckResult over_solutions(std::uint64_t seed, F&& body) {
  Rng rng(seed);
  Expect e;
  for (int t = 0; t < 30; ++t) {
    const Index nr = 2 + t % 3, nt = 2 + (t / 3) % 3;
    const ProblemSpec spec = random_spec(nr, nt, rng);
    for (BoundMode mode : {BoundMode::Lower, BoundMode::Upper}) body(e, spec, solve(spec, mode));
  }
  return e.r;
}

CheckResult mmop_boundary(std::uint64_t seed) {
  return over_solutions(seed, [](Expect& e, const ProblemSpec& s, const PrecoderSolution& p) {
    e.that(rel(p.f_opt.squaredNorm(), s.power) <= 1e-8, str("Tr(FF^H) ", p.f_opt.squaredNorm(), " != P ", s.power));
  });
}

CheckResult mmop_eta(std::uint64_t seed) {
  return over_solutions(seed, [](Expect& e, const ProblemSpec& s, const PrecoderSolution& p) {
    const EtaForms f = eta_forms(p.basis, p.f_sq());
    e.that(rel(f.fixed_point, f.closed) <= 1e-8, str("eta forms differ: ", f.fixed_point, " vs ", f.closed));
    const double self = (p.f_opt.adjoint() * s.psi * p.f_opt).trace().real() * p.basis.alpha + s.noise_var;
    e.that(rel(self, p.eta_f) <= 1e-8, "eta not self-consistent");
  });
}

CheckResult mmop_power_equivalence(std::uint64_t seed) {
  return over_solutions(seed, [](Expect& e, const ProblemSpec& s, const PrecoderSolution& p) {
    const CMatrix a = p.basis.alpha * s.power * s.psi + s.noise_var * eye(s.n_t());
    const double v = (p.f_opt * p.f_opt.adjoint() * a).trace().real() / p.eta_f;
    e.that(rel(v, s.power) <= 1e-8, str("Tr(FF^H A)/eta = ", v, ", P = ", s.power));
  });
}

CheckResult mmop_allocation_ordering(std::uint64_t seed) {
  return over_solutions(seed, [](Expect& e, const ProblemSpec&, const PrecoderSolution& p) {
    const RVector v = p.basis.gains().cwiseProduct(p.f_sq());
    for (Index i = 1; i < v.size(); ++i) e.that(v(i) <= v(i - 1) * (1 + 1e-10) + 1e-14, "lambda^2 f^2 increases");
  });
}

CheckResult mmop_loewner(std::uint64_t seed) {
  Rng rng(seed);
  Expect e;
  for (int t = 0; t < 30; ++t) {
    const ProblemSpec s = random_spec(3, 3, rng);
    const PrecoderSolution p = solve(s, BoundMode::Lower);
    const CMatrix kf = effective_noise(p.f_opt, s);
    e.that(loewner_geq(p.basis.k_psi, kf / p.eta_f), "K_F / eta exceeds K_psi");
    const CMatrix hf = s.h * p.f_opt;
    const CMatrix bound = hf.adjoint() * pd_inverse(p.eta_f * p.basis.k_psi) * hf;
    e.that(loewner_geq(objective_matrix(p.f_opt, s), hermitian_part(bound)), "bound objective not dominated");
  }
  return e.r;
}

CheckResult mmop_bound_gap(std::uint64_t seed) {
  Rng rng(seed);
  Expect e;
  const Index n = 4;
  const Correlations shape = build_correlations({0.45, 0.45, 0.5, n, n});
  const CMatrix psi_unit = shape.psi / 0.5;
  for (int t = 0; t < 5; ++t) {
    const CMatrix h = complex_gaussian(n, n, rng);
    double prev = INFINITY;
    for (double se : {1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6, 1e-7, 1e-8}) {
      const ProblemSpec s{h, se * psi_unit, shape.sigma, 1.0, 10.0};
      const EigenmodeBasis lo = reduce_to_mmop(s, BoundMode::Lower), up = reduce_to_mmop(s, BoundMode::Upper);
      for (Index i = 0; i < n; ++i)
        e.that(up.lambda_pi(i) >= lo.lambda_pi(i) * (1 - 1e-12), "upper gain below lower gain");
      const RVector el = lo.gains().cwiseProduct(waterfill({lo.gains(), RVector::Ones(n), s.power}).f_sq);
      const RVector eu = up.gains().cwiseProduct(waterfill({up.gains(), RVector::Ones(n), s.power}).f_sq);
      const double gap = (eu - el).cwiseAbs().maxCoeff() / el(0);
      e.that(gap < prev, str("gap did not shrink at sigma_e2 = ", se));
      prev = gap;
    }
    e.that(prev <= 1e-6, str("gap at sigma_e2 = 1e-8 is ", prev));
  }
  return e.r;
}

CheckResult mmop_exact_degeneracy(std::uint64_t seed) {
  Rng rng(seed);
  Expect e;
  for (int t = 0; t < 10; ++t) {
    ProblemSpec s = random_spec(3, 4, rng);
    s.sigma = 0.7 * eye(3);
    const PrecoderSolution a = solve(s, BoundMode::Lower), b = solve(s, BoundMode::Upper),
                           c = solve(s, BoundMode::Exact);
    e.that(a.basis.alpha == b.basis.alpha, "alpha differs with sigma ~ I");
    e.that((a.f_opt - b.f_opt).norm() <= 1e-12 * a.f_opt.norm(), "lower and upper differ with sigma ~ I");
    e.that((a.f_opt - c.f_opt).norm() <= 1e-12 * a.f_opt.norm(), "exact differs from lower with sigma ~ I");
  }
  return e.r;
}

CheckResult mmop_waterfill_kkt(std::uint64_t seed) {
  Rng rng(seed);
  std::uniform_real_distribution<double> u(0.01, 5.0);
  Expect e;
  for (int t = 0; t < 300; ++t) {
    const Index n = 1 + t % 6;
    RVector g(n), w(n);
    for (Index i = 0; i < n; ++i) g(i) = u(rng);
    std::sort(g.data(), g.data() + n, std::greater<>());
    // admissible weights: sqrt(w g) non-increasing
    double cap = INFINITY;
    for (Index i = 0; i < n; ++i) {
      w(i) = std::min(u(rng), cap * cap / g(i));
      cap = std::sqrt(w(i) * g(i));
    }
    const double p = u(rng) * 3;
    const WaterfillResult r = waterfill({g, w, p});
    e.that(rel(r.f_sq.sum(), p) <= 1e-10, "power not met");
    for (Index i = 0; i < n; ++i) {
      if (r.f_sq(i) <= 0) continue;
      const double grad = w(i) * g(i) / std::pow(g(i) * r.f_sq(i) + 1.0, 2);
      e.that(rel(grad, r.mu) <= 1e-9, "stationarity violated");
    }
    const RVector v = g.cwiseProduct(r.f_sq);
    for (Index i = 1; i < n; ++i) e.that(v(i) <= v(i - 1) * (1 + 1e-12) + 1e-15, "ordering violated");
  }
  return e.r;
}

CheckResult mmop_pareto(std::uint64_t seed) {
  Rng rng(seed);
  Expect e;
  for (int t = 0; t < 4; ++t) {
    const ProblemSpec s = random_spec(2, 2, rng, true);
    const auto pts = pareto_oracle(s, BoundMode::Exact, 80);
    const PrecoderSolution p = solve(s, BoundMode::Exact);
    const RVector eig = herm_eig(objective_matrix(p.f_opt, s), Order::Descending).values;
    e.that(!dominated_by_any(eig, pts, 1e-6), "solution dominated by a grid point");
  }
  return e.r;
}

// ---- unitary ----

using IneqFn = IneqBound (*)(const CMatrix&, const CMatrix&);
using MidFn = double (*)(const CMatrix&, const CMatrix&, const CMatrix&);
struct Ineq {
  const char* name;
  IneqFn bound;
  MidFn mid;
};
const Ineq kIneqs[] = {{"trace product", ineq_trace_product, trace_product_at},
                       {"det of sum", ineq_logdet_sum, det_sum_at},
                       {"det of product plus I", ineq_logdet_product_plus_i, det_product_plus_i_at},
                       {"trace of inverse sum", ineq_trace_inv_sum, trace_inv_sum_at}};

CheckResult unitary_containment(std::uint64_t seed) {
  Rng rng(seed);
  Expect e;
  for (int t = 0; t < 20; ++t) {
    const Index n = 2 + t % 4;
    const CMatrix a = random_psd(n, rng), b = random_pd(n, rng);
    for (const auto& q : kIneqs) {
      const IneqBound r = q.bound(a, b);
      e.that(r.lower <= r.upper * (1 + 1e-12), str(q.name, ": lower > upper"));
      for (int k = 0; k < 50; ++k) {
        const double v = q.mid(a, b, haar_unitary(n, rng));
        const double slack = 1e-9 * std::max(1.0, std::abs(r.upper));
        e.that(v >= r.lower - slack && v <= r.upper + slack, str(q.name, ": ", v, " outside [", r.lower, ", ", r.upper, "]"));
      }
    }
  }
  return e.r;
}

CheckResult unitary_attainment(std::uint64_t seed) {
  Rng rng(seed);
  Expect e;
  for (int t = 0; t < 20; ++t) {
    const Index n = 2 + t % 5;
    const CMatrix a = random_psd(n, rng), b = random_pd(n, rng);
    for (const auto& q : kIneqs) {
      const IneqBound r = q.bound(a, b);
      e.that(rel(q.mid(a, b, r.q_lower), r.lower) <= 1e-9, str(q.name, ": lower not attained"));
      e.that(rel(q.mid(a, b, r.q_upper), r.upper) <= 1e-9, str(q.name, ": upper not attained"));
    }
  }
  return e.r;
}

CheckResult unitary_det_commutation(std::uint64_t seed) {
  Rng rng(seed);
  Expect e;
  for (int t = 0; t < 20; ++t) {
    const CMatrix a = complex_gaussian(3, 5, rng), b = complex_gaussian(5, 3, rng);
    const cplx l = (a * b + eye(3)).determinant(), r = (b * a + eye(5)).determinant();
    e.that(std::abs(l - r) <= 1e-10 * std::max(1.0, std::abs(l)), "|AB+I| != |BA+I|");
  }
  return e.r;
}

CheckResult unitary_case4(std::uint64_t seed) {
  Rng rng(seed);
  Expect e;
  for (int t = 0; t < 10; ++t) {
    const CMatrix m = random_psd(3, rng), n = random_pd(3, rng), m2 = random_pd(2, rng);
    const CMatrix q = haar_unitary(3, rng);
    const CMatrix inner = q.adjoint() * m * q;
    const double c4 = case_objective(Case4{n, m2}, inner), c3 = case_objective(Case3{n}, inner);
    e.that(rel(c4, c3 * pd_inverse(m2).trace().real()) <= 1e-10, "Kronecker factorisation fails");
    e.that((optimal_q(Case4{n, m2}, m).q - optimal_q(Case3{n}, m).q).norm() <= 1e-12, "Case 4 Q != Case 3 Q");
  }
  return e.r;
}

CheckResult unitary_certificates(std::uint64_t seed) {
  Rng rng(seed);
  Expect e;
  for (int which = 1; which <= 10; ++which)
    for (int t = 0; t < 3; ++t) {
      const ObjectiveCase c = random_case(which, 4, rng);
      const CMatrix m = random_psd(4, rng);
      const CMatrix q = optimal_q(c, m).q;
      const double best = case_objective(c, q.adjoint() * m * q);
      for (int k = 0; k < 200; ++k) {
        const CMatrix w = haar_unitary(4, rng);
        const double v = case_objective(c, w.adjoint() * m * w);
        e.that(best <= v + 1e-9 * std::max(1.0, std::abs(v)), str("case variant ", which, ": random Q beats Q_opt"));
      }
    }
  return e.r;
}

CheckResult unitary_equal_diag(std::uint64_t seed) {
  Rng rng(seed);
  Expect e;
  for (int t = 0; t < 20; ++t) {
    const Index n = 2 + t % 5;
    const CMatrix m = random_pd(n, rng);
    const CMatrix q = equal_diag_cholesky_rotation(m).q;
    e.that((q.adjoint() * q - eye(n)).norm() <= 1e-10, "Q_T not unitary");
    const RVector d = cholesky_diagonal(q.adjoint() * m * q);
    e.that(d.maxCoeff() / d.minCoeff() <= 1 + 1e-8, "Cholesky diagonal not equal");
    e.that(rel(d(0), std::exp(log_det_pd(m) / (2.0 * static_cast<double>(n)))) <= 1e-9, "diagonal != det^{1/2N}");
  }
  return e.r;
}

// ---- objectives ----

CheckResult objectives_consistency(std::uint64_t seed) {
  Rng rng(seed);
  Expect e;
  for (int which = 1; which <= 10; ++which)
    for (int t = 0; t < 3; ++t) {
      const ProblemSpec s = random_spec(4, 4, rng);
      const ObjectiveCase c = random_case(which, 4, rng);
      const PrecoderSolution p = solve(s, BoundMode::Lower);
      const CMatrix m = objective_matrix(p.f_opt, s);
      const CMatrix q = optimal_q(c, m).q;
      const double vm = eval_f_matrix(c, p.f_opt * q, s);
      const double vv = eval_f_vector(c, herm_eig(m, Order::Descending).values);
      e.that(rel(vm, vv) <= 1e-9 || std::abs(vm - vv) <= 1e-12, str("variant ", which, ": matrix ", vm, " vector ", vv));
    }
  return e.r;
}

CheckResult objectives_monotone(std::uint64_t seed) {
  Rng rng(seed);
  std::uniform_real_distribution<double> u(0.0, 5.0);
  Expect e;
  for (int which = 1; which <= 10; ++which) {
    const ObjectiveCase c = random_case(which, 4, rng);
    for (int t = 0; t < 20; ++t) {
      RVector l(4);
      for (auto& x : l) x = u(rng);
      const double base = eval_f_vector(c, l);
      for (Index i = 0; i < 4; ++i) {
        RVector l2 = l;
        l2(i) += 0.1 * u(rng) + 1e-3;
        e.that(eval_f_vector(c, l2) <= base + 1e-12 * std::max(1.0, std::abs(base)), str("variant ", which, " increased"));
      }
    }
  }
  return e.r;
}

CheckResult objectives_invariance(std::uint64_t seed) {
  Rng rng(seed);
  Expect e;
  for (int which = 1; which <= 10; ++which) {
    const ObjectiveCase c = random_case(which, 4, rng);
    const CMatrix m = random_psd(4, rng);
    const double v = eval_f_vector(c, herm_eig(m, Order::Descending).values);
    for (int t = 0; t < 10; ++t) {
      const CMatrix w = haar_unitary(4, rng);
      const double v2 = eval_f_vector(c, herm_eig(hermitian_part(w.adjoint() * m * w), Order::Descending).values);
      e.that(std::abs(v - v2) <= 1e-10 * std::max(1.0, std::abs(v)), str("variant ", which, " depends on the basis"));
    }
  }
  return e.r;
}

CheckResult objectives_maxmse_dft(std::uint64_t seed) {
  Rng rng(seed);
  Expect e;
  const auto& mx = lookup_objective("max-mse");
  for (int t = 0; t < 20; ++t) {
    const ProblemSpec s = random_spec(4, 4, rng);
    const PrecoderSolution p = solve(s, BoundMode::Lower);
    const CMatrix q = optimal_q(make_case(mx), objective_matrix(p.f_opt, s)).q;
    const CMatrix mse = mse_matrix(p.f_opt, q, s);
    const RVector d = mse.diagonal().real();
    e.that(rel(d.maxCoeff(), mse.trace().real() / 4.0) <= 1e-10, "max MSE != sum MSE / N after DFT");
  }
  return e.r;
}

// ---- multihop ----

std::vector<ProblemSpec> random_chain(int k, Rng& rng) {
  std::vector<ProblemSpec> v;
  for (int i = 0; i < k; ++i) v.push_back(random_spec(4, 4, rng));
  return v;
}

CheckResult multihop_independence(std::uint64_t seed) {
  Rng rng(seed);
  Expect e;
  const auto chain = random_chain(3, rng);
  std::vector<HopSolution> all;
  for (const auto& s : chain) all.push_back(solve_hop(s, BoundMode::Lower));
  for (size_t k = 0; k < chain.size(); ++k) {
    const HopSolution alone = solve_hop(chain[k], BoundMode::Lower);
    e.that(alone.f_k == all[k].f_k, "hop solution depends on the other hops");
    const PrecoderSolution direct = solve(chain[k], BoundMode::Lower);
    e.that(direct.f_opt == alone.f_k, "hop solve differs from the single-hop solve");
    const RVector sv = svd(alone.m_k).singular_values;
    e.that(sv.maxCoeff() < 1.0 && sv.minCoeff() >= 0.0, "M_k singular values outside [0,1)");
  }
  return e.r;
}

CheckResult multihop_sv_bound(std::uint64_t seed) {
  Rng rng(seed);
  std::uniform_int_distribution<int> dim(1, 5);
  Expect e;
  for (int t = 0; t < 300; ++t) {
    const int a = dim(rng), b = dim(rng), c = dim(rng), d = dim(rng);
    const std::vector<CMatrix> mats = {complex_gaussian(b, a, rng), complex_gaussian(c, b, rng),
                                       complex_gaussian(d, c, rng)};
    e.that(sv_product_bound_holds(mats), "random triple violates the singular value product bound");
  }
  return e.r;
}

CheckResult multihop_attainment(std::uint64_t seed) {
  Rng rng(seed);
  Expect e;
  for (int t = 0; t < 5; ++t) {
    const auto chain = random_chain(3, rng);
    std::vector<HopSolution> hops;
    for (const auto& s : chain) hops.push_back(solve_hop(s, BoundMode::Lower));
    const auto qs = chain_rotations(hops, ChainSchur::Concave);
    const RVector got = svd(chain_product(hops, qs)).singular_values;
    RVector want = RVector::Ones(4);
    for (const auto& h : hops) want = want.cwiseProduct(svd(h.m_k).singular_values);
    double lp = 1, rp = 1;
    for (Index k = 0; k < 4; ++k) {
      lp *= got(k);
      rp *= want(k);
      // switched-off modes leave rounding noise on both sides
      e.that(std::abs(lp - rp) <= 1e-8 * rp + 1e-14, "chain does not attain the product bound");
    }
  }
  return e.r;
}

CheckResult multihop_first_hop(std::uint64_t seed) {
  Rng rng(seed);
  Expect e;
  const auto chain = random_chain(3, rng);
  std::vector<HopSolution> hops;
  for (const auto& s : chain) hops.push_back(solve_hop(s, BoundMode::Lower));
  {
    const CMatrix c = chain_product(hops, chain_rotations(hops, ChainSchur::Concave));
    CMatrix g = c.adjoint() * c;
    const double off = (g - CMatrix(g.diagonal().asDiagonal())).norm();
    e.that(off <= 1e-10 * g.norm(), "concave rotation does not diagonalise");
  }
  {
    const CMatrix c = chain_product(hops, chain_rotations(hops, ChainSchur::AdditiveConvex));
    const RVector d = (eye(4) - c.adjoint() * c).diagonal().real();
    e.that(d.maxCoeff() - d.minCoeff() <= 1e-10, "additive convex rotation leaves unequal MSE diagonal");
  }
  {
    const CMatrix c = chain_product(hops, chain_rotations(hops, ChainSchur::MultiplicativeConvex));
    const RVector d = cholesky_diagonal(eye(4) - c.adjoint() * c);
    e.that(d.maxCoeff() / d.minCoeff() <= 1 + 1e-8, "multiplicative convex rotation leaves unequal Cholesky diagonal");
  }
  return e.r;
}

CheckResult multihop_parallel(std::uint64_t seed) {
  Rng rng(seed);
  Expect e;
  MultiHopSpec spec;
  spec.topology = Topology::Parallel;
  spec.total_power = 6.0;
  spec.hops = random_chain(2, rng);
  const auto sol = solve_parallel(spec, BoundMode::Lower, Allocation::CapacityWaterfill);
  double total = 0.0, rate = -1.0;
  for (const auto& h : sol) {
    total += h.f_sq.sum();
    const RVector g = h.basis_k.gains();
    for (Index i = 0; i < g.size(); ++i) {
      if (h.f_sq(i) <= 0) continue;
      const double r = g(i) / (1 + g(i) * h.f_sq(i));
      if (rate < 0) rate = r;
      e.that(rel(r, rate) <= 1e-8, "marginal rates differ across carriers");
    }
  }
  e.that(rel(total, spec.total_power) <= 1e-10, "shared budget not met");
  return e.r;
}

// ---- bench ----

CheckResult bench_monotone(std::uint64_t seed) {
  Rng rng(seed);
  Expect e;
  for (int t = 0; t < 5; ++t) {
    const ProblemSpec s = random_spec(4, 4, rng);
    const IterResult r = iterative_lmmse(s, {100, 1e-10, seed + static_cast<std::uint64_t>(t)}, Case3{eye(4)});
    for (size_t i = 1; i < r.trace.size(); ++i) e.that(r.trace[i] <= r.trace[i - 1], "objective trace increased");
  }
  return e.r;
}

CheckResult bench_overlap(std::uint64_t seed) {
  Rng rng(seed);
  Expect e;
  for (int t = 0; t < 5; ++t) {
    ProblemSpec s = random_spec(3, 3, rng);
    if (t % 2) s.psi = 0.05 * eye(3);
    else s.sigma = eye(3);
    const PrecoderSolution p = solve(s, BoundMode::Exact);
    const double cf = robust_sum_mse(p.f_opt, s);
    const CMatrix init = std::sqrt(s.power / 3.0) * eye(3);
    const IterResult r = iterative_lmmse(s, {5000, 1e-15, 0}, Case3{eye(3)}, init);
    e.that(rel(cf, r.trace.back()) <= 1e-5, str("closed form ", cf, " iterative ", r.trace.back()));
  }
  return e.r;
}

CheckResult bench_continuity(std::uint64_t seed) {
  Rng rng(seed);
  Expect e;
  const Correlations shape = build_correlations({0.45, 0.45, 0.5, 4, 4});
  const ProblemSpec s{complex_gaussian(4, 4, rng), 2e-9 * shape.psi, shape.sigma, 1.0, 10.0};
  const PrecoderSolution r = solve(s, BoundMode::Lower), n = non_robust_baseline(s);
  e.that((r.f_sq() - n.f_sq()).cwiseAbs().maxCoeff() <= 1e-6, "non-robust allocation does not approach robust");
  return e.r;
}

// ---- cli ----

ExperimentConfig small_config(std::uint64_t seed) {
  ExperimentConfig c;
  c.experiment = ExperimentKind::BoundGap;
  c.model = {0.45, 0.45, 0.01, 4, 4};
  c.snr_db_grid = {0, 20};
  c.trials = 8;
  c.seed = seed;
  return c;
}

CheckResult cli_reproducible(std::uint64_t seed) {
  Expect e;
  ExperimentConfig c = small_config(seed);
  e.that(to_csv(run_experiment(c)) == to_csv(run_experiment(c)), "same config gives different CSV");
  c.trials = 1;
  e.that(to_csv(run_experiment(c)) == to_csv(run_experiment(c)), "trials=1 not reproducible");
  return e.r;
}

CheckResult cli_serial_parallel(std::uint64_t seed) {
  Expect e;
  ExperimentConfig c = small_config(seed);
  for (auto k : {ExperimentKind::BoundGap, ExperimentKind::MultiHopCapacity}) {
    c.experiment = k;
    e.that(to_csv(run_experiment(c, Exec::Serial)) == to_csv(run_experiment(c, Exec::Parallel)),
           "serial and parallel sweeps differ");
  }
  return e.r;
}

CheckResult cli_stderr_scaling(std::uint64_t seed) {
  Expect e;
  ExperimentConfig c = small_config(seed);
  c.snr_db_grid = {10};
  c.trials = 100;
  const auto a = run_experiment(c);
  c.trials = 400;
  const auto b = run_experiment(c);
  const double ratio = a[0].stderr_ / b[0].stderr_;
  e.that(ratio > 1.5 && ratio < 2.6, str("stderr ratio 100 vs 400 trials is ", ratio, ", expected about 2"));
  return e.r;
}

CheckResult cli_config(std::uint64_t) {
  Expect e;
  const ExperimentConfig c = parse_config_text("experiment = solve\n");
  e.that(c.trials == 500 && c.seed == 42, "defaults not applied");
  e.that(parse_snr_grid("0:5:30") == std::vector<double>{0, 5, 10, 15, 20, 25, 30}, "range expansion");
  try {
    parse_config_text("[sweep]\ntrials = 3\n");
    e.that(false, "missing experiment accepted");
  } catch (const Error& err) {
    e.that(err.code() == Errc::ConfigError && std::string(err.what()).find("experiment") != std::string::npos,
           "missing experiment not named");
  }
  return e.r;
}

}  // namespace

const std::vector<Check>& verify_checks() {
  static const std::vector<Check> checks = {
      {"linalg.ordering_contract", linalg_ordering},
      {"linalg.unitarity", linalg_unitarity},
      {"linalg.sqrt_consistency", linalg_sqrt},
      {"linalg.kron_mixed_product", linalg_kron},
      {"channel.covariance_identity", channel_covariance},
      {"channel.independence", channel_independence},
      {"channel.snr_bookkeeping", channel_snr},
      {"mmop.boundary_activity", mmop_boundary},
      {"mmop.eta_double_formula", mmop_eta},
      {"mmop.power_constraint_equivalence", mmop_power_equivalence},
      {"mmop.allocation_ordering", mmop_allocation_ordering},
      {"mmop.loewner_sandwich", mmop_loewner},
      {"mmop.monotone_bound_gap", mmop_bound_gap},
      {"mmop.exact_mode_degeneracy", mmop_exact_degeneracy},
      {"mmop.waterfill_kkt", mmop_waterfill_kkt},
      {"mmop.pareto_nondominated", mmop_pareto},
      {"unitary.containment", unitary_containment},
      {"unitary.attainment", unitary_attainment},
      {"unitary.det_commutation", unitary_det_commutation},
      {"unitary.case4_factorization", unitary_case4},
      {"unitary.optimality_certificates", unitary_certificates},
      {"unitary.equal_diag_cholesky", unitary_equal_diag},
      {"objectives.matrix_vector_consistency", objectives_consistency},
      {"objectives.monotonicity", objectives_monotone},
      {"objectives.unitary_invariance", objectives_invariance},
      {"objectives.maxmse_equal_diagonal", objectives_maxmse_dft},
      {"multihop.per_hop_independence", multihop_independence},
      {"multihop.sv_product_bound_random", multihop_sv_bound},
      {"multihop.sv_product_bound_attainment", multihop_attainment},
      {"multihop.first_hop_rotation", multihop_first_hop},
      {"multihop.parallel_water_level", multihop_parallel},
      {"bench.coordinate_descent_monotone", bench_monotone},
      {"bench.overlap_agreement", bench_overlap},
      {"bench.nonrobust_continuity", bench_continuity},
      {"cli.reproducibility", cli_reproducible},
      {"cli.serial_parallel_agreement", cli_serial_parallel},
      {"cli.stderr_scaling", cli_stderr_scaling},
      {"cli.config_parsing", cli_config},
  };
  return checks;
}

int run_verify(std::uint64_t seed, std::ostream& os, const std::vector<Check>& checks) {
  int failures = 0;
  for (const auto& c : checks) {
    CheckResult r;
    try {
      r = c.run(seed);
    } catch (const std::exception& ex) {
      r = {false, std::string("threw: ") + ex.what()};
    }
    if (r.pass) {
      os << "PASS " << c.name << "\n";
    } else {
      ++failures;
      os << "FAIL " << c.name << ": " << r.detail << "\n";
    }
  }
  os << (failures ? "verify: " + std::to_string(failures) + " check(s) failed\n"
                  : "verify: all " + std::to_string(checks.size()) + " checks passed\n");
  return failures;
}

int run_verify(std::uint64_t seed, std::ostream& os) { return run_verify(seed, os, verify_checks()); }

}  // namespace mmo
