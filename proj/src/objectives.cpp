#include "mmo/objectives.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "mmo/error.hpp"
#include "mmo/unitary.hpp"

namespace mmo {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

CMatrix eye(Index n) { return CMatrix::Identity(n, n); }

RVector sorted(RVector v, bool descending) {
  if (descending)
    std::sort(v.data(), v.data() + v.size(), std::greater<>());
  else
    std::sort(v.data(), v.data() + v.size());
  return v;
}

RVector herm_values(const CMatrix& m, Order o) { return herm_eig(m, o).values; }

}  // namespace

double case_objective(const ObjectiveCase& c, const CMatrix& inner) {
  const Index d = inner.rows();
  return std::visit(
      overloaded{
          [&](const Case1& k) { return -log_det_pd(hermitian_part(inner + k.n)); },
          [&](const Case2& k) {
            const Index l = k.a.cols();
            return -log_det_pd(hermitian_part(k.a.adjoint() * inner * k.a) + eye(l));
          },
          [&](const Case3& k) { return pd_inverse(hermitian_part(inner + k.n)).trace().real(); },
          [&](const Case4& k) {
            return pd_inverse(hermitian_part(kron(inner + k.n, k.m))).trace().real();
          },
          [&](const Case5& k) {
            const CMatrix e = pd_inverse(hermitian_part(inner) + eye(d));
            return log_det_pd(hermitian_part(k.a.adjoint() * e * k.a + k.n));
          },
          [&](const Case6& k) {
            const CMatrix e = pd_inverse(hermitian_part(inner) + eye(d));
            return (k.a.adjoint() * e * k.a).trace().real();
          },
          [&](const Case7& k) {
            const CMatrix e = pd_inverse(hermitian_part(inner) + eye(d));
            return k.f.fn(e.diagonal().real());
          },
          [&](const Case8& k) {
            const CMatrix e = pd_inverse(hermitian_part(inner) + eye(d));
            return k.f.fn(cholesky_diagonal(e).cwiseAbs2());
          },
      },
      c);
}

double eval_f_matrix(const ObjectiveCase& c, const CMatrix& x, const ProblemSpec& spec) {
  if (x.rows() != spec.n_t()) throw Error(Errc::DimensionMismatch, "X rows != N_T");
  return case_objective(c, objective_matrix(x, spec));
}

double eval_f_vector(const ObjectiveCase& c, const RVector& eigs_in) {
  const RVector lam = sorted(eigs_in.cwiseMax(0.0), true);
  const Index d = lam.size();
  const RVector mse = (lam.array() + 1.0).inverse().matrix();
  return std::visit(
      overloaded{
          [&](const Case1& k) {
            const RVector n = herm_values(k.n, Order::Ascending);
            return -(lam + n).array().log().sum();
          },
          [&](const Case2& k) {
            const RVector aa = herm_values(hermitian_part(k.a * k.a.adjoint()), Order::Descending).cwiseMax(0.0);
            return -(lam.cwiseProduct(aa).array() + 1.0).log().sum();
          },
          [&](const Case3& k) {
            const RVector n = herm_values(k.n, Order::Ascending);
            return (lam + n).cwiseInverse().sum();
          },
          [&](const Case4& k) {
            const RVector n = herm_values(k.n, Order::Ascending);
            return (lam + n).cwiseInverse().sum() * pd_inverse(k.m).trace().real();
          },
          [&](const Case5& k) {
            const CMatrix ana = hermitian_part(k.a * pd_inverse(k.n) * k.a.adjoint());
            const RVector s = herm_values(ana, Order::Descending).cwiseMax(0.0);
            // |A^H E A + N| = |N| |A N^{-1} A^H E + I|, E = (Lambda + I)^{-1}
            return log_det_pd(k.n) + ((s + lam).array() + 1.0).log().sum() - (lam.array() + 1.0).log().sum();
          },
          [&](const Case6& k) {
            const RVector aa = herm_values(hermitian_part(k.a * k.a.adjoint()), Order::Descending).cwiseMax(0.0);
            return aa.cwiseProduct(mse).sum();
          },
          [&](const Case7& k) {
            if (k.schur == AdditiveSchur::Concave) return k.f.fn(mse);
            return k.f.fn(RVector::Constant(d, mse.mean()));
          },
          [&](const Case8& k) {
            if (k.schur == MultiplicativeSchur::Concave) return k.f.fn(mse);
            const double gm = std::exp(mse.array().log().mean());
            return k.f.fn(RVector::Constant(d, gm));
          },
      },
      c);
}

CMatrix mse_matrix(const CMatrix& f, const CMatrix& q, const ProblemSpec& spec) {
  const CMatrix m = objective_matrix(f, spec);
  if (q.rows() != m.rows() || q.cols() != m.cols()) throw Error(Errc::DimensionMismatch, "Q does not conform");
  return pd_inverse(hermitian_part(q.adjoint() * m * q) + eye(m.rows()));
}

const std::vector<NamedObjective>& named_scalar_objectives() {
  static const std::vector<NamedObjective> reg = {
      {"sum-mse", SchurClass::AdditiveConcave, Allocation::SumMseWaterfill,
       {"sum-mse", [](const RVector& d) { return d.sum(); }}},
      {"max-mse", SchurClass::AdditiveConvex, Allocation::SumMseWaterfill,
       {"max-mse", [](const RVector& d) { return d.maxCoeff(); }}},
      // minimising sum log d maximises sum log(1 + lambda) once diagonalised
      {"capacity", SchurClass::AdditiveConcave, Allocation::CapacityWaterfill,
       {"capacity", [](const RVector& d) { return d.array().log().sum(); }}},
      {"prod-mse", SchurClass::MultiplicativeConcave, Allocation::CapacityWaterfill,
       {"prod-mse", [](const RVector& d) { return d.prod(); }}},
  };
  return reg;
}

const NamedObjective& lookup_objective(std::string_view name) {
  for (const auto& o : named_scalar_objectives())
    if (o.name == name) return o;
  throw Error(Errc::UnknownObjective, "unknown objective '" + std::string(name) + "'");
}

ObjectiveCase make_case(const NamedObjective& obj) {
  switch (obj.schur) {
    case SchurClass::AdditiveConcave: return Case7{AdditiveSchur::Concave, obj.fn};
    case SchurClass::AdditiveConvex: return Case7{AdditiveSchur::Convex, obj.fn};
    case SchurClass::MultiplicativeConcave: return Case8{MultiplicativeSchur::Concave, obj.fn};
    case SchurClass::MultiplicativeConvex: return Case8{MultiplicativeSchur::Convex, obj.fn};
  }
  throw Error(Errc::NotApplicable, "bad Schur class");
}

double capacity_nats(const RVector& eigs) { return (eigs.cwiseMax(0.0).array() + 1.0).log().sum(); }
double nats_to_bits(double nats) { return nats / std::numbers::ln2; }

RVector allocate(const EigenmodeBasis& basis, Allocation rule) {
  const RVector g = basis.gains();
  if (rule == Allocation::CapacityWaterfill) return waterfill_capacity(g, basis.power).f_sq;
  return waterfill({g, RVector::Ones(g.size()), basis.power}).f_sq;
}

}  // namespace mmo
