#include "mmo/unitary.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <utility>

#include "mmo/error.hpp"

namespace mmo {

namespace {

struct Pair {
  HermEig a;       // descending
  HermEig b;       // descending
  HermEig b_asc;   // ascending
};

Pair prepare(const CMatrix& a, const CMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw Error(Errc::DimensionMismatch, "inequality operands differ in shape");
  require_psd(a, "A");
  require_psd(b, "B");
  return {herm_eig(a, Order::Descending), herm_eig(b, Order::Descending), herm_eig(b, Order::Ascending)};
}

RVector clamp0(const RVector& v) { return v.cwiseMax(0.0); }

double prod_exp(const RVector& v) {
  double acc = 0.0;
  for (Index i = 0; i < v.size(); ++i) {
    if (v(i) <= 0.0) return 0.0;
    acc += std::log(v(i));
  }
  return std::exp(acc);
}

}  // namespace

IneqBound ineq_trace_product(const CMatrix& a, const CMatrix& b) {
  const Pair p = prepare(a, b);
  const RVector la = clamp0(p.a.values), lb = clamp0(p.b.values), lb_up = clamp0(p.b_asc.values);
  IneqBound r;
  r.lower = la.dot(lb_up);
  r.upper = la.dot(lb);
  r.q_lower = p.a.vectors * p.b_asc.vectors.adjoint();
  r.q_upper = p.a.vectors * p.b.vectors.adjoint();
  return r;
}

IneqBound ineq_logdet_sum(const CMatrix& a, const CMatrix& b) {
  const Pair p = prepare(a, b);
  const RVector la = clamp0(p.a.values), lb = clamp0(p.b.values), lb_up = clamp0(p.b_asc.values);
  IneqBound r;
  r.lower = prod_exp(la + lb);
  r.upper = prod_exp(la + lb_up);
  r.q_lower = p.a.vectors * p.b.vectors.adjoint();
  r.q_upper = p.a.vectors * p.b_asc.vectors.adjoint();
  return r;
}

IneqBound ineq_logdet_product_plus_i(const CMatrix& a, const CMatrix& b) {
  const Pair p = prepare(a, b);
  const RVector la = clamp0(p.a.values), lb = clamp0(p.b.values), lb_up = clamp0(p.b_asc.values);
  IneqBound r;
  r.lower = prod_exp(la.cwiseProduct(lb_up).array() + 1.0);
  r.upper = prod_exp(la.cwiseProduct(lb).array() + 1.0);
  r.q_lower = p.a.vectors * p.b_asc.vectors.adjoint();
  r.q_upper = p.a.vectors * p.b.vectors.adjoint();
  return r;
}

IneqBound ineq_trace_inv_sum(const CMatrix& a, const CMatrix& b) {
  const Pair p = prepare(a, b);
  const RVector la = clamp0(p.a.values), lb = clamp0(p.b.values), lb_up = clamp0(p.b_asc.values);
  const Index n = la.size();
  const double scale = std::max({la.size() ? la(0) : 0.0, lb.size() ? lb(0) : 0.0, kAbsFloor});
  // Q can rotate any null direction of A onto one of B unless one side is PD.
  if (n > 0 && la(n - 1) <= kSingularTol * scale && lb(n - 1) <= kSingularTol * scale)
    throw Error(Errc::SingularSum, "A + B is singular for some alignment");
  IneqBound r;
  r.lower = (la + lb_up).cwiseInverse().sum();
  r.upper = (la + lb).cwiseInverse().sum();
  r.q_lower = p.a.vectors * p.b_asc.vectors.adjoint();
  r.q_upper = p.a.vectors * p.b.vectors.adjoint();
  return r;
}

double trace_product_at(const CMatrix& a, const CMatrix& b, const CMatrix& q) {
  return (q.adjoint() * a * q * b).trace().real();
}

double det_sum_at(const CMatrix& a, const CMatrix& b, const CMatrix& q) {
  return std::exp(log_det_psd(hermitian_part(q.adjoint() * a * q + b)));
}

double det_product_plus_i_at(const CMatrix& a, const CMatrix& b, const CMatrix& q) {
  // |X B + I| = |B^{1/2} X B^{1/2} + I|
  const CMatrix bh = psd_sqrt(b);
  const CMatrix inner = hermitian_part(bh * q.adjoint() * a * q * bh);
  return std::exp(log_det_pd(inner + CMatrix::Identity(a.rows(), a.cols())));
}

double trace_inv_sum_at(const CMatrix& a, const CMatrix& b, const CMatrix& q) {
  return pd_inverse(hermitian_part(q.adjoint() * a * q + b)).trace().real();
}

CMatrix dft_matrix(Index n) {
  if (n < 1) throw Error(Errc::DimensionMismatch, "dft size must be positive");
  CMatrix d(n, n);
  const double s = 1.0 / std::sqrt(static_cast<double>(n));
  for (Index j = 0; j < n; ++j)
    for (Index k = 0; k < n; ++k) {
      const double ang = -2.0 * std::numbers::pi * static_cast<double>((j * k) % n) / static_cast<double>(n);
      d(j, k) = s * cplx(std::cos(ang), std::sin(ang));
    }
  return d;
}

RVector cholesky_diagonal(const CMatrix& m) {
  Eigen::LLT<CMatrix> llt(hermitian_part(m));
  if (llt.info() != Eigen::Success) throw Error(Errc::NotPd, "matrix is not positive definite");
  RVector d(m.rows());
  for (Index i = 0; i < m.rows(); ++i) d(i) = llt.matrixL()(i, i).real();
  return d;
}

QSolution equal_diag_cholesky_rotation(const CMatrix& m) {
  const HermEig e = herm_eig(m, Order::Descending);
  const Index n = e.values.size();
  const double top = n ? e.values(0) : 0.0;
  if (n == 0 || e.values(n - 1) <= kSingularTol * std::max(top, kAbsFloor))
    throw Error(Errc::NotPd, "equal_diag_cholesky_rotation needs a PD matrix");

  // Geometric mean decomposition of D = Lambda^{1/2}: D = W R P^T, R upper
  // triangular with constant diagonal. Then P^T Lambda P = R^T R.
  Eigen::MatrixXd r = Eigen::MatrixXd::Zero(n, n);
  for (Index i = 0; i < n; ++i) r(i, i) = std::sqrt(e.values(i));
  Eigen::MatrixXd p = Eigen::MatrixXd::Identity(n, n);
  double log_mean = 0.0;
  for (Index i = 0; i < n; ++i) log_mean += std::log(r(i, i));
  const double gm = std::exp(log_mean / static_cast<double>(n));

  auto swap_idx = [&](Index a, Index b) {
    if (a == b) return;
    r.row(a).swap(r.row(b));
    r.col(a).swap(r.col(b));
    p.col(a).swap(p.col(b));
  };

  for (Index i = 0; i + 1 < n; ++i) {
    // pick a partner on the other side of gm
    const bool above = r(i, i) >= gm;
    Index j = i + 1;
    for (Index k = i + 1; k < n; ++k)
      if (above ? r(k, k) <= gm : r(k, k) >= gm) {
        j = k;
        break;
      }
    swap_idx(i + 1, j);
    const double d1 = r(i, i), d2 = r(i + 1, i + 1);
    double c = 1.0, s = 0.0;
    const double den = d1 * d1 - d2 * d2;
    if (std::abs(den) > 1e-15 * d1 * d1) {
      c = std::sqrt(std::clamp((gm * gm - d2 * d2) / den, 0.0, 1.0));
      s = std::sqrt(1.0 - c * c);
    }
    Eigen::Matrix2d g2, g1;
    g2 << c, -s, s, c;
    g1 << c * d1, -s * d2, s * d2, c * d1;
    g1 /= gm;
    // R <- G1^T R G2 on rows/cols (i, i+1)
    r.middleRows(i, 2) = (g1.transpose() * r.middleRows(i, 2)).eval();
    r.middleCols(i, 2) = (r.middleCols(i, 2) * g2).eval();
    p.middleCols(i, 2) = (p.middleCols(i, 2) * g2).eval();
    r(i + 1, i) = 0.0;
  }
  return {e.vectors * p.cast<cplx>(), Construction::EqualDiagCholesky};
}

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

void require_dim(const CMatrix& x, Index rows, Index cols, const char* what) {
  if (x.rows() != rows || (cols >= 0 && x.cols() != cols))
    throw Error(Errc::DimensionMismatch, std::string(what) + " does not conform");
}

}  // namespace

QSolution optimal_q(const ObjectiveCase& c, const CMatrix& m) {
  const Index d = m.rows();
  const CMatrix u = herm_eig(m, Order::Descending).vectors;
  auto anti = [&](const CMatrix& n) {
    require_dim(n, d, d, "N");
    return QSolution{u * herm_eig(n, Order::Ascending).vectors.adjoint(), Construction::EigAntiAlign};
  };
  auto align_left = [&](const CMatrix& a) {
    require_dim(a, d, -1, "A");
    return QSolution{u * svd(a).u.adjoint(), Construction::EigAlign};
  };
  return std::visit(
      overloaded{
          [&](const Case1& k) { return anti(k.n); },
          [&](const Case2& k) { return align_left(k.a); },
          [&](const Case3& k) { return anti(k.n); },
          [&](const Case4& k) { return anti(k.n); },
          [&](const Case5& k) {
            require_dim(k.a, d, -1, "A");
            require_dim(k.n, k.a.cols(), k.a.cols(), "N");
            const CMatrix ana = hermitian_part(k.a * pd_inverse(k.n) * k.a.adjoint());
            return QSolution{u * herm_eig(ana, Order::Descending).vectors.adjoint(), Construction::EigAlign};
          },
          [&](const Case6& k) { return align_left(k.a); },
          [&](const Case7& k) {
            if (!k.f.fn) throw Error(Errc::NotApplicable, "Case 7 without a scalar function");
            if (k.schur == AdditiveSchur::Concave) return QSolution{u, Construction::EigAlign};
            return QSolution{u * dft_matrix(d).adjoint(), Construction::Dft};
          },
          [&](const Case8& k) {
            if (!k.f.fn) throw Error(Errc::NotApplicable, "Case 8 without a scalar function");
            if (k.schur == MultiplicativeSchur::Concave) return QSolution{u, Construction::EigAlign};
            const RVector lam = herm_eig(m, Order::Descending).values.cwiseMax(0.0);
            const CMatrix mse = (lam.array() + 1.0).inverse().matrix().cast<cplx>().asDiagonal();
            // The MSE matrix is diagonal in the eigenbasis of m; rotate it there.
            return QSolution{u * equal_diag_cholesky_rotation(mse).q, Construction::EqualDiagCholesky};
          },
      },
      c);
}

}  // namespace mmo
