#include "mmo/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

#include "mmo/error.hpp"

namespace mmo {

double max_abs(const CMatrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

void require_finite(const CMatrix& m, const char* what) {
  if (!m.allFinite()) throw Error(Errc::NonFinite, std::string(what) + " has non-finite entries");
}

void require_hermitian(const CMatrix& m, const char* what) {
  require_finite(m, what);
  if (m.rows() != m.cols())
    throw Error(Errc::DimensionMismatch, std::string(what) + " is not square");
  const double scale = std::max(max_abs(m), kAbsFloor);
  if (m.size() > 0 && (m - m.adjoint()).cwiseAbs().maxCoeff() > kHermTol * scale)
    throw Error(Errc::NonHermitian, std::string(what) + " is not Hermitian");
}

CMatrix hermitian_part(const CMatrix& m) { return 0.5 * (m + m.adjoint()); }

HermEig herm_eig(const CMatrix& m, Order order) {
  require_hermitian(m, "herm_eig input");
  const Index n = m.rows();
  Eigen::SelfAdjointEigenSolver<CMatrix> es(hermitian_part(m));
  if (es.info() != Eigen::Success) throw Error(Errc::NonFinite, "eigensolver did not converge");

  std::vector<Index> idx(static_cast<size_t>(n));
  std::iota(idx.begin(), idx.end(), Index{0});
  const RVector& ev = es.eigenvalues();
  if (order == Order::Descending)
    std::stable_sort(idx.begin(), idx.end(), [&](Index a, Index b) { return ev(a) > ev(b); });
  else
    std::stable_sort(idx.begin(), idx.end(), [&](Index a, Index b) { return ev(a) < ev(b); });

  HermEig out;
  out.order = order;
  out.values.resize(n);
  out.vectors.resize(n, n);
  for (Index k = 0; k < n; ++k) {
    out.values(k) = ev(idx[static_cast<size_t>(k)]);
    out.vectors.col(k) = es.eigenvectors().col(idx[static_cast<size_t>(k)]);
  }
  return out;
}

Svd svd(const CMatrix& m) {
  require_finite(m, "svd input");
  Eigen::JacobiSVD<CMatrix> js(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  return Svd{js.matrixU(), js.singularValues(), js.matrixV()};
}

void require_psd(const CMatrix& m, const char* what) {
  const RVector ev = herm_eig(m, Order::Ascending).values;
  if (ev.size() == 0) return;
  const double scale = std::max(ev.cwiseAbs().maxCoeff(), kAbsFloor);
  if (ev(0) < -kPsdTol * scale) throw Error(Errc::NotPsd, std::string(what) + " is not PSD");
}

CMatrix psd_sqrt(const CMatrix& m) {
  HermEig e = herm_eig(m, Order::Ascending);
  if (e.values.size() == 0) return m;
  const double scale = std::max(e.values.cwiseAbs().maxCoeff(), kAbsFloor);
  if (e.values(0) < -kPsdTol * scale) throw Error(Errc::NotPsd, "psd_sqrt input is not PSD");
  const RVector s = e.values.cwiseMax(0.0).cwiseSqrt();
  return hermitian_part(e.vectors * s.asDiagonal() * e.vectors.adjoint());
}

CMatrix psd_inv_sqrt(const CMatrix& m) {
  HermEig e = herm_eig(m, Order::Ascending);
  if (e.values.size() == 0) return m;
  const double top = e.values.cwiseAbs().maxCoeff();
  if (top <= 0.0 || e.values(0) <= kSingularTol * top)
    throw Error(Errc::Singular, "psd_inv_sqrt input is singular or indefinite");
  const RVector s = e.values.cwiseSqrt().cwiseInverse();
  return hermitian_part(e.vectors * s.asDiagonal() * e.vectors.adjoint());
}

CMatrix pd_inverse(const CMatrix& m) {
  require_hermitian(m, "pd_inverse input");
  Eigen::LLT<CMatrix> llt(hermitian_part(m));
  if (llt.info() != Eigen::Success) throw Error(Errc::Singular, "matrix is not positive definite");
  return hermitian_part(llt.solve(CMatrix::Identity(m.rows(), m.cols())));
}

CMatrix kron(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index i = 0; i < a.rows(); ++i)
    for (Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

bool loewner_geq(const CMatrix& a, const CMatrix& b, double tol) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw Error(Errc::DimensionMismatch, "loewner_geq operands differ in shape");
  const RVector ev = herm_eig(a - b, Order::Ascending).values;
  if (ev.size() == 0) return true;
  const double scale = std::max({max_abs(a), max_abs(b), 1.0});
  return ev(0) >= -tol * scale;
}

double lambda_min(const CMatrix& m) { return herm_eig(m, Order::Ascending).values(0); }
double lambda_max(const CMatrix& m) { return herm_eig(m, Order::Descending).values(0); }

double log_det_pd(const CMatrix& m) {
  require_hermitian(m, "log_det_pd input");
  Eigen::LLT<CMatrix> llt(hermitian_part(m));
  if (llt.info() != Eigen::Success) throw Error(Errc::NotPd, "log_det_pd input is not PD");
  double acc = 0.0;
  for (Index i = 0; i < m.rows(); ++i) acc += std::log(llt.matrixL()(i, i).real());
  return 2.0 * acc;
}

double log_det_psd(const CMatrix& m) {
  require_hermitian(m, "log_det_psd input");
  Eigen::LLT<CMatrix> llt(hermitian_part(m));
  if (llt.info() == Eigen::Success) {
    double acc = 0.0;
    for (Index i = 0; i < m.rows(); ++i) acc += std::log(llt.matrixL()(i, i).real());
    if (std::isfinite(acc)) return 2.0 * acc;
  }
  const RVector ev = herm_eig(m, Order::Descending).values;
  const double scale = std::max(ev.cwiseAbs().maxCoeff(), kAbsFloor);
  double acc = 0.0;
  for (Index i = 0; i < ev.size(); ++i) {
    if (ev(i) <= kSingularTol * scale) return -std::numeric_limits<double>::infinity();
    acc += std::log(ev(i));
  }
  return acc;
}

bool is_scaled_identity(const CMatrix& m, double rel_tol) {
  if (m.rows() != m.cols()) return false;
  const Index n = m.rows();
  if (n == 0) return true;
  const cplx mean = m.trace() / static_cast<double>(n);
  const double dev = (m - mean * CMatrix::Identity(n, n)).norm();
  return dev <= rel_tol * std::max(m.norm(), kAbsFloor);
}

}  // namespace mmo
