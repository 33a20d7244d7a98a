#pragma once

#include <Eigen/Dense>
#include <complex>

namespace mmo {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;
using Index = Eigen::Index;

// Relative tolerances used by the validation helpers below. Everything is
// scaled by the largest magnitude of the input, with kAbsFloor as a floor.
inline constexpr double kAbsFloor = 1e-14;
inline constexpr double kHermTol = 1e-10;
inline constexpr double kPsdTol = 1e-8;
inline constexpr double kSingularTol = 1e-12;

enum class Order { Descending, Ascending };

struct HermEig {
  RVector values;   // sorted per `order`
  CMatrix vectors;  // columns match `values`
  Order order = Order::Descending;
};

struct Svd {
  CMatrix u;  // full, rows x rows
  RVector singular_values;  // descending, length min(rows, cols)
  CMatrix v;  // full, cols x cols
};

HermEig herm_eig(const CMatrix& m, Order order = Order::Descending);
Svd svd(const CMatrix& m);

CMatrix psd_sqrt(const CMatrix& m);
CMatrix psd_inv_sqrt(const CMatrix& m);
CMatrix pd_inverse(const CMatrix& m);

CMatrix kron(const CMatrix& a, const CMatrix& b);

// a - b is PSD up to a relative tolerance.
bool loewner_geq(const CMatrix& a, const CMatrix& b, double tol = 1e-10);

double lambda_min(const CMatrix& m);
double lambda_max(const CMatrix& m);

// Cholesky based; throws NotPd when the factorisation fails.
double log_det_pd(const CMatrix& m);
// Cholesky when possible, eigenvalues otherwise; -inf for singular input.
double log_det_psd(const CMatrix& m);

double max_abs(const CMatrix& m);
bool is_scaled_identity(const CMatrix& m, double rel_tol = 1e-9);
CMatrix hermitian_part(const CMatrix& m);
void require_finite(const CMatrix& m, const char* what);
void require_hermitian(const CMatrix& m, const char* what);
void require_psd(const CMatrix& m, const char* what);

}  // namespace mmo
