#pragma once

#include "mmo/linalg.hpp"
#include "mmo/objective_case.hpp"

namespace mmo {

struct IneqBound {
  double lower = 0.0;
  double upper = 0.0;
  CMatrix q_lower;
  CMatrix q_upper;
};

enum class Construction { EigAlign, EigAntiAlign, Dft, EqualDiagCholesky, Identity };

struct QSolution {
  CMatrix q;
  Construction construction = Construction::Identity;
};

// Tr(Q^H A Q B)
IneqBound ineq_trace_product(const CMatrix& a, const CMatrix& b);
// |Q^H A Q + B|
IneqBound ineq_logdet_sum(const CMatrix& a, const CMatrix& b);
// |Q^H A Q B + I|
IneqBound ineq_logdet_product_plus_i(const CMatrix& a, const CMatrix& b);
// Tr[(Q^H A Q + B)^{-1}]
IneqBound ineq_trace_inv_sum(const CMatrix& a, const CMatrix& b);

// Middle expressions of the four inequalities, for a given Q.
double trace_product_at(const CMatrix& a, const CMatrix& b, const CMatrix& q);
double det_sum_at(const CMatrix& a, const CMatrix& b, const CMatrix& q);
double det_product_plus_i_at(const CMatrix& a, const CMatrix& b, const CMatrix& q);
double trace_inv_sum_at(const CMatrix& a, const CMatrix& b, const CMatrix& q);

// m = F^H H^H K_F^{-1} H F
QSolution optimal_q(const ObjectiveCase& c, const CMatrix& m);

CMatrix dft_matrix(Index n);

// Q such that the Cholesky factor of Q^H m Q has all diagonal entries equal
// to det(m)^{1/(2N)}.
QSolution equal_diag_cholesky_rotation(const CMatrix& m);

// Cholesky factor diagonal of a PD matrix.
RVector cholesky_diagonal(const CMatrix& m);

}  // namespace mmo
