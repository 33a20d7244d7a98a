#pragma once

#include <string_view>
#include <vector>

#include "mmo/mmop.hpp"
#include "mmo/objective_case.hpp"

namespace mmo {

// Objective value as a function of the rotated inner matrix Q^H M Q.
double case_objective(const ObjectiveCase& c, const CMatrix& inner);

double eval_f_matrix(const ObjectiveCase& c, const CMatrix& x, const ProblemSpec& spec);
// eigs are the eigenvalues of F^H H^H K_F^{-1} H F; sorted internally.
double eval_f_vector(const ObjectiveCase& c, const RVector& eigs);

// (Q^H F^H H^H K_F^{-1} H F Q + I)^{-1}
CMatrix mse_matrix(const CMatrix& f, const CMatrix& q, const ProblemSpec& spec);

enum class SchurClass { AdditiveConcave, AdditiveConvex, MultiplicativeConcave, MultiplicativeConvex };
enum class Allocation { SumMseWaterfill, CapacityWaterfill };

struct NamedObjective {
  std::string name;
  SchurClass schur;
  Allocation allocation;
  ScalarFn fn;  // on the MSE diagonal (additive) or Cholesky diagonal squared (multiplicative)
};

const std::vector<NamedObjective>& named_scalar_objectives();
const NamedObjective& lookup_objective(std::string_view name);
ObjectiveCase make_case(const NamedObjective& obj);

// Sum of log(1 + lambda); natural log.
double capacity_nats(const RVector& eigs);
double nats_to_bits(double nats);

// Allocation per the objective's rule on a reduced basis.
RVector allocate(const EigenmodeBasis& basis, Allocation rule);

}  // namespace mmo
