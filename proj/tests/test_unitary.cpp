#include <cmath>

#include "doctest.h"
#include "mmo/error.hpp"
#include "mmo/objectives.hpp"
#include "mmo/unitary.hpp"
#include "test_util.hpp"

using namespace mmo;
using namespace mmo::test;

namespace {

// Brute-force oracle: best value over random unitaries, both sides.
template <class F>
std::pair<double, double> sampled_range(F&& mid, Index n, Rng& rng, int count) {
  double lo = INFINITY, hi = -INFINITY;
  for (int k = 0; k < count; ++k) {
    const double v = mid(haar_unitary(n, rng));
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  return {lo, hi};
}

}  // namespace

TEST_CASE("trace product bounds") {
  Rng rng(11);
  const CMatrix a = with_spectrum({2, 1}, rng), b = with_spectrum({3, 1}, rng);
  const IneqBound r = ineq_trace_product(a, b);
  CHECK(r.lower == doctest::Approx(5));
  CHECK(r.upper == doctest::Approx(7));
  CHECK(trace_product_at(a, b, r.q_lower) == doctest::Approx(5));
  CHECK(trace_product_at(a, b, r.q_upper) == doctest::Approx(7));
  const auto [lo, hi] = sampled_range([&](const CMatrix& q) { return trace_product_at(a, b, q); }, 2, rng, 1000);
  CHECK(lo >= 5 - 1e-9);
  CHECK(hi <= 7 + 1e-9);
  const IneqBound id = ineq_trace_product(eye(2), b);
  CHECK(id.lower == doctest::Approx(4));
  CHECK(id.upper == doctest::Approx(4));
  const IneqBound zero = ineq_trace_product(a, CMatrix::Zero(2, 2));
  CHECK(zero.lower == 0.0);
  CHECK(zero.upper == 0.0);
  CHECK_THROWS_AS(ineq_trace_product(a, eye(3)), Error);
}

TEST_CASE("determinant of a sum") {
  Rng rng(12);
  const CMatrix a = with_spectrum({2, 1}, rng), b = with_spectrum({3, 1}, rng);
  const IneqBound r = ineq_logdet_sum(a, b);
  CHECK(r.lower == doctest::Approx(10));
  CHECK(r.upper == doctest::Approx(12));
  CHECK(det_sum_at(a, b, r.q_lower) == doctest::Approx(10));
  CHECK(det_sum_at(a, b, r.q_upper) == doctest::Approx(12));
  const auto [lo, hi] = sampled_range([&](const CMatrix& q) { return det_sum_at(a, b, q); }, 2, rng, 1000);
  CHECK(lo >= 10 - 1e-9);
  CHECK(hi <= 12 + 1e-9);
  const IneqBound z = ineq_logdet_sum(a, CMatrix::Zero(2, 2));
  CHECK(z.lower == doctest::Approx(2));
  CHECK(z.upper == doctest::Approx(2));
  const IneqBound i = ineq_logdet_sum(eye(2), b);
  CHECK(i.lower == doctest::Approx(8));
  CHECK(i.upper == doctest::Approx(8));
}

TEST_CASE("determinant of a product plus identity") {
  Rng rng(13);
  const CMatrix a = with_spectrum({2, 1}, rng), b = with_spectrum({3, 1}, rng);
  const IneqBound r = ineq_logdet_product_plus_i(a, b);
  CHECK(r.lower == doctest::Approx(12));
  CHECK(r.upper == doctest::Approx(14));
  CHECK(det_product_plus_i_at(a, b, r.q_lower) == doctest::Approx(12));
  CHECK(det_product_plus_i_at(a, b, r.q_upper) == doctest::Approx(14));
  const IneqBound z = ineq_logdet_product_plus_i(CMatrix::Zero(2, 2), b);
  CHECK(z.lower == doctest::Approx(1));
  CHECK(z.upper == doctest::Approx(1));
}

TEST_CASE("trace of an inverse sum") {
  Rng rng(14);
  const CMatrix a = with_spectrum({2, 1}, rng), b = with_spectrum({3, 1}, rng);
  const IneqBound r = ineq_trace_inv_sum(a, b);
  CHECK(r.lower == doctest::Approx(1.0 / 3 + 1.0 / 4));
  CHECK(r.upper == doctest::Approx(0.7));
  CHECK(trace_inv_sum_at(a, b, r.q_lower) == doctest::Approx(r.lower));
  CHECK(trace_inv_sum_at(a, b, r.q_upper) == doctest::Approx(r.upper));
  const IneqBound z = ineq_trace_inv_sum(CMatrix::Zero(2, 2), b);
  CHECK(z.lower == doctest::Approx(4.0 / 3));
  const IneqBound i = ineq_trace_inv_sum(a, eye(2));
  CHECK(i.lower == doctest::Approx(i.upper));
  CHECK(i.lower == doctest::Approx(1.0 / 3 + 0.5));
  try {
    ineq_trace_inv_sum(diag({1, 0}), diag({0, 1}));
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == Errc::SingularSum);
  }
}

TEST_CASE("dft matrix") {
  CHECK(dft_matrix(1)(0, 0) == cplx(1));
  const CMatrix d2 = dft_matrix(2);
  CHECK(std::abs(d2(1, 1) + 1 / std::sqrt(2.0)) < 1e-15);
  CHECK(std::abs(d2(0, 1) - 1 / std::sqrt(2.0)) < 1e-15);
  const CMatrix c = d2.adjoint() * diag({3, 1}) * d2;
  CHECK(c(0, 0).real() == doctest::Approx(2));
  CHECK(c(1, 1).real() == doctest::Approx(2));
  const CMatrix d5 = dft_matrix(5);
  CHECK((d5.adjoint() * d5 - eye(5)).norm() < 1e-12);
}

TEST_CASE("equal-diagonal Cholesky rotation") {
  const QSolution s = equal_diag_cholesky_rotation(2.5 * eye(3));
  const RVector d0 = cholesky_diagonal(s.q.adjoint() * 2.5 * eye(3) * s.q);
  CHECK(d0.minCoeff() == doctest::Approx(std::sqrt(2.5)));
  CHECK(d0.maxCoeff() == doctest::Approx(std::sqrt(2.5)));

  Rng rng(15);
  const CMatrix m = with_spectrum({4, 1}, rng);
  const CMatrix q = equal_diag_cholesky_rotation(m).q;
  const RVector d = cholesky_diagonal(q.adjoint() * m * q);
  CHECK(d(0) == doctest::Approx(std::sqrt(2.0)));
  CHECK(d(1) == doctest::Approx(std::sqrt(2.0)));

  for (int t = 0; t < 20; ++t) {
    const CMatrix p = random_pd(3, rng);
    const CMatrix r = equal_diag_cholesky_rotation(p).q;
    CHECK((r.adjoint() * r - eye(3)).norm() < 1e-10);
    const RVector l = cholesky_diagonal(r.adjoint() * p * r);
    CHECK(l.maxCoeff() / l.minCoeff() <= 1 + 1e-8);
  }
  CHECK_THROWS_AS(equal_diag_cholesky_rotation(diag({1, 0})), Error);
}

TEST_CASE("optimal Q for the isotropic and max-MSE cases") {
  Rng rng(16);
  const CMatrix m = with_spectrum({3, 1, 0.5}, rng);
  const QSolution q3 = optimal_q(Case3{eye(3)}, m);
  CHECK((q3.q.adjoint() * q3.q - eye(3)).norm() < 1e-10);
  CHECK(case_objective(Case3{eye(3)}, q3.q.adjoint() * m * q3.q) == doctest::Approx(0.25 + 0.5 + 1 / 1.5));

  const CMatrix m2 = with_spectrum({3, 1}, rng);
  const ObjectiveCase mx = make_case(lookup_objective("max-mse"));
  const QSolution q = optimal_q(mx, m2);
  CHECK(q.construction == Construction::Dft);
  const CMatrix mse = (q.q.adjoint() * m2 * q.q + eye(2)).inverse();
  CHECK(mse(0, 0).real() == doctest::Approx(0.375));
  CHECK(mse(1, 1).real() == doctest::Approx(0.375));
}

TEST_CASE("optimal Q beats sampled unitaries for every case") {
  Rng rng(17);
  const auto& sum = lookup_objective("sum-mse").fn;
  const auto& mx = lookup_objective("max-mse").fn;
  const auto& cap = lookup_objective("capacity").fn;
  // on log d, -sum 1/d is concave and sum d convex: one strict instance per branch
  const ScalarFn inv_sum{"neg-inv-sum", [](const RVector& d) { return -d.cwiseInverse().sum(); }};
  for (int t = 0; t < 4; ++t) {
    const CMatrix n = random_pd(4, rng), a = complex_gaussian(4, 3, rng);
    const std::vector<ObjectiveCase> cases = {
        Case1{n}, Case2{a}, Case3{n}, Case4{n, random_pd(2, rng)}, Case5{a, random_pd(3, rng)}, Case6{a},
        Case7{AdditiveSchur::Concave, cap}, Case7{AdditiveSchur::Convex, mx},
        Case8{MultiplicativeSchur::Concave, inv_sum}, Case8{MultiplicativeSchur::Convex, sum}};
    const CMatrix m = random_psd(4, rng);
    for (const auto& c : cases) {
      const CMatrix q = optimal_q(c, m).q;
      const double best = case_objective(c, q.adjoint() * m * q);
      for (int k = 0; k < 300; ++k) {
        const CMatrix w = haar_unitary(4, rng);
        CHECK(best <= case_objective(c, w.adjoint() * m * w) + 1e-9);
      }
    }
  }
}

TEST_CASE("malformed payloads") {
  Rng rng(18);
  const CMatrix m = random_psd(3, rng);
  CHECK_THROWS_AS(optimal_q(Case1{eye(2)}, m), Error);
  try {
    optimal_q(Case7{AdditiveSchur::Concave, {}}, m);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == Errc::NotApplicable);
  }
}
