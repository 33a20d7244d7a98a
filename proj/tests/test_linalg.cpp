#include "doctest.h"
#include "mmo/error.hpp"
#include "mmo/linalg.hpp"
#include "test_util.hpp"

using namespace mmo;
using namespace mmo::test;

TEST_CASE("herm_eig orders and reconstructs") {
  Rng rng(1);
  const CMatrix m = with_spectrum({3, 1, -2}, rng);
  const HermEig d = herm_eig(m, Order::Descending);
  const HermEig a = herm_eig(m, Order::Ascending);
  CHECK(d.values(0) == doctest::Approx(3));
  CHECK(d.values(2) == doctest::Approx(-2));
  CHECK(a.values(0) == doctest::Approx(-2));
  const CMatrix back = d.vectors * d.values.cast<cplx>().asDiagonal() * d.vectors.adjoint();
  CHECK((back - m).norm() < 1e-12);
}

TEST_CASE("herm_eig rejects bad input") {
  CMatrix m(2, 2);
  m << 1, 2, 0, 1;
  CHECK_THROWS_AS(herm_eig(m), Error);
  try {
    herm_eig(m);
  } catch (const Error& e) {
    CHECK(e.code() == Errc::NonHermitian);
  }
  m(0, 1) = std::nan("");
  try {
    herm_eig(m);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == Errc::NonFinite);
  }
}

TEST_CASE("svd of a rectangular matrix") {
  Rng rng(2);
  const CMatrix m = complex_gaussian(3, 5, rng);
  const Svd s = svd(m);
  CHECK(s.u.rows() == 3);
  CHECK(s.v.rows() == 5);
  CHECK(s.singular_values.size() == 3);
  CMatrix sig = CMatrix::Zero(3, 5);
  for (Index i = 0; i < 3; ++i) sig(i, i) = s.singular_values(i);
  CHECK((s.u * sig * s.v.adjoint() - m).norm() < 1e-12);
  CHECK(svd(CMatrix::Zero(2, 2)).singular_values.norm() == 0.0);
}

TEST_CASE("psd square roots") {
  CHECK((psd_sqrt(diag({4, 9})) - diag({2, 3})).norm() < 1e-14);
  CHECK((psd_inv_sqrt(diag({4, 9})) - diag({0.5, 1.0 / 3})).norm() < 1e-14);
  // round-off negativity is clamped, genuine negativity is not
  CHECK_NOTHROW(psd_sqrt(diag({1, -1e-12})));
  CHECK_THROWS_AS(psd_sqrt(diag({1, -0.1})), Error);
  try {
    psd_inv_sqrt(diag({1, 0}));
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == Errc::Singular);
  }
}

TEST_CASE("kron and loewner") {
  CMatrix a(2, 2), b(1, 2);
  a << 1, 2, 3, 4;
  b << 1, -1;
  const CMatrix k = kron(a, b);
  CHECK(k.rows() == 2);
  CHECK(k.cols() == 4);
  CHECK(k(1, 3) == cplx(-4));
  CHECK(loewner_geq(2 * eye(2), eye(2)));
  CHECK_FALSE(loewner_geq(eye(2), 2 * eye(2)));
  CHECK_FALSE(loewner_geq(diag({2, 0}), diag({1, 1})));
  CHECK_THROWS_AS(loewner_geq(eye(2), eye(3)), Error);
}

TEST_CASE("log determinants") {
  CHECK(log_det_pd(diag({2, 3})) == doctest::Approx(std::log(6.0)));
  CHECK(std::isinf(log_det_psd(diag({2, 0}))));
  CHECK(is_scaled_identity(3.0 * eye(3)));
  CHECK_FALSE(is_scaled_identity(diag({1, 1.001})));
}
