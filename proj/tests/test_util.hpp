#pragma once

#include <algorithm>
#include <cmath>
#include <random>

#include "mmo/mmop.hpp"
#include "mmo/random.hpp"

namespace mmo::test {

inline CMatrix eye(Index n) { return CMatrix::Identity(n, n); }

inline double rel(double a, double b) { return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-300}); }

inline CMatrix diag(std::initializer_list<double> v) {
  RVector d(static_cast<Index>(v.size()));
  Index i = 0;
  for (double x : v) d(i++) = x;
  return d.cast<cplx>().asDiagonal();
}

inline RVector vec(std::initializer_list<double> v) {
  RVector d(static_cast<Index>(v.size()));
  Index i = 0;
  for (double x : v) d(i++) = x;
  return d;
}

// Hermitian matrix with the given spectrum in a random basis.
inline CMatrix with_spectrum(std::initializer_list<double> v, Rng& rng) {
  const CMatrix u = haar_unitary(static_cast<Index>(v.size()), rng);
  return hermitian_part(u * diag(v) * u.adjoint());
}

inline ProblemSpec random_spec(Index nr, Index nt, Rng& rng, bool sigma_identity = false) {
  ProblemSpec s;
  s.h = complex_gaussian(nr, nt, rng);
  std::uniform_real_distribution<double> u(0.01, 0.3);
  s.psi = u(rng) * random_psd(nt, rng) / static_cast<double>(nt);
  s.sigma = sigma_identity ? eye(nr) : CMatrix(random_pd(nr, rng) / static_cast<double>(nr));
  s.noise_var = 0.5 + u(rng);
  s.power = std::exp(std::uniform_real_distribution<double>(0.0, 4.0)(rng));
  return s;
}

}  // namespace mmo::test
