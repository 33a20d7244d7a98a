#include "mmo/random.hpp"

#include <cmath>

namespace mmo {

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) {
  std::uint64_t z = base + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

CMatrix complex_gaussian(Index rows, Index cols, Rng& rng) {
  std::normal_distribution<double> nd(0.0, std::sqrt(0.5));
  CMatrix out(rows, cols);
  // column-major fill, real part first
  for (Index j = 0; j < cols; ++j)
    for (Index i = 0; i < rows; ++i) {
      const double re = nd(rng);
      const double im = nd(rng);
      out(i, j) = cplx(re, im);
    }
  return out;
}

CMatrix haar_unitary(Index n, Rng& rng) {
  const CMatrix g = complex_gaussian(n, n, rng);
  Eigen::HouseholderQR<CMatrix> qr(g);
  CMatrix q = qr.householderQ() * CMatrix::Identity(n, n);
  const CMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Index k = 0; k < n; ++k) {
    const double mag = std::abs(r(k, k));
    if (mag > 0) q.col(k) *= r(k, k) / mag;
  }
  return q;
}

CMatrix random_psd(Index n, Rng& rng, Index rank) {
  if (rank < 0) rank = n;
  const CMatrix g = complex_gaussian(n, rank, rng);
  return hermitian_part(g * g.adjoint());
}

CMatrix random_pd(Index n, Rng& rng) {
  return hermitian_part(random_psd(n, rng) + 0.1 * CMatrix::Identity(n, n));
}

}  // namespace mmo
