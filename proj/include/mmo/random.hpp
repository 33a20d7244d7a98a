#pragma once

#include <cstdint>
#include <random>

#include "mmo/linalg.hpp"

namespace mmo {

using Rng = std::mt19937_64;

// splitmix64 mixing of (base, stream); used to carve independent substreams
// out of one trial seed.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream);

// i.i.d. CN(0,1): real and imaginary parts each N(0, 1/2).
CMatrix complex_gaussian(Index rows, Index cols, Rng& rng);
CMatrix haar_unitary(Index n, Rng& rng);
CMatrix random_psd(Index n, Rng& rng, Index rank = -1);
CMatrix random_pd(Index n, Rng& rng);

}  // namespace mmo
