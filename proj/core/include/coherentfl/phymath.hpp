#pragma once

#include <cstddef>

#include "coherentfl/complex_linalg.hpp"
#include "coherentfl/rng.hpp"

namespace coherentfl::phymath {

// i.i.d. CN(0, 1) channel vector for an m-antenna downlink.
ComplexVector draw_rayleigh_channel(std::size_t m, SeededRng& rng);

// Deterministic m x m unitary pilot: DFT matrix with entry
// (j, k) = exp(-2*pi*i*j*k/m) / sqrt(m). Satisfies X X^H = I exactly
// (up to rounding) and is identical on every call.
ComplexMatrix unitary_pilot(std::size_t m);

// len i.i.d. CN(0, variance) noise samples; variance == 0 yields exact zeros.
ComplexVector awgn(std::size_t len, double variance, SeededRng& rng);

}  // namespace coherentfl::phymath
