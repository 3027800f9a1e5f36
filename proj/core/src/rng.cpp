#include "coherentfl/rng.hpp"

#include <stdexcept>

namespace coherentfl {
namespace {

// splitmix64 finalizer; decorrelates nearby seed/stream ids.
std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t combine(std::uint64_t a, std::uint64_t b) {
  return mix64(a ^ (mix64(b) + 0x9e3779b97f4a7c15ULL + (a << 6) + (a >> 2)));
}

}  // namespace

SeededRng::SeededRng(std::uint64_t seed, std::uint64_t stream)
    : seed_(seed), stream_(stream), engine_(combine(mix64(seed), stream)) {}

double SeededRng::gaussian() { return normal_(engine_); }

double SeededRng::uniform() {
  // 53-bit mantissa; value in [0, 1)
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

std::complex<double> SeededRng::cgaussian() {
  constexpr double kHalfSqrt = 0.70710678118654752440;  // sqrt(1/2)
  const double re = gaussian() * kHalfSqrt;
  const double im = gaussian() * kHalfSqrt;
  return {re, im};
}

std::uint64_t SeededRng::next_u64() { return engine_(); }

std::uint64_t SeededRng::below(std::uint64_t bound) {
  if (bound == 0) throw std::invalid_argument("SeededRng::below: bound must be positive");
  // rejection sampling keeps the draw exactly uniform
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
  std::uint64_t v;
  do {
    v = engine_();
  } while (v >= limit);
  return v % bound;
}

SeededRng SeededRng::derive(std::uint64_t a, std::uint64_t b, std::uint64_t c) const {
  std::uint64_t s = combine(stream_, a);
  s = combine(s, b);
  s = combine(s, c);
  return SeededRng(seed_, s);
}

}  // namespace coherentfl
