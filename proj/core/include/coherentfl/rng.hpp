#pragma once

#include <complex>
#include <cstdint>
#include <random>

namespace coherentfl {

// Deterministic seeded generator with cheap derived streams.
//
// Identical (seed, stream) pairs always produce identical draw sequences;
// distinct stream ids produce statistically independent sequences. Simulation
// code derives one stream per (device, round, purpose) from a master seed so
// that runs are reproducible and the draw order of one component never shifts
// another's.
class SeededRng {
 public:
  explicit SeededRng(std::uint64_t seed, std::uint64_t stream = 0);

  double gaussian();                 // N(0, 1)
  double uniform();                  // [0, 1)
  std::complex<double> cgaussian();  // CN(0, 1): re and im each N(0, 1/2)
  std::uint64_t next_u64();
  std::uint64_t below(std::uint64_t bound);  // uniform over [0, bound)

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream() const { return stream_; }

  // Fresh stream keyed by up to three ids (e.g. purpose, round, device).
  SeededRng derive(std::uint64_t a, std::uint64_t b = 0, std::uint64_t c = 0) const;

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

}  // namespace coherentfl
