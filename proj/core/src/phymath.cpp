#include "coherentfl/phymath.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace coherentfl::phymath {

ComplexVector draw_rayleigh_channel(std::size_t m, SeededRng& rng) {
  ComplexVector h(m);
  for (std::size_t i = 0; i < m; ++i) h[i] = rng.cgaussian();
  return h;
}

ComplexMatrix unitary_pilot(std::size_t m) {
  if (m == 0) throw std::invalid_argument("unitary_pilot: dimension must be positive");
  ComplexMatrix x(m, m);
  const double scale = 1.0 / std::sqrt(static_cast<double>(m));
  const double step = -2.0 * std::numbers::pi / static_cast<double>(m);
  for (std::size_t j = 0; j < m; ++j) {
    for (std::size_t k = 0; k < m; ++k) {
      // reduce j*k mod m before the trig call to keep large m accurate
      const double phase = step * static_cast<double>((j * k) % m);
      x.at(j, k) = cdouble{std::cos(phase) * scale, std::sin(phase) * scale};
    }
  }
  return x;
}

ComplexVector awgn(std::size_t len, double variance, SeededRng& rng) {
  if (variance < 0.0) throw std::invalid_argument("awgn: variance must be nonnegative");
  ComplexVector w(len);
  if (variance == 0.0) return w;
  const double amp = std::sqrt(variance);
  for (std::size_t i = 0; i < len; ++i) w[i] = rng.cgaussian() * amp;
  return w;
}

}  // namespace coherentfl::phymath
