#include <cmath>
#include <complex>

#include "doctest.h"

#include "coherentfl/complex_linalg.hpp"
#include "coherentfl/phymath.hpp"
#include "coherentfl/rng.hpp"

using namespace coherentfl;

TEST_CASE("matrix identity, product, and hermitian behave as expected") {
  const auto eye = ComplexMatrix::identity(3);
  ComplexMatrix a(3, 3);
  SeededRng rng(1);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) a.at(i, j) = rng.cgaussian();

  CHECK(max_abs_diff(a * eye, a) == 0.0);
  CHECK(max_abs_diff(eye * a, a) == 0.0);

  const auto ah = a.hermitian();
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j)
      CHECK(ah.at(i, j) == std::conj(a.at(j, i)));
}

TEST_CASE("hstack concatenates columns in order") {
  ComplexMatrix a(2, 2), b(2, 1);
  a.at(0, 0) = 1.0; a.at(0, 1) = 2.0;
  a.at(1, 0) = 3.0; a.at(1, 1) = 4.0;
  b.at(0, 0) = 5.0; b.at(1, 0) = 6.0;
  const auto c = a.hstack(b);
  CHECK(c.rows() == 2);
  CHECK(c.cols() == 3);
  CHECK(c.at(0, 2) == cdouble(5.0));
  CHECK(c.at(1, 2) == cdouble(6.0));
  CHECK(c.at(1, 1) == cdouble(4.0));
}

TEST_CASE("left_apply_conj and right_apply_hermitian match hand sums") {
  SeededRng rng(2);
  const std::size_t m = 3, t = 4;
  ComplexMatrix x(m, t);
  ComplexVector h(m), y(t);
  for (std::size_t i = 0; i < m; ++i) {
    h[i] = rng.cgaussian();
    for (std::size_t j = 0; j < t; ++j) x.at(i, j) = rng.cgaussian();
  }
  for (std::size_t j = 0; j < t; ++j) y[j] = rng.cgaussian();

  const auto hx = left_apply_conj(h, x);
  for (std::size_t j = 0; j < t; ++j) {
    cdouble want(0.0);
    for (std::size_t i = 0; i < m; ++i) want += std::conj(h[i]) * x.at(i, j);
    CHECK(std::abs(hx[j] - want) < 1e-14);
  }

  const auto yxh = right_apply_hermitian(y, x);
  for (std::size_t i = 0; i < m; ++i) {
    cdouble want(0.0);
    for (std::size_t j = 0; j < t; ++j) want += y[j] * std::conj(x.at(i, j));
    CHECK(std::abs(yxh[i] - want) < 1e-14);
  }
}

TEST_CASE("dot products: plain has no conjugation, conj conjugates the left") {
  ComplexVector a{{cdouble(0.0, 1.0), cdouble(2.0, 0.0)}};
  ComplexVector b{{cdouble(0.0, 1.0), cdouble(1.0, 1.0)}};
  CHECK(std::abs(dot_plain(a, b) - cdouble(1.0, 2.0)) < 1e-15);  // i*i + 2(1+i)
  CHECK(std::abs(dot_conj(a, b) - cdouble(3.0, 2.0)) < 1e-15);   // -i*i + 2(1+i)
}

TEST_CASE("unitary pilot: identity at m=1") {
  const auto x = phymath::unitary_pilot(1);
  CHECK(x.rows() == 1);
  CHECK(std::abs(x.at(0, 0) - cdouble(1.0)) < 1e-15);
}

TEST_CASE("unitary pilot: X X^H = I at m=8") {
  const auto x = phymath::unitary_pilot(8);
  const auto gram = x * x.hermitian();
  ComplexMatrix diff(8, 8);
  const auto eye = ComplexMatrix::identity(8);
  double frob = 0.0;
  for (std::size_t i = 0; i < 8; ++i)
    for (std::size_t j = 0; j < 8; ++j)
      frob += std::norm(gram.at(i, j) - eye.at(i, j));
  CHECK(std::sqrt(frob) < 1e-12);
}

TEST_CASE("unitary pilot: unit column norms at m=4") {
  const auto x = phymath::unitary_pilot(4);
  for (std::size_t j = 0; j < 4; ++j)
    CHECK(std::abs(x.col(j).norm_sq() - 1.0) < 1e-12);
}

TEST_CASE("rayleigh channel: empty at m=0, unit-variance entries at m=8") {
  SeededRng rng(3);
  CHECK(phymath::draw_rayleigh_channel(0, rng).size() == 0);

  const std::size_t draws = 100000 / 8;
  cdouble mean(0.0);
  double power = 0.0;
  std::size_t count = 0;
  for (std::size_t d = 0; d < draws; ++d) {
    const auto h = phymath::draw_rayleigh_channel(8, rng);
    for (std::size_t i = 0; i < 8; ++i) {
      mean += h[i];
      power += std::norm(h[i]);
      ++count;
    }
  }
  mean /= static_cast<double>(count);
  const double var = power / static_cast<double>(count) - std::norm(mean);
  CHECK(std::abs(mean) < 0.02);
  CHECK(var > 0.98);
  CHECK(var < 1.02);
}

TEST_CASE("awgn: zero variance gives exact zeros, empty length gives empty") {
  SeededRng rng(4);
  const auto silent = phymath::awgn(16, 0.0, rng);
  for (std::size_t i = 0; i < silent.size(); ++i) CHECK(silent[i] == cdouble(0.0));
  CHECK(phymath::awgn(0, 1.0, rng).size() == 0);
}

TEST_CASE("awgn: sample variance within 2% at variance 2") {
  SeededRng rng(5);
  const auto w = phymath::awgn(100000, 2.0, rng);
  double power = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) power += std::norm(w[i]);
  const double var = power / static_cast<double>(w.size());
  CHECK(var > 2.0 * 0.98);
  CHECK(var < 2.0 * 1.02);
}
