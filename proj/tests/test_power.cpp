#include <cmath>
#include <cstddef>

#include "doctest.h"

#include "coherentfl/errors.hpp"
#include "coherentfl/power.hpp"
#include "coherentfl/rng.hpp"

using namespace coherentfl;
using namespace coherentfl::power;

namespace {

// Post-estimation inverse quality: noise/rho_d + noise*m/(noise + m*rho_p).
// Independent of effective_snr's algebra; smaller is better.
double inverse_quality(double rho_p, double rho_d, std::size_t m, double noise) {
  const double md = static_cast<double>(m);
  return noise / rho_d + noise * md / (noise + md * rho_p);
}

}  // namespace

TEST_CASE("effective snr: zero data power gives zero snr") {
  CHECK(effective_snr(1.0, 0.0, 4, 1.0) == 0.0);
}

TEST_CASE("effective snr: worked value at four antennas and unit powers") {
  CHECK(effective_snr(1.0, 1.0, 4, 1.0) == doctest::Approx(5.0 / 9.0).epsilon(1e-12));
}

TEST_CASE("effective snr: perfect-pilot limit approaches data snr") {
  const double gamma = effective_snr(1e9, 0.7, 4, 2.0);
  CHECK(std::abs(gamma - 0.7 / 2.0) / (0.7 / 2.0) < 1e-6);
}

TEST_CASE("optimal allocation: worked closed form at M=2, T=6, unit budget") {
  const auto alloc = optimal_allocation(1.0, 6, 2, 1.0);
  CHECK(alloc.rho_d == doctest::Approx(7.0 / 12.0).epsilon(1e-9));
  CHECK(alloc.rho_p == doctest::Approx(2.0 / 3.0).epsilon(1e-9));
}

TEST_CASE("optimal allocation: budget is spent with equality") {
  for (const double rho : {0.6, 1.0, 2.5}) {
    for (const std::int64_t t_k : {6, 9, 17}) {
      for (const std::size_t m : {std::size_t{1}, std::size_t{2}}) {
        const auto alloc = optimal_allocation(rho, t_k, m, 1.0);
        const double spend = static_cast<double>(m) *
                             (alloc.rho_p + alloc.rho_d * static_cast<double>(t_k - static_cast<std::int64_t>(m)));
        CHECK(std::abs(spend - rho * static_cast<double>(t_k)) < 1e-9);
        CHECK(alloc.rho_p >= 0.0);
        CHECK(alloc.rho_d >= 0.0);
      }
    }
  }
}

TEST_CASE("optimal allocation: beats a fine grid of feasible data powers") {
  const double rho = 1.0, noise = 1.0;
  const std::int64_t t_k = 6;
  const std::size_t m = 2;
  const auto alloc = optimal_allocation(rho, t_k, m, noise);
  const double opt = inverse_quality(alloc.rho_p, alloc.rho_d, m, noise);

  const double md = static_cast<double>(m);
  const double slots = static_cast<double>(t_k - static_cast<std::int64_t>(m));
  const double rho_d_max = rho * static_cast<double>(t_k) / (md * slots);
  double best = 1e300;
  const std::size_t points = 10000;
  for (std::size_t i = 1; i < points; ++i) {
    const double rho_d = rho_d_max * static_cast<double>(i) / static_cast<double>(points);
    const double rho_p = rho * static_cast<double>(t_k) / md - rho_d * slots;
    if (rho_p < 0.0) continue;
    best = std::min(best, inverse_quality(rho_p, rho_d, m, noise));
  }
  CHECK(opt <= best + 1e-9);
}

TEST_CASE("optimal allocation: no data phase when the sub-block is all pilots") {
  CHECK_THROWS_AS(optimal_allocation(1.0, 2, 2, 1.0), ConfigError);
  CHECK_THROWS_AS(optimal_allocation(1.0, 1, 2, 1.0), ConfigError);
}

TEST_CASE("optimal allocation: starved budget reports the feasibility threshold") {
  // pilot power goes negative once rho < noise*sqrt(T-M)/T = 1/3 here
  try {
    optimal_allocation(0.2, 6, 2, 1.0);
    FAIL("expected an infeasible-budget rejection");
  } catch (const InfeasibleBudgetError& e) {
    CHECK(e.min_feasible_rho() == doctest::Approx(1.0 / 3.0).epsilon(1e-9));
  }
  CHECK_NOTHROW(optimal_allocation(1.0 / 3.0 + 1e-6, 6, 2, 1.0));
}

TEST_CASE("static rate: zero pilot power earns zero rate") {
  SeededRng rng(21);
  const auto rate = static_rate(0.0, 2, 8, 1.0, 100, rng);
  CHECK(rate.mean == 0.0);
  CHECK(rate.std_error == 0.0);
}

TEST_CASE("static rate: doubling the sub-block halves the rate") {
  SeededRng rng(22);
  const auto short_block = static_rate(1.3, 2, 4, 1.0, 5000, rng);
  const auto long_block = static_rate(1.3, 2, 8, 1.0, 5000, rng);
  CHECK(short_block.mean == doctest::Approx(2.0 * long_block.mean).epsilon(1e-12));
}

TEST_CASE("static rate: single-antenna mean matches a quadrature oracle") {
  // E[log2(1 + x)], x ~ Exp(1), via Simpson's rule on [0, 40]
  const std::size_t n = 200000;  // even
  const double hi = 40.0;
  const double h = hi / static_cast<double>(n);
  auto f = [](double x) { return std::log2(1.0 + x) * std::exp(-x); };
  double quad = f(0.0) + f(hi);
  for (std::size_t i = 1; i < n; ++i)
    quad += f(h * static_cast<double>(i)) * ((i % 2 == 1) ? 4.0 : 2.0);
  quad *= h / 3.0;

  SeededRng rng(23);
  const auto rate = static_rate(1.0, 1, 1, 1.0, 200000, rng);
  CHECK(std::abs(rate.mean - quad) < 3.0 * rate.std_error);
  CHECK(rate.std_error > 0.0);
}

TEST_CASE("dynamic rate: rate scales with the data-phase fraction") {
  PowerAllocation alloc;
  alloc.rho = 1.0;
  alloc.rho_p = 0.8;
  alloc.rho_d = 0.5;
  alloc.m = 2;
  alloc.noise_var = 1.0;
  SeededRng rng(24);
  alloc.t_k = 4;  // data fraction 1/2
  const auto half = dynamic_rate(alloc, 5000, rng);
  alloc.t_k = 8;  // data fraction 3/4
  const auto three_quarters = dynamic_rate(alloc, 5000, rng);
  CHECK(three_quarters.mean == doctest::Approx(1.5 * half.mean).epsilon(1e-12));
}

TEST_CASE("dynamic rate: zero effective snr earns zero rate") {
  PowerAllocation alloc;
  alloc.rho = 1.0;
  alloc.rho_p = 1.0;
  alloc.rho_d = 0.0;
  alloc.t_k = 6;
  alloc.m = 2;
  alloc.noise_var = 1.0;
  SeededRng rng(25);
  const auto rate = dynamic_rate(alloc, 1000, rng);
  CHECK(rate.mean == 0.0);
}

TEST_CASE("dynamic rate: optimal split beats the naive equal split") {
  const double rho = 1.0, noise = 1.0;
  const std::int64_t t_k = 6;
  const std::size_t m = 2;
  const auto optimal = optimal_allocation(rho, t_k, m, noise);

  PowerAllocation equal = optimal;
  equal.rho_p = rho / static_cast<double>(m);
  equal.rho_d = rho / static_cast<double>(m);

  SeededRng rng(26);
  const auto opt_rate = dynamic_rate(optimal, 1000000, rng);
  const auto eq_rate = dynamic_rate(equal, 1000000, rng);
  CHECK(opt_rate.mean >= eq_rate.mean);
}

TEST_CASE("frame power audit: optimal allocation leaves zero slack") {
  const auto alloc = optimal_allocation(1.0, 6, 2, 1.0);
  const std::int64_t q = 5;
  const auto check = check_frame_power(q, alloc, q * alloc.t_k, alloc.rho);
  CHECK(check.ok);
  CHECK(std::abs(check.slack) < 1e-9);
}

TEST_CASE("frame power audit: inflated data power is reported, not thrown") {
  auto alloc = optimal_allocation(1.0, 6, 2, 1.0);
  alloc.rho_d *= 2.0;
  const std::int64_t q = 5;
  const auto check = check_frame_power(q, alloc, q * alloc.t_k, alloc.rho);
  CHECK(!check.ok);
  CHECK(check.slack < 0.0);
}

TEST_CASE("frame power audit: zero sub-blocks are vacuously fine") {
  const auto alloc = optimal_allocation(1.0, 6, 2, 1.0);
  const auto check = check_frame_power(0, alloc, 0, alloc.rho);
  CHECK(check.ok);
}
