#include <cmath>
#include <cstddef>
#include <vector>

#include "doctest.h"

#include "coherentfl/errors.hpp"
#include "coherentfl/impairment.hpp"
#include "coherentfl/power.hpp"
#include "coherentfl/rng.hpp"

using namespace coherentfl;
using namespace coherentfl::impairment;

TEST_CASE("full mask delivers every entry") {
  const auto mask = full_mask(17);
  CHECK(mask.size() == 17);
  CHECK(mask_support(mask) == 17);
}

TEST_CASE("pilot-reuse mask blanks one pilot phase per sub-block") {
  const auto mask = dynamic_reuse_mask(100, 20, 100);
  REQUIRE(mask.size() == 100);
  for (std::size_t i = 0; i < 100; ++i) CHECK(mask[i] == (i < 20 ? 0 : 1));
  CHECK(mask_support(mask) == 80);
}

TEST_CASE("pilot-reuse mask repeats with the sub-block period") {
  const auto mask = dynamic_reuse_mask(10, 2, 5);
  const std::vector<std::uint8_t> want = {0, 0, 1, 1, 1, 0, 0, 1, 1, 1};
  REQUIRE(mask.size() == want.size());
  for (std::size_t i = 0; i < want.size(); ++i) CHECK(mask[i] == want[i]);
}

TEST_CASE("pilot-reuse mask density tracks the pilot fraction") {
  const std::size_t dim = 1000, m = 2;
  const std::int64_t t_k = 5;
  const auto mask = dynamic_reuse_mask(dim, m, t_k);
  const double lambda = static_cast<double>(m) / static_cast<double>(t_k);
  const double zero_frac =
      static_cast<double>(dim - mask_support(mask)) / static_cast<double>(dim);
  CHECK(std::abs(zero_frac - lambda) <= 1.0 / static_cast<double>(dim));
}

TEST_CASE("pilot-reuse mask rejects a sub-block with no data phase") {
  CHECK_THROWS_AS(dynamic_reuse_mask(10, 2, 2), ConfigError);
  CHECK_THROWS_AS(dynamic_reuse_mask(10, 0, 5), ConfigError);
}

TEST_CASE("slow-fading device only misses the first refresh of its own block") {
  // refresh period 5, own coherence 10: estimation happens once per own block
  const auto mask = dynamic_reuse_mask_fresh(20, 2, 5, 10);
  std::vector<std::size_t> zeros;
  for (std::size_t i = 0; i < mask.size(); ++i)
    if (!mask[i]) zeros.push_back(i);
  const std::vector<std::size_t> want = {0, 1, 10, 11};
  CHECK(zeros == want);
}

TEST_CASE("matching own coherence reduces the fresh mask to the plain one") {
  const auto fresh = dynamic_reuse_mask_fresh(40, 3, 8, 8);
  const auto plain = dynamic_reuse_mask(40, 3, 8);
  CHECK(fresh == plain);
}

TEST_CASE("downlink noise: 20 dB data power puts statics at 0.01") {
  power::PowerAllocation alloc;
  alloc.rho = 100.0;
  alloc.rho_p = 100.0;
  alloc.rho_d = 100.0;
  alloc.t_k = 8;
  alloc.m = 2;
  alloc.noise_var = 1.0;
  const auto spec = noise_spec(alloc);
  CHECK(spec.sigma2_static == doctest::Approx(0.01).epsilon(1e-12));
}

TEST_CASE("downlink noise: estimating penalty vanishes with perfect pilots") {
  power::PowerAllocation alloc;
  alloc.rho = 1.0;
  alloc.rho_p = 1e6;
  alloc.rho_d = 1.0;
  alloc.t_k = 8;
  alloc.m = 2;
  alloc.noise_var = 1.0;
  const auto spec = noise_spec(alloc);
  CHECK(spec.sigma2_dynamic / spec.sigma2_static > 1.0);
  CHECK(spec.sigma2_dynamic / spec.sigma2_static < 1.01);
}

TEST_CASE("downlink noise: estimating devices are strictly noisier than statics") {
  for (const double rho : {0.5, 1.0, 4.0}) {
    for (const std::int64_t t_k : {6, 12}) {
      for (const std::size_t m : {std::size_t{1}, std::size_t{2}, std::size_t{4}}) {
        if (t_k <= static_cast<std::int64_t>(m)) continue;
        const auto alloc = power::optimal_allocation(rho, t_k, m, 1.0);
        const auto product = noise_spec(alloc);
        CHECK(product.sigma2_static < product.sigma2_dynamic);
        const auto additive = additive_noise_spec(alloc);
        CHECK(additive.sigma2_static < additive.sigma2_dynamic);
      }
    }
  }
}

TEST_CASE("pilot-on-payload estimation is worse than orthogonal pilot reuse") {
  power::PowerAllocation alloc;
  alloc.rho = 1.0;
  alloc.rho_p = 1.0;
  alloc.rho_d = 1.0;
  alloc.t_k = 6;
  alloc.m = 2;
  alloc.noise_var = 1.0;
  const auto product = noise_spec(alloc);
  const auto additive = additive_noise_spec(alloc);
  CHECK(product.estimate_error == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
  CHECK(additive.estimate_error == doctest::Approx(1.2).epsilon(1e-12));
  CHECK(additive.sigma2_dynamic > product.sigma2_dynamic);
  CHECK(additive.gamma_eff < product.gamma_eff);
  CHECK(additive.sigma2_static == product.sigma2_static);
}

TEST_CASE("broadcast corruption: zero noise and full mask is the identity") {
  const std::vector<double> params = {1.5, -2.0, 0.25};
  SeededRng rng(31);
  const auto received = corrupt_broadcast(params, full_mask(3), 0.0, rng);
  CHECK(received.values == params);
  CHECK(mask_support(received.mask) == 3);
}

TEST_CASE("broadcast corruption: noise is unbiased with the declared variance") {
  const std::size_t dim = 100000;
  const double sigma2 = 0.7;
  const std::vector<double> params(dim, 0.0);
  SeededRng rng(32);
  const auto received = corrupt_broadcast(params, full_mask(dim), sigma2, rng);
  double sum = 0.0, sum_sq = 0.0;
  for (const double v : received.values) {
    sum += v;
    sum_sq += v * v;
  }
  const double n = static_cast<double>(dim);
  const double mean = sum / n;
  const double var = sum_sq / n - mean * mean;
  CHECK(std::abs(var - sigma2) < 0.02 * sigma2);
  const double std_error = std::sqrt(sigma2 / n);
  CHECK(std::abs(mean) < 3.0 * std_error);
}

TEST_CASE("broadcast corruption: an all-zero mask leaves only placeholders") {
  const std::vector<double> params = {3.0, 4.0};
  const MaskBits nothing(2, 0);
  SeededRng corrupting(33), untouched(33);
  const auto received = corrupt_broadcast(params, nothing, 1.0, corrupting);
  CHECK(received.values == std::vector<double>{0.0, 0.0});
  CHECK(mask_support(received.mask) == 0);
  // no entries delivered, so no variates were consumed
  CHECK(corrupting.gaussian() == untouched.gaussian());
}

TEST_CASE("broadcast corruption: exactly one variate per delivered entry") {
  const std::vector<double> params = {1.0, 2.0, 3.0, 4.0};
  const MaskBits mask = {1, 0, 1, 0};
  SeededRng corrupting(34), mirror(34);
  corrupt_broadcast(params, mask, 2.0, corrupting);
  mirror.gaussian();
  mirror.gaussian();
  CHECK(corrupting.gaussian() == mirror.gaussian());
}

TEST_CASE("broadcast corruption: missing entries are tracked by mask bits") {
  const std::vector<double> params = {5.0, 6.0, 7.0};
  const MaskBits mask = {0, 1, 0};
  SeededRng rng(35);
  const auto received = corrupt_broadcast(params, mask, 0.0, rng);
  CHECK(received.values[0] == 0.0);
  CHECK(received.values[1] == 6.0);
  CHECK(received.values[2] == 0.0);
  CHECK(received.mask == mask);
}
