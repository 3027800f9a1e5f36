#include "coherentfl/power.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "coherentfl/errors.hpp"
#include "coherentfl/parallel.hpp"
#include "coherentfl/phymath.hpp"

namespace coherentfl::power {
namespace {

constexpr double kLog2 = 0.69314718055994530942;

void require_positive_noise(double noise_var) {
  if (!(noise_var > 0.0))
    throw std::domain_error("noise variance must be positive");
}

// Mean/stderr over per-trial values computed into slots and reduced in index
// order, so results do not depend on the worker count.
RateEstimate reduce_trials(std::vector<double>& values) {
  RateEstimate est;
  est.trials = values.size();
  double sum = 0.0;
  for (double v : values) sum += v;
  est.mean = sum / static_cast<double>(values.size());
  double ss = 0.0;
  for (double v : values) ss += (v - est.mean) * (v - est.mean);
  const double n = static_cast<double>(values.size());
  est.std_error = n > 1 ? std::sqrt(ss / (n - 1) / n) : 0.0;
  return est;
}

}  // namespace

PowerAllocation optimal_allocation(double rho, std::int64_t t_k, std::size_t m,
                                   double noise_var) {
  require_positive_noise(noise_var);
  if (!(rho > 0.0)) throw std::domain_error("power budget must be positive");
  if (m == 0) throw ConfigError("antenna count must be positive");
  const auto md = static_cast<double>(m);
  const auto td = static_cast<double>(t_k);
  if (t_k <= static_cast<std::int64_t>(m))
    throw ConfigError("sub-block of " + std::to_string(t_k) + " slots with pilot length " +
                      std::to_string(m) + " has no data phase");
  const double r = std::sqrt(td - md);
  const double rho_d = (noise_var + rho * td) / (md * r * (1.0 + r));
  double rho_p = rho * td / md - rho_d * (td - md);
  if (rho_p < -1e-12) {
    const double min_rho = noise_var * r / td;
    throw InfeasibleBudgetError(
        "budget " + std::to_string(rho) + " cannot fund a nonnegative pilot power; need rho >= " +
            std::to_string(min_rho),
        min_rho);
  }
  if (rho_p < 0.0) rho_p = 0.0;
  PowerAllocation alloc;
  alloc.rho = rho;
  alloc.rho_p = rho_p;
  alloc.rho_d = rho_d;
  alloc.t_k = t_k;
  alloc.m = m;
  alloc.noise_var = noise_var;
  return alloc;
}

double effective_snr(double rho_p, double rho_d, std::size_t m, double noise_var) {
  require_positive_noise(noise_var);
  if (rho_p < 0.0 || rho_d < 0.0) throw std::domain_error("powers must be nonnegative");
  const auto md = static_cast<double>(m);
  return rho_d * (noise_var + md * rho_p) /
         (noise_var * (noise_var + md * rho_p + md * rho_d));
}

RateEstimate static_rate(double rho_p, std::size_t m, std::int64_t t_k, double noise_var,
                         std::size_t trials, const SeededRng& rng) {
  require_positive_noise(noise_var);
  if (rho_p < 0.0) throw std::domain_error("pilot power must be nonnegative");
  if (m == 0 || t_k < static_cast<std::int64_t>(m))
    throw ConfigError("static_rate: need 1 <= m <= t_k");
  if (trials == 0) throw std::invalid_argument("static_rate: need at least one trial");
  const double md = static_cast<double>(m);
  const double prefactor = md / static_cast<double>(t_k);
  const double snr_scale = rho_p / (md * noise_var);
  std::vector<double> values(trials);
  parallel_for(trials, [&](std::size_t i) {
    SeededRng local = rng.derive(0x5741u, i);
    const ComplexVector h = phymath::draw_rayleigh_channel(m, local);
    values[i] = prefactor * std::log1p(snr_scale * h.norm_sq()) / kLog2;
  });
  return reduce_trials(values);
}

RateEstimate dynamic_rate(const PowerAllocation& alloc, std::size_t trials,
                          const SeededRng& rng) {
  require_positive_noise(alloc.noise_var);
  if (alloc.m == 0 || alloc.t_k <= static_cast<std::int64_t>(alloc.m))
    throw ConfigError("dynamic_rate: need 1 <= m < t_k");
  if (trials == 0) throw std::invalid_argument("dynamic_rate: need at least one trial");
  const double md = static_cast<double>(alloc.m);
  const double prefactor = 1.0 - md / static_cast<double>(alloc.t_k);
  const double gamma = effective_snr(alloc.rho_p, alloc.rho_d, alloc.m, alloc.noise_var);
  const double alpha2 = md * alloc.rho_p / (alloc.noise_var + md * alloc.rho_p);
  const double amp = std::sqrt(alpha2);
  std::vector<double> values(trials);
  parallel_for(trials, [&](std::size_t i) {
    SeededRng local = rng.derive(0x5744u, i);
    double energy = 0.0;
    for (std::size_t j = 0; j < alloc.m; ++j) energy += std::norm(local.cgaussian() * amp);
    values[i] = prefactor * std::log1p(gamma * energy) / kLog2;
  });
  return reduce_trials(values);
}

FramePowerCheck check_frame_power(std::int64_t q, const PowerAllocation& alloc,
                                  std::int64_t s, double rho) {
  if (q < 0 || s < 0) throw std::invalid_argument("check_frame_power: q and s must be >= 0");
  const double md = static_cast<double>(alloc.m);
  const double spend = static_cast<double>(q) * md *
                       (alloc.rho_p + alloc.rho_d * static_cast<double>(alloc.t_k - alloc.m));
  const double budget = rho * static_cast<double>(s);
  FramePowerCheck check;
  check.slack = budget - spend;
  check.ok = spend <= budget + 1e-9;
  return check;
}

}  // namespace coherentfl::power
