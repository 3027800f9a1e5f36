#pragma once

#include <cstddef>
#include <cstdint>

#include "coherentfl/rng.hpp"

namespace coherentfl::power {

// Pilot/data split for one sub-block of T_K slots with m transmit antennas.
// Units follow the frame budget bookkeeping: a sub-block spends
// m * (rho_p + rho_d * (T_K - m)) against a budget of rho * T_K.
struct PowerAllocation {
  double rho = 0.0;       // per-slot budget
  double rho_p = 0.0;     // pilot power
  double rho_d = 0.0;     // data power
  std::int64_t t_k = 0;   // sub-block length (smallest dynamic coherence time)
  std::size_t m = 0;      // antennas
  double noise_var = 1.0; // receiver noise power
};

struct RateEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::size_t trials = 0;
};

struct FramePowerCheck {
  bool ok = false;
  double slack = 0.0;  // budget minus spend; negative when violated
};

// Data-phase power that maximizes the post-estimation SNR under the sub-block
// budget, with the pilot power taking the remainder:
//   rho_d = (noise + rho*T_K) / (m * sqrt(T_K - m) * (1 + sqrt(T_K - m)))
//   rho_p = rho*T_K/m - rho_d*(T_K - m)
// The budget is spent with equality. Throws ConfigError when T_K <= m (no
// data phase) and InfeasibleBudgetError (with the smallest workable budget)
// when the optimum would need a negative pilot power.
PowerAllocation optimal_allocation(double rho, std::int64_t t_k, std::size_t m,
                                   double noise_var);

// Post-estimation data SNR per unit estimate energy:
//   rho_d * (noise + m*rho_p) / (noise * (noise + m*rho_p + m*rho_d))
double effective_snr(double rho_p, double rho_d, std::size_t m, double noise_var);

// Monte Carlo achievable rate of a known-channel device listening during the
// pilot phase: (m / T_K) * E[log2(1 + rho_p/(m*noise) * ||h||^2)].
RateEstimate static_rate(double rho_p, std::size_t m, std::int64_t t_k, double noise_var,
                         std::size_t trials, const SeededRng& rng);

// Monte Carlo achievable rate of an estimating device in the data phase:
// (1 - m/T_K) * E[log2(1 + gamma_eff * ||f_hat||^2)], f_hat entries
// CN(0, alpha^2) with alpha^2 = m*rho_p / (noise + m*rho_p).
RateEstimate dynamic_rate(const PowerAllocation& alloc, std::size_t trials,
                          const SeededRng& rng);

// Audits q sub-blocks against a frame budget of rho * s.
FramePowerCheck check_frame_power(std::int64_t q, const PowerAllocation& alloc,
                                  std::int64_t s, double rho);

}  // namespace coherentfl::power
