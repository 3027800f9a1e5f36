#pragma once

#include <cstdint>
#include <vector>

#include "coherentfl/dataset.hpp"
#include "coherentfl/fedcore.hpp"
#include "coherentfl/objectives.hpp"
#include "coherentfl/trace.hpp"

namespace coherentfl::analysis {

// Measured problem constants feeding the convergence bound. All are upper
// bounds by construction (max over probe points; safety factor on estimated
// smoothness), which is what makes bound dominance a checkable assertion.
struct AssumptionConstants {
  double l = 0.0;         // smoothness
  double gamma2 = 0.0;    // minibatch-gradient variance bound
  double omega2 = 0.0;    // device-heterogeneity bound
  double sigma2_d = 0.0;  // broadcast noise power entering the floor
  double eta_local = 0.0;
  std::size_t tau = 1;

  double eta_g() const { return eta_local * static_cast<double>(tau); }
};

struct ConstantsEstimateOptions {
  std::size_t probes = 4;       // probe points beyond the initial model
  std::size_t trials = 64;      // minibatch draws per probe for gamma2
  std::size_t batch = 0;        // 0 = full batch (gamma2 becomes 0)
  double l_safety = 1.1;        // multiplier on power-iteration smoothness
  std::size_t power_iters = 300;
  double power_tol = 1e-8;
};

struct BoundReport {
  AssumptionConstants constants;
  double f0 = 0.0;
  double f_star = 0.0;
  double z = 0.0;              // irreducible floor
  double bound = 0.0;          // full right-hand side
  double empirical = 0.0;      // mean squared gradient norm over the trace
  bool lr_condition_ok = false;
  bool satisfied = false;
  double margin = 0.0;         // bound - empirical
};

// Irreducible floor: 8 L eta_g tau (gamma2 + omega2) + 4 L sigma2_d.
double error_floor(const AssumptionConstants& constants);

// eta_local <= 1 / (2 L tau); the bound is only guaranteed under this.
bool lr_condition_ok(const AssumptionConstants& constants);

// Right-hand side of the convergence bound over a T-round trace:
//   4 (F0 - F*) / (T eta_g) + (4 L^2 tau eta_g / T) sum ||theta_t - theta_{t-1}||^2 + Z
// with the round-0 model diff defined as zero.
double convergence_bound(const AssumptionConstants& constants,
                         const std::vector<RoundTrace>& trace, double f0, double f_star);

// (1/T) sum ||grad F(theta_t)||^2 over the trace.
double empirical_mean_grad_norm(const std::vector<RoundTrace>& trace);

// Fills l, gamma2, and omega2 by probing the global loss around the initial
// model: exact top curvature when the objective knows it, otherwise power
// iteration on finite-difference Hessian-vector products times a safety
// factor. gamma2/omega2 are maxima over the probe points. The caller supplies
// sigma2_d, eta_local, and tau.
AssumptionConstants estimate_constants(const fl::LocalObjective& objective,
                                       const std::vector<data::Dataset>& datasets,
                                       const ConstantsEstimateOptions& options,
                                       std::uint64_t seed);

// Largest per-device broadcast noise power: per-entry variance times the
// number of delivered entries.
double broadcast_noise_power(const fl::FlProblem& problem);

// Slots spent per parameter-carrying slot. Dedicated pilots cost 1/(1-lambda);
// reuse schemes deliver parameters in every slot.
double normalized_comm_cost(Scheme scheme, double lambda);

// Convenience: everything the bound check needs in one record.
BoundReport check_bound(const AssumptionConstants& constants,
                        const std::vector<RoundTrace>& trace, double f0, double f_star);

}  // namespace coherentfl::analysis
