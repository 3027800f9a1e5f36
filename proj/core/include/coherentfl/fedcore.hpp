#pragma once

#include <cstdint>
#include <vector>

#include "coherentfl/dataset.hpp"
#include "coherentfl/impairment.hpp"
#include "coherentfl/objectives.hpp"
#include "coherentfl/rng.hpp"
#include "coherentfl/trace.hpp"

namespace coherentfl::fl {

// Stream ids hung off the master seed; every stochastic draw in a run comes
// from derive(<id>, round, device), so schemes and thread counts never shift
// each other's randomness.
inline constexpr std::uint64_t kStreamInit = 0xF1;
inline constexpr std::uint64_t kStreamBroadcast = 0xB0;
inline constexpr std::uint64_t kStreamSgd = 0x5D;

struct TrainConfig {
  std::size_t tau = 1;          // local steps per round
  double eta_local = 0.01;      // constant local learning rate
  std::size_t batch_size = 0;   // 0 = full batch
  std::int64_t rounds = 1;
  FillStrategy fill = FillStrategy::PLMF;
  Scheme scheme = Scheme::ProductSuperposition;
};

// Everything a training run needs besides the knobs in TrainConfig. The
// downlink is abstracted to a per-device (mask, noise) pair prepared by the
// caller; the uplink is perfect.
struct FlProblem {
  const LocalObjective* objective = nullptr;
  std::vector<data::Dataset> device_data;
  std::vector<impairment::MaskBits> masks;  // delivery mask per device
  std::vector<double> noise_vars;           // per-entry downlink noise per device
  const data::Dataset* test_data = nullptr; // optional held-out accuracy set
  double comm_cost_slots = 1.0;             // per-round normalized downlink cost
  double lambda = 0.0;                      // pilot duty cycle, recorded per row
};

struct FlState {
  std::vector<double> global;
  std::vector<double> prev_global;
  std::vector<std::vector<double>> prev_local;  // per device, feeds PLMF
  std::int64_t round = 0;
};

struct LocalSgdResult {
  std::vector<double> model;  // theta after tau steps
  std::vector<double> delta;  // theta after - theta before
};

// F(theta) = sum_k (B_k/B) F_k(theta), full batch.
double global_loss(std::span<const double> theta, const LocalObjective& objective,
                   const std::vector<data::Dataset>& datasets);

// Full-batch gradient of the global loss.
std::vector<double> global_gradient(std::span<const double> theta,
                                    const LocalObjective& objective,
                                    const std::vector<data::Dataset>& datasets);

// tau gradient steps from theta_init; minibatches are drawn without
// replacement per step. Throws on non-finite gradients with the step index.
LocalSgdResult local_sgd(std::span<const double> theta_init,
                         const LocalObjective& objective, const data::Dataset& dataset,
                         std::size_t tau, double eta, std::size_t batch, SeededRng& rng);

// Missing entries become zero.
std::vector<double> fill_zero(const impairment::ReceivedModel& received);

// Missing entries come from the device's previous local model.
std::vector<double> fill_plmf(const impairment::ReceivedModel& received,
                              std::span<const double> prev_local);

// sum_k weights[k] * updates[k]; weights must sum to 1 within 1e-12.
std::vector<double> aggregate(const std::vector<std::vector<double>>& updates,
                              std::span<const double> weights);

// B_k / B from dataset sizes.
std::vector<double> dataset_weights(const std::vector<data::Dataset>& datasets);

// First batch indices of a partial Fisher-Yates shuffle of [0, n).
std::vector<std::size_t> sample_without_replacement(std::size_t n, std::size_t batch,
                                                    SeededRng& rng);

// Global model from the objective's initializer; every device's previous
// local model starts at that same point, so the first PLMF round cannot
// inject stale values.
FlState init_state(const FlProblem& problem, std::uint64_t seed);

// One communication round: record metrics at the current global model,
// broadcast through the noisy masked downlink, fill, run local SGD on every
// device (in parallel, with per-device streams), aggregate, advance.
RoundTrace run_round(FlState& state, const FlProblem& problem, const TrainConfig& config,
                     std::uint64_t seed);

// config.rounds rounds from a fresh state.
std::vector<RoundTrace> run_training(const FlProblem& problem, const TrainConfig& config,
                                     std::uint64_t seed, FlState* final_state = nullptr);

}  // namespace coherentfl::fl
