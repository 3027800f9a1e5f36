#include "coherentfl/fedcore.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "coherentfl/errors.hpp"
#include "coherentfl/parallel.hpp"

namespace coherentfl::fl {

namespace {

void check_problem(const FlProblem& problem) {
  if (problem.objective == nullptr) throw ConfigError("missing objective");
  const std::size_t k = problem.device_data.size();
  if (k == 0) throw ConfigError("no devices");
  if (problem.masks.size() != k || problem.noise_vars.size() != k)
    throw ConfigError("masks and noise levels must cover every device");
  const std::size_t d = problem.objective->dim();
  for (std::size_t i = 0; i < k; ++i) {
    if (problem.device_data[i].n == 0)
      throw ConfigError("device " + std::to_string(i) + " has an empty dataset");
    if (problem.masks[i].size() != d)
      throw ConfigError("mask length mismatch for device " + std::to_string(i));
    if (problem.noise_vars[i] < 0.0)
      throw ConfigError("negative downlink noise for device " + std::to_string(i));
  }
}

void check_finite(std::span<const double> grad, std::size_t step) {
  for (const auto g : grad) {
    if (!std::isfinite(g))
      throw std::runtime_error("non-finite gradient at local step " +
                               std::to_string(step));
  }
}

}  // namespace

std::vector<double> dataset_weights(const std::vector<data::Dataset>& datasets) {
  if (datasets.empty()) throw ConfigError("no devices");
  double total = 0.0;
  for (const auto& d : datasets) total += static_cast<double>(d.n);
  if (total == 0.0) throw ConfigError("all datasets are empty");
  std::vector<double> w(datasets.size());
  for (std::size_t i = 0; i < w.size(); ++i)
    w[i] = static_cast<double>(datasets[i].n) / total;
  return w;
}

double global_loss(std::span<const double> theta, const LocalObjective& objective,
                   const std::vector<data::Dataset>& datasets) {
  const auto weights = dataset_weights(datasets);
  double acc = 0.0;
  for (std::size_t k = 0; k < datasets.size(); ++k) {
    const auto rows = all_rows(datasets[k]);
    acc += weights[k] * objective.loss(theta, datasets[k], rows);
  }
  return acc;
}

std::vector<double> global_gradient(std::span<const double> theta,
                                    const LocalObjective& objective,
                                    const std::vector<data::Dataset>& datasets) {
  const auto weights = dataset_weights(datasets);
  std::vector<double> grad(objective.dim(), 0.0);
  std::vector<double> local(objective.dim());
  for (std::size_t k = 0; k < datasets.size(); ++k) {
    const auto rows = all_rows(datasets[k]);
    objective.gradient(theta, datasets[k], rows, local);
    for (std::size_t j = 0; j < grad.size(); ++j) grad[j] += weights[k] * local[j];
  }
  return grad;
}

std::vector<std::size_t> sample_without_replacement(std::size_t n, std::size_t batch,
                                                    SeededRng& rng) {
  if (batch > n) throw std::invalid_argument("batch larger than population");
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  for (std::size_t i = 0; i < batch; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(rng.below(n - i));
    std::swap(idx[i], idx[j]);
  }
  idx.resize(batch);
  return idx;
}

LocalSgdResult local_sgd(std::span<const double> theta_init,
                         const LocalObjective& objective, const data::Dataset& dataset,
                         std::size_t tau, double eta, std::size_t batch, SeededRng& rng) {
  if (dataset.n == 0) throw ConfigError("empty dataset");
  if (tau == 0) throw ConfigError("need at least one local step");
  const std::size_t effective_batch =
      (batch == 0 || batch > dataset.n) ? dataset.n : batch;
  LocalSgdResult out;
  out.model.assign(theta_init.begin(), theta_init.end());
  std::vector<double> grad(objective.dim());
  const auto full = all_rows(dataset);
  for (std::size_t step = 0; step < tau; ++step) {
    if (effective_batch == dataset.n) {
      objective.gradient(out.model, dataset, full, grad);
    } else {
      const auto rows = sample_without_replacement(dataset.n, effective_batch, rng);
      objective.gradient(out.model, dataset, rows, grad);
    }
    check_finite(grad, step);
    for (std::size_t j = 0; j < grad.size(); ++j) out.model[j] -= eta * grad[j];
  }
  out.delta.resize(out.model.size());
  for (std::size_t j = 0; j < out.model.size(); ++j)
    out.delta[j] = out.model[j] - theta_init[j];
  return out;
}

std::vector<double> fill_zero(const impairment::ReceivedModel& received) {
  std::vector<double> theta(received.values.size(), 0.0);
  for (std::size_t j = 0; j < theta.size(); ++j)
    if (received.mask[j]) theta[j] = received.values[j];
  return theta;
}

std::vector<double> fill_plmf(const impairment::ReceivedModel& received,
                              std::span<const double> prev_local) {
  if (prev_local.size() != received.values.size())
    throw std::invalid_argument("previous local model length mismatch");
  std::vector<double> theta(prev_local.begin(), prev_local.end());
  for (std::size_t j = 0; j < theta.size(); ++j)
    if (received.mask[j]) theta[j] = received.values[j];
  return theta;
}

std::vector<double> aggregate(const std::vector<std::vector<double>>& updates,
                              std::span<const double> weights) {
  if (updates.empty()) throw std::invalid_argument("no updates to aggregate");
  if (updates.size() != weights.size())
    throw std::invalid_argument("one weight per update required");
  double sum = 0.0;
  for (const auto w : weights) sum += w;
  if (std::abs(sum - 1.0) > 1e-12)
    throw std::invalid_argument("aggregation weights must sum to one");
  std::vector<double> delta(updates.front().size(), 0.0);
  for (std::size_t k = 0; k < updates.size(); ++k) {
    if (updates[k].size() != delta.size())
      throw std::invalid_argument("update length mismatch");
    for (std::size_t j = 0; j < delta.size(); ++j) delta[j] += weights[k] * updates[k][j];
  }
  return delta;
}

FlState init_state(const FlProblem& problem, std::uint64_t seed) {
  check_problem(problem);
  SeededRng init = SeededRng(seed).derive(kStreamInit);
  FlState state;
  state.global = problem.objective->initial_model(init);
  state.prev_global = state.global;
  state.prev_local.assign(problem.device_data.size(), state.global);
  state.round = 0;
  return state;
}

RoundTrace run_round(FlState& state, const FlProblem& problem, const TrainConfig& config,
                     std::uint64_t seed) {
  check_problem(problem);
  const auto& objective = *problem.objective;
  const std::size_t devices = problem.device_data.size();
  const auto weights = dataset_weights(problem.device_data);
  const SeededRng master(seed);
  const auto round = static_cast<std::uint64_t>(state.round);

  RoundTrace trace;
  trace.round = state.round;
  trace.global_loss = global_loss(state.global, objective, problem.device_data);
  const auto grad = global_gradient(state.global, objective, problem.device_data);
  trace.grad_norm_sq = 0.0;
  for (const auto g : grad) trace.grad_norm_sq += g * g;
  trace.model_diff_sq = 0.0;
  for (std::size_t j = 0; j < state.global.size(); ++j) {
    const double diff = state.global[j] - state.prev_global[j];
    trace.model_diff_sq += diff * diff;
  }
  trace.test_accuracy = (problem.test_data != nullptr && objective.classifies())
                            ? objective.accuracy(state.global, *problem.test_data)
                            : 0.0;
  trace.comm_cost_slots = problem.comm_cost_slots;
  trace.lambda = problem.lambda;

  std::vector<std::vector<double>> updates(devices);
  std::vector<std::vector<double>> finals(devices);
  parallel_for(devices, [&](std::size_t k) {
    const auto id = static_cast<std::uint64_t>(k);
    SeededRng broadcast_rng = master.derive(kStreamBroadcast, round, id);
    const auto received = impairment::corrupt_broadcast(state.global, problem.masks[k],
                                                        problem.noise_vars[k],
                                                        broadcast_rng);
    const std::vector<double> start = config.fill == FillStrategy::ZF
                                          ? fill_zero(received)
                                          : fill_plmf(received, state.prev_local[k]);
    SeededRng sgd_rng = master.derive(kStreamSgd, round, id);
    try {
      auto result = local_sgd(start, objective, problem.device_data[k], config.tau,
                              config.eta_local, config.batch_size, sgd_rng);
      updates[k] = std::move(result.delta);
      finals[k] = std::move(result.model);
    } catch (const std::runtime_error& e) {
      throw std::runtime_error("device " + std::to_string(k) + ": " + e.what());
    }
  });

  const auto delta = aggregate(updates, weights);
  state.prev_global = state.global;
  for (std::size_t j = 0; j < state.global.size(); ++j) state.global[j] += delta[j];
  for (std::size_t k = 0; k < devices; ++k) state.prev_local[k] = std::move(finals[k]);
  state.round += 1;
  return trace;
}

std::vector<RoundTrace> run_training(const FlProblem& problem, const TrainConfig& config,
                                     std::uint64_t seed, FlState* final_state) {
  if (config.rounds < 1) throw ConfigError("need at least one round");
  if (config.eta_local <= 0.0) throw ConfigError("learning rate must be positive");
  FlState state = init_state(problem, seed);
  std::vector<RoundTrace> traces;
  traces.reserve(static_cast<std::size_t>(config.rounds));
  for (std::int64_t t = 0; t < config.rounds; ++t)
    traces.push_back(run_round(state, problem, config, seed));
  if (final_state != nullptr) *final_state = std::move(state);
  return traces;
}

}  // namespace coherentfl::fl
