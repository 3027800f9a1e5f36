#include "coherentfl/experiment.hpp"

#include <cmath>

#include "coherentfl/errors.hpp"

namespace coherentfl::experiment {

ModelKind parse_model(const std::string& s) {
  if (s == "quadratic") return ModelKind::Quadratic;
  if (s == "logistic") return ModelKind::Logistic;
  if (s == "mlp") return ModelKind::Mlp;
  throw ConfigError("unknown model '" + s + "' (expected quadratic, logistic, or mlp)");
}

const char* model_name(ModelKind kind) {
  switch (kind) {
    case ModelKind::Quadratic: return "quadratic";
    case ModelKind::Logistic: return "logistic";
    case ModelKind::Mlp: return "mlp";
  }
  return "unknown";
}

PhyContext resolve_phy(const ExperimentConfig& config) {
  if (config.devices == 0) throw ConfigError("need at least one device");
  if (config.statics > config.devices)
    throw ConfigError("more static devices than devices");
  if (config.antennas == 0) throw ConfigError("need at least one antenna");
  const double rho = std::pow(10.0, config.snr_db / 10.0);
  PhyContext phy;
  phy.has_dynamics = config.statics < config.devices;
  if (!phy.has_dynamics) {
    // No estimating devices: every slot carries data at full budget.
    phy.alloc.rho = rho;
    phy.alloc.rho_p = 0.0;
    phy.alloc.rho_d = rho;
    phy.alloc.t_k = fading::kStaticCoherence;
    phy.alloc.m = config.antennas;
    phy.alloc.noise_var = 1.0;
    phy.lambda = 0.0;
  } else {
    phy.alloc = power::optimal_allocation(rho, config.coherence, config.antennas, 1.0);
    phy.lambda = fading::duty_cycle(config.antennas, config.coherence);
  }
  phy.noise = config.scheme == Scheme::AdditiveSuperposition
                  ? impairment::additive_noise_spec(phy.alloc, config.noise_scale)
                  : impairment::noise_spec(phy.alloc, config.noise_scale);
  phy.comm_cost = analysis::normalized_comm_cost(config.scheme, phy.lambda);
  return phy;
}

std::vector<fading::DeviceProfile> build_profiles(const ExperimentConfig& config) {
  if (config.statics > config.devices)
    throw ConfigError("more static devices than devices");
  std::vector<fading::DeviceProfile> profiles(config.devices);
  const std::size_t dynamics = config.devices - config.statics;
  for (std::size_t k = 0; k < config.devices; ++k) {
    profiles[k].id = static_cast<int>(k);
    if (k < config.statics) {
      profiles[k].device_class = fading::DeviceClass::Static;
      profiles[k].coherence_time = fading::kStaticCoherence;
    } else {
      profiles[k].device_class = fading::DeviceClass::Dynamic;
      const std::size_t rank = k - config.statics;  // 0 = slowest-fading dynamic
      profiles[k].coherence_time =
          config.coherence * static_cast<std::int64_t>(dynamics - rank);
    }
  }
  return profiles;
}

std::unique_ptr<fl::LocalObjective> make_objective(const ExperimentConfig& config) {
  switch (config.model) {
    case ModelKind::Quadratic:
      return std::make_unique<fl::QuadraticObjective>(config.features, config.eig_min,
                                                      config.eig_max);
    case ModelKind::Logistic:
      return std::make_unique<fl::LogisticObjective>(config.features, config.classes);
    case ModelKind::Mlp:
      return std::make_unique<fl::MlpObjective>(config.features, config.hidden,
                                                config.classes);
  }
  throw ConfigError("unknown model kind");
}

RunResult build_run(const ExperimentConfig& config) {
  RunResult run;
  run.phy = resolve_phy(config);
  run.profiles = build_profiles(config);
  run.objective = make_objective(config);

  const auto full = data::synthetic_classification(config.train_n + config.test_n,
                                                   config.features, config.classes,
                                                   config.separation, config.seed);
  auto [train, test] = data::split_head(full, config.train_n);
  run.test = std::make_unique<data::Dataset>(std::move(test));
  run.problem.device_data = data::partition(train, config.devices, config.partition,
                                            config.shards_per_device, config.seed);
  for (std::size_t k = 0; k < config.devices; ++k)
    run.profiles[k].dataset_size = static_cast<std::int64_t>(run.problem.device_data[k].n);

  const std::size_t dim = run.objective->dim();
  run.problem.objective = run.objective.get();
  run.problem.test_data = run.test.get();
  run.problem.comm_cost_slots = run.phy.comm_cost;
  run.problem.lambda = run.phy.lambda;
  run.problem.masks.resize(config.devices);
  run.problem.noise_vars.resize(config.devices);

  for (std::size_t k = 0; k < config.devices; ++k) {
    const bool is_static = run.profiles[k].device_class == fading::DeviceClass::Static;
    if (is_static || !run.phy.has_dynamics) {
      run.problem.masks[k] = impairment::full_mask(dim);
      run.problem.noise_vars[k] = run.phy.noise.sigma2_static;
      continue;
    }
    run.problem.noise_vars[k] = run.phy.noise.sigma2_dynamic;
    if (config.scheme == Scheme::ProductSuperposition) {
      run.problem.masks[k] =
          config.fresh_block_full_decode
              ? impairment::dynamic_reuse_mask_fresh(dim, config.antennas,
                                                     config.coherence,
                                                     run.profiles[k].coherence_time)
              : impairment::dynamic_reuse_mask(dim, config.antennas, config.coherence);
    } else {
      // Dedicated pilots (Conventional) and additive reuse both deliver every
      // entry; they differ in cost and noise, not coverage.
      run.problem.masks[k] = impairment::full_mask(dim);
    }
  }
  return run;
}

RunResult run_training(const ExperimentConfig& config) {
  RunResult run = build_run(config);
  fl::TrainConfig tc;
  tc.tau = config.tau;
  tc.eta_local = config.eta_local;
  tc.batch_size = config.batch;
  tc.rounds = config.rounds;
  tc.fill = config.fill;
  tc.scheme = config.scheme;
  run.traces = fl::run_training(run.problem, tc, config.seed, &run.final_state);
  return run;
}

std::pair<std::vector<double>, double> quadratic_optimum(const fl::FlProblem& problem) {
  const auto* quad = dynamic_cast<const fl::QuadraticObjective*>(problem.objective);
  if (quad == nullptr) throw ConfigError("closed-form optimum needs a quadratic objective");
  const auto weights = fl::dataset_weights(problem.device_data);
  std::vector<double> theta(quad->dim(), 0.0);
  for (std::size_t k = 0; k < problem.device_data.size(); ++k) {
    const auto& d = problem.device_data[k];
    for (std::size_t i = 0; i < d.n; ++i) {
      const auto x = d.row(i);
      const double w = weights[k] / static_cast<double>(d.n);
      for (std::size_t j = 0; j < theta.size(); ++j) theta[j] += w * x[j];
    }
  }
  const double f_star = fl::global_loss(theta, *problem.objective, problem.device_data);
  return {std::move(theta), f_star};
}

double centralized_f_star(const fl::FlProblem& problem, std::size_t steps, double eta,
                          std::uint64_t seed) {
  if (problem.objective == nullptr) throw ConfigError("missing objective");
  SeededRng init = SeededRng(seed).derive(fl::kStreamInit);
  auto theta = problem.objective->initial_model(init);
  double best = fl::global_loss(theta, *problem.objective, problem.device_data);
  for (std::size_t s = 0; s < steps; ++s) {
    const auto grad = fl::global_gradient(theta, *problem.objective, problem.device_data);
    for (std::size_t j = 0; j < theta.size(); ++j) theta[j] -= eta * grad[j];
    best = std::min(best, fl::global_loss(theta, *problem.objective, problem.device_data));
  }
  return best;
}

}  // namespace coherentfl::experiment
