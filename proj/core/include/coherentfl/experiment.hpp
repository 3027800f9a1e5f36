#pragma once

#include <cstdint>
#include <memory>
#include <utility>
#include <vector>

#include "coherentfl/analysis.hpp"
#include "coherentfl/dataset.hpp"
#include "coherentfl/fading.hpp"
#include "coherentfl/fedcore.hpp"
#include "coherentfl/impairment.hpp"
#include "coherentfl/objectives.hpp"
#include "coherentfl/power.hpp"
#include "coherentfl/trace.hpp"

namespace coherentfl::experiment {

enum class ModelKind { Quadratic, Logistic, Mlp };

ModelKind parse_model(const std::string& s);
const char* model_name(ModelKind kind);

// One fully resolved run. SNR is given in dB against a unit-variance receiver
// noise; all stochastic choices hang off the single seed.
struct ExperimentConfig {
  std::uint64_t seed = 1;

  // downlink
  std::size_t antennas = 2;     // M, also the pilot-phase length
  std::int64_t coherence = 8;   // smallest dynamic coherence time T_K
  double snr_db = 10.0;         // rho in dB over unit noise
  double noise_scale = 1.0;     // multiplier on the per-entry noise model
  bool fresh_block_full_decode = false;

  // cohort
  std::size_t devices = 10;
  std::size_t statics = 5;      // the remaining devices are dynamic

  // training
  Scheme scheme = Scheme::ProductSuperposition;
  FillStrategy fill = FillStrategy::PLMF;
  std::size_t tau = 5;
  double eta_local = 0.05;
  std::size_t batch = 0;        // 0 = full batch
  std::int64_t rounds = 50;

  // data and model
  ModelKind model = ModelKind::Logistic;
  std::size_t train_n = 2000;
  std::size_t test_n = 500;
  std::size_t features = 10;
  std::size_t classes = 5;
  double separation = 3.0;
  data::PartitionMode partition = data::PartitionMode::Iid;
  std::size_t shards_per_device = 2;
  std::size_t hidden = 16;      // perceptron width
  double eig_min = 0.5;         // quadratic curvature range
  double eig_max = 4.0;
};

// Resolved physical layer for one run: power split, per-entry noise levels,
// pilot duty cycle, and normalized cost. A cohort without dynamic devices
// needs no pilots, so the whole budget goes to data and lambda is zero.
struct PhyContext {
  power::PowerAllocation alloc;
  impairment::DownlinkNoiseSpec noise;
  double lambda = 0.0;
  double comm_cost = 1.0;
  bool has_dynamics = false;
};

PhyContext resolve_phy(const ExperimentConfig& config);

// Device ids 0..devices-1: statics first, then dynamics with distinct
// coherence times (descending multiples of the shared refresh period, the
// last one equal to it).
std::vector<fading::DeviceProfile> build_profiles(const ExperimentConfig& config);

std::unique_ptr<fl::LocalObjective> make_objective(const ExperimentConfig& config);

// A run's full state: the problem owns its datasets; objective and test set
// live on the heap so the record can be moved safely.
struct RunResult {
  std::unique_ptr<fl::LocalObjective> objective;
  std::unique_ptr<data::Dataset> test;
  fl::FlProblem problem;
  PhyContext phy;
  std::vector<fading::DeviceProfile> profiles;
  std::vector<RoundTrace> traces;
  fl::FlState final_state;
};

// Builds datasets, masks, and noise levels for the configured scheme without
// training (traces/final_state left empty).
RunResult build_run(const ExperimentConfig& config);

// build_run + the full training loop.
RunResult run_training(const ExperimentConfig& config);

// Closed-form optimum of the quadratic problem: the weighted mean of all
// device points, with its global loss.
std::pair<std::vector<double>, double> quadratic_optimum(const fl::FlProblem& problem);

// F* estimate by long full-batch centralized descent from the initial model;
// used where no closed form exists.
double centralized_f_star(const fl::FlProblem& problem, std::size_t steps, double eta,
                          std::uint64_t seed);

}  // namespace coherentfl::experiment
