// Microbenchmarks for the hot paths: channel estimation, frame decoding,
// power allocation, a full federated round, and IDX parsing.

#include <cstdint>
#include <vector>

#include <benchmark/benchmark.h>

#include "coherentfl/dataset.hpp"
#include "coherentfl/fedcore.hpp"
#include "coherentfl/idx.hpp"
#include "coherentfl/impairment.hpp"
#include "coherentfl/objectives.hpp"
#include "coherentfl/phymath.hpp"
#include "coherentfl/power.hpp"
#include "coherentfl/rng.hpp"
#include "coherentfl/signaling.hpp"

using namespace coherentfl;

namespace {

void BM_MmseVirtualChannel(benchmark::State& state) {
  const std::size_t m = static_cast<std::size_t>(state.range(0));
  SeededRng rng(1, 0xBE7C);
  const auto y = phymath::draw_rayleigh_channel(m, rng);
  for (auto _ : state) {
    auto est = signaling::mmse_virtual_channel(y, 1.0, 1.0, m);
    benchmark::DoNotOptimize(est);
  }
}
BENCHMARK(BM_MmseVirtualChannel)->Arg(2)->Arg(8)->Arg(32);

void BM_SuperpositionFrameDecode(benchmark::State& state) {
  const std::size_t m = static_cast<std::size_t>(state.range(0));
  const std::size_t data_cols = 3 * m;
  SeededRng rng(2, 0xBE7C);
  const auto mixing = signaling::mixing_matrix(m);
  const auto pilot_syms = signaling::random_phase_symbols(m, rng);
  const auto data_syms = signaling::random_phase_symbols(data_cols, rng);
  const auto frame = signaling::build_superposition_block(
      signaling::embed_pilot_phase(pilot_syms, mixing),
      signaling::embed_data_phase(data_syms, mixing), signaling::scaled_pilot(m), 1.0,
      1.0);
  const auto h = phymath::draw_rayleigh_channel(m, rng);
  for (auto _ : state) {
    SeededRng inst = rng.derive(state.iterations());
    const auto y = signaling::receive(frame.transmit, h, 1.0, inst);
    ComplexVector y_pilot(m);
    for (std::size_t j = 0; j < m; ++j) y_pilot[j] = y[j];
    const auto despread = signaling::static_decode_pilot_phase(y_pilot, mixing);
    const auto est = signaling::mmse_virtual_channel(despread, 1.0, 1.0, m);
    ComplexVector y_data(data_cols);
    for (std::size_t j = 0; j < data_cols; ++j) y_data[j] = y[m + j];
    auto decoded = signaling::coherent_data_decode(y_data, est, 1.0, 1.0);
    benchmark::DoNotOptimize(decoded);
  }
}
BENCHMARK(BM_SuperpositionFrameDecode)->Arg(2)->Arg(8);

void BM_OptimalAllocation(benchmark::State& state) {
  for (auto _ : state) {
    auto alloc = power::optimal_allocation(1.0, 24, 4, 1.0);
    benchmark::DoNotOptimize(alloc);
  }
}
BENCHMARK(BM_OptimalAllocation);

void BM_FederatedRound(benchmark::State& state) {
  const std::size_t devices = static_cast<std::size_t>(state.range(0));
  fl::LogisticObjective objective(10, 5);
  const auto full = data::synthetic_classification(512, 10, 5, 3.0, 3);
  fl::FlProblem problem;
  problem.objective = &objective;
  problem.device_data = data::partition(full, devices, data::PartitionMode::Iid, 2, 3);
  for (std::size_t k = 0; k < devices; ++k) {
    problem.masks.push_back(impairment::dynamic_reuse_mask(objective.dim(), 2, 8));
    problem.noise_vars.push_back(0.01);
  }
  fl::TrainConfig config;
  config.tau = 5;
  config.eta_local = 0.05;
  config.batch_size = 32;
  auto fl_state = fl::init_state(problem, 3);
  for (auto _ : state) {
    auto trace = fl::run_round(fl_state, problem, config, 3);
    benchmark::DoNotOptimize(trace);
  }
}
BENCHMARK(BM_FederatedRound)->Arg(4)->Arg(16);

void BM_IdxParse(benchmark::State& state) {
  idx::IdxTensor tensor;
  tensor.shape = {64, 28, 28};
  tensor.data.resize(64 * 28 * 28);
  SeededRng rng(4, 0xBE7C);
  for (auto& b : tensor.data) b = static_cast<std::uint8_t>(rng.below(256));
  const auto bytes = idx::serialize(tensor);
  for (auto _ : state) {
    auto parsed = idx::parse(bytes);
    benchmark::DoNotOptimize(parsed);
  }
  state.SetBytesProcessed(static_cast<std::int64_t>(state.iterations() * bytes.size()));
}
BENCHMARK(BM_IdxParse);

}  // namespace

BENCHMARK_MAIN();
