#include "coherentfl/impairment.hpp"

#include <cmath>
#include <stdexcept>

#include "coherentfl/errors.hpp"

namespace coherentfl::impairment {

MaskBits full_mask(std::size_t dim) { return MaskBits(dim, 1); }

MaskBits dynamic_reuse_mask(std::size_t dim, std::size_t m, std::int64_t t_k) {
  if (m == 0) throw ConfigError("pilot phase must span at least one slot");
  if (t_k <= static_cast<std::int64_t>(m))
    throw ConfigError("coherence time must exceed the pilot phase");
  MaskBits mask(dim, 1);
  const auto period = static_cast<std::size_t>(t_k);
  for (std::size_t i = 0; i < dim; ++i)
    if (i % period < m) mask[i] = 0;
  return mask;
}

MaskBits dynamic_reuse_mask_fresh(std::size_t dim, std::size_t m, std::int64_t t_k,
                                  std::int64_t t_own) {
  if (t_own < t_k) throw ConfigError("own coherence time below the refresh period");
  MaskBits mask = dynamic_reuse_mask(dim, m, t_k);
  const auto period = static_cast<std::size_t>(t_k);
  const auto own = static_cast<std::size_t>(t_own);
  for (std::size_t i = 0; i < dim; ++i) {
    if (mask[i]) continue;
    const std::size_t q = i / period;           // refresh period index
    if (q == 0) continue;                       // first period always estimates
    const std::size_t prev_start = (q - 1) * period;
    if (q * period / own == prev_start / own) mask[i] = 1;  // channel still known
  }
  return mask;
}

std::size_t mask_support(const MaskBits& mask) {
  std::size_t n = 0;
  for (const auto b : mask) n += (b != 0);
  return n;
}

namespace {

void check_alloc(const power::PowerAllocation& alloc, double scale) {
  if (alloc.m == 0) throw std::domain_error("antenna count must be positive");
  if (alloc.noise_var <= 0.0) throw std::domain_error("noise variance must be positive");
  if (alloc.rho_p < 0.0) throw std::domain_error("negative pilot power");
  if (alloc.rho_d <= 0.0) throw std::domain_error("data power must be positive");
  if (scale <= 0.0) throw std::domain_error("noise scale must be positive");
}

}  // namespace

DownlinkNoiseSpec noise_spec(const power::PowerAllocation& alloc, double scale) {
  check_alloc(alloc, scale);
  const double md = static_cast<double>(alloc.m);
  DownlinkNoiseSpec spec;
  spec.sigma2_static = scale * alloc.noise_var / alloc.rho_d;
  spec.gamma_eff = power::effective_snr(alloc.rho_p, alloc.rho_d, alloc.m, alloc.noise_var);
  spec.estimate_error = md * alloc.noise_var / (md * alloc.rho_p + alloc.noise_var);
  spec.sigma2_dynamic = scale * (1.0 + spec.estimate_error / md) / spec.gamma_eff;
  return spec;
}

DownlinkNoiseSpec additive_noise_spec(const power::PowerAllocation& alloc, double scale) {
  check_alloc(alloc, scale);
  const double md = static_cast<double>(alloc.m);
  const double pilot_energy = md * alloc.rho_p;
  const double clutter = md * alloc.rho_d + alloc.noise_var;  // payload under the pilot
  const double alpha2 = pilot_energy / (pilot_energy + clutter);
  DownlinkNoiseSpec spec;
  spec.sigma2_static = scale * alloc.noise_var / alloc.rho_d;
  spec.estimate_error = md * (1.0 - alpha2);
  spec.gamma_eff = alloc.rho_d /
                   (alloc.noise_var + md * (alloc.rho_d + alloc.rho_p) * (1.0 - alpha2));
  spec.sigma2_dynamic = scale * (1.0 + spec.estimate_error / md) / spec.gamma_eff;
  return spec;
}

ReceivedModel corrupt_broadcast(const std::vector<double>& params, const MaskBits& mask,
                                double noise_var, SeededRng& rng) {
  if (params.size() != mask.size())
    throw std::invalid_argument("parameter and mask lengths differ");
  if (noise_var < 0.0) throw std::domain_error("negative noise variance");
  ReceivedModel out;
  out.mask = mask;
  out.values.assign(params.size(), 0.0);
  const double amp = std::sqrt(noise_var);
  for (std::size_t i = 0; i < params.size(); ++i) {
    if (!mask[i]) continue;
    out.values[i] = params[i];
    if (noise_var > 0.0) out.values[i] += amp * rng.gaussian();
  }
  return out;
}

}  // namespace coherentfl::impairment
