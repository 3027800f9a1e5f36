#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "coherentfl/power.hpp"
#include "coherentfl/rng.hpp"

namespace coherentfl::impairment {

// 1 = entry delivered this round, 0 = entry missing at the receiver.
using MaskBits = std::vector<std::uint8_t>;

// Per-entry additive-noise model of the downlink after decode.
struct DownlinkNoiseSpec {
  double sigma2_static = 0.0;   // known-channel receivers
  double sigma2_dynamic = 0.0;  // estimating receivers
  double gamma_eff = 0.0;       // post-decode data SINR behind sigma2_dynamic
  double estimate_error = 0.0;  // total virtual-channel MSE behind sigma2_dynamic
};

// What one device actually holds after a broadcast: noisy values where the
// mask is set, zero placeholders elsewhere. Missing entries are tracked by
// the mask, never by sentinel values.
struct ReceivedModel {
  std::vector<double> values;
  MaskBits mask;
};

MaskBits full_mask(std::size_t dim);

// Under pilot reuse an estimating device cannot decode the pilot-phase
// payload, so with frames of t_k slots and an m-slot pilot phase every entry
// mapped to slot i with i % t_k < m is missing.
MaskBits dynamic_reuse_mask(std::size_t dim, std::size_t m, std::int64_t t_k);

// Variant for a device whose own coherence time t_own exceeds the shared
// pilot refresh period t_k: pilot-phase entries are only missing in the first
// refresh period of each of the device's own coherence blocks (its channel is
// already known in later periods, so it decodes both phases there).
MaskBits dynamic_reuse_mask_fresh(std::size_t dim, std::size_t m, std::int64_t t_k,
                                  std::int64_t t_own);

std::size_t mask_support(const MaskBits& mask);

// Noise model for pilot reuse by products: statics see scale*noise/rho_d per
// entry; estimating devices see scale*(1 + mse/m)/gamma_eff. The static
// variance is strictly smaller whenever both are defined.
DownlinkNoiseSpec noise_spec(const power::PowerAllocation& alloc, double scale = 1.0);

// Noise model for pilot reuse by addition: the pilot rides on top of the
// parameter payload, so estimation is interference-limited and the data
// phase carries the pilot as extra noise. Statics cancel the known pilot
// exactly and keep the scale*noise/rho_d variance.
DownlinkNoiseSpec additive_noise_spec(const power::PowerAllocation& alloc,
                                      double scale = 1.0);

// Applies the abstract downlink to a parameter vector: received entries get
// i.i.d. Gaussian noise of the given variance, missing entries become zero
// placeholders. Draws one variate per received entry (none when the variance
// is zero), keeping streams reproducible.
ReceivedModel corrupt_broadcast(const std::vector<double>& params, const MaskBits& mask,
                                double noise_var, SeededRng& rng);

}  // namespace coherentfl::impairment
