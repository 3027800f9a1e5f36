#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "coherentfl/complex_linalg.hpp"
#include "coherentfl/rng.hpp"

namespace coherentfl::fading {

enum class DeviceClass { Static, Dynamic };

// Coherence-time sentinel for static devices: the channel never changes
// within any frame we simulate.
inline constexpr std::int64_t kStaticCoherence = 2147483647;  // 2^31 - 1

struct DeviceProfile {
  int id = 0;
  DeviceClass device_class = DeviceClass::Static;
  std::int64_t coherence_time = kStaticCoherence;  // T_k, in slots
  std::int64_t dataset_size = 0;                   // B_k, local sample count
};

// One constant-channel span [start, end) within a frame.
struct ChannelBlock {
  std::int64_t start = 0;
  std::int64_t end = 0;
  ComplexVector channel;  // length m, i.i.d. CN(0, 1), fresh per block
};

// Block boundaries of one device over a frame of frame_len slots.
struct CoherenceSchedule {
  DeviceProfile device;
  std::int64_t frame_len = 0;
  std::vector<std::int64_t> block_starts;  // 0, T_k, 2 T_k, ... < frame_len
};

// Devices participating in one round. Dynamics are ordered by descending
// coherence time, so the last dynamic entry has the smallest T_k and sets the
// pilot refresh period.
struct Cohort {
  std::vector<DeviceProfile> statics;
  std::vector<DeviceProfile> dynamics;
  std::vector<std::string> warnings;
};

// Piecewise-constant block-fading realization over one frame. The channel is
// redrawn independently at every multiple of the device's coherence time; a
// static device yields a single block covering the whole frame.
std::vector<ChannelBlock> channel_process(const DeviceProfile& profile, std::size_t m,
                                          std::int64_t frame_len, SeededRng& rng);

// Uniformly selects k_static static and (k_total - k_static) dynamic devices
// from the pool without replacement. Throws SchedulingError naming the
// deficient class when the pool cannot satisfy the request; duplicate dynamic
// coherence times are reported as warnings, not errors.
Cohort schedule_devices(const std::vector<DeviceProfile>& pool, int k_total, int k_static,
                        SeededRng& rng);

CoherenceSchedule make_schedule(const DeviceProfile& profile, std::int64_t frame_len);

// Fraction of frame slots that carry pilots: the first m slots of every
// full-length sub-block of T_K slots, where T_K is the smallest dynamic
// coherence time in the cohort. Zero when no dynamic device is present.
// Requires m < T_K: a pilot must leave room for a data phase.
double pilot_duty_cycle(const std::vector<CoherenceSchedule>& cohort, std::size_t m);

// m / t_k with the same validation; the common case where the frame length is
// a whole number of sub-blocks.
double duty_cycle(std::size_t m, std::int64_t t_k);

}  // namespace coherentfl::fading
