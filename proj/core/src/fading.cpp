#include "coherentfl/fading.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <numeric>
#include <stdexcept>

#include "coherentfl/errors.hpp"
#include "coherentfl/phymath.hpp"

namespace coherentfl::fading {
namespace {

void validate_profile(const DeviceProfile& p) {
  if (p.coherence_time < 1)
    throw ConfigError("device " + std::to_string(p.id) + ": coherence time must be >= 1");
  if (p.device_class == DeviceClass::Dynamic && p.coherence_time >= kStaticCoherence)
    throw ConfigError("device " + std::to_string(p.id) +
                      ": dynamic coherence time must be below the static sentinel");
  if (p.dataset_size < 0)
    throw ConfigError("device " + std::to_string(p.id) + ": dataset size must be >= 0");
}

// Uniform without-replacement pick of k items (partial Fisher-Yates).
std::vector<DeviceProfile> pick(std::vector<DeviceProfile> candidates, std::size_t k,
                                SeededRng& rng) {
  for (std::size_t i = 0; i < k; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(rng.below(candidates.size() - i));
    std::swap(candidates[i], candidates[j]);
  }
  candidates.resize(k);
  return candidates;
}

}  // namespace

std::vector<ChannelBlock> channel_process(const DeviceProfile& profile, std::size_t m,
                                          std::int64_t frame_len, SeededRng& rng) {
  validate_profile(profile);
  if (m == 0) throw std::invalid_argument("channel_process: antenna count must be positive");
  if (frame_len < 1) throw std::invalid_argument("channel_process: frame length must be >= 1");
  std::vector<ChannelBlock> blocks;
  const std::int64_t t = profile.coherence_time;
  for (std::int64_t start = 0; start < frame_len; start += t) {
    ChannelBlock b;
    b.start = start;
    b.end = std::min(start + t, frame_len);
    b.channel = phymath::draw_rayleigh_channel(m, rng);
    blocks.push_back(std::move(b));
  }
  return blocks;
}

Cohort schedule_devices(const std::vector<DeviceProfile>& pool, int k_total, int k_static,
                        SeededRng& rng) {
  if (k_total < 1) throw SchedulingError("cohort size must be >= 1");
  if (k_static < 0 || k_static > k_total)
    throw SchedulingError("static count must lie in [0, cohort size]");
  std::vector<DeviceProfile> statics, dynamics;
  for (const auto& p : pool) {
    validate_profile(p);
    (p.device_class == DeviceClass::Static ? statics : dynamics).push_back(p);
  }
  const int k_dynamic = k_total - k_static;
  if (static_cast<int>(statics.size()) < k_static)
    throw SchedulingError("pool has " + std::to_string(statics.size()) +
                          " static devices, need " + std::to_string(k_static));
  if (static_cast<int>(dynamics.size()) < k_dynamic)
    throw SchedulingError("pool has " + std::to_string(dynamics.size()) +
                          " dynamic devices, need " + std::to_string(k_dynamic));

  Cohort cohort;
  cohort.statics = pick(std::move(statics), static_cast<std::size_t>(k_static), rng);
  cohort.dynamics = pick(std::move(dynamics), static_cast<std::size_t>(k_dynamic), rng);
  std::sort(cohort.statics.begin(), cohort.statics.end(),
            [](const DeviceProfile& a, const DeviceProfile& b) { return a.id < b.id; });
  std::sort(cohort.dynamics.begin(), cohort.dynamics.end(),
            [](const DeviceProfile& a, const DeviceProfile& b) {
              if (a.coherence_time != b.coherence_time)
                return a.coherence_time > b.coherence_time;
              return a.id < b.id;
            });
  std::map<std::int64_t, int> seen;
  for (const auto& d : cohort.dynamics) ++seen[d.coherence_time];
  for (const auto& [t, n] : seen) {
    if (n > 1)
      cohort.warnings.push_back("dynamic coherence time " + std::to_string(t) +
                                " appears " + std::to_string(n) +
                                " times; pilot reuse assumes pairwise-distinct values");
  }
  return cohort;
}

CoherenceSchedule make_schedule(const DeviceProfile& profile, std::int64_t frame_len) {
  validate_profile(profile);
  if (frame_len < 1) throw std::invalid_argument("make_schedule: frame length must be >= 1");
  CoherenceSchedule s;
  s.device = profile;
  s.frame_len = frame_len;
  for (std::int64_t start = 0; start < frame_len; start += profile.coherence_time)
    s.block_starts.push_back(start);
  return s;
}

double duty_cycle(std::size_t m, std::int64_t t_k) {
  if (m == 0) throw ConfigError("pilot length must be positive");
  if (static_cast<std::int64_t>(m) >= t_k)
    throw ConfigError("pilot length " + std::to_string(m) +
                      " leaves no data phase in a coherence block of " +
                      std::to_string(t_k) + " slots");
  return static_cast<double>(m) / static_cast<double>(t_k);
}

double pilot_duty_cycle(const std::vector<CoherenceSchedule>& cohort, std::size_t m) {
  if (cohort.empty()) throw ConfigError("pilot_duty_cycle: empty cohort");
  const std::int64_t frame_len = cohort.front().frame_len;
  std::int64_t t_min = std::numeric_limits<std::int64_t>::max();
  for (const auto& s : cohort) {
    if (s.frame_len != frame_len)
      throw ConfigError("pilot_duty_cycle: schedules disagree on frame length");
    if (s.device.device_class == DeviceClass::Dynamic)
      t_min = std::min(t_min, s.device.coherence_time);
  }
  if (t_min == std::numeric_limits<std::int64_t>::max()) return 0.0;  // all static
  duty_cycle(m, t_min);  // validates m < T_K
  // pilots sit at the head of each full sub-block; a partial tail is data-only
  const std::int64_t full_blocks = frame_len / t_min;
  return static_cast<double>(full_blocks * static_cast<std::int64_t>(m)) /
         static_cast<double>(frame_len);
}

}  // namespace coherentfl::fading
