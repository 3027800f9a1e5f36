#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "coherentfl/idx.hpp"
#include "coherentfl/rng.hpp"

namespace coherentfl::data {

struct Dataset {
  std::vector<double> features;     // row-major n x p
  std::vector<std::int32_t> labels; // in [0, classes)
  std::size_t n = 0;
  std::size_t p = 0;
  std::size_t classes = 0;

  std::span<const double> row(std::size_t i) const {
    return {features.data() + i * p, p};
  }
};

enum class PartitionMode { Iid, LabelShard };

// Gaussian clusters: class c is centred at separation * e_{c mod p} with unit
// per-coordinate noise, labels cycling 0..classes-1, so head/tail splits stay
// class-balanced. separation = 0 collapses every class onto one cloud.
Dataset synthetic_classification(std::size_t n, std::size_t p, std::size_t classes,
                                 double separation, std::uint64_t seed);

// First head rows / remaining rows. Rows are i.i.d., so this is a fair split.
std::pair<Dataset, Dataset> split_head(const Dataset& dataset, std::size_t head);

// Iid: shuffled rows dealt evenly (first n%k devices get one extra).
// LabelShard: rows stably sorted by label, cut into k*shards_per_device
// shards, shard order shuffled, consecutive shards dealt to each device —
// small shard counts give each device only a few labels.
std::vector<Dataset> partition(const Dataset& dataset, std::size_t k, PartitionMode mode,
                               std::size_t shards_per_device, std::uint64_t seed);

// Pairs an image tensor (n x rows x cols, flattened per sample) with a label
// vector. normalize maps bytes to [0,1] via /255.
Dataset from_idx(const idx::IdxTensor& images, const idx::IdxTensor& labels,
                 bool normalize);

}  // namespace coherentfl::data
