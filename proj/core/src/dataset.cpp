#include "coherentfl/dataset.hpp"

#include <algorithm>
#include <numeric>

#include "coherentfl/errors.hpp"

namespace coherentfl::data {

namespace {

constexpr std::uint64_t kStreamSynthetic = 0xDA7A;
constexpr std::uint64_t kStreamPartition = 0x5EA7;

void shuffle_indices(std::vector<std::size_t>& idx, SeededRng& rng) {
  for (std::size_t i = idx.size(); i > 1; --i)
    std::swap(idx[i - 1], idx[rng.below(i)]);
}

Dataset subset(const Dataset& d, std::span<const std::size_t> rows) {
  Dataset out;
  out.p = d.p;
  out.classes = d.classes;
  out.n = rows.size();
  out.features.reserve(rows.size() * d.p);
  out.labels.reserve(rows.size());
  for (const auto r : rows) {
    const auto row = d.row(r);
    out.features.insert(out.features.end(), row.begin(), row.end());
    out.labels.push_back(d.labels[r]);
  }
  return out;
}

}  // namespace

Dataset synthetic_classification(std::size_t n, std::size_t p, std::size_t classes,
                                 double separation, std::uint64_t seed) {
  if (classes < 2) throw ConfigError("need at least two classes");
  if (n < classes) throw ConfigError("need at least one sample per class");
  if (p == 0) throw ConfigError("feature dimension must be positive");
  SeededRng rng(seed, kStreamSynthetic);
  Dataset d;
  d.n = n;
  d.p = p;
  d.classes = classes;
  d.features.resize(n * p);
  d.labels.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto label = static_cast<std::int32_t>(i % classes);
    d.labels[i] = label;
    const std::size_t axis = static_cast<std::size_t>(label) % p;
    for (std::size_t j = 0; j < p; ++j)
      d.features[i * p + j] = rng.gaussian() + (j == axis ? separation : 0.0);
  }
  return d;
}

std::pair<Dataset, Dataset> split_head(const Dataset& dataset, std::size_t head) {
  if (head > dataset.n) throw ConfigError("split point beyond dataset size");
  std::vector<std::size_t> front(head), back(dataset.n - head);
  std::iota(front.begin(), front.end(), std::size_t{0});
  std::iota(back.begin(), back.end(), head);
  return {subset(dataset, front), subset(dataset, back)};
}

std::vector<Dataset> partition(const Dataset& dataset, std::size_t k, PartitionMode mode,
                               std::size_t shards_per_device, std::uint64_t seed) {
  if (k == 0) throw ConfigError("device count must be positive");
  if (dataset.n < k) throw ConfigError("fewer samples than devices");
  SeededRng rng(seed, kStreamPartition);

  std::vector<std::size_t> order(dataset.n);
  std::iota(order.begin(), order.end(), std::size_t{0});

  std::vector<Dataset> parts;
  parts.reserve(k);

  if (mode == PartitionMode::Iid) {
    shuffle_indices(order, rng);
    std::size_t cursor = 0;
    for (std::size_t d = 0; d < k; ++d) {
      const std::size_t take = dataset.n / k + (d < dataset.n % k ? 1 : 0);
      parts.push_back(subset(dataset, {order.data() + cursor, take}));
      cursor += take;
    }
    return parts;
  }

  if (shards_per_device == 0) throw ConfigError("need at least one shard per device");
  const std::size_t shards = k * shards_per_device;
  if (shards > dataset.n) throw ConfigError("more shards than samples");

  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return dataset.labels[a] < dataset.labels[b];
  });

  std::vector<std::vector<std::size_t>> shard_rows(shards);
  std::size_t cursor = 0;
  for (std::size_t s = 0; s < shards; ++s) {
    const std::size_t take = dataset.n / shards + (s < dataset.n % shards ? 1 : 0);
    shard_rows[s].assign(order.begin() + static_cast<std::ptrdiff_t>(cursor),
                         order.begin() + static_cast<std::ptrdiff_t>(cursor + take));
    cursor += take;
  }

  std::vector<std::size_t> shard_order(shards);
  std::iota(shard_order.begin(), shard_order.end(), std::size_t{0});
  shuffle_indices(shard_order, rng);

  for (std::size_t d = 0; d < k; ++d) {
    std::vector<std::size_t> rows;
    for (std::size_t s = 0; s < shards_per_device; ++s) {
      const auto& shard = shard_rows[shard_order[d * shards_per_device + s]];
      rows.insert(rows.end(), shard.begin(), shard.end());
    }
    parts.push_back(subset(dataset, rows));
  }
  return parts;
}

Dataset from_idx(const idx::IdxTensor& images, const idx::IdxTensor& labels,
                 bool normalize) {
  if (labels.rank() != 1) throw ConfigError("label tensor must be one-dimensional");
  if (images.rank() < 2) throw ConfigError("image tensor needs sample and feature axes");
  if (images.shape[0] != labels.shape[0])
    throw ConfigError("image and label sample counts differ");
  Dataset d;
  d.n = images.shape[0];
  d.p = 1;
  for (std::size_t i = 1; i < images.rank(); ++i) d.p *= images.shape[i];
  if (d.p == 0) throw ConfigError("empty feature dimensions");
  d.features.resize(d.n * d.p);
  const double scale = normalize ? 1.0 / 255.0 : 1.0;
  for (std::size_t i = 0; i < d.features.size(); ++i)
    d.features[i] = scale * static_cast<double>(images.data[i]);
  d.labels.resize(d.n);
  std::int32_t max_label = 0;
  for (std::size_t i = 0; i < d.n; ++i) {
    d.labels[i] = static_cast<std::int32_t>(labels.data[i]);
    max_label = std::max(max_label, d.labels[i]);
  }
  d.classes = static_cast<std::size_t>(max_label) + 1;
  return d;
}

}  // namespace coherentfl::data
