#include "coherentfl/objectives.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "coherentfl/errors.hpp"

namespace coherentfl::fl {

namespace {

void require(bool ok, const char* what) {
  if (!ok) throw std::invalid_argument(what);
}

// Stable softmax in place; returns log(sum exp z) for the loss.
double softmax_inplace(std::vector<double>& z) {
  const double top = *std::max_element(z.begin(), z.end());
  double sum = 0.0;
  for (auto& v : z) {
    v = std::exp(v - top);
    sum += v;
  }
  for (auto& v : z) v /= sum;
  return top + std::log(sum);
}

std::size_t argmax(const std::vector<double>& z) {
  return static_cast<std::size_t>(std::max_element(z.begin(), z.end()) - z.begin());
}

}  // namespace

std::vector<std::size_t> all_rows(const data::Dataset& d) {
  std::vector<std::size_t> rows(d.n);
  std::iota(rows.begin(), rows.end(), std::size_t{0});
  return rows;
}

// --- quadratic ---------------------------------------------------------------

QuadraticObjective::QuadraticObjective(std::size_t dim, double eig_min, double eig_max) {
  if (dim == 0) throw ConfigError("quadratic dimension must be positive");
  if (!(0.0 < eig_min && eig_min <= eig_max))
    throw ConfigError("need 0 < eig_min <= eig_max for strong convexity");
  curvature_.resize(dim);
  for (std::size_t j = 0; j < dim; ++j) {
    curvature_[j] = dim == 1 ? eig_max
                             : eig_min + (eig_max - eig_min) * static_cast<double>(j) /
                                             static_cast<double>(dim - 1);
  }
}

double QuadraticObjective::loss(std::span<const double> theta, const data::Dataset& d,
                                std::span<const std::size_t> rows) const {
  require(theta.size() == dim(), "model size mismatch");
  require(d.p == dim(), "dataset feature size mismatch");
  require(!rows.empty(), "empty row set");
  double acc = 0.0;
  for (const auto r : rows) {
    const auto x = d.row(r);
    for (std::size_t j = 0; j < dim(); ++j) {
      const double diff = theta[j] - x[j];
      acc += 0.5 * curvature_[j] * diff * diff;
    }
  }
  return acc / static_cast<double>(rows.size());
}

void QuadraticObjective::gradient(std::span<const double> theta, const data::Dataset& d,
                                  std::span<const std::size_t> rows,
                                  std::span<double> grad) const {
  require(theta.size() == dim() && grad.size() == dim(), "model size mismatch");
  require(d.p == dim(), "dataset feature size mismatch");
  require(!rows.empty(), "empty row set");
  std::fill(grad.begin(), grad.end(), 0.0);
  for (const auto r : rows) {
    const auto x = d.row(r);
    for (std::size_t j = 0; j < dim(); ++j) grad[j] += theta[j] - x[j];
  }
  const double inv = 1.0 / static_cast<double>(rows.size());
  for (std::size_t j = 0; j < dim(); ++j) grad[j] *= curvature_[j] * inv;
}

std::optional<double> QuadraticObjective::exact_smoothness() const {
  return curvature_.back();
}

// --- multinomial logistic -----------------------------------------------------

LogisticObjective::LogisticObjective(std::size_t features, std::size_t classes)
    : features_(features), classes_(classes) {
  if (features == 0) throw ConfigError("feature dimension must be positive");
  if (classes < 2) throw ConfigError("need at least two classes");
}

namespace {

void logistic_logits(std::span<const double> theta, std::span<const double> x,
                     std::size_t p, std::size_t classes, std::vector<double>& z) {
  z.resize(classes);
  for (std::size_t c = 0; c < classes; ++c) {
    const double* w = theta.data() + c * (p + 1);
    double dot = w[p];  // bias
    for (std::size_t j = 0; j < p; ++j) dot += w[j] * x[j];
    z[c] = dot;
  }
}

}  // namespace

double LogisticObjective::loss(std::span<const double> theta, const data::Dataset& d,
                               std::span<const std::size_t> rows) const {
  require(theta.size() == dim(), "model size mismatch");
  require(d.p == features_, "dataset feature size mismatch");
  require(!rows.empty(), "empty row set");
  std::vector<double> z;
  double acc = 0.0;
  for (const auto r : rows) {
    logistic_logits(theta, d.row(r), features_, classes_, z);
    const double target = z[static_cast<std::size_t>(d.labels[r])];
    const double lse = softmax_inplace(z);
    acc += lse - target;
  }
  return acc / static_cast<double>(rows.size());
}

void LogisticObjective::gradient(std::span<const double> theta, const data::Dataset& d,
                                 std::span<const std::size_t> rows,
                                 std::span<double> grad) const {
  require(theta.size() == dim() && grad.size() == dim(), "model size mismatch");
  require(d.p == features_, "dataset feature size mismatch");
  require(!rows.empty(), "empty row set");
  std::fill(grad.begin(), grad.end(), 0.0);
  std::vector<double> z;
  const double inv = 1.0 / static_cast<double>(rows.size());
  for (const auto r : rows) {
    const auto x = d.row(r);
    logistic_logits(theta, x, features_, classes_, z);
    softmax_inplace(z);
    const auto y = static_cast<std::size_t>(d.labels[r]);
    for (std::size_t c = 0; c < classes_; ++c) {
      const double coef = (z[c] - (c == y ? 1.0 : 0.0)) * inv;
      double* g = grad.data() + c * (features_ + 1);
      for (std::size_t j = 0; j < features_; ++j) g[j] += coef * x[j];
      g[features_] += coef;
    }
  }
}

double LogisticObjective::accuracy(std::span<const double> theta,
                                   const data::Dataset& d) const {
  require(theta.size() == dim(), "model size mismatch");
  require(d.n > 0, "empty dataset");
  std::vector<double> z;
  std::size_t hits = 0;
  for (std::size_t r = 0; r < d.n; ++r) {
    logistic_logits(theta, d.row(r), features_, classes_, z);
    hits += argmax(z) == static_cast<std::size_t>(d.labels[r]);
  }
  return static_cast<double>(hits) / static_cast<double>(d.n);
}

// --- one-hidden-layer perceptron ----------------------------------------------

MlpObjective::MlpObjective(std::size_t features, std::size_t hidden, std::size_t classes)
    : features_(features), hidden_(hidden), classes_(classes) {
  if (features == 0 || hidden == 0) throw ConfigError("layer sizes must be positive");
  if (classes < 2) throw ConfigError("need at least two classes");
}

std::size_t MlpObjective::dim() const {
  return hidden_ * (features_ + 1) + classes_ * (hidden_ + 1);
}

namespace {

struct MlpViews {
  const double* w1;  // hidden x p
  const double* b1;  // hidden
  const double* w2;  // classes x hidden
  const double* b2;  // classes
};

MlpViews mlp_views(std::span<const double> theta, std::size_t p, std::size_t h,
                   std::size_t classes) {
  MlpViews v{};
  v.w1 = theta.data();
  v.b1 = v.w1 + h * p;
  v.w2 = v.b1 + h;
  v.b2 = v.w2 + classes * h;
  return v;
}

void mlp_forward(const MlpViews& v, std::span<const double> x, std::size_t p,
                 std::size_t h, std::size_t classes, std::vector<double>& act,
                 std::vector<double>& z) {
  act.resize(h);
  for (std::size_t i = 0; i < h; ++i) {
    const double* row = v.w1 + i * p;
    double pre = v.b1[i];
    for (std::size_t j = 0; j < p; ++j) pre += row[j] * x[j];
    act[i] = std::tanh(pre);
  }
  z.resize(classes);
  for (std::size_t c = 0; c < classes; ++c) {
    const double* row = v.w2 + c * h;
    double pre = v.b2[c];
    for (std::size_t i = 0; i < h; ++i) pre += row[i] * act[i];
    z[c] = pre;
  }
}

}  // namespace

double MlpObjective::loss(std::span<const double> theta, const data::Dataset& d,
                          std::span<const std::size_t> rows) const {
  require(theta.size() == dim(), "model size mismatch");
  require(d.p == features_, "dataset feature size mismatch");
  require(!rows.empty(), "empty row set");
  const auto v = mlp_views(theta, features_, hidden_, classes_);
  std::vector<double> act, z;
  double acc = 0.0;
  for (const auto r : rows) {
    mlp_forward(v, d.row(r), features_, hidden_, classes_, act, z);
    const double target = z[static_cast<std::size_t>(d.labels[r])];
    acc += softmax_inplace(z) - target;
  }
  return acc / static_cast<double>(rows.size());
}

void MlpObjective::gradient(std::span<const double> theta, const data::Dataset& d,
                            std::span<const std::size_t> rows,
                            std::span<double> grad) const {
  require(theta.size() == dim() && grad.size() == dim(), "model size mismatch");
  require(d.p == features_, "dataset feature size mismatch");
  require(!rows.empty(), "empty row set");
  const auto v = mlp_views(theta, features_, hidden_, classes_);
  std::fill(grad.begin(), grad.end(), 0.0);
  double* gw1 = grad.data();
  double* gb1 = gw1 + hidden_ * features_;
  double* gw2 = gb1 + hidden_;
  double* gb2 = gw2 + classes_ * hidden_;
  std::vector<double> act, z, dact(hidden_);
  const double inv = 1.0 / static_cast<double>(rows.size());
  for (const auto r : rows) {
    const auto x = d.row(r);
    mlp_forward(v, x, features_, hidden_, classes_, act, z);
    softmax_inplace(z);
    const auto y = static_cast<std::size_t>(d.labels[r]);
    std::fill(dact.begin(), dact.end(), 0.0);
    for (std::size_t c = 0; c < classes_; ++c) {
      const double dz = (z[c] - (c == y ? 1.0 : 0.0)) * inv;
      double* row = gw2 + c * hidden_;
      const double* w2row = v.w2 + c * hidden_;
      for (std::size_t i = 0; i < hidden_; ++i) {
        row[i] += dz * act[i];
        dact[i] += dz * w2row[i];
      }
      gb2[c] += dz;
    }
    for (std::size_t i = 0; i < hidden_; ++i) {
      const double dpre = dact[i] * (1.0 - act[i] * act[i]);
      double* row = gw1 + i * features_;
      for (std::size_t j = 0; j < features_; ++j) row[j] += dpre * x[j];
      gb1[i] += dpre;
    }
  }
}

double MlpObjective::accuracy(std::span<const double> theta,
                              const data::Dataset& d) const {
  require(theta.size() == dim(), "model size mismatch");
  require(d.n > 0, "empty dataset");
  const auto v = mlp_views(theta, features_, hidden_, classes_);
  std::vector<double> act, z;
  std::size_t hits = 0;
  for (std::size_t r = 0; r < d.n; ++r) {
    mlp_forward(v, d.row(r), features_, hidden_, classes_, act, z);
    hits += argmax(z) == static_cast<std::size_t>(d.labels[r]);
  }
  return static_cast<double>(hits) / static_cast<double>(d.n);
}

std::vector<double> MlpObjective::initial_model(SeededRng& rng) const {
  std::vector<double> theta(dim(), 0.0);
  const double in_scale = 1.0 / std::sqrt(static_cast<double>(features_));
  const double out_scale = 1.0 / std::sqrt(static_cast<double>(hidden_));
  std::size_t at = 0;
  for (std::size_t i = 0; i < hidden_ * features_; ++i) theta[at++] = in_scale * rng.gaussian();
  at += hidden_;  // hidden biases stay zero
  for (std::size_t i = 0; i < classes_ * hidden_; ++i) theta[at++] = out_scale * rng.gaussian();
  return theta;
}

}  // namespace coherentfl::fl
