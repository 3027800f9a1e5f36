#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "coherentfl/dataset.hpp"
#include "coherentfl/rng.hpp"

namespace coherentfl::fl {

// A differentiable empirical loss over dataset rows. Stateless: all methods
// are const and safe to call concurrently.
class LocalObjective {
 public:
  virtual ~LocalObjective() = default;

  virtual std::size_t dim() const = 0;

  // Mean loss over the given rows (rows must be non-empty).
  virtual double loss(std::span<const double> theta, const data::Dataset& d,
                      std::span<const std::size_t> rows) const = 0;

  // Mean gradient over the given rows, written into grad (size dim()).
  virtual void gradient(std::span<const double> theta, const data::Dataset& d,
                        std::span<const std::size_t> rows,
                        std::span<double> grad) const = 0;

  // Fraction of rows whose predicted class matches; 0 for non-classifiers.
  virtual double accuracy(std::span<const double> theta,
                          const data::Dataset& d) const {
    (void)theta;
    (void)d;
    return 0.0;
  }

  virtual bool classifies() const { return false; }

  // Largest Hessian eigenvalue when it is known in closed form.
  virtual std::optional<double> exact_smoothness() const { return std::nullopt; }

  // Starting point for training. Zeros by default; models whose zero point is
  // a saddle override this with a small random draw.
  virtual std::vector<double> initial_model(SeededRng& rng) const {
    (void)rng;
    return std::vector<double>(dim(), 0.0);
  }
};

// F(theta) = mean over rows of 0.5 (theta - x_i)^T A (theta - x_i) with
// A = diag(linspace(eig_min, eig_max, dim)). Strongly convex; the global
// minimizer is the weighted mean of the row points and the smoothness
// constant is exactly eig_max.
class QuadraticObjective final : public LocalObjective {
 public:
  QuadraticObjective(std::size_t dim, double eig_min, double eig_max);

  std::size_t dim() const override { return curvature_.size(); }
  double loss(std::span<const double> theta, const data::Dataset& d,
              std::span<const std::size_t> rows) const override;
  void gradient(std::span<const double> theta, const data::Dataset& d,
                std::span<const std::size_t> rows, std::span<double> grad) const override;
  std::optional<double> exact_smoothness() const override;

  std::span<const double> curvature() const { return curvature_; }

 private:
  std::vector<double> curvature_;  // diagonal of A, ascending
};

// Multinomial logistic regression with per-class bias. Parameter layout:
// classes blocks of (p weights, 1 bias).
class LogisticObjective final : public LocalObjective {
 public:
  LogisticObjective(std::size_t features, std::size_t classes);

  std::size_t dim() const override { return classes_ * (features_ + 1); }
  double loss(std::span<const double> theta, const data::Dataset& d,
              std::span<const std::size_t> rows) const override;
  void gradient(std::span<const double> theta, const data::Dataset& d,
                std::span<const std::size_t> rows, std::span<double> grad) const override;
  double accuracy(std::span<const double> theta, const data::Dataset& d) const override;
  bool classifies() const override { return true; }

 private:
  std::size_t features_;
  std::size_t classes_;
};

// One tanh hidden layer followed by softmax. Parameter layout: hidden x p
// input weights, hidden biases, classes x hidden output weights, class biases.
class MlpObjective final : public LocalObjective {
 public:
  MlpObjective(std::size_t features, std::size_t hidden, std::size_t classes);

  std::size_t dim() const override;
  double loss(std::span<const double> theta, const data::Dataset& d,
              std::span<const std::size_t> rows) const override;
  void gradient(std::span<const double> theta, const data::Dataset& d,
                std::span<const std::size_t> rows, std::span<double> grad) const override;
  double accuracy(std::span<const double> theta, const data::Dataset& d) const override;
  bool classifies() const override { return true; }
  std::vector<double> initial_model(SeededRng& rng) const override;

 private:
  std::size_t features_;
  std::size_t hidden_;
  std::size_t classes_;
};

// All rows of a dataset, for full-batch calls.
std::vector<std::size_t> all_rows(const data::Dataset& d);

}  // namespace coherentfl::fl
