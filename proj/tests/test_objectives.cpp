#include <cmath>
#include <cstddef>
#include <vector>

#include "doctest.h"

#include "coherentfl/dataset.hpp"
#include "coherentfl/errors.hpp"
#include "coherentfl/objectives.hpp"
#include "coherentfl/rng.hpp"

using namespace coherentfl;
using namespace coherentfl::fl;

TEST_CASE("quadratic curvature spans the requested eigenvalue range") {
  QuadraticObjective obj(5, 1.0, 3.0);
  const auto curv = obj.curvature();
  CHECK(curv.front() == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(curv.back() == doctest::Approx(3.0).epsilon(1e-15));
  for (std::size_t j = 1; j < curv.size(); ++j) CHECK(curv[j] >= curv[j - 1]);
  CHECK(obj.exact_smoothness().value() == doctest::Approx(3.0).epsilon(1e-15));
  CHECK(!obj.classifies());
}

TEST_CASE("quadratic rejects degenerate curvature") {
  CHECK_THROWS_AS(QuadraticObjective(0, 1.0, 2.0), ConfigError);
  CHECK_THROWS_AS(QuadraticObjective(3, 0.0, 2.0), ConfigError);
  CHECK_THROWS_AS(QuadraticObjective(3, 2.0, 1.0), ConfigError);
}

TEST_CASE("logistic loss at the zero model is the log class count") {
  LogisticObjective obj(4, 3);
  const auto dataset = data::synthetic_classification(30, 4, 3, 2.0, 51);
  const std::vector<double> zero(obj.dim(), 0.0);
  CHECK(obj.loss(zero, dataset, all_rows(dataset)) ==
        doctest::Approx(std::log(3.0)).epsilon(1e-12));
}

TEST_CASE("logistic training separates well-separated clusters") {
  LogisticObjective obj(2, 2);
  const auto dataset = data::synthetic_classification(200, 2, 2, 10.0, 52);
  std::vector<double> theta(obj.dim(), 0.0);
  std::vector<double> grad(obj.dim());
  const auto rows = all_rows(dataset);
  for (int step = 0; step < 300; ++step) {
    obj.gradient(theta, dataset, rows, grad);
    for (std::size_t j = 0; j < theta.size(); ++j) theta[j] -= 0.5 * grad[j];
  }
  CHECK(obj.accuracy(theta, dataset) > 0.99);
  CHECK(obj.classifies());
}

TEST_CASE("perceptron gradient matches central finite differences") {
  MlpObjective obj(3, 4, 3);
  const auto dataset = data::synthetic_classification(25, 3, 3, 1.5, 53);
  const auto rows = all_rows(dataset);
  SeededRng init(54);
  const auto theta = obj.initial_model(init);

  std::vector<double> grad(obj.dim());
  obj.gradient(theta, dataset, rows, grad);

  const double h = 1e-5;
  double worst = 0.0;
  for (std::size_t j = 0; j < theta.size(); ++j) {
    auto plus = theta, minus = theta;
    plus[j] += h;
    minus[j] -= h;
    const double fd =
        (obj.loss(plus, dataset, rows) - obj.loss(minus, dataset, rows)) / (2.0 * h);
    worst = std::max(worst, std::abs(fd - grad[j]));
  }
  CHECK(worst < 1e-6);
}

TEST_CASE("perceptron parameter count covers both layers with biases") {
  MlpObjective obj(3, 4, 2);
  CHECK(obj.dim() == 4 * (3 + 1) + 2 * (4 + 1));
}

TEST_CASE("perceptron initialization breaks the zero saddle deterministically") {
  MlpObjective obj(2, 3, 2);
  SeededRng a(55), b(55), c(56);
  const auto first = obj.initial_model(a);
  const auto second = obj.initial_model(b);
  const auto other = obj.initial_model(c);
  CHECK(first == second);
  CHECK(first != other);
  double norm = 0.0;
  for (const auto v : first) norm += v * v;
  CHECK(norm > 0.0);
  CHECK(obj.exact_smoothness() == std::nullopt);
}

TEST_CASE("perceptron training reduces the loss on separable data") {
  MlpObjective obj(2, 6, 2);
  const auto dataset = data::synthetic_classification(120, 2, 2, 4.0, 57);
  const auto rows = all_rows(dataset);
  SeededRng init(58);
  auto theta = obj.initial_model(init);
  const double before = obj.loss(theta, dataset, rows);
  std::vector<double> grad(obj.dim());
  for (int step = 0; step < 200; ++step) {
    obj.gradient(theta, dataset, rows, grad);
    for (std::size_t j = 0; j < theta.size(); ++j) theta[j] -= 0.3 * grad[j];
  }
  const double after = obj.loss(theta, dataset, rows);
  CHECK(after < 0.5 * before);
  CHECK(obj.accuracy(theta, dataset) > 0.9);
}
