#include <Eigen/Dense>

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "doctest.h"

#include "coherentfl/analysis.hpp"
#include "coherentfl/dataset.hpp"
#include "coherentfl/errors.hpp"
#include "coherentfl/experiment.hpp"
#include "coherentfl/fedcore.hpp"
#include "coherentfl/impairment.hpp"
#include "coherentfl/objectives.hpp"
#include "coherentfl/trace.hpp"

using namespace coherentfl;
using namespace coherentfl::analysis;

namespace {

data::Dataset centers(std::vector<std::vector<double>> rows) {
  data::Dataset d;
  d.n = rows.size();
  d.p = rows.front().size();
  d.classes = 1;
  d.labels.assign(d.n, 0);
  for (const auto& r : rows) d.features.insert(d.features.end(), r.begin(), r.end());
  return d;
}

AssumptionConstants base_constants() {
  AssumptionConstants c;
  c.l = 1.0;
  c.gamma2 = 1.0;
  c.omega2 = 1.0;
  c.sigma2_d = 0.01;
  c.eta_local = 0.02;  // eta_g = 0.1 with tau = 5
  c.tau = 5;
  return c;
}

// Largest eigenvalue of the global-loss Hessian at theta, built column by
// column from central differences of the exact gradient.
double eigen_top_curvature(const fl::LocalObjective& objective,
                           const std::vector<data::Dataset>& datasets,
                           const std::vector<double>& theta) {
  const auto dim = static_cast<Eigen::Index>(theta.size());
  Eigen::MatrixXd hessian(dim, dim);
  const double eps = 1e-5;
  for (Eigen::Index j = 0; j < dim; ++j) {
    auto plus = theta, minus = theta;
    plus[static_cast<std::size_t>(j)] += eps;
    minus[static_cast<std::size_t>(j)] -= eps;
    const auto gp = fl::global_gradient(plus, objective, datasets);
    const auto gm = fl::global_gradient(minus, objective, datasets);
    for (Eigen::Index i = 0; i < dim; ++i)
      hessian(i, j) = (gp[static_cast<std::size_t>(i)] - gm[static_cast<std::size_t>(i)]) /
                      (2.0 * eps);
  }
  const Eigen::MatrixXd sym = 0.5 * (hessian + hessian.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(sym);
  return solver.eigenvalues().maxCoeff();
}

}  // namespace

TEST_CASE("error floor vanishes without variance, heterogeneity, or noise") {
  auto c = base_constants();
  c.gamma2 = 0.0;
  c.omega2 = 0.0;
  c.sigma2_d = 0.0;
  CHECK(error_floor(c) == 0.0);
}

TEST_CASE("error floor worked value") {
  CHECK(error_floor(base_constants()) == doctest::Approx(8.04).epsilon(1e-12));
}

TEST_CASE("error floor is linear in the broadcast noise with slope 4L") {
  auto c = base_constants();
  const double before = error_floor(c);
  c.sigma2_d *= 2.0;
  const double after = error_floor(c);
  CHECK(after - before == doctest::Approx(4.0 * c.l * 0.01).epsilon(1e-12));
}

TEST_CASE("error floor never decreases in any constant") {
  const auto base = base_constants();
  const double z0 = error_floor(base);
  for (int field = 0; field < 6; ++field) {
    auto c = base;
    switch (field) {
      case 0: c.l *= 1.1; break;
      case 1: c.gamma2 *= 1.1; break;
      case 2: c.omega2 *= 1.1; break;
      case 3: c.sigma2_d *= 1.1; break;
      case 4: c.eta_local *= 1.1; break;
      case 5: c.tau += 1; break;
    }
    CHECK(error_floor(c) >= z0);
  }
}

TEST_CASE("learning-rate condition holds up to the boundary") {
  auto c = base_constants();
  c.l = 2.0;
  c.tau = 5;
  c.eta_local = 1.0 / (2.0 * 2.0 * 5.0);
  CHECK(lr_condition_ok(c));
  c.eta_local *= 1.01;
  CHECK(!lr_condition_ok(c));
}

TEST_CASE("bound decays to the floor as rounds accumulate") {
  const auto c = base_constants();
  std::vector<RoundTrace> trace(10000);
  const double f0 = 1.0, f_star = 0.0;
  const double bound = convergence_bound(c, trace, f0, f_star);
  const double descent = 4.0 * (f0 - f_star) / (10000.0 * c.eta_g());
  CHECK(bound == doctest::Approx(descent + error_floor(c)).epsilon(1e-12));
  CHECK(std::abs(bound - error_floor(c)) <= descent + 1e-12);
}

TEST_CASE("bound accounts for accumulated model movement") {
  const auto c = base_constants();
  std::vector<RoundTrace> trace(4);
  trace[1].model_diff_sq = 0.5;
  trace[2].model_diff_sq = 0.25;
  trace[3].model_diff_sq = 0.25;
  const double bound = convergence_bound(c, trace, 2.0, 0.5);
  const double want = 4.0 * 1.5 / (4.0 * c.eta_g()) +
                      (4.0 * c.l * c.l * 5.0 * c.eta_g() / 4.0) * 1.0 + error_floor(c);
  CHECK(bound == doctest::Approx(want).epsilon(1e-12));
}

TEST_CASE("an empty trace with nothing to descend is pure floor") {
  const auto c = base_constants();
  CHECK(convergence_bound(c, {}, 0.0, 0.0) == doctest::Approx(error_floor(c)));
  CHECK_THROWS_AS(convergence_bound(c, {}, 1.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(convergence_bound(c, {}, -1.0, 0.0), std::invalid_argument);
}

TEST_CASE("empirical gradient level averages the trace") {
  std::vector<RoundTrace> trace(3);
  trace[0].grad_norm_sq = 3.0;
  trace[1].grad_norm_sq = 1.0;
  trace[2].grad_norm_sq = 2.0;
  CHECK(empirical_mean_grad_norm(trace) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK_THROWS_AS(empirical_mean_grad_norm({}), std::invalid_argument);
}

TEST_CASE("smoothness of a quadratic is its top curvature, exactly") {
  fl::QuadraticObjective obj(6, 0.5, 3.5);
  const std::vector<data::Dataset> datasets = {
      centers({{1.0, 0.0, 2.0, -1.0, 0.5, 0.0}}),
      centers({{0.0, 1.0, -2.0, 1.0, 0.0, 0.5}})};
  ConstantsEstimateOptions options;
  const auto constants = estimate_constants(obj, datasets, options, 81);
  CHECK(constants.l == 3.5);
  const auto theta = std::vector<double>(6, 0.0);
  CHECK(std::abs(constants.l - eigen_top_curvature(obj, datasets, theta)) < 1e-8);
}

TEST_CASE("power-iteration smoothness agrees with a dense eigensolver") {
  fl::LogisticObjective obj(3, 3);
  const std::vector<data::Dataset> datasets = {
      data::synthetic_classification(60, 3, 3, 1.0, 82)};
  ConstantsEstimateOptions options;
  options.probes = 0;  // curvature at the initial model only
  const auto constants = estimate_constants(obj, datasets, options, 83);

  SeededRng init(0);  // logistic initialization is the zero model
  const auto theta = obj.initial_model(init);
  const double oracle = eigen_top_curvature(obj, datasets, theta);
  CHECK(constants.l == doctest::Approx(options.l_safety * oracle).epsilon(1e-3));
  CHECK(constants.l > oracle);  // safety factor keeps it an upper bound
}

TEST_CASE("identical device data shows no heterogeneity") {
  fl::QuadraticObjective obj(2, 1.0, 2.0);
  const auto shared = centers({{1.0, -1.0}, {2.0, 0.5}});
  const std::vector<data::Dataset> datasets = {shared, shared, shared};
  ConstantsEstimateOptions options;
  const auto constants = estimate_constants(obj, datasets, options, 84);
  CHECK(constants.omega2 < 1e-12);
}

TEST_CASE("heterogeneity of two offset quadratic devices has a closed form") {
  fl::QuadraticObjective obj(1, 2.0, 2.0);
  const std::vector<data::Dataset> datasets = {centers({{0.0}}), centers({{2.0}})};
  ConstantsEstimateOptions options;
  const auto constants = estimate_constants(obj, datasets, options, 85);
  // per-device gradient offset is a*(mean - center) = ±2, spread = 4
  CHECK(constants.omega2 == doctest::Approx(4.0).epsilon(1e-12));
}

TEST_CASE("full-batch gradients carry no minibatch variance") {
  fl::QuadraticObjective obj(2, 1.0, 2.0);
  const std::vector<data::Dataset> datasets = {centers({{1.0, 0.0}, {0.0, 1.0}})};
  ConstantsEstimateOptions options;
  options.batch = 0;
  const auto constants = estimate_constants(obj, datasets, options, 86);
  CHECK(constants.gamma2 < 1e-12);
}

TEST_CASE("single-sample batches on a two-point device have unit variance") {
  fl::QuadraticObjective obj(1, 1.0, 1.0);
  const std::vector<data::Dataset> datasets = {centers({{0.0}, {2.0}})};
  ConstantsEstimateOptions options;
  options.batch = 1;
  options.trials = 16;
  const auto constants = estimate_constants(obj, datasets, options, 87);
  // batch gradient is theta or theta-2; full gradient is theta-1; gap is 1
  CHECK(constants.gamma2 == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("broadcast noise power takes the worst delivered-energy device") {
  fl::FlProblem problem;
  problem.masks = {impairment::full_mask(4), impairment::dynamic_reuse_mask(4, 2, 4)};
  problem.noise_vars = {0.5, 0.8};
  CHECK(broadcast_noise_power(problem) == doctest::Approx(2.0).epsilon(1e-12));
  problem.noise_vars = {0.1, 0.8};
  CHECK(broadcast_noise_power(problem) == doctest::Approx(1.6).epsilon(1e-12));
}

TEST_CASE("dedicated pilots cost extra slots; reuse does not") {
  for (const auto scheme :
       {Scheme::Conventional, Scheme::ProductSuperposition,
        Scheme::AdditiveSuperposition}) {
    CHECK(normalized_comm_cost(scheme, 0.0) == 1.0);
  }
  CHECK(normalized_comm_cost(Scheme::Conventional, 0.2) ==
        doctest::Approx(1.25).epsilon(1e-12));
  CHECK(normalized_comm_cost(Scheme::ProductSuperposition, 0.2) == 1.0);
  CHECK(normalized_comm_cost(Scheme::AdditiveSuperposition, 0.3) == 1.0);
  for (double lambda = 0.0; lambda < 0.95; lambda += 0.05) {
    CHECK(normalized_comm_cost(Scheme::ProductSuperposition, lambda) <=
          normalized_comm_cost(Scheme::Conventional, lambda));
  }
  CHECK_THROWS_AS(normalized_comm_cost(Scheme::Conventional, 1.0), ConfigError);
  CHECK_THROWS_AS(normalized_comm_cost(Scheme::Conventional, -0.1), ConfigError);
}

TEST_CASE("measured constants dominate noisy minibatch quadratic training") {
  fl::QuadraticObjective obj(3, 1.0, 2.0);
  fl::FlProblem problem;
  problem.objective = &obj;
  problem.device_data = {
      centers({{1.0, 0.0, 2.0}, {2.0, 1.0, 0.0}, {0.0, 2.0, 1.0}, {1.0, 1.0, 1.0}}),
      centers({{-1.0, 0.5, 0.0}, {0.5, -1.0, 1.0}, {0.0, 0.0, -1.0}, {1.0, -1.0, 0.0}}),
      centers({{2.0, -0.5, 0.5}, {0.5, 2.0, -0.5}, {-0.5, 0.5, 2.0}, {0.0, 1.0, 2.0}})};
  problem.masks.assign(3, impairment::full_mask(3));
  problem.noise_vars.assign(3, 0.05);

  fl::TrainConfig config;
  config.tau = 3;
  config.eta_local = 0.05;  // within 1/(2*2*3)
  config.batch_size = 2;
  config.rounds = 30;

  ConstantsEstimateOptions options;
  options.probes = 3;
  options.trials = 32;
  options.batch = config.batch_size;

  const auto [theta_star, f_star] = experiment::quadratic_optimum(problem);
  const auto grad_star = fl::global_gradient(theta_star, obj, problem.device_data);
  double grad_norm_sq = 0.0;
  for (const auto g : grad_star) grad_norm_sq += g * g;
  REQUIRE(grad_norm_sq < 1e-20);

  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    auto constants = estimate_constants(obj, problem.device_data, options, seed);
    constants.eta_local = config.eta_local;
    constants.tau = config.tau;
    constants.sigma2_d = broadcast_noise_power(problem);

    fl::FlState state;
    const auto trace = fl::run_training(problem, config, seed, &state);
    const double f0 =
        fl::global_loss(fl::init_state(problem, seed).global, obj, problem.device_data);
    const auto report = check_bound(constants, trace, f0, f_star);
    CHECK(report.lr_condition_ok);
    CHECK(report.satisfied);
    CHECK(report.bound >= report.z);
  }
}
