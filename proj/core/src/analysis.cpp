#include "coherentfl/analysis.hpp"

#include <cmath>
#include <stdexcept>

#include "coherentfl/errors.hpp"
#include "coherentfl/impairment.hpp"

namespace coherentfl::analysis {

namespace {

void check_constants(const AssumptionConstants& c) {
  if (c.l < 0.0 || c.gamma2 < 0.0 || c.omega2 < 0.0 || c.sigma2_d < 0.0)
    throw std::invalid_argument("constants must be non-negative");
  if (c.eta_local <= 0.0) throw std::invalid_argument("learning rate must be positive");
  if (c.tau == 0) throw std::invalid_argument("need at least one local step");
}

double norm(std::span<const double> v) {
  double s = 0.0;
  for (const auto x : v) s += x * x;
  return std::sqrt(s);
}

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

// H v at theta by central differences of the full global gradient.
std::vector<double> hessian_vec(const fl::LocalObjective& objective,
                                const std::vector<data::Dataset>& datasets,
                                std::span<const double> theta,
                                std::span<const double> v) {
  const double eps = 1e-5 * std::max(1.0, norm(theta));
  std::vector<double> plus(theta.begin(), theta.end());
  std::vector<double> minus(theta.begin(), theta.end());
  for (std::size_t j = 0; j < theta.size(); ++j) {
    plus[j] += eps * v[j];
    minus[j] -= eps * v[j];
  }
  auto gp = fl::global_gradient(plus, objective, datasets);
  const auto gm = fl::global_gradient(minus, objective, datasets);
  for (std::size_t j = 0; j < gp.size(); ++j) gp[j] = (gp[j] - gm[j]) / (2.0 * eps);
  return gp;
}

double top_curvature(const fl::LocalObjective& objective,
                     const std::vector<data::Dataset>& datasets,
                     std::span<const double> theta, std::size_t max_iters, double tol,
                     SeededRng& rng) {
  std::vector<double> v(theta.size());
  for (auto& x : v) x = rng.gaussian();
  double scale = norm(v);
  if (scale == 0.0) throw std::runtime_error("degenerate power-iteration start");
  for (auto& x : v) x /= scale;
  double eig = 0.0;
  for (std::size_t it = 0; it < max_iters; ++it) {
    auto hv = hessian_vec(objective, datasets, theta, v);
    const double next = std::abs(dot(v, hv));
    const double len = norm(hv);
    if (len < 1e-14) return 0.0;  // flat direction: curvature ~ 0
    for (std::size_t j = 0; j < v.size(); ++j) v[j] = hv[j] / len;
    if (it > 0 && std::abs(next - eig) <= tol * std::max(1.0, std::abs(next)))
      return next;
    eig = next;
  }
  throw std::runtime_error("power iteration did not converge");
}

}  // namespace

double error_floor(const AssumptionConstants& c) {
  check_constants(c);
  return 8.0 * c.l * c.eta_g() * static_cast<double>(c.tau) * (c.gamma2 + c.omega2) +
         4.0 * c.l * c.sigma2_d;
}

bool lr_condition_ok(const AssumptionConstants& c) {
  check_constants(c);
  if (c.l == 0.0) return true;
  return c.eta_local <= 1.0 / (2.0 * c.l * static_cast<double>(c.tau));
}

double convergence_bound(const AssumptionConstants& c,
                         const std::vector<RoundTrace>& trace, double f0,
                         double f_star) {
  check_constants(c);
  if (f0 < f_star) throw std::invalid_argument("initial loss below the optimum");
  if (trace.empty()) {
    // With no rounds and nothing to descend, only the floor remains.
    if (f0 != f_star) throw std::invalid_argument("empty trace with loss to shed");
    return error_floor(c);
  }
  const double t = static_cast<double>(trace.size());
  double diff_sum = 0.0;
  for (const auto& row : trace) diff_sum += row.model_diff_sq;
  return 4.0 * (f0 - f_star) / (t * c.eta_g()) +
         (4.0 * c.l * c.l * static_cast<double>(c.tau) * c.eta_g() / t) * diff_sum +
         error_floor(c);
}

double empirical_mean_grad_norm(const std::vector<RoundTrace>& trace) {
  if (trace.empty()) throw std::invalid_argument("empty trace");
  double s = 0.0;
  for (const auto& row : trace) s += row.grad_norm_sq;
  return s / static_cast<double>(trace.size());
}

AssumptionConstants estimate_constants(const fl::LocalObjective& objective,
                                       const std::vector<data::Dataset>& datasets,
                                       const ConstantsEstimateOptions& options,
                                       std::uint64_t seed) {
  if (datasets.empty()) throw ConfigError("no devices");
  const std::size_t dim = objective.dim();
  const auto weights = fl::dataset_weights(datasets);
  SeededRng master(seed, 0xA7A1);

  // Probe points: the initial model plus unit-scale Gaussian perturbations.
  SeededRng init_rng = master.derive(1);
  const auto base = objective.initial_model(init_rng);
  std::vector<std::vector<double>> probes{base};
  for (std::size_t p = 0; p < options.probes; ++p) {
    SeededRng probe_rng = master.derive(2, p);
    auto theta = base;
    for (auto& x : theta) x += probe_rng.gaussian();
    probes.push_back(std::move(theta));
  }

  AssumptionConstants out;

  if (const auto exact = objective.exact_smoothness()) {
    out.l = *exact;
  } else {
    double top = 0.0;
    for (std::size_t p = 0; p < probes.size(); ++p) {
      SeededRng power_rng = master.derive(3, p);
      top = std::max(top, top_curvature(objective, datasets, probes[p],
                                        options.power_iters, options.power_tol,
                                        power_rng));
    }
    out.l = options.l_safety * top;
  }

  std::vector<double> grad(dim), local(dim);
  for (std::size_t p = 0; p < probes.size(); ++p) {
    const auto& theta = probes[p];

    // Heterogeneity: (1/K) sum_k ||grad_k - grad||^2 at this probe.
    std::vector<std::vector<double>> device_grads(datasets.size());
    std::fill(grad.begin(), grad.end(), 0.0);
    for (std::size_t k = 0; k < datasets.size(); ++k) {
      const auto rows = fl::all_rows(datasets[k]);
      device_grads[k].resize(dim);
      objective.gradient(theta, datasets[k], rows, device_grads[k]);
      for (std::size_t j = 0; j < dim; ++j) grad[j] += weights[k] * device_grads[k][j];
    }
    double spread = 0.0;
    for (std::size_t k = 0; k < datasets.size(); ++k) {
      double s = 0.0;
      for (std::size_t j = 0; j < dim; ++j) {
        const double diff = device_grads[k][j] - grad[j];
        s += diff * diff;
      }
      spread += s;
    }
    out.omega2 = std::max(out.omega2, spread / static_cast<double>(datasets.size()));

    // Minibatch variance: mean ||minibatch grad - full grad||^2, worst device.
    if (options.batch > 0) {
      for (std::size_t k = 0; k < datasets.size(); ++k) {
        if (options.batch >= datasets[k].n) continue;
        SeededRng batch_rng = master.derive(4, p, k);
        double mean_sq = 0.0;
        for (std::size_t trial = 0; trial < options.trials; ++trial) {
          const auto rows = fl::sample_without_replacement(datasets[k].n, options.batch,
                                                           batch_rng);
          objective.gradient(theta, datasets[k], rows, local);
          double s = 0.0;
          for (std::size_t j = 0; j < dim; ++j) {
            const double diff = local[j] - device_grads[k][j];
            s += diff * diff;
          }
          mean_sq += s;
        }
        out.gamma2 = std::max(out.gamma2, mean_sq / static_cast<double>(options.trials));
      }
    }
  }

  return out;
}

double broadcast_noise_power(const fl::FlProblem& problem) {
  if (problem.masks.size() != problem.noise_vars.size())
    throw std::invalid_argument("masks and noise levels must pair up");
  double worst = 0.0;
  for (std::size_t k = 0; k < problem.masks.size(); ++k) {
    const auto support = static_cast<double>(impairment::mask_support(problem.masks[k]));
    worst = std::max(worst, problem.noise_vars[k] * support);
  }
  return worst;
}

double normalized_comm_cost(Scheme scheme, double lambda) {
  if (lambda < 0.0 || lambda >= 1.0)
    throw ConfigError("pilot duty cycle must lie in [0, 1)");
  if (scheme == Scheme::Conventional) return 1.0 / (1.0 - lambda);
  return 1.0;
}

BoundReport check_bound(const AssumptionConstants& constants,
                        const std::vector<RoundTrace>& trace, double f0, double f_star) {
  BoundReport report;
  report.constants = constants;
  report.f0 = f0;
  report.f_star = f_star;
  report.z = error_floor(constants);
  report.bound = convergence_bound(constants, trace, f0, f_star);
  report.empirical = empirical_mean_grad_norm(trace);
  report.lr_condition_ok = lr_condition_ok(constants);
  report.margin = report.bound - report.empirical;
  report.satisfied = report.margin >= 0.0;
  return report;
}

}  // namespace coherentfl::analysis
