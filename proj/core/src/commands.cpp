#include "coherentfl/commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <iostream>
#include <limits>

#include "json.hpp"

#include "coherentfl/errors.hpp"
#include "coherentfl/fading.hpp"
#include "coherentfl/phymath.hpp"
#include "coherentfl/signaling.hpp"
#include "coherentfl/version.hpp"

namespace coherentfl::commands {

namespace {

using nlohmann::json;

std::uint64_t fnv1a64(const std::string& text) {
  std::uint64_t hash = 14695981039346656037ull;
  for (const unsigned char c : text) {
    hash ^= c;
    hash *= 1099511628211ull;
  }
  return hash;
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

// --- strict JSON access -------------------------------------------------------

void require_keys(const json& obj, const char* where,
                  std::initializer_list<const char*> allowed) {
  for (const auto& [key, value] : obj.items()) {
    (void)value;
    if (std::find_if(allowed.begin(), allowed.end(),
                     [&](const char* k) { return key == k; }) == allowed.end())
      throw ConfigError(std::string("unknown key '") + key + "' in " + where);
  }
}

template <typename T>
T get_or(const json& obj, const char* key, T fallback) {
  if (!obj.contains(key)) return fallback;
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError(std::string("bad value type for '") + key + "'");
  }
}

json load_raw(const std::string& path) {
  if (path.empty()) return json::object();
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw ConfigError("config parse error in '" + path + "': " + e.what());
  }
}

constexpr std::initializer_list<const char*> kTopLevelKeys = {
    "seed",       "antennas",  "coherence",   "snr_db",
    "noise_scale", "fresh_block_full_decode", "devices", "statics",
    "scheme",     "fill",      "tau",         "eta_local",
    "batch",      "rounds",    "model",       "train_n",
    "test_n",     "features",  "classes",     "separation",
    "partition",  "shards_per_device", "hidden", "eig_min",
    "eig_max",    "sweep"};

experiment::ExperimentConfig config_from(const json& raw, const CliOptions& options) {
  require_keys(raw, "config", kTopLevelKeys);
  experiment::ExperimentConfig cfg;
  cfg.seed = get_or<std::uint64_t>(raw, "seed", cfg.seed);
  cfg.antennas = get_or<std::size_t>(raw, "antennas", cfg.antennas);
  cfg.coherence = get_or<std::int64_t>(raw, "coherence", cfg.coherence);
  cfg.snr_db = get_or<double>(raw, "snr_db", cfg.snr_db);
  cfg.noise_scale = get_or<double>(raw, "noise_scale", cfg.noise_scale);
  cfg.fresh_block_full_decode =
      get_or<bool>(raw, "fresh_block_full_decode", cfg.fresh_block_full_decode);
  cfg.devices = get_or<std::size_t>(raw, "devices", cfg.devices);
  cfg.statics = get_or<std::size_t>(raw, "statics", cfg.statics);
  if (raw.contains("scheme")) cfg.scheme = parse_scheme(raw.at("scheme").get<std::string>());
  if (raw.contains("fill")) cfg.fill = parse_fill(raw.at("fill").get<std::string>());
  cfg.tau = get_or<std::size_t>(raw, "tau", cfg.tau);
  cfg.eta_local = get_or<double>(raw, "eta_local", cfg.eta_local);
  cfg.batch = get_or<std::size_t>(raw, "batch", cfg.batch);
  cfg.rounds = get_or<std::int64_t>(raw, "rounds", cfg.rounds);
  if (raw.contains("model"))
    cfg.model = experiment::parse_model(raw.at("model").get<std::string>());
  cfg.train_n = get_or<std::size_t>(raw, "train_n", cfg.train_n);
  cfg.test_n = get_or<std::size_t>(raw, "test_n", cfg.test_n);
  cfg.features = get_or<std::size_t>(raw, "features", cfg.features);
  cfg.classes = get_or<std::size_t>(raw, "classes", cfg.classes);
  cfg.separation = get_or<double>(raw, "separation", cfg.separation);
  if (raw.contains("partition")) {
    const auto mode = raw.at("partition").get<std::string>();
    if (mode == "iid") {
      cfg.partition = data::PartitionMode::Iid;
    } else if (mode == "label_shard") {
      cfg.partition = data::PartitionMode::LabelShard;
    } else {
      throw ConfigError("unknown partition '" + mode + "' (expected iid or label_shard)");
    }
  }
  cfg.shards_per_device = get_or<std::size_t>(raw, "shards_per_device",
                                              cfg.shards_per_device);
  cfg.hidden = get_or<std::size_t>(raw, "hidden", cfg.hidden);
  cfg.eig_min = get_or<double>(raw, "eig_min", cfg.eig_min);
  cfg.eig_max = get_or<double>(raw, "eig_max", cfg.eig_max);

  if (options.seed) cfg.seed = *options.seed;
  if (options.scheme) cfg.scheme = parse_scheme(*options.scheme);
  if (options.fill) cfg.fill = parse_fill(*options.fill);
  if (options.snr_db) cfg.snr_db = *options.snr_db;
  if (options.rounds) cfg.rounds = *options.rounds;
  if (options.lambda) {
    const double lambda = *options.lambda;
    if (lambda < 0.0 || lambda >= 1.0)
      throw ConfigError("pilot duty cycle must lie in [0, 1)");
    if (lambda == 0.0) {
      cfg.statics = cfg.devices;  // no estimating devices, no pilots
    } else {
      if (cfg.statics >= cfg.devices)
        throw ConfigError("nonzero duty cycle needs at least one dynamic device");
      const auto t_k =
          static_cast<std::int64_t>(std::llround(static_cast<double>(cfg.antennas) / lambda));
      if (t_k <= static_cast<std::int64_t>(cfg.antennas))
        throw ConfigError("duty cycle too large: no data phase would remain");
      cfg.coherence = t_k;
    }
  }
  return cfg;
}

json config_json(const experiment::ExperimentConfig& cfg) {
  json j;
  j["seed"] = cfg.seed;
  j["antennas"] = cfg.antennas;
  j["coherence"] = cfg.coherence;
  j["snr_db"] = cfg.snr_db;
  j["noise_scale"] = cfg.noise_scale;
  j["fresh_block_full_decode"] = cfg.fresh_block_full_decode;
  j["devices"] = cfg.devices;
  j["statics"] = cfg.statics;
  j["scheme"] = scheme_name(cfg.scheme);
  j["fill"] = fill_name(cfg.fill);
  j["tau"] = cfg.tau;
  j["eta_local"] = cfg.eta_local;
  j["batch"] = cfg.batch;
  j["rounds"] = cfg.rounds;
  j["model"] = experiment::model_name(cfg.model);
  j["train_n"] = cfg.train_n;
  j["test_n"] = cfg.test_n;
  j["features"] = cfg.features;
  j["classes"] = cfg.classes;
  j["separation"] = cfg.separation;
  j["partition"] = cfg.partition == data::PartitionMode::Iid ? "iid" : "label_shard";
  j["shards_per_device"] = cfg.shards_per_device;
  j["hidden"] = cfg.hidden;
  j["eig_min"] = cfg.eig_min;
  j["eig_max"] = cfg.eig_max;
  return j;
}

struct SweepSpec {
  std::vector<std::size_t> antennas{1, 2, 4};
  std::vector<std::int64_t> coherence{6, 8, 16};
  std::vector<double> rho{0.5, 1.0, 2.0};
  std::size_t trials = 20000;
};

SweepSpec sweep_from(const json& raw) {
  SweepSpec spec;
  if (!raw.contains("sweep")) return spec;
  const auto& s = raw.at("sweep");
  require_keys(s, "sweep", {"antennas", "coherence", "rho", "trials"});
  spec.antennas = get_or<std::vector<std::size_t>>(s, "antennas", spec.antennas);
  spec.coherence = get_or<std::vector<std::int64_t>>(s, "coherence", spec.coherence);
  spec.rho = get_or<std::vector<double>>(s, "rho", spec.rho);
  spec.trials = get_or<std::size_t>(s, "trials", spec.trials);
  if (spec.antennas.empty() || spec.coherence.empty() || spec.rho.empty())
    throw ConfigError("sweep lists must be non-empty");
  if (spec.trials == 0) throw ConfigError("sweep trials must be positive");
  return spec;
}

json sweep_json(const SweepSpec& spec) {
  json j;
  j["antennas"] = spec.antennas;
  j["coherence"] = spec.coherence;
  j["rho"] = spec.rho;
  j["trials"] = spec.trials;
  return j;
}

// --- output plumbing ----------------------------------------------------------

void write_text(const std::filesystem::path& path, const std::string& content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  out << content;
  if (!out) throw std::runtime_error("write failed for '" + path.string() + "'");
}

std::filesystem::path out_path(const CliOptions& options, const char* name) {
  return std::filesystem::path(options.out_dir) / name;
}

struct Check {
  std::string name;
  bool pass = false;
  std::string detail;
};

int report_checks(const std::vector<Check>& checks, const CliOptions& options,
                  const std::string& resolved) {
  bool all = true;
  std::string lines;
  for (const auto& c : checks) {
    all = all && c.pass;
    const std::string line =
        std::string(c.pass ? "PASS" : "FAIL") + " " + c.name + ": " + c.detail;
    std::cout << line << '\n';
    lines += line;
    lines += '\n';
  }
  json report;
  report["version"] = kVersion;
  report["config_hash"] = hex64(fnv1a64(resolved));
  report["checks"] = json::array();
  for (const auto& c : checks)
    report["checks"].push_back({{"name", c.name}, {"pass", c.pass}, {"detail", c.detail}});
  report["all_pass"] = all;
  write_text(out_path(options, "phy_validate.json"), report.dump(2) + "\n");
  return all ? 0 : 1;
}

}  // namespace

experiment::ExperimentConfig load_config(const CliOptions& options,
                                         std::string* resolved_json) {
  const json raw = load_raw(options.config_path);
  const auto cfg = config_from(raw, options);
  if (resolved_json != nullptr) *resolved_json = config_json(cfg).dump();
  return cfg;
}

std::string output_header(const std::string& resolved_config_json) {
  return std::string("# coherentfl ") + kVersion + " config=" +
         hex64(fnv1a64(resolved_config_json)) + "\n";
}

// --- phy-validate --------------------------------------------------------------

namespace {

Check check_unitary_mixing() {
  Check c{"unitary_mixing", true, ""};
  double worst = 0.0;
  for (const std::size_t m : {1u, 2u, 4u, 8u}) {
    const auto u = signaling::mixing_matrix(m);
    const auto gram = u * u.hermitian();
    const auto eye = ComplexMatrix::identity(m);
    worst = std::max(worst, max_abs_diff(gram, eye));
    for (std::size_t j = 0; j < m; ++j)
      worst = std::max(worst, std::abs(u.col(j).norm_sq() - 1.0));
  }
  c.pass = worst < 1e-12;
  c.detail = "max unitarity defect " + format_number(worst);
  return c;
}

Check check_shrinkage_variance(std::uint64_t seed, bool mutate) {
  Check c{"mmse_shrinkage_variance", true, ""};
  const std::size_t trials = 20000;
  double worst_rel = 0.0;
  const std::vector<std::pair<std::size_t, double>> cases{{2, 0.5}, {2, 10.0}, {8, 1.0}};
  for (std::size_t ci = 0; ci < cases.size(); ++ci) {
    const auto [m, rho_p] = cases[ci];
    SeededRng rng = SeededRng(seed, 0xC0DE).derive(1, ci);
    const double amp = std::sqrt(static_cast<double>(m) * rho_p);
    double residual = 0.0;
    for (std::size_t t = 0; t < trials; ++t) {
      ComplexVector f(m), y(m);
      for (std::size_t j = 0; j < m; ++j) {
        f[j] = rng.cgaussian();
        y[j] = amp * f[j] + rng.cgaussian();
      }
      auto est = signaling::mmse_virtual_channel(y, rho_p, 1.0, m);
      if (mutate)
        for (std::size_t j = 0; j < m; ++j) est.estimate[j] *= 1.05;
      for (std::size_t j = 0; j < m; ++j)
        residual += std::norm(f[j] - est.estimate[j]);
    }
    residual /= static_cast<double>(trials);
    const double md = static_cast<double>(m);
    const double predicted = md / (md * rho_p + 1.0);
    worst_rel = std::max(worst_rel, std::abs(residual - predicted) / predicted);
  }
  c.pass = worst_rel < 0.025;
  c.detail = "worst relative deviation " + format_number(worst_rel);
  return c;
}

Check check_orthogonality(std::uint64_t seed) {
  Check c{"mmse_orthogonality", true, ""};
  const std::size_t m = 4, trials = 20000;
  const double rho_p = 1.0;
  SeededRng rng(seed, 0x0A71);
  const double amp = std::sqrt(static_cast<double>(m) * rho_p);
  cdouble acc(0.0, 0.0);
  for (std::size_t t = 0; t < trials; ++t) {
    ComplexVector f(m), y(m);
    for (std::size_t j = 0; j < m; ++j) {
      f[j] = rng.cgaussian();
      y[j] = amp * f[j] + rng.cgaussian();
    }
    const auto est = signaling::mmse_virtual_channel(y, rho_p, 1.0, m);
    for (std::size_t j = 0; j < m; ++j)
      acc += std::conj(est.estimate[j]) * (f[j] - est.estimate[j]);
  }
  const double mean = std::abs(acc) / static_cast<double>(trials);
  c.pass = mean < 0.03;
  c.detail = "|mean <estimate, error>| = " + format_number(mean);
  return c;
}

Check check_allocation_grid() {
  Check c{"allocation_optimality", true, ""};
  double worst_gap = 0.0, worst_budget = 0.0;
  for (const std::size_t m : {1u, 2u}) {
    for (const std::int64_t t_k : {6, 12}) {
      for (const double rho : {0.8, 2.0}) {
        const auto alloc = power::optimal_allocation(rho, t_k, m, 1.0);
        const double md = static_cast<double>(m);
        const double td = static_cast<double>(t_k);
        const double data_len = td - md;
        worst_budget = std::max(
            worst_budget,
            std::abs(md * (alloc.rho_p + alloc.rho_d * data_len) - rho * td));
        const double best = power::effective_snr(alloc.rho_p, alloc.rho_d, m, 1.0);
        const double cap = rho * td / (md * data_len);  // rho_d with zero pilot power
        for (std::size_t i = 1; i <= 10000; ++i) {
          const double rho_d = cap * static_cast<double>(i) / 10000.0;
          const double rho_p = rho * td / md - rho_d * data_len;
          if (rho_p < 0.0) continue;
          const double snr = power::effective_snr(rho_p, rho_d, m, 1.0);
          worst_gap = std::max(worst_gap, snr - best);
        }
      }
    }
  }
  c.pass = worst_gap <= 1e-9 && worst_budget <= 1e-9;
  c.detail = "max grid advantage " + format_number(worst_gap) + ", budget defect " +
             format_number(worst_budget);
  return c;
}

Check check_static_decode(std::uint64_t seed) {
  Check c{"static_decode_exact", true, ""};
  SeededRng rng(seed, 0x57A7);
  double worst = 0.0;
  constexpr std::size_t kAntennas[] = {1, 2, 4};
  for (std::size_t i = 0; i < 200; ++i) {
    const std::size_t m = kAntennas[i % 3];
    const std::int64_t t_k = static_cast<std::int64_t>(2 * m + 1);
    const double rho_p = 1.3, rho_d = 0.7;
    SeededRng inst = rng.derive(5, i);
    const auto h = phymath::draw_rayleigh_channel(m, inst);
    const auto mixing = signaling::mixing_matrix(m);
    const auto pilot_syms = signaling::random_phase_symbols(m, inst);
    const auto data_syms =
        signaling::random_phase_symbols(static_cast<std::size_t>(t_k) - m, inst);
    const auto p_mat = signaling::embed_pilot_phase(pilot_syms, mixing);
    const auto d_mat = signaling::embed_data_phase(data_syms, mixing);
    const auto frame = signaling::build_superposition_block(
        p_mat, d_mat, signaling::scaled_pilot(m), rho_p, rho_d);
    const auto y = signaling::receive(frame.transmit, h, 0.0, inst);
    ComplexVector y_pilot(m);
    for (std::size_t j = 0; j < m; ++j) y_pilot[j] = y[j];
    const auto despread = signaling::static_decode_pilot_phase(y_pilot, mixing);
    const double amp = std::sqrt(static_cast<double>(m) * rho_p);
    auto expected = left_apply_conj(h, p_mat);
    for (std::size_t j = 0; j < m; ++j) expected[j] *= amp;
    worst = std::max(worst, max_abs_diff(despread, expected));
    const auto demap = signaling::static_demap(despread, h, mixing, amp, 0.0);
    for (std::size_t j = 0; j < m; ++j)
      worst = std::max(worst, std::abs(demap.symbols[j] - pilot_syms[j]));
  }
  c.pass = worst < 1e-10;
  c.detail = "max decode error " + format_number(worst);
  return c;
}

Check check_decoded_snr(std::uint64_t seed) {
  Check c{"decoded_symbol_snr", true, ""};
  const std::size_t m = 2, data_cols = 6, trials = 20000;
  const double rho_p = 1.0, rho_d = 1.0, noise = 1.0;
  SeededRng rng(seed, 0xD54A);
  const auto mixing = signaling::mixing_matrix(m);
  double signal = 0.0, residual = 0.0;
  for (std::size_t t = 0; t < trials; ++t) {
    SeededRng inst = rng.derive(7, t);
    const auto h = phymath::draw_rayleigh_channel(m, inst);
    const auto pilot_syms = signaling::random_phase_symbols(m, inst);
    const auto data_syms = signaling::random_phase_symbols(data_cols, inst);
    const auto frame = signaling::build_superposition_block(
        signaling::embed_pilot_phase(pilot_syms, mixing),
        signaling::embed_data_phase(data_syms, mixing), signaling::scaled_pilot(m),
        rho_p, rho_d);
    const auto y = signaling::receive(frame.transmit, h, noise, inst);
    ComplexVector y_pilot(m);
    for (std::size_t j = 0; j < m; ++j) y_pilot[j] = y[j];
    const auto despread = signaling::static_decode_pilot_phase(y_pilot, mixing);
    const auto est = signaling::mmse_virtual_channel(despread, rho_p, noise, m);
    const double amp = std::sqrt(rho_d);
    for (std::size_t j = 0; j < data_cols; ++j) {
      const auto col = signaling::spreading_column(mixing, j);
      const cdouble gain = amp * dot_plain(est.estimate, col) * data_syms[j];
      signal += std::norm(gain);
      residual += std::norm(y[m + j] - gain);
    }
  }
  const double empirical = signal / residual;
  const double alpha2 = static_cast<double>(m) * rho_p /
                        (static_cast<double>(m) * rho_p + noise);
  const double predicted = power::effective_snr(rho_p, rho_d, m, noise) *
                           static_cast<double>(m) * alpha2;
  const double rel = std::abs(empirical - predicted) / predicted;
  c.pass = rel < 0.05;
  c.detail = "empirical " + format_number(empirical) + " vs predicted " +
             format_number(predicted) + " (rel " + format_number(rel) + ")";
  return c;
}

Check check_prior_estimate() {
  Check c{"zero_pilot_prior", true, ""};
  const std::size_t m = 3;
  ComplexVector y(m);
  for (std::size_t j = 0; j < m; ++j) y[j] = cdouble(1.0, -2.0);
  const auto est = signaling::mmse_virtual_channel(y, 0.0, 1.0, m);
  double energy = 0.0;
  for (std::size_t j = 0; j < m; ++j) energy += std::norm(est.estimate[j]);
  c.pass = energy == 0.0 && est.error_variance == static_cast<double>(m);
  c.detail = "estimate energy " + format_number(energy) + ", error variance " +
             format_number(est.error_variance);
  return c;
}

}  // namespace

int cmd_phy_validate(const CliOptions& options) {
  std::string resolved;
  const auto cfg = load_config(options, &resolved);
  std::vector<Check> checks;
  checks.push_back(check_unitary_mixing());
  checks.push_back(check_shrinkage_variance(cfg.seed, options.mutate_shrinkage));
  checks.push_back(check_orthogonality(cfg.seed));
  checks.push_back(check_allocation_grid());
  checks.push_back(check_static_decode(cfg.seed));
  checks.push_back(check_decoded_snr(cfg.seed));
  checks.push_back(check_prior_estimate());
  return report_checks(checks, options, resolved);
}

// --- power-sweep ----------------------------------------------------------------

int cmd_power_sweep(const CliOptions& options) {
  std::string resolved;
  const auto cfg = load_config(options, &resolved);
  const auto raw = load_raw(options.config_path);
  const auto sweep = sweep_from(raw);
  auto full = config_json(cfg);
  full["sweep"] = sweep_json(sweep);
  const std::string resolved_full = full.dump();

  std::string csv = output_header(resolved_full);
  csv += "M,T_K,rho,rho_p,rho_d,gamma_eff,static_rate,dynamic_rate,stderr,status\n";
  const SeededRng master(cfg.seed, 0x50EE);
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (std::size_t im = 0; im < sweep.antennas.size(); ++im) {
    for (std::size_t it = 0; it < sweep.coherence.size(); ++it) {
      for (std::size_t ir = 0; ir < sweep.rho.size(); ++ir) {
        const std::size_t m = sweep.antennas[im];
        const std::int64_t t_k = sweep.coherence[it];
        const double rho = sweep.rho[ir];
        double rho_p = nan, rho_d = nan, gamma = nan;
        double static_rate = nan, dynamic_rate = nan, err = nan;
        std::string status = "ok";
        try {
          const auto alloc = power::optimal_allocation(rho, t_k, m, 1.0);
          rho_p = alloc.rho_p;
          rho_d = alloc.rho_d;
          gamma = power::effective_snr(alloc.rho_p, alloc.rho_d, m, 1.0);
          const SeededRng point = master.derive(im, it, ir);
          const auto s = power::static_rate(alloc.rho_p, m, t_k, 1.0, sweep.trials,
                                            point.derive(1));
          const auto d = power::dynamic_rate(alloc, sweep.trials, point.derive(2));
          static_rate = s.mean;
          dynamic_rate = d.mean;
          err = std::max(s.std_error, d.std_error);
        } catch (const InfeasibleBudgetError&) {
          status = "infeasible_budget";
        } catch (const ConfigError&) {
          status = "no_data_phase";
        }
        csv += std::to_string(m) + "," + std::to_string(t_k) + "," +
               format_number(rho) + "," + format_number(rho_p) + "," +
               format_number(rho_d) + "," + format_number(gamma) + "," +
               format_number(static_rate) + "," + format_number(dynamic_rate) + "," +
               format_number(err) + "," + status + "\n";
      }
    }
  }
  write_text(out_path(options, "power_sweep.csv"), csv);
  std::cout << "power sweep: " << sweep.antennas.size() * sweep.coherence.size() *
                                      sweep.rho.size()
            << " grid points -> " << out_path(options, "power_sweep.csv").string()
            << '\n';
  return 0;
}

// --- train ----------------------------------------------------------------------

namespace {

json constants_json(const analysis::AssumptionConstants& c) {
  json j;
  j["l"] = c.l;
  j["gamma2"] = c.gamma2;
  j["omega2"] = c.omega2;
  j["sigma2_d"] = c.sigma2_d;
  j["eta_local"] = c.eta_local;
  j["tau"] = c.tau;
  j["eta_g"] = c.eta_g();
  return j;
}

}  // namespace

int cmd_train(const CliOptions& options) {
  std::string resolved;
  const auto cfg = load_config(options, &resolved);
  const auto run = experiment::run_training(cfg);

  std::string csv = output_header(resolved);
  csv += trace_csv_header();
  csv += '\n';
  for (const auto& row : run.traces) {
    csv += trace_csv_row(row, cfg.scheme, cfg.fill, cfg.seed);
    csv += '\n';
  }
  write_text(out_path(options, "train_trace.csv"), csv);

  analysis::ConstantsEstimateOptions copt;
  copt.probes = 3;
  copt.trials = 32;
  copt.batch = cfg.batch;
  auto constants = analysis::estimate_constants(*run.objective, run.problem.device_data,
                                                copt, cfg.seed);
  constants.eta_local = cfg.eta_local;
  constants.tau = cfg.tau;
  constants.sigma2_d = analysis::broadcast_noise_power(run.problem);

  const double f0 = run.traces.front().global_loss;
  double f_star = 0.0;
  std::string f_star_method;
  if (cfg.model == experiment::ModelKind::Quadratic) {
    f_star = experiment::quadratic_optimum(run.problem).second;
    f_star_method = "closed_form";
  } else {
    const std::size_t steps = std::min<std::size_t>(
        50000, 10 * static_cast<std::size_t>(cfg.rounds) * cfg.tau);
    f_star = experiment::centralized_f_star(run.problem, steps, cfg.eta_local, cfg.seed);
    f_star_method = "centralized";
  }
  const auto report = analysis::check_bound(constants, run.traces, f0, f_star);

  const double final_accuracy =
      run.objective->classifies() && run.problem.test_data != nullptr
          ? run.objective->accuracy(run.final_state.global, *run.problem.test_data)
          : 0.0;

  json j;
  j["version"] = kVersion;
  j["config_hash"] = hex64(fnv1a64(resolved));
  j["config"] = config_json(cfg);
  j["lambda"] = run.phy.lambda;
  j["comm_cost_slots"] = run.phy.comm_cost;
  j["rho_p"] = run.phy.alloc.rho_p;
  j["rho_d"] = run.phy.alloc.rho_d;
  j["sigma2_static"] = run.phy.noise.sigma2_static;
  j["sigma2_dynamic"] = run.phy.noise.sigma2_dynamic;
  j["constants"] = constants_json(constants);
  j["f0"] = f0;
  j["f_star"] = f_star;
  j["f_star_method"] = f_star_method;
  j["error_floor"] = report.z;
  j["bound"] = report.bound;
  j["empirical_mean_grad_norm_sq"] = report.empirical;
  j["lr_condition_ok"] = report.lr_condition_ok;
  j["bound_satisfied"] = report.satisfied;
  j["margin"] = report.margin;
  j["informational_only"] = cfg.fill == FillStrategy::ZF;
  j["final_loss"] = fl::global_loss(run.final_state.global, *run.objective,
                                    run.problem.device_data);
  j["final_accuracy"] = final_accuracy;
  write_text(out_path(options, "train_report.json"), j.dump(2) + "\n");

  std::cout << "train: " << run.traces.size() << " rounds, final loss "
            << format_number(j["final_loss"].get<double>()) << ", final accuracy "
            << format_number(final_accuracy) << ", bound "
            << (report.satisfied ? "satisfied" : "exceeded") << '\n';
  return 0;
}

// --- compare-schemes --------------------------------------------------------------

int cmd_compare_schemes(const CliOptions& options) {
  std::string resolved;
  const auto base = load_config(options, &resolved);
  struct Variant {
    Scheme scheme;
    FillStrategy fill;
  };
  const std::vector<Variant> variants{
      {Scheme::Conventional, FillStrategy::PLMF},
      {Scheme::ProductSuperposition, FillStrategy::ZF},
      {Scheme::ProductSuperposition, FillStrategy::PLMF},
      {Scheme::AdditiveSuperposition, FillStrategy::PLMF}};

  std::string csv = output_header(resolved);
  csv += "scheme,fill,round,cost,accuracy\n";
  for (const auto& variant : variants) {
    auto cfg = base;
    cfg.scheme = variant.scheme;
    cfg.fill = variant.fill;
    const auto run = experiment::run_training(cfg);
    for (const auto& row : run.traces) {
      csv += std::string(scheme_name(variant.scheme)) + "," + fill_name(variant.fill) +
             "," + std::to_string(row.round) + "," +
             format_number(static_cast<double>(row.round) * run.phy.comm_cost) + "," +
             format_number(row.test_accuracy) + "\n";
    }
    const double final_accuracy =
        run.objective->classifies() && run.problem.test_data != nullptr
            ? run.objective->accuracy(run.final_state.global, *run.problem.test_data)
            : 0.0;
    csv += std::string(scheme_name(variant.scheme)) + "," + fill_name(variant.fill) +
           "," + std::to_string(cfg.rounds) + "," +
           format_number(static_cast<double>(cfg.rounds) * run.phy.comm_cost) + "," +
           format_number(final_accuracy) + "\n";
  }
  write_text(out_path(options, "compare_schemes.csv"), csv);
  std::cout << "compare: " << variants.size() << " variants -> "
            << out_path(options, "compare_schemes.csv").string() << '\n';
  return 0;
}

}  // namespace coherentfl::commands
