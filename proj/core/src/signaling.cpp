#include "coherentfl/signaling.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "coherentfl/errors.hpp"
#include "coherentfl/phymath.hpp"

namespace coherentfl::signaling {

namespace {

void require(bool ok, const char* what) {
  if (!ok) throw std::invalid_argument(what);
}

}  // namespace

ComplexMatrix SubBlockFrame::pilot_phase() const {
  require(transmit.cols() >= m, "frame shorter than its pilot phase");
  ComplexMatrix out(m, m);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) out.at(i, j) = transmit.at(i, j);
  return out;
}

ComplexMatrix SubBlockFrame::data_phase() const {
  require(transmit.cols() >= m, "frame shorter than its pilot phase");
  const std::size_t d = transmit.cols() - m;
  ComplexMatrix out(m, d);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < d; ++j) out.at(i, j) = transmit.at(i, m + j);
  return out;
}

SubBlockFrame build_baseline_block(const ComplexMatrix& data, const ComplexMatrix& pilot,
                                   double rho_p, double rho_d, double rho_budget) {
  require(pilot.rows() == pilot.cols(), "pilot matrix must be square");
  require(data.rows() == pilot.rows(), "data and pilot antenna counts differ");
  require(rho_p >= 0.0 && rho_d >= 0.0 && rho_budget >= 0.0, "negative power");
  const std::size_t m = pilot.rows();
  const std::size_t total = m + data.cols();
  const double spend = rho_p * static_cast<double>(m) +
                       rho_d * static_cast<double>(data.cols());
  const double budget = rho_budget * static_cast<double>(total);
  if (spend > budget + 1e-9 * std::max(1.0, budget)) {
    throw PowerConstraintError("sub-block power spend exceeds the frame budget",
                               spend - budget);
  }
  SubBlockFrame frame;
  frame.scheme = BlockScheme::Baseline;
  frame.m = m;
  frame.rho_p = rho_p;
  frame.rho_d = rho_d;
  frame.transmit =
      pilot.scaled(std::sqrt(rho_p)).hstack(data.scaled(std::sqrt(rho_d)));
  return frame;
}

SubBlockFrame build_superposition_block(const ComplexMatrix& pilot_phase_params,
                                        const ComplexMatrix& data_phase_params,
                                        const ComplexMatrix& pilot, double rho_p,
                                        double rho_d) {
  require(pilot.rows() == pilot.cols(), "pilot matrix must be square");
  const std::size_t m = pilot.rows();
  require(pilot_phase_params.rows() == m && pilot_phase_params.cols() == m,
          "pilot-phase parameter matrix must be m x m");
  require(data_phase_params.rows() == m, "data-phase parameter antenna count differs");
  require(rho_p >= 0.0 && rho_d >= 0.0, "negative power");
  SubBlockFrame frame;
  frame.scheme = BlockScheme::ProductSuperposition;
  frame.m = m;
  frame.rho_p = rho_p;
  frame.rho_d = rho_d;
  frame.transmit =
      (pilot_phase_params * pilot)
          .scaled(std::sqrt(rho_p))
          .hstack((pilot_phase_params * data_phase_params).scaled(std::sqrt(rho_d)));
  return frame;
}

SubBlockFrame build_additive_block(const ComplexMatrix& params, const ComplexMatrix& pilot,
                                   double rho_p, double rho_d) {
  require(pilot.rows() == pilot.cols(), "pilot matrix must be square");
  const std::size_t m = pilot.rows();
  require(params.rows() == m, "parameter antenna count differs from pilot");
  require(params.cols() >= m, "parameter frame shorter than the pilot phase");
  require(rho_p >= 0.0 && rho_d >= 0.0, "negative power");
  SubBlockFrame frame;
  frame.scheme = BlockScheme::AdditiveSuperposition;
  frame.m = m;
  frame.rho_p = rho_p;
  frame.rho_d = rho_d;
  frame.transmit = params.scaled(std::sqrt(rho_d));
  const double amp = std::sqrt(rho_p);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) frame.transmit.at(i, j) += amp * pilot.at(i, j);
  return frame;
}

ComplexVector receive(const ComplexMatrix& transmit, const ComplexVector& channel,
                      double noise_var, SeededRng& rng) {
  require(channel.size() == transmit.rows(), "channel length differs from antenna count");
  ComplexVector y = left_apply_conj(channel, transmit);
  const ComplexVector w = phymath::awgn(y.size(), noise_var, rng);
  for (std::size_t j = 0; j < y.size(); ++j) y[j] += w[j];
  return y;
}

ComplexVector static_decode_pilot_phase(const ComplexVector& y_pilot,
                                        const ComplexMatrix& pilot) {
  return right_apply_hermitian(y_pilot, pilot);
}

DecodedSymbols static_demap(const ComplexVector& despread, const ComplexVector& channel,
                            const ComplexMatrix& mixing, double amplitude,
                            double noise_var) {
  require(despread.size() == channel.size(), "observation and channel lengths differ");
  require(mixing.rows() == despread.size() && mixing.cols() == despread.size(),
          "mixing matrix size differs from observation length");
  const ComplexVector z = right_apply_hermitian(despread, mixing);
  DecodedSymbols out;
  out.symbols.resize(z.size());
  out.erasure.assign(z.size(), false);
  out.effective_noise_variance = noise_var;
  for (std::size_t j = 0; j < z.size(); ++j) {
    const cdouble gain = amplitude * std::conj(channel[j]);
    if (std::abs(gain) < 1e-9) {
      out.erasure[j] = true;
      out.symbols[j] = cdouble(0.0, 0.0);
    } else {
      out.symbols[j] = z[j] / gain;
    }
  }
  return out;
}

VirtualChannelEstimate mmse_virtual_channel(const ComplexVector& y_pilot, double rho_p,
                                            double noise_var, std::size_t m) {
  require(y_pilot.size() == m, "pilot observation length differs from antenna count");
  if (rho_p < 0.0) throw std::domain_error("negative pilot power");
  if (noise_var <= 0.0) throw std::domain_error("noise variance must be positive");
  VirtualChannelEstimate est;
  est.rho_p = rho_p;
  est.noise_var = noise_var;
  est.estimate = ComplexVector(m);
  const double md = static_cast<double>(m);
  if (rho_p == 0.0) {
    est.error_variance = md;  // prior energy E||f||^2; the estimate stays at zero
    return est;
  }
  const double energy = md * rho_p;
  const double shrink = energy / (energy + noise_var);
  const double amp = std::sqrt(energy);
  for (std::size_t j = 0; j < m; ++j) est.estimate[j] = shrink * y_pilot[j] / amp;
  est.error_variance = md * noise_var / (energy + noise_var);
  return est;
}

DecodedSymbols coherent_data_decode(const ComplexVector& y_data,
                                    const VirtualChannelEstimate& estimate, double rho_d,
                                    double noise_var) {
  if (rho_d < 0.0) throw std::domain_error("negative data power");
  const std::size_t m = estimate.estimate.size();
  require(m > 0, "empty virtual-channel estimate");
  const ComplexMatrix mixing = mixing_matrix(m);
  const double amp = std::sqrt(rho_d);
  DecodedSymbols out;
  out.symbols.resize(y_data.size());
  out.erasure.assign(y_data.size(), false);
  out.effective_noise_variance = noise_var + rho_d * estimate.error_variance;
  for (std::size_t j = 0; j < y_data.size(); ++j) {
    const ComplexVector c = spreading_column(mixing, j);
    const cdouble gain = amp * dot_plain(estimate.estimate, c);
    if (std::abs(gain) < 1e-9) {
      out.erasure[j] = true;
      out.symbols[j] = cdouble(0.0, 0.0);
    } else {
      out.symbols[j] = y_data[j] / gain;
    }
  }
  return out;
}

ComplexMatrix mixing_matrix(std::size_t m) { return phymath::unitary_pilot(m); }

ComplexMatrix scaled_pilot(std::size_t m) {
  return phymath::unitary_pilot(m).scaled(std::sqrt(static_cast<double>(m)));
}

std::vector<cdouble> random_phase_symbols(std::size_t n, SeededRng& rng) {
  std::vector<cdouble> s(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double phase = 2.0 * std::numbers::pi * rng.uniform();
    s[j] = cdouble(std::cos(phase), std::sin(phase));
  }
  return s;
}

ComplexMatrix embed_pilot_phase(std::span<const cdouble> symbols,
                                const ComplexMatrix& mixing) {
  require(mixing.rows() == mixing.cols(), "mixing matrix must be square");
  require(symbols.size() == mixing.rows(), "need one symbol per mixing row");
  ComplexMatrix out(mixing.rows(), mixing.cols());
  for (std::size_t i = 0; i < mixing.rows(); ++i)
    for (std::size_t j = 0; j < mixing.cols(); ++j)
      out.at(i, j) = symbols[i] * mixing.at(i, j);
  return out;
}

ComplexMatrix embed_data_phase(std::span<const cdouble> symbols,
                               const ComplexMatrix& mixing) {
  require(mixing.rows() == mixing.cols(), "mixing matrix must be square");
  const std::size_t m = mixing.rows();
  require(m > 0, "empty mixing matrix");
  const double scale = std::sqrt(static_cast<double>(m));
  ComplexMatrix out(m, symbols.size());
  for (std::size_t j = 0; j < symbols.size(); ++j) {
    const std::size_t k = j % m;
    for (std::size_t i = 0; i < m; ++i)
      out.at(i, j) = symbols[j] * scale * mixing.at(i, k);
  }
  return out;
}

ComplexVector spreading_column(const ComplexMatrix& mixing, std::size_t j) {
  require(mixing.rows() == mixing.cols() && mixing.rows() > 0,
          "mixing matrix must be square and non-empty");
  const std::size_t m = mixing.rows();
  ComplexVector c = mixing.col(j % m);
  const double scale = std::sqrt(static_cast<double>(m));
  for (std::size_t i = 0; i < m; ++i) c[i] *= scale;
  return c;
}

}  // namespace coherentfl::signaling
