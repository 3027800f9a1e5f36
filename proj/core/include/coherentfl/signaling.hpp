#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "coherentfl/complex_linalg.hpp"
#include "coherentfl/rng.hpp"

namespace coherentfl::signaling {

enum class BlockScheme { Baseline, ProductSuperposition, AdditiveSuperposition };

// One transmit sub-block: m pilot-bearing slots followed by data slots.
struct SubBlockFrame {
  BlockScheme scheme = BlockScheme::Baseline;
  std::size_t m = 0;  // antennas == pilot length
  double rho_p = 0.0;
  double rho_d = 0.0;
  ComplexMatrix transmit;  // m x T

  std::size_t length() const { return transmit.cols(); }
  ComplexMatrix pilot_phase() const;  // first m columns
  ComplexMatrix data_phase() const;   // remaining columns
};

// Virtual-channel estimate of f = h^H X_p_theta for an estimating device.
struct VirtualChannelEstimate {
  ComplexVector estimate;        // f_hat, length m
  double error_variance = 0.0;   // E||f - f_hat||^2 = m*noise / (m*rho_p + noise)
  double rho_p = 0.0;
  double noise_var = 1.0;
};

struct DecodedSymbols {
  std::vector<cdouble> symbols;
  std::vector<bool> erasure;              // true where the effective gain vanished
  double effective_noise_variance = 0.0;  // noise + rho_d * estimate error
};

// --- frame construction -----------------------------------------------------

// Orthodox split [sqrt(rho_p) X_p, sqrt(rho_d) X_d]. Enforces the per-block
// budget rho_p*m + rho_d*(T-m) <= rho_budget*T; violations raise
// PowerConstraintError carrying the excess.
SubBlockFrame build_baseline_block(const ComplexMatrix& data, const ComplexMatrix& pilot,
                                   double rho_p, double rho_d, double rho_budget);

// Product reuse: [sqrt(rho_p) P X_p, sqrt(rho_d) P D] where P carries symbols
// for known-channel devices across the pilot phase and D carries symbols
// across the data phase.
SubBlockFrame build_superposition_block(const ComplexMatrix& pilot_phase_params,
                                        const ComplexMatrix& data_phase_params,
                                        const ComplexMatrix& pilot, double rho_p,
                                        double rho_d);

// Additive reuse: pilot added on top of the first m parameter columns,
// [sqrt(rho_p) X_p + sqrt(rho_d) D_1, sqrt(rho_d) D_2]. Interference-limited:
// the pilot is never orthogonal to the parameters it rides on.
SubBlockFrame build_additive_block(const ComplexMatrix& params, const ComplexMatrix& pilot,
                                   double rho_p, double rho_d);

// --- channel and receivers --------------------------------------------------

// y = h^H X + w with w i.i.d. CN(0, noise_var).
ComplexVector receive(const ComplexMatrix& transmit, const ComplexVector& channel,
                      double noise_var, SeededRng& rng);

// Pilot-phase de-spreading for any receiver: y X_p^H. A unitary pilot makes
// this a rotation, so noise statistics are preserved.
ComplexVector static_decode_pilot_phase(const ComplexVector& y_pilot,
                                        const ComplexMatrix& pilot);

// Per-symbol demap for a known-channel device given the de-spread pilot-phase
// observation amp * h^H diag(s) U: divides by the known effective gain
// amp * conj(h_j) and the mixing rows.
DecodedSymbols static_demap(const ComplexVector& despread, const ComplexVector& channel,
                            const ComplexMatrix& mixing, double amplitude,
                            double noise_var);

// Linear MMSE estimate of the virtual channel from the de-spread pilot-phase
// observation y = sqrt(m*rho_p) f + w, where f has unit-variance entries (the
// pilot-phase parameter matrix is unitary). Shrinkage m*rho_p/(m*rho_p+noise)
// is the exact LMMSE coefficient for this observation; rho_p == 0 returns the
// prior (zero estimate, error variance m).
VirtualChannelEstimate mmse_virtual_channel(const ComplexVector& y_pilot, double rho_p,
                                            double noise_var, std::size_t m);

// Data-phase decode with an estimated virtual channel: symbol j is recovered
// as y_j / (sqrt(rho_d) f_hat . c_j) with c_j the known spreading column.
// Slots whose effective gain is below 1e-9 are flagged as erasures.
DecodedSymbols coherent_data_decode(const ComplexVector& y_data,
                                    const VirtualChannelEstimate& estimate, double rho_d,
                                    double noise_var);

// --- symbol embedding -------------------------------------------------------

// Fixed known unitary mixing shared by transmitter and receivers.
ComplexMatrix mixing_matrix(std::size_t m);

// Pilot matrix scaled to per-antenna pilot power: sqrt(m) * unitary pilot.
// De-spreading by the unitary pilot then yields sqrt(m*rho_p) f + w, the
// observation model mmse_virtual_channel expects.
ComplexMatrix scaled_pilot(std::size_t m);

// Unit-modulus symbols, one per parameter chunk: exp(2*pi*i*u).
std::vector<cdouble> random_phase_symbols(std::size_t n, SeededRng& rng);

// diag(s) * U: unitary when all |s_i| = 1, which keeps the virtual channel
// f = h^H diag(s) U at unit per-entry variance.
ComplexMatrix embed_pilot_phase(std::span<const cdouble> symbols,
                                const ComplexMatrix& mixing);

// Column j = s_j * sqrt(m) * U col (j mod m): one symbol per data slot spread
// across all m virtual dimensions at per-antenna data power.
ComplexMatrix embed_data_phase(std::span<const cdouble> symbols,
                               const ComplexMatrix& mixing);

// Spreading column used for data slot j (sqrt(m)-scaled mixing column).
ComplexVector spreading_column(const ComplexMatrix& mixing, std::size_t j);

}  // namespace coherentfl::signaling
