// Observables and emulated meters: normalized parities, photon-number
// Ramsey meters, Wigner point sampling, reduced states and entropy.
#pragma once

#include <optional>
#include <vector>

#include "qrsim/space.hpp"

namespace qrsim {

// Ramsey photon meter configuration. chi2 is the dispersive shift 2*chi
// (MHz, signed), tau_eff the effective pulse separation (us), d the photon
// index read as probability 1/2.
struct PhotonMeterSpec {
  double tau_eff = 0.0187;
  double chi2 = -1.26;
  double d = 4.0;
  enum class Mode { ramsey, parity } mode = Mode::ramsey;

  void validate() const;

  // Ramsey separation at which the meter measures photon parity,
  // |2 chi| tau_eff = 1/2 in cyclic units.
  static double parity_tau(double chi2);

  // Declared linear window: photon indices with |theta_j| <= 30 degrees.
  std::pair<double, double> linear_window() const;
};

// (1 + s <sigma_z>)/2 with the sign fixed so the initial excited state
// reads 1; raw expectation also available.
double qubit_parity(const QuantumState& state);
double qubit_sz(const QuantumState& state);

// (1 + <Pi>)/2 on the resonator reduced state.
double photon_parity(const QuantumState& state);
double photon_pi(const QuantumState& state);

double mean_photon(const QuantumState& state);

// Fock-basis populations of the resonator reduced state.
Eigen::VectorXd photon_populations(const QuantumState& state);

// Exact sine-sum meter response p^e = sum_j w_j (1 + sin theta_j)/2 with
// theta_j = 2 pi chi2 tau_eff (j - d). Phase-insensitive: only diagonal
// weights of the resonator state enter.
double ramsey_meter_response(const QuantumState& state, const PhotonMeterSpec& spec);

// Linearized inversion n_hat = d + (2p - 1)/(2 pi chi2 tau_eff); biased
// outside the linear window (population wrapping).
double invert_meter(double p, const PhotonMeterSpec& spec);

// W(alpha) = (2/pi) tr[Pi D^dag(alpha) rho_res D(alpha)], bounded by 2/pi.
double wigner_point(const QuantumState& state, cxd alpha);

// Partial traces.
Mat reduced_qubit(const QuantumState& state);
Mat reduced_resonator(const QuantumState& state);

// Von Neumann entropy in bits.
double von_neumann_entropy(const Mat& rho);

// Post-measurement resonator state after reading the qubit. basis z:
// outcome 0/1 in the energy basis; basis x: outcome 0 -> sigma_x = +1.
struct ConditionalResult {
  QuantumState resonator;
  double probability;
};
enum class QubitBasis { z, x };
ConditionalResult conditional_resonator(const QuantumState& state, QubitBasis basis, int outcome);

// Optional binomial sampling layer emulating finite measurement statistics.
double sample_probability(double p, int shots, unsigned long long seed);

}  // namespace qrsim
