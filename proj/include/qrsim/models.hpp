// Rabi, Jaynes-Cummings and anti-Jaynes-Cummings Hamiltonian builders in
// cyclic units (MHz, us), and the closed-form degenerate-limit oracle.
#pragma once

#include <limits>
#include <optional>

#include "qrsim/space.hpp"

namespace qrsim {

// Simulated Rabi-model parameters. All frequencies cyclic (MHz); the 2 pi
// conversion to angular units happens inside the builders.
struct RabiParams {
  double g_r = 1.0;       // coupling (MHz)
  double omega_rr = 0.0;  // simulated resonator frequency (MHz)
  double omega_qr = 0.0;  // simulated qubit frequency (MHz)
  double kerr = 0.0;      // self-Kerr coefficient (MHz)
  double t1_res = std::numeric_limits<double>::infinity();  // resonator decay time (us)

  // r = g_R / omega_rR, the coupling-to-frequency ratio used as the sweep axis.
  double r() const;

  void validate() const;
};

// H / hbar = -(omega_qR/2) sigma_z + omega_rR a^dag a
//            + g_R (a + a^dag)(sigma_+ + sigma_-) + (kerr/2) a^dag a^dag a a,
// angular units internally.
QuantumOperator build_rabi(const RabiParams& p, const SpaceSpec& space);

// H_jc = -(delta_q_jc/2) sigma_z + delta_r a^dag a + g (a sigma_+ + a^dag sigma_-).
QuantumOperator build_jc(double g, double delta_r, double delta_q_jc, const SpaceSpec& space);

// H_ajc = sigma_x H_jc sigma_x with delta_r = 0: the counter-rotating half.
QuantumOperator build_ajc(double g, double delta_q_ajc, const SpaceSpec& space);

// Closed-form degenerate-limit (omega_qR = 0) dynamics for initial |1,0>.
// The resonator branches into coherent states alpha_+/- conditioned on
// sigma_x = +/-1; both normalized parities equal (1 + e^{-2|alpha|^2})/2.
struct DegenerateOracleResult {
  cxd alpha_plus;
  cxd alpha_minus;
  double qubit_parity;
  double photon_parity;
  double mean_n;
};

DegenerateOracleResult degenerate_oracle(const RabiParams& p, double t);

// Period of the JC exchange oscillation, 1/sqrt(4 g^2 + delta^2) in cyclic units.
double jc_reference_period(double g, double delta_qr);

}  // namespace qrsim
