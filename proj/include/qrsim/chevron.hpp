// Vacuum-Rabi chevron experiments: analog constant-detuning exchange versus a
// digital pulse train with per-off-window qubit phase, plus the compensation
// phase search.
#pragma once

#include <vector>

#include "qrsim/space.hpp"

namespace qrsim {

enum class ChevronMode { analog, digital };

enum class ChevronObservable { qubit_excitation, mean_photon, photon_parity };

struct ChevronSpec {
  std::vector<double> detunings;  // qubit-resonator detuning, cyclic MHz
  std::vector<double> durations;  // total interaction time, us
  double pulse_len = 0.020;       // digital on-pulse duration, us
  double off_phase = 0.0;         // qubit phase per off-window, rad (digital)
  ChevronMode mode = ChevronMode::digital;
  double g = 1.95;                // exchange coupling, cyclic MHz
  SpaceSpec space{4};             // one excitation from |e,0>, so a few levels suffice

  void validate() const;

  // Uniform default grids sized to render the chevron structure.
  static ChevronSpec default_grid(ChevronMode mode, double g = 1.95);
};

// Grid of the observable; rows follow spec.detunings, columns spec.durations.
// The initial state is qubit excited, resonator vacuum.
Eigen::MatrixXd run_chevron(const ChevronSpec& spec, ChevronObservable observable);

// Sweeps the off-window phase at zero detuning and returns the value (mod 2pi)
// that maximizes the swap contrast max_t(1 - P_excited).
double find_compensation_phase(const ChevronSpec& spec, int phase_samples = 721);

}  // namespace qrsim
