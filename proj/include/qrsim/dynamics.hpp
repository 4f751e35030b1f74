// Time-evolution engines: exact unitary, Trotterized unitary, and the
// Lindblad master equation with resonator photon decay.
#pragma once

#include <utility>
#include <variant>
#include <vector>

#include "qrsim/models.hpp"
#include "qrsim/space.hpp"
#include "qrsim/trotter.hpp"

namespace qrsim {

// A sampled evolution: one state per sample time, with the generating
// parameters carried along for provenance.
struct Trajectory {
  std::vector<double> times;  // us, monotonically increasing
  std::vector<QuantumState> states;
  std::variant<std::monostate, RabiParams, TrotterPlan> params;
};

// states[k] = exp(-i H times[k]) psi0 via one eigendecomposition.
Trajectory evolve_unitary(const QuantumOperator& h, const QuantumState& psi0,
                          const std::vector<double>& times);

struct TrotterRunOptions {
  // Merge the trailing and leading JC half pulses of adjacent order-2 steps
  // into one full pulse wherever no sample falls between them.
  bool merge_half_steps = true;
  // Record a sample every this many steps (the final state is always kept).
  int sample_stride = 1;
};

// Runs the phase-controlled Trotter sequence from psi0. Sample k sits at
// simulated time k * stride * tau; t = 0 is included.
Trajectory evolve_trotter(const TrotterPlan& plan, const QuantumState& psi0,
                          const SpaceSpec& space, const TrotterRunOptions& opts = {});

struct LindbladOptions {
  // Densely exponentiate the Liouvillian only up to this joint dimension;
  // larger spaces use fixed-step RK4 on the master equation.
  int superop_budget = 32;
  // RK4 substep target (us); 0.4 ns = tau/50 for the 20 ns step.
  double rk4_dt = 4.0e-4;
  // false: segments evolve unitarily and the accumulated decay is applied
  // as one exact amplitude-damping kick per Trotter step.
  bool decay_during_segments = true;
};

// Piecewise-constant master equation
//   drho/dt = -i[H, rho] + kappa (a rho a^dag - 1/2 {a^dag a, rho}),
// kappa = 1/t1_res. One sample after each segment; times are the cumulative
// segment durations.
Trajectory evolve_lindblad(const std::vector<std::pair<QuantumOperator, double>>& segments,
                           const QuantumState& rho0, double t1_res,
                           const LindbladOptions& opts = {});

// The Trotter sequence of `plan` with decay. Simulated time advances by tau
// per step while the decay clock advances by the 2 tau lab duration of the
// segments (tau/2 + tau + tau/2 of flux pulses; bit flips are instantaneous).
Trajectory evolve_lindblad_trotter(const TrotterPlan& plan, const QuantumState& rho0,
                                   double t1_res, const SpaceSpec& space,
                                   const LindbladOptions& opts = {});

}  // namespace qrsim
