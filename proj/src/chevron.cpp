#include "qrsim/chevron.hpp"

#include <cmath>
#include <stdexcept>

#include "qrsim/measure.hpp"
#include "qrsim/models.hpp"
#include "qrsim/operators.hpp"
#include "qrsim/trotter.hpp"

namespace qrsim {

namespace {

double read_observable(const Vec& psi, const ChevronSpec& spec, ChevronObservable obs) {
  const QuantumState state(spec.space, Support::joint, psi);
  switch (obs) {
    case ChevronObservable::qubit_excitation: return 0.5 * (1.0 - qubit_sz(state));
    case ChevronObservable::mean_photon: return mean_photon(state);
    case ChevronObservable::photon_parity: return photon_parity(state);
  }
  throw std::logic_error("read_observable: unknown observable");
}

// Qubit excited, resonator vacuum.
Vec initial_state(const SpaceSpec& space) {
  Vec psi = Vec::Zero(space.dim_total());
  psi(space.dim_res()) = 1.0;
  return psi;
}

// Off-window: the detuned qubit accrues `phase` on its excited state.
Mat off_window(double phase, const SpaceSpec& space) {
  Mat u = Mat::Identity(space.dim_total(), space.dim_total());
  const int dr = space.dim_res();
  for (int n = 0; n < dr; ++n) u(dr + n, dr + n) = std::exp(cxd(0.0, phase));
  return u;
}

Eigen::VectorXd digital_column(const ChevronSpec& spec, double detuning, double off_phase,
                               ChevronObservable obs, const std::vector<int>& pulse_counts,
                               int max_pulses) {
  const Mat u_cycle =
      off_window(off_phase, spec.space) *
      jc_propagator(spec.g, detuning, spec.pulse_len, spec.space).entries;
  Eigen::VectorXd out(pulse_counts.size());
  Vec psi = initial_state(spec.space);
  std::vector<double> by_count(max_pulses + 1);
  by_count[0] = read_observable(psi, spec, obs);
  for (int k = 1; k <= max_pulses; ++k) {
    psi = u_cycle * psi;
    by_count[k] = read_observable(psi, spec, obs);
  }
  for (size_t i = 0; i < pulse_counts.size(); ++i) out(i) = by_count[pulse_counts[i]];
  return out;
}

}  // namespace

void ChevronSpec::validate() const {
  space.validate();
  if (g <= 0.0) throw std::invalid_argument("ChevronSpec: g must be positive");
  if (detunings.empty() || durations.empty())
    throw std::invalid_argument("ChevronSpec: empty sweep grid");
  for (size_t i = 1; i < detunings.size(); ++i)
    if (detunings[i] <= detunings[i - 1])
      throw std::invalid_argument("ChevronSpec: detunings must be strictly increasing");
  for (size_t i = 1; i < durations.size(); ++i)
    if (durations[i] <= durations[i - 1])
      throw std::invalid_argument("ChevronSpec: durations must be strictly increasing");
  if (durations.front() < 0.0)
    throw std::invalid_argument("ChevronSpec: durations must be non-negative");
  if (mode == ChevronMode::digital && pulse_len <= 0.0)
    throw std::invalid_argument("ChevronSpec: pulse_len must be positive in digital mode");
}

ChevronSpec ChevronSpec::default_grid(ChevronMode mode, double g) {
  ChevronSpec spec;
  spec.mode = mode;
  spec.g = g;
  spec.detunings.resize(81);
  for (int i = 0; i < 81; ++i) spec.detunings[i] = -75.0 + 150.0 * i / 80.0;
  spec.durations.resize(101);
  for (int i = 0; i < 101; ++i) spec.durations[i] = i * spec.pulse_len;
  return spec;
}

Eigen::MatrixXd run_chevron(const ChevronSpec& spec, ChevronObservable observable) {
  spec.validate();
  const int nd = int(spec.detunings.size());
  const int nt = int(spec.durations.size());
  Eigen::MatrixXd grid(nd, nt);

  if (spec.mode == ChevronMode::analog) {
    const Vec psi0 = initial_state(spec.space);
    for (int i = 0; i < nd; ++i) {
      const QuantumOperator h = build_jc(spec.g, 0.0, spec.detunings[i], spec.space);
      Eigen::SelfAdjointEigenSolver<Mat> es(h.entries);
      const Vec coeffs = es.eigenvectors().adjoint() * psi0;
      for (int j = 0; j < nt; ++j) {
        const Vec phases =
            (cxd(0.0, -spec.durations[j]) * es.eigenvalues().array()).exp().matrix();
        const Vec psi = es.eigenvectors() * phases.cwiseProduct(coeffs);
        grid(i, j) = read_observable(psi, spec, observable);
      }
    }
    return grid;
  }

  // Digital: durations map to whole pulse counts.
  std::vector<int> counts(nt);
  int max_pulses = 0;
  for (int j = 0; j < nt; ++j) {
    counts[j] = int(std::lround(spec.durations[j] / spec.pulse_len));
    max_pulses = std::max(max_pulses, counts[j]);
  }
  for (int i = 0; i < nd; ++i)
    grid.row(i) =
        digital_column(spec, spec.detunings[i], spec.off_phase, observable, counts, max_pulses)
            .transpose();
  return grid;
}

double find_compensation_phase(const ChevronSpec& spec, int phase_samples) {
  spec.validate();
  if (spec.mode != ChevronMode::digital)
    throw std::invalid_argument("find_compensation_phase: only meaningful in digital mode");
  if (phase_samples < 2)
    throw std::invalid_argument("find_compensation_phase: need at least 2 phase samples");

  std::vector<int> counts(spec.durations.size());
  int max_pulses = 0;
  for (size_t j = 0; j < counts.size(); ++j) {
    counts[j] = int(std::lround(spec.durations[j] / spec.pulse_len));
    max_pulses = std::max(max_pulses, counts[j]);
  }

  double best_phase = 0.0, best_contrast = -1.0;
  for (int k = 0; k < phase_samples; ++k) {
    const double cand = kTwoPi * k / phase_samples;
    const Eigen::VectorXd pe = digital_column(spec, 0.0, spec.off_phase + cand,
                                              ChevronObservable::qubit_excitation, counts,
                                              max_pulses);
    const double contrast = (1.0 - pe.array()).maxCoeff();
    if (contrast > best_contrast) {
      best_contrast = contrast;
      best_phase = cand;
    }
  }
  return std::fmod(best_phase, kTwoPi);
}

}  // namespace qrsim
