#include "qrsim/measure.hpp"

#include <cmath>
#include <random>

#include "qrsim/operators.hpp"

namespace qrsim {

namespace {

// Resonator populations for a joint or resonator-only state.
Eigen::VectorXd populations(const QuantumState& state) {
  const int dres = state.space.dim_res();
  Eigen::VectorXd pops = Eigen::VectorXd::Zero(dres);
  if (state.support == Support::resonator) {
    if (state.is_pure()) {
      pops = state.vector().cwiseAbs2();
    } else {
      pops = state.entries.diagonal().real();
    }
    return pops;
  }
  if (state.support != Support::joint)
    throw std::invalid_argument("measure: qubit-only state has no photon populations");
  if (state.is_pure()) {
    const Vec psi = state.vector();
    for (int q = 0; q < 2; ++q)
      pops += psi.segment(q * dres, dres).cwiseAbs2();
  } else {
    for (int q = 0; q < 2; ++q)
      pops += state.entries.block(q * dres, q * dres, dres, dres).diagonal().real();
  }
  return pops;
}

}  // namespace

void PhotonMeterSpec::validate() const {
  if (tau_eff <= 0.0) throw std::invalid_argument("PhotonMeterSpec: tau_eff must be > 0");
  if (chi2 == 0.0) throw std::invalid_argument("PhotonMeterSpec: chi2 must be nonzero");
  if (mode == Mode::parity) {
    if (std::abs(std::abs(chi2) * tau_eff - 0.5) > 1e-6)
      throw std::invalid_argument(
          "PhotonMeterSpec: parity mode requires |chi2| * tau_eff = 1/2 (tau_eff = " +
          std::to_string(parity_tau(chi2)) + " us here)");
  }
}

double PhotonMeterSpec::parity_tau(double chi2) {
  if (chi2 == 0.0) throw std::invalid_argument("parity_tau: chi2 must be nonzero");
  return 0.5 / std::abs(chi2);
}

std::pair<double, double> PhotonMeterSpec::linear_window() const {
  // |theta_j| = |2 pi chi2 tau_eff (j - d)| <= 30 deg = pi/6
  const double half_width = (M_PI / 6.0) / (kTwoPi * std::abs(chi2) * tau_eff);
  return {d - half_width, d + half_width};
}

double qubit_sz(const QuantumState& state) {
  if (state.support == Support::qubit) {
    const Mat rho = state.density();
    return (rho(0, 0) - rho(1, 1)).real();
  }
  if (state.support != Support::joint)
    throw std::invalid_argument("qubit_sz: state has no qubit factor");
  const int dres = state.space.dim_res();
  if (state.is_pure()) {
    const Vec psi = state.vector();
    return psi.head(dres).squaredNorm() - psi.tail(dres).squaredNorm();
  }
  return (state.entries.topLeftCorner(dres, dres).trace() -
          state.entries.bottomRightCorner(dres, dres).trace())
      .real();
}

double qubit_parity(const QuantumState& state) {
  // Sign convention: initial |1> (excited) reads parity 1.
  return 0.5 * (1.0 - qubit_sz(state));
}

double photon_pi(const QuantumState& state) {
  const Eigen::VectorXd pops = populations(state);
  double pi = 0.0;
  for (int n = 0; n < pops.size(); ++n) pi += (n % 2 == 0 ? 1.0 : -1.0) * pops(n);
  return pi;
}

double photon_parity(const QuantumState& state) { return 0.5 * (1.0 + photon_pi(state)); }

double mean_photon(const QuantumState& state) {
  const Eigen::VectorXd pops = populations(state);
  double n_mean = 0.0;
  for (int n = 0; n < pops.size(); ++n) n_mean += n * pops(n);
  return n_mean;
}

Eigen::VectorXd photon_populations(const QuantumState& state) { return populations(state); }

double ramsey_meter_response(const QuantumState& state, const PhotonMeterSpec& spec) {
  spec.validate();
  const Eigen::VectorXd pops = populations(state);
  double p = 0.0;
  for (int j = 0; j < pops.size(); ++j) {
    const double theta = kTwoPi * spec.chi2 * spec.tau_eff * (j - spec.d);
    p += pops(j) * 0.5 * (1.0 + std::sin(theta));
  }
  return p;
}

double invert_meter(double p, const PhotonMeterSpec& spec) {
  spec.validate();
  return spec.d + (2.0 * p - 1.0) / (kTwoPi * spec.chi2 * spec.tau_eff);
}

double wigner_point(const QuantumState& state, cxd alpha) {
  const Mat rho = reduced_resonator(state);
  const SpaceSpec space = state.space;
  const Mat d_op = displacement(alpha, space).entries;
  const Mat pi_op = parity_operator(space).entries;
  // (2/pi) tr[Pi D^dag rho D]
  const cxd val = (pi_op * d_op.adjoint() * rho * d_op).trace();
  return (2.0 / M_PI) * val.real();
}

Mat reduced_qubit(const QuantumState& state) {
  if (state.support == Support::qubit) return state.density();
  if (state.support != Support::joint)
    throw std::invalid_argument("reduced_qubit: state has no qubit factor");
  const int dres = state.space.dim_res();
  const Mat rho = state.density();
  Mat out(2, 2);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      out(i, j) = rho.block(i * dres, j * dres, dres, dres).trace();
  return out;
}

Mat reduced_resonator(const QuantumState& state) {
  if (state.support == Support::resonator) return state.density();
  if (state.support != Support::joint)
    throw std::invalid_argument("reduced_resonator: state has no resonator factor");
  const int dres = state.space.dim_res();
  const Mat rho = state.density();
  Mat out = rho.topLeftCorner(dres, dres) + rho.bottomRightCorner(dres, dres);
  return out;
}

double von_neumann_entropy(const Mat& rho) {
  Eigen::SelfAdjointEigenSolver<Mat> es(rho, Eigen::EigenvaluesOnly);
  double s = 0.0;
  for (int i = 0; i < es.eigenvalues().size(); ++i) {
    const double p = es.eigenvalues()(i);
    if (p > 1e-14) s -= p * std::log2(p);
  }
  return s;
}

ConditionalResult conditional_resonator(const QuantumState& state, QubitBasis basis, int outcome) {
  if (state.support != Support::joint)
    throw std::invalid_argument("conditional_resonator: needs a joint state");
  if (outcome != 0 && outcome != 1)
    throw std::invalid_argument("conditional_resonator: outcome must be 0 or 1");
  const int dres = state.space.dim_res();
  const Mat rho = state.density();

  // Projection vector on the qubit: z basis picks a block, x basis mixes them.
  Mat cond(dres, dres);
  if (basis == QubitBasis::z) {
    const int q = outcome;
    cond = rho.block(q * dres, q * dres, dres, dres);
  } else {
    // outcome 0 -> sigma_x = +1 state (|0> + |1>)/sqrt(2)
    const double s = (outcome == 0) ? 1.0 : -1.0;
    cond = 0.5 * (rho.topLeftCorner(dres, dres) + rho.bottomRightCorner(dres, dres) +
                  s * rho.topRightCorner(dres, dres) + s * rho.bottomLeftCorner(dres, dres));
  }
  const double prob = cond.trace().real();
  if (prob <= 1e-12)
    throw std::domain_error("conditional_resonator: outcome probability below 1e-12");
  cond /= prob;
  cond = 0.5 * (cond + Mat(cond.adjoint()));
  return {QuantumState(state.space, Support::resonator, Mat(cond)), prob};
}

double sample_probability(double p, int shots, unsigned long long seed) {
  if (shots <= 0) return p;
  std::mt19937_64 rng(seed);
  std::binomial_distribution<int> dist(shots, std::min(1.0, std::max(0.0, p)));
  return double(dist(rng)) / shots;
}

}  // namespace qrsim
