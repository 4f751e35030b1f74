#include "qrsim/trotter.hpp"

#include <cmath>

#include "qrsim/operators.hpp"

namespace qrsim {

void TrotterPlan::validate() const {
  if (order != 1 && order != 2) throw std::invalid_argument("TrotterPlan: order must be 1 or 2");
  if (tau <= 0.0) throw std::invalid_argument("TrotterPlan: tau must be > 0");
  if (n_steps < 1) throw std::invalid_argument("TrotterPlan: n_steps must be >= 1");
  if (g <= 0.0) throw std::invalid_argument("TrotterPlan: g must be > 0");
}

double dphi_for_omega(double omega_rr, double tau) {
  return -M_PI * omega_rr * tau;
}

TrotterPlan plan_for_targets(double g, double omega_rr, double omega_qr, double tau,
                             int n_steps, int order) {
  TrotterPlan plan;
  plan.order = order;
  plan.tau = tau;
  plan.n_steps = n_steps;
  plan.g = g;
  plan.dphi = dphi_for_omega(omega_rr, tau);
  plan.delta_q_jc = -omega_qr;  // inverse of the effective_hamiltonian sign map
  plan.with_default_phi0();
  plan.validate();
  return plan;
}

std::vector<std::pair<double, double>> phase_schedule(const TrotterPlan& plan) {
  plan.validate();
  std::vector<std::pair<double, double>> out;
  out.reserve(size_t(plan.n_steps));
  for (int n = 1; n <= plan.n_steps; ++n) {
    const double phi1 = plan.phi0 + (2.0 * n - 2.0) * plan.dphi;
    const double phi2 = plan.phi0 + (2.0 * n - 1.0) * plan.dphi;
    out.emplace_back(phi1, phi2);
  }
  return out;
}

QuantumOperator bit_flip(double phi) {
  // R_z(phi) R_x(pi) R_z(-phi) worked out in closed form:
  // -i (cos phi sigma_x - sin phi sigma_y) rotated into the z-phase frame.
  Mat r(2, 2);
  r(0, 0) = 0.0;
  r(0, 1) = cxd(0.0, -1.0) * std::exp(cxd(0.0, -phi));
  r(1, 0) = cxd(0.0, -1.0) * std::exp(cxd(0.0, phi));
  r(1, 1) = 0.0;
  return {SpaceSpec{1}, Support::qubit, std::move(r), false};
}

QuantumOperator jc_propagator(double g, double delta_q_jc, double duration,
                              const SpaceSpec& space) {
  if (duration < 0.0) throw std::invalid_argument("jc_propagator: duration must be >= 0");
  const Mat h = build_jc(g, 0.0, delta_q_jc, space).entries;
  return {space, Support::joint, expm_hermitian_propagator(h, duration), false};
}

QuantumOperator ajc_step(double g, double tau, double phi1, double phi2,
                         const SpaceSpec& space) {
  const Mat ir = Mat::Identity(space.dim_res(), space.dim_res());
  const Mat r1 = embed(bit_flip(phi1).entries, ir);
  const Mat r2 = embed(bit_flip(phi2).entries, ir);
  const Mat ujc = jc_propagator(g, 0.0, tau, space).entries;
  Mat u = r2 * ujc * r1;
  return {space, Support::joint, std::move(u), false};
}

QuantumOperator trotter_step(const TrotterPlan& plan, int step_index, const SpaceSpec& space) {
  plan.validate();
  if (step_index < 1 || step_index > plan.n_steps)
    throw std::out_of_range("trotter_step: step_index outside 1..n_steps");
  const double phi1 = plan.phi0 + (2.0 * step_index - 2.0) * plan.dphi;
  const double phi2 = plan.phi0 + (2.0 * step_index - 1.0) * plan.dphi;
  const Mat ajc = ajc_step(plan.g, plan.tau, phi1, phi2, space).entries;
  if (plan.order == 1) {
    const Mat ujc = jc_propagator(plan.g, plan.delta_q_jc, plan.tau, space).entries;
    Mat u = ajc * ujc;
    return {space, Support::joint, std::move(u), false};
  }
  const Mat uhalf = jc_propagator(plan.g, plan.delta_q_jc, 0.5 * plan.tau, space).entries;
  Mat u = uhalf * ajc * uhalf;
  return {space, Support::joint, std::move(u), false};
}

RabiParams effective_hamiltonian(const TrotterPlan& plan) {
  plan.validate();
  RabiParams p;
  p.g_r = plan.g;
  p.omega_rr = -2.0 * plan.dphi / (kTwoPi * plan.tau);
  p.omega_qr = -plan.delta_q_jc;
  return p;
}

QuantumOperator frame_map(const TrotterPlan& plan, double t, const SpaceSpec& space) {
  plan.validate();
  const double rate = -plan.dphi / plan.tau;
  const double arg = rate * (t + 0.5 * plan.tau);
  const int dr = space.dim_res();
  Mat w = Mat::Zero(space.dim_total(), space.dim_total());
  for (int q = 0; q < 2; ++q) {
    const double sz = q == 0 ? 1.0 : -1.0;
    for (int n = 0; n < dr; ++n)
      w(q * dr + n, q * dr + n) = std::exp(cxd(0.0, -arg * sz));
  }
  return {space, Support::joint, std::move(w), false};
}

}  // namespace qrsim
