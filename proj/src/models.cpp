#include "qrsim/models.hpp"

#include <cmath>

#include "qrsim/operators.hpp"

namespace qrsim {

double RabiParams::r() const {
  if (omega_rr == 0.0)
    throw std::domain_error("RabiParams::r: undefined for omega_rR = 0");
  return g_r / omega_rr;
}

void RabiParams::validate() const {
  if (g_r <= 0.0) throw std::invalid_argument("RabiParams: g_R must be > 0");
  if (t1_res <= 0.0) throw std::invalid_argument("RabiParams: t1_res must be > 0");
}

QuantumOperator build_rabi(const RabiParams& p, const SpaceSpec& space) {
  p.validate();
  const Mat a = annihilation(space).entries;
  const Mat ad = a.adjoint();
  const Mat n = ad * a;
  const Mat i2 = Mat::Identity(2, 2);
  const Mat sz = pauli(Pauli::z).entries;
  const Mat sx = pauli(Pauli::x).entries;

  Mat h = embed(-0.5 * p.omega_qr * sz, Mat::Identity(space.dim_res(), space.dim_res()));
  h += embed(i2, p.omega_rr * n);
  h += embed(p.g_r * sx, a + ad);
  if (p.kerr != 0.0) h += embed(i2, (0.5 * p.kerr) * (ad * ad * a * a));
  h *= kTwoPi;
  return {space, Support::joint, std::move(h), true};
}

QuantumOperator build_jc(double g, double delta_r, double delta_q_jc, const SpaceSpec& space) {
  const Mat a = annihilation(space).entries;
  const Mat ad = a.adjoint();
  const Mat sz = pauli(Pauli::z).entries;
  const Mat sp = pauli(Pauli::plus).entries;
  const Mat sm = pauli(Pauli::minus).entries;
  const Mat ir = Mat::Identity(space.dim_res(), space.dim_res());

  Mat h = embed(-0.5 * delta_q_jc * sz, ir);
  h += embed(Mat::Identity(2, 2), delta_r * (ad * a));
  h += g * (embed(sp, a) + embed(sm, ad));
  h *= kTwoPi;
  return {space, Support::joint, std::move(h), true};
}

QuantumOperator build_ajc(double g, double delta_q_ajc, const SpaceSpec& space) {
  const Mat jc = build_jc(g, 0.0, delta_q_ajc, space).entries;
  const Mat x = embed(pauli(Pauli::x).entries, Mat::Identity(space.dim_res(), space.dim_res()));
  Mat h = x * jc * x;
  return {space, Support::joint, std::move(h), true};
}

DegenerateOracleResult degenerate_oracle(const RabiParams& p, double t) {
  p.validate();
  if (p.omega_qr != 0.0)
    throw std::domain_error("degenerate_oracle: requires omega_qR = 0");
  if (p.kerr != 0.0)
    throw std::domain_error("degenerate_oracle: requires kerr = 0");
  if (std::isfinite(p.t1_res))
    throw std::domain_error("degenerate_oracle: requires no decay");

  // Conditioned on sigma_x = +/-1 the oscillator is driven around a circle:
  // alpha_-+(t) for initial |1,0>, amplitude |alpha| = 2r|sin(pi omega_rR t)|.
  // The phase convention matches the exact-evolution centroid of the
  // sigma_x = +1 conditional state. At omega_rR = 0 the circle degenerates
  // into a straight line (the r -> infinity regime, no revivals).
  cxd alpha_plus;
  if (p.omega_rr == 0.0) {
    alpha_plus = cxd(0.0, -kTwoPi * p.g_r * t);
  } else {
    const cxd circle = 1.0 - std::exp(cxd(0.0, -kTwoPi * p.omega_rr * t));
    alpha_plus = -p.r() * circle;
  }
  const double a2 = std::norm(alpha_plus);
  const double parity = 0.5 * (1.0 + std::exp(-2.0 * a2));
  return {alpha_plus, -alpha_plus, parity, parity, a2};
}

double jc_reference_period(double g, double delta_qr) {
  if (g <= 0.0) throw std::invalid_argument("jc_reference_period: g must be > 0");
  return 1.0 / std::sqrt(4.0 * g * g + delta_qr * delta_qr);
}

}  // namespace qrsim
