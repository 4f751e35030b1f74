#include "qrsim/operators.hpp"

#include <cmath>

#include <unsupported/Eigen/MatrixFunctions>

namespace qrsim {

QuantumOperator annihilation(const SpaceSpec& space) {
  space.validate();
  Mat a = Mat::Zero(space.dim_res(), space.dim_res());
  for (int n = 1; n <= space.n_max; ++n) a(n - 1, n) = std::sqrt(double(n));
  return {space, Support::resonator, std::move(a), false};
}

QuantumOperator pauli(Pauli which) {
  SpaceSpec dummy{1};
  Mat m = Mat::Zero(2, 2);
  switch (which) {
    case Pauli::x:
      m << 0, 1, 1, 0;
      return {dummy, Support::qubit, std::move(m), true};
    case Pauli::y:
      m << 0, cxd(0, -1), cxd(0, 1), 0;
      return {dummy, Support::qubit, std::move(m), true};
    case Pauli::z:
      m << 1, 0, 0, -1;
      return {dummy, Support::qubit, std::move(m), true};
    case Pauli::plus:
      m(1, 0) = 1;  // |1><0|: raises ground to excited
      return {dummy, Support::qubit, std::move(m), false};
    case Pauli::minus:
      m(0, 1) = 1;
      return {dummy, Support::qubit, std::move(m), false};
  }
  throw std::logic_error("pauli: unreachable");
}

Mat embed(const Mat& op_qubit, const Mat& op_res) {
  const int dq = int(op_qubit.rows());
  const int dr = int(op_res.rows());
  Mat out(dq * dr, dq * dr);
  for (int i = 0; i < dq; ++i)
    for (int j = 0; j < dq; ++j)
      out.block(i * dr, j * dr, dr, dr) = op_qubit(i, j) * op_res;
  return out;
}

QuantumOperator embed(const QuantumOperator& op_qubit, const QuantumOperator& op_res,
                      const SpaceSpec& space) {
  space.validate();
  if (op_qubit.entries.rows() != 2)
    throw std::invalid_argument("embed: qubit operand must be 2x2");
  if (op_res.entries.rows() != space.dim_res())
    throw std::invalid_argument("embed: resonator operand dimension mismatch");
  Mat out = embed(op_qubit.entries, op_res.entries);
  return {space, Support::joint, std::move(out), op_qubit.hermitian && op_res.hermitian};
}

QuantumState coherent_state(cxd alpha, const SpaceSpec& space) {
  space.validate();
  Vec c(space.dim_res());
  // c_n = e^{-|a|^2/2} a^n / sqrt(n!), built by recursion to avoid overflow.
  cxd term = std::exp(-0.5 * std::norm(alpha));
  c(0) = term;
  for (int n = 1; n <= space.n_max; ++n) {
    term *= alpha / std::sqrt(double(n));
    c(n) = term;
  }
  const double norm = c.norm();
  if (norm < 1.0 - 1e-6)
    throw std::invalid_argument("coherent_state: truncation loss " +
                                std::to_string(1.0 - norm) + " exceeds 1e-6; raise n_max");
  c /= norm;
  return {space, Support::resonator, std::move(c)};
}

QuantumOperator displacement(cxd alpha, const SpaceSpec& space) {
  space.validate();
  const Mat a = annihilation(space).entries;
  Mat gen = alpha * a.adjoint() - std::conj(alpha) * a;
  return {space, Support::resonator, expm(gen), false};
}

QuantumOperator parity_operator(const SpaceSpec& space) {
  space.validate();
  Mat p = Mat::Zero(space.dim_res(), space.dim_res());
  for (int n = 0; n <= space.n_max; ++n) p(n, n) = (n % 2 == 0) ? 1.0 : -1.0;
  return {space, Support::resonator, std::move(p), true};
}

Mat expm_hermitian_propagator(const Mat& h, double t) {
  Eigen::SelfAdjointEigenSolver<Mat> es(h);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("expm_hermitian_propagator: eigendecomposition failed");
  Vec phases(h.rows());
  for (int i = 0; i < h.rows(); ++i)
    phases(i) = std::exp(cxd(0, -es.eigenvalues()(i) * t));
  return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

Mat expm(const Mat& m) { return m.exp(); }

}  // namespace qrsim
