// Truncated qubit x oscillator Hilbert space: dimensions, operator and
// state containers shared by every other component.
#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace qrsim {

using cxd = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

inline constexpr double kTwoPi = 6.283185307179586476925286766559;

// Truncation of the oscillator Fock space. The joint space is
// qubit (dim 2, |0> = ground) tensor resonator (dim n_max + 1),
// qubit factor first in all Kronecker products.
struct SpaceSpec {
  int n_max = 1;

  int dim_res() const { return n_max + 1; }
  int dim_total() const { return 2 * (n_max + 1); }

  void validate() const {
    if (n_max < 1) throw std::invalid_argument("SpaceSpec: n_max must be >= 1");
  }

  bool operator==(const SpaceSpec&) const = default;
};

// Which tensor factor a matrix lives on.
enum class Support { joint, resonator, qubit };

inline int support_dim(Support s, const SpaceSpec& space) {
  switch (s) {
    case Support::joint: return space.dim_total();
    case Support::resonator: return space.dim_res();
    case Support::qubit: return 2;
  }
  return 0;
}

// Dense complex matrix tagged with its space and tensor factor.
// `hermitian` is a promise checked at construction time.
struct QuantumOperator {
  SpaceSpec space;
  Support support = Support::joint;
  Mat entries;
  bool hermitian = false;

  QuantumOperator() = default;
  QuantumOperator(SpaceSpec sp, Support sup, Mat m, bool herm = false)
      : space(sp), support(sup), entries(std::move(m)), hermitian(herm) {
    space.validate();
    const int d = support_dim(support, space);
    if (entries.rows() != d || entries.cols() != d)
      throw std::invalid_argument("QuantumOperator: matrix is " +
                                  std::to_string(entries.rows()) + "x" +
                                  std::to_string(entries.cols()) +
                                  ", space wants " + std::to_string(d));
    if (hermitian) {
      const double scale = std::max(1.0, entries.norm());
      if ((entries - entries.adjoint()).norm() > 1e-12 * scale)
        throw std::invalid_argument("QuantumOperator: hermitian flag set on a non-Hermitian matrix");
    }
  }
};

// Pure state vector or density matrix on a tagged space.
struct QuantumState {
  enum class Kind { pure, density };

  SpaceSpec space;
  Support support = Support::joint;
  Kind kind = Kind::pure;
  Mat entries;  // column vector for pure states, square matrix for densities

  QuantumState() = default;
  QuantumState(SpaceSpec sp, Support sup, Vec psi)
      : space(sp), support(sup), kind(Kind::pure), entries(std::move(psi)) {
    check();
  }
  QuantumState(SpaceSpec sp, Support sup, Mat rho)
      : space(sp), support(sup), kind(Kind::density), entries(std::move(rho)) {
    check();
  }

  int dim() const { return support_dim(support, space); }
  bool is_pure() const { return kind == Kind::pure; }

  Vec vector() const {
    if (!is_pure()) throw std::logic_error("QuantumState: density matrix has no state vector");
    return entries.col(0);
  }

  // Density matrix view regardless of kind.
  Mat density() const {
    if (is_pure()) return entries.col(0) * entries.col(0).adjoint();
    return entries;
  }

  void check() const {
    space.validate();
    const int d = dim();
    if (is_pure()) {
      if (entries.rows() != d || entries.cols() != 1)
        throw std::invalid_argument("QuantumState: pure state must be a length-" +
                                    std::to_string(d) + " column");
      if (std::abs(entries.col(0).norm() - 1.0) > 1e-10)
        throw std::invalid_argument("QuantumState: pure state not normalized");
    } else {
      if (entries.rows() != d || entries.cols() != d)
        throw std::invalid_argument("QuantumState: density matrix has wrong dimension");
      if ((entries - entries.adjoint()).norm() > 1e-10 * std::max(1.0, entries.norm()))
        throw std::invalid_argument("QuantumState: density matrix not Hermitian");
      if (std::abs(entries.trace().real() - 1.0) > 1e-10 || std::abs(entries.trace().imag()) > 1e-10)
        throw std::invalid_argument("QuantumState: density matrix trace != 1");
      Eigen::SelfAdjointEigenSolver<Mat> es(entries, Eigen::EigenvaluesOnly);
      if (es.eigenvalues().minCoeff() < -1e-8)
        throw std::invalid_argument("QuantumState: density matrix has negative eigenvalues");
    }
  }
};

}  // namespace qrsim
