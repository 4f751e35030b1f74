// Ladder, Pauli, displacement and parity operators on the truncated space,
// plus the matrix-exponential helpers used by the evolution engines.
#pragma once

#include <complex>

#include "qrsim/space.hpp"

namespace qrsim {

enum class Pauli { x, y, z, plus, minus };

// Annihilation operator a with entries a[n-1, n] = sqrt(n) (resonator-only).
QuantumOperator annihilation(const SpaceSpec& space);

// 2x2 Pauli / ladder matrices in the {|0> = ground, |1> = excited} basis,
// with sigma_z|0> = +|0> and sigma_+ = |1><0|.
QuantumOperator pauli(Pauli which);

// Kronecker product, qubit factor first.
QuantumOperator embed(const QuantumOperator& op_qubit, const QuantumOperator& op_res,
                      const SpaceSpec& space);
Mat embed(const Mat& op_qubit, const Mat& op_res);

// Truncated coherent state, renormalized; throws if the pre-normalization
// weight lost to truncation exceeds 1e-6.
QuantumState coherent_state(cxd alpha, const SpaceSpec& space);

// D(alpha) = exp(alpha a^dag - conj(alpha) a) (resonator-only).
QuantumOperator displacement(cxd alpha, const SpaceSpec& space);

// Photon parity (-1)^n (resonator-only, diagonal).
QuantumOperator parity_operator(const SpaceSpec& space);

// exp(-i H t) for Hermitian H via eigendecomposition.
Mat expm_hermitian_propagator(const Mat& h, double t);

// exp(M) for a general square matrix (scaling and squaring).
Mat expm(const Mat& m);

}  // namespace qrsim
