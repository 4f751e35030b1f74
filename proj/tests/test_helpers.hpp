// Shared helpers for the unit test suites.
#pragma once

#include <qrsim/space.hpp>

#include <cmath>
#include <random>
#include <vector>

namespace qrsim::test {

inline double max_abs(const Mat& m) {
    return m.cwiseAbs().maxCoeff();
}

inline double max_abs_diff(const Mat& a, const Mat& b) {
    return (a - b).cwiseAbs().maxCoeff();
}

// Deterministic pseudo-random Hermitian matrix with entries O(1).
inline Mat random_hermitian(int dim, unsigned seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    Mat m(dim, dim);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j)
            m(i, j) = cxd(u(rng), u(rng));
    return 0.5 * (m + m.adjoint().eval());
}

// Deterministic random density matrix (positive, unit trace).
inline Mat random_density(int dim, unsigned seed) {
    Mat h = random_hermitian(dim, seed);
    Mat rho = h * h.adjoint();
    rho /= rho.trace().real();
    return 0.5 * (rho + rho.adjoint().eval());
}

inline double fidelity_pure(const Vec& psi, const Mat& rho) {
    return (psi.adjoint() * rho * psi)(0, 0).real();
}

inline double trace_distance(const Mat& a, const Mat& b) {
    Eigen::SelfAdjointEigenSolver<Mat> es(a - b);
    return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

inline std::vector<double> linspace(double lo, double hi, int n) {
    std::vector<double> out(n);
    for (int i = 0; i < n; ++i)
        out[i] = (n == 1) ? lo : lo + (hi - lo) * i / (n - 1);
    return out;
}

}  // namespace qrsim::test
