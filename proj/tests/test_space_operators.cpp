// Tests for the Hilbert-space scaffolding and elementary operators.
#include <doctest.h>

#include <qrsim/operators.hpp>
#include <qrsim/space.hpp>

#include "test_helpers.hpp"

#include <cmath>
#include <stdexcept>

using namespace qrsim;
using namespace qrsim::test;

TEST_SUITE("space_operators") {

TEST_CASE("space spec dimensions and validation") {
    SpaceSpec sp{10};
    CHECK(sp.dim_res() == 11);
    CHECK(sp.dim_total() == 22);
    CHECK_THROWS_AS(SpaceSpec{0}.validate(), std::invalid_argument);
    CHECK_THROWS_AS(SpaceSpec{-3}.validate(), std::invalid_argument);
}

TEST_CASE("annihilation operator matrix elements") {
    SpaceSpec sp{6};
    Mat a = annihilation(sp).entries;
    for (int n = 1; n <= sp.n_max; ++n) {
        CHECK(std::abs(a(n - 1, n) - std::sqrt(double(n))) < 1e-15);
    }
    // [a, a+] = I away from the truncation edge.
    Mat comm = a * a.adjoint() - a.adjoint() * a;
    Mat eye = Mat::Identity(sp.dim_res(), sp.dim_res());
    CHECK(max_abs_diff(comm.topLeftCorner(sp.n_max, sp.n_max),
                       eye.topLeftCorner(sp.n_max, sp.n_max)) < 1e-12);
}

TEST_CASE("pauli operators and algebra") {
    Mat sz = pauli(Pauli::z).entries;
    Mat sx = pauli(Pauli::x).entries;
    Mat sy = pauli(Pauli::y).entries;
    Mat sp = pauli(Pauli::plus).entries;
    CHECK(sz(0, 0) == cxd(1, 0));
    CHECK(sz(1, 1) == cxd(-1, 0));
    // sigma_+ maps the ground state (index 0) to the excited state (index 1).
    CHECK(sp(1, 0) == cxd(1, 0));
    CHECK(sp(0, 1) == cxd(0, 0));
    CHECK(max_abs_diff(sx * sy, cxd(0, 1) * sz) < 1e-15);
    // With sigma_z = +1 on the ground state, the excitation raiser is (x - iy)/2.
    CHECK(max_abs_diff(sp, 0.5 * (sx - cxd(0, 1) * sy)) < 1e-15);
    CHECK(max_abs_diff(pauli(Pauli::minus).entries, sp.adjoint()) < 1e-15);
}

TEST_CASE("embed uses qubit-first ordering") {
    SpaceSpec sp{3};
    Mat a = annihilation(sp).entries;
    Mat n_op = (a.adjoint() * a).eval();
    Mat joint = embed(pauli(Pauli::z).entries, n_op);
    REQUIRE(joint.rows() == sp.dim_total());
    // Qubit index is the slow index, resonator index the fast one.
    for (int n = 0; n <= sp.n_max; ++n) {
        CHECK(std::abs(joint(n, n) - cxd(n, 0)) < 1e-15);
        CHECK(std::abs(joint(sp.dim_res() + n, sp.dim_res() + n) - cxd(-n, 0)) < 1e-15);
    }
}

TEST_CASE("operator container flags non-hermitian input") {
    SpaceSpec sp{2};
    Mat m = Mat::Zero(sp.dim_total(), sp.dim_total());
    m(0, 1) = cxd(1, 0);  // not Hermitian
    CHECK_THROWS_AS(QuantumOperator(sp, Support::joint, m, true), std::invalid_argument);
    m(1, 0) = cxd(1, 0);
    CHECK_NOTHROW(QuantumOperator(sp, Support::joint, m, true));
    // Wrong dimension is rejected too.
    CHECK_THROWS_AS(QuantumOperator(sp, Support::resonator, m, false), std::invalid_argument);
}

TEST_CASE("state container validation") {
    SpaceSpec sp{2};
    Vec v = Vec::Zero(sp.dim_total());
    v(0) = cxd(0.5, 0);  // not normalized
    CHECK_THROWS_AS(QuantumState(sp, Support::joint, v), std::invalid_argument);
    v(0) = cxd(1, 0);
    CHECK_NOTHROW(QuantumState(sp, Support::joint, v));

    Mat rho = Mat::Zero(sp.dim_res(), sp.dim_res());
    rho(0, 0) = cxd(2, 0);  // trace 2
    CHECK_THROWS_AS(QuantumState(sp, Support::resonator, rho), std::invalid_argument);
    rho(0, 0) = cxd(1, 0);
    QuantumState st(sp, Support::resonator, rho);
    CHECK(st.density()(0, 0) == cxd(1, 0));
}

TEST_CASE("coherent state amplitudes are poissonian") {
    SpaceSpec sp{30};
    cxd alpha(0.8, -0.4);
    Vec c = coherent_state(alpha, sp).vector();
    double a2 = std::norm(alpha);
    double fact = 1.0;
    for (int n = 0; n <= 6; ++n) {
        if (n > 0) fact *= n;
        cxd cn = std::exp(-a2 / 2.0) * std::pow(alpha, n) / std::sqrt(fact);
        CHECK(std::abs(c(n) - cn) < 1e-12);
    }
    double mean = 0.0;
    for (int n = 0; n <= sp.n_max; ++n) mean += n * std::norm(c(n));
    CHECK(mean == doctest::Approx(a2).epsilon(1e-9));
}

TEST_CASE("coherent state rejects truncation overflow") {
    SpaceSpec sp{6};
    CHECK_THROWS_AS(coherent_state(cxd(3.0, 0.0), sp), std::invalid_argument);
}

TEST_CASE("displacement operator generates coherent states") {
    SpaceSpec sp{30};
    cxd alpha(1.0, 0.3);
    Mat d = displacement(alpha, sp).entries;
    Vec vac = Vec::Zero(sp.dim_res());
    vac(0) = 1.0;
    Vec disp = d * vac;
    Vec coh = coherent_state(alpha, sp).vector();
    CHECK((disp - coh).cwiseAbs().maxCoeff() < 1e-10);
    // D(a) D(-a) = I
    Mat prod = d * displacement(-alpha, sp).entries;
    CHECK(max_abs_diff(prod, Mat::Identity(sp.dim_res(), sp.dim_res())) < 1e-10);
}

TEST_CASE("parity operator alternates sign and anticommutes with a") {
    SpaceSpec sp{8};
    Mat pi_op = parity_operator(sp).entries;
    for (int n = 0; n <= sp.n_max; ++n) {
        CHECK(pi_op(n, n) == cxd((n % 2 == 0) ? 1 : -1, 0));
    }
    Mat a = annihilation(sp).entries;
    CHECK(max_abs(pi_op * a + a * pi_op) < 1e-15);
}

TEST_CASE("hermitian propagator agrees with the generic exponential") {
    int dim = 12;
    Mat h = random_hermitian(dim, 42);
    Mat u1 = expm_hermitian_propagator(h, 0.37);
    Mat u2 = expm((cxd(0, -0.37) * h).eval());
    CHECK(max_abs_diff(u1, u2) < 1e-11);
    CHECK(max_abs_diff(u1 * u1.adjoint(), Mat::Identity(dim, dim)) < 1e-12);
}

}  // TEST_SUITE
