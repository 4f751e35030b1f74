// Tests for the exact, Trotterized and Lindblad evolution engines.
#include <doctest.h>

#include <qrsim/dynamics.hpp>
#include <qrsim/measure.hpp>
#include <qrsim/models.hpp>
#include <qrsim/operators.hpp>

#include "test_helpers.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

using namespace qrsim;
using namespace qrsim::test;

namespace {

QuantumState excited_vacuum(const SpaceSpec& sp) {
    Vec v = Vec::Zero(sp.dim_total());
    v(sp.dim_res()) = 1.0;
    return QuantumState(sp, Support::joint, v);
}

QuantumState fock_density(int n, const SpaceSpec& sp) {
    Mat rho = Mat::Zero(sp.dim_res(), sp.dim_res());
    rho(n, n) = 1.0;
    return QuantumState(sp, Support::resonator, rho);
}

}  // namespace

TEST_SUITE("dynamics") {

TEST_CASE("exact evolution reproduces the degenerate oracle") {
    RabiParams p{1.79, 1.79, 0.0, 0.0};
    SpaceSpec sp{26};
    QuantumState psi0 = excited_vacuum(sp);
    QuantumOperator h = build_rabi(p, sp);
    std::vector<double> times = linspace(0.0, 1.0 / 1.79, 21);
    Trajectory traj = evolve_unitary(h, psi0, times);
    REQUIRE(traj.states.size() == times.size());
    for (size_t k = 0; k < times.size(); ++k) {
        auto oracle = degenerate_oracle(p, times[k]);
        CHECK(std::abs(mean_photon(traj.states[k]) - oracle.mean_n) < 1e-3);
        CHECK(std::abs(photon_parity(traj.states[k]) - oracle.photon_parity) < 1e-3);
        CHECK(std::abs(qubit_parity(traj.states[k]) - oracle.qubit_parity) < 1e-3);
    }
}

TEST_CASE("exact evolution requires sorted times and hermitian generator") {
    SpaceSpec sp{4};
    QuantumState psi0 = excited_vacuum(sp);
    QuantumOperator h = build_jc(1.0, 0.0, 0.0, sp);
    CHECK_THROWS_AS(evolve_unitary(h, psi0, {0.2, 0.1}), std::invalid_argument);
}

TEST_CASE("trotter trajectory sampling") {
    SpaceSpec sp{10};
    TrotterPlan plan = plan_for_targets(1.95, 3.9, 0.0, 0.020, 12, 2);
    QuantumState psi0 = excited_vacuum(sp);
    Trajectory traj = evolve_trotter(plan, psi0, sp);
    REQUIRE(traj.times.size() == 13);
    for (int k = 0; k <= 12; ++k) CHECK(traj.times[k] == doctest::Approx(0.020 * k));

    // Stride 5 keeps t = 0, 5 tau, 10 tau and the final step.
    TrotterRunOptions opts;
    opts.sample_stride = 5;
    Trajectory strided = evolve_trotter(plan, psi0, sp, opts);
    REQUIRE(strided.times.size() == 4);
    CHECK(strided.times[1] == doctest::Approx(0.100));
    CHECK(strided.times[3] == doctest::Approx(0.240));
    CHECK((strided.states[3].vector() - traj.states[12].vector()).norm() < 1e-12);
}

TEST_CASE("lindblad with no decay matches unitary evolution") {
    SpaceSpec sp{8};
    RabiParams p{1.5, 1.5, 0.3, 0.0};
    QuantumOperator h = build_rabi(p, sp);
    QuantumState psi0 = excited_vacuum(sp);
    std::vector<std::pair<QuantumOperator, double>> segs;
    for (int i = 0; i < 5; ++i) segs.push_back({h, 0.04});
    double t1 = std::numeric_limits<double>::infinity();
    Trajectory lind = evolve_lindblad(segs, psi0, t1);
    std::vector<double> times = lind.times;
    Trajectory exact = evolve_unitary(h, psi0, times);
    for (size_t k = 0; k < times.size(); ++k) {
        Mat rho_exact = exact.states[k].density();
        CHECK(max_abs_diff(lind.states[k].density(), rho_exact) < 1e-8);
    }
}

TEST_CASE("free decay of a fock state follows the exponential law") {
    SpaceSpec sp{4};
    double t1 = 3.5;
    Mat qubit_ground = Mat::Zero(2, 2);
    qubit_ground(0, 0) = 1.0;
    QuantumState rho0(sp, Support::joint,
                      embed(qubit_ground, fock_density(1, sp).density()));
    QuantumOperator h_zero(sp, Support::joint,
                           Mat::Zero(sp.dim_total(), sp.dim_total()), true);
    std::vector<std::pair<QuantumOperator, double>> segs;
    for (int i = 0; i < 10; ++i) segs.push_back({h_zero, 0.2});
    Trajectory traj = evolve_lindblad(segs, rho0, t1);
    for (size_t k = 0; k < traj.times.size(); ++k) {
        double want = std::exp(-traj.times[k] / t1);
        CHECK(std::abs(mean_photon(traj.states[k]) - want) < 1e-8);
    }
}

TEST_CASE("coherent states stay pure under decay") {
    SpaceSpec sp{14};
    double t1 = 2.0;
    Vec coh = coherent_state(cxd(1.2, 0.0), sp).vector();
    Vec joint = Vec::Zero(sp.dim_total());
    joint.head(sp.dim_res()) = coh;
    QuantumState rho0(sp, Support::joint, joint);
    QuantumOperator h_zero(sp, Support::joint,
                           Mat::Zero(sp.dim_total(), sp.dim_total()), true);
    std::vector<std::pair<QuantumOperator, double>> segs{{h_zero, 0.3}, {h_zero, 0.3}};
    Trajectory traj = evolve_lindblad(segs, rho0, t1);
    for (size_t k = 1; k < traj.times.size(); ++k) {
        Mat rho_res = reduced_resonator(traj.states[k]);
        double purity = (rho_res * rho_res).trace().real();
        CHECK(purity == doctest::Approx(1.0).epsilon(1e-6));
        // Amplitude shrinks as exp(-t / 2 T1).
        double want = 1.44 * std::exp(-traj.times[k] / t1);
        CHECK(mean_photon(traj.states[k]) == doctest::Approx(want).epsilon(1e-6));
    }
}

TEST_CASE("dense and rk4 lindblad integrators agree") {
    SpaceSpec sp{6};  // dim_total 14: dense path fits the default budget
    RabiParams p{1.79, 1.79, 0.0, 0.0};
    QuantumOperator h = build_rabi(p, sp);
    QuantumState rho0 = excited_vacuum(sp);
    std::vector<std::pair<QuantumOperator, double>> segs;
    for (int i = 0; i < 6; ++i) segs.push_back({h, 0.05});
    LindbladOptions dense, rk4;
    dense.superop_budget = 32;
    rk4.superop_budget = 0;  // force the integrator path
    Trajectory a = evolve_lindblad(segs, rho0, 3.5, dense);
    Trajectory b = evolve_lindblad(segs, rho0, 3.5, rk4);
    for (size_t k = 0; k < a.times.size(); ++k) {
        CHECK(max_abs_diff(a.states[k].density(), b.states[k].density()) < 1e-6);
    }
}

TEST_CASE("lindblad preserves trace and positivity") {
    SpaceSpec sp{10};
    RabiParams p{1.95, 1.95, 0.0, 0.0};
    QuantumOperator h = build_rabi(p, sp);
    QuantumState rho0 = excited_vacuum(sp);
    std::vector<std::pair<QuantumOperator, double>> segs;
    for (int i = 0; i < 8; ++i) segs.push_back({h, 0.05});
    Trajectory traj = evolve_lindblad(segs, rho0, 1.0);
    for (const auto& st : traj.states) {
        Mat rho = st.density();
        CHECK(std::abs(rho.trace().real() - 1.0) < 1e-8);
        Eigen::SelfAdjointEigenSolver<Mat> es(rho, Eigen::EigenvaluesOnly);
        CHECK(es.eigenvalues().minCoeff() > -1e-7);
    }
}

TEST_CASE("trotter evolution with infinite t1 matches the pure-state engine") {
    SpaceSpec sp{12};
    TrotterPlan plan = plan_for_targets(1.79, 1.79, 0.0, 0.020, 15, 2);
    QuantumState psi0 = excited_vacuum(sp);
    Trajectory pure = evolve_trotter(plan, psi0, sp);
    double inf = std::numeric_limits<double>::infinity();
    Trajectory lind = evolve_lindblad_trotter(plan, psi0, inf, sp);
    REQUIRE(pure.times.size() == lind.times.size());
    for (size_t k = 0; k < pure.times.size(); ++k) {
        CHECK(max_abs_diff(lind.states[k].density(), pure.states[k].density()) < 1e-9);
    }
}

TEST_CASE("decay clock runs at twice the simulated time") {
    // With resonator decay the Trotter run loses photons according to the
    // 2 tau lab duration of each step, so it decays faster than a plain
    // Lindblad run over the simulated duration.
    SpaceSpec sp{14};
    TrotterPlan plan = plan_for_targets(1.79, 1.79, 0.0, 0.020, 14, 2);
    QuantumState psi0 = excited_vacuum(sp);
    double t1 = 3.5;
    Trajectory noisy = evolve_lindblad_trotter(plan, psi0, t1, sp);
    Trajectory ideal = evolve_trotter(plan, psi0, sp);
    // Half period of the r = 1 orbit: the ideal run peaks near 4 photons.
    size_t k = noisy.times.size() - 1;
    double n_ideal = mean_photon(ideal.states[k]);
    double n_noisy = mean_photon(noisy.states[k]);
    CHECK(n_ideal > 3.5);
    CHECK(n_noisy < n_ideal);
    // Crude decay budget: loss should be at least the single-tau estimate.
    CHECK(n_noisy < n_ideal * std::exp(-noisy.times[k] / t1) + 0.4);
}

TEST_CASE("decay kick variant stays close to continuous decay") {
    SpaceSpec sp{14};
    TrotterPlan plan = plan_for_targets(1.79, 1.79, 0.0, 0.020, 10, 2);
    QuantumState psi0 = excited_vacuum(sp);
    LindbladOptions during, kick;
    during.decay_during_segments = true;
    kick.decay_during_segments = false;
    Trajectory a = evolve_lindblad_trotter(plan, psi0, 3.5, sp, during);
    Trajectory b = evolve_lindblad_trotter(plan, psi0, 3.5, sp, kick);
    for (size_t k = 0; k < a.times.size(); ++k) {
        CHECK(std::abs(photon_parity(a.states[k]) - photon_parity(b.states[k])) < 0.05);
        CHECK(std::abs(mean_photon(a.states[k]) - mean_photon(b.states[k])) < 0.2);
    }
}

}  // TEST_SUITE
