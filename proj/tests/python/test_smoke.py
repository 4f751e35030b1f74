# Smoke tests for the Python face of the C++ core: each binding is called
# once and checked against a cheap closed-form or cross-module reference.
import math

import numpy as np
import pytest

import qrsim


def test_version_string():
    assert qrsim.__version__ == "1.0.0"


def test_degenerate_oracle_landmarks():
    g, omega = 1.79, 1.79  # r = 1
    start = qrsim.degenerate_oracle(g, omega, 0.0)
    assert start["photon_parity"] == pytest.approx(1.0)
    assert start["qubit_parity"] == pytest.approx(1.0)
    assert start["mean_n"] == pytest.approx(0.0)

    half = qrsim.degenerate_oracle(g, omega, 0.5 / omega)
    assert half["mean_n"] == pytest.approx(4.0, abs=1e-9)  # 4 r^2 at the peak

    revival = qrsim.degenerate_oracle(g, omega, 1.0 / omega)
    assert revival["photon_parity"] == pytest.approx(1.0, abs=1e-9)


def test_exact_trace_matches_oracle():
    g, omega = 1.79, 3.58  # r = 0.5
    times = np.linspace(0.0, 1.0 / omega, 21)
    trace = qrsim.exact_trace(g, omega, times=list(times), n_max=14)
    for k, t in enumerate(times):
        ref = qrsim.degenerate_oracle(g, omega, t)
        assert trace["photon_parity"][k] == pytest.approx(ref["photon_parity"], abs=1e-6)
        assert trace["qubit_parity"][k] == pytest.approx(ref["qubit_parity"], abs=1e-6)
        assert trace["mean_photon"][k] == pytest.approx(ref["mean_n"], abs=1e-6)


def test_parity_trace_revival():
    g = 1.79
    trace = qrsim.parity_trace(g, g, n_steps=40, order=2, n_max=26)
    assert trace["times"][0] == 0.0
    assert len(trace["times"]) == 41
    # First revival of the r = 1 run sits at step 28 = 0.56 us.
    k = int(np.argmax(trace["photon_parity"][15:])) + 15
    assert trace["times"][k] == pytest.approx(0.56, abs=0.011)
    assert trace["photon_parity"][k] > 0.9
    assert np.max(trace["qubit_entropy_bits"]) > 0.5


def test_build_rabi_is_hermitian():
    h = qrsim.build_rabi(1.95, 1.95, n_max=6)
    assert h.shape == (14, 14)
    assert np.allclose(h, h.conj().T)


def test_trotter_step_is_unitary():
    u = qrsim.trotter_step(1.95, 0.975, 0.0, 0.020, 2, n_max=6)
    eye = np.eye(u.shape[0])
    assert np.allclose(u.conj().T @ u, eye, atol=1e-10)


def test_coherent_state_statistics():
    alpha = 1.2
    c = qrsim.coherent_state(alpha, 24)
    assert np.linalg.norm(c) == pytest.approx(1.0)
    pops = np.abs(c) ** 2
    nbar = alpha * alpha
    poisson = [math.exp(-nbar + n * math.log(nbar) - math.lgamma(n + 1)) for n in range(1, 5)]
    assert np.allclose(pops[1:5], poisson, atol=1e-9)


def test_wigner_point_vacuum():
    rho = np.zeros((17, 17), dtype=complex)
    rho[0, 0] = 1.0
    assert qrsim.wigner_point(rho, 0.0) == pytest.approx(2.0 / math.pi)
    expected = (2.0 / math.pi) * math.exp(-2.0)
    assert qrsim.wigner_point(rho, 1.0) == pytest.approx(expected, abs=1e-9)


def test_mle_reconstructs_vacuum():
    build = 28  # the +-1.8 grid corners need 4 |alpha|^2 < n_max_build
    rho = np.zeros((build + 1, build + 1), dtype=complex)
    rho[0, 0] = 1.0
    alphas = [complex(x, y) for x in np.linspace(-1.8, 1.8, 7) for y in np.linspace(-1.8, 1.8, 7)]
    values = [qrsim.wigner_point(rho, a) for a in alphas]
    rho_hat, info = qrsim.mle_reconstruct(alphas, values, n_max_build=build, n_max_trunc=6)
    assert rho_hat.shape == (7, 7)
    assert info["converged"]
    assert not info["rank_deficient_data"]
    assert rho_hat[0, 0].real > 0.99
    assert np.trace(rho_hat).real == pytest.approx(1.0, abs=1e-8)


def test_mle_rejects_out_of_range_values():
    alphas = [complex(x, 0.1 * i) for i, x in enumerate(np.linspace(-1, 1, 9))]
    values = [0.9] * 9  # beyond the 2/pi Wigner bound
    with pytest.raises(ValueError):
        qrsim.mle_reconstruct(alphas, values, n_max_build=16, n_max_trunc=2)


def test_predistortion_round_trip():
    dt, n = 10.0, 400
    distorted = np.array(qrsim.parametric_step("exp_approach", dt, n, alpha=0.015, tau=670.0))
    corrector = np.array(qrsim.invert_kernel(list(distorted), dt))
    impulse = np.diff(np.concatenate(([0.0], distorted)))
    corrected = np.convolve(impulse, corrector)[:n]
    assert np.max(np.abs(corrected - 1.0)) < 1e-9

    fit = qrsim.fit_step_form(list(distorted), dt, "exp_approach")
    assert fit["converged"]
    assert fit["alpha"] == pytest.approx(0.015, rel=0.01)
    assert fit["tau"] == pytest.approx(670.0, rel=0.01)


def test_chevron_resonance_and_compensation():
    g = 1.95
    period = qrsim.jc_reference_period(g, 0.0)
    assert period == pytest.approx(1.0 / (2.0 * g))

    times = [0.0, period / 4, period / 2]
    grid = qrsim.run_chevron("analog", g, [0.0], times)
    assert grid.shape == (1, 3)
    assert grid[0, 0] == pytest.approx(1.0)
    assert grid[0, 1] == pytest.approx(0.5, abs=1e-9)
    assert grid[0, 2] == pytest.approx(0.0, abs=1e-9)

    phi = qrsim.find_compensation_phase(g, 2.2)
    assert phi == pytest.approx(2.0 * math.pi - 2.2, abs=0.01)


def test_invalid_arguments_raise():
    with pytest.raises(ValueError):
        qrsim.parity_trace(-1.0, 1.0)
    with pytest.raises(ValueError):
        qrsim.run_chevron("sideways", 1.95, [0.0], [0.0, 0.1])
