"""Digital quantum Rabi simulation toolkit.

Python face of the C++ core: closed-form degenerate-regime observables,
phase-controlled Trotter sequences, Wigner tomography with maximum-likelihood
reconstruction, flux predistortion kernels, and exchange chevrons.
"""

from qrsim._core import (
    __version__,
    build_rabi,
    coherent_state,
    degenerate_oracle,
    exact_trace,
    find_compensation_phase,
    fit_step_form,
    invert_kernel,
    jc_reference_period,
    mle_reconstruct,
    parametric_step,
    parity_trace,
    run_chevron,
    trotter_step,
    wigner_point,
)

__all__ = [
    "__version__",
    "build_rabi",
    "coherent_state",
    "degenerate_oracle",
    "exact_trace",
    "find_compensation_phase",
    "fit_step_form",
    "invert_kernel",
    "jc_reference_period",
    "mle_reconstruct",
    "parametric_step",
    "parity_trace",
    "run_chevron",
    "trotter_step",
    "wigner_point",
]
