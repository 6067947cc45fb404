"""Dissipative three-oscillator chain with quadratic driving on the middle mode.

Closed-form eigenstructure, exceptional-point location, steady-state second
moments, two-time correlations, and optical spectra — each paired with an
independent numeric route (dense eigensolver, moment ODEs, half-line Fourier
quadrature, truncated-Fock master-equation integration) so every formula in
the package is cross-validated.
"""

from __future__ import annotations

from . import errors
from ._kernels import KERNEL_KIND
from .eigen import (
    EigenSet,
    EPRecord,
    SweepTrace,
    coalescence_measure,
    detect_ep,
    eig,
    evolve_first_moments,
    sweep_eigenvalues,
)
from .errors import (
    CutoffSaturationError,
    InsufficientDecayError,
    NearEPSingularityError,
    NoSteadyStateError,
    NotDoubletError,
    SingularBeyondDarkSectorError,
    TrimerError,
)
from .fock import (
    DensityOperator,
    FockConfig,
    evolve_rho,
    moment_derivative_check,
    random_core_state,
    moment_expectations,
    oracle_g1,
    steady_state_rho,
    vacuum_state,
)
from .model import (
    BASIS_LABELS,
    ChainParams,
    DerivedScalars,
    DynMatrix,
    EPDriveStrengths,
    analytic_eigenvalues,
    build_dyn_matrix,
    critical_drive,
    derived_scalars,
    ep_drive_strengths,
)
from .moments import (
    MONOMIAL_LABELS,
    MomentState,
    MomentSystem,
    build_moment_system,
    closed_form_populations,
    solve_steady_state,
    steady_state,
)
from .spectra import (
    CorrelationTrace,
    CouplingEstimate,
    Peak,
    SpectrumTrace,
    default_omega_grid,
    default_tau_grid,
    estimate_coupling,
    find_peaks,
    g1_closed_form,
    g1_qrt,
    spectrum_closed_form,
    spectrum_ep,
    spectrum_ep_factored,
    spectrum_fourier,
)

__version__ = "0.1.0"

__all__ = [
    "BASIS_LABELS",
    "ChainParams",
    "CorrelationTrace",
    "CouplingEstimate",
    "CutoffSaturationError",
    "DensityOperator",
    "DerivedScalars",
    "DynMatrix",
    "EPDriveStrengths",
    "EPRecord",
    "EigenSet",
    "FockConfig",
    "InsufficientDecayError",
    "KERNEL_KIND",
    "MONOMIAL_LABELS",
    "MomentState",
    "MomentSystem",
    "NearEPSingularityError",
    "NoSteadyStateError",
    "NotDoubletError",
    "Peak",
    "SingularBeyondDarkSectorError",
    "SpectrumTrace",
    "SweepTrace",
    "TrimerError",
    "analytic_eigenvalues",
    "build_dyn_matrix",
    "build_moment_system",
    "closed_form_populations",
    "coalescence_measure",
    "critical_drive",
    "default_omega_grid",
    "default_tau_grid",
    "derived_scalars",
    "detect_ep",
    "eig",
    "ep_drive_strengths",
    "errors",
    "estimate_coupling",
    "evolve_first_moments",
    "evolve_rho",
    "find_peaks",
    "g1_closed_form",
    "g1_qrt",
    "moment_derivative_check",
    "random_core_state",
    "moment_expectations",
    "oracle_g1",
    "solve_steady_state",
    "spectrum_closed_form",
    "spectrum_ep",
    "spectrum_ep_factored",
    "spectrum_fourier",
    "steady_state",
    "steady_state_rho",
    "sweep_eigenvalues",
    "vacuum_state",
]
