"""Parameter types, dynamical matrix, and closed-form eigenvalue formulas.

The system is a chain of three bosonic oscillators A-B-C. The middle
oscillator B is lossy (dissipator rate 2*gamma) and driven quadratically
with strength omega_drive; A and C couple to B with strength j. First
moments Psi = (<a>,<b>,<c>,<a^+>,<b^+>,<c^+>)^T obey i dPsi/dt = H Psi
with the non-Hermitian 6x6 matrix built here.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, fields, replace

import numpy as np
from numpy.typing import NDArray

BASIS_LABELS = ("a", "b", "c", "a_dag", "b_dag", "c_dag")


@dataclass(frozen=True)
class ChainParams:
    """Physical parameters of the chain, all in units of gamma by convention.

    Parameters
    ----------
    gamma:
        Loss rate scale of oscillator B (> 0); the dissipator rate is 2*gamma.
    delta:
        Rotating-frame detuning of the driven oscillator B.
    j:
        Coupling strength between B and each outer oscillator (>= 0).
    omega_drive:
        Quadratic drive amplitude on B (>= 0); the Hamiltonian term is
        (omega_drive/2)(b^+b^+ + bb).
    delta_a, delta_c:
        Detunings of the outer oscillators; the closed-form results assume
        both are zero (outer modes resonant with the drive frame).
    """

    gamma: float = 1.0
    delta: float = 2.0
    j: float = 0.25
    omega_drive: float = 1.0
    delta_a: float = 0.0
    delta_c: float = 0.0

    def __post_init__(self) -> None:
        if not self.gamma > 0:
            raise ValueError(f"gamma must be positive, got {self.gamma}")
        if self.j < 0:
            raise ValueError(f"j must be non-negative, got {self.j}")
        if self.omega_drive < 0:
            raise ValueError(f"omega_drive must be non-negative, got {self.omega_drive}")
        if 2 * self.j**2 > self.gamma**2:
            # stated validity bound for the steady-state regime; not enforced
            warnings.warn(
                f"2*j^2 = {2 * self.j**2:.4g} exceeds gamma^2 = {self.gamma**2:.4g}; "
                "results outside the intended coupling regime",
                UserWarning,
                stacklevel=2,
            )

    @property
    def is_resonant_outer(self) -> bool:
        """True when the outer oscillators are resonant (delta_a = delta_c = 0)."""
        return self.delta_a == 0.0 and self.delta_c == 0.0

    def with_value(self, knob: str, value: float) -> "ChainParams":
        """Return a copy with one named parameter replaced."""
        valid = tuple(f.name for f in fields(self))
        if knob not in valid:
            raise ValueError(f"unknown parameter {knob!r}; expected one of {valid}")
        return replace(self, **{knob: value})


@dataclass(frozen=True)
class DerivedScalars:
    """Closed-form auxiliary scalars; all square roots on the principal branch."""

    pi_: complex        # sqrt(omega_drive^2 - delta^2)
    z: complex          # 8 j^2 - gamma^2 - pi_^2
    omega_minus: complex  # sqrt(z - 2 gamma pi_)
    omega_plus: complex   # sqrt(z + 2 gamma pi_)
    gamma_plus: complex   # gamma + pi_
    gamma_minus: complex  # gamma - pi_
    alpha_plus: complex   # gamma + i delta
    alpha_minus: complex  # gamma - i delta
    beta_plus: complex    # delta + i pi_
    beta_minus: complex   # delta - i pi_


def derived_scalars(params: ChainParams) -> DerivedScalars:
    """Evaluate the auxiliary scalars entering eigenvalues, g1, and spectra."""
    g, d, jj, om = params.gamma, params.delta, params.j, params.omega_drive
    pi_ = np.sqrt(complex(om**2 - d**2))
    z = 8 * jj**2 - g**2 - pi_**2
    return DerivedScalars(
        pi_=pi_,
        z=z,
        omega_minus=np.sqrt(z - 2 * g * pi_ + 0j),
        omega_plus=np.sqrt(z + 2 * g * pi_ + 0j),
        gamma_plus=g + pi_,
        gamma_minus=g - pi_,
        alpha_plus=g + 1j * d,
        alpha_minus=g - 1j * d,
        beta_plus=d + 1j * pi_,
        beta_minus=d - 1j * pi_,
    )


@dataclass(frozen=True)
class DynMatrix:
    """First-moment dynamical matrix with its basis ordering and parameters."""

    entries: NDArray[np.complex128]
    basis_order: tuple[str, ...]
    params: ChainParams


def build_dyn_matrix(params: ChainParams) -> DynMatrix:
    """Build the 6x6 matrix H governing i dPsi/dt = H Psi.

    The b rows carry the loss -i*gamma on the diagonal and the anomalous
    drive coupling +/- omega_drive between <b> and <b^+>; the outer rows
    carry only the j couplings plus their detunings.
    """
    g, d, jj, om = params.gamma, params.delta, params.j, params.omega_drive
    da, dc = params.delta_a, params.delta_c
    h = np.array(
        [
            [da, jj, 0, 0, 0, 0],
            [jj, d - 1j * g, jj, 0, om, 0],
            [0, jj, dc, 0, 0, 0],
            [0, 0, 0, -da, -jj, 0],
            [0, -om, 0, -jj, -d - 1j * g, -jj],
            [0, 0, 0, 0, -jj, -dc],
        ],
        dtype=np.complex128,
    )
    return DynMatrix(entries=h, basis_order=BASIS_LABELS, params=params)


def _require_resonant_outer(params: ChainParams, what: str) -> None:
    if not params.is_resonant_outer:
        raise ValueError(
            f"{what} requires delta_a = delta_c = 0 (got delta_a={params.delta_a}, "
            f"delta_c={params.delta_c})"
        )


def analytic_eigenvalues(params: ChainParams) -> NDArray[np.complex128]:
    """Closed-form eigenvalues of the dynamical matrix.

    Returns the six values {0, 0, (-(i)(gamma+pi) +/- omega_minus)/2,
    (-(i)(gamma-pi) +/- omega_plus)/2}; as a multiset they equal the
    numeric spectrum of build_dyn_matrix (tested property). Only valid
    for resonant outer oscillators.
    """
    _require_resonant_outer(params, "analytic_eigenvalues")
    s = derived_scalars(params)
    g = params.gamma
    lam34 = 0.5 * (-1j * (g + s.pi_) + np.array([1, -1]) * s.omega_minus)
    lam56 = 0.5 * (-1j * (g - s.pi_) + np.array([1, -1]) * s.omega_plus)
    return np.concatenate([[0.0 + 0.0j, 0.0 + 0.0j], lam34, lam56])


@dataclass(frozen=True)
class EPDriveStrengths:
    """Drive amplitudes at which eigenvector coalescence occurs."""

    ep1: float       # = delta, independent of j and gamma
    ep_plus: float   # sqrt(delta^2 + (gamma + 2 sqrt2 j)^2)
    ep_minus: float  # sqrt(delta^2 + (gamma - 2 sqrt2 j)^2)


def ep_drive_strengths(params: ChainParams) -> EPDriveStrengths:
    """Closed-form EP drive strengths for the resonant-outer regime."""
    _require_resonant_outer(params, "ep_drive_strengths")
    g, d, jj = params.gamma, params.delta, params.j
    root8 = 2 * np.sqrt(2.0)
    return EPDriveStrengths(
        ep1=d,
        ep_plus=float(np.sqrt(d**2 + (g + root8 * jj) ** 2)),
        ep_minus=float(np.sqrt(d**2 + (g - root8 * jj) ** 2)),
    )


def critical_drive(params: ChainParams) -> float:
    """Drive threshold sqrt(gamma^2 + delta^2); at or above it no steady state exists."""
    return float(np.hypot(params.gamma, params.delta))
