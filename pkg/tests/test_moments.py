"""Second-moment system derivation and steady-state solve tests."""

from __future__ import annotations

import numpy as np
import pytest

from trimerep import (
    ChainParams,
    NoSteadyStateError,
    SingularBeyondDarkSectorError,
    analytic_eigenvalues,
    build_moment_system,
    closed_form_populations,
    moment_derivative_check,
    random_core_state,
    solve_steady_state,
)
from trimerep.moments import MONOMIAL_LABELS, MONOMIALS


def test_monomial_catalogue_shape() -> None:
    assert len(MONOMIALS) == 21
    assert len(MONOMIAL_LABELS) == 21
    normal = [m for m in MONOMIALS if len(m[0]) == 1 and len(m[1]) == 1]
    anomalous = [m for m in MONOMIALS if len(m[0]) == 0]
    conjugate = [m for m in MONOMIALS if len(m[1]) == 0]
    assert (len(normal), len(anomalous), len(conjugate)) == (9, 6, 6)


def test_moment_matrix_spectrum_is_pairwise_sums() -> None:
    """The 21x21 generator's spectrum is every pairwise sum of first-moment rates."""
    p = ChainParams(gamma=1.0, delta=2.0, j=0.25, omega_drive=1.0)
    system = build_moment_system(p)
    mu = -1j * analytic_eigenvalues(p)
    expected = np.array([mu[i] + mu[k] for i in range(6) for k in range(i, 6)])
    numeric = np.linalg.eigvals(system.system_matrix)
    remaining = list(numeric)
    worst = 0.0
    for lam in expected:
        gaps = [abs(lam - r) for r in remaining]
        idx = int(np.argmin(gaps))
        worst = max(worst, gaps[idx])
        remaining.pop(idx)
    assert worst < 1e-10


@pytest.mark.parametrize("j,expected_null", [(0.25, 3), (0.5, 3), (0.0, 10)])
def test_conserved_sector_count(j: float, expected_null: int) -> None:
    p = ChainParams(gamma=1.0, delta=2.0, j=j, omega_drive=1.0)
    assert build_moment_system(p).nullspace_dim == expected_null


def test_derivative_identity_against_master_equation_kernel() -> None:
    """A m + d reproduces the exact kernel derivative at an edge-free state."""
    p = ChainParams(gamma=1.0, delta=2.0, j=0.25, omega_drive=1.0)
    rho = random_core_state((6, 8, 6), seed=2)
    assert moment_derivative_check(p, rho) < 1e-8


def test_steady_state_matches_closed_forms() -> None:
    p = ChainParams(gamma=1.0, delta=2.0, j=0.25, omega_drive=1.0)
    state = solve_steady_state(p)
    forms = closed_form_populations(p)
    assert state.population("b") == pytest.approx(forms["n_b"].real, rel=1e-12)
    assert state.population("a") == pytest.approx(forms["n_a"].real, rel=1e-12)
    assert state.population("c") == pytest.approx(forms["n_c"].real, rel=1e-12)
    assert state.anomalous_moment(1, 1) == pytest.approx(
        np.conj(forms["bdag_bdag"]), rel=1e-12
    )


def test_steady_state_cross_moments_vanish_on_resonance() -> None:
    """Hopping correlations between B and the outer modes are zero at steady state."""
    p = ChainParams(gamma=1.0, delta=2.0, j=0.25, omega_drive=1.0)
    state = solve_steady_state(p)
    assert abs(state.normal_moment(1, 0)) < 1e-12
    assert abs(state.normal_moment(1, 2)) < 1e-12
    assert abs(state.anomalous_moment(0, 1)) < 1e-12
    assert abs(state.anomalous_moment(1, 2)) < 1e-12


def test_populations_independent_of_coupling() -> None:
    values = []
    for j in (0.1, 0.25, 0.4, 0.55, 0.7):
        p = ChainParams(gamma=1.0, delta=2.0, j=j, omega_drive=1.0)
        state = solve_steady_state(p)
        values.append((state.population("a"), state.population("b")))
    arr = np.array(values)
    assert np.ptp(arr, axis=0).max() < 1e-12


def test_decoupled_outer_modes_stay_empty() -> None:
    """At zero coupling the A/C moments are conserved, so the reachable state has none."""
    p = ChainParams(gamma=1.0, delta=2.0, j=0.0, omega_drive=1.0)
    state = solve_steady_state(p)
    forms = closed_form_populations(p)
    assert state.population("a") == 0.0
    assert state.population("c") == 0.0
    assert state.population("b") == pytest.approx(forms["n_b"].real, rel=1e-12)


def test_no_steady_state_at_or_above_threshold() -> None:
    crit = np.hypot(1.0, 2.0)
    for omega in (crit, 1.05 * crit):
        p = ChainParams(gamma=1.0, delta=2.0, j=0.25, omega_drive=omega)
        with pytest.raises(NoSteadyStateError):
            solve_steady_state(p)
    with pytest.raises(NoSteadyStateError):
        closed_form_populations(ChainParams(gamma=1.0, delta=2.0, omega_drive=crit))


def test_undriven_steady_state_is_vacuum() -> None:
    p = ChainParams(gamma=1.0, delta=2.0, j=0.25, omega_drive=0.0)
    state = solve_steady_state(p)
    assert np.max(np.abs(state.vector)) == 0.0


def test_detuned_outer_modes_solve_consistently() -> None:
    """Away from outer resonance the solve must satisfy the linear system directly."""
    p = ChainParams(
        gamma=1.0, delta=2.0, j=0.25, omega_drive=1.0, delta_a=0.3, delta_c=-0.2
    )
    system = build_moment_system(p)
    state = solve_steady_state(p)
    residual = system.system_matrix @ state.vector + system.drive_vector
    assert np.max(np.abs(residual)) < 1e-10 * np.max(np.abs(system.drive_vector))


def test_dark_sector_overflow_detected() -> None:
    """A singular system beyond the catalogued conserved sector must not be solved."""
    from trimerep.moments import steady_state

    p = ChainParams(gamma=1.0, delta=2.0, j=0.0, omega_drive=1.0)
    assert build_moment_system(p).nullspace_dim == 10  # catalogued, solvable
    good = build_moment_system(ChainParams(gamma=1.0, delta=2.0, j=0.25, omega_drive=1.0))
    inflated = type(good)(
        system_matrix=np.zeros_like(good.system_matrix),
        drive_vector=good.drive_vector,
        labels=good.labels,
        nullspace_dim=21,
        params=good.params,
    )
    with pytest.raises(SingularBeyondDarkSectorError):
        steady_state(inflated, good.params)
