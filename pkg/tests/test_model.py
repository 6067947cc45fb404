"""Parameter container, dynamical matrix, and closed-form eigenvalue tests."""

from __future__ import annotations

import numpy as np
import pytest

from trimerep import (
    BASIS_LABELS,
    ChainParams,
    analytic_eigenvalues,
    build_dyn_matrix,
    critical_drive,
    derived_scalars,
    ep_drive_strengths,
)


def test_default_params_are_valid() -> None:
    p = ChainParams()
    assert p.gamma == 1.0
    assert p.delta == 2.0
    assert p.j == 0.25
    assert p.omega_drive == 1.0
    assert p.delta_a == 0.0 and p.delta_c == 0.0


@pytest.mark.parametrize(
    "kwargs",
    [
        {"gamma": 0.0},
        {"gamma": -1.0},
        {"j": -0.1},
        {"omega_drive": -0.5},
    ],
)
def test_invalid_params_rejected(kwargs: dict) -> None:
    with pytest.raises(ValueError):
        ChainParams(**kwargs)


def test_strong_coupling_warns() -> None:
    with pytest.warns(UserWarning):
        ChainParams(gamma=1.0, j=0.9)


def test_with_value_replaces_single_knob() -> None:
    p = ChainParams(omega_drive=1.0)
    q = p.with_value("omega_drive", 1.5)
    assert q.omega_drive == 1.5
    assert q.delta == p.delta
    with pytest.raises(ValueError):
        p.with_value("nonexistent_knob", 1.0)


def test_matrix_matches_equations_of_motion() -> None:
    """Entry-by-entry check of the first-moment generator."""
    p = ChainParams(gamma=1.0, delta=2.0, j=0.25, omega_drive=1.0,
                    delta_a=0.3, delta_c=-0.4)
    m = build_dyn_matrix(p).entries
    g, d, j, om = p.gamma, p.delta, p.j, p.omega_drive
    expected = np.array(
        [
            [p.delta_a, j, 0, 0, 0, 0],
            [j, d - 1j * g, j, 0, om, 0],
            [0, j, p.delta_c, 0, 0, 0],
            [0, 0, 0, -p.delta_a, -j, 0],
            [0, -om, 0, -j, -d - 1j * g, -j],
            [0, 0, 0, 0, -j, -p.delta_c],
        ],
        dtype=complex,
    )
    assert np.array_equal(m, expected)
    assert build_dyn_matrix(p).basis_order == BASIS_LABELS


def test_matrix_particle_hole_symmetry() -> None:
    """The generator anticommutes with conjugation by the swap-and-conjugate map."""
    rng = np.random.default_rng(3)
    for _ in range(20):
        p = ChainParams(
            gamma=rng.uniform(0.2, 2.0),
            delta=rng.uniform(-2.0, 2.0),
            j=rng.uniform(0.0, 0.7),
            omega_drive=rng.uniform(0.0, 1.5),
            delta_a=rng.uniform(-1.0, 1.0),
            delta_c=rng.uniform(-1.0, 1.0),
        )
        m = build_dyn_matrix(p).entries
        swap = np.zeros((6, 6))
        swap[:3, 3:] = np.eye(3)
        swap[3:, :3] = np.eye(3)
        assert np.max(np.abs(m + swap @ m.conj() @ swap)) < 1e-14


def test_eigenvalue_formula_against_dense_solver() -> None:
    """Closed-form spectrum equals the numeric spectrum on random resonant sets."""
    rng = np.random.default_rng(11)
    worst = 0.0
    for _ in range(100):
        gamma = 1.0
        delta = rng.uniform(0.0, 3.0)
        j = rng.uniform(0.0, 0.7)
        omega = rng.uniform(0.0, 0.95 * np.hypot(gamma, delta))
        p = ChainParams(gamma=gamma, delta=delta, j=j, omega_drive=omega)
        numeric = np.linalg.eigvals(build_dyn_matrix(p).entries)
        formula = analytic_eigenvalues(p)
        remaining = list(numeric)
        for lam in formula:
            gaps = [abs(lam - r) for r in remaining]
            k = int(np.argmin(gaps))
            worst = max(worst, gaps[k])
            remaining.pop(k)
    assert worst < 1e-10


def test_eigenvalue_formula_requires_resonant_outer_modes() -> None:
    p = ChainParams(delta_a=0.1)
    with pytest.raises(ValueError):
        analytic_eigenvalues(p)


def test_zero_modes_always_present() -> None:
    lam = analytic_eigenvalues(ChainParams(gamma=1.0, delta=2.0, j=0.25, omega_drive=1.0))
    zeros = sum(1 for v in lam if abs(v) < 1e-14)
    assert zeros == 2


def test_derived_scalars_consistency() -> None:
    p = ChainParams(gamma=1.0, delta=2.0, j=0.5, omega_drive=2.0)
    s = derived_scalars(p)
    assert s.pi_ == pytest.approx(0.0)
    assert s.gamma_plus == pytest.approx(p.gamma + s.pi_)
    # branch frequencies satisfy their defining quadratics
    z = 8 * p.j**2 - p.gamma**2 - s.pi_**2
    assert s.omega_minus**2 == pytest.approx(z - 2 * p.gamma * s.pi_)
    assert s.omega_plus**2 == pytest.approx(z + 2 * p.gamma * s.pi_)


def test_ep_drive_strengths_values() -> None:
    """Coalescence drives for gamma=1, delta=2: one at the detuning, two shifted by J."""
    at_quarter = ep_drive_strengths(ChainParams(gamma=1.0, delta=2.0, j=0.25))
    assert at_quarter.ep1 == pytest.approx(2.0, abs=1e-12)
    assert at_quarter.ep_minus == pytest.approx(2.0213328369, abs=1e-9)
    at_half = ep_drive_strengths(ChainParams(gamma=1.0, delta=2.0, j=0.5))
    assert at_half.ep_minus == pytest.approx(2.0424428695, abs=1e-9)
    assert at_half.ep_plus == pytest.approx(3.1350322366, abs=1e-9)


def test_ep_drives_are_actual_degeneracies() -> None:
    """At each predicted drive, the spectrum has a (numerically) repeated eigenvalue."""
    p = ChainParams(gamma=1.0, delta=2.0, j=0.5)
    drives = ep_drive_strengths(p)
    for omega in (drives.ep1, drives.ep_plus, drives.ep_minus):
        lam = np.linalg.eigvals(build_dyn_matrix(p.with_value("omega_drive", omega)).entries)
        lam = lam[np.abs(lam) > 1e-8]  # ignore the permanent zero pair
        gaps = np.abs(lam[:, None] - lam[None, :]) + np.eye(len(lam))
        assert gaps.min() < 1e-5


def test_critical_drive() -> None:
    p = ChainParams(gamma=1.0, delta=2.0)
    assert critical_drive(p) == pytest.approx(np.sqrt(5.0), rel=1e-14)
    stable = ChainParams(gamma=1.0, delta=2.0, omega_drive=2.0)
    unstable = ChainParams(gamma=1.0, delta=2.0, omega_drive=2.4)
    lam_s = analytic_eigenvalues(stable)
    lam_u = analytic_eigenvalues(unstable)
    assert max(v.imag for v in lam_s) < 1e-12
    assert max(v.imag for v in lam_u) > 1e-6
