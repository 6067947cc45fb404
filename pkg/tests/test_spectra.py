"""Correlation and spectrum tests: closed forms against independent numerics.

The decoupled limit j = 0 is checked against a dense single-oscillator
master-equation oracle built inline from plain numpy, which validates the
regression route without sharing any code with the package internals.
"""

from __future__ import annotations

import numpy as np
import pytest

from trimerep import (
    ChainParams,
    CorrelationTrace,
    InsufficientDecayError,
    NearEPSingularityError,
    NoSteadyStateError,
    NotDoubletError,
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

REFERENCE = ChainParams(gamma=1.0, delta=2.0, j=0.25, omega_drive=1.0)


def _single_mode_g1(
    gamma: float, delta: float, omega: float, tau_grid: np.ndarray, dim: int = 24
) -> np.ndarray:
    """g1(tau) for one lossy parametric oscillator, by dense brute force.

    Builds the full master-equation generator on a dim-level ladder, finds
    the steady state as its null vector, and propagates rho_ss b† by
    eigendecomposition. Deliberately shares nothing with the package.
    """
    idx = np.arange(dim)
    b = np.diag(np.sqrt(idx[1:]), k=1)
    bd = b.conj().T
    ham = delta * bd @ b + 0.5 * omega * (bd @ bd + b @ b)
    eye = np.eye(dim)

    def left(m: np.ndarray) -> np.ndarray:
        return np.kron(m, eye)

    def right(m: np.ndarray) -> np.ndarray:
        return np.kron(eye, m.T)

    generator = -1j * (left(ham) - right(ham)) + 2.0 * gamma * (
        np.kron(b, b.conj()) - 0.5 * (left(bd @ b) + right(bd @ b))
    )
    evals, evecs = np.linalg.eig(generator)
    rho = evecs[:, int(np.argmin(np.abs(evals)))].reshape(dim, dim)
    rho = 0.5 * (rho + rho.conj().T)
    rho /= np.trace(rho).real
    population = float(np.trace(bd @ b @ rho).real)
    coef = np.linalg.solve(evecs, (rho @ bd).reshape(-1))
    values = np.empty(len(tau_grid), dtype=complex)
    for i, tau in enumerate(tau_grid):
        propagated = (evecs @ (coef * np.exp(evals * tau))).reshape(dim, dim)
        values[i] = np.trace(b @ propagated)
    return values / population


def test_default_omega_grid_spans_three_gamma() -> None:
    grid = default_omega_grid(gamma=2.0, points=11)
    assert grid.shape == (11,)
    assert grid[0] == -6.0 and grid[-1] == 6.0
    assert np.allclose(np.diff(grid), grid[1] - grid[0])


def test_correlation_requires_drive() -> None:
    tau = np.linspace(0.0, 5.0, 51)
    silent = ChainParams(gamma=1.0, delta=2.0, j=0.25, omega_drive=0.0)
    for fn in (g1_closed_form, g1_qrt):
        with pytest.raises(ValueError):
            fn(silent, tau)
    unstable = ChainParams(gamma=1.0, delta=2.0, j=0.25, omega_drive=2.4)
    for fn in (g1_closed_form, g1_qrt):
        with pytest.raises(NoSteadyStateError):
            fn(unstable, tau)
    with pytest.raises(NoSteadyStateError):
        spectrum_closed_form(unstable, default_omega_grid())


def test_tau_grid_must_increase_from_nonnegative() -> None:
    for bad in ([1.0, 0.5, 2.0], [-1.0, 0.0, 1.0], [0.0], [[0.0, 1.0]]):
        with pytest.raises(ValueError):
            g1_closed_form(REFERENCE, bad)


def test_g1_normalized_at_zero_delay() -> None:
    tau = np.linspace(0.0, 10.0, 101)
    for params in (REFERENCE, ChainParams(gamma=1.0, delta=2.0, j=0.5, omega_drive=1.9)):
        for fn in (g1_closed_form, g1_qrt):
            assert abs(fn(params, tau).values[0] - 1.0) < 1e-12


def test_g1_closed_form_matches_regression_route() -> None:
    tau = np.linspace(0.0, 20.0, 2001)
    closed = g1_closed_form(REFERENCE, tau)
    numeric = g1_qrt(REFERENCE, tau)
    assert closed.method == "closed_form"
    assert numeric.method == "qrt_numeric"
    assert np.max(np.abs(closed.values - numeric.values)) < 1e-8


def test_g1_decoupled_limit_matches_single_mode_oracle() -> None:
    params = ChainParams(gamma=1.0, delta=2.0, j=0.0, omega_drive=1.0)
    tau = np.linspace(0.0, 15.0, 301)
    oracle = _single_mode_g1(1.0, 2.0, 1.0, tau)
    assert np.max(np.abs(g1_qrt(params, tau).values - oracle)) < 1e-8
    assert np.max(np.abs(g1_closed_form(params, tau).values - oracle)) < 1e-8


def test_g1_closed_form_raises_inside_coalescence_guard() -> None:
    tau = np.linspace(0.0, 5.0, 51)
    at_ep = ChainParams(gamma=1.0, delta=2.0, j=0.25, omega_drive=2.0)
    with pytest.raises(NearEPSingularityError):
        g1_closed_form(at_ep, tau)
    # drive where the slow branch frequency omega_- vanishes exactly
    shifted = ChainParams(
        gamma=1.0, delta=2.0, j=0.5, omega_drive=float(np.sqrt(7.0 - 2.0 * np.sqrt(2.0)))
    )
    with pytest.raises(NearEPSingularityError):
        g1_closed_form(shifted, tau)
    # the regression route stays finite at both points
    for params in (at_ep, shifted):
        trace = g1_qrt(params, tau)
        assert np.all(np.isfinite(trace.values))
        assert abs(trace.values[0] - 1.0) < 1e-12


def test_lorentzian_assembly_matches_rational_form() -> None:
    grid = default_omega_grid()
    cases = (
        ChainParams(gamma=1.0, delta=2.0, j=0.5, omega_drive=1.0),  # drive below detuning
        ChainParams(gamma=1.0, delta=0.5, j=0.25, omega_drive=1.0),  # drive above detuning
        ChainParams(gamma=1.0, delta=2.0, j=0.25, omega_drive=2.1),
    )
    for params in cases:
        rational = spectrum_closed_form(params, grid, path="rational")
        lorentzian = spectrum_closed_form(params, grid, path="lorentzian")
        assert np.max(np.abs(rational.values - lorentzian.values)) < 1e-12
    with pytest.raises(NearEPSingularityError):
        spectrum_closed_form(
            ChainParams(gamma=1.0, delta=2.0, j=0.25, omega_drive=2.0),
            grid,
            path="lorentzian",
        )
    with pytest.raises(ValueError):
        spectrum_closed_form(REFERENCE, grid, path="pade")


def test_coalescence_spectrum_matches_general_form() -> None:
    grid = default_omega_grid()
    for j in (0.25, 0.5):
        params = ChainParams(gamma=1.0, delta=2.0, j=j, omega_drive=2.0)
        special = spectrum_ep(params, grid)
        general = spectrum_closed_form(params, grid, path="rational")
        assert np.max(np.abs(special.values - general.values)) < 1e-12


def test_factored_denominator_is_equivalent_in_both_regimes() -> None:
    grid = default_omega_grid()
    # below, at, and above the branch point 2 j^2 = (gamma/2)^2
    for j in (0.25, 1.0 / (2.0 * np.sqrt(2.0)), 0.5):
        params = ChainParams(gamma=1.0, delta=2.0, j=j, omega_drive=2.0)
        direct = spectrum_ep(params, grid)
        factored = spectrum_ep_factored(params, grid)
        assert np.max(np.abs(direct.values - factored.values)) < 1e-12


def test_coalescence_spectrum_requires_matched_drive() -> None:
    grid = default_omega_grid()
    for fn in (spectrum_ep, spectrum_ep_factored):
        with pytest.raises(ValueError):
            fn(ChainParams(gamma=1.0, delta=2.0, j=0.25, omega_drive=1.9), grid)


def test_zero_frequency_values_at_coalescence() -> None:
    probe = np.array([-0.1, 0.0, 0.1])
    for j in (0.25, 0.5, 0.7):
        params = ChainParams(gamma=1.0, delta=2.0, j=j, omega_drive=2.0)
        assert spectrum_ep(params, probe).values[1] == 0.0
    uncoupled = ChainParams(gamma=1.0, delta=2.0, j=0.0, omega_drive=2.0)
    assert abs(spectrum_ep(uncoupled, probe).values[1] - 2.0 / np.pi) < 1e-12
    wider = ChainParams(gamma=2.0, delta=1.0, j=0.0, omega_drive=1.0)
    assert abs(spectrum_ep(wider, probe).values[1] - 1.0 / np.pi) < 1e-12


def test_coalescence_doublet_positions_and_heights() -> None:
    grid = default_omega_grid()
    for j in (0.25, 0.5, 0.7):
        params = ChainParams(gamma=1.0, delta=2.0, j=j, omega_drive=2.0)
        spec = spectrum_ep(params, grid)
        assert len(spec.peaks) == 2
        target = np.sqrt(2.0) * j
        for peak in spec.peaks:
            assert abs(abs(peak.position) - target) < 1e-3
            assert abs(peak.height - 2.0 / np.pi) < 1e-6
        exact = spectrum_ep(params, np.array([-target, target]))
        assert np.max(np.abs(exact.values - 2.0 / np.pi)) < 1e-12


def test_coalescence_spectrum_integrates_to_unity() -> None:
    wide = np.linspace(-40.0, 40.0, 160001)
    for j in (0.0, 0.5):
        params = ChainParams(gamma=1.0, delta=2.0, j=j, omega_drive=2.0)
        integral = float(np.trapezoid(spectrum_ep(params, wide).values, wide))
        assert abs(integral - 1.0) < 1e-3


def test_fourier_route_matches_closed_spectrum() -> None:
    params = ChainParams(gamma=1.0, delta=2.0, j=0.5, omega_drive=1.0)
    trace = g1_closed_form(params, default_tau_grid(params))
    grid = default_omega_grid(points=501)
    numeric = spectrum_fourier(trace, grid)
    closed = spectrum_closed_form(params, grid)
    assert numeric.method == "fourier_numeric"
    assert np.max(np.abs(numeric.values - closed.values)) < 1e-6


def test_fourier_route_guards_its_input() -> None:
    short = g1_closed_form(REFERENCE, np.linspace(0.0, 5.0, 501))
    with pytest.raises(InsufficientDecayError):
        spectrum_fourier(short)
    offset = CorrelationTrace(
        tau_grid=np.linspace(1.0, 5.0, 11),
        values=np.zeros(11, dtype=complex),
        method="closed_form",
    )
    with pytest.raises(ValueError):
        spectrum_fourier(offset)


def test_find_peaks_reproduces_trace_peaks() -> None:
    params = ChainParams(gamma=1.0, delta=2.0, j=0.5, omega_drive=2.0)
    spec = spectrum_ep(params, default_omega_grid())
    located = find_peaks(spec)
    assert len(located) == len(spec.peaks)
    for found, stored in zip(located, spec.peaks):
        assert found.position == stored.position
        assert found.height == stored.height
        assert found.width == stored.width


def test_peak_count_collapses_across_coalescence() -> None:
    grid = default_omega_grid()

    def doublet_positions(omega_drive: float) -> list[float]:
        params = ChainParams(gamma=1.0, delta=2.0, j=0.5, omega_drive=omega_drive)
        return sorted(p.position for p in spectrum_closed_form(params, grid).peaks)

    assert len(doublet_positions(1.0)) == 4
    at_coalescence = doublet_positions(2.0)
    beyond = doublet_positions(2.2)
    assert len(at_coalescence) == 2 and len(beyond) == 2
    assert np.max(np.abs(np.array(at_coalescence) - np.array(beyond))) < 1e-3


def test_estimate_coupling_recovers_input() -> None:
    grid = default_omega_grid()
    for j in (0.25, 0.4, 0.5):
        params = ChainParams(gamma=1.0, delta=2.0, j=j, omega_drive=2.0)
        estimate = estimate_coupling(spectrum_ep(params, grid))
        assert abs(estimate.j_hat - j) / j < 0.01
        low, high = estimate.peak_positions
        assert low < 0.0 < high


def test_estimate_coupling_requires_exactly_two_peaks() -> None:
    grid = default_omega_grid()
    single = ChainParams(gamma=1.0, delta=2.0, j=0.0, omega_drive=2.0)
    with pytest.raises(NotDoubletError):
        estimate_coupling(spectrum_ep(single, grid))
    quadruplet = ChainParams(gamma=1.0, delta=2.0, j=0.5, omega_drive=1.0)
    with pytest.raises(NotDoubletError):
        estimate_coupling(spectrum_closed_form(quadruplet, grid))
