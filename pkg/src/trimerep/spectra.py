"""First-order correlation, optical spectrum, peak analytics, coupling fit.

Two independent routes exist for every quantity: a closed form (exponential-
trigonometric g1, rational spectrum, coalescence-point spectrum) and a
numeric route (two-time regression ODE, half-line Fourier quadrature). The
closed forms carry removable singularities where eigenvalues coalesce; the
numeric routes do not, and callers are pushed onto them near those points.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray

from .eigen import evolve_first_moments
from .errors import (
    InsufficientDecayError,
    NearEPSingularityError,
    NoSteadyStateError,
    NotDoubletError,
)
from .model import ChainParams, build_dyn_matrix, critical_drive, derived_scalars
from .moments import solve_steady_state

_TAIL_THRESHOLD = 1e-8
_PEAK_THRESHOLD_FRAC = 0.005
_PEAK_MERGE_STEPS = 2


@dataclass(frozen=True)
class Peak:
    """A located spectral line."""

    position: float
    height: float
    width: float  # full width at half maximum, grid-interpolated


@dataclass(frozen=True)
class CorrelationTrace:
    """g1(tau) samples with provenance."""

    tau_grid: NDArray[np.float64]
    values: NDArray[np.complex128]
    method: str  # "closed_form" or "qrt_numeric"


@dataclass(frozen=True)
class SpectrumTrace:
    """S(omega) samples, located peaks, and provenance."""

    omega_grid: NDArray[np.float64]
    values: NDArray[np.float64]
    peaks: tuple[Peak, ...]
    method: str  # "closed_form" or "fourier_numeric"


def default_omega_grid(gamma: float = 1.0, points: int = 2001) -> NDArray[np.float64]:
    """Standard frequency grid: `points` samples over [-3*gamma, 3*gamma]."""
    return np.linspace(-3.0 * gamma, 3.0 * gamma, points)


def _require_drive_below_critical(params: ChainParams) -> None:
    if params.omega_drive == 0.0:
        raise ValueError(
            "correlation/spectrum undefined without drive: the normalized "
            "g1 divides by the steady-state population, which vanishes"
        )
    if params.omega_drive >= critical_drive(params):
        raise NoSteadyStateError(
            f"no steady state: drive {params.omega_drive} >= critical "
            f"{critical_drive(params)}"
        )


def _validate_tau_grid(tau_grid) -> NDArray[np.float64]:
    tau = np.asarray(tau_grid, dtype=float)
    if tau.ndim != 1 or len(tau) < 2 or tau[0] < 0 or np.any(np.diff(tau) <= 0):
        raise ValueError("tau_grid must be increasing with tau >= 0")
    return tau


def _check_normalization(tau: NDArray[np.float64], values: NDArray[np.complex128]) -> None:
    if tau[0] == 0.0 and abs(values[0] - 1.0) > 1e-9:
        raise ArithmeticError(
            f"correlation normalization broken: g1(0) = {values[0]!r}"
        )


def default_tau_grid(params: ChainParams, omega_max: float = 3.0) -> NDArray[np.float64]:
    """Delay grid long enough for the correlation tail to decay below 1e-8.

    The step resolves both the loss scale and the fastest requested
    oscillation: h = min(0.01/gamma, 0.1/omega_max). The horizon runs to
    ln(1e8)/rate with the slowest decaying (non-conserved) eigenvalue rate,
    hard-capped at 200/gamma; when the cap bites, the tail criterion in
    spectrum_fourier will reject the trace rather than silently truncate.
    """
    lam = np.linalg.eigvals(build_dyn_matrix(params).entries)
    rates = -lam.imag
    bright = rates[rates > 1e-9]
    if len(bright) == 0:
        raise NoSteadyStateError("all modes conserved; correlations do not decay")
    tau_max = min(np.log(1e8) / float(bright.min()), 200.0 / params.gamma)
    step = min(0.01 / params.gamma, 0.1 / abs(omega_max)) if omega_max else 0.01 / params.gamma
    return np.arange(0.0, tau_max + step / 2.0, step)


def g1_closed_form(
    params: ChainParams,
    tau_grid,
    eps_ep: float | None = None,
) -> CorrelationTrace:
    """Closed-form normalized first-order correlation g1(tau).

    The two-term exponential-trigonometric expression; trigonometric
    functions take complex frequency arguments (analytic continuation),
    so over- and under-damped regimes use the same code path.

    Raises NearEPSingularityError when any of Pi, omega_minus, omega_plus
    is within eps_ep (default 1e-6*gamma) of zero — the expression is
    removable-singular there and the caller must use g1_qrt instead.
    """
    _require_drive_below_critical(params)
    tau = _validate_tau_grid(tau_grid)
    eps = 1e-6 * params.gamma if eps_ep is None else eps_ep
    aux = derived_scalars(params)
    if min(abs(aux.pi_), abs(aux.omega_minus), abs(aux.omega_plus)) < eps:
        raise NearEPSingularityError(
            "closed-form g1 is singular near eigenvalue coalescence "
            f"(|Pi|={abs(aux.pi_):.2e}, |omega_-|={abs(aux.omega_minus):.2e}, "
            f"|omega_+|={abs(aux.omega_plus):.2e}); use g1_qrt"
        )

    om = params.omega_drive
    a_p = aux.alpha_plus
    b_p, b_m = aux.beta_plus, aux.beta_minus
    w_m, w_p = aux.omega_minus, aux.omega_plus
    pref = 1j / (2.0 * aux.pi_ * om**3)
    term1 = (
        np.exp(-aux.gamma_plus * tau / 2.0)
        * (om**3 + 1j * a_p * b_p * om)
        / w_m
        * (
            b_m * w_m * np.cos(w_m * tau / 2.0)
            - (a_p * b_m - 1j * om**2) * np.sin(w_m * tau / 2.0)
        )
    )
    term2 = (
        np.exp(-aux.gamma_minus * tau / 2.0)
        * (om**3 + 1j * a_p * b_m * om)
        / w_p
        * (
            b_p * w_p * np.cos(w_p * tau / 2.0)
            - (a_p * b_p - 1j * om**2) * np.sin(w_p * tau / 2.0)
        )
    )
    values = pref * (term1 - term2)
    _check_normalization(tau, values)
    return CorrelationTrace(tau_grid=tau, values=values, method="closed_form")


def g1_qrt(params: ChainParams, tau_grid) -> CorrelationTrace:
    """Numeric g1(tau) via the two-time regression ODE.

    The correlation vector v(tau) = (<b†a>, <b†b>, <b†c>, <b†a†>, <b†b†>,
    <b†c†>)(tau) obeys the same linear equation as the first moments,
    seeded with steady-state values; g1 is component 2 normalized by the
    steady-state population of B. Valid arbitrarily close to eigenvalue
    coalescence.
    """
    _require_drive_below_critical(params)
    tau = _validate_tau_grid(tau_grid)
    state = solve_steady_state(params)
    v0 = state.qrt_initial_vector()
    population = v0[1].real
    dyn = build_dyn_matrix(params)
    if tau[0] == 0.0:
        trajectory = evolve_first_moments(dyn, v0, tau)
    else:
        padded = np.concatenate([[0.0], tau])
        trajectory = evolve_first_moments(dyn, v0, padded)[1:]
    values = trajectory[:, 1] / population
    _check_normalization(tau, values)
    return CorrelationTrace(tau_grid=tau, values=values, method="qrt_numeric")


def _rational_s(params: ChainParams, w: NDArray[np.float64]) -> NDArray[np.float64]:
    """The fully reduced rational spectrum; finite for all real omega."""
    g, jj, om = params.gamma, params.j, params.omega_drive
    pi2 = om**2 - params.delta**2
    common = g**4 + 2.0 * g**2 * (w**2 - pi2) + (pi2 + w**2) ** 2
    if jj == 0.0:
        # the w^4 factors of numerator and denominator cancel identically
        return 2.0 * g * (g**2 - pi2) / (np.pi * common)
    num = 2.0 * g * w**4 * (g**2 - pi2)
    den = (
        w**4 * common
        + 16.0 * jj**8
        - 32.0 * jj**6 * w**2
        + 8.0 * jj**4 * w**2 * (g**2 + pi2 + 3.0 * w**2)
        - 8.0 * jj**2 * w**4 * (g**2 + pi2 + w**2)
    )
    return num / (np.pi * den)


def _lorentzian_s(params: ChainParams, w: NDArray[np.float64], eps: float) -> NDArray[np.float64]:
    """Spectrum assembled from the four Lorentzian-type lineshapes F1..F4."""
    aux = derived_scalars(params)
    if min(abs(aux.pi_), abs(aux.omega_minus), abs(aux.omega_plus)) < eps:
        raise NearEPSingularityError(
            "Lorentzian-assembly spectrum is singular near eigenvalue "
            "coalescence; use the rational path"
        )
    om = params.omega_drive
    a_p = aux.alpha_plus
    b_p, b_m = aux.beta_plus, aux.beta_minus
    w_m, w_p = aux.omega_minus, aux.omega_plus
    g_p, g_m = aux.gamma_plus, aux.gamma_minus

    den1 = (w_m / 2.0) ** 2 + (g_p / 2.0 - 1j * w) ** 2
    f1 = (g_p / 2.0 - 1j * w) / den1
    f2 = (w_m / 2.0) / den1
    den2 = (w_p / 2.0) ** 2 + (g_m / 2.0 - 1j * w) ** 2
    f3 = (g_m / 2.0 - 1j * w) / den2
    f4 = (w_p / 2.0) / den2

    pref = 1j / (2.0 * aux.pi_ * om**3)
    term1 = (om**3 + 1j * a_p * b_p * om) / w_m * (
        b_m * w_m * f1 - (a_p * b_m - 1j * om**2) * f2
    )
    term2 = (om**3 + 1j * a_p * b_m * om) / w_p * (
        b_p * w_p * f3 - (a_p * b_p - 1j * om**2) * f4
    )
    return (pref * (term1 - term2)).real / np.pi


def spectrum_closed_form(
    params: ChainParams,
    omega_grid,
    path: str = "rational",
    eps_ep: float | None = None,
) -> SpectrumTrace:
    """Closed-form optical spectrum of oscillator B.

    path="rational" (default) evaluates the fully reduced rational form,
    which is finite everywhere including eigenvalue coalescence.
    path="lorentzian" assembles the four-lineshape representation, which
    is only defined away from coalescence (NearEPSingularityError inside
    the guard band); the two agree to machine precision where both exist.
    """
    _require_drive_below_critical(params)
    w = np.asarray(omega_grid, dtype=float)
    if path == "rational":
        values = _rational_s(params, w)
    elif path == "lorentzian":
        eps = 1e-6 * params.gamma if eps_ep is None else eps_ep
        values = _lorentzian_s(params, w, eps)
    else:
        raise ValueError(f"unknown path {path!r}; expected 'rational' or 'lorentzian'")
    return SpectrumTrace(
        omega_grid=w,
        values=values,
        peaks=tuple(_find_peaks_arrays(w, values)),
        method="closed_form",
    )


def spectrum_ep(params: ChainParams, omega_grid) -> SpectrumTrace:
    """Spectrum exactly at the drive-equals-detuning coalescence point.

    S(omega) = 2 gamma^3 omega^4 / (pi (gamma^2 omega^2 + (omega^2-2J^2)^2)^2)
    for J > 0; for J = 0 the omega^4 factors cancel, leaving the single
    lossy-oscillator line 2 gamma^3 / (pi (gamma^2 + omega^2)^2). Requires
    omega_drive == delta exactly (the caller selects the point).
    """
    if params.omega_drive != params.delta:
        raise ValueError(
            f"coalescence-point spectrum requires omega_drive == delta, got "
            f"{params.omega_drive} != {params.delta}"
        )
    _require_drive_below_critical(params)
    w = np.asarray(omega_grid, dtype=float)
    g, jj = params.gamma, params.j
    if jj == 0.0:
        values = 2.0 * g**3 / (np.pi * (g**2 + w**2) ** 2)
    else:
        values = 2.0 * g**3 * w**4 / (np.pi * (g**2 * w**2 + (w**2 - 2.0 * jj**2) ** 2) ** 2)
    return SpectrumTrace(
        omega_grid=w,
        values=values,
        peaks=tuple(_find_peaks_arrays(w, values)),
        method="closed_form",
    )


def spectrum_ep_factored(params: ChainParams, omega_grid) -> SpectrumTrace:
    """Coalescence-point spectrum via the regime-split factored denominator.

    When 2J^2 > (gamma/2)^2 the quartic gamma^2 w^2 + (w^2 - 2J^2)^2
    factors over shifted frequencies w1 = sqrt(2J^2 - (gamma/2)^2):
    ((gamma/2)^2 + (w-w1)^2) ((gamma/2)^2 + (w+w1)^2); otherwise over
    split rates w2 = sqrt((gamma/2)^2 - 2J^2):
    ((gamma/2 - w2)^2 + w^2) ((gamma/2 + w2)^2 + w^2). Both reproduce
    spectrum_ep identically; exposed so the equivalence is testable.
    """
    if params.omega_drive != params.delta:
        raise ValueError(
            f"coalescence-point spectrum requires omega_drive == delta, got "
            f"{params.omega_drive} != {params.delta}"
        )
    _require_drive_below_critical(params)
    w = np.asarray(omega_grid, dtype=float)
    g, jj = params.gamma, params.j
    half_g = g / 2.0
    if 2.0 * jj**2 >= half_g**2:
        w1 = np.sqrt(2.0 * jj**2 - half_g**2)
        quartic = (half_g**2 + (w - w1) ** 2) * (half_g**2 + (w + w1) ** 2)
    else:
        w2 = np.sqrt(half_g**2 - 2.0 * jj**2)
        quartic = ((half_g - w2) ** 2 + w**2) * ((half_g + w2) ** 2 + w**2)
    values = 2.0 * g**3 * w**4 / (np.pi * quartic**2)
    return SpectrumTrace(
        omega_grid=w,
        values=values,
        peaks=tuple(_find_peaks_arrays(w, values)),
        method="closed_form",
    )


def spectrum_fourier(trace: CorrelationTrace, omega_grid=None) -> SpectrumTrace:
    """Numeric spectrum: S(omega) = (1/pi) Re of the half-line transform of g1.

    Trapezoidal quadrature on the trace's own tau grid, no windowing. The
    trace must start at tau = 0 and must have decayed below 1e-8 at its
    end, otherwise InsufficientDecayError — a truncated oscillating tail
    would alias into the spectrum.
    """
    tau = np.asarray(trace.tau_grid, dtype=float)
    g1 = np.asarray(trace.values, dtype=np.complex128)
    if tau[0] != 0.0:
        raise ValueError("correlation trace must start at tau = 0")
    if abs(g1[-1]) >= _TAIL_THRESHOLD:
        raise InsufficientDecayError(
            f"correlation tail |g1({tau[-1]:.3g})| = {abs(g1[-1]):.2e} has not "
            f"decayed below {_TAIL_THRESHOLD}; extend the trace or move away "
            "from the stability threshold"
        )
    w = default_omega_grid() if omega_grid is None else np.asarray(omega_grid, dtype=float)

    values = np.empty(len(w), dtype=float)
    chunk = max(1, int(4e6 // max(len(tau), 1)))
    for start in range(0, len(w), chunk):
        block = w[start : start + chunk]
        kernel = np.exp(1j * np.outer(block, tau)) * g1[None, :]
        values[start : start + chunk] = np.trapezoid(kernel, x=tau, axis=1).real / np.pi
    return SpectrumTrace(
        omega_grid=w,
        values=values,
        peaks=tuple(_find_peaks_arrays(w, values)),
        method="fourier_numeric",
    )


def _half_max_width(
    x: NDArray[np.float64], y: NDArray[np.float64], i: int, height: float
) -> float:
    """Full width at half maximum around sample i, linearly interpolated."""
    half = height / 2.0
    left = x[0]
    for k in range(i, 0, -1):
        if y[k - 1] < half <= y[k]:
            frac = (half - y[k - 1]) / (y[k] - y[k - 1])
            left = x[k - 1] + frac * (x[k] - x[k - 1])
            break
    right = x[-1]
    for k in range(i, len(y) - 1):
        if y[k + 1] < half <= y[k]:
            frac = (y[k] - half) / (y[k] - y[k + 1])
            right = x[k] + frac * (x[k + 1] - x[k])
            break
    return float(right - left)


def _find_peaks_arrays(x: NDArray[np.float64], y: NDArray[np.float64]) -> list[Peak]:
    """Local maxima above threshold, quadratically refined, merged if adjacent."""
    if len(y) < 3:
        return []
    ymax = float(np.max(y))
    if ymax <= 0.0:
        return []
    step = float(x[1] - x[0])
    raw: list[Peak] = []
    for i in range(1, len(y) - 1):
        if not (y[i] >= y[i - 1] and y[i] > y[i + 1] and y[i] > _PEAK_THRESHOLD_FRAC * ymax):
            continue
        y0, y1, y2 = float(y[i - 1]), float(y[i]), float(y[i + 1])
        curvature = y0 - 2.0 * y1 + y2
        offset = 0.5 * (y0 - y2) / curvature if curvature != 0.0 else 0.0
        position = float(x[i]) + offset * step
        height = y1 - 0.25 * (y0 - y2) * offset
        raw.append(Peak(position=position, height=height, width=_half_max_width(x, y, i, height)))
    merged: list[Peak] = []
    for peak in raw:
        if merged and abs(peak.position - merged[-1].position) < _PEAK_MERGE_STEPS * step:
            if peak.height > merged[-1].height:
                merged[-1] = peak
        else:
            merged.append(peak)
    return merged


def find_peaks(spec: SpectrumTrace) -> list[Peak]:
    """Locate spectral peaks on a trace (recomputed from the samples)."""
    return _find_peaks_arrays(
        np.asarray(spec.omega_grid, dtype=float), np.asarray(spec.values, dtype=float)
    )


@dataclass(frozen=True)
class CouplingEstimate:
    """Coupling strength inferred from a doublet spectrum."""

    j_hat: float
    peak_positions: tuple[float, float]
    note: str


def estimate_coupling(spec: SpectrumTrace) -> CouplingEstimate:
    """Infer the chain coupling from the doublet splitting.

    At and beyond the drive-equals-detuning point the spectrum is a doublet
    with separation 2*sqrt(2)*J, so j_hat = (w_+ - w_-) / (2*sqrt(2)).
    Raises NotDoubletError unless exactly two peaks are present.
    """
    peaks = find_peaks(spec)
    if len(peaks) != 2:
        raise NotDoubletError(
            f"coupling estimation needs a two-peak spectrum, found {len(peaks)} "
            "peaks; acquire the spectrum at or beyond the coalescence drive"
        )
    lo, hi = sorted(p.position for p in peaks)
    j_hat = (hi - lo) / (2.0 * np.sqrt(2.0))
    return CouplingEstimate(
        j_hat=float(j_hat),
        peak_positions=(float(lo), float(hi)),
        note="doublet splitting 2*sqrt(2)*J inverted from refined peak positions",
    )
