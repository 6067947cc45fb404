"""Brute-force cross-check: master-equation integration in a truncated basis.

Everything else in this package works at the moment level, which is exact
for this quadratic model but shares assumptions with the closed forms. This
module validates those results from below: the density operator itself is
integrated in a truncated three-mode number basis with a fixed-step RK4
scheme, and moments / correlations are extracted by tracing. Agreement is
limited only by basis truncation and step size, both of which are checked.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray

from ._kernels import make_rhs
from .errors import CutoffSaturationError, NoSteadyStateError
from .model import ChainParams
from .moments import MONOMIALS, build_moment_system
from .spectra import CorrelationTrace

_MAX_HILBERT_DIM = 10_000
_CHECK_INTERVAL = 100
_SATURATION_LIMIT = 1e-6


@dataclass(frozen=True)
class FockConfig:
    """Integration configuration for the truncated-basis oracle.

    cutoffs are maximum occupation numbers per mode (basis size is
    cutoff+1 per mode); tolerance is the population drift per unit time
    below which the state counts as stationary.
    """

    cutoffs: tuple[int, int, int]
    dt: float = 1e-3
    t_end: float = 200.0
    tolerance: float = 1e-6
    saturation_limit: float = _SATURATION_LIMIT

    def __post_init__(self) -> None:
        if len(self.cutoffs) != 3 or any(c < 0 for c in self.cutoffs):
            raise ValueError(f"cutoffs must be three non-negative ints, got {self.cutoffs}")
        if self.hilbert_dim > _MAX_HILBERT_DIM:
            raise ValueError(
                f"Hilbert dimension {self.hilbert_dim} exceeds the "
                f"{_MAX_HILBERT_DIM} guard; reduce cutoffs"
            )
        if self.dt <= 0 or self.t_end <= 0 or self.tolerance <= 0:
            raise ValueError("dt, t_end, and tolerance must be positive")
        if self.saturation_limit <= 0:
            raise ValueError("saturation_limit must be positive")

    @property
    def dims(self) -> tuple[int, int, int]:
        return (self.cutoffs[0] + 1, self.cutoffs[1] + 1, self.cutoffs[2] + 1)

    @property
    def hilbert_dim(self) -> int:
        d = self.dims
        return d[0] * d[1] * d[2]


@dataclass(frozen=True)
class DensityOperator:
    """Density operator as a 6-axis tensor (n_a, n_b, n_c, n_a', n_b', n_c')."""

    tensor: NDArray[np.complex128]
    cutoffs: tuple[int, int, int]

    @property
    def dims(self) -> tuple[int, int, int]:
        return (self.cutoffs[0] + 1, self.cutoffs[1] + 1, self.cutoffs[2] + 1)

    @property
    def matrix(self) -> NDArray[np.complex128]:
        dim = self.tensor.shape[0] * self.tensor.shape[1] * self.tensor.shape[2]
        return self.tensor.reshape(dim, dim)

    def trace(self) -> complex:
        return complex(np.einsum("abcabc->", self.tensor))

    def populations(self) -> tuple[float, float, float]:
        """Mode occupations (<a†a>, <b†b>, <c†c>)."""
        return tuple(
            float(_expectation(self.tensor, ((axis,), (axis,))).real) for axis in range(3)
        )

    def validate(self) -> "DensityOperator":
        """Enforce unit trace, hermiticity, and positivity up to tolerances."""
        tr = self.trace()
        if abs(tr - 1.0) > 1e-9:
            raise ArithmeticError(f"density operator trace {tr} deviates from 1")
        mat = self.matrix
        herm = float(np.max(np.abs(mat - mat.conj().T)))
        if herm > 1e-10:
            raise ArithmeticError(f"density operator non-hermitian by {herm:.2e}")
        min_eig = float(np.linalg.eigvalsh(mat)[0])
        if min_eig < -1e-8:
            raise ArithmeticError(f"density operator has negative eigenvalue {min_eig:.2e}")
        return self


def vacuum_state(cutoffs: tuple[int, int, int]) -> DensityOperator:
    """All three modes in their ground state."""
    dims = (cutoffs[0] + 1, cutoffs[1] + 1, cutoffs[2] + 1)
    tensor = np.zeros(dims + dims, dtype=np.complex128)
    tensor[0, 0, 0, 0, 0, 0] = 1.0
    return DensityOperator(tensor=tensor, cutoffs=tuple(cutoffs))


def random_core_state(cutoffs: tuple[int, int, int], seed: int = 0) -> DensityOperator:
    """Random positive unit-trace operator supported away from the truncation edge.

    The top two B levels and the top A/C level are left empty, so one
    application of the master-equation generator cannot reach the edge:
    quadratic-monomial expectations of the generated derivative are exactly
    those of the untruncated model. This makes the state suitable for
    validating the derived moment system against the kernel without any
    truncation artifact.
    """
    dims = (cutoffs[0] + 1, cutoffs[1] + 1, cutoffs[2] + 1)
    core = (max(1, dims[0] - 1), max(1, dims[1] - 2), max(1, dims[2] - 1))
    rng = np.random.default_rng(seed)
    block = rng.standard_normal(core + core) + 1j * rng.standard_normal(core + core)
    tensor = np.zeros(dims + dims, dtype=np.complex128)
    tensor[: core[0], : core[1], : core[2], : core[0], : core[1], : core[2]] = block
    dim = dims[0] * dims[1] * dims[2]
    mat = tensor.reshape(dim, dim)
    mat = mat @ mat.conj().T
    mat /= np.trace(mat).real
    tensor = np.ascontiguousarray(mat.reshape(dims + dims))
    return DensityOperator(tensor=tensor, cutoffs=tuple(cutoffs))


def _apply_annihilator(t: NDArray[np.complex128], axis: int) -> NDArray[np.complex128]:
    """(x t)[m] = sqrt(m+1) t[m+1] along `axis`."""
    d = t.shape[axis]
    sq = np.sqrt(np.arange(1, d, dtype=float))
    shape = [1] * t.ndim
    shape[axis] = d - 1
    out = np.zeros_like(t)
    sl_out = [slice(None)] * t.ndim
    sl_in = [slice(None)] * t.ndim
    sl_out[axis] = slice(None, -1)
    sl_in[axis] = slice(1, None)
    out[tuple(sl_out)] = sq.reshape(shape) * t[tuple(sl_in)]
    return out


def _apply_creator(t: NDArray[np.complex128], axis: int) -> NDArray[np.complex128]:
    """(x† t)[m] = sqrt(m) t[m-1] along `axis`."""
    d = t.shape[axis]
    sq = np.sqrt(np.arange(1, d, dtype=float))
    shape = [1] * t.ndim
    shape[axis] = d - 1
    out = np.zeros_like(t)
    sl_out = [slice(None)] * t.ndim
    sl_in = [slice(None)] * t.ndim
    sl_out[axis] = slice(1, None)
    sl_in[axis] = slice(None, -1)
    out[tuple(sl_out)] = sq.reshape(shape) * t[tuple(sl_in)]
    return out


def _right_creator(t: NDArray[np.complex128], axis: int) -> NDArray[np.complex128]:
    """(t x†)[n] = sqrt(n+1) t[n+1] along primed `axis` (3, 4, or 5).

    Right-multiplying by a creation operator contracts against the ket-side
    index, so on the primed axis it acts like annihilation does on the
    unprimed one.
    """
    return _apply_annihilator(t, axis)


def _expectation(tensor: NDArray[np.complex128], key: tuple) -> complex:
    """<O> = Tr[O rho] for a normal-ordered monomial key (creators, annihilators)."""
    dags, anns = key
    work = tensor
    for mode in reversed(anns):
        work = _apply_annihilator(work, mode)
    for mode in reversed(dags):
        work = _apply_creator(work, mode)
    return complex(np.einsum("abcabc->", work))


def moment_expectations(rho: DensityOperator) -> NDArray[np.complex128]:
    """All 21 second-moment expectations, in the canonical monomial order."""
    return np.array([_expectation(rho.tensor, key) for key in MONOMIALS], dtype=np.complex128)


def moment_derivative_check(params: ChainParams, rho: DensityOperator) -> float:
    """Max mismatch between Tr[O L(rho)] and the moment-system prediction A m + d.

    Exact up to basis truncation: a nonzero value at an unsaturated state
    indicates an inconsistency between the derived moment system and the
    master-equation kernel.
    """
    cfg_dims = rho.dims
    rhs = make_rhs(
        cfg_dims,
        params.gamma,
        params.delta,
        params.j,
        params.omega_drive,
        params.delta_a,
        params.delta_c,
    )
    lrho = rhs(rho.tensor, np.empty_like(rho.tensor))
    direct = np.array([_expectation(lrho, key) for key in MONOMIALS], dtype=np.complex128)
    system = build_moment_system(params)
    predicted = system.system_matrix @ moment_expectations(rho) + system.drive_vector
    return float(np.max(np.abs(direct - predicted)))


def _top_level_occupation(tensor: NDArray[np.complex128]) -> float:
    """Largest probability of any mode sitting at its truncation level."""
    diag = np.einsum("abcabc->abc", tensor).real
    return float(max(diag[-1, :, :].sum(), diag[:, -1, :].sum(), diag[:, :, -1].sum()))


def _check_density_invariants(tensor: NDArray[np.complex128], t_now: float) -> None:
    tr = np.einsum("abcabc->", tensor)
    if abs(tr - 1.0) > 1e-9:
        raise ArithmeticError(f"trace drifted to {tr} by t={t_now:.3g}")
    dim = tensor.shape[0] * tensor.shape[1] * tensor.shape[2]
    mat = tensor.reshape(dim, dim)
    herm = float(np.max(np.abs(mat - mat.conj().T)))
    if herm > 1e-10:
        raise ArithmeticError(f"hermiticity broken by {herm:.2e} at t={t_now:.3g}")


def _check_saturation(tensor: NDArray[np.complex128], limit: float, t_now: float) -> None:
    """Post-hoc truncation guard on the state actually being returned.

    Applied only to the final state, not along the trajectory: brief
    transients may push probability toward the truncation edge without
    invalidating the settled state, and the deliberately small cutoffs used
    for convergence studies rely on that.
    """
    saturation = _top_level_occupation(tensor)
    if saturation > limit:
        raise CutoffSaturationError(
            f"top-level occupation {saturation:.2e} exceeds {limit} "
            f"at t={t_now:.3g}; raise the cutoffs"
        )


class _Rk4Engine:
    """Fixed-step RK4 on a density-like tensor with a reusable kernel."""

    def __init__(self, params: ChainParams, cfg: FockConfig) -> None:
        self.dt = cfg.dt
        self.rhs = make_rhs(
            cfg.dims,
            params.gamma,
            params.delta,
            params.j,
            params.omega_drive,
            params.delta_a,
            params.delta_c,
        )
        shape = cfg.dims + cfg.dims
        self._k1 = np.empty(shape, dtype=np.complex128)
        self._k2 = np.empty(shape, dtype=np.complex128)
        self._k3 = np.empty(shape, dtype=np.complex128)
        self._k4 = np.empty(shape, dtype=np.complex128)
        self._tmp = np.empty(shape, dtype=np.complex128)

    def step(self, state: NDArray[np.complex128]) -> None:
        dt, tmp = self.dt, self._tmp
        k1, k2, k3, k4 = self._k1, self._k2, self._k3, self._k4
        self.rhs(state, k1)
        np.multiply(k1, dt / 2.0, out=tmp)
        tmp += state
        self.rhs(tmp, k2)
        np.multiply(k2, dt / 2.0, out=tmp)
        tmp += state
        self.rhs(tmp, k3)
        np.multiply(k3, dt, out=tmp)
        tmp += state
        self.rhs(tmp, k4)
        k1 += k4
        k2 += k3
        k1 += 2.0 * k2
        state += (dt / 6.0) * k1


def evolve_rho(
    params: ChainParams, cfg: FockConfig, rho0: DensityOperator
) -> DensityOperator:
    """Integrate the master equation from rho0 to t_end.

    Trace and hermiticity are checked every 100 steps; cutoff saturation is
    checked post-hoc on the final state, which also passes the positivity
    check.
    """
    if rho0.dims != cfg.dims:
        raise ValueError(f"state dims {rho0.dims} do not match config dims {cfg.dims}")
    engine = _Rk4Engine(params, cfg)
    state = rho0.tensor.astype(np.complex128, copy=True)
    n_steps = max(1, math.ceil(cfg.t_end / cfg.dt - 1e-12))
    for step_idx in range(1, n_steps + 1):
        engine.step(state)
        if step_idx % _CHECK_INTERVAL == 0:
            _check_density_invariants(state, step_idx * cfg.dt)
    _check_density_invariants(state, n_steps * cfg.dt)
    _check_saturation(state, cfg.saturation_limit, n_steps * cfg.dt)
    return DensityOperator(tensor=state, cutoffs=rho0.cutoffs).validate()


def steady_state_rho(
    params: ChainParams, cfg: FockConfig, rho0: DensityOperator | None = None
) -> DensityOperator:
    """Evolve from vacuum (or rho0) until populations stop drifting.

    Integrates in chunks of roughly 2/gamma and stops at the first chunk
    over which the maximum population drift per unit time falls below
    cfg.tolerance. Stopping as early as the criterion allows is deliberate:
    with undamped collective modes the truncated generator leaks probability
    into them at a slow constant rate, so the reported state degrades — not
    improves — with extra integration time. The same leakage puts a floor
    under the drift at too-small cutoffs; a NoSteadyStateError therefore
    usually means the cutoffs, not t_end, are the problem.
    """
    state_op = vacuum_state(cfg.cutoffs) if rho0 is None else rho0
    if state_op.dims != cfg.dims:
        raise ValueError(f"state dims {state_op.dims} do not match config dims {cfg.dims}")
    engine = _Rk4Engine(params, cfg)
    state = state_op.tensor.astype(np.complex128, copy=True)
    chunk_steps = max(1, round(2.0 / (params.gamma * cfg.dt)))
    chunk_time = chunk_steps * cfg.dt
    current = DensityOperator(tensor=state, cutoffs=state_op.cutoffs)
    prev_pops = np.array(current.populations())
    t_now = 0.0
    steps_since_check = 0
    while t_now < cfg.t_end:
        for _ in range(chunk_steps):
            engine.step(state)
            steps_since_check += 1
            if steps_since_check >= _CHECK_INTERVAL:
                _check_density_invariants(state, t_now)
                steps_since_check = 0
        t_now += chunk_time
        pops = np.array(current.populations())
        drift = float(np.max(np.abs(pops - prev_pops))) / chunk_time
        if drift < cfg.tolerance:
            _check_density_invariants(state, t_now)
            _check_saturation(state, cfg.saturation_limit, t_now)
            return DensityOperator(tensor=state, cutoffs=state_op.cutoffs).validate()
        prev_pops = pops
    raise NoSteadyStateError(
        f"population drift still above {cfg.tolerance} at t_end={cfg.t_end}; "
        "increase t_end or loosen the tolerance"
    )


def oracle_g1(
    params: ChainParams, cfg: FockConfig, tau_end: float = 10.0
) -> CorrelationTrace:
    """g1(tau) from the density-operator level: Tr[b e^{L tau}(rho_ss b†)] / <b†b>.

    The two-time correlation is obtained by evolving the non-hermitian
    object rho_ss b† under the same master-equation generator and tracing
    against b at each step. Normalization at tau = 0 is exact.
    """
    rho_ss = steady_state_rho(params, cfg)
    population = rho_ss.populations()[1]
    if population <= 0.0:
        raise ValueError("steady-state population of B vanishes; g1 undefined")

    engine = _Rk4Engine(params, cfg)
    x_state = _right_creator(rho_ss.tensor, axis=4)
    n_steps = max(1, math.ceil(tau_end / cfg.dt - 1e-12))
    tau_grid = np.empty(n_steps + 1, dtype=float)
    values = np.empty(n_steps + 1, dtype=np.complex128)

    def record(idx: int, tau_now: float) -> None:
        tau_grid[idx] = tau_now
        values[idx] = np.einsum("abcabc->", _apply_annihilator(x_state, axis=1)) / population

    record(0, 0.0)
    for step_idx in range(1, n_steps + 1):
        engine.step(x_state)
        record(step_idx, step_idx * cfg.dt)
    return CorrelationTrace(tau_grid=tau_grid, values=values, method="fock_numeric")
