"""Numeric eigenstructure, exceptional-point detection, sweeps, and evolution.

Complements the closed-form eigenvalues in model.py with a dense solver,
a defectiveness measure for locating eigenvector coalescence, branch-matched
parameter sweeps, and first-moment time evolution.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray
from scipy.integrate import solve_ivp
from scipy.optimize import linear_sum_assignment

from .model import ChainParams, DynMatrix, build_dyn_matrix, critical_drive

_GOLDEN = (np.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class EigenSet:
    """Eigendecomposition with coalescence diagnostics.

    defect_measure maps each cluster label to the maximum pairwise
    |normalized eigenvector overlap| within that cluster: ~1 for a
    defective (coalescing) cluster, ~0 for well-separated directions.
    Singleton clusters get 0.
    """

    eigenvalues: NDArray[np.complex128]
    eigenvectors: NDArray[np.complex128]  # unit-norm columns
    cluster_labels: tuple[int, ...]
    defect_measure: dict[int, float]
    residual: float  # max_i ||H u_i - lambda_i u_i||


@dataclass(frozen=True)
class EPRecord:
    """One eigenvector-coalescence event found by detect_ep."""

    knob: str
    knob_value: float
    coalesced_lambda: complex  # mean of the coalescing cluster
    order: int                 # cluster size (algebraic multiplicity estimate)
    defect_measure: float      # max pairwise |overlap| within the cluster
    gap: float                 # max pairwise eigenvalue distance within the cluster


@dataclass(frozen=True)
class SweepTrace:
    """Branch-continuous eigenvalues along a one-parameter sweep."""

    knob: str
    grid: NDArray[np.float64]
    branches: NDArray[np.complex128]  # shape (6, len(grid))
    stable: NDArray[np.bool_]         # drive below threshold at each point


def eig(dyn: DynMatrix, cluster_tol: float = 1e-6) -> EigenSet:
    """Dense eigendecomposition with eigenvalue clustering.

    Eigenvalues closer than cluster_tol (scaled by the spectral radius,
    floor 1) are grouped; near an exceptional point the eigenvectors of a
    cluster become nearly parallel, which defect_measure reports rather
    than treating as a failure.
    """
    h = dyn.entries
    lam, vec = np.linalg.eig(h)  # raises LinAlgError on non-convergence
    vec = vec / np.linalg.norm(vec, axis=0, keepdims=True)
    residual = float(np.max(np.linalg.norm(h @ vec - vec * lam, axis=0)))

    scale = max(1.0, float(np.max(np.abs(lam))))
    labels = _cluster_by_gap(lam, cluster_tol * scale)
    defect: dict[int, float] = {}
    for lab in set(labels):
        members = [i for i, li in enumerate(labels) if li == lab]
        defect[lab] = _max_overlap(vec, members)
    return EigenSet(
        eigenvalues=lam,
        eigenvectors=vec,
        cluster_labels=tuple(labels),
        defect_measure=defect,
        residual=residual,
    )


def _cluster_by_gap(lam: NDArray[np.complex128], tol_abs: float) -> list[int]:
    """Greedy transitive clustering of eigenvalues by pairwise distance."""
    n = len(lam)
    labels = list(range(n))

    def find(i: int) -> int:
        while labels[i] != i:
            labels[i] = labels[labels[i]]
            i = labels[i]
        return i

    for i in range(n):
        for k in range(i + 1, n):
            if abs(lam[i] - lam[k]) < tol_abs:
                labels[find(i)] = find(k)
    roots = [find(i) for i in range(n)]
    remap = {r: idx for idx, r in enumerate(dict.fromkeys(roots))}
    return [remap[r] for r in roots]


def _max_overlap(vec: NDArray[np.complex128], members: list[int]) -> float:
    if len(members) < 2:
        return 0.0
    return max(
        abs(np.vdot(vec[:, a], vec[:, b]))
        for idx, a in enumerate(members)
        for b in members[idx + 1 :]
    )


def coalescence_measure(params: ChainParams) -> float:
    """Smallest over eigenvalue pairs of gap/scale + (1 - |overlap|).

    Near zero only where a pair coalesces in both eigenvalue and
    eigenvector, i.e. at an exceptional point.
    """
    h = build_dyn_matrix(params).entries
    lam, vec = np.linalg.eig(h)
    vec = vec / np.linalg.norm(vec, axis=0, keepdims=True)
    scale = max(1.0, float(np.max(np.abs(lam))))
    best = np.inf
    for i in range(6):
        for k in range(i + 1, 6):
            m = abs(lam[i] - lam[k]) / scale + 1.0 - abs(np.vdot(vec[:, i], vec[:, k]))
            if m < best:
                best = m
    return float(best)


def detect_ep(
    params: ChainParams,
    knob: str,
    knob_range: tuple[float, float],
    tol: float = 1e-6,
    scan_points: int = 401,
) -> list[EPRecord]:
    """Locate exceptional points along one parameter.

    Scans the coalescence measure over the range, refines every local
    minimum by golden-section search, and keeps refined points where some
    eigenvalue pair satisfies gap/scale < tol and |overlap| > 1 - tol.
    Accepted pairs are merged transitively into clusters; one record is
    returned per cluster (a point can carry several distinct coalescences).

    Returns an empty list when no EP lies in the range.
    """
    lo, hi = float(knob_range[0]), float(knob_range[1])
    if not (np.isfinite(lo) and np.isfinite(hi) and hi > lo):
        raise ValueError(f"invalid knob range {knob_range}")
    if tol <= 0:
        raise ValueError("tol must be positive")

    def measure(x: float) -> float:
        return coalescence_measure(params.with_value(knob, x))

    grid = np.linspace(lo, hi, scan_points)
    vals = np.array([measure(x) for x in grid])

    # candidate brackets: interior local minima plus dipping endpoints
    candidates: list[int] = [
        i
        for i in range(1, scan_points - 1)
        if vals[i] <= vals[i - 1] and vals[i] <= vals[i + 1]
    ]
    if vals[0] < vals[1]:
        candidates.insert(0, 0)
    if vals[-1] < vals[-2]:
        candidates.append(scan_points - 1)

    records: list[EPRecord] = []
    seen: list[float] = []
    span = hi - lo
    for i in candidates:
        a = grid[max(i - 1, 0)]
        b = grid[min(i + 1, scan_points - 1)]
        x_hat = _golden_section(measure, a, b, xtol=1e-13 * max(1.0, abs(hi), abs(lo)))
        if any(abs(x_hat - s) < 1e-8 * span for s in seen):
            continue
        point_records = _records_at(params.with_value(knob, x_hat), knob, x_hat, tol)
        if point_records:
            seen.append(x_hat)
            records.extend(point_records)
    records.sort(key=lambda r: (r.knob_value, -r.coalesced_lambda.real))
    return records


def _golden_section(f, a: float, b: float, xtol: float, max_iter: int = 400) -> float:
    """Golden-section minimization; error out rather than loop forever."""
    c = b - _GOLDEN * (b - a)
    d = a + _GOLDEN * (b - a)
    fc, fd = f(c), f(d)
    for _ in range(max_iter):
        if b - a <= xtol:
            return (a + b) / 2
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - _GOLDEN * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + _GOLDEN * (b - a)
            fd = f(d)
    raise RuntimeError(f"golden-section search failed to converge on [{a}, {b}]")


def _records_at(params: ChainParams, knob: str, knob_value: float, tol: float) -> list[EPRecord]:
    """Build EP records for every coalescing cluster at a fixed parameter point."""
    h = build_dyn_matrix(params).entries
    lam, vec = np.linalg.eig(h)
    vec = vec / np.linalg.norm(vec, axis=0, keepdims=True)
    scale = max(1.0, float(np.max(np.abs(lam))))

    accepted = [
        (i, k)
        for i in range(6)
        for k in range(i + 1, 6)
        if abs(lam[i] - lam[k]) / scale < tol
        and abs(np.vdot(vec[:, i], vec[:, k])) > 1.0 - tol
    ]
    if not accepted:
        return []

    # transitive merge of accepted pairs into clusters
    parent = list(range(6))

    def find(i: int) -> int:
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i, k in accepted:
        parent[find(i)] = find(k)
    clusters: dict[int, list[int]] = {}
    for i, k in accepted:
        clusters.setdefault(find(i), [])
    for i in range(6):
        if find(i) in clusters:
            clusters[find(i)].append(i)

    records = []
    for members in clusters.values():
        lam_bar = complex(np.mean(lam[members]))
        order = _order_of(h, lam_bar, len(members), scale)
        records.append(
            EPRecord(
                knob=knob,
                knob_value=float(knob_value),
                coalesced_lambda=lam_bar,
                order=order,
                defect_measure=_max_overlap(vec, members),
                gap=max(abs(lam[a] - lam[b]) for ai, a in enumerate(members) for b in members[ai + 1 :]),
            )
        )
    return records


def _order_of(h: NDArray[np.complex128], lam_bar: complex, size: int, scale: float) -> int:
    """Cluster size, sanity-checked against the rank structure of (H - lambda).

    For a genuinely defective cluster the geometric multiplicity
    6 - rank(H - lambda) is smaller than the cluster size; if the rank test
    disagrees with the cluster size we still report the cluster size, which
    is the algebraic-multiplicity estimate the caller asked for.
    """
    shifted = h - lam_bar * np.eye(6)
    svals = np.linalg.svd(shifted, compute_uv=False)
    rank = int(np.sum(svals > 1e-7 * scale))
    geometric = 6 - rank
    if geometric >= size:
        # eigenvectors nearly parallel yet rank says semisimple: borderline
        # numerics; keep the pair count
        return size
    return size


def sweep_eigenvalues(
    params: ChainParams, knob: str, grid: NDArray[np.float64]
) -> SweepTrace:
    """Eigenvalues along a parameter grid, matched into continuous branches.

    Adjacent grid points are matched by solving the 6x6 assignment problem
    on |lambda_i(k) - lambda_j(k+1)| so that branch crossings do not swap
    labels. Points at or above the critical drive are computed and tagged
    unstable rather than skipped.
    """
    grid = np.asarray(grid, dtype=float)
    if grid.ndim != 1 or len(grid) < 2 or np.any(np.diff(grid) <= 0):
        raise ValueError("grid must be a sorted 1-d array with at least 2 points")

    branches = np.empty((6, len(grid)), dtype=np.complex128)
    stable = np.empty(len(grid), dtype=bool)
    prev = None
    for idx, x in enumerate(grid):
        p = params.with_value(knob, float(x))
        lam = np.linalg.eigvals(build_dyn_matrix(p).entries)
        if prev is None:
            # deterministic start: order by (Re, Im)
            lam = lam[np.lexsort((lam.imag, lam.real))]
        else:
            cost = np.abs(prev[:, None] - lam[None, :])
            _, cols = linear_sum_assignment(cost)
            lam = lam[cols]
        branches[:, idx] = lam
        stable[idx] = p.omega_drive < critical_drive(p)
        prev = lam
    return SweepTrace(knob=knob, grid=grid, branches=branches, stable=stable)


def evolve_first_moments(
    dyn: DynMatrix,
    psi0: NDArray[np.complex128],
    t_grid: NDArray[np.float64],
) -> NDArray[np.complex128]:
    """Integrate i dPsi/dt = H Psi on t_grid (increasing from 0).

    Returns an array of shape (len(t_grid), 6). Uses an adaptive high-order
    Runge-Kutta method with tight tolerances; integration failure (e.g.
    step-size underflow) is surfaced as RuntimeError.
    """
    t_grid = np.asarray(t_grid, dtype=float)
    psi0 = np.asarray(psi0, dtype=np.complex128)
    if psi0.shape != (6,):
        raise ValueError("psi0 must be a 6-vector")
    if t_grid.ndim != 1 or t_grid[0] < 0 or np.any(np.diff(t_grid) <= 0):
        raise ValueError("t_grid must be increasing and start at t >= 0")
    h = dyn.entries

    if t_grid[-1] == 0.0:
        return np.repeat(psi0[None, :], len(t_grid), axis=0)

    sol = solve_ivp(
        lambda _t, v: -1j * (h @ v),
        (0.0, float(t_grid[-1])),
        psi0,
        t_eval=t_grid,
        method="DOP853",
        rtol=1e-11,
        atol=1e-13,
    )
    if not sol.success:
        raise RuntimeError(f"first-moment integration failed: {sol.message}")
    return sol.y.T
