"""Pure-numpy master-equation right-hand side (fallback kernel).

Evaluates d(rho)/dt = -i[H, rho] + gamma (2 b rho b† - b†b rho - rho b†b)
on a density operator stored as a 6-axis tensor
(n_a, n_b, n_c, n_a', n_b', n_c') over the truncated product basis.
Each Hamiltonian term becomes a shifted-slice multiply; the factory
precomputes every slice pair and weight array once so the per-call work
is pure vectorized arithmetic.
"""

from __future__ import annotations

import numpy as np


def _axis_slices(pairs: list[tuple[int, slice]]) -> tuple[slice, ...]:
    out = [slice(None)] * 6
    for axis, sl in pairs:
        out[axis] = sl
    return tuple(out)


def _axis_weight(values: np.ndarray, axis: int) -> np.ndarray:
    shape = [1] * 6
    shape[axis] = len(values)
    return values.reshape(shape)


def make_rhs(
    dims: tuple[int, int, int],
    gamma: float,
    delta: float,
    j: float,
    omega: float,
    delta_a: float = 0.0,
    delta_c: float = 0.0,
):
    """Build rhs(rho, out) -> out for fixed basis dimensions and parameters."""
    da, db, dc = dims
    dim_of = {0: da, 1: db, 2: dc, 3: da, 4: db, 5: dc}
    top = max(dims) + 2
    sq = np.sqrt(np.arange(top, dtype=float))
    idx = np.arange(top, dtype=float)
    sqb2 = np.sqrt(idx * np.maximum(idx - 1.0, 0.0))  # sqrt(n(n-1))

    n_arr = {axis: np.arange(dim_of[axis], dtype=float) for axis in range(6)}
    diag = (
        -1j
        * (
            delta_a * (_axis_weight(n_arr[0], 0) - _axis_weight(n_arr[3], 3))
            + delta * (_axis_weight(n_arr[1], 1) - _axis_weight(n_arr[4], 4))
            + delta_c * (_axis_weight(n_arr[2], 2) - _axis_weight(n_arr[5], 5))
        )
        - gamma * (_axis_weight(n_arr[1], 1) + _axis_weight(n_arr[4], 4))
    ).astype(np.complex128)

    # (coeff, out_slices, in_slices, weight) per shifted-slice term
    terms: list[tuple[complex, tuple, tuple, np.ndarray]] = []

    def add_left_hop(cre_axis: int, ann_axis: int, coeff: complex) -> None:
        # (x1† x2 rho)[m1, m2] = sqrt(m1) sqrt(m2+1) rho[m1-1, m2+1]
        d1, d2 = dim_of[cre_axis], dim_of[ann_axis]
        out_sl = _axis_slices([(cre_axis, slice(1, None)), (ann_axis, slice(None, -1))])
        in_sl = _axis_slices([(cre_axis, slice(None, -1)), (ann_axis, slice(1, None))])
        w = _axis_weight(sq[1:d1], cre_axis) * _axis_weight(sq[1:d2], ann_axis)
        terms.append((coeff, out_sl, in_sl, w))

    def add_right_hop(cre_axis: int, ann_axis: int, coeff: complex) -> None:
        # (rho x1† x2)[n1, n2] = sqrt(n1+1) sqrt(n2) rho[n1+1, n2-1]
        d1, d2 = dim_of[cre_axis], dim_of[ann_axis]
        out_sl = _axis_slices([(cre_axis, slice(None, -1)), (ann_axis, slice(1, None))])
        in_sl = _axis_slices([(cre_axis, slice(1, None)), (ann_axis, slice(None, -1))])
        w = _axis_weight(sq[1:d1], cre_axis) * _axis_weight(sq[1:d2], ann_axis)
        terms.append((coeff, out_sl, in_sl, w))

    if j != 0.0:
        for cre, ann in ((0, 1), (1, 0), (1, 2), (2, 1)):
            add_left_hop(cre, ann, -1j * j)
            add_right_hop(cre + 3, ann + 3, 1j * j)

    if omega != 0.0 and db >= 3:
        half = omega / 2.0
        # left b†2: out[m >= 2] = sqrt(m(m-1)) rho[m-2]
        terms.append(
            (
                -1j * half,
                _axis_slices([(1, slice(2, None))]),
                _axis_slices([(1, slice(None, -2))]),
                _axis_weight(sqb2[2:db], 1),
            )
        )
        # left b2: out[m <= db-3] = sqrt((m+1)(m+2)) rho[m+2]
        terms.append(
            (
                -1j * half,
                _axis_slices([(1, slice(None, -2))]),
                _axis_slices([(1, slice(2, None))]),
                _axis_weight(sqb2[2:db], 1),
            )
        )
        # right b†2: out[n <= db-3] = sqrt((n+1)(n+2)) rho[n+2]
        terms.append(
            (
                1j * half,
                _axis_slices([(4, slice(None, -2))]),
                _axis_slices([(4, slice(2, None))]),
                _axis_weight(sqb2[2:db], 4),
            )
        )
        # right b2: out[n >= 2] = sqrt(n(n-1)) rho[n-2]
        terms.append(
            (
                1j * half,
                _axis_slices([(4, slice(2, None))]),
                _axis_slices([(4, slice(None, -2))]),
                _axis_weight(sqb2[2:db], 4),
            )
        )

    # jump 2 gamma b rho b†: out[m, n] = sqrt(m+1) sqrt(n+1) rho[m+1, n+1]
    jump_out = _axis_slices([(1, slice(None, -1)), (4, slice(None, -1))])
    jump_in = _axis_slices([(1, slice(1, None)), (4, slice(1, None))])
    jump_w = _axis_weight(sq[1:db], 1) * _axis_weight(sq[1:db], 4)

    def rhs(rho: np.ndarray, out: np.ndarray) -> np.ndarray:
        np.multiply(rho, diag, out=out)
        for coeff, out_sl, in_sl, weight in terms:
            out[out_sl] += coeff * (weight * rho[in_sl])
        out[jump_out] += (2.0 * gamma) * (jump_w * rho[jump_in])
        return out

    return rhs
