"""Kernel selection: compiled extension when available, numpy fallback otherwise.

Set TRIMEREP_FORCE_NUMPY=1 in the environment (before import) to skip the
compiled extension; KERNEL_KIND reports which implementation is active.
"""

from __future__ import annotations

import os

import numpy as np

from ._liouville_np import make_rhs as _make_rhs_numpy

KERNEL_KIND = "numpy"
_compiled = None

if not os.environ.get("TRIMEREP_FORCE_NUMPY"):
    try:
        from . import _liouville as _compiled  # type: ignore[attr-defined]

        KERNEL_KIND = "compiled"
    except ImportError:
        _compiled = None


def _make_rhs_compiled(
    dims: tuple[int, int, int],
    gamma: float,
    delta: float,
    j: float,
    omega: float,
    delta_a: float = 0.0,
    delta_c: float = 0.0,
):
    top = max(dims) + 2
    sq = np.sqrt(np.arange(top, dtype=float))
    idx = np.arange(top, dtype=float)
    sqb2 = np.sqrt(idx * np.maximum(idx - 1.0, 0.0))

    def rhs(rho: np.ndarray, out: np.ndarray) -> np.ndarray:
        _compiled.liouville_rhs(
            np.ascontiguousarray(rho, dtype=np.complex128),
            out,
            gamma, delta, j, omega, delta_a, delta_c, sq, sqb2,
        )
        return out

    return rhs


def make_rhs(
    dims: tuple[int, int, int],
    gamma: float,
    delta: float,
    j: float,
    omega: float,
    delta_a: float = 0.0,
    delta_c: float = 0.0,
):
    """Return rhs(rho, out) -> out using the fastest available kernel."""
    if KERNEL_KIND == "compiled":
        return _make_rhs_compiled(dims, gamma, delta, j, omega, delta_a, delta_c)
    return _make_rhs_numpy(dims, gamma, delta, j, omega, delta_a, delta_c)


def make_rhs_numpy(
    dims: tuple[int, int, int],
    gamma: float,
    delta: float,
    j: float,
    omega: float,
    delta_a: float = 0.0,
    delta_c: float = 0.0,
):
    """Always return the pure-numpy kernel (for cross-checks and benchmarks)."""
    return _make_rhs_numpy(dims, gamma, delta, j, omega, delta_a, delta_c)
