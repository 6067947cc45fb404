"""Readers for the trimerep CLI file formats.

Two formats exist: eigenvalue-sweep CSV (header
`omega,branch,re_lambda,im_lambda,stable`) and spectrum CSV (header
`omega,s_value`) accompanied by a JSON sidecar carrying parameters, located
peaks, marker positions, and the grid integral.
"""

from __future__ import annotations

import csv
import json
import os
from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray

EIG_HEADER = ["omega", "branch", "re_lambda", "im_lambda", "stable"]
SPECTRUM_HEADER = ["omega", "s_value"]
SIDECAR_KEYS = {"params", "method", "peaks", "markers", "integral", "critical_drive"}


@dataclass(frozen=True)
class EigSweep:
    """Eigenvalue branches over a drive grid, as written by `trimerep eig`."""

    omega: NDArray[np.float64]  # (points,)
    branches: NDArray[np.complex128]  # (6, points)
    stable: NDArray[np.bool_]  # (points,)


@dataclass(frozen=True)
class SpectrumData:
    """One spectrum trace plus its sidecar metadata."""

    omega: NDArray[np.float64]
    values: NDArray[np.float64]
    params: dict
    markers: tuple[float, ...]
    peaks: tuple[dict, ...]


def _require_exists(path: str) -> None:
    if not os.path.exists(path):
        raise FileNotFoundError(f"input file missing: {path}")


def read_eig_csv(path: str) -> EigSweep:
    """Parse an eigenvalue-sweep CSV into branch arrays."""
    _require_exists(path)
    with open(path, encoding="utf-8", newline="") as handle:
        reader = csv.reader(handle)
        header = next(reader)
        if header != EIG_HEADER:
            raise ValueError(f"{path}: expected header {EIG_HEADER}, got {header}")
        rows = [(float(r[0]), int(r[1]), float(r[2]), float(r[3]), r[4]) for r in reader]
    if not rows or len(rows) % 6 != 0:
        raise ValueError(f"{path}: expected 6 branch rows per grid point, got {len(rows)} rows")
    points = len(rows) // 6
    omega = np.empty(points)
    branches = np.empty((6, points), dtype=np.complex128)
    stable = np.empty(points, dtype=bool)
    for k in range(points):
        block = rows[6 * k : 6 * (k + 1)]
        omega[k] = block[0][0]
        stable[k] = block[0][4] == "true"
        for w, branch, re, im, flag in block:
            if w != omega[k] or flag != block[0][4]:
                raise ValueError(f"{path}: inconsistent block at grid point {k}")
            branches[branch, k] = re + 1j * im
    return EigSweep(omega=omega, branches=branches, stable=stable)


def read_spectrum_csv(path: str) -> tuple[NDArray[np.float64], NDArray[np.float64]]:
    """Parse a spectrum CSV into (omega, values)."""
    _require_exists(path)
    with open(path, encoding="utf-8", newline="") as handle:
        reader = csv.reader(handle)
        header = next(reader)
        if header != SPECTRUM_HEADER:
            raise ValueError(f"{path}: expected header {SPECTRUM_HEADER}, got {header}")
        rows = [(float(r[0]), float(r[1])) for r in reader]
    if len(rows) < 2:
        raise ValueError(f"{path}: spectrum needs at least two samples")
    return np.array([r[0] for r in rows]), np.array([r[1] for r in rows])


def read_sidecar(path: str) -> dict:
    """Parse and validate a spectrum JSON sidecar."""
    _require_exists(path)
    with open(path, encoding="utf-8") as handle:
        data = json.load(handle)
    missing = SIDECAR_KEYS - set(data)
    if missing:
        raise ValueError(f"{path}: sidecar missing keys {sorted(missing)}")
    return data


def read_spectrum(csv_path: str, sidecar_path: str) -> SpectrumData:
    """Read a spectrum CSV together with its sidecar."""
    omega, values = read_spectrum_csv(csv_path)
    sidecar = read_sidecar(sidecar_path)
    return SpectrumData(
        omega=omega,
        values=values,
        params=sidecar["params"],
        markers=tuple(sidecar["markers"]),
        peaks=tuple(sidecar["peaks"]),
    )
