"""Panel description and drawing primitives shared by the figure layouts."""

from __future__ import annotations

import os
from dataclasses import dataclass

import numpy as np

from .io import EigSweep, SpectrumData

PANEL_KINDS = ("eig_re", "eig_im", "spectrum")


@dataclass(frozen=True)
class PanelSpec:
    """One panel: input files, what to draw, and where the dashed markers go.

    Markers are taken verbatim from the CLI sidecars (empty exactly when the
    chain coupling is zero); this module never derives them.
    """

    kind: str
    inputs: tuple[str, ...]
    markers: tuple[float, ...] = ()
    label: str = ""
    xlim: tuple[float, float] | None = None
    ylim: tuple[float, float] | None = None

    def __post_init__(self) -> None:
        if self.kind not in PANEL_KINDS:
            raise ValueError(f"unknown panel kind {self.kind!r}; expected one of {PANEL_KINDS}")
        missing = [path for path in self.inputs if not os.path.exists(path)]
        if missing:
            raise FileNotFoundError(f"input file missing: {', '.join(missing)}")


def _finish_axes(ax, spec: PanelSpec) -> None:
    for position in spec.markers:
        ax.axvline(position, linestyle="--", color="0.4", linewidth=0.9, zorder=0)
    if spec.label:
        ax.text(0.03, 0.92, spec.label, transform=ax.transAxes, fontsize=10)
    if spec.xlim is not None:
        ax.set_xlim(*spec.xlim)
    if spec.ylim is not None:
        ax.set_ylim(*spec.ylim)


def draw_eig_panel(ax, spec: PanelSpec, sweep: EigSweep) -> None:
    """Plot the six eigenvalue branches (real or imaginary part) over drive."""
    part = np.real if spec.kind == "eig_re" else np.imag
    for branch in range(6):
        ax.plot(sweep.omega, part(sweep.branches[branch]), linewidth=1.1)
    ax.set_xlabel(r"$\Omega/\gamma$")
    ax.set_ylabel(
        r"$\mathrm{Re}\,\lambda/\gamma$" if spec.kind == "eig_re" else r"$\mathrm{Im}\,\lambda/\gamma$"
    )
    _finish_axes(ax, spec)


def draw_spectrum_panel(ax, spec: PanelSpec, traces: list[SpectrumData]) -> None:
    """Plot one or more spectrum traces, labelled by their drive amplitude."""
    for trace in traces:
        ax.plot(
            trace.omega,
            trace.values,
            linewidth=1.1,
            label=rf"$\Omega = {trace.params['omega_drive']:g}\gamma$",
        )
    ax.set_xlabel(r"$\omega/\gamma$")
    ax.set_ylabel(r"$S(\omega)\,\gamma$")
    if len(traces) > 1:
        ax.legend(fontsize=7, frameon=False)
    _finish_axes(ax, spec)
