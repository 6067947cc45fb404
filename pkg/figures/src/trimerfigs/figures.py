"""Figure layouts: a 3×3 eigenvalue/spectrum grid and a 3-panel spectra row.

Both renderers return the matplotlib Figure and write raster (PNG) plus
vector (PDF) files next to the requested stem. Inputs are file paths to CLI
outputs; any missing file raises FileNotFoundError before drawing starts.
"""

from __future__ import annotations

import os
import string
from dataclasses import dataclass

from .io import read_eig_csv, read_spectrum
from .panels import PanelSpec, draw_eig_panel, draw_spectrum_panel


def _require_files(paths: tuple[str, ...]) -> None:
    missing = [p for p in paths if not os.path.isfile(p)]
    if missing:
        raise FileNotFoundError("missing figure inputs: " + ", ".join(missing))


@dataclass(frozen=True)
class Fig2Inputs:
    """Nine files: one eigenvalue sweep and one coalescence-point spectrum
    (CSV + sidecar) per coupling row."""

    eig_csvs: tuple[str, str, str]
    spectrum_csvs: tuple[str, str, str]
    sidecar_jsons: tuple[str, str, str]


@dataclass(frozen=True)
class Fig3Inputs:
    """Per panel: several spectrum traces (CSV + sidecar path pairs)."""

    panels: tuple[tuple[tuple[str, str], ...], ...]  # 3 panels of (csv, json)


def _save(fig, output_stem: str) -> tuple[str, str]:
    png = output_stem + ".png"
    pdf = output_stem + ".pdf"
    fig.savefig(png, dpi=200, bbox_inches="tight")
    fig.savefig(pdf, bbox_inches="tight")
    return png, pdf


def render_fig2(inputs: Fig2Inputs, output_stem: str):
    """Render the 3×3 grid: rows are couplings, columns are Re λ, Im λ, S(ω)."""
    import matplotlib.pyplot as plt

    _require_files(inputs.eig_csvs + inputs.spectrum_csvs + inputs.sidecar_jsons)
    labels = iter(f"({c})" for c in string.ascii_lowercase)
    fig, axes = plt.subplots(3, 3, figsize=(9.5, 8.0), constrained_layout=True)
    for row in range(3):
        sweep = read_eig_csv(inputs.eig_csvs[row])
        trace = read_spectrum(inputs.spectrum_csvs[row], inputs.sidecar_jsons[row])
        for col, kind in enumerate(("eig_re", "eig_im", "spectrum")):
            panel = PanelSpec(
                kind=kind,
                inputs=(inputs.eig_csvs[row],)
                if kind != "spectrum"
                else (inputs.spectrum_csvs[row], inputs.sidecar_jsons[row]),
                markers=trace.markers if kind == "spectrum" else (),
                label=next(labels),
            )
            ax = axes[row, col]
            if kind == "spectrum":
                draw_spectrum_panel(ax, panel, [trace])
            else:
                draw_eig_panel(ax, panel, sweep)
        axes[row, 0].set_title(rf"$J = {trace.params['j']:g}\gamma$", fontsize=10, loc="left")
    _save(fig, output_stem)
    return fig


def render_fig3(inputs: Fig3Inputs, output_stem: str):
    """Render three spectra panels, one coupling each, several drives per panel."""
    import matplotlib.pyplot as plt

    if len(inputs.panels) != 3:
        raise ValueError(f"expected 3 panels, got {len(inputs.panels)}")
    _require_files(tuple(path for panel in inputs.panels for pair in panel for path in pair))
    labels = iter(f"({c})" for c in string.ascii_lowercase)
    fig, axes = plt.subplots(1, 3, figsize=(10.5, 3.2), constrained_layout=True)
    for col, panel_files in enumerate(inputs.panels):
        traces = [read_spectrum(csv_path, json_path) for csv_path, json_path in panel_files]
        first = traces[0]
        panel = PanelSpec(
            kind="spectrum",
            inputs=tuple(path for pair in panel_files for path in pair),
            markers=first.markers,
            label=next(labels),
        )
        draw_spectrum_panel(axes[col], panel, traces)
        axes[col].set_title(rf"$J = {first.params['j']:g}\gamma$", fontsize=10, loc="left")
    _save(fig, output_stem)
    return fig
