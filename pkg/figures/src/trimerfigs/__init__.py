"""Figure scripts consuming trimerep CLI outputs (CSV + JSON sidecars).

This package never imports the simulation library and recomputes no
physics: every number it draws — curves, peak markers, stability flags —
comes from files produced by the `trimerep` command-line tool.
"""

from __future__ import annotations

from .figures import Fig2Inputs, Fig3Inputs, render_fig2, render_fig3
from .generate import fig2_paths, fig3_paths, generate_fig2_data, generate_fig3_data
from .io import (
    EigSweep,
    SpectrumData,
    read_eig_csv,
    read_sidecar,
    read_spectrum,
    read_spectrum_csv,
)
from .panels import PanelSpec

__version__ = "0.1.0"

__all__ = [
    "EigSweep",
    "Fig2Inputs",
    "Fig3Inputs",
    "PanelSpec",
    "SpectrumData",
    "__version__",
    "fig2_paths",
    "fig3_paths",
    "generate_fig2_data",
    "generate_fig3_data",
    "read_eig_csv",
    "read_sidecar",
    "read_spectrum",
    "read_spectrum_csv",
    "render_fig2",
    "render_fig3",
]
