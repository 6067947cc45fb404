"""Produce the figure input files by invoking the trimerep command line.

This is the only place the simulation enters: through its installed CLI and
the CSV/JSON files it writes. Couplings, drives, and grids below match the
figure layouts; points can be reduced for quick runs.
"""

from __future__ import annotations

import os
import subprocess

from .figures import Fig2Inputs, Fig3Inputs

COUPLINGS = (0.0, 0.25, 0.5)
FIG3_DRIVES = (1.0, 1.5, 2.0, 2.2)
COALESCENCE_DRIVE = 2.0


def _tag(value: float) -> str:
    return f"{value:g}".replace(".", "p")


def _run(cmd: list[str]) -> None:
    result = subprocess.run(cmd, capture_output=True, text=True)
    if result.returncode != 0:
        raise RuntimeError(
            f"command failed ({result.returncode}): {' '.join(cmd)}\n{result.stderr}"
        )


def fig2_paths(data_dir: str) -> Fig2Inputs:
    eig, spec, side = [], [], []
    for j in COUPLINGS:
        stem = os.path.join(data_dir, f"fig2_j{_tag(j)}")
        eig.append(stem + "_eig.csv")
        spec.append(stem + "_spec.csv")
        side.append(stem + "_spec.json")
    return Fig2Inputs(
        eig_csvs=tuple(eig), spectrum_csvs=tuple(spec), sidecar_jsons=tuple(side)
    )


def fig3_paths(data_dir: str) -> Fig3Inputs:
    panels = []
    for j in COUPLINGS:
        pairs = []
        for omega in FIG3_DRIVES:
            stem = os.path.join(data_dir, f"fig3_j{_tag(j)}_om{_tag(omega)}")
            pairs.append((stem + ".csv", stem + ".json"))
        panels.append(tuple(pairs))
    return Fig3Inputs(panels=tuple(panels))


def generate_fig2_data(
    data_dir: str, command: str = "trimerep", eig_points: int = 401, w_points: int = 2001
) -> Fig2Inputs:
    """Run the CLI to produce the nine fig-2 input files."""
    os.makedirs(data_dir, exist_ok=True)
    inputs = fig2_paths(data_dir)
    for row, j in enumerate(COUPLINGS):
        _run(
            [
                command,
                "eig",
                "--j",
                str(j),
                "--omega",
                f"1.5:2.5:{eig_points}",
                "--output",
                inputs.eig_csvs[row],
            ]
        )
        _run(
            [
                command,
                "spectrum",
                "--method",
                "ep",
                "--j",
                str(j),
                "--omega-drive",
                str(COALESCENCE_DRIVE),
                f"--w=-3:3:{w_points}",
                "--output",
                inputs.spectrum_csvs[row],
            ]
        )
    return inputs


def generate_fig3_data(
    data_dir: str, command: str = "trimerep", w_points: int = 2001
) -> Fig3Inputs:
    """Run the CLI to produce the fig-3 input files (three panels, four drives)."""
    os.makedirs(data_dir, exist_ok=True)
    inputs = fig3_paths(data_dir)
    for panel, j in enumerate(COUPLINGS):
        for (csv_path, _), omega in zip(inputs.panels[panel], FIG3_DRIVES):
            method = "ep" if omega == COALESCENCE_DRIVE else "closed"
            _run(
                [
                    command,
                    "spectrum",
                    "--method",
                    method,
                    "--j",
                    str(j),
                    "--omega-drive",
                    str(omega),
                    f"--w=-3:3:{w_points}",
                    "--output",
                    csv_path,
                ]
            )
    return inputs
