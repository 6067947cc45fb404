"""Shared fixtures: one session-scoped data directory filled via the CLI."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import pytest

from trimerfigs.generate import generate_fig2_data, generate_fig3_data


@pytest.fixture(scope="session")
def data_dir(tmp_path_factory: pytest.TempPathFactory) -> str:
    """Directory holding every figure input, produced by the trimerep CLI."""
    root = tmp_path_factory.mktemp("figdata")
    generate_fig2_data(str(root))
    generate_fig3_data(str(root))
    return str(root)
