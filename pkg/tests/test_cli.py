"""Command-line interface tests: formats, sidecars, exit codes, verify suite.

Most tests call main() in-process for speed; one subprocess test proves the
installed entry points work end to end.
"""

from __future__ import annotations

import csv
import io
import json
import subprocess
import sys

import numpy as np
import pytest

from trimerep.cli import main

EXPECTED_EIG_HEADER = ["omega", "branch", "re_lambda", "im_lambda", "stable"]
EXPECTED_SPECTRUM_HEADER = ["omega", "s_value"]


def _parse_csv(text: str) -> tuple[list[str], list[list[str]]]:
    rows = list(csv.reader(io.StringIO(text)))
    return rows[0], rows[1:]


def _split_csv_and_json(text: str) -> tuple[str, dict]:
    cut = text.index("{")
    return text[:cut], json.loads(text[cut:])


def test_version_flag_exits_cleanly(capsys) -> None:
    with pytest.raises(SystemExit) as excinfo:
        main(["--version"])
    assert excinfo.value.code == 0
    assert "trimerep" in capsys.readouterr().out


def test_eig_writes_csv_to_stdout(capsys) -> None:
    assert main(["eig", "--j", "0.5", "--omega", "0.5:2.5:5"]) == 0
    header, rows = _parse_csv(capsys.readouterr().out)
    assert header == EXPECTED_EIG_HEADER
    assert len(rows) == 5 * 6
    branches = {int(r[1]) for r in rows}
    assert branches == set(range(6))
    # every cell round-trips as a float; stability flips across the threshold
    for row in rows:
        float(row[0]), float(row[2]), float(row[3])
    flags = {float(r[0]): r[4] for r in rows}
    assert flags[0.5] == "true"
    assert flags[2.5] == "false"


def test_eig_writes_file_atomically(tmp_path) -> None:
    out = tmp_path / "sweep.csv"
    assert main(["eig", "--omega", "1.8:2.2:3", "--output", str(out)]) == 0
    header, rows = _parse_csv(out.read_text())
    assert header == EXPECTED_EIG_HEADER
    assert len(rows) == 3 * 6
    assert not list(tmp_path.glob("*.part"))


def test_spectrum_file_with_json_sidecar(tmp_path) -> None:
    out = tmp_path / "spec.csv"
    code = main(
        [
            "spectrum",
            "--method",
            "ep",
            "--j",
            "0.5",
            "--omega-drive",
            "2.0",
            "--output",
            str(out),
        ]
    )
    assert code == 0
    header, rows = _parse_csv(out.read_text())
    assert header == EXPECTED_SPECTRUM_HEADER
    assert len(rows) == 2001
    sidecar = json.loads((tmp_path / "spec.json").read_text())
    assert set(sidecar) == {
        "params",
        "method",
        "peaks",
        "markers",
        "integral",
        "critical_drive",
    }
    split = float(np.sqrt(2.0) * 0.5)
    assert sidecar["markers"] == pytest.approx([-split, split])
    assert len(sidecar["peaks"]) == 2
    assert sidecar["params"]["j"] == 0.5
    assert 0.5 < sidecar["integral"] <= 1.001


def test_spectrum_sidecar_markers_absent_without_coupling(tmp_path) -> None:
    out = tmp_path / "spec.csv"
    code = main(
        ["spectrum", "--method", "ep", "--j", "0", "--omega-drive", "2.0", "--output", str(out)]
    )
    assert code == 0
    sidecar = json.loads((tmp_path / "spec.json").read_text())
    assert sidecar["markers"] == []
    assert len(sidecar["peaks"]) == 1


def test_spectrum_stdout_emits_csv_then_sidecar(capsys) -> None:
    # leading '-' requires the '=' form, as with any argparse option value
    assert main(["spectrum", "--w=-2:2:101"]) == 0
    csv_text, sidecar = _split_csv_and_json(capsys.readouterr().out)
    header, rows = _parse_csv(csv_text)
    assert header == EXPECTED_SPECTRUM_HEADER
    assert len(rows) == 101
    assert sidecar["method"] == "closed_form"


def test_spectrum_fourier_method_runs(capsys) -> None:
    code = main(["spectrum", "--method", "fourier", "--j", "0.5", "--w=-2:2:51"])
    assert code == 0
    csv_text, sidecar = _split_csv_and_json(capsys.readouterr().out)
    assert sidecar["method"] == "fourier_numeric"
    _, rows = _parse_csv(csv_text)
    assert len(rows) == 51


def test_spectrum_insufficient_decay_maps_to_exit_3(capsys) -> None:
    # slowest branch at this coupling decays too slowly for the capped grid
    code = main(["spectrum", "--method", "fourier", "--j", "0.25", "--w=-2:2:51"])
    assert code == 3
    assert "error:" in capsys.readouterr().err


def test_spectrum_above_threshold_maps_to_exit_4(capsys) -> None:
    code = main(["spectrum", "--omega-drive", "2.4"])
    assert code == 4
    assert "error:" in capsys.readouterr().err


def test_ep_search_reports_coalescence(capsys) -> None:
    # the interval holds both coalescences at the drive-equals-detuning point
    # but excludes the slow-branch closing at ~2.042
    code = main(["ep", "--j", "0.5", "--range", "1.95:2.02"])
    assert code == 0
    report = json.loads(capsys.readouterr().out)
    assert report["knob"] == "omega_drive"
    assert report["predicted"]["ep1"] == 2.0
    records = report["records"]
    assert len(records) == 2
    for record in records:
        assert abs(record["knob_value"] - 2.0) < 1e-4
        assert record["order"] == 2
        assert abs(record["coalesced_lambda"]["im"] + 0.5) < 1e-6
        assert abs(abs(record["coalesced_lambda"]["re"]) - 0.5) < 1e-6


def test_ep_search_empty_interval(capsys) -> None:
    code = main(["ep", "--j", "0.25", "--range", "0.2:0.8"])
    assert code == 0
    assert json.loads(capsys.readouterr().out)["records"] == []


def test_ep_unknown_knob_maps_to_exit_3(capsys) -> None:
    code = main(["ep", "--knob", "bogus", "--range", "1.9:2.1"])
    assert code == 3
    assert "error:" in capsys.readouterr().err


def test_fit_recovers_coupling_from_spectrum_csv(tmp_path) -> None:
    spec = tmp_path / "spec.csv"
    assert (
        main(
            [
                "spectrum",
                "--method",
                "ep",
                "--j",
                "0.4",
                "--omega-drive",
                "2.0",
                "--output",
                str(spec),
            ]
        )
        == 0
    )
    out = tmp_path / "fit.json"
    assert main(["fit", str(spec), "--output", str(out)]) == 0
    report = json.loads(out.read_text())
    assert abs(report["j_hat"] - 0.4) / 0.4 < 0.01
    low, high = report["peak_positions"]
    assert low < 0.0 < high
    assert "note" in report


def test_fit_rejects_foreign_csv(tmp_path, capsys) -> None:
    bad = tmp_path / "bad.csv"
    bad.write_text("frequency,power\n0.0,1.0\n")
    assert main(["fit", str(bad)]) == 3
    assert "error:" in capsys.readouterr().err


def test_fit_maps_not_doublet_to_exit_5(tmp_path, capsys) -> None:
    spec = tmp_path / "four_peaks.csv"
    assert main(["spectrum", "--j", "0.5", "--omega-drive", "1.0", "--output", str(spec)]) == 0
    assert main(["fit", str(spec)]) == 5
    assert "error:" in capsys.readouterr().err


def test_bad_flags_exit_with_code_2() -> None:
    for argv in (
        ["eig", "--omega", "5:1:10"],
        ["eig", "--omega", "1:2"],
        ["spectrum", "--method", "bogus"],
        ["ep", "--range", "2.0"],
        ["verify", "--cutoff", "4,6"],
        ["nonsense"],
    ):
        with pytest.raises(SystemExit) as excinfo:
            main(argv)
        assert excinfo.value.code == 2


def test_verify_suite_passes(capsys) -> None:
    assert main(["verify"]) == 0
    out = capsys.readouterr().out
    lines = out.strip().splitlines()
    assert lines[-1] == "4/4 checks passed (seed 0)"
    for line in lines[:-1]:
        assert line.startswith("PASS  ")
        assert "measured" in line and "tolerance" in line


def test_verify_detects_injected_defect(capsys) -> None:
    assert main(["verify", "--inject-sign-flip"]) == 1
    out = capsys.readouterr().out
    assert any(line.startswith("FAIL  ") for line in out.splitlines())


def test_verify_with_fock_oracle(capsys) -> None:
    assert main(["verify", "--oracle", "fock"]) == 0
    out = capsys.readouterr().out
    lines = out.strip().splitlines()
    assert lines[-1] == "6/6 checks passed (seed 0)"
    assert sum("oracle:" in line for line in lines) == 2


def test_installed_entry_points_work(tmp_path) -> None:
    result = subprocess.run(
        [sys.executable, "-m", "trimerep", "eig", "--omega", "1.9:2.1:3"],
        capture_output=True,
        text=True,
        check=False,
    )
    assert result.returncode == 0
    assert result.stdout.startswith("omega,branch,re_lambda,im_lambda,stable")
    script = subprocess.run(
        ["trimerep", "--version"], capture_output=True, text=True, check=False
    )
    assert script.returncode == 0
    assert "trimerep" in script.stdout
