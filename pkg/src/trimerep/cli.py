"""Command-line front end: sweeps, spectra, EP search, verification, fitting.

Exit codes: 0 success, 1 verification breach, 2 invalid flags, 3 solver or
quadrature failure, 4 no steady state at the requested drive, 5 spectrum
is not a doublet.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
import tempfile

import numpy as np

from . import __version__
from .eigen import detect_ep, sweep_eigenvalues
from .errors import (
    InsufficientDecayError,
    NoSteadyStateError,
    NotDoubletError,
)
from .fock import (
    FockConfig,
    evolve_rho,
    moment_derivative_check,
    random_core_state,
    vacuum_state,
)
from .model import (
    ChainParams,
    analytic_eigenvalues,
    build_dyn_matrix,
    critical_drive,
    ep_drive_strengths,
)
from .moments import closed_form_populations, solve_steady_state
from .spectra import (
    CouplingEstimate,
    SpectrumTrace,
    default_tau_grid,
    estimate_coupling,
    g1_closed_form,
    g1_qrt,
    spectrum_closed_form,
    spectrum_ep,
    spectrum_fourier,
)

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_BAD_FLAGS = 2
EXIT_SOLVER_FAILURE = 3
EXIT_NO_STEADY_STATE = 4
EXIT_NOT_DOUBLET = 5


def _parse_grid(spec: str) -> np.ndarray:
    """Parse 'min:max:points' into a linspace grid."""
    parts = spec.split(":")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError(f"grid must be min:max:points, got {spec!r}")
    try:
        lo, hi, n = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad grid {spec!r}: {exc}") from None
    if n < 2 or hi <= lo:
        raise argparse.ArgumentTypeError(f"grid needs max > min and points >= 2, got {spec!r}")
    return np.linspace(lo, hi, n)


def _parse_range(spec: str) -> tuple[float, float]:
    parts = spec.split(":")
    if len(parts) != 2:
        raise argparse.ArgumentTypeError(f"range must be min:max, got {spec!r}")
    lo, hi = float(parts[0]), float(parts[1])
    if hi <= lo:
        raise argparse.ArgumentTypeError(f"range needs max > min, got {spec!r}")
    return lo, hi


def _parse_cutoffs(spec: str) -> tuple[int, int, int]:
    parts = spec.split(",")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError(f"cutoffs must be three ints 'na,nb,nc', got {spec!r}")
    return tuple(int(p) for p in parts)  # type: ignore[return-value]


def _fmt(value: float) -> str:
    """Shortest round-trip decimal for CSV cells."""
    return repr(float(value))


def _write_text_atomic(path: str, content: str) -> None:
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp_path = tempfile.mkstemp(dir=directory, suffix=".part")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as handle:
            handle.write(content)
        os.replace(tmp_path, path)
    except BaseException:
        if os.path.exists(tmp_path):
            os.unlink(tmp_path)
        raise


def _emit(path: str | None, content: str) -> None:
    if path is None:
        sys.stdout.write(content)
    else:
        _write_text_atomic(path, content)


def _params_from_args(args: argparse.Namespace) -> ChainParams:
    return ChainParams(
        gamma=args.gamma,
        delta=args.delta,
        j=args.j,
        omega_drive=getattr(args, "omega_drive", 1.0),
    )


def _params_dict(params: ChainParams) -> dict:
    return {
        "gamma": params.gamma,
        "delta": params.delta,
        "j": params.j,
        "omega_drive": params.omega_drive,
        "delta_a": params.delta_a,
        "delta_c": params.delta_c,
    }


def cmd_eig(args: argparse.Namespace) -> int:
    params = ChainParams(gamma=args.gamma, delta=args.delta, j=args.j, omega_drive=args.omega[0])
    trace = sweep_eigenvalues(params, "omega_drive", args.omega)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["omega", "branch", "re_lambda", "im_lambda", "stable"])
    for point_idx, omega in enumerate(trace.grid):
        flag = "true" if trace.stable[point_idx] else "false"
        for branch in range(6):
            lam = trace.branches[branch, point_idx]
            writer.writerow([_fmt(omega), branch, _fmt(lam.real), _fmt(lam.imag), flag])
    _emit(args.output, buf.getvalue())
    return EXIT_OK


def _sidecar_path(csv_path: str) -> str:
    root, ext = os.path.splitext(csv_path)
    return root + ".json" if ext else csv_path + ".json"


def _spectrum_sidecar(params: ChainParams, trace: SpectrumTrace) -> dict:
    markers = []
    if params.j > 0:
        split = float(np.sqrt(2.0) * params.j)
        markers = [-split, split]
    return {
        "params": _params_dict(params),
        "method": trace.method,
        "peaks": [
            {"position": p.position, "height": p.height, "width": p.width}
            for p in trace.peaks
        ],
        "markers": markers,
        "integral": float(np.trapezoid(trace.values, x=trace.omega_grid)),
        "critical_drive": critical_drive(params),
    }


def cmd_spectrum(args: argparse.Namespace) -> int:
    params = _params_from_args(args)
    w_grid = args.w if args.w is not None else np.linspace(-3 * args.gamma, 3 * args.gamma, 2001)
    if args.method == "closed":
        trace = spectrum_closed_form(params, w_grid)
    elif args.method == "ep":
        trace = spectrum_ep(params, w_grid)
    else:
        tau = default_tau_grid(params, omega_max=float(np.max(np.abs(w_grid))))
        trace = spectrum_fourier(g1_qrt(params, tau), w_grid)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["omega", "s_value"])
    for w, s in zip(trace.omega_grid, trace.values):
        writer.writerow([_fmt(w), _fmt(s)])
    _emit(args.output, buf.getvalue())
    sidecar = json.dumps(_spectrum_sidecar(params, trace), indent=2, sort_keys=True) + "\n"
    if args.output is not None:
        _write_text_atomic(_sidecar_path(args.output), sidecar)
    else:
        sys.stdout.write(sidecar)
    return EXIT_OK


def cmd_ep(args: argparse.Namespace) -> int:
    params = _params_from_args(args)
    records = detect_ep(params, args.knob, args.range, tol=args.tol, scan_points=args.points)
    predicted = ep_drive_strengths(params)
    report = {
        "params": _params_dict(params),
        "knob": args.knob,
        "range": list(args.range),
        "tol": args.tol,
        "records": [
            {
                "knob_value": r.knob_value,
                "coalesced_lambda": {"re": r.coalesced_lambda.real, "im": r.coalesced_lambda.imag},
                "order": r.order,
                "defect_measure": r.defect_measure,
                "gap": r.gap,
            }
            for r in records
        ],
        "predicted": {
            "ep1": predicted.ep1,
            "ep_plus": predicted.ep_plus,
            "ep_minus": predicted.ep_minus,
            "critical_drive": critical_drive(params),
        },
    }
    _emit(args.output, json.dumps(report, indent=2, sort_keys=True) + "\n")
    return EXIT_OK


def cmd_fit(args: argparse.Namespace) -> int:
    with open(args.input, encoding="utf-8", newline="") as handle:
        reader = csv.reader(handle)
        header = next(reader)
        if header != ["omega", "s_value"]:
            raise ValueError(f"{args.input}: expected header omega,s_value, got {header}")
        rows = [(float(r[0]), float(r[1])) for r in reader]
    w = np.array([r[0] for r in rows])
    s = np.array([r[1] for r in rows])
    trace = SpectrumTrace(omega_grid=w, values=s, peaks=(), method="closed_form")
    estimate: CouplingEstimate = estimate_coupling(trace)
    report = {
        "j_hat": estimate.j_hat,
        "peak_positions": list(estimate.peak_positions),
        "note": estimate.note,
    }
    _emit(args.output, json.dumps(report, indent=2, sort_keys=True) + "\n")
    return EXIT_OK


def _verify_eigenvalues(rng: np.random.Generator, inject_sign_flip: bool) -> float:
    """Max multiset distance between formula and solver eigenvalues."""
    worst = 0.0
    for _ in range(50):
        delta = rng.uniform(0.0, 3.0)
        gamma = 1.0
        j = rng.uniform(0.0, 0.7)
        omega = rng.uniform(0.0, 0.95 * np.hypot(gamma, delta))
        params = ChainParams(gamma=gamma, delta=delta, j=j, omega_drive=omega)
        matrix = build_dyn_matrix(params).entries.copy()
        if inject_sign_flip:
            matrix[1, 4] = -matrix[1, 4]
        numeric = np.sort_complex(np.linalg.eigvals(matrix))
        formula = np.sort_complex(analytic_eigenvalues(params))
        # sort_complex orders by (re, im); residual pairing mismatches from
        # near-ties are resolved by greedy nearest matching
        worst = max(worst, _multiset_distance(numeric, formula))
    return worst


def _multiset_distance(a: np.ndarray, b: np.ndarray) -> float:
    remaining = list(b)
    worst = 0.0
    for value in a:
        gaps = [abs(value - r) for r in remaining]
        k = int(np.argmin(gaps))
        worst = max(worst, gaps[k])
        remaining.pop(k)
    return worst


def _run_verify_suite(args: argparse.Namespace) -> list[tuple[str, float, float]]:
    """Each entry: (name, measured error, tolerance)."""
    rng = np.random.default_rng(args.seed)
    checks: list[tuple[str, float, float]] = []

    err = _verify_eigenvalues(rng, args.inject_sign_flip)
    checks.append(("eigenvalues: formula vs dense solver (50 random sets)", err, 1e-10))

    params = ChainParams(gamma=1.0, delta=2.0, j=0.25, omega_drive=1.0)
    tau = np.linspace(0.0, 20.0, 801)
    diff = np.max(
        np.abs(g1_closed_form(params, tau).values - g1_qrt(params, tau).values)
    )
    checks.append(("correlation: closed form vs regression ODE", float(diff), 1e-8))

    fast = ChainParams(gamma=1.0, delta=2.0, j=0.5, omega_drive=1.0)
    w_grid = np.linspace(-3.0, 3.0, 601)
    closed = spectrum_closed_form(fast, w_grid)
    fourier = spectrum_fourier(g1_qrt(fast, default_tau_grid(fast, 3.0)), w_grid)
    mask = closed.values > 0.01 * closed.values.max()
    rel = np.max(np.abs(fourier.values[mask] - closed.values[mask]) / closed.values[mask])
    checks.append(("spectrum: half-line transform vs closed form", float(rel), 1e-3))

    ss_err = 0.0
    for j in (0.0, 0.25, 0.5):
        p = ChainParams(gamma=1.0, delta=2.0, j=j, omega_drive=1.0)
        state = solve_steady_state(p)
        forms = closed_form_populations(p)
        ss_err = max(
            ss_err, abs(state.population("b") - forms["n_b"].real) / forms["n_b"].real
        )
        if j > 0:
            # at exactly j = 0 the outer modes decouple and stay empty; the
            # closed form describes the j > 0 limit, which is discontinuous
            ss_err = max(
                ss_err,
                abs(state.population("a") - forms["n_a"].real) / forms["n_a"].real,
            )
    checks.append(("steady state: linear solve vs closed forms", float(ss_err), 1e-10))

    if args.oracle == "fock":
        cutoffs = args.cutoff
        probe = random_core_state(cutoffs, seed=args.seed)
        checks.append(
            (
                f"oracle: master-equation kernel vs moment system {cutoffs}",
                moment_derivative_check(params, probe),
                1e-6,
            )
        )
        # transient edge occupation is expected here; the trace check is the point
        cfg = FockConfig(cutoffs=cutoffs, dt=2e-3, t_end=1.0, saturation_limit=1e-3)
        rho = evolve_rho(params, cfg, vacuum_state(cutoffs))
        checks.append(
            ("oracle: trace preservation over t=1", abs(rho.trace() - 1.0), 1e-9)
        )
    return checks


def cmd_verify(args: argparse.Namespace) -> int:
    checks = _run_verify_suite(args)
    failed = 0
    for name, measured, tol in checks:
        ok = measured < tol
        failed += 0 if ok else 1
        status = "PASS" if ok else "FAIL"
        sys.stdout.write(f"{status}  {name}: measured {measured:.3e} (tolerance {tol:.1e})\n")
    sys.stdout.write(
        f"{len(checks) - failed}/{len(checks)} checks passed (seed {args.seed})\n"
    )
    return EXIT_OK if failed == 0 else EXIT_VERIFY_FAILED


def _add_param_flags(parser: argparse.ArgumentParser, with_drive: bool = True) -> None:
    parser.add_argument("--gamma", type=float, default=1.0, help="loss rate (default 1)")
    parser.add_argument("--delta", type=float, default=2.0, help="detuning of B (default 2)")
    parser.add_argument("--j", type=float, default=0.25, help="chain coupling (default 0.25)")
    if with_drive:
        parser.add_argument(
            "--omega-drive",
            dest="omega_drive",
            type=float,
            default=1.0,
            help="quadratic drive amplitude (default 1)",
        )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="trimerep",
        description="Dissipative driven three-oscillator chain: eigenstructure, "
        "steady state, correlations, spectra.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p_eig = sub.add_parser("eig", help="sweep eigenvalues over drive amplitude, write CSV")
    _add_param_flags(p_eig, with_drive=False)
    p_eig.add_argument("--omega", type=_parse_grid, required=True, help="drive grid min:max:points")
    p_eig.add_argument("--output", default=None, help="CSV path (stdout if omitted)")
    p_eig.set_defaults(func=cmd_eig)

    p_spec = sub.add_parser("spectrum", help="emission spectrum of B, CSV + JSON sidecar")
    _add_param_flags(p_spec)
    p_spec.add_argument("--w", type=_parse_grid, default=None, help="frequency grid min:max:points")
    p_spec.add_argument(
        "--method",
        choices=("closed", "fourier", "ep"),
        default="closed",
        help="closed form (default), numeric transform, or coalescence-point form",
    )
    p_spec.add_argument("--output", default=None, help="CSV path (stdout if omitted)")
    p_spec.set_defaults(func=cmd_spectrum)

    p_ep = sub.add_parser("ep", help="search for eigenvector coalescence, write JSON")
    _add_param_flags(p_ep)
    p_ep.add_argument("--knob", default="omega_drive", help="parameter to scan (default omega_drive)")
    p_ep.add_argument("--range", type=_parse_range, required=True, help="scan range min:max")
    p_ep.add_argument("--tol", type=float, default=1e-6, help="acceptance tolerance (default 1e-6)")
    p_ep.add_argument("--points", type=int, default=401, help="coarse scan points (default 401)")
    p_ep.add_argument("--output", default=None, help="JSON path (stdout if omitted)")
    p_ep.set_defaults(func=cmd_ep)

    p_verify = sub.add_parser("verify", help="cross-validation suite; nonzero exit on breach")
    p_verify.add_argument("--seed", type=int, default=0, help="seed for randomized checks")
    p_verify.add_argument("--oracle", choices=("fock",), default=None, help="include oracle block")
    p_verify.add_argument(
        "--cutoff",
        type=_parse_cutoffs,
        default=(4, 6, 4),
        help="oracle cutoffs na,nb,nc (default 4,6,4)",
    )
    p_verify.add_argument("--inject-sign-flip", action="store_true", help=argparse.SUPPRESS)
    p_verify.set_defaults(func=cmd_verify)

    p_fit = sub.add_parser("fit", help="estimate coupling from a doublet spectrum CSV")
    p_fit.add_argument("input", help="spectrum CSV with header omega,s_value")
    p_fit.add_argument("--output", default=None, help="JSON path (stdout if omitted)")
    p_fit.set_defaults(func=cmd_fit)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except NoSteadyStateError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_NO_STEADY_STATE
    except NotDoubletError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_NOT_DOUBLET
    except (
        np.linalg.LinAlgError,
        InsufficientDecayError,
        ArithmeticError,
        RuntimeError,
        OSError,
        ValueError,
    ) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_SOLVER_FAILURE


if __name__ == "__main__":
    sys.exit(main())
