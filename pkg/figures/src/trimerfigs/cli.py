"""Command line for generating figure data and rendering the figures.

Subcommands
-----------
generate : run the trimerep CLI to produce every input file
fig2     : render the 3x3 eigenvalue/spectrum grid from existing files
fig3     : render the three-panel spectra comparison from existing files
all      : generate, then render both figures
"""

from __future__ import annotations

import argparse
import sys

from . import __version__
from .figures import render_fig2, render_fig3
from .generate import fig2_paths, fig3_paths, generate_fig2_data, generate_fig3_data

EXIT_OK = 0
EXIT_MISSING_INPUT = 2
EXIT_GENERATION_FAILED = 3


def cmd_generate(args: argparse.Namespace) -> int:
    generate_fig2_data(args.data_dir, command=args.command_name)
    generate_fig3_data(args.data_dir, command=args.command_name)
    print(f"wrote figure inputs under {args.data_dir}")
    return EXIT_OK


def _report(stem: str) -> None:
    print(stem + ".png")
    print(stem + ".pdf")


def cmd_fig2(args: argparse.Namespace) -> int:
    render_fig2(fig2_paths(args.data_dir), args.output)
    _report(args.output)
    return EXIT_OK


def cmd_fig3(args: argparse.Namespace) -> int:
    render_fig3(fig3_paths(args.data_dir), args.output)
    _report(args.output)
    return EXIT_OK


def cmd_all(args: argparse.Namespace) -> int:
    generate_fig2_data(args.data_dir, command=args.command_name)
    generate_fig3_data(args.data_dir, command=args.command_name)
    render_fig2(fig2_paths(args.data_dir), args.fig2_output)
    _report(args.fig2_output)
    render_fig3(fig3_paths(args.data_dir), args.fig3_output)
    _report(args.fig3_output)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="trimerfigs",
        description="Render eigenvalue and spectrum figures from trimerep CLI outputs.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p_gen = sub.add_parser("generate", help="produce all figure input files via trimerep")
    p_gen.add_argument("--data-dir", default="figdata", help="directory for CSV/JSON inputs")
    p_gen.add_argument(
        "--command-name",
        default="trimerep",
        help="name of the simulation CLI executable (default trimerep)",
    )
    p_gen.set_defaults(func=cmd_generate)

    p_f2 = sub.add_parser("fig2", help="render the 3x3 grid figure")
    p_f2.add_argument("--data-dir", default="figdata", help="directory holding the inputs")
    p_f2.add_argument("--output", default="fig2", help="output path stem (png + pdf)")
    p_f2.set_defaults(func=cmd_fig2)

    p_f3 = sub.add_parser("fig3", help="render the three-panel spectra figure")
    p_f3.add_argument("--data-dir", default="figdata", help="directory holding the inputs")
    p_f3.add_argument("--output", default="fig3", help="output path stem (png + pdf)")
    p_f3.set_defaults(func=cmd_fig3)

    p_all = sub.add_parser("all", help="generate inputs, then render both figures")
    p_all.add_argument("--data-dir", default="figdata", help="directory for CSV/JSON inputs")
    p_all.add_argument(
        "--command-name",
        default="trimerep",
        help="name of the simulation CLI executable (default trimerep)",
    )
    p_all.add_argument("--fig2-output", default="fig2", help="fig2 path stem (png + pdf)")
    p_all.add_argument("--fig3-output", default="fig3", help="fig3 path stem (png + pdf)")
    p_all.set_defaults(func=cmd_all)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_MISSING_INPUT
    except (RuntimeError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_GENERATION_FAILED


if __name__ == "__main__":
    sys.exit(main())
