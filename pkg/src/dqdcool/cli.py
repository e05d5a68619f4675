"""
Command-line interface.

Subcommands::

    dqdcool steady    [--config PATH] [--set KEY=VALUE ...] [--out PATH]
    dqdcool sweep     [--config PATH] [--set KEY=VALUE ...] [--out PATH] [--jobs N]
    dqdcool figures   NAME|all [--out PATH|DIR] [--jobs N]
    dqdcool lindblad  [--config PATH] [--set KEY=VALUE ...] [--out PATH]
    dqdcool validate  [--scope analytic|lindblad|all] [--out PATH]

Exit status: 0 on success, 1 if any point failed (or any check failed for
``validate``), 2 for invalid input.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import __version__
from .config import load_config
from .errors import ValidationError
from .presets import PRESET_NAMES, build_preset
from .sweep import run_preset, run_single, run_sweep
from .validate import SCOPES, format_report, run_checks

__all__ = ["main", "build_parser"]


def _write(text: str, out: str | None):
    if out is None or out == "-":
        sys.stdout.write(text)
    else:
        path = Path(out)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text, encoding="utf-8")


def _add_config_args(p):
    p.add_argument("--config", help="flat JSON config (or an emitted CSV to rerun)")
    p.add_argument("--set", dest="overrides", action="append", default=[], metavar="KEY=VALUE",
                   help="override a key after the config file (repeatable)")
    p.add_argument("--out", help="output path (default: stdout, or the config's 'output')")
    p.add_argument("--format", choices=["csv"], default="csv", help="output format")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dqdcool", description="Steady-state cavity refrigeration by engineered dot reservoirs.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("steady", help="evaluate a single operating point")
    _add_config_args(p)

    p = sub.add_parser("sweep", help="one-parameter sweep from sweep_* keys")
    _add_config_args(p)
    p.add_argument("--jobs", type=int, default=1, help="worker processes (output order fixed)")

    p = sub.add_parser("figures", help="figure-reproduction presets")
    p.add_argument("name", choices=[*PRESET_NAMES, "all"])
    p.add_argument("--config", help="base config replacing the Table-1 baseline")
    p.add_argument("--set", dest="overrides", action="append", default=[], metavar="KEY=VALUE")
    p.add_argument("--out", help="file (single preset) or directory (all)")
    p.add_argument("--format", choices=["csv"], default="csv")
    p.add_argument("--jobs", type=int, default=1)

    p = sub.add_parser("lindblad", help="solve the Lindblad model at one point")
    _add_config_args(p)

    p = sub.add_parser("validate", help="run invariant and cross-solver checks")
    p.add_argument("--scope", choices=SCOPES, default="all")
    p.add_argument("--out", help="report path (default: stdout)")
    return parser


def _figures(args) -> int:
    base = load_config(args.config, args.overrides)
    names = PRESET_NAMES if args.name == "all" else (args.name,)
    failed = 0
    for name in names:
        text, bad = run_preset(build_preset(name, base), jobs=args.jobs)
        failed += bad
        if args.name == "all":
            outdir = Path(args.out or ".")
            _write(text, str(outdir / f"{name}.csv"))
        else:
            _write(text, args.out)
    return 1 if failed else 0


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "validate":
            checks = run_checks(args.scope)
            _write(format_report(checks), args.out)
            return 0 if all(c.passed for c in checks) else 1
        if args.command == "figures":
            return _figures(args)
        cfg = load_config(args.config, args.overrides)
        out = args.out if args.out is not None else cfg.output
        if args.command == "sweep":
            text, bad = run_sweep(cfg, jobs=args.jobs)
        elif args.command == "lindblad":
            text, bad = run_single(cfg.with_params(model="lindblad"), "lindblad")
        else:
            text, bad = run_single(cfg)
        _write(text, out)
        return 1 if bad else 0
    except ValidationError as exc:
        print(f"dqdcool: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
