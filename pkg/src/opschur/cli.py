"""Command-line front end: one subcommand per verification routine plus
`run <config-file>` for scenario batches.  Reports go to stdout or
--out; with --out a PNG figure is rendered next to the delimited output.
Exit code 0 means every scenario passed.
"""
from __future__ import annotations

import argparse
import math
import sys
from typing import Optional

from .config import (
    KERNELS,
    ROUTES,
    SYMBOLS,
    ConfigError,
    parse_config,
    validate_scenario,
)
from .report import FORMATS, emit_report, render_figure
from .runner import run_scenarios


def _fl(tok: str) -> float:
    if tok == "inf":
        return math.inf
    return float(tok)


def _common() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0, metavar="U64")
    common.add_argument("--format", choices=FORMATS, default="json-lines")
    common.add_argument("--out", default=None, metavar="PATH")
    common.add_argument("--parallel", type=int, default=1, metavar="N")
    common.add_argument("--grid-n", type=int, default=1, metavar="INT")
    common.add_argument("--grid-points", type=int, default=32, metavar="INT")
    return common


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="opschur",
        description=(
            "Verify operator-norm bounds for discretized integral operators "
            "and Fourier multipliers"
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)
    common = _common()

    sv = sub.add_parser("schur-verify", parents=[common])
    sv.add_argument("--theta", type=_fl, default=2.0)
    sv.add_argument("--q", type=_fl, default=1.0)
    sv.add_argument("--tau", type=_fl, default=1.0)
    sv.add_argument("--kernel", choices=KERNELS, default="random-gaussian")
    sv.add_argument("--g", default=None, metavar="C0,C1,...")
    sv.add_argument("--points", type=int, default=6)
    sv.add_argument("--dim", type=int, default=2)
    sv.add_argument("--restarts", type=int, default=4)
    sv.add_argument("--iterations", type=int, default=20)
    sv.add_argument("--sphere-budget", type=int, default=200)

    yc = sub.add_parser("young-check", parents=[common])
    yc.add_argument("--theta", type=_fl, default=2.0)
    yc.add_argument("--q", type=_fl, default=1.0)
    yc.add_argument("--g", default="1,1,0,0", metavar="C0,C1,...")
    yc.add_argument("--restarts", type=int, default=4)
    yc.add_argument("--iterations", type=int, default=30)
    yc.add_argument("--sphere-budget", type=int, default=200)

    bn = sub.add_parser("besov-norm", parents=[common])
    bn.add_argument("--symbol", choices=SYMBOLS, default="constant")
    bn.add_argument("--s", type=_fl, default=0.0)
    bn.add_argument("--q", type=_fl, default=2.0)
    bn.add_argument("--r", type=_fl, default=1.0)

    fm = sub.add_parser("fm-check", parents=[common])
    fm.add_argument("--symbol", choices=SYMBOLS, default="identity")
    fm.add_argument("--route", choices=ROUTES, default="lq-lp")
    fm.add_argument("--u", type=_fl, default=2.0)
    fm.add_argument("--q", type=_fl, default=1.0)
    fm.add_argument("--p", type=_fl, default=2.0)
    fm.add_argument("--s", type=_fl, default=0.0)
    fm.add_argument("--r", type=_fl, default=math.inf)
    fm.add_argument("--restarts", type=int, default=3)
    fm.add_argument("--iterations", type=int, default=12)
    fm.add_argument("--sphere-budget", type=int, default=100)
    fm.add_argument("--samples", type=int, default=30)

    mk = sub.add_parser("mikhlin-check", parents=[common])
    mk.add_argument("--symbol", choices=SYMBOLS, default="identity")
    mk.add_argument("--u", type=_fl, default=2.0)
    mk.add_argument("--q", type=_fl, default=1.0)
    mk.add_argument("--p", type=_fl, default=2.0)
    mk.add_argument("--period", type=_fl, default=16.0)

    l36 = sub.add_parser("lemma36-check", parents=[common])
    l36.add_argument("--symbol", choices=SYMBOLS, default="identity")
    l36.add_argument("--u", type=_fl, default=2.0)
    l36.add_argument("--q", type=_fl, default=1.0)
    l36.add_argument("--p", type=_fl, default=2.0)
    l36.add_argument("--theta", type=_fl, default=2.0)
    l36.add_argument("--period", type=_fl, default=16.0)

    c32 = sub.add_parser("corollary32-check", parents=[common])
    c32.add_argument("--u", type=_fl, default=2.0)
    c32.add_argument("--theta", type=_fl, default=2.0)
    c32.add_argument("--samples", type=int, default=40)

    rn = sub.add_parser("run", parents=[common])
    rn.add_argument("config", metavar="CONFIG-FILE")
    return parser


_ARG_KEYS = {
    "schur-verify": (
        "theta", "q", "tau", "kernel", "g", "points", "dim",
        "restarts", "iterations", "sphere-budget",
    ),
    "young-check": ("theta", "q", "g", "restarts", "iterations", "sphere-budget"),
    "besov-norm": ("symbol", "s", "q", "r", "grid-n", "grid-points"),
    "fm-check": (
        "symbol", "route", "u", "q", "p", "s", "r", "grid-n", "grid-points",
        "restarts", "iterations", "sphere-budget", "samples",
    ),
    "mikhlin-check": ("symbol", "u", "q", "p", "grid-n", "grid-points", "period"),
    "lemma36-check": (
        "symbol", "u", "q", "p", "theta", "grid-n", "grid-points", "period",
    ),
    "corollary32-check": ("u", "theta", "grid-n", "grid-points", "samples"),
}


def _token(value) -> str:
    if isinstance(value, float) and math.isinf(value):
        return "inf"
    return str(value)


def _scenario_from_args(args) -> list:
    raw = {}
    for key in _ARG_KEYS[args.command]:
        value = getattr(args, key.replace("-", "_"))
        if value is None:
            continue
        raw[key] = (_token(value), None)
    return [validate_scenario(args.command, args.command, raw, args.seed)]


def main(argv: Optional[list] = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        if args.command == "run":
            with open(args.config, "r", encoding="utf-8") as fh:
                scenarios = parse_config(fh.read())
        else:
            scenarios = _scenario_from_args(args)
    except (ConfigError, OSError) as exc:
        print(f"opschur: {exc}", file=sys.stderr)
        return 2
    reports = run_scenarios(scenarios, parallelism=args.parallel)
    payload = emit_report(reports, args.format)
    if args.out:
        with open(args.out, "wb") as fh:
            fh.write(payload)
        render_figure(reports, args.out + ".png")
    else:
        sys.stdout.write(payload.decode())
    return 0 if all(r.passed and r.error is None for r in reports) else 1


if __name__ == "__main__":
    sys.exit(main())
