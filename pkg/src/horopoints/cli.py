"""Command-line front end.

Every experiment runs from a JSON config (``--config``); ``generate`` also
accepts direct flags for quick sample dumps.  Output goes to ``--out``, the
config's ``out_dir``, or the HOROPOINTS_OUT environment variable, in that
order of precedence.  The exit status is nonzero exactly when an experiment
in the exact-equality class reports a failed check.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .harness import (
    HARD_KINDS,
    ConfigInvalid,
    emit_plot,
    load_config,
    run,
)

_CONFIG_KINDS = (
    "equidist",
    "kloosterman",
    "invariance",
    "cardinality",
    "discrepancy",
    "cusp-mass",
    "projection",
    "intersection",
)


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", type=Path, help="experiment config (JSON)")
    p.add_argument("--out", type=Path, help="output directory")
    p.add_argument("--threads", type=int, help="worker threads across the n schedule")
    p.add_argument("--format", choices=("csv", "json"), help="payload format")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="horopoints",
        description="rational points on expanding horocycles: experiments and reports",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    for kind in _CONFIG_KINDS:
        p = sub.add_parser(kind, help=f"run a {kind} experiment")
        _add_common(p)

    g = sub.add_parser("generate", help="dump point-set samples to CSV")
    _add_common(g)
    g.add_argument("--n", type=int, action="append", help="modulus (repeatable)")
    g.add_argument("--alpha", default="1/2", help="expansion exponent, e.g. 1/2")
    g.add_argument("--d", type=int, default=1)
    g.add_argument("--a", type=int, default=1)
    g.add_argument("--b", type=int, default=1)
    g.add_argument("--c", type=int, default=1)
    g.add_argument("--variant", choices=("full", "monomial", "triple"),
                   default="monomial")

    pl = sub.add_parser("plot", help="render equidist reports as a log-log SVG")
    pl.add_argument("reports", nargs="+", type=Path, help="equidist.json files")
    pl.add_argument("--out", type=Path, required=True, help="output SVG path")
    return parser


def _run_config_command(args, kind: str) -> int:
    if args.config is None:
        print(f"error: {kind} requires --config", file=sys.stderr)
        return 2
    cfg = load_config(args.config)
    if cfg.kind != kind:
        raise ConfigInvalid(f"config kind {cfg.kind!r} does not match command {kind!r}")
    if args.threads:
        cfg.threads = args.threads
    if args.format:
        cfg.format = args.format
    manifest = run(cfg, out_dir=args.out)
    status = "pass" if manifest.all_passed else "FAIL"
    print(f"{kind}: {status} -> {manifest.out_dir}")
    if not manifest.all_passed and kind in HARD_KINDS:
        return 1
    return 0


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    command = args.command
    try:
        if command == "plot":
            out = emit_plot(args.reports, args.out)
            print(f"plot -> {out}")
            return 0
        if command == "generate":
            if args.config is not None:
                cfg = load_config(args.config)
            else:
                if not args.n:
                    print("error: generate needs --n or --config", file=sys.stderr)
                    return 2
                cfg = load_config({
                    "schema_version": 1,
                    "kind": "generate",
                    "n_schedule": args.n,
                    "point_set": {
                        "alpha": args.alpha, "d": args.d, "a": args.a,
                        "b": args.b, "c": args.c, "variant": args.variant,
                    },
                })
            if args.threads:
                cfg.threads = args.threads
            manifest = run(cfg, out_dir=args.out)
            print(f"generate -> {manifest.out_dir}")
            return 0
        return _run_config_command(args, command.replace("-", "_"))
    except ConfigInvalid as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
