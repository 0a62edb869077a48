"""Command-line entry point.

Exit codes: 0 success, 2 usage or configuration error, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import replace
from pathlib import Path

from ..errors import GDNLSError
from ..evolution import determine_mu_star
from .config import RunConfig, apply_overrides, format_mu, load_config
from .experiments import MU_CACHE, REGISTRY, run_experiment
from .output import write_json
from .sweep import sweep

EXIT_OK, EXIT_USAGE, EXIT_NUMERICAL = 0, 2, 3

SUBCOMMANDS = {
    "simulate": "soliton_propagation",
    "picard": "picard_study",
    "probe-smoothing": "smoothing_probe",
    "check-inequalities": "inequality_sweep",
    "probe-continuity": "small_time_probe",
    "converge": "convergence_study",
    "dependence": "dependence_study",
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="gdnls", description="Pseudospectral gDNLS laboratory.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="INI config, or a manifest.json to repeat a run")
    common.add_argument("--out", default="runs/out", help="output directory (default: runs/out)")
    common.add_argument("--seed", type=int, help="seed for random data")
    common.add_argument("--workers", type=int, default=1, help="worker processes for sweeps")
    common.add_argument(
        "--set", action="append", default=[], metavar="SECTION.KEY=VALUE", help="override one config value"
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, experiment in SUBCOMMANDS.items():
        sub.add_parser(name, parents=[common], help=f"run the {experiment} experiment")
    sub.add_parser("sweep", parents=[common], help="cross-product sweep over the [sweep] axes")
    sub.add_parser("determine-mu", parents=[common], help="select the sign convention of the solitary waves")
    run = sub.add_parser("run", parents=[common], help="run the experiment named in the config")
    run.add_argument("--experiment", choices=sorted(REGISTRY), help="override [run] experiment")
    return parser


def _config(args) -> RunConfig:
    cfg = load_config(args.config) if args.config else RunConfig()
    cfg = apply_overrides(cfg, args.set)
    if args.seed is not None:
        cfg = replace(cfg, seed=args.seed)
    if args.command in SUBCOMMANDS:
        cfg = replace(cfg, experiment=SUBCOMMANDS[args.command])
    elif args.command == "run" and args.experiment:
        cfg = replace(cfg, experiment=args.experiment)
    return cfg


def _report(manifest: dict) -> None:
    for name, c in manifest.get("checks", {}).items():
        print(f"{'PASS' if c['passed'] else 'FAIL'} {name}: {c['value']}")


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_USAGE
    out = Path(args.out)
    try:
        cfg = _config(args)
        if args.command == "determine-mu":
            rec = determine_mu_star()
            write_json(out / MU_CACHE, rec.as_dict())
            for mu, r in rec.residuals.items():
                print(f"mu = {format_mu(mu):>3}  residual = {r:.3e}")
            print(f"mu* = {format_mu(rec.mu_star)}")
            return EXIT_OK
        if args.command == "sweep":
            rows = sweep(cfg, out, workers=args.workers)
            for row in rows:
                print(",".join(str(v) for v in row))
            return EXIT_OK
        manifest = run_experiment(cfg, out)
        _report(manifest)
        print(f"wrote {out / 'manifest.json'}")
        return EXIT_OK
    except GDNLSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE if isinstance(exc, ValueError) else EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
