"""Cross-product parameter sweeps, one run directory per cell plus an index."""

from __future__ import annotations

import itertools
from concurrent.futures import ProcessPoolExecutor
from dataclasses import replace
from pathlib import Path

from ..errors import GDNLSError
from .config import SWEEP_AXES, RunConfig
from .experiments import mu_star_record, resolve_defaults, run_experiment
from .output import write_csv

INDEX_HEADER = ("cell", "omega", "c", "alpha", "T", "N", "m", "status", "passed", "directory")


def sweep_cells(cfg: RunConfig) -> list[dict]:
    """Cross product of the non-empty sweep axes; empty axes give one cell."""
    axes = {name: getattr(cfg, attr) for name, attr in SWEEP_AXES.items() if getattr(cfg, attr)}
    names = list(axes)
    return [dict(zip(names, combo)) for combo in itertools.product(*(axes[n] for n in names))]


def cell_config(cfg: RunConfig, cell: dict) -> RunConfig:
    changes = {k: (int(v) if k == "N" else float(v)) for k, v in cell.items()}
    return resolve_defaults(replace(cfg, **changes, **{attr: () for attr in SWEEP_AXES.values()}))


def _run_cell(args):
    index, cfg, out, cache = args
    try:
        manifest = run_experiment(cfg, out, mu_cache_dir=cache)
        return index, "ok", bool(manifest.get("passed"))
    except GDNLSError as exc:
        return index, f"failed: {type(exc).__name__}", False


def sweep(cfg: RunConfig, out: str | Path, workers: int = 1) -> list[tuple]:
    """Run every cell (concurrently with ``workers`` processes) and write index.csv.

    Failed cells are recorded in the index; the sweep carries on.
    """
    out = Path(out)
    out.mkdir(parents=True, exist_ok=True)
    if cfg.mu == "auto":
        mu_star_record(out)
    cells = sweep_cells(cfg)
    jobs = [(i, cell_config(cfg, cell), out / f"cell_{i:03d}", out) for i, cell in enumerate(cells)]
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = sorted(pool.map(_run_cell, jobs))
    else:
        results = [_run_cell(job) for job in jobs]
    rows = []
    for (i, status, passed), (_, ccfg, cell_out, _) in zip(results, jobs):
        rows.append((i, ccfg.omega, ccfg.c, ccfg.alpha, ccfg.T, ccfg.N, ccfg.m, status, passed, cell_out.name))
    write_csv(out / "index.csv", INDEX_HEADER, rows)
    return rows


__all__ = ["INDEX_HEADER", "cell_config", "sweep", "sweep_cells"]
