"""
Experiment registry and the manifest-writing runner.

Each experiment takes a resolved :class:`RunConfig` and a :class:`RunContext`,
writes its CSV series through the context, and returns pass/fail checks and
derived quantities. :func:`run_experiment` wraps that with a manifest written
before the run (status ``running``) and finalized after it.
"""

from __future__ import annotations

import math
import platform
import time
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Callable

import numpy as np
import scipy

from .. import __version__
from ..diagnostics import (
    interp_check_1,
    interp_check_2,
    kato_smoothing_terms,
    local_smoothing,
    loglog_slope,
    random_smooth_field,
    small_time_continuity,
)
from ..errors import ConfigurationError, GDNLSError, StepFailure
from ..evolution import (
    EquationSpec,
    FrozenCoefficient,
    GDNLSNonlinearity,
    Trajectory,
    determine_mu_star,
    evolve,
    frozen_coefficient,
    march,
    n_steps_for,
    zero_nonlinearity,
)
from ..picard import XTNormParams, contraction_factor, dependence_probe, picard_solve
from ..profiles import ClassParams, WaveParams, class_nu, decay_profile, solitary_wave, weighted_inf
from ..spectral import Field, Grid, sobolev_norm
from .config import RunConfig, format_mu
from .output import read_json, write_csv, write_json

MU_CACHE = "mu_star.json"
MANIFEST = "manifest.json"

EXPERIMENT_DEFAULTS = {
    "soliton_propagation": dict(L=40.0, N=4096, T=1.0, dt=1e-4, data_kind="solitary", tolerance=1e-3, save_every=100),
    "picard_study": dict(L=30.0, N=2048, T=0.05, dt=2e-4, data_kind="decay", tolerance=1e-4),
    "smoothing_probe": dict(L=20.0, N=1024, T=0.5, dt=1e-3, data_kind="decay", c0=1.0, n_samples=20),
    "inequality_sweep": dict(L=20.0, N=1024, T=1.0, dt=1.0, data_kind="decay", n_samples=100, tolerance=1e-12),
    "small_time_probe": dict(
        L=60.0, N=4096, T=8e-3, dt=1e-4, data_kind="decay", times=(1e-3, 2e-3, 4e-3, 8e-3), tolerance=0.1
    ),
    "convergence_study": dict(
        L=40.0, N=1024, T=1.0, dt=5e-4, data_kind="solitary", ladder=(4e-3, 2e-3, 1e-3, 5e-4)
    ),
    "dependence_study": dict(L=30.0, N=2048, T=0.05, dt=2e-4, data_kind="decay", perturbations=(1e-3, 1e-4)),
}

ORDER_BANDS = {"strang": (2.0, 0.2), "ifrk4": (4.0, 0.4)}


def resolve_defaults(cfg: RunConfig) -> RunConfig:
    """Fill every unset field from the experiment's defaults."""
    if cfg.experiment not in REGISTRY:
        raise ConfigurationError(
            f"unknown experiment {cfg.experiment!r}; registered: {', '.join(sorted(REGISTRY))}", "experiment"
        )
    changes = {}
    for key, value in EXPERIMENT_DEFAULTS[cfg.experiment].items():
        current = getattr(cfg, key)
        if current is None or current == ():
            changes[key] = value
    cfg = replace(cfg, **changes)
    cls = ClassParams(alpha=cfg.alpha, m=cfg.m, M=cfg.M, k=cfg.k)
    changes = dict(m=cls.m, k=cls.k)
    if cfg.data_m is None:
        changes["data_m"] = cls.m
    if cfg.smoothing_k is None:
        changes["smoothing_k"] = cls.k
    return replace(cfg, **changes)


# -- run context --------------------------------------------------------------------


@dataclass
class RunContext:
    cfg: RunConfig
    out: Path
    mu_cache_dir: Path
    outputs: list = field(default_factory=list)
    mu_record: dict | None = None

    @property
    def grid(self) -> Grid:
        return Grid(self.cfg.L, self.cfg.N)

    def mu(self) -> complex:
        """The configured mu, or the cached/determined sign convention when 'auto'."""
        if self.cfg.mu != "auto":
            if self.mu_record is None:
                self.mu_record = {"source": "configured", "mu": format_mu(self.cfg.mu)}
            return complex(self.cfg.mu)
        rec = mu_star_record(self.mu_cache_dir)
        self.mu_record = {"source": "determined", **rec}
        return complex(*rec["mu_star"])

    def spec(self, mu: complex | None = None) -> EquationSpec:
        c = self.cfg
        return EquationSpec(
            mu=self.mu() if mu is None else mu, alpha=c.alpha, form=c.form, epsilon=c.epsilon, dealias=c.dealias
        )

    def class_params(self) -> ClassParams:
        c = self.cfg
        return ClassParams(alpha=c.alpha, m=c.m, M=c.M, k=c.k)

    def data(self, grid: Grid | None = None) -> Field:
        return make_data(self.cfg, grid or self.grid)

    def write_series(self, name: str, header, rows) -> Path:
        path = write_csv(self.out / name, header, rows)
        if name not in self.outputs:
            self.outputs.append(name)
        return path


def mu_star_record(cache_dir: Path) -> dict:
    """Read the cached sign-convention record, or determine and cache it."""
    path = Path(cache_dir) / MU_CACHE
    if path.exists():
        try:
            return read_json(path)
        except ValueError:
            pass
    rec = determine_mu_star().as_dict()
    write_json(path, rec)
    return rec


def make_data(cfg: RunConfig, grid: Grid) -> Field:
    kind = cfg.data_kind
    if kind == "solitary":
        return solitary_wave(WaveParams(cfg.omega, cfg.c, cfg.alpha), grid)
    if kind == "decay":
        return decay_profile(cfg.c0, cfg.data_m, grid)
    if kind == "file":
        path = Path(cfg.data_file)
        if not path.exists():
            raise ConfigurationError(f"data file {path} does not exist", "file")
        if path.suffix == ".npy":
            values = np.load(path)
        else:
            raw = np.loadtxt(path, delimiter=",", ndmin=2)
            values = raw[:, 0] + 1j * raw[:, 1] if raw.shape[1] > 1 else raw[:, 0]
        if values.shape != (grid.N,):
            raise ConfigurationError(f"data file holds {values.shape} samples, grid has N={grid.N}", "file")
        return Field(grid, values)
    raise ConfigurationError(f"experiment needs a data kind, got {kind!r}", "kind")


def derived_quantities(u0: Field, cls: ClassParams) -> dict:
    lam = weighted_inf(u0, cls.m)
    return {"m": cls.m, "M": cls.M, "k": cls.k, "s": cls.s, "lambda": lam, "nu": class_nu(u0, cls)}


def check(value, passed: bool, threshold=None, note: str | None = None) -> dict:
    out = {"value": value, "passed": bool(passed)}
    if threshold is not None:
        out["threshold"] = threshold
    if note:
        out["note"] = note
    return out


# -- experiments -------------------------------------------------------------------------


def soliton_propagation(cfg: RunConfig, ctx: RunContext) -> tuple[dict, dict]:
    """Evolve a solitary wave and compare with its exact translate."""
    if cfg.data_kind != "solitary":
        raise ConfigurationError("soliton_propagation needs [data] kind = solitary", "kind")
    grid = ctx.grid
    wave = WaveParams(cfg.omega, cfg.c, cfg.alpha)
    spec = ctx.spec()
    u0 = solitary_wave(wave, grid)
    n = n_steps_for(cfg.T, cfg.dt)
    stride = cfg.save_every if n % cfg.save_every == 0 else 1
    header = ("t", "l2_error", "mass", "boundary_guard")

    def rows_for(traj: Trajectory):
        rows = []
        for t, f in zip(traj.times, traj):
            exact = solitary_wave(wave, grid, t=float(t), guard=None)
            rows.append((t, (f - exact).l2() / exact.l2(), f.l2() ** 2, f.boundary_amplitude() / f.linf()))
        return rows

    try:
        traj = evolve(u0, cfg.T, cfg.dt, cfg.stepper, spec, save_every=stride)
    except StepFailure as exc:
        if exc.partial is not None:
            ctx.write_series("series.csv", header, rows_for(exc.partial))
        raise
    rows = rows_for(traj)
    ctx.write_series("series.csv", header, rows)
    err = rows[-1][1]
    mass0, mass1 = rows[0][2], rows[-1][2]
    guard = max(r[3] for r in rows)
    checks = {
        "l2_error": check(err, err <= cfg.tolerance, cfg.tolerance),
        "boundary_guard": check(guard, guard <= 1e-8, 1e-8),
    }
    drift = abs(mass1 - mass0) / mass0
    if complex(spec.mu).imag == 0:
        checks["mass_drift"] = check(drift, drift <= 1e-8, 1e-8)
    return checks, {"mass_drift": drift, "final_l2_error": err}


def picard_study(cfg: RunConfig, ctx: RunContext) -> tuple[dict, dict]:
    """Picard iteration of the contraction map on class data, checked against the direct solver."""
    grid = ctx.grid
    spec = ctx.spec()
    u0 = ctx.data()
    cls = ctx.class_params()
    p = XTNormParams(cls, cfg.T, cfg.dt)
    v, hist = picard_solve(u0, spec, p, tol=cfg.picard_tol, max_iter=cfg.max_iter)
    rows = []
    for n, (lb, nrm) in enumerate(zip(hist.lower_bounds, hist.norms)):
        d = hist.distances[n - 1] if n >= 1 else float("nan")
        r = hist.distances[n - 1] / hist.distances[n - 2] if n >= 2 else float("nan")
        rows.append((n, d, r, lb, *nrm.as_dict().values()))
    header = ("iteration", "distance", "ratio", "lower_bound", *hist.norms[0].as_dict().keys())
    ctx.write_series("picard_iterations.csv", header, rows)

    direct = evolve(u0, cfg.T, cfg.dt, cfg.stepper, spec)
    gap = (v - direct).l2_norms()
    wm = grid.weight(cls.m)
    ctx.write_series(
        "series.csv",
        ("t", "l2_norm", "weighted_lower_bound", "distance_to_direct"),
        [(t, f.l2(), float(np.min(wm * np.abs(f.values))), g) for t, f, g in zip(v.times, v, gap)],
    )

    ratios = hist.ratios
    max_ratio = max(ratios) if ratios else float("nan")
    lam = hist.lam
    lower = min(hist.lower_bounds)
    ball = [nrm.ball_part for nrm in hist.norms]
    factor = contraction_factor(u0, spec, p)
    factor_half = contraction_factor(u0, spec, p.with_T(cfg.T / 2))
    k = cfg.smoothing_k
    sm = local_smoothing(v, k, max(8, k + 1))
    v_fine, _ = picard_solve(
        u0, spec, replace(p, dt=cfg.dt / 2), tol=cfg.picard_tol, max_iter=cfg.max_iter, record_norms=False
    )
    sm_fine = local_smoothing(v_fine, k, max(8, k + 1))
    ctx.write_series(
        "smoothing.csv",
        ("interval", "value", "value_half_dt"),
        [(int(j), a, b) for j, a, b in zip(sm.intervals, sm.values, sm_fine.values)],
    )
    sm_change = abs(sm_fine.sup - sm.sup) / sm.sup
    checks = {
        "geometric_ratio": check(max_ratio, bool(ratios) and max_ratio < 0.9, 0.9),
        "matches_direct": check(float(np.max(gap)), float(np.max(gap)) <= cfg.tolerance, cfg.tolerance),
        "lower_bound": check(lower, lower >= lam / 2, lam / 2),
        "ball_preserved": check(max(ball), max(ball) <= 2 * ball[0], 2 * ball[0]),
        "contraction_shrinks": check([factor_half, factor], factor_half < factor),
        "smoothing_stable": check(sm_change, sm_change <= 0.1, 0.1),
        "smoothing_sup_le_l1": check(
            [sm.sup, sm.l1], sm.sup <= sm.l1 and sm_fine.sup <= sm_fine.l1
        ),
    }
    derived = {
        "iterations": hist.iterations,
        "distances": hist.distances,
        "run_constant_ball": max(ball),
        "contraction_factor": factor,
        "contraction_factor_half_T": factor_half,
        "smoothing_sup": sm.sup,
        "smoothing_sup_half_dt": sm_fine.sup,
        "smoothing_l1": sm.l1,
        "boundary_amplitude": u0.boundary_amplitude(),
    }
    return checks, derived


def _sample_seeds(seed: int, n: int):
    return np.random.SeedSequence(seed).spawn(n)


def smoothing_probe(cfg: RunConfig, ctx: RunContext) -> tuple[dict, dict]:
    """Kato smoothing ratio of the frozen flow over seeded random unit-H^{1/2} data."""
    grid = ctx.grid
    spec = ctx.spec()
    fc = frozen_coefficient(ctx.data(), spec, cfg.M)
    free = FrozenCoefficient.zero(grid)
    rows = []
    for i, ss in enumerate(_sample_seeds(cfg.seed, cfg.n_samples)):
        f = random_smooth_field(grid, ss)
        f = f * (1.0 / sobolev_norm(f, 0.5))
        terms = kato_smoothing_terms(f, fc, cfg.T, cfg.dt)
        free_terms = kato_smoothing_terms(f, free, cfg.T, cfg.dt)
        rows.append((i, terms.ratio, terms.sup_half_derivative, terms.local_smoothing, free_terms.sup_half_derivative))
    ctx.write_series("series.csv", ("sample", "ratio", "sup_half_derivative", "local_smoothing", "free_sup_half"), rows)
    ratios = np.array([r[1] for r in rows])
    iso = max(abs(r[4] - 1.0) for r in rows)
    checks = {
        "finite": check(float(ratios.max()), bool(np.all(np.isfinite(ratios)))),
        "free_isometry": check(iso, iso <= 1e-10, 1e-10),
    }
    return checks, {"max_ratio": float(ratios.max()), "mean_ratio": float(ratios.mean())}


def inequality_sweep(cfg: RunConfig, ctx: RunContext) -> tuple[dict, dict]:
    """Interpolation-inequality ratios over seeded random smooth decaying fields."""
    grid = ctx.grid
    rows = []
    fields_ = [random_smooth_field(grid, ss) for ss in _sample_seeds(cfg.seed, cfg.n_samples)]

    def ratios(f):
        return (
            interp_check_1(f, 2, 2, 0.5, 1),
            interp_check_1(f, 2, 2, 0.5, 2),
            interp_check_2(f, 1, 1, 1),
            interp_check_2(f, 1, 1, 2),
            interp_check_2(f, 1, 1, 3),
        )

    for i, f in enumerate(fields_):
        rows.append((i, *ratios(f)))
    header = ("sample", "ine1_v1", "ine1_v2", "ine2_v1", "ine2_v2", "ine2_v3")
    ctx.write_series("series.csv", header, rows)
    table = np.array([r[1:] for r in rows])
    base = np.array(ratios(fields_[0]))
    scaled = np.array(ratios(fields_[0] * (3.7 - 1.3j)))
    scale_err = float(np.max(np.abs(scaled - base) / base))
    checks = {
        "finite": check(float(table.max()), bool(np.all(np.isfinite(table)))),
        "scale_invariance": check(scale_err, scale_err <= cfg.tolerance, cfg.tolerance),
    }
    return checks, {"max_ratios": dict(zip(header[1:], table.max(axis=0).tolist()))}


def small_time_probe(cfg: RunConfig, ctx: RunContext) -> tuple[dict, dict]:
    """Growth of ||W(t)u0 - u0||_inf and its weighted variant for small t."""
    spec = ctx.spec()
    u0 = ctx.data()
    fc = frozen_coefficient(u0, spec, cfg.M)
    rep = small_time_continuity(u0, fc, cfg.times, cfg.dt, cfg.m)
    ctx.write_series(
        "series.csv", ("t", "sup_diff", "weighted_diff"), list(zip(rep.times, rep.sup_diff, rep.weighted_diff))
    )
    tol = cfg.tolerance
    checks = {
        "slope": check(rep.slope, abs(rep.slope - 1) <= tol, [1 - tol, 1 + tol]),
        "weighted_slope": check(rep.weighted_slope, abs(rep.weighted_slope - 1) <= tol, [1 - tol, 1 + tol]),
    }
    return checks, {"slope": rep.slope, "weighted_slope": rep.weighted_slope}


def _self_convergence(u0: Field, T: float, ladder, stepper: str, nonlinear) -> list:
    finals = []
    for dt in ladder:
        n = n_steps_for(T, dt)
        finals.append(march(u0, n, T / n, nonlinear, stepper, save_every=None).final)
    scale = finals[-1].l2()
    return [(finals[i] - finals[i + 1]).l2() / scale for i in range(len(finals) - 1)]


def convergence_study(cfg: RunConfig, ctx: RunContext) -> tuple[dict, dict]:
    """Richardson self-convergence orders of both steppers over a halving dt ladder."""
    ladder = tuple(sorted(cfg.ladder, reverse=True))
    if len(ladder) < 3:
        raise ConfigurationError("the dt ladder needs at least 3 rungs", "ladder")
    for a, b in zip(ladder, ladder[1:]):
        if not math.isclose(a / b, 2.0, rel_tol=1e-9):
            raise ConfigurationError("each rung of the dt ladder must halve the previous one", "ladder")
    u0 = ctx.data()
    if cfg.linear:
        nonlinear = zero_nonlinearity
    else:
        nonlinear = GDNLSNonlinearity(u0.grid, ctx.spec())
    rows, checks, orders = [], {}, {}
    for stepper in ("strang", "ifrk4"):
        errs = _self_convergence(u0, cfg.T, ladder, stepper, nonlinear)
        saturated = max(errs) < 1e-12
        monotone = all(e1 > e2 for e1, e2 in zip(errs, errs[1:]))
        order = float("nan") if saturated else loglog_slope(ladder[:-1], errs)
        status = "saturated" if saturated else ("ok" if monotone else "non_monotone")
        for dt, e in zip(ladder, errs):
            rows.append((stepper, dt, e, order, status))
        orders[stepper] = order
        if saturated:
            checks[f"{stepper}_exact"] = check(max(errs), True, 1e-12)
        else:
            target, band = ORDER_BANDS[stepper]
            checks[f"{stepper}_order"] = check(order, abs(order - target) <= band, [target - band, target + band])
    ctx.write_series("series.csv", ("stepper", "dt", "error", "order", "status"), rows)
    return checks, {"orders": orders}


def dependence_study(cfg: RunConfig, ctx: RunContext) -> tuple[dict, dict]:
    """Lipschitz-type ratio of solution differences against data differences."""
    spec = ctx.spec()
    u0 = ctx.data()
    p = XTNormParams(ctx.class_params(), cfg.T, cfg.dt)
    rows = []
    for eps in cfg.perturbations:
        rep = dependence_probe(u0, u0 * (1 + eps), spec, p, cfg.stepper)
        rows.append((eps, rep.lhs, rep.rhs, rep.ratio))
    ctx.write_series("series.csv", ("perturbation", "lhs", "rhs", "ratio"), rows)
    ratios = [r[3] for r in rows]
    spread = max(ratios) / min(ratios)
    checks = {
        "finite": check(max(ratios), all(np.isfinite(ratios))),
        "stable": check(spread, spread <= 2.0, 2.0),
    }
    return checks, {"ratios": ratios}


REGISTRY: dict[str, Callable] = {
    "soliton_propagation": soliton_propagation,
    "picard_study": picard_study,
    "smoothing_probe": smoothing_probe,
    "inequality_sweep": inequality_sweep,
    "small_time_probe": small_time_probe,
    "convergence_study": convergence_study,
    "dependence_study": dependence_study,
}


# -- runner -----------------------------------------------------------------------------------


def code_version() -> dict:
    return {
        "gdnls": __version__,
        "numpy": np.__version__,
        "scipy": scipy.__version__,
        "python": platform.python_version(),
    }


def run_experiment(cfg: RunConfig, out: str | Path, mu_cache_dir: str | Path | None = None) -> dict:
    """Run one registered experiment and return its finalized manifest.

    Numerical failures propagate after the manifest is finalized with status
    ``numerical_failure``; partial CSVs already written stay in place.
    """
    cfg = resolve_defaults(cfg)
    out = Path(out)
    out.mkdir(parents=True, exist_ok=True)
    ctx = RunContext(cfg, out, Path(mu_cache_dir) if mu_cache_dir else out)
    manifest = {
        "config": cfg.to_dict(),
        "experiment": cfg.experiment,
        "code_version": code_version(),
        "status": "running",
        "started": time.strftime("%Y-%m-%dT%H:%M:%S"),
    }
    write_json(out / MANIFEST, manifest)
    t0 = time.perf_counter()
    try:
        if cfg.data_kind in ("solitary", "decay", "file"):
            manifest["derived"] = derived_quantities(ctx.data(), ctx.class_params())
        checks, extra = REGISTRY[cfg.experiment](cfg, ctx)
    except GDNLSError as exc:
        manifest.update(
            status="numerical_failure" if not isinstance(exc, ValueError) else "configuration_error",
            error=f"{type(exc).__name__}: {exc}",
            wall_clock_s=time.perf_counter() - t0,
            outputs=ctx.outputs,
            mu_star=ctx.mu_record,
        )
        write_json(out / MANIFEST, manifest)
        raise
    manifest.setdefault("derived", {}).update(extra)
    manifest.update(
        status="ok",
        checks=checks,
        passed=all(c["passed"] for c in checks.values()),
        mu_star=ctx.mu_record,
        outputs=ctx.outputs,
        wall_clock_s=time.perf_counter() - t0,
    )
    write_json(out / MANIFEST, manifest)
    return manifest


__all__ = ["EXPERIMENT_DEFAULTS", "REGISTRY", "RunContext", "make_data", "mu_star_record", "resolve_defaults", "run_experiment"]
