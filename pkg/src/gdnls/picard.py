"""
The contraction map of the existence proof, realized numerically.

Writing b = mu |u0|^alpha, the gDNLS equation becomes the frozen-coefficient
problem w_t = i w_xx + b w_x + F with F = mu (|v|^alpha - |u0|^alpha) v_x.
The map

    Phi(v)(t) = W_b(t) u0 + int_0^t W_b(t - t') F[v](t') dt'

is evaluated by solving that linear problem with the forcing sampled from v.
Picard iteration starts from v^0(t) = W_b(t) u0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from .diagnostics import local_smoothing
from .errors import (
    DegenerateInputError,
    NumericalOverflowError,
    ParameterError,
    PicardDivergence,
    PreconditionError,
)
from .evolution import (
    EquationSpec,
    FrozenCoefficient,
    Trajectory,
    _modpow,
    evolve,
    frozen_coefficient,
    n_steps_for,
    nonlinear_term,
    solve_frozen,
)
from .profiles import ClassParams, class_nu, weighted_inf
from .spectral import DEFAULT_MAX_ORDER, Field, Grid, dealias_mask, forward, inverse, sobolev_norm


@dataclass(frozen=True)
class XTNormParams:
    """Class exponents plus the time window [0, T] sampled every dt."""

    cls: ClassParams = field(default_factory=ClassParams)
    T: float = 0.05
    dt: float = 2e-4

    def __post_init__(self):
        if not self.T > 0:
            raise ParameterError(f"T must be > 0, got {self.T}")
        if not 0 < self.dt <= self.T:
            raise ParameterError(f"need 0 < dt <= T, got dt={self.dt}, T={self.T}")
        n_steps_for(self.T, self.dt)

    @property
    def n_steps(self) -> int:
        return n_steps_for(self.T, self.dt)

    def with_T(self, T: float) -> "XTNormParams":
        return replace(self, T=T)


@dataclass(frozen=True)
class XTNormBreakdown:
    sobolev_sup: float
    weighted_inf_sup: float
    weighted_deriv_sum: float
    smoothing: float
    time_deriv_sum: float
    proximity: float

    def as_dict(self) -> dict:
        return {k: getattr(self, k) for k in self.__dataclass_fields__}

    @property
    def ball_part(self) -> float:
        """The first group of the X_T definition (Sobolev, weighted and smoothing terms)."""
        return self.sobolev_sup + self.weighted_inf_sup + self.weighted_deriv_sum + self.smoothing


# -- batched norms over snapshots ------------------------------------------------------


def _order_cap(*orders) -> int:
    return max(DEFAULT_MAX_ORDER, *orders)


def sobolev_norms(values: np.ndarray, grid: Grid, s: float) -> np.ndarray:
    hats = forward(values)
    w = (1.0 + grid.xi**2) ** s
    return np.sqrt(2 * grid.L * np.sum(w * np.abs(hats) ** 2, axis=-1))


def homogeneous_sobolev_norms(values: np.ndarray, grid: Grid, s: float) -> np.ndarray:
    hats = forward(values)
    w = np.abs(grid.xi) ** (2 * s)
    return np.sqrt(2 * grid.L * np.sum(w * np.abs(hats) ** 2, axis=-1))


def _weighted_l2_rows(values: np.ndarray, grid: Grid, weight: np.ndarray) -> np.ndarray:
    return np.sqrt(np.sum(np.abs(weight * values) ** 2, axis=-1) * grid.dx)


def _derivs(values: np.ndarray, grid: Grid, j: int) -> np.ndarray:
    if j == 0:
        return values
    return inverse((1j * grid.xi) ** j * forward(values))


def time_derivative(traj: Trajectory, spec: EquationSpec) -> np.ndarray:
    """u_t at every snapshot by substituting the gDNLS right-hand side."""
    g = traj.grid
    uxx = _derivs(traj.values, g, 2)
    nl = np.array([nonlinear_term(f, spec).values for f in traj])
    return 1j * uxx + nl


def _require_finite(name: str, value: float) -> float:
    if not np.isfinite(value):
        raise NumericalOverflowError(f"X_T component {name!r} is not finite")
    return float(value)


def xt_norm(v: Trajectory, u0: Field, p: XTNormParams, spec: EquationSpec | None = None) -> XTNormBreakdown:
    """All six pieces of the X_T norm of ``v`` (sup over t = max over snapshots).

    Time derivatives come from substituting the equation, not from
    differencing snapshots.
    """
    spec = EquationSpec(alpha=p.cls.alpha) if spec is None else spec
    if abs(v.T - p.T) > 1e-9 * p.T:
        raise ParameterError(f"trajectory covers [0, {v.T}], expected [0, {p.T}]")
    c = p.cls
    g = v.grid
    wm = g.weight(c.m)
    vals = np.asarray(v.values)
    sob = np.max(sobolev_norms(vals, g, c.s))
    winf = np.max(wm * np.abs(vals))
    wder = np.max(sum(_weighted_l2_rows(_derivs(vals, g, j + 1), g, wm) for j in range(c.M + 1)))
    smooth = local_smoothing(v, c.k, _order_cap(c.k + 1)).sup
    ut = time_derivative(v, spec)
    tder = np.max(sum(_weighted_l2_rows(_derivs(ut, g, j), g, wm) for j in range(2)))
    prox = np.max(wm * np.abs(vals - u0.values[None, :]))
    comps = dict(
        sobolev_sup=sob,
        weighted_inf_sup=winf,
        weighted_deriv_sum=wder,
        smoothing=smooth,
        time_deriv_sum=tder,
        proximity=prox,
    )
    return XTNormBreakdown(**{k: _require_finite(k, val) for k, val in comps.items()})


# -- the map Phi ------------------------------------------------------------------------


def difference_forcing(v: Trajectory, u0: Field, spec: EquationSpec) -> Trajectory:
    """F(t) = mu (|v|^alpha - |u0|^alpha) v_x at every snapshot of v."""
    g = v.grid
    vals = np.asarray(v.values)
    w = _modpow(vals, spec.alpha, spec.epsilon) - _modpow(u0.values, spec.alpha, spec.epsilon)[None, :]
    out = spec.mu * w * _derivs(vals, g, 1)
    if spec.dealias:
        out = inverse(np.where(dealias_mask(g), forward(out), 0.0))
    return Trajectory(g, v.t0, v.dt, out)


def phi_map(
    v: Trajectory,
    u0: Field,
    spec: EquationSpec,
    fc: FrozenCoefficient,
    p: XTNormParams,
) -> Trajectory:
    """Phi(v): solve w_t = i w_xx + b w_x + F[v], w(0) = u0, on the time grid of v.

    By linearity this is W_b(t) u0 plus the Duhamel integral of F[v].
    """
    if v.grid != u0.grid or fc.grid != u0.grid:
        raise ParameterError("trajectory, data and coefficient must share a grid")
    if len(v) != p.n_steps + 1 or not math.isclose(v.dt, p.dt, rel_tol=1e-12):
        raise ParameterError("trajectory does not match the (T, dt) of the X_T parameters")
    forcing = difference_forcing(v, u0, spec)
    return solve_frozen(fc, u0, p.T, p.dt, forcing=forcing)


def linear_iterate(u0: Field, fc: FrozenCoefficient, p: XTNormParams) -> Trajectory:
    """v^0(t) = W_b(t) u0 on the X_T time grid."""
    return solve_frozen(fc, u0, p.T, p.dt)


@dataclass
class PicardHistory:
    """Per-iterate records of a Picard run (index n refers to v^n)."""

    distances: list = field(default_factory=list)
    norms: list = field(default_factory=list)
    lower_bounds: list = field(default_factory=list)
    lam: float = float("nan")
    nu: float = float("nan")
    converged: bool = False

    @property
    def ratios(self) -> list:
        d = self.distances
        return [d[i + 1] / d[i] for i in range(len(d) - 1) if d[i] > 0]

    @property
    def iterations(self) -> int:
        return len(self.distances)


def _check_data(u0: Field, cls: ClassParams) -> ClassParams:
    lam = weighted_inf(u0, cls.m)
    if not lam > 0:
        raise PreconditionError(f"inf <x>^{cls.m} |u0| = {lam:g}; the data must be bounded below (lambda > 0)")
    nu = class_nu(u0, cls)
    if not np.isfinite(nu):
        raise PreconditionError("class norm nu of the data is not finite")
    return replace(cls, lam=lam, nu=nu)


def _lower_bound(v: Trajectory, m: float) -> float:
    return float(np.min(v.grid.weight(m) * np.abs(v.values)))


def picard_solve(
    u0: Field,
    spec: EquationSpec,
    p: XTNormParams,
    tol: float = 1e-12,
    max_iter: int = 40,
    record_norms: bool = True,
) -> tuple[Trajectory, PicardHistory]:
    """Iterate v^{n+1} = Phi(v^n) from v^0 = W_b(t) u0.

    Stops once the sup-in-time L^2 distance between successive iterates is
    at most ``tol``, or after ``max_iter`` applications of Phi. Three
    consecutive increases of that distance raise :class:`PicardDivergence`.
    """
    cls = _check_data(u0, p.cls)
    fc = frozen_coefficient(u0, spec, cls.M)
    hist = PicardHistory(lam=cls.lam, nu=cls.nu)

    def record(v):
        hist.lower_bounds.append(_lower_bound(v, cls.m))
        if record_norms:
            hist.norms.append(xt_norm(v, u0, p, spec))

    v = linear_iterate(u0, fc, p)
    record(v)
    rises = 0
    for _ in range(max_iter):
        nxt = phi_map(v, u0, spec, fc, p)
        d = (nxt - v).sup_l2()
        if hist.distances and d > hist.distances[-1]:
            rises += 1
        else:
            rises = 0
        hist.distances.append(d)
        v = nxt
        record(v)
        if d <= tol:
            hist.converged = True
            break
        if rises >= 3:
            raise PicardDivergence(
                f"Picard distances rose 3 times in a row (last {d:.3e}); try a smaller T", history=hist
            )
    return v, hist


def default_perturbation(u0: Field, size: float = 1e-3) -> Field:
    """A smooth bump of relative size ``size`` that keeps the <x>^{-m} decay of u0."""
    return Field(u0.grid, size * u0.values * np.exp(-(u0.grid.x**2) / 4))


def contraction_factor(
    u0: Field,
    spec: EquationSpec,
    p: XTNormParams,
    delta: Field | None = None,
) -> float:
    """sup_t ||Phi(v1) - Phi(v2)||_2 / sup_t ||v1 - v2||_2 with v1 = W_b(t)u0, v2 = v1 + W_b(t) delta."""
    delta = default_perturbation(u0) if delta is None else delta
    if not np.any(delta.values):
        raise DegenerateInputError("perturbation delta is identically zero")
    cls = _check_data(u0, p.cls)
    fc = frozen_coefficient(u0, spec, cls.M)
    v1 = linear_iterate(u0, fc, p)
    v2 = v1 + solve_frozen(fc, delta, p.T, p.dt)
    den = (v1 - v2).sup_l2()
    if not den > 0:
        raise DegenerateInputError("perturbed trajectory coincides with the base trajectory")
    num = (phi_map(v1, u0, spec, fc, p) - phi_map(v2, u0, spec, fc, p)).sup_l2()
    return float(num / den)


# -- continuous dependence --------------------------------------------------------------


def triple_norms(values: np.ndarray, grid: Grid, cls: ClassParams) -> np.ndarray:
    """sum_{j=1}^{M+1} || |x|^m d^j v ||_2 + sum_{j=0}^{k} ||d^j v||_2, per snapshot."""
    values = np.atleast_2d(values)
    wx = np.abs(grid.x) ** cls.m
    ones = np.ones(grid.N)
    total = sum(_weighted_l2_rows(_derivs(values, grid, j), grid, wx) for j in range(1, cls.M + 2))
    total = total + sum(_weighted_l2_rows(_derivs(values, grid, j), grid, ones) for j in range(cls.k + 1))
    return total


@dataclass(frozen=True)
class DependenceReport:
    lhs: float
    rhs: float
    ratio: float
    components: dict


def dependence_probe(
    u0: Field,
    v0: Field,
    spec: EquationSpec,
    p: XTNormParams,
    stepper: str = "ifrk4",
) -> DependenceReport:
    """Difference norms of w = u - v against the size of u0 - v0.

    Left side: sup_t |||w||| + sup_t ||D^{k+1/2} w|| + the ell^inf local
    smoothing norm of d^{k+1} w + sup_t ||<x>^m w||_inf + sup_t sum_{j<=1}
    ||<x>^m d_t d^j w||. Right side: |||u0 - v0||| + ||u0 - v0||_{s,2}.
    """
    cls = p.cls
    for name, f in (("u0", u0), ("v0", v0)):
        if not weighted_inf(f, cls.m) > 0:
            raise PreconditionError(f"{name} is not bounded below by a positive multiple of <x>^-{cls.m}")
    u = evolve(u0, p.T, p.dt, stepper, spec)
    v = evolve(v0, p.T, p.dt, stepper, spec)
    w = u - v
    g = w.grid
    vals = np.asarray(w.values)
    wm = g.weight(cls.m)
    wt = time_derivative(u, spec) - time_derivative(v, spec)
    comps = {
        "triple": float(np.max(triple_norms(vals, g, cls))),
        "half_derivative": float(np.max(homogeneous_sobolev_norms(vals, g, cls.k + 0.5))),
        "smoothing": local_smoothing(w, cls.k, _order_cap(cls.k + 1)).sup,
        "weighted_inf": float(np.max(wm * np.abs(vals))),
        "time_deriv_sum": float(np.max(sum(_weighted_l2_rows(_derivs(wt, g, j), g, wm) for j in range(2)))),
    }
    d0 = u0 - v0
    rhs_ = float(triple_norms(d0.values, g, cls)[0]) + sobolev_norm(d0, cls.s)
    lhs = float(sum(comps.values()))
    if lhs == 0:
        ratio = 0.0
    elif rhs_ > 0:
        ratio = lhs / rhs_
    else:
        ratio = float("inf")
    return DependenceReport(lhs, rhs_, ratio, comps)


__all__ = [
    "DependenceReport",
    "PicardHistory",
    "XTNormBreakdown",
    "XTNormParams",
    "contraction_factor",
    "default_perturbation",
    "dependence_probe",
    "difference_forcing",
    "linear_iterate",
    "phi_map",
    "picard_solve",
    "triple_norms",
    "xt_norm",
]
