"""
Quantitative probes: weighted norms, local smoothing, the Kato smoothing
ratio of the frozen-coefficient flow, interpolation-inequality ratios,
small-time continuity, mass and discrete residuals.

The inequality probes never assert a constant. They return raw ratios
(left side over right side with unit constant), and the tests check that
these stay bounded and stable under grid refinement.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigurationError, DegenerateInputError, ParameterError
from .evolution import EquationSpec, FrozenCoefficient, Trajectory, interval_index, propagator_W, rhs, solve_frozen
from .spectral import (
    DEFAULT_MAX_ORDER,
    Field,
    Grid,
    bessel,
    check_order,
    forward,
    homogeneous_sobolev_norm,
    inverse,
    l2_norm,
    weighted_l2,
    weighted_linf,
)


# -- local smoothing -----------------------------------------------------------


@dataclass(frozen=True, eq=False)
class SmoothingReport:
    """Space-time L^2 norms of a derivative over the unit intervals [j, j+1)."""

    intervals: np.ndarray
    values: np.ndarray
    order: int

    @property
    def sup(self) -> float:
        return float(np.max(self.values)) if self.values.size else 0.0

    @property
    def l1(self) -> float:
        return float(np.sum(self.values))

    def at(self, j: int) -> float:
        hit = np.nonzero(self.intervals == j)[0]
        if not hit.size:
            raise KeyError(j)
        return float(self.values[hit[0]])


def derivative_snapshots(traj: Trajectory, order: int, max_order: int = DEFAULT_MAX_ORDER) -> np.ndarray:
    """d^order/dx^order of every snapshot, shape (n_snapshots, N)."""
    order = check_order(order, max_order)
    if order == 0:
        return np.asarray(traj.values)
    return inverse((1j * traj.grid.xi) ** order * forward(traj.values))


def interval_l2(grid: Grid, density: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """sqrt(sum_{x_i in I_j} density_i dx) for each unit interval I_j meeting the box."""
    j = interval_index(grid)
    lo = j.min()
    sums = np.bincount(j - lo, weights=density * grid.dx)
    return np.arange(lo, lo + sums.size), np.sqrt(np.maximum(sums, 0.0))


def local_smoothing(traj: Trajectory, k: int, max_order: int = DEFAULT_MAX_ORDER) -> SmoothingReport:
    """Norms of d^{k+1} u in L^2(I_j x [0, T]) for every unit interval I_j.

    Time integration is trapezoidal over the snapshots; space integration is
    the rectangle rule on the nodes lying in [j, j+1).
    """
    if k < 0:
        raise ConfigurationError(f"k must be >= 0, got {k}", "k")
    d = derivative_snapshots(traj, k + 1, max_order)
    if len(traj) == 1:
        density = np.zeros(traj.grid.N)
    else:
        density = np.trapezoid(np.abs(d) ** 2, dx=traj.dt, axis=0)
    idx, vals = interval_l2(traj.grid, density)
    return SmoothingReport(idx, vals, k + 1)


def smoothing_sup(traj: Trajectory, order: int, max_order: int = DEFAULT_MAX_ORDER) -> float:
    """ell^inf over unit intervals of ||d^order u||_{L^2(I_j x [0,T])}."""
    return local_smoothing(traj, order - 1, max_order).sup


# -- Kato smoothing ratio ---------------------------------------------------------


@dataclass(frozen=True)
class KatoTerms:
    """The two numerator pieces of the smoothing ratio, each divided by ||D^{1/2} v0||_2."""

    sup_half_derivative: float
    local_smoothing: float

    @property
    def ratio(self) -> float:
        return self.sup_half_derivative + self.local_smoothing


def kato_smoothing_terms(v0: Field, fc: FrozenCoefficient, T: float, dt: float) -> KatoTerms:
    """Evolve the homogeneous frozen equation and split the smoothing ratio.

    sup_t ||D^{1/2} u(t)||_2 and sup_j ||u_x||_{L^2(I_j x [0,T])}, both over
    ||D^{1/2} v0||_2.
    """
    den = homogeneous_sobolev_norm(v0, 0.5)
    if not den > 0:
        raise DegenerateInputError("||D^{1/2} v0||_2 vanishes")
    traj = solve_frozen(fc, v0, T, dt)
    weights = np.abs(traj.grid.xi)
    half = np.sqrt(2 * traj.grid.L * np.sum(weights * np.abs(traj.hats()) ** 2, axis=1))
    smooth = local_smoothing(traj, 0).sup
    return KatoTerms(float(np.max(half)) / den, smooth / den)


def kato_smoothing_ratio(v0: Field, fc: FrozenCoefficient, T: float, dt: float) -> float:
    """(sup_t ||D^{1/2}u||_2 + sup_j ||u_x||_{L^2(I_j^T)}) / ||D^{1/2} v0||_2."""
    return kato_smoothing_terms(v0, fc, T, dt).ratio


# -- interpolation inequalities ------------------------------------------------------


def _ratio(num: float, den: float, what: str) -> float:
    if not den > 0:
        raise DegenerateInputError(f"{what}: right-hand side vanishes")
    return float(num / den)


def interp_check_1(f: Field, a: float, b: float, gamma: float, variant: int = 1) -> float:
    """Ratio of the two sides of the weight/regularity interpolation inequality.

    variant 1: ||J^{gamma a}(<x>^{(1-gamma) b} f)|| / (||<x>^b f||^{1-gamma} ||J^a f||^gamma)
    variant 2: ||<x>^{gamma a} J^{(1-gamma) b} f|| / (||J^b f||^{1-gamma} ||<x>^a f||^gamma)

    ``gamma`` may equal 1 (the closure of the admissible range).
    """
    if not (a > 0 and b > 0):
        raise ParameterError(f"need a, b > 0, got a={a}, b={b}")
    if not 0 < gamma <= 1:
        raise ParameterError(f"gamma must lie in (0, 1], got {gamma}")
    g = f.grid
    if variant == 1:
        lhs = l2_norm(bessel(Field(g, g.weight((1 - gamma) * b) * f.values), gamma * a))
        w = l2_norm(Field(g, g.weight(b) * f.values))
        s = l2_norm(bessel(f, a))
        rhs_ = w ** (1 - gamma) * s**gamma
    elif variant == 2:
        lhs = l2_norm(Field(g, g.weight(gamma * a) * bessel(f, (1 - gamma) * b).values))
        s = l2_norm(bessel(f, b))
        w = l2_norm(Field(g, g.weight(a) * f.values))
        rhs_ = s ** (1 - gamma) * w**gamma
    else:
        raise ParameterError(f"variant must be 1 or 2, got {variant}")
    if not (w > 0 and s > 0):
        raise DegenerateInputError("interp_check_1: right-hand side vanishes")
    return _ratio(lhs, rhs_, "interp_check_1")


# exponent shifts (weight of d^{j+1} f, weight of d^{j-1} f) in the product term
_IBP_SHIFTS = {1: (0, 0), 2: (-1, 1), 3: (1, -1)}


def interp_check_2(f: Field, k: int, j: int, variant: int = 1) -> float:
    """||<x>^k d^j f||^2 over the integration-by-parts bound with unit constant.

    The bound is ||<x>^{k+p} d^{j+1} f|| ||<x>^{k+q} d^{j-1} f|| + ||<x>^{k-1} d^{j-1} f||^2
    with (p, q) = (0, 0), (-1, 1), (1, -1) for variants 1, 2, 3.
    """
    if k < 1 or j < 1:
        raise ParameterError(f"need k, j >= 1, got k={k}, j={j}")
    try:
        p, q = _IBP_SHIFTS[variant]
    except KeyError:
        raise ParameterError(f"variant must be 1, 2 or 3, got {variant}")
    mo = max(DEFAULT_MAX_ORDER, j + 1)
    lhs = weighted_l2(f, k, j, mo) ** 2
    prod = weighted_l2(f, k + p, j + 1, mo) * weighted_l2(f, k + q, j - 1, mo)
    lower = weighted_l2(f, k - 1, j - 1, mo) ** 2
    return _ratio(lhs, prod + lower, "interp_check_2")


# -- small-time continuity ------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class ContinuityReport:
    times: np.ndarray
    sup_diff: np.ndarray
    weighted_diff: np.ndarray
    m: float
    slope: float
    weighted_slope: float


def loglog_slope(x, y) -> float:
    """Least-squares slope of log y against log x."""
    x, y = np.asarray(x, float), np.asarray(y, float)
    if x.size < 2 or np.any(x <= 0) or np.any(y <= 0):
        return float("nan")
    return float(np.polyfit(np.log(x), np.log(y), 1)[0])


def small_time_continuity(
    u0: Field, fc: FrozenCoefficient, T_list, dt: float = 1e-4, m: float = 3
) -> ContinuityReport:
    """||W(t)u0 - u0||_inf and ||<x>^m (W(t)u0 - u0)||_inf for each t, with log-log slopes."""
    times = np.asarray(T_list, dtype=float)
    if np.any(times < 0):
        raise ParameterError("times must be >= 0")
    sup, wsup = [], []
    for t in times:
        diff = propagator_W(fc, u0, float(t), dt) - u0
        sup.append(diff.linf())
        wsup.append(weighted_linf(diff, m))
    sup, wsup = np.array(sup), np.array(wsup)
    pos = times > 0
    return ContinuityReport(
        times, sup, wsup, m, loglog_slope(times[pos], sup[pos]), loglog_slope(times[pos], wsup[pos])
    )


# -- mass and residual ------------------------------------------------------------------


def mass(f: Field) -> float:
    """||f||_2^2 by quadrature."""
    return l2_norm(f) ** 2


def residual(traj: Trajectory, spec: EquationSpec) -> float:
    """max over interior snapshots of ||centered time difference - RHS(u)||_2."""
    if len(traj) < 3:
        raise ConfigurationError("residual needs at least 3 snapshots", "traj")
    worst = 0.0
    for n in range(1, len(traj) - 1):
        dudt = (traj.values[n + 1] - traj.values[n - 1]) / (2 * traj.dt)
        r = Field(traj.grid, dudt) - rhs(traj[n], spec)
        worst = max(worst, r.l2())
    return worst


def sample_trajectory(fn, grid: Grid, T: float, dt: float) -> Trajectory:
    """Trajectory from an analytic sampler ``fn(grid, t) -> Field``."""
    n = int(round(T / dt))
    return Trajectory(grid, 0.0, dt, np.array([fn(grid, k * dt).values for k in range(n + 1)]))


# -- random test data ------------------------------------------------------------------


def random_smooth_field(grid: Grid, seed, n_packets: int = 3, spread: float = 5.0) -> Field:
    """Sum of Gaussian wave packets with seeded centres, widths, carriers and amplitudes.

    The packets are defined by a formula in x, so the same seed gives the
    same function on every grid.
    """
    rng = np.random.default_rng(seed)
    centres = rng.uniform(-spread, spread, n_packets)
    widths = rng.uniform(0.5, 2.0, n_packets)
    carriers = rng.uniform(-3.0, 3.0, n_packets)
    amps = rng.normal(size=n_packets) + 1j * rng.normal(size=n_packets)
    x = grid.x[:, None]
    packets = amps * np.exp(-(((x - centres) / widths) ** 2) + 1j * carriers * x)
    return Field(grid, packets.sum(axis=1))


def gaussian(grid: Grid, width: float = 1.0, centre: float = 0.0) -> Field:
    return Field(grid, np.exp(-(((grid.x - centre) / width) ** 2)))


__all__ = [
    "ContinuityReport",
    "KatoTerms",
    "SmoothingReport",
    "gaussian",
    "interp_check_1",
    "interp_check_2",
    "kato_smoothing_ratio",
    "kato_smoothing_terms",
    "local_smoothing",
    "loglog_slope",
    "mass",
    "random_smooth_field",
    "residual",
    "sample_trajectory",
    "small_time_continuity",
    "weighted_l2",
    "weighted_linf",
]
