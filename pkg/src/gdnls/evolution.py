"""
Right-hand sides, time steppers, the frozen-coefficient propagator and Duhamel.

Every evolution here has the form

    u_t = i u_xx + N(t, u),

with the dispersive part integrated exactly in Fourier space. ``N`` is one of

* gDNLS           mu |u|^alpha u_x
* divergence form mu (|u|^alpha u)_x
* frozen          b(x) w_x + f(x, t)

Nonlinearities are callables ``N(t, u_hat) -> N_hat`` acting on forward-
normalized coefficients (see :mod:`gdnls.spectral`). Two steppers share that
interface:

``ifrk4``  Lawson integrating-factor RK4 on v = exp(-t i d_xx) u; order 4.
``strang`` exact half-step of i d_xx, RK4 full step of N, exact half-step; order 2.

Both are exact on the free Schrodinger flow (N = 0).
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass, field
from typing import Callable, Iterator, Literal, Sequence, Union

import numpy as np

from .errors import (
    ConfigurationError,
    NumericalOverflowError,
    ParameterError,
    ShapeError,
    StepFailure,
)
from .spectral import Field, Grid, dealias_mask, deriv, forward, inverse

Nonlinearity = Callable[[float, np.ndarray], np.ndarray]


# -- equation description ----------------------------------------------------


@dataclass(frozen=True)
class EquationSpec:
    """Nonlinearity parameters: mu (|mu| = 1), alpha in (0, 1], form, epsilon, dealias."""

    mu: complex = -1.0
    alpha: float = 1.0
    form: Literal["gdnls", "divergence"] = "gdnls"
    epsilon: float = 0.0
    dealias: bool = False

    def __post_init__(self):
        mu = complex(self.mu)
        if abs(abs(mu) - 1.0) > 1e-12:
            raise ParameterError(f"|mu| must equal 1, got |mu| = {abs(mu)!r}")
        if not 0 < self.alpha <= 1:
            raise ParameterError(f"alpha must lie in (0, 1], got {self.alpha}")
        if self.epsilon < 0:
            raise ParameterError(f"epsilon must be >= 0, got {self.epsilon}")
        if self.form not in ("gdnls", "divergence"):
            raise ParameterError(f"unknown equation form {self.form!r}")
        object.__setattr__(self, "mu", mu)


def regularized_modulus_pow(f: Field, alpha: float, epsilon: float = 0.0) -> Field:
    """(|f|^2 + eps^2)^(alpha/2); exactly |f|^alpha when eps = 0."""
    return Field(f.grid, _modpow(f.values, alpha, epsilon))


def _modpow(v: np.ndarray, alpha: float, epsilon: float) -> np.ndarray:
    if epsilon == 0:
        return np.abs(v) ** alpha
    return (np.abs(v) ** 2 + epsilon * epsilon) ** (alpha / 2)


def _maybe_dealias(f: Field, spec: EquationSpec) -> Field:
    if not spec.dealias:
        return f
    return Field.from_hat(f.grid, np.where(dealias_mask(f.grid), f.hat, 0.0))


def _check_finite(values, what: str):
    if not np.all(np.isfinite(values)):
        raise NumericalOverflowError(f"{what} produced non-finite values")


def nonlinear_term(u: Field, spec: EquationSpec) -> Field:
    """The non-dispersive part of the right-hand side for ``spec.form``."""
    w = _modpow(u.values, spec.alpha, spec.epsilon)
    if spec.form == "gdnls":
        out = Field(u.grid, spec.mu * w * deriv(u, 1).values)
    else:
        out = spec.mu * deriv(Field(u.grid, w * u.values), 1)
    return _maybe_dealias(out, spec)


def rhs_gdnls(u: Field, spec: EquationSpec) -> Field:
    """i u_xx + mu |u|^alpha u_x."""
    if spec.form != "gdnls":
        raise ConfigurationError("rhs_gdnls needs spec.form == 'gdnls'", "form")
    return 1j * deriv(u, 2) + nonlinear_term(u, spec)


def rhs_divergence(u: Field, spec: EquationSpec) -> Field:
    """i u_xx + mu (|u|^alpha u)_x."""
    if spec.form != "divergence":
        raise ConfigurationError("rhs_divergence needs spec.form == 'divergence'", "form")
    return 1j * deriv(u, 2) + nonlinear_term(u, spec)


def rhs(u: Field, spec: EquationSpec) -> Field:
    """Right-hand side of the equation selected by ``spec.form``."""
    return 1j * deriv(u, 2) + nonlinear_term(u, spec)


# -- frozen coefficient --------------------------------------------------------


@dataclass(frozen=True, eq=False)
class FrozenCoefficient:
    """b(x) = mu |u0|^alpha together with its size proxies A1 and A2."""

    b: Field
    A1: float
    A2: float

    def __post_init__(self):
        for name in ("A1", "A2"):
            v = getattr(self, name)
            if not (np.isfinite(v) and v >= 0):
                raise ParameterError(f"{name} must be finite and >= 0, got {v}")

    @property
    def grid(self) -> Grid:
        return self.b.grid

    @classmethod
    def from_values(cls, b: Field, M: int = 2) -> "FrozenCoefficient":
        return cls(b, coefficient_norm(b, M), unit_interval_sup_sum(b))

    @classmethod
    def zero(cls, grid: Grid) -> "FrozenCoefficient":
        return cls(grid.zeros(), 0.0, 0.0)


def frozen_coefficient(u0: Field, spec: EquationSpec, M: int = 2) -> FrozenCoefficient:
    """Freeze the nonlinearity at the datum: b = mu |u0|^alpha."""
    b = spec.mu * regularized_modulus_pow(u0, spec.alpha, spec.epsilon)
    return FrozenCoefficient.from_values(b, M)


def coefficient_norm(b: Field, M: int) -> float:
    """sum_{k=0}^{M} ||b^(k)||_inf with spectral derivatives."""
    return float(sum(deriv(b, k, max_order=max(M, 8)).linf() for k in range(M + 1)))


def interval_index(grid: Grid) -> np.ndarray:
    """Integer j with x in [j, j+1) for every node."""
    return np.floor(grid.x + 1e-12 * grid.dx).astype(int)


def unit_interval_sup_sum(b: Field) -> float:
    """sum_j max_{I_j} |b| over the unit intervals meeting the box."""
    j = interval_index(b.grid)
    mags = np.abs(b.values)
    out = np.full(j.max() - j.min() + 1, 0.0)
    np.maximum.at(out, j - j.min(), mags)
    return float(out.sum())


def rhs_frozen(w: Field, fc: FrozenCoefficient, forcing: Field | None = None) -> Field:
    """i w_xx + b w_x + forcing."""
    if w.grid != fc.grid:
        raise ShapeError("coefficient and field live on different grids")
    out = 1j * deriv(w, 2) + fc.b * deriv(w, 1)
    if forcing is not None:
        out = out + forcing
    return out


@dataclass(frozen=True)
class AdmissibilityReport:
    """Finite-box proxies for the coefficient hypotheses."""

    max_imag_integral: float
    A1: float
    A2: float
    M: int


def _cumulative_periodic(values: np.ndarray, dx: float) -> np.ndarray:
    """Trapezoid antiderivative of a periodic sample over two periods (2N+1 points)."""
    v = np.concatenate([values, values, values[:1]])
    return np.concatenate([[0.0], np.cumsum(0.5 * (v[1:] + v[:-1]) * dx)])


def coefficient_admissibility(fc: FrozenCoefficient, M: int = 2) -> AdmissibilityReport:
    """Report the imaginary-part integrability proxy, A1 and the A2 proxy of ``fc.b``.

    max_imag_integral is the sup over anchors x_i and 0 <= l <= 2L of
    |int_0^l Im b(x_i +- r) dr|, from the trapezoid antiderivative over two
    periods. A2 is the sum over unit intervals of max |b|.
    """
    grid = fc.grid
    N = grid.N
    im = np.imag(fc.b.values)
    if np.all(im == 0):
        max_imag_integral = 0.0
    else:
        cum = _cumulative_periodic(im, grid.dx)
        windows = np.lib.stride_tricks.sliding_window_view(cum, N + 1)[:N]
        hi, lo = windows.max(axis=1), windows.min(axis=1)
        start, end = windows[:, 0], windows[:, -1]
        max_imag_integral = float(max(np.max(hi - start), np.max(start - lo), np.max(hi - end), np.max(end - lo)))
    return AdmissibilityReport(max_imag_integral=max_imag_integral, A1=coefficient_norm(fc.b, M), A2=unit_interval_sup_sum(fc.b), M=M)


# -- trajectories --------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class Trajectory:
    """Snapshots u(., t0 + n dt), n = 0..len-1, on a common grid.

    ``values`` has shape (n_snapshots, N). ``info`` carries per-snapshot
    records (``max_amplitude``, ``boundary_amplitude``) when produced by
    :func:`evolve`.
    """

    grid: Grid
    t0: float
    dt: float
    values: np.ndarray = field(repr=False)
    info: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        v = np.array(self.values, dtype=complex)
        if v.ndim != 2 or v.shape[1] != self.grid.N:
            raise ShapeError(f"trajectory values must have shape (n, {self.grid.N}), got {v.shape}")
        if v.shape[0] < 1:
            raise ShapeError("trajectory needs at least one snapshot")
        if not self.dt > 0:
            raise ConfigurationError(f"dt must be > 0, got {self.dt}", "dt")
        v.flags.writeable = False
        object.__setattr__(self, "values", v)

    @classmethod
    def constant(cls, f: Field, dt: float, n_steps: int, t0: float = 0.0) -> "Trajectory":
        return cls(f.grid, t0, dt, np.broadcast_to(f.values, (n_steps + 1, f.grid.N)))

    def __len__(self) -> int:
        return self.values.shape[0]

    def __getitem__(self, n: int) -> Field:
        return Field(self.grid, self.values[n])

    def __iter__(self) -> Iterator[Field]:
        for n in range(len(self)):
            yield self[n]

    @property
    def times(self) -> np.ndarray:
        return self.t0 + self.dt * np.arange(len(self))

    @property
    def T(self) -> float:
        return self.dt * (len(self) - 1)

    @property
    def final(self) -> Field:
        return self[-1]

    def _check_compatible(self, other: "Trajectory"):
        if other.grid != self.grid or len(other) != len(self) or not math.isclose(other.dt, self.dt):
            raise ShapeError("trajectories differ in grid or time sampling")

    def __add__(self, other: "Trajectory") -> "Trajectory":
        self._check_compatible(other)
        return Trajectory(self.grid, self.t0, self.dt, self.values + other.values)

    def __sub__(self, other: "Trajectory") -> "Trajectory":
        self._check_compatible(other)
        return Trajectory(self.grid, self.t0, self.dt, self.values - other.values)

    def __mul__(self, a) -> "Trajectory":
        return Trajectory(self.grid, self.t0, self.dt, a * self.values)

    __rmul__ = __mul__

    def hats(self) -> np.ndarray:
        return forward(self.values)

    def l2_norms(self) -> np.ndarray:
        return np.sqrt(np.sum(np.abs(self.values) ** 2, axis=1) * self.grid.dx)

    def sup_l2(self) -> float:
        """max over snapshots of the L^2 norm."""
        return float(np.max(self.l2_norms()))

    def map(self, fn: Callable[[Field], Field]) -> "Trajectory":
        return Trajectory(self.grid, self.t0, self.dt, np.array([fn(f).values for f in self]))


def sup_l2_distance(a: Trajectory, b: Trajectory) -> float:
    return (a - b).sup_l2()


# -- nonlinearities in Fourier space ------------------------------------------------


class GDNLSNonlinearity:
    """N_hat for mu |u|^alpha u_x (or mu (|u|^alpha u)_x in divergence form)."""

    def __init__(self, grid: Grid, spec: EquationSpec):
        self.grid = grid
        self.spec = spec
        self._ik = 1j * grid.xi
        self._mask = dealias_mask(grid) if spec.dealias else None

    def __call__(self, t: float, uh: np.ndarray) -> np.ndarray:
        s = self.spec
        u = inverse(uh)
        w = _modpow(u, s.alpha, s.epsilon)
        if s.form == "gdnls":
            out = forward(s.mu * w * inverse(self._ik * uh))
        else:
            out = s.mu * self._ik * forward(w * u)
        if self._mask is not None:
            out = np.where(self._mask, out, 0.0)
        return out


class ForcingSampler:
    """Forcing f(t) from a stored trajectory, cubic Lagrange interpolation in t.

    The stencil is the four snapshots around t (shifted inward at the ends),
    which keeps the interpolation error O(dt^4).
    """

    def __init__(self, forcing: Trajectory):
        self.t0 = forcing.t0
        self.dt = forcing.dt
        self.hats = forcing.hats()
        self.n = len(forcing)

    def __call__(self, t: float) -> np.ndarray:
        s = (t - self.t0) / self.dt
        r = round(s)
        if abs(s - r) < 1e-9 and 0 <= r < self.n:
            return self.hats[int(r)]
        if self.n < 4:
            # linear interpolation is all a 2- or 3-snapshot trajectory supports
            i = min(max(int(math.floor(s)), 0), self.n - 2)
            w = s - i
            return (1 - w) * self.hats[i] + w * self.hats[i + 1]
        i0 = min(max(int(math.floor(s)) - 1, 0), self.n - 4)
        nodes = np.arange(i0, i0 + 4, dtype=float)
        out = np.zeros_like(self.hats[0])
        for a in range(4):
            w = 1.0
            for b in range(4):
                if b != a:
                    w *= (s - nodes[b]) / (nodes[a] - nodes[b])
            out = out + w * self.hats[i0 + a]
        return out


class FrozenNonlinearity:
    """N_hat for b(x) w_x + f(t), the frozen-coefficient linear problem."""

    def __init__(self, fc: FrozenCoefficient, forcing: Trajectory | Field | None = None):
        self.fc = fc
        self._b = fc.b.values
        self._zero_b = not np.any(self._b)
        self._ik = 1j * fc.grid.xi
        if forcing is None:
            self._forcing = None
        elif isinstance(forcing, Field):
            if forcing.grid != fc.grid:
                raise ShapeError("forcing and coefficient live on different grids")
            fh = forcing.hat
            self._forcing = lambda t: fh
        else:
            if forcing.grid != fc.grid:
                raise ShapeError("forcing and coefficient live on different grids")
            self._forcing = ForcingSampler(forcing)

    def __call__(self, t: float, wh: np.ndarray) -> np.ndarray:
        if self._zero_b:
            out = np.zeros_like(wh)
        else:
            out = forward(self._b * inverse(self._ik * wh))
        if self._forcing is not None:
            out = out + self._forcing(t)
        return out


def zero_nonlinearity(t: float, uh: np.ndarray) -> np.ndarray:
    return np.zeros_like(uh)


# -- steppers ---------------------------------------------------------------------


def _linear_symbol(grid: Grid) -> np.ndarray:
    """Symbol of i d_xx: i (i xi)^2 = -i xi^2."""
    return -1j * grid.xi**2


def _ifrk4_hat(uh, t, h, N, E_half, E_full):
    k1 = N(t, uh)
    k2 = N(t + h / 2, E_half * (uh + (h / 2) * k1))
    k3 = N(t + h / 2, E_half * uh + (h / 2) * k2)
    k4 = N(t + h, E_full * uh + h * E_half * k3)
    return E_full * uh + (h / 6) * (E_full * k1 + 2 * E_half * (k2 + k3) + k4)


def _strang_hat(uh, t, h, N, E_half, E_full):
    uh = E_half * uh
    k1 = N(t, uh)
    k2 = N(t + h / 2, uh + (h / 2) * k1)
    k3 = N(t + h / 2, uh + (h / 2) * k2)
    k4 = N(t + h, uh + h * k3)
    uh = uh + (h / 6) * (k1 + 2 * k2 + 2 * k3 + k4)
    return E_half * uh


_STEPPERS = {"ifrk4": _ifrk4_hat, "strang": _strang_hat}


def _resolve_nonlinearity(grid: Grid, what) -> Nonlinearity:
    if what is None:
        return zero_nonlinearity
    if isinstance(what, EquationSpec):
        return GDNLSNonlinearity(grid, what)
    if isinstance(what, FrozenCoefficient):
        return FrozenNonlinearity(what)
    if callable(what):
        return what
    raise TypeError(f"cannot build a nonlinearity from {type(what).__name__}")


def _exponentials(grid: Grid, h: float):
    lin = _linear_symbol(grid)
    E_half = np.exp(lin * (h / 2))
    return E_half, E_half * E_half


def step_ifrk4(u: Field, dt: float, nonlinear=None, t: float = 0.0) -> Field:
    """One integrating-factor RK4 step of u_t = i u_xx + N(t, u).

    ``nonlinear`` is an :class:`EquationSpec`, a :class:`FrozenCoefficient`,
    a Fourier-space callable ``N(t, u_hat)``, or None for the free flow.
    """
    if dt == 0:
        return u
    N = _resolve_nonlinearity(u.grid, nonlinear)
    E_half, E_full = _exponentials(u.grid, dt)
    out = _ifrk4_hat(u.hat, t, dt, N, E_half, E_full)
    _step_guard(out, 0)
    return Field.from_hat(u.grid, out)


def step_strang(u: Field, dt: float, nonlinear=None, t: float = 0.0) -> Field:
    """One Strang step: exact half-step of i d_xx, RK4 step of N, exact half-step."""
    if dt == 0:
        return u
    N = _resolve_nonlinearity(u.grid, nonlinear)
    E_half, E_full = _exponentials(u.grid, dt)
    out = _strang_hat(u.hat, t, dt, N, E_half, E_full)
    _step_guard(out, 0)
    return Field.from_hat(u.grid, out)


def _step_guard(uh, n, partial=None):
    if not np.all(np.isfinite(uh)):
        raise StepFailure(f"non-finite state at step {n}", step=n, partial=partial)


def n_steps_for(T: float, dt: float) -> int:
    """Number of steps of size dt covering T; dt must divide T to 1 part in 1e9."""
    if not dt > 0:
        raise ConfigurationError(f"dt must be > 0, got {dt}", "dt")
    n = round(abs(T) / dt)
    if n < 1 or abs(n * dt - abs(T)) > 1e-9 * max(abs(T), dt):
        raise ConfigurationError(f"dt={dt} does not divide T={T}", "dt")
    return int(n)


def march(
    u0: Field,
    n_steps: int,
    h: float,
    nonlinear: Nonlinearity,
    stepper: str = "ifrk4",
    t0: float = 0.0,
    save_every: int | None = 1,
) -> Trajectory:
    """Advance ``n_steps`` steps of size ``h`` (h may be negative).

    Snapshots are kept every ``save_every`` steps (and always the last one
    when ``save_every`` divides ``n_steps``); ``save_every=None`` keeps only
    the initial and final states.
    """
    try:
        step = _STEPPERS[stepper]
    except KeyError:
        raise ConfigurationError(f"unknown stepper {stepper!r}; choose from {sorted(_STEPPERS)}", "stepper")
    grid = u0.grid
    stride = n_steps if save_every is None else int(save_every)
    if stride < 1 or n_steps % stride:
        raise ConfigurationError(f"save_every={save_every} must divide n_steps={n_steps}", "save_every")
    E_half, E_full = _exponentials(grid, h)
    uh = u0.hat.copy()
    saved = [u0.values.copy()]
    for n in range(n_steps):
        uh = step(uh, t0 + n * h, h, nonlinear, E_half, E_full)
        if not np.all(np.isfinite(uh)):
            partial = _assemble(grid, t0, abs(h) * stride, saved)
            raise StepFailure(f"non-finite state at step {n + 1} (t = {t0 + (n + 1) * h:g})", step=n + 1, partial=partial)
        if (n + 1) % stride == 0:
            saved.append(inverse(uh))
    return _assemble(grid, t0, abs(h) * stride, saved)


def _assemble(grid: Grid, t0: float, dt: float, saved: Sequence[np.ndarray]) -> Trajectory:
    values = np.array(saved)
    amps = np.max(np.abs(values), axis=1)
    edges = np.maximum(np.abs(values[:, 0]), np.abs(values[:, -1]))
    return Trajectory(grid, t0, dt, values, info={"max_amplitude": amps, "boundary_amplitude": edges})


def evolve(
    u0: Field,
    T: float,
    dt: float,
    stepper: str = "ifrk4",
    spec: EquationSpec | None = None,
    *,
    nonlinear: Nonlinearity | None = None,
    save_every: int | None = 1,
    t0: float = 0.0,
) -> Trajectory:
    """Integrate the gDNLS equation (or a supplied ``nonlinear``) from t0 to t0 + T.

    Returns ``T/dt + 1`` snapshots by default. A non-finite state raises
    :class:`~gdnls.errors.StepFailure` whose ``partial`` attribute holds the
    snapshots computed so far.
    """
    if not T > 0:
        raise ConfigurationError(f"T must be > 0, got {T}", "T")
    n = n_steps_for(T, dt)
    if nonlinear is None:
        if spec is None:
            raise ConfigurationError("evolve needs an EquationSpec or a nonlinearity", "spec")
        nonlinear = GDNLSNonlinearity(u0.grid, spec)
    return march(u0, n, T / n, nonlinear, stepper, t0=t0, save_every=save_every)


# -- propagator and Duhamel ---------------------------------------------------------------


def propagator_W(fc: FrozenCoefficient, v0: Field, t: float, dt: float, stepper: str = "ifrk4") -> Field:
    """W_b(t) v0: solve w_t = i w_xx + b w_x from 0 to t (t < 0 runs backward)."""
    if v0.grid != fc.grid:
        raise ShapeError("coefficient and data live on different grids")
    if t == 0:
        return v0
    n = max(1, math.ceil(abs(t) / dt - 1e-9))
    traj = march(v0, n, t / n, FrozenNonlinearity(fc), stepper, save_every=None)
    return traj.final


def solve_frozen(
    fc: FrozenCoefficient,
    w0: Field,
    T: float,
    dt: float,
    forcing: Trajectory | Field | None = None,
    save_every: int = 1,
    stepper: str = "ifrk4",
) -> Trajectory:
    """w_t = i w_xx + b w_x + f(t), w(0) = w0, on [0, T]."""
    if w0.grid != fc.grid:
        raise ShapeError("coefficient and data live on different grids")
    n = n_steps_for(T, dt)
    return march(w0, n, T / n, FrozenNonlinearity(fc, forcing), stepper, save_every=save_every)


def duhamel(fc: FrozenCoefficient, forcing: Trajectory, dt: float | None = None) -> Trajectory:
    """z(t) = int_0^t W_b(t - t') f(t') dt' on the time grid of ``forcing``.

    Computed by co-evolving z_t = i z_xx + b z_x + f, z(0) = 0, with IFRK4;
    ``dt`` (default: the forcing spacing) must divide the forcing spacing.
    Stage times between snapshots use cubic interpolation of f.
    """
    if forcing.grid != fc.grid:
        raise ShapeError("coefficient and forcing live on different grids")
    h = forcing.dt if dt is None else dt
    sub = n_steps_for(forcing.dt, h)
    n = (len(forcing) - 1) * sub
    z0 = fc.grid.zeros()
    if n == 0:
        return Trajectory(fc.grid, forcing.t0, forcing.dt, z0.values[None, :])
    N = FrozenNonlinearity(fc, forcing)
    return march(z0, n, forcing.dt / sub, N, "ifrk4", t0=forcing.t0, save_every=sub)


def free_flow(v0: Field, t: float) -> Field:
    """exp(i t d_xx) v0, exact in Fourier space."""
    return Field.from_hat(v0.grid, np.exp(_linear_symbol(v0.grid) * t) * v0.hat)


# -- sign convention of the solitary-wave family -------------------------------------


MU_CANDIDATES = (1.0, -1.0, 1j, -1j)


def soliton_residual(wave, grid: Grid, mu: complex) -> float:
    """sup-norm of i omega psi - c psi_x - (i psi_xx + mu |psi|^alpha psi_x) at t = 0.

    For psi(x, t) = psi(x - ct, 0) e^{i omega t} the time derivative is
    i omega psi - c psi_x, so this is the PDE residual of the travelling wave.
    """
    from .profiles import solitary_wave

    psi = solitary_wave(wave, grid)
    spec = EquationSpec(mu=mu, alpha=wave.alpha)
    dt_psi = 1j * wave.omega * psi - wave.c * deriv(psi, 1)
    return (dt_psi - rhs_gdnls(psi, spec)).linf()


@dataclass(frozen=True)
class MuStarRecord:
    """The selected sign convention and the residual of every candidate."""

    mu_star: complex
    residuals: dict
    omega: float
    c: float
    alpha: float
    L: float
    N: int

    def as_dict(self) -> dict:
        return {
            "mu_star": [self.mu_star.real, self.mu_star.imag],
            "residuals": {_mu_label(k): v for k, v in self.residuals.items()},
            "omega": self.omega,
            "c": self.c,
            "alpha": self.alpha,
            "L": self.L,
            "N": self.N,
        }


def _mu_label(mu: complex) -> str:
    mu = complex(mu)
    names = {1: "+1", -1: "-1", 1j: "+i", -1j: "-i"}
    return names.get(mu, f"{mu.real:+g}{mu.imag:+g}i")


@functools.lru_cache(maxsize=8)
def determine_mu_star(omega: float = 1.0, c: float = 0.0, alpha: float = 1.0, L: float = 40.0, N: int = 4096) -> MuStarRecord:
    """Pick the unit mu for which the solitary-wave formula solves the equation.

    Evaluates the residual for mu in {+1, -1, +i, -i} and returns the unique
    minimizer; ambiguity (two candidates within a factor 100) is an error.
    """
    from .profiles import WaveParams

    wave = WaveParams(omega, c, alpha)
    grid = Grid(L, N)
    res = {complex(mu): soliton_residual(wave, grid, mu) for mu in MU_CANDIDATES}
    order = sorted(res, key=res.get)
    best, second = order[0], order[1]
    if not res[best] * 100 < res[second]:
        raise NumericalOverflowError(f"no clear sign convention: residuals {res}")
    return MuStarRecord(best, res, omega, c, alpha, L, N)


Stepper = Union[str, Callable]

__all__ = [
    "AdmissibilityReport",
    "EquationSpec",
    "MuStarRecord",
    "FrozenCoefficient",
    "FrozenNonlinearity",
    "GDNLSNonlinearity",
    "Trajectory",
    "coefficient_admissibility",
    "determine_mu_star",
    "duhamel",
    "evolve",
    "free_flow",
    "frozen_coefficient",
    "march",
    "nonlinear_term",
    "propagator_W",
    "regularized_modulus_pow",
    "rhs",
    "rhs_divergence",
    "rhs_frozen",
    "rhs_gdnls",
    "solve_frozen",
    "soliton_residual",
    "step_ifrk4",
    "step_strang",
    "sup_l2_distance",
]
