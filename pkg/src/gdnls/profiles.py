"""
Solitary waves of the gDNLS equation and the algebraically decaying data class.

The amplitude profile of the two-parameter solitary-wave family is

    generic    (omega > c^2/4):
        phi(x) = { (2+a)(4 omega - c^2) / (4 sqrt(omega) cosh((a/2) sqrt(4 omega - c^2) x) - 2c) }^(1/a)
    degenerate (omega = c^2/4, c > 0):
        phi(x) = (a+2)^(1/a) c^(1/a) ((a^2/4)(c x)^2 + 1)^(-1/a)

with ``a = alpha``, and the travelling wave is

    psi(x, t) = phi(x - ct) exp i{ omega t + (c/2)(x - ct) - (1/(a+2)) int_{-inf}^{x-ct} phi^a }.

``phi^a`` is a rational function of ``cosh`` (generic) or of ``x^2``
(degenerate) for every ``a``, so the phase integral has the closed forms

    int_{-inf}^{z} phi^a = (2(a+2)/a) [arctan(K tanh(kappa z / 2)) + arctan K],
        K = sqrt((2 sqrt(omega) + c) / (2 sqrt(omega) - c)),  kappa = (a/2) sqrt(4 omega - c^2)
    int_{-inf}^{z} phi^a = (2(a+2)/a) [arctan(a c z / 2) + pi/2]          (degenerate)

which :func:`solitary_wave` uses by default. A cumulative-Simpson route with
an analytic tail correction is kept as an independent cross-check.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Literal

import numpy as np

from .errors import ParameterError, TruncationError
from .spectral import Field, Grid, sobolev_norm, weighted_l2, weighted_linf

BOUNDARY_GUARD = 1e-8


@dataclass(frozen=True)
class WaveParams:
    omega: float
    c: float
    alpha: float = 1.0
    branch: Literal["generic", "degenerate"] = "generic"

    def __post_init__(self):
        if not 0 < self.alpha <= 1:
            raise ParameterError(f"alpha must lie in (0, 1], got {self.alpha}")
        if self.branch == "generic":
            if not self.omega > self.c**2 / 4:
                raise ParameterError(
                    f"generic branch needs omega > c^2/4, got omega={self.omega}, c={self.c}"
                )
        elif self.branch == "degenerate":
            if self.c <= 0 or not math.isclose(self.omega, self.c**2 / 4, rel_tol=1e-12):
                raise ParameterError(
                    f"degenerate branch needs omega = c^2/4 and c > 0, got omega={self.omega}, c={self.c}"
                )
        else:
            raise ParameterError(f"unknown branch {self.branch!r}")

    @classmethod
    def degenerate(cls, c: float, alpha: float = 1.0) -> "WaveParams":
        return cls(omega=c * c / 4, c=c, alpha=alpha, branch="degenerate")

    @property
    def decay_rate(self) -> float:
        """Exponential decay rate of phi on the generic branch, sqrt(4 omega - c^2)/2."""
        return 0.5 * math.sqrt(4 * self.omega - self.c**2)


def _log_phi_alpha(p: WaveParams, x):
    """log(phi^alpha), evaluated without overflow for large |x|."""
    x = np.asarray(x, dtype=float)
    a, om, c = p.alpha, p.omega, p.c
    if p.branch == "generic":
        d = 4 * om - c * c
        z = 0.5 * a * math.sqrt(d) * x
        lae = np.logaddexp(z, -z)  # log(2 cosh z)
        # 4 sqrt(om) cosh z - 2c = 2 sqrt(om) e^{lae} (1 - (c/sqrt(om)) e^{-lae})
        log_den = math.log(2 * math.sqrt(om)) + lae + np.log1p(-(c / math.sqrt(om)) * np.exp(-lae))
        return math.log((2 + a) * d) - log_den
    return math.log((a + 2) * c) - np.log1p((a * a / 4) * (c * x) ** 2)


def phi(p: WaveParams, x):
    """Amplitude profile phi_{omega,c}(x); scalar in, scalar out."""
    out = np.exp(_log_phi_alpha(p, x) / p.alpha)
    return float(out) if np.ndim(out) == 0 else out


def phase_integral(p: WaveParams, z):
    """Closed form of int_{-inf}^{z} phi^alpha(y) dy."""
    z = np.asarray(z, dtype=float)
    a = p.alpha
    if p.branch == "generic":
        s = math.sqrt(p.omega)
        K = math.sqrt((2 * s + p.c) / (2 * s - p.c))
        kappa = 0.5 * a * math.sqrt(4 * p.omega - p.c**2)
        out = (2 * (a + 2) / a) * (np.arctan(K * np.tanh(kappa * z / 2)) + math.atan(K))
    else:
        out = (2 * (a + 2) / a) * (np.arctan(a * p.c * z / 2) + math.pi / 2)
    return float(out) if np.ndim(out) == 0 else out


def _tail_integral(p: WaveParams, z0: float) -> float:
    """Approximate int_{-inf}^{z0} phi^alpha for z0 far in the left tail."""
    f0 = math.exp(_log_phi_alpha(p, z0))
    if p.branch == "generic":
        # phi^alpha ~ C exp(kappa y) as y -> -inf, kappa = (alpha/2) sqrt(4 omega - c^2)
        rate = 0.5 * p.alpha * math.sqrt(4 * p.omega - p.c**2)
        return f0 / rate
    # phi^alpha ~ C y^-2 for y -> -inf, so the tail integral is -z0 * phi^alpha(z0)
    return -z0 * f0


def phase_integral_simpson(p: WaveParams, z: np.ndarray) -> np.ndarray:
    """int_{-inf}^{z_j} phi^alpha on an increasing equispaced array ``z``.

    Cumulative composite Simpson from ``z[0]`` plus an analytic tail for
    ``(-inf, z[0]]`` (exponential fit on the generic branch, power law on the
    degenerate one). Independent of :func:`phase_integral`.
    """
    from scipy.integrate import cumulative_simpson

    z = np.asarray(z, dtype=float)
    f = np.exp(_log_phi_alpha(p, z))
    body = cumulative_simpson(f, x=z, initial=0.0)
    return body + _tail_integral(p, float(z[0]))


def boundary_amplitude(values: np.ndarray) -> float:
    return float(max(abs(values[0]), abs(values[-1])))


def check_boundary(f: Field, guard: float = BOUNDARY_GUARD) -> float:
    """Raise :class:`TruncationError` if the edge values exceed ``guard * max|f|``."""
    edge = f.boundary_amplitude()
    peak = f.linf()
    if peak > 0 and edge > guard * peak:
        raise TruncationError(
            f"boundary amplitude {edge:.3e} exceeds {guard:g} * max|u| = {guard * peak:.3e}; enlarge L",
            boundary_amplitude=edge,
        )
    return edge


def solitary_wave(
    p: WaveParams,
    grid: Grid,
    t: float = 0.0,
    phase: Literal["exact", "simpson"] = "exact",
    guard: float | None = BOUNDARY_GUARD,
) -> Field:
    """Sample psi_{omega,c}(x, t) at the grid nodes.

    ``phase='simpson'`` swaps the closed-form phase integral for the
    quadrature route. ``guard=None`` disables the boundary check.
    """
    z = grid.x - p.c * t
    amp = phi(p, z)
    if phase == "exact":
        theta = phase_integral(p, z)
    elif phase == "simpson":
        theta = phase_integral_simpson(p, z)
    else:
        raise ParameterError(f"unknown phase method {phase!r}")
    arg = p.omega * t + 0.5 * p.c * z - theta / (p.alpha + 2)
    f = Field(grid, amp * np.exp(1j * arg))
    if guard is not None:
        check_boundary(f, guard)
    return f


def decay_profile(c0: complex, m: int, grid: Grid) -> Field:
    """c0 * <x>^(-m): the model member of the theorem's data class."""
    if c0 == 0:
        raise ParameterError("c0 must be nonzero (the weighted lower bound would vanish)")
    if m < 1:
        raise ParameterError(f"m must be >= 1, got {m}")
    return Field(grid, c0 * grid.weight(-m))


def weighted_inf(f: Field, m: float) -> float:
    """min over nodes of <x>^m |f|, the discrete lower-bound constant lambda."""
    return float(np.min(f.grid.weight(m) * np.abs(f.values)))


def default_m(alpha: float) -> int:
    """floor(2/alpha + 1). A 1e-9 slack absorbs rounding in 2/alpha (e.g. alpha = 2/3)."""
    return int(math.floor(2.0 / alpha + 1.0 + 1e-9))


@dataclass(frozen=True)
class ClassParams:
    """Exponents and bounds of the weighted data class.

    ``m`` defaults to floor(2/alpha + 1), ``M`` to 2 and ``k`` to m + M + 1.
    ``lam`` and ``nu`` are filled from data by :meth:`for_data`.
    """

    alpha: float = 1.0
    m: int | None = None
    M: int = 2
    k: int | None = None
    lam: float | None = None
    nu: float | None = None

    def __post_init__(self):
        if not 0 < self.alpha <= 1:
            raise ParameterError(f"alpha must lie in (0, 1], got {self.alpha}")
        m = default_m(self.alpha) if self.m is None else int(self.m)
        if m < 1 or not m > 1 / self.alpha:
            raise ParameterError(f"m must be a positive integer > 1/alpha, got m={m}, alpha={self.alpha}")
        if self.M < 1:
            raise ParameterError(f"M must be a positive integer, got {self.M}")
        k = m + self.M + 1 if self.k is None else int(self.k)
        if k < m + self.M + 1:
            raise ParameterError(f"k must satisfy k >= m + M + 1 = {m + self.M + 1}, got {k}")
        if self.lam is not None and self.lam <= 0:
            raise ParameterError(f"lambda must be > 0, got {self.lam}")
        if self.nu is not None and self.nu <= 0:
            raise ParameterError(f"nu must be > 0, got {self.nu}")
        if self.lam is not None and self.nu is not None and not self.lam < self.nu:
            raise ParameterError(f"need lambda < nu, got lambda={self.lam}, nu={self.nu}")
        object.__setattr__(self, "m", m)
        object.__setattr__(self, "k", k)

    @property
    def s(self) -> float:
        return self.k + 0.5

    def for_data(self, u0: Field) -> "ClassParams":
        """Copy with lambda = weighted_inf(u0, m) and nu = class_nu(u0)."""
        return replace(self, lam=weighted_inf(u0, self.m), nu=class_nu(u0, self))


def class_nu(f: Field, p: ClassParams) -> float:
    """||f||_{s,2} + ||<x>^m f||_inf + sum_{j=0}^{M} ||<x>^m d^{j+1} f||_2."""
    total = sobolev_norm(f, p.s) + weighted_linf(f, p.m)
    for j in range(p.M + 1):
        total += weighted_l2(f, p.m, j + 1, max_order=max(p.M + 1, 8))
    return float(total)


__all__ = [
    "BOUNDARY_GUARD",
    "ClassParams",
    "WaveParams",
    "check_boundary",
    "class_nu",
    "decay_profile",
    "default_m",
    "phase_integral",
    "phase_integral_simpson",
    "phi",
    "solitary_wave",
    "weighted_inf",
]
