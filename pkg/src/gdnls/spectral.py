"""
Periodic grid, discrete Fourier transforms and Fourier-multiplier calculus.

The real line is truncated to the periodic box ``[-L, L)`` sampled at ``N``
equispaced nodes. Transforms use the *forward* normalization

    f_hat[k] = (1/N) * sum_j f[j] * exp(-i xi_k x_j),
    f[j]     = sum_k f_hat[k] * exp(+i xi_k x_j),

so a plane wave ``exp(i xi_0 x)`` has a single coefficient of modulus one
(the phase factor ``exp(i xi_0 L)`` comes from the node offset ``x_0 = -L``).
Coefficients are stored in FFT order; ``Grid.wavenumbers`` gives the sorted
list ``(pi/L) * {-N/2, ..., N/2-1}``.

Spectral derivatives of order ``j`` multiply each mode by ``(i xi)^j`` and so
amplify round-off in the top modes by up to ``(pi N / 2L)^j``; derivative
orders are capped at ``DEFAULT_MAX_ORDER`` unless the caller raises the cap.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Union

import numpy as np
from scipy import fft as sfft

from .errors import ConfigurationError, NumericalOverflowError, ShapeError, SingularModeError

DEFAULT_MAX_ORDER = 8

MultiplierSymbol = Callable[[np.ndarray], np.ndarray]


def forward(values: np.ndarray) -> np.ndarray:
    """Forward DFT with the 1/N factor, along the last axis."""
    return sfft.fft(values, norm="forward", axis=-1)


def inverse(coeffs: np.ndarray) -> np.ndarray:
    return sfft.ifft(coeffs, norm="forward", axis=-1)


@dataclass(frozen=True)
class Grid:
    """Uniform periodic grid on ``[-L, L)`` with ``N`` nodes."""

    L: float
    N: int

    def __post_init__(self):
        try:
            L = float(self.L)
        except (TypeError, ValueError):
            raise ConfigurationError(f"half_length L must be a real number, got {self.L!r}", "L")
        if not np.isfinite(L) or L <= 0:
            raise ConfigurationError(f"half_length L must be > 0, got {self.L!r}", "L")
        if isinstance(self.N, bool) or int(self.N) != self.N:
            raise ConfigurationError(f"n_points N must be an integer, got {self.N!r}", "N")
        N = int(self.N)
        if N < 8 or N & (N - 1):
            raise ConfigurationError(f"n_points N must be a power of two >= 8, got {N}", "N")
        object.__setattr__(self, "L", L)
        object.__setattr__(self, "N", N)

    @property
    def dx(self) -> float:
        return 2.0 * self.L / self.N

    @cached_property
    def x(self) -> np.ndarray:
        nodes = -self.L + self.dx * np.arange(self.N)
        nodes.flags.writeable = False
        return nodes

    @cached_property
    def xi(self) -> np.ndarray:
        """Wavenumbers in FFT storage order."""
        k = (np.pi / self.L) * sfft.fftfreq(self.N, d=1.0 / self.N)
        k.flags.writeable = False
        return k

    @cached_property
    def wavenumbers(self) -> np.ndarray:
        """Wavenumbers sorted ascending, ``(pi/L) * {-N/2, ..., N/2-1}``."""
        k = (np.pi / self.L) * np.arange(-self.N // 2, self.N // 2)
        k.flags.writeable = False
        return k

    @cached_property
    def bracket(self) -> np.ndarray:
        """Japanese bracket <x> = (1 + x^2)^(1/2) at the nodes."""
        b = np.sqrt(1.0 + self.x**2)
        b.flags.writeable = False
        return b

    def weight(self, m: float) -> np.ndarray:
        return self.bracket**m

    def field(self, values) -> "Field":
        return Field(self, values)

    def zeros(self) -> "Field":
        return Field(self, np.zeros(self.N, dtype=complex))


def make_grid(L: float, N: int) -> Grid:
    return Grid(L, N)


Scalar = Union[int, float, complex, np.number]


@dataclass(frozen=True, eq=False)
class Field:
    """Complex samples of a function at the nodes of ``grid``.

    The value array is copied to complex128 and frozen on construction;
    arithmetic returns new fields.
    """

    grid: Grid
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        v = np.array(self.values, dtype=complex)
        if v.shape != (self.grid.N,):
            raise ShapeError(f"expected {self.grid.N} samples, got shape {v.shape}")
        if not np.all(np.isfinite(v)):
            raise NumericalOverflowError("field contains non-finite values")
        v.flags.writeable = False
        object.__setattr__(self, "values", v)

    @cached_property
    def hat(self) -> np.ndarray:
        h = forward(self.values)
        h.flags.writeable = False
        return h

    @classmethod
    def from_hat(cls, grid: Grid, coeffs: np.ndarray) -> "Field":
        return cls(grid, inverse(coeffs))

    def _other(self, other):
        if isinstance(other, Field):
            if other.grid != self.grid:
                raise ShapeError("fields live on different grids")
            return other.values
        return other

    def __add__(self, other):
        return Field(self.grid, self.values + self._other(other))

    __radd__ = __add__

    def __sub__(self, other):
        return Field(self.grid, self.values - self._other(other))

    def __rsub__(self, other):
        return Field(self.grid, self._other(other) - self.values)

    def __mul__(self, other):
        return Field(self.grid, self.values * self._other(other))

    __rmul__ = __mul__

    def __truediv__(self, other):
        return Field(self.grid, self.values / self._other(other))

    def __neg__(self):
        return Field(self.grid, -self.values)

    def __abs__(self):
        return Field(self.grid, np.abs(self.values))

    def __len__(self):
        return self.grid.N

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.values, dtype=dtype)

    def conj(self) -> "Field":
        return Field(self.grid, np.conj(self.values))

    def l2(self) -> float:
        return l2_norm(self)

    def linf(self) -> float:
        return float(np.max(np.abs(self.values)))

    def boundary_amplitude(self) -> float:
        """max(|f(-L)|, |f(L - dx)|), the values at the two box edges."""
        return float(max(abs(self.values[0]), abs(self.values[-1])))


def _as_field(f, grid: Grid | None = None) -> Field:
    if isinstance(f, Field):
        return f
    if grid is None:
        raise TypeError("a Grid is required to wrap a raw array")
    return Field(grid, f)


def apply_multiplier(f: Field, sym: MultiplierSymbol | np.ndarray | Scalar) -> Field:
    """Return the inverse transform of ``m(xi) * f_hat(xi)``.

    ``sym`` is a callable evaluated on ``grid.xi`` (FFT order), a precomputed
    array in the same order, or a scalar.
    """
    m = sym(f.grid.xi) if callable(sym) else sym
    with np.errstate(over="ignore", invalid="ignore"):
        out = inverse(np.asarray(m) * f.hat)
    if not np.all(np.isfinite(out)):
        raise NumericalOverflowError("multiplier produced non-finite values")
    return Field(f.grid, out)


def deriv_symbol(j: int) -> MultiplierSymbol:
    return lambda xi: (1j * xi) ** j


def bessel_symbol(s: float) -> MultiplierSymbol:
    return lambda xi: (1.0 + xi**2) ** (s / 2.0)


def riesz_symbol(s: float) -> MultiplierSymbol:
    def sym(xi):
        a = np.abs(xi)
        out = np.zeros_like(a)
        nz = a > 0
        out[nz] = a[nz] ** s
        return out

    return sym


def check_order(j: int, max_order: int = DEFAULT_MAX_ORDER) -> int:
    if isinstance(j, bool) or int(j) != j or j < 0:
        raise ConfigurationError(f"derivative order must be a non-negative integer, got {j!r}", "j")
    if j > max_order:
        raise ConfigurationError(f"derivative order {j} exceeds max order {max_order}", "max_order")
    return int(j)


def deriv(f: Field, j: int = 1, max_order: int = DEFAULT_MAX_ORDER) -> Field:
    """Spectral derivative of order ``j``."""
    j = check_order(j, max_order)
    if j == 0:
        return f
    return apply_multiplier(f, deriv_symbol(j))


def bessel(f: Field, s: float) -> Field:
    """J^s f, the multiplier (1 + xi^2)^(s/2)."""
    if s == 0:
        return f
    return apply_multiplier(f, bessel_symbol(s))


def riesz(f: Field, s: float, atol: float = 1e-13) -> Field:
    """D^s f, the multiplier |xi|^s with the zero mode sent to 0.

    For ``s < 0`` the zero mode must already vanish (relative to the largest
    coefficient, up to ``atol``); otherwise :class:`SingularModeError`.
    """
    if s < 0:
        h = f.hat
        scale = max(float(np.max(np.abs(h))), np.finfo(float).tiny)
        if abs(h[0]) > atol * scale:
            raise SingularModeError(f"riesz order {s} < 0 applied to a field with nonzero mean")
    return apply_multiplier(f, riesz_symbol(s))


def dealias(f: Field) -> Field:
    """2/3-rule truncation: zero every mode with |k| > N/3."""
    k = np.abs(sfft.fftfreq(f.grid.N, d=1.0 / f.grid.N))
    return Field(f.grid, inverse(np.where(k > f.grid.N / 3, 0.0, f.hat)))


def dealias_mask(grid: Grid) -> np.ndarray:
    k = np.abs(sfft.fftfreq(grid.N, d=1.0 / grid.N))
    return k <= grid.N / 3


# -- norms -----------------------------------------------------------------


def l2_norm(f) -> float:
    """Quadrature L^2 norm (sum |f_j|^2 dx)^(1/2); exact for band-limited f."""
    v = np.asarray(f.values if isinstance(f, Field) else f)
    dx = f.grid.dx
    return float(np.sqrt(np.sum(np.abs(v) ** 2) * dx))


def sobolev_norm(f: Field, s: float) -> float:
    """||J^s f||_2 computed from Fourier coefficients.

    With forward normalization Parseval reads ``sum |f_j|^2 dx = 2L sum |f_hat|^2``.
    """
    w = (1.0 + f.grid.xi**2) ** s
    return float(np.sqrt(2.0 * f.grid.L * np.sum(w * np.abs(f.hat) ** 2)))


def homogeneous_sobolev_norm(f: Field, s: float) -> float:
    """||D^s f||_2 from Fourier coefficients (zero mode excluded for s > 0)."""
    a = np.abs(f.grid.xi)
    w = np.zeros_like(a)
    nz = a > 0
    w[nz] = a[nz] ** (2 * s)
    if s <= 0:
        w[~nz] = 1.0 if s == 0 else 0.0
    return float(np.sqrt(2.0 * f.grid.L * np.sum(w * np.abs(f.hat) ** 2)))


def weighted_l2(f: Field, m: float, j: int = 0, max_order: int = DEFAULT_MAX_ORDER) -> float:
    """Quadrature norm of <x>^m * d^j f / dx^j."""
    g = deriv(f, j, max_order)
    return l2_norm(Field(f.grid, f.grid.weight(m) * g.values))


def weighted_linf(f: Field, m: float) -> float:
    """max over nodes of <x>^m |f|."""
    return float(np.max(f.grid.weight(m) * np.abs(f.values)))


def inner(f: Field, g: Field) -> complex:
    """Quadrature inner product sum f conj(g) dx."""
    if f.grid != g.grid:
        raise ShapeError("fields live on different grids")
    return complex(np.sum(f.values * np.conj(g.values)) * f.grid.dx)
