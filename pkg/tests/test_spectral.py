import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from gdnls.errors import ConfigurationError, NumericalOverflowError, ShapeError, SingularModeError
from gdnls.spectral import (
    Field,
    Grid,
    apply_multiplier,
    bessel,
    dealias,
    deriv,
    forward,
    homogeneous_sobolev_norm,
    inner,
    inverse,
    l2_norm,
    make_grid,
    riesz,
    sobolev_norm,
    weighted_l2,
    weighted_linf,
)

from conftest import band_limited


def plane(grid, k):
    return Field(grid, np.exp(1j * k * grid.x))


class TestGrid:
    def test_unit_spacing_grid(self):
        g = make_grid(math.pi, 8)
        assert g.dx == pytest.approx(math.pi / 4)
        assert g.x[0] == pytest.approx(-math.pi)
        np.testing.assert_allclose(g.wavenumbers, np.arange(-4, 4))

    def test_half_spacing_wavenumbers(self):
        g = make_grid(2 * math.pi, 16)
        assert g.dx == pytest.approx(math.pi / 4)
        np.testing.assert_allclose(g.wavenumbers, 0.5 * np.arange(-8, 8))

    @pytest.mark.parametrize("L, N, field", [(-1, 8, "L"), (0, 8, "L"), (1, 12, "N"), (1, 4, "N"), (1, 8.5, "N")])
    def test_invalid(self, L, N, field):
        with pytest.raises(ConfigurationError) as exc:
            make_grid(L, N)
        assert exc.value.field == field

    @given(st.floats(0.1, 100), st.sampled_from([8, 16, 64, 256]))
    def test_invariants(self, L, N):
        g = Grid(L, N)
        assert np.all(np.diff(g.x) > 0)
        assert g.dx * g.N == pytest.approx(2 * L)
        assert np.count_nonzero(g.xi == 0) == 1
        np.testing.assert_allclose(np.sort(g.xi), g.wavenumbers)

    def test_arrays_are_read_only(self):
        g = Grid(1, 8)
        with pytest.raises(ValueError):
            g.x[0] = 3


class TestField:
    def test_rejects_wrong_length(self):
        with pytest.raises(ShapeError):
            Field(Grid(1, 8), np.zeros(7))

    def test_rejects_non_finite(self):
        v = np.zeros(8)
        v[2] = np.nan
        with pytest.raises(NumericalOverflowError):
            Field(Grid(1, 8), v)

    def test_grid_mismatch(self):
        with pytest.raises(ShapeError):
            Grid(1, 8).zeros() + Grid(2, 8).zeros()

    def test_values_are_copied_and_frozen(self):
        raw = np.ones(8)
        f = Field(Grid(1, 8), raw)
        raw[0] = 5
        assert f.values[0] == 1
        with pytest.raises(ValueError):
            f.values[0] = 2


class TestMultipliers:
    def test_derivative_of_plane_wave(self, small_grid):
        f = plane(small_grid, 2)
        np.testing.assert_allclose(apply_multiplier(f, lambda xi: 1j * xi).values, 2j * f.values, atol=1e-12)

    def test_identity(self, small_grid):
        f = band_limited(small_grid, 1)
        np.testing.assert_allclose(apply_multiplier(f, 1.0).values, f.values, atol=1e-14)

    def test_half_derivative_eigenvalue(self, small_grid):
        f = plane(small_grid, 2)
        out = apply_multiplier(f, lambda xi: np.abs(xi) ** 0.5)
        np.testing.assert_allclose(out.values, math.sqrt(2) * f.values, atol=1e-12)

    def test_overflow(self, small_grid):
        with pytest.raises(NumericalOverflowError), np.errstate(over="ignore"):
            apply_multiplier(plane(small_grid, 2), lambda xi: np.exp(800 * np.abs(xi)))

    def test_plane_wave_coefficient_modulus_one(self, small_grid):
        h = plane(small_grid, 3).hat
        assert np.abs(h).max() == pytest.approx(1.0)
        assert np.count_nonzero(np.abs(h) > 1e-12) == 1

    def test_second_derivative_of_sine(self, small_grid):
        f = Field(small_grid, np.sin(small_grid.x))
        np.testing.assert_allclose(deriv(f, 2).values, -np.sin(small_grid.x), atol=1e-12)

    def test_derivative_of_constant(self, small_grid):
        np.testing.assert_allclose(deriv(Field(small_grid, np.full(64, 2.5)), 1).values, 0, atol=1e-14)

    def test_first_derivative_of_mode_three(self, small_grid):
        f = plane(small_grid, 3)
        np.testing.assert_allclose(deriv(f, 1).values, 3j * f.values, atol=1e-12)

    @pytest.mark.parametrize("j", range(0, 6))
    @pytest.mark.parametrize("k", [-7, -1, 0, 4, 11])
    def test_derivative_orders_on_plane_waves(self, small_grid, j, k):
        f = plane(small_grid, k)
        np.testing.assert_allclose(deriv(f, j).values, (1j * k) ** j * f.values, atol=1e-12 * max(1, abs(k) ** j))

    def test_order_cap(self, small_grid):
        with pytest.raises(ConfigurationError):
            deriv(plane(small_grid, 1), 9)
        # round-off grows like (max |xi|)^9 ~ 3e13 here
        assert deriv(plane(small_grid, 1), 9, max_order=9).linf() == pytest.approx(1.0, rel=1e-2)

    def test_bessel_zero_is_identity(self, small_grid):
        f = band_limited(small_grid, 2)
        assert bessel(f, 0) is f

    def test_riesz_half_on_mode_four(self, small_grid):
        f = plane(small_grid, 4)
        np.testing.assert_allclose(riesz(f, 0.5).values, 2 * f.values, atol=1e-12)

    def test_riesz_kills_mean(self, small_grid):
        np.testing.assert_allclose(riesz(Field(small_grid, np.ones(64)), 1).values, 0, atol=1e-14)

    def test_riesz_negative_order_needs_zero_mean(self, small_grid):
        with pytest.raises(SingularModeError):
            riesz(Field(small_grid, np.ones(64)), -1)
        f = plane(small_grid, 2)
        np.testing.assert_allclose(riesz(f, -1).values, 0.5 * f.values, atol=1e-12)

    def test_dealias_removes_top_third(self):
        g = Grid(math.pi, 64)
        low, high = plane(g, 10), plane(g, 30)
        np.testing.assert_allclose(dealias(low + high).values, low.values, atol=1e-12)


class TestProperties:
    @given(st.integers(0, 2**32 - 1))
    def test_round_trip(self, seed):
        f = band_limited(Grid(3.0, 128), seed)
        back = inverse(forward(f.values))
        assert np.max(np.abs(back - f.values)) <= 1e-12 * np.max(np.abs(f.values))

    @given(st.integers(0, 2**32 - 1), st.floats(-2, 2), st.floats(-2, 2))
    def test_composition(self, seed, s1, s2):
        f = band_limited(Grid(3.0, 128), seed)
        a = bessel(bessel(f, s1), s2)
        b = bessel(f, s1 + s2)
        assert np.max(np.abs(a.values - b.values)) <= 1e-12 * max(1.0, np.max(np.abs(b.values)))

    @given(st.integers(0, 2**32 - 1))
    def test_parseval(self, seed):
        f = band_limited(Grid(5.0, 256), seed)
        assert sobolev_norm(f, 0) == pytest.approx(l2_norm(f), rel=1e-12)

    @given(st.integers(0, 2**32 - 1))
    def test_derivative_is_skew(self, seed):
        g = Grid(4.0, 128)
        f, h = band_limited(g, seed), band_limited(g, seed + 1)
        lhs = inner(deriv(f, 1), h)
        rhs = -inner(f, deriv(h, 1))
        assert abs(lhs - rhs) <= 1e-10 * max(1.0, abs(lhs))


class TestNorms:
    def test_constant(self, small_grid):
        f = Field(small_grid, np.full(64, 1.5 - 2j))
        assert sobolev_norm(f, 0) == pytest.approx(2.5 * math.sqrt(2 * math.pi), rel=1e-13)

    def test_mode_two_in_h1(self, small_grid):
        assert sobolev_norm(plane(small_grid, 2), 1) == pytest.approx(math.sqrt(5) * math.sqrt(2 * math.pi), rel=1e-13)

    def test_random_band_limited_matches_quadrature(self):
        g = Grid(7.0, 512)
        f = band_limited(g, 42)
        direct = math.sqrt(np.sum(np.abs(f.values) ** 2) * g.dx)
        assert sobolev_norm(f, 0) == pytest.approx(direct, rel=1e-12)

    def test_homogeneous_norm(self, small_grid):
        assert homogeneous_sobolev_norm(plane(small_grid, 3), 0.5) == pytest.approx(
            math.sqrt(3) * math.sqrt(2 * math.pi), rel=1e-12
        )

    def test_weighted_norms_of_zero(self, small_grid):
        z = small_grid.zeros()
        assert weighted_l2(z, 3, 2) == 0 and weighted_linf(z, 3) == 0

    @given(st.floats(0, 6), st.floats(0, 6))
    def test_weighted_linf_monotone_in_m(self, m1, m2):
        f = band_limited(Grid(4.0, 64), 3)
        lo, hi = sorted((m1, m2))
        assert weighted_linf(f, lo) <= weighted_linf(f, hi) * (1 + 1e-15)
