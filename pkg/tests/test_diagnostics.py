import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from gdnls.diagnostics import (
    gaussian,
    interp_check_1,
    interp_check_2,
    kato_smoothing_ratio,
    kato_smoothing_terms,
    local_smoothing,
    loglog_slope,
    mass,
    random_smooth_field,
    residual,
    sample_trajectory,
    small_time_continuity,
    smoothing_sup,
    weighted_l2,
    weighted_linf,
)
from gdnls.errors import ConfigurationError, DegenerateInputError, ParameterError
from gdnls.evolution import EquationSpec, FrozenCoefficient, Trajectory, evolve, frozen_coefficient
from gdnls.profiles import WaveParams, decay_profile, solitary_wave
from gdnls.spectral import Field, Grid


def free_traj(u0: Field, T: float, dt: float) -> Trajectory:
    return evolve(u0, T, dt, nonlinear=lambda t, uh: np.zeros_like(uh))


class TestWeightedNorms:
    def test_box_value_of_decay_profile(self):
        # <x>^2 <x>^-3 = <x>^-1, whose squared integral over [-L, L] is 2 arctan L
        L = 40.0
        f = decay_profile(1.0, 3, Grid(L, 4096))
        assert weighted_l2(f, 2) == pytest.approx(math.sqrt(2 * math.atan(L)), rel=1e-5)

    def test_approaches_line_value(self):
        vals = [weighted_l2(decay_profile(1.0, 3, Grid(L, 2048 * (L // 32))), 2) for L in (32, 128, 512)]
        gaps = [math.sqrt(math.pi) - v for v in vals]
        assert gaps[0] > gaps[1] > gaps[2] > 0

    def test_linf(self):
        g = Grid(20, 256)
        assert weighted_linf(decay_profile(0.7, 3, g), 3) == pytest.approx(0.7, rel=1e-14)


class TestLocalSmoothing:
    @pytest.mark.parametrize("k", [0, 1, 3])
    def test_plane_wave(self, k):
        # every unit interval holds 16 nodes, so the rectangle rule integrates |xi0|^{2k+2} exactly
        g = Grid(8, 256)
        xi0, T = math.pi / 2, 0.5
        traj = free_traj(Field(g, np.exp(1j * xi0 * g.x)), T, 0.01)
        rep = local_smoothing(traj, k)
        np.testing.assert_allclose(rep.values, xi0 ** (k + 1) * math.sqrt(T), rtol=1e-10)
        assert list(rep.intervals) == list(range(-8, 8))
        assert rep.order == k + 1

    def test_single_snapshot_is_zero(self):
        g = Grid(8, 64)
        rep = local_smoothing(Trajectory.constant(gaussian(g), 0.1, 0), 0)
        assert rep.sup == 0

    def test_negative_k(self):
        g = Grid(8, 64)
        with pytest.raises(ConfigurationError):
            local_smoothing(Trajectory.constant(gaussian(g), 0.1, 2), -1)

    def test_translation_shifts_intervals(self):
        g = Grid(8, 256)
        a = local_smoothing(free_traj(gaussian(g), 0.2, 0.01), 1)
        b = local_smoothing(free_traj(gaussian(g, centre=1.0), 0.2, 0.01), 1)
        np.testing.assert_allclose(np.roll(a.values, 1), b.values, rtol=1e-9, atol=1e-14)

    @given(st.integers(0, 10_000), st.integers(0, 3))
    def test_sup_le_l1(self, seed, k):
        g = Grid(10, 256)
        rep = local_smoothing(free_traj(random_smooth_field(g, seed), 0.1, 0.01), k)
        assert rep.sup <= rep.l1
        assert smoothing_sup(free_traj(random_smooth_field(g, seed), 0.1, 0.01), k + 1) == rep.sup

    def test_at(self):
        g = Grid(8, 256)
        rep = local_smoothing(free_traj(gaussian(g), 0.1, 0.01), 0)
        assert rep.at(0) == rep.values[8]
        with pytest.raises(KeyError):
            rep.at(100)


class TestKato:
    def test_free_flow_preserves_half_derivative(self):
        g = Grid(20, 512)
        f = random_smooth_field(g, 3)
        terms = kato_smoothing_terms(f, FrozenCoefficient.zero(g), 0.2, 1e-3)
        assert terms.sup_half_derivative == pytest.approx(1.0, abs=1e-12)
        assert terms.ratio == pytest.approx(terms.sup_half_derivative + terms.local_smoothing)

    def test_constant_data_rejected(self):
        g = Grid(20, 128)
        with pytest.raises(DegenerateInputError):
            kato_smoothing_ratio(Field(g, np.ones(128)), FrozenCoefficient.zero(g), 0.1, 0.01)

    def test_scale_invariant(self):
        g = Grid(20, 512)
        fc = frozen_coefficient(decay_profile(1.0, 3, g), EquationSpec(mu=-1))
        f = random_smooth_field(g, 5)
        a = kato_smoothing_ratio(f, fc, 0.2, 1e-3)
        b = kato_smoothing_ratio(f * 4.2, fc, 0.2, 1e-3)
        assert b == pytest.approx(a, rel=1e-12)

    def test_stable_under_refinement(self):
        vals = []
        for N in (512, 1024):
            g = Grid(20, N)
            fc = frozen_coefficient(decay_profile(1.0, 3, g), EquationSpec(mu=-1))
            vals.append(kato_smoothing_ratio(random_smooth_field(g, 11), fc, 0.2, 1e-3))
        assert vals[1] == pytest.approx(vals[0], rel=1e-2)


class TestInterpolation:
    @pytest.mark.parametrize("variant", [1, 2])
    def test_gamma_one_is_identity(self, variant):
        f = random_smooth_field(Grid(20, 512), 2)
        assert interp_check_1(f, 1.5, 2.0, 1.0, variant) == pytest.approx(1.0, rel=1e-12)

    @pytest.mark.parametrize("variant", [1, 2])
    def test_ine1_scale_invariant(self, variant):
        f = random_smooth_field(Grid(20, 512), 8)
        a = interp_check_1(f, 2, 2, 0.5, variant)
        assert interp_check_1(f * (0.2 + 3j), 2, 2, 0.5, variant) == pytest.approx(a, rel=1e-12)

    @pytest.mark.parametrize("variant", [1, 2, 3])
    def test_ine2_scale_invariant(self, variant):
        f = random_smooth_field(Grid(20, 512), 9)
        a = interp_check_2(f, 2, 1, variant)
        assert interp_check_2(f * 7.5, 2, 1, variant) == pytest.approx(a, rel=1e-12)

    @pytest.mark.parametrize("variant", [1, 2, 3])
    @pytest.mark.parametrize("k, j", [(1, 1), (2, 1), (2, 2), (3, 3)])
    def test_gaussian_bounded(self, variant, k, j):
        assert interp_check_2(gaussian(Grid(20, 512)), k, j, variant) < 10

    @given(st.integers(0, 10_000))
    def test_random_fields_finite(self, seed):
        f = random_smooth_field(Grid(20, 512), seed)
        for v in (1, 2):
            assert np.isfinite(interp_check_1(f, 2, 2, 0.5, v))
        for v in (1, 2, 3):
            assert np.isfinite(interp_check_2(f, 1, 1, v))

    def test_ratios_grid_independent(self):
        a = [interp_check_2(random_smooth_field(Grid(20, N), 4), 1, 1, 2) for N in (512, 1024)]
        assert a[1] == pytest.approx(a[0], rel=1e-8)

    @pytest.mark.parametrize(
        "args", [(1, 0, 0.5, 1), (1, 1, 0.0, 1), (1, 1, 1.5, 1), (1, 1, 0.5, 3)]
    )
    def test_ine1_parameters(self, args):
        with pytest.raises(ParameterError):
            interp_check_1(gaussian(Grid(10, 64)), *args)

    @pytest.mark.parametrize("args", [(0, 1, 1), (1, 0, 1), (1, 1, 4)])
    def test_ine2_parameters(self, args):
        with pytest.raises(ParameterError):
            interp_check_2(gaussian(Grid(10, 64)), *args)

    def test_zero_field(self):
        g = Grid(10, 64)
        with pytest.raises(DegenerateInputError):
            interp_check_1(g.zeros(), 1, 1, 0.5)
        with pytest.raises(DegenerateInputError):
            interp_check_2(g.zeros(), 1, 1)


class TestSmallTime:
    def test_linear_growth_free(self):
        g = Grid(20, 512)
        rep = small_time_continuity(gaussian(g), FrozenCoefficient.zero(g), [1e-3, 2e-3, 4e-3], 1e-4)
        assert rep.slope == pytest.approx(1.0, abs=0.02)
        assert rep.weighted_slope == pytest.approx(1.0, abs=0.02)

    def test_zero_time(self):
        g = Grid(20, 256)
        rep = small_time_continuity(gaussian(g), FrozenCoefficient.zero(g), [0.0, 1e-3], 1e-4)
        assert rep.sup_diff[0] == 0 and math.isnan(rep.slope)

    def test_negative_time(self):
        g = Grid(20, 256)
        with pytest.raises(ParameterError):
            small_time_continuity(gaussian(g), FrozenCoefficient.zero(g), [-1e-3], 1e-4)


class TestLogLogSlope:
    @given(st.floats(-3, 3), st.floats(0.1, 10))
    def test_power_law(self, p, a):
        x = np.array([1e-3, 2e-3, 4e-3])
        assert loglog_slope(x, a * x**p) == pytest.approx(p, abs=1e-9)

    def test_degenerate(self):
        assert math.isnan(loglog_slope([1.0], [1.0]))
        assert math.isnan(loglog_slope([1.0, 2.0], [0.0, 1.0]))


class TestMassAndResidual:
    def test_mass(self):
        g = Grid(20, 512)
        assert mass(g.zeros()) == 0
        assert mass(gaussian(g)) == pytest.approx(math.sqrt(math.pi / 2), rel=1e-12)

    def test_residual_is_second_order_on_exact_soliton(self):
        g = Grid(40, 1024)
        wave = WaveParams(1, 1, 1)
        fn = lambda grid, t: solitary_wave(wave, grid, t=t)  # noqa: E731
        r = [residual(sample_trajectory(fn, g, 0.1, dt), EquationSpec(mu=-1)) for dt in (0.01, 0.005, 0.0025)]
        assert r[0] / r[1] == pytest.approx(4, rel=0.01)
        assert r[1] / r[2] == pytest.approx(4, rel=0.01)

    def test_residual_needs_three_snapshots(self):
        g = Grid(10, 64)
        with pytest.raises(ConfigurationError):
            residual(Trajectory.constant(g.zeros(), 0.1, 1), EquationSpec())


def test_random_field_same_function_on_every_grid():
    a = random_smooth_field(Grid(20, 256), 42)
    b = random_smooth_field(Grid(20, 512), 42)
    np.testing.assert_array_equal(a.values, b.values[::2])
