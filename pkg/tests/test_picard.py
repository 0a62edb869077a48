import math

import numpy as np
import pytest
from scipy.integrate import quad
from scipy.special import eval_hermite

from gdnls.diagnostics import gaussian
from gdnls.errors import DegenerateInputError, ParameterError, PreconditionError
from gdnls.evolution import EquationSpec, interval_index, Trajectory, evolve, frozen_coefficient, solve_frozen
from gdnls.picard import (
    PicardHistory,
    XTNormParams,
    contraction_factor,
    default_perturbation,
    dependence_probe,
    difference_forcing,
    linear_iterate,
    phi_map,
    picard_solve,
    triple_norms,
    xt_norm,
)
from gdnls.profiles import ClassParams, decay_profile
from gdnls.spectral import Grid, deriv

SPEC = EquationSpec(mu=-1)


@pytest.fixture(scope="module")
def setup():
    g = Grid(30, 1024)
    u0 = decay_profile(0.5, 3, g)
    p = XTNormParams(ClassParams(), T=0.01, dt=5e-4)
    return g, u0, p


@pytest.fixture(scope="module")
def solved(setup):
    g, u0, p = setup
    return picard_solve(u0, SPEC, p, tol=1e-12)


class TestParams:
    @pytest.mark.parametrize("T, dt", [(0.0, 1e-3), (0.01, 0.0), (0.01, 0.02), (0.01, 3e-3)])
    def test_rejects(self, T, dt):
        with pytest.raises((ParameterError, ValueError)):
            XTNormParams(T=T, dt=dt)

    def test_steps(self):
        p = XTNormParams(T=0.05, dt=2e-4)
        assert p.n_steps == 250 and p.with_T(0.025).n_steps == 125


class TestXTNorm:
    def test_constant_trajectory(self, setup):
        g, u0, p = setup
        v = Trajectory.constant(u0, p.dt, p.n_steps)
        nrm = xt_norm(v, u0, p, SPEC)
        assert nrm.proximity == 0
        # time-independent v: each interval gives sqrt(T) ||d^{k+1} u0||_{L^2(I_j)}
        d = np.abs(deriv(u0, p.cls.k + 1, 8).values) ** 2 * g.dx
        per_interval = np.bincount(interval_index(g) - interval_index(g).min(), weights=d)
        assert nrm.smoothing == pytest.approx(math.sqrt(p.T * per_interval.max()), rel=1e-12)
        # <x>^3 |u0| equals 0.5 everywhere
        assert nrm.weighted_inf_sup == pytest.approx(0.5, rel=1e-14)
        assert nrm.ball_part == pytest.approx(
            nrm.sobolev_sup + nrm.weighted_inf_sup + nrm.weighted_deriv_sum + nrm.smoothing
        )
        assert set(nrm.as_dict()) == {
            "sobolev_sup", "weighted_inf_sup", "weighted_deriv_sum", "smoothing", "time_deriv_sum", "proximity"
        }

    def test_window_mismatch(self, setup):
        g, u0, p = setup
        with pytest.raises(ParameterError):
            xt_norm(Trajectory.constant(u0, p.dt, 3), u0, p)

    def test_homogeneous_in_the_linear_pieces(self, setup):
        g, u0, p = setup
        v = linear_iterate(u0, frozen_coefficient(u0, SPEC), p)
        a = xt_norm(v, u0, p, SPEC)
        b = xt_norm(v * 2.0, u0 * 2.0, p, SPEC)
        for name in ("sobolev_sup", "weighted_inf_sup", "weighted_deriv_sum", "smoothing", "proximity"):
            assert getattr(b, name) == pytest.approx(2 * getattr(a, name), rel=1e-12)


class TestPhi:
    def test_data_cancels_forcing(self, setup):
        g, u0, p = setup
        v = Trajectory.constant(u0, p.dt, p.n_steps)
        assert difference_forcing(v, u0, SPEC).sup_l2() == 0
        fc = frozen_coefficient(u0, SPEC)
        np.testing.assert_array_equal(phi_map(v, u0, SPEC, fc, p).values, linear_iterate(u0, fc, p).values)

    def test_grid_and_window_checks(self, setup):
        g, u0, p = setup
        fc = frozen_coefficient(u0, SPEC)
        with pytest.raises(ParameterError):
            phi_map(Trajectory.constant(u0, p.dt, 2), u0, SPEC, fc, p)
        other = decay_profile(0.5, 3, Grid(30, 512))
        with pytest.raises(ParameterError):
            phi_map(Trajectory.constant(other, p.dt, p.n_steps), other, SPEC, fc, p)


class TestPicardSolve:
    def test_fixed_point(self, setup, solved):
        g, u0, p = setup
        v, hist = solved
        assert hist.converged
        fc = frozen_coefficient(u0, SPEC)
        assert (phi_map(v, u0, SPEC, fc, p) - v).sup_l2() <= 1e-10

    def test_matches_direct_solver(self, setup, solved):
        g, u0, p = setup
        v, _ = solved
        assert (v - evolve(u0, p.T, p.dt, spec=SPEC)).sup_l2() <= 1e-8

    def test_history(self, solved):
        _, hist = solved
        assert hist.iterations == len(hist.distances)
        assert len(hist.norms) == len(hist.lower_bounds) == hist.iterations + 1
        assert all(r < 0.9 for r in hist.ratios)
        assert hist.lam == pytest.approx(0.5, rel=1e-14)
        assert min(hist.lower_bounds) >= hist.lam / 2

    def test_loose_tolerance_stops_after_one(self, setup):
        g, u0, p = setup
        v, hist = picard_solve(u0, SPEC, p, tol=1.0, record_norms=False)
        assert hist.iterations == 1 and hist.converged and hist.norms == []

    def test_max_iter(self, setup):
        g, u0, p = setup
        _, hist = picard_solve(u0, SPEC, p, tol=0.0, max_iter=2, record_norms=False)
        assert hist.iterations == 2 and not hist.converged

    def test_zero_data_rejected(self, setup):
        g, _, p = setup
        with pytest.raises(PreconditionError):
            picard_solve(g.zeros(), SPEC, p)

    def test_compact_data_rejected(self, setup):
        g, _, p = setup
        with pytest.raises(PreconditionError):
            picard_solve(gaussian(g), SPEC, p)

    def test_ratios_skip_zero_distances(self):
        assert PicardHistory(distances=[0.0, 1.0, 0.5]).ratios == [0.5]


class TestContraction:
    def test_shrinks_with_T(self, setup):
        g, u0, p = setup
        full = contraction_factor(u0, SPEC, p)
        half = contraction_factor(u0, SPEC, p.with_T(p.T / 2))
        assert 0 < half < full < 1

    def test_zero_perturbation(self, setup):
        g, u0, p = setup
        with pytest.raises(DegenerateInputError):
            contraction_factor(u0, SPEC, p, delta=g.zeros())

    def test_default_perturbation(self, setup):
        g, u0, _ = setup
        d = default_perturbation(u0, 1e-3)
        assert d.linf() == pytest.approx(1e-3 * u0.linf(), rel=1e-12)


class TestTripleNorm:
    def test_gaussian_against_quadrature(self):
        # d^j e^{-x^2} = (-1)^j H_j(x) e^{-x^2}
        cls = ClassParams(alpha=1, m=3, M=2)
        g = Grid(20, 1024)

        def norm(j, m):
            val, _ = quad(lambda x: x ** (2 * m) * eval_hermite(j, x) ** 2 * np.exp(-2 * x * x), -20, 20, limit=200)
            return math.sqrt(val)

        expected = sum(norm(j, cls.m) for j in range(1, cls.M + 2)) + sum(norm(j, 0) for j in range(cls.k + 1))
        assert triple_norms(gaussian(g).values, g, cls)[0] == pytest.approx(expected, rel=1e-10)

    def test_homogeneous(self):
        g = Grid(20, 512)
        cls = ClassParams()
        f = gaussian(g, 2.0)
        assert triple_norms((3 - 4j) * f.values, g, cls)[0] == pytest.approx(5 * triple_norms(f.values, g, cls)[0])
        assert triple_norms(g.zeros().values, g, cls)[0] == 0


class TestDependence:
    def test_identical_data(self, setup):
        g, u0, p = setup
        rep = dependence_probe(u0, u0, SPEC, p)
        assert rep.lhs == 0 and rep.rhs == 0 and rep.ratio == 0

    def test_ratio_stable(self, setup):
        g, u0, p = setup
        a = dependence_probe(u0, u0 * (1 + 1e-3), SPEC, p)
        b = dependence_probe(u0, u0 * (1 + 1e-4), SPEC, p)
        assert np.isfinite(a.ratio) and a.ratio > 0
        assert b.ratio == pytest.approx(a.ratio, rel=0.05)
        assert set(a.components) == {"triple", "half_derivative", "smoothing", "weighted_inf", "time_deriv_sum"}

    def test_rejects_zero(self, setup):
        g, u0, p = setup
        with pytest.raises(PreconditionError):
            dependence_probe(u0, g.zeros(), SPEC, p)


def test_linear_iterate_is_homogeneous_solve(setup):
    g, u0, p = setup
    fc = frozen_coefficient(u0, SPEC)
    np.testing.assert_array_equal(linear_iterate(u0, fc, p).values, solve_frozen(fc, u0, p.T, p.dt).values)
