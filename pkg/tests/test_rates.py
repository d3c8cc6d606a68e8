"""Tests for free energies, rate functions and l.m.g.f.'s."""

import math

import numpy as np
import pytest
from scipy import optimize, special

from loggamma import rates
from loggamma.errors import ConsistencyError, UsageError
from loggamma.rates import Direction, PolymerParams, VariationalResult

EULER = 0.5772156649015329
TWO_GAMMA = 2.0 * EULER
DIAG = Direction(1.0, 1.0)
MU2 = PolymerParams(2.0)
STAT = PolymerParams(2.0, 1.0)


def grid_free_energy(mu, s, t, step=1e-6):
    rho = np.arange(step, mu, step)
    return float(np.min(-s * special.digamma(rho) - t * special.digamma(mu - rho)))


def grid_rate(mu, s, t, r, step=1e-5):
    """sup over theta of f_r(theta) - inf_{z <= theta} f_r(z)."""
    theta = np.arange(step, mu, step)
    f = r * theta + t * special.gammaln(theta) - s * special.gammaln(mu - theta)
    return float(np.max(f - np.minimum.accumulate(f)))


class TestParams:
    def test_rejects_bad_mu(self):
        with pytest.raises(UsageError):
            PolymerParams(0.0)
        with pytest.raises(UsageError):
            PolymerParams(math.inf)

    def test_rejects_theta_outside(self):
        with pytest.raises(UsageError):
            PolymerParams(2.0, 2.0)

    def test_dual_swaps_theta(self):
        assert PolymerParams(2.0, 0.5).dual() == PolymerParams(2.0, 1.5)

    def test_missing_theta(self):
        with pytest.raises(UsageError, match="theta"):
            MU2.require_theta()

    def test_direction(self):
        assert Direction(0.0, 0.0).is_origin
        assert not Direction(1.0, 0.0).is_interior
        assert Direction(1.0, 2.0).swapped() == Direction(2.0, 1.0)
        with pytest.raises(UsageError):
            Direction(-1.0, 1.0)

    def test_variational_record(self):
        record = VariationalResult(1.5, (0.25, 1.0), 1e-14, 7).as_record()
        assert record == {"value": 1.5, "minimizers": [0.25, 1.0], "residual": 1e-14, "iterations": 7}


class TestLmgfLogY:
    def test_zero(self):
        assert rates.lmgf_logY(2.0, 0.0) == 0.0

    def test_pole(self):
        assert rates.lmgf_logY(2.0, 2.0) == math.inf

    def test_value(self):
        assert rates.lmgf_logY(2.0, 1.0) == pytest.approx(0.0, abs=1e-14)


class TestFreeEnergy:
    def test_diagonal(self):
        result = rates.free_energy_pp(MU2, DIAG)
        assert result.value == pytest.approx(TWO_GAMMA, rel=1e-12)
        assert result.minimizers[0] == pytest.approx(1.0, rel=1e-10)

    def test_axis(self):
        result = rates.free_energy_pp(MU2, Direction(0.0, 1.0))
        assert result.value == pytest.approx(EULER - 1.0, rel=1e-12)
        assert result.minimizers == ()

    def test_grid_oracle(self):
        value = rates.free_energy_pp(PolymerParams(1.0), Direction(2.0, 3.0)).value
        assert value == pytest.approx(grid_free_energy(1.0, 2.0, 3.0), abs=1e-8)

    @pytest.mark.slow
    def test_grid_oracle_random_directions(self):
        rng = np.random.default_rng(50)
        for mu, s, t in zip(rng.uniform(0.5, 3.0, 50), rng.uniform(0.2, 3.0, 50), rng.uniform(0.2, 3.0, 50)):
            value = rates.free_energy_pp(PolymerParams(mu), Direction(s, t)).value
            assert value == pytest.approx(grid_free_energy(mu, s, t), abs=1e-8)

    @pytest.mark.parametrize("mu,s,t", [(0.5, 0.3, 4.0), (3.0, 1.0, 0.2), (7.5, 2.0, 2.5)])
    def test_symmetry(self, mu, s, t):
        p = PolymerParams(mu)
        assert rates.free_energy_pp(p, Direction(s, t)).value == pytest.approx(
            rates.free_energy_pp(p, Direction(t, s)).value, abs=1e-10
        )

    def test_stationary_minimum(self):
        p, d = PolymerParams(1.0), Direction(2.0, 3.0)
        result = rates.free_energy_pp(p, d)
        best = optimize.minimize_scalar(
            lambda theta: rates.free_energy_stationary(PolymerParams(1.0, theta), d),
            bounds=(1e-6, 1.0 - 1e-6),
            method="bounded",
            options={"xatol": 1e-10},
        )
        assert best.fun == pytest.approx(result.value, abs=1e-8)
        assert best.x == pytest.approx(result.minimizers[0], abs=1e-6)

    def test_stationary_values(self):
        assert rates.free_energy_stationary(STAT, DIAG) == pytest.approx(TWO_GAMMA, rel=1e-13)
        assert rates.free_energy_stationary(STAT, Direction(0.0, 0.0)) == 0.0

    def test_stationary_needs_theta(self):
        with pytest.raises(UsageError):
            rates.free_energy_stationary(MU2, DIAG)

    def test_origin_rejected(self):
        with pytest.raises(UsageError):
            rates.free_energy_pp(MU2, Direction(0.0, 0.0))

    def test_line_is_half_diagonal(self):
        assert rates.free_energy_line(MU2, 2.0).value == pytest.approx(TWO_GAMMA, rel=1e-12)


class TestRateI:
    def test_zero_at_free_energy(self):
        p_value = rates.free_energy_pp(MU2, DIAG).value
        result = rates.rate_I(MU2, DIAG, p_value)
        assert result.value == 0.0
        assert result.minimizers[0] == result.minimizers[1]

    def test_infinite_below(self):
        assert rates.rate_I(MU2, DIAG, TWO_GAMMA - 0.5).value == math.inf

    def test_grid_oracle(self):
        result = rates.rate_I(MU2, DIAG, TWO_GAMMA + 0.5)
        assert result.value == pytest.approx(grid_rate(2.0, 1.0, 1.0, TWO_GAMMA + 0.5), abs=1e-7)
        theta1, theta2 = result.minimizers
        assert 0.0 < theta1 < 1.0 < theta2 < 2.0

    @pytest.mark.slow
    def test_grid_oracle_design(self):
        for angle in np.linspace(0.05, 0.5 * math.pi - 0.05, 20):
            d = Direction(math.cos(angle), math.sin(angle))
            free = rates.free_energy_pp(MU2, d).value
            for excess in np.geomspace(1e-3, 2.0, 20):
                value = rates.rate_I(MU2, d, free + excess).value
                assert value == pytest.approx(grid_rate(2.0, d.s, d.t, free + excess), rel=1e-8, abs=1e-7)

    def test_increasing_and_convex(self):
        p, d = PolymerParams(1.5), Direction(0.7, 1.9)
        free = rates.free_energy_pp(p, d).value
        rs = free + np.linspace(0.05, 2.0, 12)
        values = [rates.rate_I(p, d, r).value for r in rs]
        assert all(a < b for a, b in zip(values, values[1:]))
        for lo, hi in zip(rs, rs[2:]):
            mid = rates.rate_I(p, d, 0.5 * (lo + hi)).value
            assert mid <= 0.5 * (rates.rate_I(p, d, lo).value + rates.rate_I(p, d, hi).value) + 1e-12

    def test_needs_interior_direction(self):
        with pytest.raises(UsageError):
            rates.rate_I(MU2, Direction(1.0, 0.0), 1.0)

    def test_line(self):
        assert rates.rate_line(MU2, 2.0, TWO_GAMMA + 0.5).value == pytest.approx(
            rates.rate_I(MU2, DIAG, TWO_GAMMA + 0.5).value, rel=1e-12
        )


class TestRateJ:
    def test_zero_branch(self):
        assert rates.rate_J(MU2, DIAG, TWO_GAMMA - 1.0) == 0.0
        assert rates.rate_J(MU2, DIAG, rates.free_energy_pp(MU2, DIAG).value) == 0.0

    def test_grid_oracle(self):
        p, d = PolymerParams(1.0), Direction(2.0, 1.0)
        r = rates.free_energy_pp(p, d).value + 0.3
        assert rates.rate_J(p, d, r) == pytest.approx(grid_rate(1.0, 2.0, 1.0, r), abs=1e-7)

    def test_symmetry(self):
        p = PolymerParams(1.3)
        r = rates.free_energy_pp(p, Direction(0.4, 2.2)).value + 0.7
        assert rates.rate_J(p, Direction(0.4, 2.2), r) == pytest.approx(
            rates.rate_J(p, Direction(2.2, 0.4), r), abs=1e-10
        )

    def test_origin(self):
        p = PolymerParams(3.0)
        assert rates.rate_J_origin(p, -1.0) == 0.0
        assert rates.rate_J_origin(p, 0.0) == 0.0
        assert rates.rate_J_origin(p, 2.0) == 6.0
        assert rates.rate_J(p, Direction(0.0, 0.0), 2.0) == 6.0

    def test_boundary_direction_is_iid_sum(self):
        d = Direction(0.0, 2.0)
        r = 2.0 * (EULER - 1.0) + 0.4
        assert rates.rate_J(MU2, d, r) == pytest.approx(2.0 * rates.cramer_logY(MU2, r / 2.0), rel=1e-12)
        assert rates.rate_J(MU2, d, 2.0 * (EULER - 1.0) - 0.1) == 0.0


class TestCramer:
    def test_zero_at_mean(self):
        p = PolymerParams(1.7)
        assert rates.cramer_logY(p, -special.digamma(1.7)) == pytest.approx(0.0, abs=1e-12)

    def test_dual_oracle(self):
        r = EULER + 0.5
        best = optimize.minimize_scalar(
            lambda xi: -(xi * r - (special.gammaln(1.0 - xi) - special.gammaln(1.0))),
            bounds=(-10.0, 1.0 - 1e-9),
            method="bounded",
            options={"xatol": 1e-12},
        )
        assert rates.cramer_logY(PolymerParams(1.0), r) == pytest.approx(-best.fun, abs=1e-9)

    def test_convex(self):
        p = PolymerParams(1.0)
        lo, hi = EULER, EULER + 1.0
        mid = rates.cramer_logY(p, 0.5 * (lo + hi))
        assert mid <= 0.5 * (rates.cramer_logY(p, lo) + rates.cramer_logY(p, hi))


class TestLambdaIid:
    def test_zero(self):
        assert rates.lambda_iid(MU2, DIAG, 0.0).value == 0.0

    def test_diagonal_closed_form(self):
        assert rates.lambda_iid(MU2, DIAG, 1.0).value == pytest.approx(2.0 * math.log(2.0), rel=1e-11)
        assert rates.lambda_diagonal(MU2, 1.0, 1.0) == pytest.approx(2.0 * math.log(2.0), rel=1e-13)

    def test_negative_branch(self):
        assert rates.lambda_iid(MU2, DIAG, -2.0).value == pytest.approx(-2.0 * TWO_GAMMA, rel=1e-12)

    def test_infinite_from_mu(self):
        assert rates.lambda_iid(MU2, DIAG, 2.0).value == math.inf

    def test_symmetry(self):
        p = PolymerParams(1.0)
        assert rates.lambda_iid(p, Direction(0.5, 2.0), 0.3).value == pytest.approx(
            rates.lambda_iid(p, Direction(2.0, 0.5), 0.3).value, abs=1e-10
        )

    def test_boundary_direction(self):
        value = rates.lambda_iid(MU2, Direction(3.0, 0.0), 0.5).value
        assert value == pytest.approx(3.0 * rates.lmgf_logY(2.0, 0.5), rel=1e-14)

    def test_below_stationary(self):
        d = Direction(0.8, 1.6)
        xi = 0.2
        iid = rates.lambda_iid(MU2, d, xi).value
        stationary = [rates.lambda_stationary(PolymerParams(2.0, theta), d, xi) for theta in np.linspace(0.3, 1.7, 29)]
        assert iid <= min(stationary) + 1e-12

    @pytest.mark.parametrize("d", [DIAG, Direction(0.8, 1.6), Direction(3.0, 0.5)])
    def test_strictly_below_stationary_grid(self, d):
        for theta in (0.4, 0.7, 1.0, 1.3, 1.6):
            p = PolymerParams(2.0, theta)
            limit = min(theta, 2.0 - theta)
            for xi in (0.1 * limit, 0.5 * limit, 0.9 * limit):
                iid = rates.lambda_iid(MU2, d, xi).value
                assert rates.lambda_stationary(p, d, xi) - iid > 1e-10


class TestDualCheck:
    def test_symmetric_minimisers(self):
        result = rates.lambda_iid_dual_check(MU2, DIAG, 0.6)
        assert result.minimizers == pytest.approx((1.3, 1.3), rel=1e-10)

    def test_zero(self):
        assert rates.lambda_iid_dual_check(MU2, DIAG, 0.0).value == 0.0

    def test_asymmetric(self):
        p, d = PolymerParams(1.0), Direction(0.5, 2.0)
        result = rates.lambda_iid_dual_check(p, d, 0.3)
        rho, theta = result.minimizers
        assert rho == pytest.approx(1.0 + 0.3 - theta, abs=1e-8)
        assert result.residual < 1e-9

    def test_rejects_xi_outside(self):
        with pytest.raises(UsageError):
            rates.lambda_iid_dual_check(MU2, DIAG, 2.0)

    def test_disagreement_raises(self, monkeypatch):
        monkeypatch.setattr(rates, "lambda_iid", lambda p, d, xi, cfg: VariationalResult(d.s, (1.0,)))
        with pytest.raises(ConsistencyError):
            rates.lambda_iid_dual_check(MU2, Direction(0.5, 2.0), 0.3)


class TestStationaryLmgf:
    def test_zero(self):
        assert rates.lambda_stationary(STAT, DIAG, 0.0) == 0.0

    def test_infinite(self):
        assert rates.lambda_stationary(STAT, DIAG, 1.0) == math.inf

    def test_symmetric_value(self):
        assert rates.lambda_stationary(STAT, DIAG, 0.5) == pytest.approx(math.log(2.0), rel=1e-12)

    def test_negative_rejected(self):
        with pytest.raises(UsageError):
            rates.lambda_stationary(STAT, DIAG, -0.1)


class TestTransitions:
    def test_trans1_equality(self):
        assert rates.trans1_holds(STAT, DIAG)

    def test_trans1_fails(self):
        assert not rates.trans1_holds(PolymerParams(2.0, 0.5), Direction(1.0, 100.0))

    def test_trans2_at_zero(self):
        assert rates.trans2_holds(PolymerParams(2.0, 0.5), Direction(1.0, 100.0), 0.0)

    def test_trans2_range(self):
        with pytest.raises(UsageError):
            rates.trans2_holds(STAT, DIAG, 1.0)

    def test_trans1_implies_trans2(self):
        p = PolymerParams(3.0, 1.2)
        for s, t in [(1.0, 0.5), (2.0, 1.0), (0.9, 0.8)]:
            d = Direction(s, t)
            if rates.trans1_holds(p, d):
                assert all(rates.trans2_holds(p, d, xi) for xi in np.linspace(0.0, 1.19, 40))

    def test_p_hor_at_transition(self):
        assert rates.p_hor(STAT, DIAG) == pytest.approx(TWO_GAMMA, rel=1e-12)
        assert rates.free_energy_pp(MU2, DIAG).value == pytest.approx(TWO_GAMMA, rel=1e-12)

    def test_max_of_exits_is_stationary(self):
        combined = max(rates.lambda_hor(STAT, DIAG, 0.5), rates.lambda_ver(STAT, DIAG, 0.5))
        assert combined == pytest.approx(rates.lambda_stationary(STAT, DIAG, 0.5), rel=1e-12)

    @pytest.mark.parametrize("s,t", [(1.0, 100.0), (100.0, 1.0), (1.0, 5.0), (5.0, 1.0), (1.0, 1.0)])
    @pytest.mark.parametrize("xi", [0.05, 0.3, 0.45])
    def test_max_of_exits_off_diagonal(self, s, t, xi):
        p, d = PolymerParams(2.0, 0.5), Direction(s, t)
        combined = max(rates.lambda_hor(p, d, xi), rates.lambda_ver(p, d, xi))
        assert combined == pytest.approx(rates.lambda_stationary(p, d, xi), rel=1e-10, abs=1e-12)

    def test_hor_falls_back_to_iid(self):
        p, d = PolymerParams(2.0, 0.5), Direction(1.0, 100.0)
        assert not rates.trans2_holds(p, d, 0.1)
        assert rates.lambda_hor(p, d, 0.1) == rates.lambda_iid(MU2, d, 0.1).value


class TestCharacteristicDirection:
    def test_symmetric(self):
        d = rates.characteristic_direction(STAT)
        assert d.s == pytest.approx(math.pi**2 / 6.0, rel=1e-13)
        assert d.t == pytest.approx(math.pi**2 / 6.0, rel=1e-13)

    def test_scaling(self):
        p = PolymerParams(2.0, 0.7)
        one, two = rates.characteristic_direction(p), rates.characteristic_direction(p, 2.0)
        assert (two.s, two.t) == pytest.approx((2.0 * one.s, 2.0 * one.t), rel=1e-15)

    def test_trans1_equality(self):
        p = PolymerParams(2.0, 0.7)
        d = rates.characteristic_direction(p)
        assert d.s * special.polygamma(1, 0.7) == pytest.approx(d.t * special.polygamma(1, 1.3), rel=1e-12)
        assert rates.trans1_holds(p, d)

    def test_scale_positive(self):
        with pytest.raises(UsageError):
            rates.characteristic_direction(STAT, 0.0)


class TestBoundaryRates:
    def test_r_s_zero_at_lln(self):
        assert rates.R_s(STAT, 1.5, -1.5 * special.digamma(1.0)) == pytest.approx(0.0, abs=1e-12)

    def test_r_s_scaling(self):
        assert rates.R_s(STAT, 2.0, 2.0 * 1.2) == pytest.approx(2.0 * rates._cramer(1.0, 1.2), rel=1e-13)

    def test_r_s_at_zero_length(self):
        assert rates.R_s(STAT, 0.0, -1.0) == 0.0
        assert rates.R_s(STAT, 0.0, 1.0) == math.inf

    def test_r_s_dual(self):
        assert rates.R_s_dual(STAT, 1.0, 0.0) == 0.0
        assert rates.R_s_dual(STAT, 1.0, -0.1) == math.inf
        assert rates.R_s_dual(STAT, 1.0, 1.0) == math.inf
        assert rates.R_s_dual(STAT, 2.0, 0.5) == pytest.approx(2.0 * (special.gammaln(0.5) - special.gammaln(1.0)))

    def test_vbar(self):
        assert rates.vbar(-0.5, DIAG) == Direction(0.0, 0.5)
        assert rates.vbar(0.0, DIAG) == Direction(0.0, 0.0)
        assert rates.vbar(1.0, DIAG) == Direction(1.0, 0.0)
        with pytest.raises(UsageError):
            rates.vbar(1.5, DIAG)


class TestKappa:
    def test_kappa_star_degenerate(self):
        for xi in (0.0, 0.3, 5.0):
            assert rates.kappa_star(STAT, DIAG, -1.0, xi) == 0.0

    def test_kappa_star_jump(self):
        below = rates.kappa_star(STAT, DIAG, 0.0, 1.5)
        above = rates.kappa_star(STAT, DIAG, 1e-9, 1.5)
        assert math.isfinite(below)
        assert above == math.inf

    def test_m_kappa_continuous(self):
        left = rates.m_kappa(STAT, DIAG, -1e-12)
        right = rates.m_kappa(STAT, DIAG, 1e-12)
        assert left == pytest.approx(right, abs=1e-10)

    @pytest.mark.parametrize("a", [-1.0, -0.4, 0.0, 0.5, 1.0])
    def test_zero_at_lln(self, a):
        assert rates.kappa(STAT, DIAG, a, rates.m_kappa(STAT, DIAG, a)) == 0.0

    def test_dual_oracle(self):
        a = 0.5
        r = rates.m_kappa(STAT, DIAG, a) + 0.4
        xi = np.arange(0.0, 1.0, 1e-6)
        star = special.gammaln(1.0 + xi) - special.gammaln(1.0) + a * (special.gammaln(1.0 - xi) - special.gammaln(1.0))
        assert rates.kappa(STAT, DIAG, a, r) == pytest.approx(float(np.max(xi * r - star)), abs=1e-9)

    def test_negative_split_closed_form(self):
        a = -0.4
        r = rates.m_kappa(STAT, DIAG, a) + 0.3
        xi = np.arange(0.0, 5.0, 1e-5)
        star = 0.6 * (special.gammaln(1.0 + xi) - special.gammaln(1.0))
        assert rates.kappa(STAT, DIAG, a, r) == pytest.approx(float(np.max(xi * r - star)), abs=1e-8)


class TestInfConvolution:
    def test_zero_below_sum(self):
        a = 0.3
        rest = Direction(0.7, 1.0)
        total = rates.m_kappa(STAT, DIAG, a) + rates.free_energy_pp(MU2, rest).value
        assert rates.inf_convolution_H(STAT, DIAG, a, a, total) == pytest.approx(0.0, abs=1e-12)
        assert rates.inf_convolution_H(STAT, DIAG, a, a, total - 0.2) == 0.0

    def test_grid_oracle(self):
        a = 0.3
        rest = Direction(0.7, 1.0)
        low = rates.m_kappa(STAT, DIAG, a)
        r = low + rates.free_energy_pp(MU2, rest).value + 0.5
        xs = np.linspace(low, low + 0.5, 501)
        brute = min(rates.kappa(STAT, DIAG, a, x) + rates.rate_J(MU2, rest, r - x) for x in xs)
        value = rates.inf_convolution_H(STAT, DIAG, a, a, r)
        assert value <= brute + 1e-9
        assert value == pytest.approx(brute, abs=1e-4)

    def test_decomposition_matches_r_s(self):
        r = -special.digamma(1.0) + 0.5
        result = rates.decomposition_rate(STAT, DIAG, r)
        assert result.value == pytest.approx(rates.R_s(STAT, 1.0, r), abs=1e-4)
        assert -1.0 <= result.minimizers[0] <= 1.0


class TestLegendre:
    def test_quadratic_self_dual(self):
        f = rates.sample_function(lambda x: 0.5 * x * x, np.linspace(-3.0, 3.0, 61))
        assert rates.legendre_transform(f, 1.0) == pytest.approx(0.5, abs=1e-6)

    def test_zero_slope(self):
        f = rates.sample_function(lambda x: (x - 1.0) ** 2 + 0.25, np.linspace(-3.0, 3.0, 61))
        assert rates.legendre_transform(f, 0.0) == pytest.approx(-0.25, abs=1e-9)

    def test_without_callable(self):
        f = rates.SampledFunction(np.array([0.0, 1.0]), np.array([0.0, 0.5]))
        assert rates.legendre_transform(f, 1.0) == 0.5

    def test_empty_grid(self):
        with pytest.raises(UsageError):
            rates.legendre_transform(rates.SampledFunction(np.array([]), np.array([])), 1.0)

    def test_rate_dual_is_lmgf(self):
        gap, rows = rates.duality_gap(MU2, DIAG, [0.5])
        assert gap < 1e-4
        assert rows[0][2] == pytest.approx(rates.lambda_diagonal(MU2, 1.0, 0.5), rel=1e-10)

    def test_rate_from_lmgf(self):
        r = TWO_GAMMA + 0.5
        assert rates.rate_from_lmgf(MU2, DIAG, r) == pytest.approx(rates.rate_J(MU2, DIAG, r), abs=1e-6)

    def test_negated_dual_rate(self):
        assert rates.negated_dual_rate(MU2, 1.0, -0.1, 0.3) == math.inf
        value = rates.negated_dual_rate(MU2, 1.0, 0.0, 0.3)
        assert value == pytest.approx(-rates.lambda_diagonal(MU2, 1.0, 0.3), abs=1e-4)

    @pytest.mark.parametrize("xi", [0.2, 0.8])
    def test_negated_dual_rate_convex(self, xi):
        splits = np.linspace(0.1, 0.9, 5)
        values = [rates.negated_dual_rate(MU2, 1.0, a, xi) for a in splits]
        for lo, mid, hi in zip(values, values[1:], values[2:]):
            assert mid <= 0.5 * (lo + hi) + 2e-4

    @pytest.mark.parametrize("xi", [0.2, 0.8, 1.5])
    def test_negated_lmgf_convex_in_split(self, xi):
        splits = np.linspace(0.0, 1.0, 21)
        values = [-rates.lambda_iid(MU2, Direction(1.0 - a, 1.0), xi).value for a in splits]
        for lo, mid, hi in zip(values, values[1:], values[2:]):
            assert mid <= 0.5 * (lo + hi) + 1e-10


class TestAsymptoticConstant:
    def test_mu_two(self):
        assert rates.asymptotic_constant(MU2) == pytest.approx(0.8600, abs=1e-4)

    def test_vanishes_near_zero(self):
        assert rates.asymptotic_constant(PolymerParams(1e-3)) < 1e-4

    def test_epsilon_fit(self):
        slope, intercept = rates.epsilon_fit(MU2)
        assert slope == pytest.approx(1.5, abs=0.02)
        assert intercept == pytest.approx(math.log(rates.asymptotic_constant(MU2)), abs=0.05)
