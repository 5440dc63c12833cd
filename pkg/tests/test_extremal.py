"""Exact extremal-process samplers against their closed-form laws."""

import math

import numpy as np
import pytest

from slowshot import extremal
from slowshot.rng import RngStream, ScriptedStream
from slowshot.stats import chi2_independence, ks_one_sample, ks_two_sample


def exp_cdf(mean):
    return lambda v: -np.expm1(-np.asarray(v, dtype=float) / mean)


def pareto_cdf(x):
    x = np.asarray(x, dtype=float)
    return np.where(x < 1.0, 0.0, 1.0 - 1.0 / np.maximum(x, 1.0))


class TestInverseFdd:
    def test_monotone_every_sample(self):
        s = RngStream(3, ("mono",))
        for _ in range(2000):
            out = extremal.sample_inverse_fdd((0.5, 1.0, 2.0), s)
            assert np.all(np.diff(out) >= 0)

    def test_single_level_marginal_is_exponential(self):
        s = RngStream(4, ("marg",))
        vals = np.array([extremal.sample_inverse_fdd((1.0,), s)[0] for _ in range(20000)])
        assert ks_one_sample(vals, exp_cdf(1.0), p_min=1e-3).passed

    def test_increments_independent_of_past(self):
        n = 10**5
        s = RngStream(5, ("incr",))
        rows = np.array([extremal.sample_inverse_fdd((1.0, 2.0), s) for _ in range(n)])
        first = rows[:, 0]
        inc = rows[:, 1] - rows[:, 0]
        rx = np.argsort(np.argsort(first))
        ry = np.argsort(np.argsort(inc))
        rho = float(np.corrcoef(rx, ry)[0, 1])
        assert abs(rho) < 0.03

    def test_grid_validation(self):
        s = RngStream(6)
        with pytest.raises(ValueError):
            extremal.sample_inverse_fdd((), s)
        with pytest.raises(ValueError):
            extremal.sample_inverse_fdd((2.0, 1.0), s)
        with pytest.raises(ValueError):
            extremal.sample_inverse_fdd((0.0, 1.0), s)


class TestPath:
    def test_marginal_frechet_at_fixed_time(self):
        u = 1.0
        floor = 1e-3
        s = RngStream(7, ("path",))
        vals = np.array(
            [extremal.sample_path(u, floor, s).value_at(u) for _ in range(10**5)]
        )
        # P{m(u) <= x} = exp(-u/x); mass below the floor is e^-1000
        r = ks_one_sample(vals, lambda x: np.exp(-u / np.asarray(x)), p_min=1e-3)
        assert r.passed

    def test_values_strictly_increase(self):
        s = RngStream(8, ("incr",))
        for _ in range(500):
            p = extremal.sample_path(5.0, 0.01, s)
            if p.values.size > 1:
                assert np.all(np.diff(p.values) > 0)

    def test_range_is_poisson_in_log_scale(self):
        # expected number of range points in (a, b) is log(b/a), 3 sigma band
        a, b = 0.5, 2.0
        floor, horizon = 0.1, 40.0 * b
        n_paths = 10**5
        s = RngStream(9, ("range",))
        counts = np.empty(n_paths)
        for i in range(n_paths):
            p = extremal.sample_path(horizon, floor, s)
            counts[i] = np.sum((p.values > a) & (p.values < b))
        target = math.log(b / a)
        sigma = math.sqrt(target / n_paths)
        assert abs(counts.mean() - target) < 3.0 * sigma

    def test_step_path_semantics(self):
        p = extremal.StepPath(0.5, np.array([1.0, 2.0]), np.array([2.0, 8.0]))
        assert p.value_at(0.3) == 0.5
        assert p.value_at(1.0) == 2.0
        assert p.value_at(1.9) == 2.0
        assert p.value_at(2.5) == 8.0

    def test_step_path_invariants(self):
        with pytest.raises(ValueError):
            extremal.StepPath(0.1, np.array([1.0, 1.0]), np.array([1.0, 2.0]))


class TestPrePost:
    def test_scripted_draw_order_and_formula(self):
        # T = 2*E1, E = E2, W = 0.25 with scripted uniforms
        u = 2.0
        s = ScriptedStream([math.exp(-1.0), math.exp(-3.0), 0.25])
        pp = extremal.sample_pre_post(u, s)
        t = u * 1.0
        e = 3.0
        assert pp.pre == pytest.approx(1.0 / (1.0 / u + e / t), rel=1e-14)
        assert pp.post == pytest.approx(u / 0.25, rel=1e-14)

    def test_invariant_pre_le_u_lt_post(self):
        s = RngStream(11, ("inv",))
        for u in (0.5, 1.0, 3.0):
            for _ in range(5000):
                pp = extremal.sample_pre_post(u, s)
                assert 0.0 <= pp.pre <= u < pp.post

    def test_marginals_uniform_and_pareto(self):
        s = RngStream(12, ("marg",))
        n = 10**5
        pre = np.empty(n)
        post = np.empty(n)
        for i in range(n):
            pp = extremal.sample_pre_post(1.0, s)
            pre[i], post[i] = pp.pre, pp.post
        assert ks_one_sample(pre, lambda x: np.clip(np.asarray(x), 0, 1), p_min=1e-3).passed
        assert ks_one_sample(post, pareto_cdf, p_min=1e-3).passed
        assert chi2_independence(pre, post, k=5).passed

    def test_cross_oracle_against_path_scan(self):
        """The O(1) sampler against a scan of the jump chain records."""
        u, n = 1.0, 10**4
        floor = u / 1000.0
        s_direct = RngStream(13, ("direct",))
        s_scan = RngStream(13, ("scan",))
        direct = np.array(
            [[p.pre, p.post] for p in (extremal.sample_pre_post(u, s_direct) for _ in range(n))]
        )
        scanned = np.empty((n, 2))
        for i in range(n):
            times, values = extremal.record_sequence(floor, u, s_scan)
            j = int(np.nonzero(values > u)[0][0])
            scanned[i] = (values[j - 1] if j >= 1 else floor, values[j])
        assert ks_two_sample(direct[:, 0], scanned[:, 0], d_max=0.02).passed
        assert ks_two_sample(direct[:, 1], scanned[:, 1], d_max=0.02).passed

    def test_level_validation(self):
        with pytest.raises(ValueError):
            extremal.sample_pre_post(0.0, RngStream(1))


class TestJointCdf:
    def test_closed_form_values(self):
        assert extremal.joint_cdf_pre_post(0.5, 2.0) == pytest.approx(0.25, abs=1e-15)
        assert extremal.joint_cdf_pre_post(0.25, 4.0) == pytest.approx(0.1875, abs=1e-15)

    def test_normalization_limit(self):
        assert extremal.joint_cdf_pre_post(1.0 - 1e-12, 1e12) == pytest.approx(1.0, abs=1e-9)

    def test_domain_rejected(self):
        for x1, x2 in [(0.0, 2.0), (1.0, 2.0), (0.5, 1.0), (-0.1, 3.0)]:
            with pytest.raises(ValueError):
                extremal.joint_cdf_pre_post(x1, x2)


class TestMarkedPoint:
    def test_invariants(self):
        extremal.MarkedPoint(0.0, 1.0)
        with pytest.raises(ValueError):
            extremal.MarkedPoint(-1.0, 1.0)
        with pytest.raises(ValueError):
            extremal.MarkedPoint(0.0, 0.0)
