"""KS machinery, the Kolmogorov series, and the rank chi-square test."""

import numpy as np
import pytest

from slowshot.rng import RngStream
from slowshot.stats import (
    EcdfView,
    chi2_independence,
    kolmogorov_cdf,
    kolmogorov_sf,
    ks_one_sample,
    ks_two_sample,
    projection_vectors,
)


def uniform_cdf(x):
    return np.clip(np.asarray(x, dtype=float), 0.0, 1.0)


class TestKolmogorovSeries:
    def test_at_zero(self):
        assert kolmogorov_cdf(0.0) == 0.0

    def test_at_infinity_limit(self):
        assert kolmogorov_cdf(10.0) == pytest.approx(1.0, abs=1e-12)

    def test_99th_percentile_root(self):
        lo, hi = 0.5, 3.0
        for _ in range(60):
            mid = 0.5 * (lo + hi)
            if kolmogorov_cdf(mid) < 0.99:
                lo = mid
            else:
                hi = mid
        assert 0.5 * (lo + hi) == pytest.approx(1.6276, abs=1e-3)

    def test_nondecreasing_in_unit_interval(self):
        grid = np.linspace(0.0, 4.0, 200)
        q = [kolmogorov_cdf(g) for g in grid]
        assert all(0.0 <= v <= 1.0 for v in q)
        # the series is truncated at 1e-12, so monotonicity holds to that level
        assert all(b >= a - 1e-12 for a, b in zip(q, q[1:]))

    def test_negative_rejected(self):
        with pytest.raises(ValueError):
            kolmogorov_cdf(-0.1)


class TestKsOneSample:
    def test_plotting_positions_give_half_over_n(self):
        n = 50
        sample = (np.arange(1, n + 1) - 0.5) / n
        r = ks_one_sample(sample, uniform_cdf)
        assert r.statistic == pytest.approx(0.5 / n, abs=1e-15)

    def test_calibration_uniform(self):
        u = RngStream(21, ("cal",)).uniforms(100)
        r = ks_one_sample(u, uniform_cdf, p_min=1e-3)
        assert r.passed

    def test_power_exponential_vs_uniform(self):
        x = RngStream(22, ("pow",)).exponentials(10**4)
        r = ks_one_sample(x, uniform_cdf)
        assert r.statistic > 0.3
        assert r.p_value < 1e-6

    def test_invalid_cdf_rejected(self):
        u = RngStream(23, ("bad",)).uniforms(100)
        with pytest.raises(ValueError):
            ks_one_sample(u, lambda x: np.asarray(x) * 2.0)
        with pytest.raises(ValueError):
            ks_one_sample(u, lambda x: -np.asarray(x))

    def test_small_n_rejected(self):
        with pytest.raises(ValueError):
            ks_one_sample([0.5] * 5, uniform_cdf)

    def test_probability_integral_invariance(self):
        u = np.sort(RngStream(24, ("piv",)).uniforms(2000))
        base = ks_one_sample(u, uniform_cdf)
        # strictly increasing transforms applied jointly to sample and cdf
        for fwd, inv in [(np.exp, np.log), (lambda x: x**3, np.cbrt)]:
            r = ks_one_sample(fwd(u), lambda t, g=inv: uniform_cdf(g(np.asarray(t))))
            assert r.statistic == pytest.approx(base.statistic, abs=1e-9)

    def test_verdict_criteria(self):
        u = RngStream(25, ("crit",)).uniforms(500)
        by_d = ks_one_sample(u, uniform_cdf, d_max=0.5)
        assert by_d.criterion == "D<0.5" and by_d.passed
        by_p = ks_one_sample(u, uniform_cdf, p_min=1e-3)
        assert by_p.criterion == "p>0.001"


class TestKsTwoSample:
    def test_identical_multisets_give_zero(self):
        a = RngStream(31, ("two",)).uniforms(100)
        r = ks_two_sample(a, a.copy())
        assert r.statistic == 0.0

    def test_calibration(self):
        a = RngStream(32, ("c1",)).exponentials(10**4)
        b = RngStream(32, ("c2",)).exponentials(10**4)
        assert ks_two_sample(a, b, p_min=1e-3).passed

    def test_power(self):
        a = RngStream(33, ("p1",)).exponentials(10**4, mean=1.0)
        b = RngStream(33, ("p2",)).exponentials(10**4, mean=2.0)
        r = ks_two_sample(a, b)
        assert r.p_value < 1e-6

    def test_symmetry(self):
        a = RngStream(34, ("s1",)).uniforms(512)
        b = RngStream(34, ("s2",)).exponentials(300)
        assert ks_two_sample(a, b).statistic == ks_two_sample(b, a).statistic


class TestChi2Independence:
    def test_calibration_independent_uniforms(self):
        n = 10**5
        x = RngStream(41, ("ix",)).uniforms(n)
        y = RngStream(41, ("iy",)).uniforms(n)
        assert chi2_independence(x, y, k=5).passed

    def test_perfect_dependence(self):
        x = RngStream(42, ("dep",)).uniforms(2000)
        r = chi2_independence(x, x, k=5, p_min=1e-3)
        assert r.statistic > 1000
        assert r.p_value < 1e-10

    def test_degenerate_rejected(self):
        with pytest.raises(ValueError):
            chi2_independence(np.ones(2000), RngStream(1).uniforms(2000))

    def test_too_small_rejected(self):
        with pytest.raises(ValueError):
            chi2_independence(np.arange(100.0), np.arange(100.0), k=5)


class TestEcdfView:
    def test_sorted_enforced(self):
        with pytest.raises(ValueError):
            EcdfView(np.array([2.0, 1.0]))

    def test_at(self):
        e = EcdfView.from_sample([3.0, 1.0, 2.0])
        assert e.n == 3
        assert e.at(np.array([0.5, 1.0, 2.5, 9.0])).tolist() == [0.0, 1 / 3, 2 / 3, 1.0]


class TestProjections:
    def test_four_distinct_for_n3(self):
        vecs = projection_vectors(3)
        assert len(vecs) == 4

    def test_collapse_for_n1(self):
        vecs = projection_vectors(1)
        assert len(vecs) == 1
        assert vecs[0].tolist() == [1.0]
