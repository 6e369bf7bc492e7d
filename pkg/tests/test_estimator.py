import numpy as np
import pytest

from binomix.estimator import (BinomialSample, DataError, confidence_interval,
                               harmonic_mean, kde_at, kde_grid,
                               variance_estimate)
from binomix.kernels import build_legendre_kernel, eval_kernel
from binomix.oracle import kde_variance_bound
from binomix.simlab import dgp_heterogeneous
from conftest import heterogeneous_sample


def kde_direct(sample, kernel, h, u):
    """Independent direct-summation implementation."""
    total = 0.0
    for x, t in zip(sample.successes, sample.trials):
        total += eval_kernel(kernel, (x / t - u) / h) / h
    return total / sample.n


class TestSampleValidation:
    def test_rejects_empty(self):
        with pytest.raises(DataError):
            BinomialSample(np.array([], dtype=int), np.array([], dtype=int))

    def test_rejects_bad_counts(self):
        with pytest.raises(DataError):
            BinomialSample(np.array([3]), np.array([2]))
        with pytest.raises(DataError):
            BinomialSample(np.array([-1]), np.array([2]))
        with pytest.raises(DataError):
            BinomialSample(np.array([0]), np.array([0]))

    def test_rejects_bad_groups(self):
        with pytest.raises(DataError):
            BinomialSample(np.array([1]), np.array([2]), np.array([2]))


class TestKdeAt:
    def test_single_record_at_center(self, epanechnikov):
        s = BinomialSample.from_records([(1, 2)])
        assert kde_at(s, epanechnikov, 0.5, 0.5) == pytest.approx(1.5, abs=1e-15)

    def test_two_bernoulli_records(self, epanechnikov):
        s = BinomialSample.from_records([(0, 1), (1, 1)])
        assert kde_at(s, epanechnikov, 1.0, 0.5) == pytest.approx(0.5625,
                                                                  abs=1e-15)

    def test_matches_direct_summation(self, epanechnikov):
        s = heterogeneous_sample(n=200, target=50, seed=11)
        h = 200 ** (-0.2)
        assert kde_at(s, epanechnikov, h, 0.5) == pytest.approx(
            kde_direct(s, epanechnikov, h, 0.5), abs=1e-12)

    def test_empty_support_gives_zero(self, epanechnikov):
        s = BinomialSample.from_records([(0, 10), (10, 10)])
        assert kde_at(s, epanechnikov, 0.05, 0.5) == 0.0

    def test_permutation_invariance(self, epanechnikov):
        s = heterogeneous_sample(n=100, target=40, seed=3)
        perm = np.random.default_rng(0).permutation(s.n)
        s2 = BinomialSample(s.successes[perm], s.trials[perm])
        a = kde_at(s, epanechnikov, 0.2, 0.4)
        b = kde_at(s2, epanechnikov, 0.2, 0.4)
        assert a == pytest.approx(b, abs=1e-12)

    def test_depends_only_on_proportions(self, epanechnikov):
        a = BinomialSample.from_records([(1, 2), (3, 4)])
        b = BinomialSample.from_records([(2, 4), (6, 8)])
        assert kde_at(a, epanechnikov, 0.3, 0.45) == kde_at(
            b, epanechnikov, 0.3, 0.45)

    def test_clamp_flag(self):
        k4 = build_legendre_kernel(4)
        s = BinomialSample.from_records([(5, 10)])
        # order-4 kernel is negative away from its center
        u = 0.5 + 0.75 * 0.2
        raw = kde_at(s, k4, 0.2, u)
        assert raw < 0
        assert kde_at(s, k4, 0.2, u, clamp_nonneg=True) == 0.0

    def test_invalid_points_rejected(self, epanechnikov):
        s = BinomialSample.from_records([(1, 2)])
        with pytest.raises(ValueError):
            kde_at(s, epanechnikov, 0.5, 0.0)
        with pytest.raises(ValueError):
            kde_at(s, epanechnikov, -0.1, 0.5)


class TestKdeGrid:
    def test_singleton_consistency(self, epanechnikov):
        s = heterogeneous_sample(n=50, target=30, seed=2)
        np.testing.assert_allclose(
            kde_grid(s, epanechnikov, 0.3, [0.5]),
            [kde_at(s, epanechnikov, 0.3, 0.5)], atol=1e-15)

    def test_symmetric_sample(self, epanechnikov):
        s = BinomialSample.from_records([(1, 2)])
        vals = kde_grid(s, epanechnikov, 0.5, [0.3, 0.7])
        assert vals[0] == pytest.approx(vals[1], abs=1e-15)

    def test_near_normalization(self, epanechnikov):
        rng = np.random.default_rng(9)
        t, _, x, _ = dgp_heterogeneous(1000, 100, rng)
        s = BinomialSample(x, t)
        grid = np.linspace(0.005, 0.995, 101)
        vals = np.maximum(kde_grid(s, epanechnikov, 0.1, grid), 0.0)
        integral = np.trapezoid(vals, grid)
        assert abs(integral - 1.0) < 0.1


class TestHarmonicMean:
    def test_exact_small_case(self):
        assert harmonic_mean([2, 3, 6]) == pytest.approx(3.0, abs=1e-12)

    def test_homogeneous(self):
        assert harmonic_mean([7] * 13) == pytest.approx(7.0, abs=1e-12)

    def test_extreme_spread(self):
        assert harmonic_mean([1, 10**6]) == pytest.approx(2 / (1 + 1e-6),
                                                          rel=1e-12)

    def test_empty_errors(self):
        with pytest.raises(DataError):
            harmonic_mean([])


class TestVariance:
    def test_identical_records_zero(self, epanechnikov):
        s = BinomialSample.from_records([(1, 2)] * 5)
        assert variance_estimate(s, epanechnikov, 0.3, 0.5) == 0.0

    def test_two_record_algebra(self, epanechnikov):
        s = BinomialSample.from_records([(1, 4), (3, 4)])
        a = eval_kernel(epanechnikov, (0.25 - 0.5) / 0.4) / 0.4
        b = eval_kernel(epanechnikov, (0.75 - 0.5) / 0.4) / 0.4
        expected = (a - b) ** 2 / 4
        assert variance_estimate(s, epanechnikov, 0.4, 0.5) == pytest.approx(
            expected, rel=1e-12)

    def test_needs_two_records(self, epanechnikov):
        s = BinomialSample.from_records([(1, 2)])
        with pytest.raises(DataError):
            variance_estimate(s, epanechnikov, 0.3, 0.5)

    def test_duplication_shrinks_variance(self, epanechnikov):
        s = heterogeneous_sample(n=80, target=40, seed=5)
        prev = variance_estimate(s, epanechnikov, 0.25, 0.5)
        base = kde_at(s, epanechnikov, 0.25, 0.5)
        for m in (2, 4):
            dup = BinomialSample(np.tile(s.successes, m), np.tile(s.trials, m))
            assert kde_at(dup, epanechnikov, 0.25, 0.5) == pytest.approx(
                base, abs=1e-12)
            cur = variance_estimate(dup, epanechnikov, 0.25, 0.5)
            assert cur < prev
            prev = cur

    def test_matches_monte_carlo_variance(self, epanechnikov):
        # plug-in estimator vs the spread of the estimator across draws
        n, target, reps = 500, 50, 1000
        h = n ** (-0.2)
        rng = np.random.default_rng(123)
        t, _, x, _ = dgp_heterogeneous(n, target, rng)
        plug_in = variance_estimate(BinomialSample(x, t), epanechnikov, h, 0.5)
        estimates = np.empty(reps)
        for r in range(reps):
            rng_r = np.random.default_rng(10_000 + r)
            tr, _, xr, _ = dgp_heterogeneous(n, target, rng_r)
            estimates[r] = kde_at(BinomialSample(xr, tr), epanechnikov, h, 0.5)
        mc_var = estimates.var(ddof=1)
        assert abs(plug_in - mc_var) / mc_var < 0.15


class TestVarianceBoundDominance:
    def test_monte_carlo_variance_below_bound(self, epanechnikov):
        n, reps = 200, 1000
        h = n ** (-0.2)
        for target in (30, 60, 100):
            estimates = np.empty(reps)
            trials_pool = []
            for r in range(reps):
                rng = np.random.default_rng(1_000_000 * target + r)
                t, _, x, _ = dgp_heterogeneous(n, target, rng)
                estimates[r] = kde_at(BinomialSample(x, t), epanechnikov, h,
                                      0.5)
                trials_pool.append(t)
            mc_var = estimates.var(ddof=1)
            mc_se = mc_var * np.sqrt(2.0 / (reps - 1))
            bounds = [kde_variance_bound(1.5, epanechnikov.bounds, n, h, t)
                      for t in trials_pool]
            assert mc_var <= min(bounds) + 3 * mc_se


class TestConfidenceInterval:
    def test_degenerate_interval(self, epanechnikov):
        s = BinomialSample.from_records([(1, 2)] * 3)
        r = confidence_interval(s, epanechnikov, 0.3, 0.5, alpha=0.05)
        assert r.se == 0.0
        assert r.ci_lo == r.ci_hi == r.estimate

    def test_z_multiplier(self, epanechnikov):
        s = heterogeneous_sample(n=50, target=30, seed=8)
        r = confidence_interval(s, epanechnikov, 0.3, 0.5, alpha=0.05)
        assert r.se > 0
        z = (r.ci_hi - r.estimate) / r.se
        assert z == pytest.approx(1.959964, abs=1e-5)

    def test_interval_ordering(self, epanechnikov):
        s = heterogeneous_sample(n=50, target=30, seed=8)
        r = confidence_interval(s, epanechnikov, 0.2, 0.5)
        assert r.ci_lo <= r.estimate <= r.ci_hi
