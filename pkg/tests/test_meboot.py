import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays
from numpy.testing import assert_allclose

from ftsboot.meboot import (
    MebootSpec,
    me_intermediate_points,
    me_interval_means,
    meboot_ensemble,
    meboot_replicate,
)

series_strategy = arrays(
    np.float64,
    st.integers(min_value=2, max_value=40),
    elements=st.floats(min_value=-1e6, max_value=1e6, allow_nan=False, width=64),
)


def lag1_autocorr(x):
    xc = x - x.mean()
    denom = np.sum(xc**2)
    return np.sum(xc[:-1] * xc[1:]) / denom if denom > 0 else 0.0


class TestIntermediatePoints:
    def test_interior_midpoints_hand_example(self):
        z = me_intermediate_points(np.array([4.0, 12.0, 8.0]))
        assert_allclose(z[1:-1], [6.0, 10.0], rtol=1e-15)
        # original-order deviations are (8, 4); untrimmed at this length
        assert_allclose(z[0], 4.0 - 6.0, rtol=1e-15)
        assert_allclose(z[-1], 12.0 + 6.0, rtol=1e-15)

    def test_tails_with_zero_trim(self):
        z = me_intermediate_points(np.array([4.0, 8.0, 12.0, 20.0]), trim_proportion=0.0)
        m = (4.0 + 4.0 + 8.0) / 3.0
        assert_allclose(z, [4.0 - m, 6.0, 10.0, 16.0, 20.0 + m], rtol=1e-14)

    def test_trim_drops_extreme_deviation(self):
        # 11 deviations, trim 0.10 cuts one from each tail
        x = np.concatenate([np.arange(11.0), [1000.0]])
        z = me_intermediate_points(x, trim_proportion=0.10)
        devs = np.sort(np.abs(np.diff(x)))[1:-1]
        assert_allclose(z[-1], 1000.0 + devs.mean(), rtol=1e-14)

    @given(series_strategy)
    @settings(max_examples=100, deadline=None)
    def test_bounds_and_monotone(self, x):
        z = me_intermediate_points(x)
        assert z.size == x.size + 1
        assert z[0] <= x.min() and z[-1] >= x.max()
        assert np.all(np.diff(z) >= 0)

    def test_needs_two_values(self):
        with pytest.raises(ValueError, match="two values"):
            me_intermediate_points(np.array([1.0]))


class TestIntervalMeans:
    def test_hand_example(self):
        m = me_interval_means(np.array([4.0, 8.0, 12.0, 20.0]))
        assert_allclose(m, [5.0, 8.0, 13.0, 18.0], rtol=1e-15)

    @given(series_strategy)
    @settings(max_examples=100, deadline=None)
    def test_mean_preserved_within_bound(self, x):
        order_stats = np.sort(x)
        m = me_interval_means(order_stats)
        bound = (order_stats[-1] - order_stats[0]) / x.size
        assert abs(m.mean() - x.mean()) <= bound + 1e-9 * max(1.0, abs(x).max())


class TestReplicate:
    def test_constant_series_fixed_point(self):
        x = np.full(9, 3.25)
        rep = meboot_replicate(x, MebootSpec(), np.random.default_rng(0))
        assert np.array_equal(rep, x)

    def test_rank_preservation_distinct(self):
        rng = np.random.default_rng(1)
        x = rng.standard_normal(50)
        rep = meboot_replicate(x, MebootSpec(), rng)
        assert np.array_equal(np.argsort(rep), np.argsort(x))

    def test_spearman_one(self):
        from scipy.stats import spearmanr

        rng = np.random.default_rng(2)
        x = rng.standard_normal(30)
        rep = meboot_replicate(x, MebootSpec(), rng)
        assert spearmanr(x, rep).statistic == 1.0

    def test_ties_use_stable_first_occurrence_order(self):
        x = np.array([2.0, 1.0, 2.0, 1.0, 3.0])
        rep = meboot_replicate(x, MebootSpec(adjust_variance=False), np.random.default_rng(3))
        order = np.argsort(x, kind="stable")
        assert np.all(np.diff(rep[order]) >= 0)

    @given(series_strategy, st.integers(min_value=0, max_value=2**32 - 1))
    @settings(max_examples=60, deadline=None)
    def test_containment_before_adjustment(self, x, seed):
        z = me_intermediate_points(x)
        rep = meboot_replicate(
            x, MebootSpec(adjust_variance=False), np.random.default_rng(seed)
        )
        assert np.all(rep >= z[0] - 1e-12 * max(1.0, abs(z[0])))
        assert np.all(rep <= z[-1] + 1e-12 * max(1.0, abs(z[-1])))

    def test_variance_adjustment_is_scale_about_mean(self):
        rng_a = np.random.default_rng(4)
        rng_b = np.random.default_rng(4)
        x = np.random.default_rng(5).standard_normal(25)
        raw = meboot_replicate(x, MebootSpec(adjust_variance=False), rng_a)
        adj = meboot_replicate(x, MebootSpec(adjust_variance=True), rng_b)
        dev_raw = raw - x.mean()
        dev_adj = adj - x.mean()
        mask = np.abs(dev_raw) > 1e-12
        ratios = dev_adj[mask] / dev_raw[mask]
        assert ratios.std() < 1e-10
        assert ratios[0] > 0

    def test_monte_carlo_mean_preservation(self):
        x = np.random.default_rng(6).standard_normal(20)
        reps = meboot_ensemble(x, MebootSpec(n_replicates=2000), seed=7)
        bound = 15.0 * x.std(ddof=1) / np.sqrt(20 * 2000)
        assert abs(reps.mean() - x.mean()) < bound

    def test_tracks_serial_dependence(self):
        # AR(1) series: replicate lag-1 autocorrelation should stay near the
        # sample's own, since ranks are reproduced exactly.
        rng = np.random.default_rng(8)
        x = np.empty(200)
        x[0] = rng.standard_normal()
        for i in range(1, 200):
            x[i] = 0.7 * x[i - 1] + rng.standard_normal()
        sample_ac = lag1_autocorr(x)
        reps = meboot_ensemble(x, MebootSpec(n_replicates=500), seed=9)
        rep_ac = np.median([lag1_autocorr(r) for r in reps])
        assert abs(rep_ac - sample_ac) < 0.15


class TestEnsemble:
    def test_deterministic_given_seed(self):
        x = np.random.default_rng(10).standard_normal(15)
        spec = MebootSpec(n_replicates=8)
        a = meboot_ensemble(x, spec, seed=11)
        b = meboot_ensemble(x, spec, seed=11)
        assert np.array_equal(a, b)

    def test_distinct_replicates(self):
        x = np.random.default_rng(12).standard_normal(15)
        reps = meboot_ensemble(x, MebootSpec(n_replicates=5), seed=13)
        assert len({r.tobytes() for r in reps}) == 5

    def test_replicates_independent_of_generation_order(self):
        # Generating each row from its own spawned stream out of order must
        # reproduce the sequential ensemble exactly.
        x = np.random.default_rng(14).standard_normal(12)
        spec = MebootSpec(n_replicates=6)
        seq = meboot_ensemble(x, spec, seed=15)
        children = np.random.SeedSequence(15).spawn(6)
        rows = [None] * 6
        for b in reversed(range(6)):
            rows[b] = meboot_replicate(x, spec, np.random.default_rng(children[b]))
        assert np.array_equal(np.stack(rows), seq)

    def test_spec_validation(self):
        with pytest.raises(ValueError, match="trim_proportion"):
            MebootSpec(trim_proportion=0.5)
        with pytest.raises(ValueError, match="n_replicates"):
            MebootSpec(n_replicates=0)
