"""Tests for the photon-counting emulator, estimators, and aggregation."""

import math
import warnings

import numpy as np
import pytest

from ysqht import (
    AcquisitionConfig,
    EstimationError,
    NoiseParams,
    acquire_iteration,
    aggregate,
    aggregation_seed,
    detection_probability,
    estimate_ratios,
    point_seed,
    run_acquisition,
    sample_alpha,
    simulate_delta_sweep,
    simulate_gamma2_sweep,
)

THETA_B = 5.0 * math.pi / 36.0
DELTA_FIG2 = 2.0 * math.pi / 9.0

# Frozen analytic values (direct evaluation of the closed forms).
Q1 = 0.8213938048432696
Q2_FIG2 = 0.6212544747469197
Q2_OVER_P2_FIG2 = 0.902148945883963
Q_OVER_P_AT_0P7 = 1.086730351349884


def config(**kwargs):
    defaults = dict(theta=THETA_B, noise=NoiseParams(DELTA_FIG2), seed=1)
    defaults.update(kwargs)
    return AcquisitionConfig(**defaults)


class TestDetectionProbability:
    def test_aligned_modulator_always_passes(self):
        assert detection_probability(0.0) == 1.0

    def test_crossed_setting_never_passes(self):
        assert detection_probability(math.pi) == 0.0

    def test_tilted_setting_matches_clean_probe(self):
        assert detection_probability(2.0 * THETA_B) == pytest.approx(
            Q1, abs=1e-15
        )

    def test_rejects_non_finite(self):
        with pytest.raises(ValueError):
            detection_probability(math.nan)


class TestSampleAlpha:
    def test_zero_spread_is_exactly_zero(self):
        rng = np.random.default_rng(0)
        assert sample_alpha(rng, NoiseParams(0.0)) == 0.0

    def test_moments_match_spread(self):
        rng = np.random.default_rng(101)
        noise = NoiseParams(0.5)
        draws = np.array([sample_alpha(rng, noise) for _ in range(100_000)])
        assert abs(draws.mean()) < 0.01            # ~6 standard errors
        assert abs(draws.std(ddof=1) - 0.5) < 0.005


class TestAcquisitionConfig:
    def test_rejects_zero_iterations(self):
        with pytest.raises(ValueError, match="iterations"):
            config(iterations=0)

    def test_rejects_bad_seed(self):
        with pytest.raises(ValueError, match="seed"):
            config(seed=-1)

    def test_rejects_non_positive_rate(self):
        with pytest.raises(ValueError, match="positive"):
            config(mean_rate=0.0)

    def test_warns_on_low_counts(self):
        with pytest.warns(UserWarning, match="ill-conditioned"):
            config(mean_rate=10.0)


class TestAcquireIteration:
    def test_shared_tilt_draw(self):
        # A scripted generator proves that n2p and n2q see the same alpha
        # and that exactly one tilt is drawn per iteration.
        class ScriptedRng:
            def __init__(self, alpha):
                self.alpha = alpha
                self.normal_calls = 0

            def normal(self, loc, scale):
                self.normal_calls += 1
                return self.alpha

            def poisson(self, lam):
                return int(round(lam))

        alpha = 0.3
        rng = ScriptedRng(alpha)
        cfg = config()
        record = acquire_iteration(rng, cfg, index=4)
        lam = cfg.expected_counts
        assert rng.normal_calls == 1
        assert record.iteration == 4
        assert record.alpha == alpha
        assert record.n1p == round(lam)
        assert record.n1q == round(lam * detection_probability(2 * THETA_B))
        assert record.n2p == round(lam * detection_probability(-2 * alpha))
        assert record.n2q == round(
            lam * detection_probability(2 * (THETA_B - alpha))
        )

    def test_no_noise_no_tilt_all_counts_equal_rate(self):
        cfg = config(theta=0.0, noise=NoiseParams(0.0), seed=8)
        rng = np.random.default_rng(cfg.seed)
        lam = cfg.expected_counts
        totals = np.zeros(4)
        n = 300
        for i in range(n):
            r = acquire_iteration(rng, cfg, i)
            totals += (r.n1p, r.n1q, r.n2p, r.n2q)
        # all four settings sit at phase 0, so each total is Poisson(n*lam)
        for total in totals:
            assert abs(total - n * lam) < 6.0 * math.sqrt(n * lam)


class TestRunAcquisition:
    def test_record_count_and_indexing(self):
        records = run_acquisition(config(iterations=50))
        assert len(records) == 50
        assert [r.iteration for r in records] == list(range(50))

    def test_bitwise_reproducible(self):
        assert run_acquisition(config()) == run_acquisition(config())

    def test_different_seeds_differ(self):
        a = run_acquisition(config(seed=1))
        b = run_acquisition(config(seed=2))
        assert a != b

    def test_count_bookkeeping(self):
        records = run_acquisition(config(seed=3))
        lam = 1e4
        total = sum(r.n1p + r.n1q + r.n2p + r.n2q for r in records)
        # mean probabilities: 1, q1, p2, q2
        expected = 200 * lam * (1.0 + Q1 + 0.6886384754772271 + Q2_FIG2)
        assert abs(total - expected) / expected < 0.1


class TestEstimateRatios:
    def test_clean_probe_ratio(self):
        cfg = config(noise=NoiseParams(0.0), seed=5, iterations=3000)
        summary = estimate_ratios(run_acquisition(cfg))
        assert abs(summary.q1_over_p1.value - Q1) <= (
            4.0 * summary.q1_over_p1.std_error
        )

    def test_no_noise_normalization_is_unity(self):
        cfg = config(noise=NoiseParams(0.0), seed=5)
        summary = estimate_ratios(run_acquisition(cfg))
        assert abs(summary.p2.value - 1.0) <= 3.0 * summary.p2.std_error

    def test_noisy_probe_ratio(self):
        cfg = config(seed=6, iterations=4000)
        summary = estimate_ratios(run_acquisition(cfg))
        assert abs(summary.q2.value - Q2_FIG2) <= 4.0 * summary.q2.std_error

    def test_derived_ratio_at_figure_point(self):
        summary = estimate_ratios(run_acquisition(config(seed=1)))
        assert abs(summary.q2_over_p2.value - Q2_OVER_P2_FIG2) <= (
            3.0 * summary.q2_over_p2.std_error
        )

    def test_poisson_cross_check_present(self):
        summary = estimate_ratios(run_acquisition(config(seed=1)))
        for est in (summary.q1_over_p1, summary.p2, summary.q2,
                    summary.q2_over_p2):
            assert est.poisson_error is not None
            assert est.poisson_error > 0.0

    def test_two_seeds_agree_within_combined_errors(self):
        a = estimate_ratios(run_acquisition(config(seed=1)))
        b = estimate_ratios(run_acquisition(config(seed=2)))
        assert a.q2_over_p2.value != b.q2_over_p2.value
        combined = math.hypot(
            a.q2_over_p2.std_error, b.q2_over_p2.std_error
        )
        assert abs(a.q2_over_p2.value - b.q2_over_p2.value) <= 3.0 * combined

    def test_consistency_improves_with_rate(self):
        previous_error = math.inf
        for rate in (1e3, 1e4, 1e5):
            with warnings.catch_warnings():
                warnings.simplefilter("ignore")
                cfg = config(noise=NoiseParams(0.0), seed=9, mean_rate=rate)
            summary = estimate_ratios(run_acquisition(cfg))
            assert abs(summary.p2.value - 1.0) <= max(
                4.0 * summary.p2.std_error, 1e-6
            )
            assert abs(summary.p2.value - 1.0) <= 0.5 / math.sqrt(rate)
            assert summary.p2.std_error < previous_error
            previous_error = summary.p2.std_error

    def test_excludes_vanished_normalization(self):
        with pytest.warns(UserWarning):
            cfg = config(noise=NoiseParams(0.0), seed=12, mean_rate=0.5)
        records = run_acquisition(cfg)
        summary = estimate_ratios(records)
        assert summary.excluded > 0
        assert summary.q1_over_p1.n_samples == 200 - summary.excluded
        agg = aggregate(records, 0.5, 0.5, mode="expected")
        assert agg.excluded == summary.excluded
        assert agg.p.n_samples == 200 - summary.excluded

    def test_all_excluded_raises(self):
        with pytest.warns(UserWarning):
            cfg = config(
                noise=NoiseParams(0.0), seed=4, iterations=5, mean_rate=1e-6
            )
        with pytest.raises(EstimationError, match="n1p = 0"):
            estimate_ratios(run_acquisition(cfg))

    def test_empty_records_raise(self):
        with pytest.raises(EstimationError):
            estimate_ratios([])


class TestAggregate:
    def test_degenerate_weights_reduce_to_clean_ratio(self):
        records = run_acquisition(config(seed=1))
        summary = estimate_ratios(records)
        for mode, rng in (
            ("expected", None),
            ("stochastic", np.random.default_rng(0)),
        ):
            agg = aggregate(records, 1.0, 1.0, rng, mode)
            assert agg.p.value == 1.0
            assert agg.p.std_error == 0.0
            assert agg.q_over_p.value == summary.q1_over_p1.value
            assert agg.q_over_p.std_error == summary.q1_over_p1.std_error

    def test_expected_mode_hits_reversal_point(self):
        cfg = config(noise=NoiseParams(0.7), seed=2)
        agg = aggregate(run_acquisition(cfg), 0.1, 0.8, mode="expected")
        assert agg.q_over_p.value > 1.0
        assert abs(agg.q_over_p.value - Q_OVER_P_AT_0P7) <= (
            3.0 * agg.q_over_p.std_error
        )

    def test_stochastic_matches_expected_with_more_spread(self):
        records = run_acquisition(config(noise=NoiseParams(0.7), seed=2))
        expected = aggregate(records, 0.1, 0.8, mode="expected")
        stochastic = aggregate(
            records, 0.1, 0.8, np.random.default_rng(77), "stochastic"
        )
        combined = math.hypot(
            expected.q_over_p.std_error, stochastic.q_over_p.std_error
        )
        assert abs(
            stochastic.q_over_p.value - expected.q_over_p.value
        ) <= 3.0 * combined
        # Bernoulli selection adds variance on top of the count noise.
        assert stochastic.p.std_error >= expected.p.std_error
        assert stochastic.q.std_error >= expected.q.std_error
        assert stochastic.q_over_p.std_error >= expected.q_over_p.std_error

    def test_stochastic_mode_reproducible(self):
        records = run_acquisition(config(seed=1))
        a = aggregate(records, 0.1, 0.8, np.random.default_rng(5), "stochastic")
        b = aggregate(records, 0.1, 0.8, np.random.default_rng(5), "stochastic")
        assert a == b

    def test_expected_mode_unbiased_across_seeds(self):
        values = []
        for seed in range(300, 400):
            cfg = config(noise=NoiseParams(0.7), seed=seed)
            agg = aggregate(run_acquisition(cfg), 0.1, 0.8, mode="expected")
            values.append(agg.q_over_p.value)
        values = np.array(values)
        standard_error = values.std(ddof=1) / math.sqrt(len(values))
        assert abs(values.mean() - Q_OVER_P_AT_0P7) <= 3.0 * standard_error

    def test_stochastic_without_rng_rejected(self):
        records = run_acquisition(config(seed=1))
        with pytest.raises(ValueError, match="generator"):
            aggregate(records, 0.1, 0.8, None, "stochastic")

    def test_bad_mode_rejected(self):
        records = run_acquisition(config(seed=1))
        with pytest.raises(ValueError, match="mode"):
            aggregate(records, 0.1, 0.8, None, "weighted")

    def test_bad_weights_rejected(self):
        records = run_acquisition(config(seed=1))
        with pytest.raises(ValueError):
            aggregate(records, 1.5, 0.5, None, "expected")


class TestSweepSeeds:
    def test_point_seeds_distinct(self):
        seeds = {point_seed(1, i) for i in range(200)}
        assert len(seeds) == 200

    def test_first_point_uses_base_seed(self):
        assert point_seed(1234, 0) == 1234

    def test_aggregation_seed_differs_from_acquisition(self):
        assert aggregation_seed(1234) != 1234
        assert aggregation_seed(1234, 0) != aggregation_seed(1234, 1)


class TestSimulatedSweeps:
    GRID = [0.0, 0.3, 0.7, 1.0]

    def test_delta_sweep_reproducible(self):
        base = config(noise=NoiseParams(0.0), seed=21)
        a = simulate_delta_sweep(base, self.GRID, [0.1], 0.8)
        b = simulate_delta_sweep(base, self.GRID, [0.1], 0.8)
        assert a == b

    def test_delta_sweep_point_isolated_rerun(self):
        base = config(noise=NoiseParams(0.0), seed=21)
        sweep = simulate_delta_sweep(base, self.GRID, [0.1], 0.8)
        point = sweep.points[2]
        cfg = config(noise=NoiseParams(self.GRID[2]), seed=point.seed)
        summary = estimate_ratios(run_acquisition(cfg))
        assert summary.q2_over_p2 == point.q2_over_p2

    def test_delta_sweep_first_column_stable_under_extra_gamma1(self):
        base = config(noise=NoiseParams(0.0), seed=21)
        single = simulate_delta_sweep(base, self.GRID, [0.1], 0.8)
        double = simulate_delta_sweep(base, self.GRID, [0.1, 0.4], 0.8)
        for a, b in zip(single.points, double.points):
            assert a.q_over_p[0] == b.q_over_p[0]

    def test_gamma2_sweep_shapes(self):
        base = config(seed=22)
        sweep = simulate_gamma2_sweep(
            base, [0.0, 0.5, 1.0], [0.05, 0.4]
        )
        assert len(sweep.points) == 3
        for point in sweep.points:
            assert len(point.q_over_p) == 2
