import math
import random
import warnings

import numpy as np
import pytest

from xilab import (ExperimentConfig, MultiplierSet, SurvivalCurve,
                   ValidationError, default_horizons, merge, run_experiment,
                   track_pair, wilson_interval)
from xilab.engine import collision_steps, lockstep_pair_points

from oracles import brute_first_collision, brute_wedge_collision


def cfg_for(spec="points:1", **kw):
    from xilab import parse_set_spec
    defaults = dict(multiplier=parse_set_spec(spec), max_steps=64,
                    n_samples=500, seed=3, offset=2)
    defaults.update(kw)
    return ExperimentConfig(**defaults)


class TestConfig:
    def test_default_horizons_ladder(self):
        assert default_horizons(10_000) == (16, 32, 64, 128, 256, 512, 1024,
                                            2048, 4096, 8192, 10_000)
        assert default_horizons(16) == (16,)
        assert default_horizons(1) == (1,)

    def test_zero_samples_rejected(self):
        with pytest.raises(ValidationError):
            cfg_for(n_samples=0)

    def test_bad_horizons_rejected(self):
        with pytest.raises(ValidationError):
            cfg_for(horizons=(8, 4))
        with pytest.raises(ValidationError):
            cfg_for(horizons=(8, 128))  # beyond max_steps=64

    def test_arc_not_simulatable(self):
        with pytest.raises(ValidationError):
            ExperimentConfig(multiplier=MultiplierSet.arc(0.3), max_steps=8,
                             n_samples=1, seed=0)

    def test_default_offset_is_one(self):
        assert cfg_for(offset=None).offset == 1

    def test_overflow_guard(self):
        with pytest.raises(ValidationError):
            cfg_for(spec="points:40000", max_steps=100_000)


class TestOneStepEnumeration:
    def test_exact_probability_over_16_outcomes(self):
        # A={1}, a=2, one step each: enumerate all 16 direction pairs
        from test_collision import walk_from_dirs  # same helpers
        ms = MultiplierSet.from_points("1")
        survive = 0
        for d1 in range(4):
            for d2 in range(4):
                p1 = walk_from_dirs_local(d1, 0)
                p2 = walk_from_dirs_local(d2, 2)
                if brute_first_collision(p1, p2, ms.points) is None:
                    survive += 1
        expected = survive / 16
        assert expected == 15 / 16  # only the (east, west) pair collides

        cfg = cfg_for("points:1", max_steps=1, n_samples=4096, seed=5,
                      horizons=(1,))
        curve = run_experiment(cfg)
        p_hat = curve.survivors[0] / curve.total_samples
        sigma = math.sqrt(expected * (1 - expected) / cfg.n_samples)
        assert abs(p_hat - expected) <= 4 * sigma

    def test_single_sample_counts(self):
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")  # a lone dead sample may warn
            curve = run_experiment(cfg_for(n_samples=1, seed=8))
        assert all(s in (0, 1) for s in curve.survivors)


def walk_from_dirs_local(direction, offset):
    from xilab import LatticePoint
    deltas = [LatticePoint(1, 0), LatticePoint(0, 1),
              LatticePoint(-1, 0), LatticePoint(0, -1)]
    start = LatticePoint(offset, 0)
    return [start, start + deltas[direction]]


class TestKernelEquivalence:
    @pytest.mark.parametrize("spec", ["points:1", "points:1,-1", "points:1,0+1i"])
    def test_kernel_matches_python_tracker_and_brute(self, spec):
        cfg = cfg_for(spec, max_steps=50, n_samples=64, seed=17)
        steps = collision_steps(cfg)
        for i in range(cfg.n_samples):
            p1, p2 = lockstep_pair_points(cfg.seed, i, cfg.max_steps, cfg.offset)
            state = track_pair(p1, p2, cfg.multiplier)
            expected = state.first_collision_step
            oracle = brute_first_collision(p1, p2, cfg.multiplier.points)
            assert expected == oracle
            got = None if steps[i] < 0 else int(steps[i])
            assert got == expected, f"sample {i}"

    def test_survivors_consistent_with_steps(self):
        cfg = cfg_for("points:1,-1", max_steps=64, n_samples=2000, seed=2)
        curve = run_experiment(cfg)
        steps = collision_steps(cfg)
        for T, s in zip(curve.horizons, curve.survivors):
            assert s == int(np.sum((steps < 0) | (steps > T)))

    def test_wedge_kernel_sandwich(self):
        alpha = 1.2
        binw = 2 * math.pi / (1 << 16)
        cfg = ExperimentConfig(multiplier=MultiplierSet.wedge(alpha),
                               max_steps=40, n_samples=80, seed=11, offset=1)
        steps = collision_steps(cfg)
        for i in range(cfg.n_samples):
            p1, p2 = lockstep_pair_points(cfg.seed, i, cfg.max_steps, cfg.offset)
            strict = brute_wedge_collision(p1, p2, alpha / 2)
            wide = brute_wedge_collision(p1, p2, alpha / 2 + 2 * binw)
            got = None if steps[i] < 0 else int(steps[i])
            if strict is not None:
                assert got is not None and got <= strict
            if got is not None:
                assert wide is not None and wide <= got


class TestDeterminism:
    def test_worker_count_invariance(self):
        base = cfg_for("points:1,-1", max_steps=256, n_samples=20_000, seed=13)
        c1 = run_experiment(base)
        c2 = run_experiment(cfg_for("points:1,-1", max_steps=256,
                                    n_samples=20_000, seed=13, workers=2))
        c4 = run_experiment(cfg_for("points:1,-1", max_steps=256,
                                    n_samples=20_000, seed=13, workers=4))
        assert c1.survivors == c2.survivors == c4.survivors

    def test_monotone_survivors(self):
        curve = run_experiment(cfg_for("points:1", max_steps=512,
                                       n_samples=5000, seed=21))
        assert all(a >= b for a, b in zip(curve.survivors, curve.survivors[1:]))


class TestMerge:
    def test_merge_identity(self):
        curve = run_experiment(cfg_for(seed=4))
        merged = merge([curve])
        assert merged.survivors == curve.survivors
        assert merged.total_samples == curve.total_samples

    def test_halves_equal_whole(self):
        # disjoint sample-index halves of one seed == the full run
        whole = run_experiment(cfg_for("points:1,-1", n_samples=2000, seed=6))
        lo = run_experiment(cfg_for("points:1,-1", n_samples=1000, seed=6))
        hi = run_experiment(cfg_for("points:1,-1", n_samples=1000, seed=6,
                                    sample_offset=1000))
        merged = merge([lo, hi])
        assert merged.survivors == whole.survivors
        assert merged.total_samples == whole.total_samples

    def test_mismatched_horizons_rejected(self):
        a = run_experiment(cfg_for(seed=1, max_steps=64))
        b = run_experiment(cfg_for(seed=1, max_steps=32))
        with pytest.raises(ValidationError):
            merge([a, b])

    def test_empty_merge_rejected(self):
        with pytest.raises(ValidationError):
            merge([])


class TestCurveValidation:
    def test_non_monotone_rejected(self):
        with pytest.raises(ValidationError):
            SurvivalCurve(horizons=(1, 2), survivors=(5, 7), total_samples=10,
                          seeds=(0,), set_descriptor="points:1", max_steps=2,
                          offset=1)

    def test_zero_survival_warns(self):
        # a huge wedge collides immediately: every sample dies before T=16
        cfg = ExperimentConfig(multiplier=MultiplierSet.wedge(6.2),
                               max_steps=16, n_samples=200, seed=0, offset=1)
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always")
            curve = run_experiment(cfg)
        assert curve.survivors[0] == 0
        assert any("no sample survived" in str(w.message) for w in caught)


class TestWilson:
    def test_coverage_bounds(self):
        lo, hi = wilson_interval(0, 100)
        assert lo == pytest.approx(0.0, abs=1e-12) and 0 < hi < 0.05
        lo, hi = wilson_interval(100, 100)
        assert hi == pytest.approx(1.0, abs=1e-12) and 0.95 < lo < 1
        lo, hi = wilson_interval(50, 100)
        assert lo < 0.5 < hi

    def test_against_normal_approx_large_n(self):
        n, k = 10**6, 10**5
        lo, hi = wilson_interval(k, n)
        p = k / n
        half = 1.959963984540054 * math.sqrt(p * (1 - p) / n)
        assert lo == pytest.approx(p - half, abs=1e-5)
        assert hi == pytest.approx(p + half, abs=1e-5)
