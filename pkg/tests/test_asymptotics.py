"""Tests for copy-count search, rate curves, and error-exponent sweeps."""

import math

import numpy as np
import pytest

from dichotomies.asymptotics import (ExperimentConfig, NearCriticalError,
                                     achievable_m, check_sequence_condition,
                                     critical_rate, error_exponent_sweep,
                                     rate_curve, records_to_csv)
from dichotomies.states import (DensityMatrix, Dichotomy, Metric,
                                ValidationError, classical_dichotomy,
                                random_density)

SRC = classical_dichotomy([0.9, 0.1], [0.5, 0.5])
DST = classical_dichotomy([0.75, 0.25], [0.5, 0.5])
CSV_HEADER = "n,m,rate,eps1,eps2,achieved_error,certified,dh_bits,dmax_bits"


class TestAchievableM:
    def test_small_block_counts(self):
        m = achievable_m(SRC, DST, n=4, eps_total=0.1)
        assert isinstance(m, int)
        assert m >= 1

    def test_trivial_target_is_unbounded(self):
        gamma = DensityMatrix(np.diag([0.6, 0.4]))
        m = achievable_m(SRC, Dichotomy(gamma, gamma), n=2, eps_total=0.1)
        assert m == math.inf

    def test_unreachable_target_gives_zero(self):
        weak = classical_dichotomy([0.55, 0.45], [0.5, 0.5])
        strong = classical_dichotomy([0.99, 0.01], [0.5, 0.5])
        assert achievable_m(weak, strong, n=1, eps_total=0.01) == 0

    @pytest.mark.parametrize("n", [0, -3])
    def test_copy_count_domain(self, n):
        with pytest.raises(ValidationError, match="n >= 1"):
            achievable_m(SRC, DST, n=n, eps_total=0.1)

    @pytest.mark.parametrize("eps", [0.0, 1.0, -0.5])
    def test_budget_domain(self, eps):
        with pytest.raises(ValidationError, match="lie in"):
            achievable_m(SRC, DST, n=2, eps_total=eps)

    @pytest.mark.parametrize("n", [2, 4, 6])
    def test_fast_path_matches_matrix_path(self, n):
        fast = achievable_m(SRC, DST, n=n, eps_total=0.1, use_fast_path=True)
        full = achievable_m(SRC, DST, n=n, eps_total=0.1, use_fast_path=False)
        assert fast == full

    def test_rates_converge_from_below(self):
        crit = critical_rate(SRC, DST)
        assert abs(crit - 2.81368763) < 1e-6
        r1000 = achievable_m(SRC, DST, n=1000, eps_total=0.1) / 1000
        r4000 = achievable_m(SRC, DST, n=4000, eps_total=0.1) / 4000
        assert 2.2 <= r1000 <= 2.45
        assert r4000 > r1000
        assert r4000 < crit


class TestRateCurve:
    def test_records_and_csv(self):
        cfg = ExperimentConfig(SRC, DST, eps_total=0.1, n_max=8, points=5)
        records = rate_curve(cfg)
        assert [r.n for r in records] == sorted({r.n for r in records})
        assert all(r.rate == r.m / r.n for r in records)
        assert all(r.dh_bits >= r.dmax_bits - 1e-9 for r in records
                   if r.m >= 1)
        text = records_to_csv(records)
        lines = text.strip().splitlines()
        assert lines[0] == CSV_HEADER
        assert len(lines) == len(records) + 1
        first = lines[1].split(",")
        assert len(first) == 9
        assert int(first[0]) == records[0].n

    def test_small_blocks_are_verified(self):
        cfg = ExperimentConfig(SRC, DST, eps_total=0.1, n_max=4, points=4,
                               verify_dim_cap=16)
        records = rate_curve(cfg)
        measured = [r for r in records if not math.isnan(r.achieved_error)]
        assert measured, "expected at least one synthesized-and-measured block"
        for r in measured:
            assert r.achieved_error <= r.certified + 1e-9

    def test_config_validation(self):
        with pytest.raises(ValidationError, match="eps_total"):
            ExperimentConfig(SRC, DST, eps_total=1.5)
        with pytest.raises(ValidationError, match="eps_split"):
            ExperimentConfig(SRC, DST, eps_split=0.0)


class TestErrorExponentSweep:
    def test_decay_regime_has_negative_slope(self):
        cfg = ExperimentConfig(SRC, DST, n_min=200, n_max=2000, points=10)
        result = error_exponent_sweep(cfg, rate=2.0)
        assert result.regime == "error_decay"
        assert result.exponent_bits_per_copy > 0.003
        assert result.fit_r2 >= 0.99
        errs = [r.certified for r in result.records]
        assert errs[-1] < errs[0]

    def test_strong_converse_success_dies(self):
        cfg = ExperimentConfig(SRC, DST, n_min=200, n_max=2000, points=10)
        result = error_exponent_sweep(cfg, rate=3.5)
        assert result.regime == "strong_converse"
        assert 1.0 < result.exponent_bits_per_copy < 1.2
        assert result.fit_r2 >= 0.99
        assert result.floor_hits == 0
        assert all(r.certified > 0.8 for r in result.records[-3:])

    def test_deep_decay_drives_error_tiny(self):
        cfg = ExperimentConfig(SRC, DST, n_min=1000, n_max=1000, points=1)
        result = error_exponent_sweep(cfg, rate=0.5)
        assert result.records
        assert result.records[-1].certified <= 1e-6

    def test_near_critical_refused(self):
        cfg = ExperimentConfig(SRC, DST, n_min=10, n_max=20, points=2)
        crit = critical_rate(SRC, DST)
        with pytest.raises(NearCriticalError) as err:
            error_exponent_sweep(cfg, rate=crit * 1.01)
        assert err.value.rate == pytest.approx(crit * 1.01)
        assert err.value.critical == pytest.approx(crit)
        assert "critical" in str(err.value)

    def test_rate_domain(self):
        cfg = ExperimentConfig(SRC, DST, n_min=10, n_max=20, points=2)
        with pytest.raises(ValidationError, match="rate must be positive"):
            error_exponent_sweep(cfg, rate=0.0)

    def test_requires_binary_classical(self):
        qsrc = Dichotomy(random_density(2, seed=1),
                         DensityMatrix(np.eye(2) / 2))
        cfg = ExperimentConfig(qsrc, DST, n_min=10, n_max=20, points=2)
        with pytest.raises(ValidationError, match="binary classical"):
            error_exponent_sweep(cfg, rate=1.0)

    def test_purified_metric_rejected_for_sweeps(self):
        cfg = ExperimentConfig(SRC, DST, n_min=10, n_max=20, points=2,
                               metric=Metric.PURIFIED)
        with pytest.raises(ValidationError, match="trace"):
            error_exponent_sweep(cfg, rate=2.0)


class TestSequenceCondition:
    def test_feasible_below_critical(self):
        cond = check_sequence_condition(SRC, DST, rate=2.0)
        assert cond.feasible
        assert cond.kappa_bits > 0.0
        assert cond.decay_hint_bits > 0.0
        assert 0.0 < cond.delta < 1.0
        assert len(cond.grid) >= 10

    def test_infeasible_above_critical(self):
        cond = check_sequence_condition(SRC, DST, rate=3.5)
        assert not cond.feasible
        assert cond.kappa_bits <= 0.0
        assert cond.decay_hint_bits == 0.0

    def test_self_conversion_at_unit_rate_is_borderline(self):
        cond = check_sequence_condition(SRC, SRC, rate=1.0)
        assert not cond.feasible

    def test_rate_domain(self):
        with pytest.raises(ValidationError, match="positive"):
            check_sequence_condition(SRC, DST, rate=-1.0)
