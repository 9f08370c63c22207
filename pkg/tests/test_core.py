import math

import numpy as np
import pytest

from nsopt.core import (
    TREND_CONVERGED,
    TREND_DIV_MINUS,
    TREND_DIV_PLUS,
    TREND_INCONCLUSIVE,
    TREND_OSCILLATING,
    SampleSchedule,
    estimate_liminf,
    extrapolate_limit,
    label_trend,
)
from nsopt.errors import ConfigurationError, DomainArithmeticError

U1 = np.array([1.0])
U2 = np.array([1.0, 0.0])


def test_schedule_validation():
    with pytest.raises(ConfigurationError):
        SampleSchedule(stages=2)
    with pytest.raises(ConfigurationError):
        SampleSchedule(t_ratio=1.0)
    with pytest.raises(ConfigurationError):
        SampleSchedule(eps_ratio=0.0)
    with pytest.raises(ConfigurationError):
        SampleSchedule(t0=-0.1)


def test_constant_quotient(schedule):
    est = estimate_liminf(lambda t, u: 5.0, U1, schedule)
    assert est.value == 5.0
    assert est.limit == 5.0
    assert est.trend == TREND_CONVERGED


def test_one_over_t_diverges(schedule):
    est = estimate_liminf(lambda t, u: 1.0 / t, U1, schedule)
    assert est.trend == TREND_DIV_PLUS
    assert est.limit == math.inf
    # stage minima track 1/tau_j: the infimum of 1/t on (tau_{j+1}, tau_j]
    for j, v in enumerate(est.stage_infima):
        assert v == pytest.approx(1.0 / schedule.tau(j), rel=1e-12)


def test_sin_one_over_t_dense_matches_sweep_oracle():
    sched = SampleSchedule(t0=0.01, stages=5, samples_per_stage=20000)
    est = estimate_liminf(lambda t, u: math.sin(1.0 / t), U1, sched)
    # independent oracle: dense sweep over the final-stage annulus
    lo, hi = sched.tau(sched.stages), sched.tau(sched.stages - 1)
    ts = np.exp(np.linspace(math.log(lo), math.log(hi), 10**6))
    oracle_min = float(np.min(np.sin(1.0 / ts)))
    assert oracle_min == pytest.approx(-1.0, abs=1e-4)
    assert est.trend == TREND_CONVERGED
    assert est.value == pytest.approx(oracle_min, abs=2e-3)


def test_nestedness_same_seed(schedule):
    q = lambda t, u: t * float(u @ u)
    base = estimate_liminf(q, U2, schedule)
    longer = estimate_liminf(q, U2, schedule.with_(stages=schedule.stages + 1))
    assert longer.stage_infima[: schedule.stages] == base.stage_infima


def test_hint_dominance(schedule):
    q = lambda t, u: t + float(np.linalg.norm(u - U2))
    base = estimate_liminf(q, U2, schedule)
    t_hint = schedule.tau(schedule.stages) / 10  # below every sampled step
    hinted = estimate_liminf(q, U2, schedule, hints=[(t_hint, U2)])
    assert hinted.value <= base.value
    assert hinted.value == pytest.approx(t_hint, rel=1e-12)


def test_out_of_ball_hints_ignored(schedule):
    q = lambda t, u: float(u @ u)
    far = (schedule.tau(schedule.stages) / 2, np.array([1e-9, 0.0]))
    hinted = estimate_liminf(q, U2, schedule, hints=[far])
    assert hinted.n_hints_used == 0
    assert hinted.value > 0.9


def test_refinement_lowers_stage_minima(schedule):
    q = lambda t, u: t + abs(u[1])
    small = estimate_liminf(q, U2, schedule.with_(samples_per_stage=16))
    big = estimate_liminf(q, U2, schedule.with_(samples_per_stage=32))
    for a, b in zip(small.stage_infima, big.stage_infima):
        assert b <= a + 1e-15


def test_determinism(schedule):
    q = lambda t, u: t * u[0] + u[1] ** 2
    a = estimate_liminf(q, U2, schedule)
    b = estimate_liminf(q, U2, schedule)
    assert a.stage_infima == b.stage_infima
    assert a.value == b.value


def test_seed_changes_samples(schedule):
    # wiggly quotient: minima land on random draws, not the edge probes
    q = lambda t, u: t + math.cos(50.0 * u[1])
    a = estimate_liminf(q, U2, schedule)
    b = estimate_liminf(q, U2, schedule.with_(seed=1))
    assert a.stage_infima != b.stage_infima


def test_nan_sampler_raises(schedule):
    with pytest.raises(DomainArithmeticError):
        estimate_liminf(lambda t, u: float("nan"), U1, schedule)


def test_all_inf_labeled_diverging(schedule):
    est = estimate_liminf(lambda t, u: math.inf, U1, schedule)
    assert est.trend == TREND_DIV_PLUS
    assert est.value == math.inf


def test_label_trend_cases():
    assert label_trend([1.0, 1.0, 1.0]) == TREND_CONVERGED
    assert label_trend([10.0, 1100.0, 2200.0]) == TREND_DIV_PLUS
    assert label_trend([-10.0, -1100.0, -2200.0]) == TREND_DIV_MINUS
    assert label_trend([0.0, 1.0, 0.0]) == TREND_OSCILLATING
    assert label_trend([0.0, 0.5, 0.8]) == TREND_INCONCLUSIVE
    assert label_trend([math.inf, math.inf, math.inf]) == TREND_DIV_PLUS
    assert label_trend([math.inf, 1.0, 1.0]) == TREND_INCONCLUSIVE


def test_extrapolate_geometric_tail():
    vals = [3.0 + 0.5**j for j in range(8)]
    assert extrapolate_limit(vals, TREND_CONVERGED) == pytest.approx(3.0, abs=1e-12)


def test_extrapolate_two_modes():
    vals = [2.0 - 4 * 0.5**j + 2 * 0.25**j for j in range(10)]
    assert extrapolate_limit(vals, TREND_CONVERGED) == pytest.approx(2.0, abs=1e-10)


def test_extrapolate_keeps_value_when_not_converged():
    vals = [1.0, 2.0, 1.5]
    assert extrapolate_limit(vals, TREND_INCONCLUSIVE) == 1.5


def test_direction_ball_honoured(schedule):
    # samples violate |u' - u| <= eps never: quotient detects it
    eps0 = schedule.eps0

    def q(t, u):
        assert np.linalg.norm(u - U2) <= eps0 * (1 + 1e-9)
        return 1.0

    estimate_liminf(q, U2, schedule)


def test_pinned_mode_never_moves_direction(schedule):
    def q(t, u):
        assert np.array_equal(u, U2)
        return t

    est = estimate_liminf(q, U2, schedule, vary_direction=False)
    assert est.trend == TREND_CONVERGED
    assert abs(est.limit) < 1e-12
