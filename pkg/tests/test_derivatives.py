import math

import numpy as np
import pytest

from nsopt.core import (
    TREND_CONVERGED,
    TREND_DIV_MINUS,
    TREND_DIV_PLUS,
    SampleSchedule,
    estimate_liminf,
)
from nsopt.derivatives import (
    DirectionSet,
    bp2,
    bz2,
    dini1,
    dini2,
    ginchev,
    hadamard1,
    hadamard2,
    subdiff_contains,
)
from nsopt.errors import CapabilityError, ConfigurationError, PreconditionError
from nsopt.functions import ProperFunction

Z1 = np.zeros(1)
Z2 = np.zeros(2)
E1 = np.array([1.0, 0.0])


def quad_function(Q):
    return ProperFunction("quad", Q.shape[0], lambda x: 0.5 * float(x @ Q @ x),
                          gradient=lambda x: Q @ x)


# -- direction sets ---------------------------------------------------------

def test_direction_sets():
    d1 = DirectionSet.fibonacci_sphere(64, 1)
    assert set(map(tuple, d1)) == {(1.0,), (-1.0,)}
    d2 = DirectionSet.fibonacci_sphere(64, 2)
    assert len(d2) == 64
    vecs = list(d2)
    assert any(np.allclose(v, [1, 0]) for v in vecs)
    assert any(np.allclose(v, [-1, 0], atol=1e-12) for v in vecs)
    d3 = DirectionSet.fibonacci_sphere(32, 3)
    for v in d3:
        assert np.linalg.norm(v) == pytest.approx(1.0, abs=1e-9)
    ax = DirectionSet.axis_and_diagonals(2)
    assert len(ax) == 8
    with pytest.raises(ConfigurationError):
        DirectionSet.explicit([[0.0, 0.0]])
    with pytest.raises(ConfigurationError):
        DirectionSet(((1.0, 1.0),))  # not unit norm


# -- first order ------------------------------------------------------------

def test_dini1_sqnorm(entries, schedule):
    est = dini1(entries["SQNORM"].function, Z2, E1, schedule)
    assert est.trend == TREND_CONVERGED
    assert abs(est.limit) < 1e-9


def test_dini1_parabola_zero(entries, schedule):
    est = dini1(entries["PARABOLA_TRAP"].function, Z2, E1, schedule)
    assert est.value == 0.0
    assert est.trend == TREND_CONVERGED


def test_dini1_neg_quad_at_interior_point(entries, schedule):
    est = dini1(entries["NEG_QUAD"].function, np.array([1.0, 0.0]), E1, schedule)
    assert est.trend == TREND_CONVERGED
    assert est.limit == pytest.approx(-2.0, abs=1e-6)


def test_hadamard1_neg_quad_origin(entries, schedule):
    for u in DirectionSet.fibonacci_sphere(16, 2):
        est = hadamard1(entries["NEG_QUAD"].function, Z2, u, schedule)
        assert est.trend == TREND_CONVERGED
        assert abs(est.limit) < 1e-6


def test_hadamard1_parabola_witness(entries, schedule):
    est = hadamard1(entries["PARABOLA_TRAP"].function, Z2, E1, schedule)
    assert est.n_hints_used > 0
    assert est.value < 0.0            # negative on-curve samples
    assert est.value > -1e-4          # approaching zero from below
    assert abs(est.limit) < 1e-9
    assert est.trend == TREND_CONVERGED


def test_hadamard1_half1d_outward(entries, schedule):
    est = hadamard1(entries["HALF1D"].function, Z1, np.array([-1.0]), schedule)
    assert est.trend == TREND_DIV_PLUS
    assert est.value == math.inf


# -- second order -----------------------------------------------------------

def test_dini2_sqnorm(entries, schedule):
    est = dini2(entries["SQNORM"].function, Z2, E1, schedule)
    assert est.trend == TREND_CONVERGED
    assert est.limit == pytest.approx(2.0, abs=1e-6)


def test_dini2_parabola_zero(entries, schedule):
    est = dini2(entries["PARABOLA_TRAP"].function, Z2, E1, schedule)
    assert est.value == 0.0


def test_dini2_ex1(entries, schedule):
    est = dini2(entries["EX1"].function, Z2, E1, schedule)
    assert est.limit == pytest.approx(2.0, abs=1e-6)


def test_dini2_diverging_first_order_is_inconclusive(entries, schedule):
    est = dini2(entries["HALF1D"].function, Z1, np.array([-1.0]), schedule)
    assert est.trend == "inconclusive"


def test_hadamard2_parabola(entries, schedule):
    est = hadamard2(entries["PARABOLA_TRAP"].function, Z2, Z2, E1, schedule)
    assert est.trend == TREND_CONVERGED
    assert est.value == pytest.approx(-2.0, abs=1e-3)
    assert est.limit == pytest.approx(-2.0, abs=1e-9)


def test_hadamard2_sqnorm(entries, schedule):
    est = hadamard2(entries["SQNORM"].function, Z2, Z2, E1, schedule)
    assert est.value == pytest.approx(2.0, abs=1e-3)


def test_hadamard2_neg_quad_diagonal(entries, schedule):
    u = np.array([math.sqrt(0.5), math.sqrt(0.5)])
    est = hadamard2(entries["NEG_QUAD"].function, Z2, Z2, u, schedule)
    assert est.value == pytest.approx(-2.0, abs=1e-3)


# -- three-term chain -------------------------------------------------------

def test_ginchev_cube_brute_force(entries, schedule):
    # brute-force oracle: order-1 and order-2 chain quotients vanish with t
    ts = np.logspace(-6, -1, 200)
    assert max(abs(t * t * 1.0**3) for t in ts) < 1e-1
    assert all(abs(2 * t * up**3) < 1e-2 for t in np.logspace(-8, -2.3, 100)
               for up in (0.9, 1.0, 1.1))
    e0, e1, e2 = ginchev(entries["CUBE1D"].function, Z1, np.array([1.0]), schedule)
    for est in (e0, e1, e2):
        assert est.trend == TREND_CONVERGED
        assert abs(est.limit) <= 1e-3


def test_ginchev_linear_divergence(schedule):
    lin = ProperFunction("LIN1D", 1, lambda x: x[0])
    e0, e1, e2 = ginchev(lin, Z1, np.array([1.0]), schedule)
    assert abs(e0.limit) < 1e-6
    assert e1.limit == pytest.approx(1.0, abs=1e-3)
    assert e2.trend == TREND_DIV_MINUS
    assert min(e2.stage_infima) < -1e3


def test_ginchev_sqnorm(entries, schedule):
    e0, e1, e2 = ginchev(entries["SQNORM"].function, Z2, E1, schedule)
    assert abs(e0.limit) < 1e-3
    assert abs(e1.limit) < 1e-3
    assert e2.limit == pytest.approx(2.0, abs=1e-3)


def test_ginchev_infinite_order0_downstream_inconclusive(entries, schedule):
    e0, e1, e2 = ginchev(entries["HALF1D"].function, Z1, np.array([-1.0]), schedule)
    assert e0.value == math.inf
    assert e1.trend == "inconclusive"
    assert e2.trend == "inconclusive"


# -- parabolic-arc and gradient-difference derivatives ----------------------

def test_bz2_sqnorm(entries, schedule):
    f = entries["SQNORM"].function
    u = np.array([0.6, -0.8])
    z = np.array([0.3, 0.5])
    est = bz2(f, Z2, u, z, schedule)
    assert est.limit == pytest.approx(float(u @ u), abs=1e-8)


def test_bz2_linear_exact(schedule):
    a = np.array([2.0, -3.0])
    lin = ProperFunction("lin", 2, lambda x: float(a @ x))
    z = np.array([0.4, 0.7])
    est = bz2(lin, Z2, np.array([1.0, 0.0]), z, schedule)
    assert est.limit == pytest.approx(float(a @ z), abs=1e-10)


def test_bz2_quadratic_oracle(rng):
    # symbolic Taylor oracle: f(x+tu+t^2 z) expands to
    # <Qx, z> + u'Qu/2 at order t^2 once the slope term is removed
    sched = SampleSchedule(stages=14)
    for _ in range(10):
        m = rng.standard_normal((2, 2))
        Q = m + m.T
        f = quad_function(Q)
        x, u, z = (rng.standard_normal(2) for _ in range(3))
        want = float(x @ Q @ z) + 0.5 * float(u @ Q @ u)
        est = bz2(f, x, u, z, sched)
        assert est.limit == pytest.approx(want, abs=1e-6)


def test_bz2_requires_resolved_first_order(entries, schedule):
    with pytest.raises(PreconditionError):
        bz2(entries["HALF1D"].function, Z1, np.array([-1.0]), np.zeros(1), schedule)


def test_bp2_sqnorm(entries, schedule):
    f = entries["SQNORM"].function
    u = np.array([0.6, 0.8])
    est = bp2(f, Z2, u, u, schedule)
    assert est.limit == pytest.approx(2.0, abs=1e-9)


def test_bp2_ex1_diverges(entries):
    # gradient second component along (0, t) is 1.5 sqrt(t): quotient 1.5/sqrt(t)
    est = bp2(entries["EX1"].function, Z2, np.array([0.0, 1.0]),
              np.array([0.0, 1.0]), SampleSchedule(stages=18))
    assert est.trend == TREND_DIV_PLUS


def test_bp2_quadratic_oracle(rng, schedule):
    for _ in range(10):
        m = rng.standard_normal((2, 2))
        Q = m + m.T
        f = quad_function(Q)
        x, u, v = (rng.standard_normal(2) for _ in range(3))
        est = bp2(f, x, u, v, schedule)
        assert est.limit == pytest.approx(float(u @ Q @ v), abs=1e-6)


def test_bp2_needs_gradient(entries, schedule):
    with pytest.raises(CapabilityError):
        bp2(entries["ABS1D"].function, Z1, np.array([1.0]), np.array([1.0]), schedule)


# -- subdifferential membership ---------------------------------------------

def test_subdiff_sqnorm_zero(entries, schedule):
    dirs = DirectionSet.fibonacci_sphere(16, 2)
    v = subdiff_contains(entries["SQNORM"].function, Z2, Z2, dirs, schedule)
    assert v.outcome == "PASS"


def test_subdiff_neg_quad_fails_off_origin(entries, schedule):
    dirs = DirectionSet.fibonacci_sphere(16, 2)
    v = subdiff_contains(entries["NEG_QUAD"].function, np.array([1.0, 0.0]),
                         Z2, dirs, schedule)
    assert v.outcome == "FAIL"
    assert v.witnesses
    w = v.witnesses[0]
    assert w["limit"] < -1e-3


def test_subdiff_parabola_zero(entries, schedule):
    dirs = DirectionSet.fibonacci_sphere(16, 2)
    v = subdiff_contains(entries["PARABOLA_TRAP"].function, Z2, Z2, dirs, schedule)
    assert v.outcome == "PASS"


def test_subdiff_half1d(entries, schedule):
    dirs = DirectionSet.fibonacci_sphere(2, 1)
    v = subdiff_contains(entries["HALF1D"].function, Z1, np.array([1.0]),
                         dirs, schedule)
    assert v.outcome == "PASS"
    v = subdiff_contains(entries["HALF1D"].function, Z1, np.array([2.0]),
                         dirs, schedule)
    assert v.outcome == "FAIL"


# -- structural properties ---------------------------------------------------

def _converged_cases(entries, schedule):
    for name, entry in entries.items():
        f, x = entry.function, entry.candidate_point
        for u in DirectionSet.axis_and_diagonals(f.dim):
            yield name, f, x, u


def test_hadamard_below_dini(entries, schedule):
    for name, f, x, u in _converged_cases(entries, schedule):
        h = hadamard1(f, x, u, schedule)
        d = dini1(f, x, u, schedule)
        if h.trend == TREND_CONVERGED and d.trend == TREND_CONVERGED:
            assert h.value <= d.value + 1e-6, (name, list(u))


def test_hadamard2_below_dini2_on_flat_rays(entries, schedule):
    for name, f, x, u in _converged_cases(entries, schedule):
        d1 = dini1(f, x, u, schedule)
        if d1.trend != TREND_CONVERGED or abs(d1.limit) > 1e-6:
            continue
        h2 = hadamard2(f, x, np.zeros(f.dim), u, schedule)
        d2 = dini2(f, x, u, schedule, first_order=d1)
        if h2.trend == TREND_CONVERGED and d2.trend == TREND_CONVERGED:
            assert h2.value <= d2.value + 1e-6, (name, list(u))


def test_first_order_homogeneity(entries, schedule):
    for name, f, x, u in _converged_cases(entries, schedule):
        base = hadamard1(f, x, u, schedule)
        if base.trend != TREND_CONVERGED:
            continue
        for tau in (0.5, 2.0, 3.0):
            scaled = hadamard1(f, x, tau * u, schedule)
            if scaled.trend != TREND_CONVERGED:
                continue
            want = tau * base.limit
            tol = 1e-4 * max(1.0, abs(want))
            assert abs(scaled.limit - want) <= tol, (name, list(u), tau)


def test_second_order_homogeneity(entries, schedule):
    for name, f, x, u in _converged_cases(entries, schedule):
        base = hadamard2(f, x, np.zeros(f.dim), u, schedule)
        if base.trend != TREND_CONVERGED:
            continue
        for tau in (0.5, 2.0, 3.0):
            scaled = hadamard2(f, x, np.zeros(f.dim), tau * u, schedule)
            if scaled.trend != TREND_CONVERGED:
                continue
            want = tau * tau * base.limit
            tol = 1e-4 * max(1.0, abs(want))
            assert abs(scaled.limit - want) <= tol, (name, list(u), tau)


def test_frechet_consistency(entries, schedule):
    pts = [np.array([0.3, -0.2]), np.array([-0.5, 0.1])]
    for name in ("SQNORM", "NEG_QUAD"):
        f = entries[name].function
        hess_diag = 2.0 if name == "SQNORM" else -2.0
        for x in pts:
            g = f.grad(x)
            for u in DirectionSet.axis_and_diagonals(2):
                h1 = hadamard1(f, x, u, schedule)
                assert h1.limit == pytest.approx(float(g @ u), abs=1e-3)
                h2 = hadamard2(f, x, g, u, schedule)
                assert h2.limit == pytest.approx(hess_diag, abs=1e-3)


def test_zero_direction_never_positive(entries, schedule):
    for name, entry in entries.items():
        f, x = entry.function, entry.candidate_point
        zero = np.zeros(f.dim)
        e1 = hadamard1(f, x, zero, schedule)
        assert e1.value <= 1e-6, name
        e2 = hadamard2(f, x, zero, zero, schedule)
        assert e2.value <= 1e-6, name


def test_paired_difference_limit_vanishes(entries, schedule):
    # [f(x+th') - f(x+th)] / t^2 -> 0 jointly for the smooth quadratic
    f = entries["SQNORM"].function
    h = np.array([1.0, 0.0])

    def q(t, hp):
        return (f(t * hp) - f(t * h)) / (t * t)

    est = estimate_liminf(q, h, schedule)
    assert abs(est.stage_infima[-1]) <= 1e-3
