import math

import numpy as np
import pytest

from nsopt.errors import PreconditionError, ProperFunctionError
from nsopt.functions import (
    ProperFunction,
    check_gradient,
    eval_quotient1,
    eval_quotient2,
    random_interior_points,
)


def test_quotient1_sqnorm(entries):
    f = entries["SQNORM"].function
    q = eval_quotient1(f, np.zeros(2))
    for t, up in [(0.1, np.array([1.0, 0.0])), (0.03, np.array([0.5, -0.5]))]:
        assert q(t, up) == pytest.approx(t * float(up @ up), rel=1e-12)


def test_quotient1_half1d_domain_exit(entries):
    f = entries["HALF1D"].function
    q = eval_quotient1(f, np.zeros(1))
    assert q(0.1, np.array([-1.0])) == math.inf
    assert q(0.1, np.array([1.0])) == pytest.approx(1.0)


def test_quotient1_parabola_on_curve(entries):
    f = entries["PARABOLA_TRAP"].function
    q = eval_quotient1(f, np.zeros(2))
    for k in (3, 10, 50):
        t = 1.0 / k
        got = q(t, np.array([1.0, t]))
        assert got == pytest.approx(-t * (1 + t * t), rel=1e-12)


def test_quotient2_sqnorm(entries):
    f = entries["SQNORM"].function
    q = eval_quotient2(f, np.zeros(2), np.zeros(2))
    up = np.array([0.8, 0.6])
    assert q(0.05, up) == pytest.approx(2.0 * float(up @ up), rel=1e-10)


def test_quotient2_parabola_approaches_minus_two(entries):
    f = entries["PARABOLA_TRAP"].function
    q = eval_quotient2(f, np.zeros(2), np.zeros(2))
    vals = [q(1.0 / k, np.array([1.0, 1.0 / k])) for k in (10, 100, 1000)]
    for k, v in zip((10, 100, 1000), vals):
        assert v == pytest.approx(-2.0 * (1 + 1.0 / k**2), rel=1e-12)
    assert abs(vals[-1] + 2.0) < 1e-5


def test_quotient2_neg_quad(entries):
    f = entries["NEG_QUAD"].function
    q = eval_quotient2(f, np.zeros(2), np.zeros(2))
    up = np.array([1.0, 2.0])
    assert q(0.01, up) == pytest.approx(-2.0 * float(up @ up), rel=1e-10)


def test_quotient_precondition_requires_finite_value(entries):
    f = entries["HALF1D"].function
    with pytest.raises(PreconditionError):
        eval_quotient1(f, np.array([-1.0]))
    with pytest.raises(PreconditionError):
        eval_quotient2(f, np.array([-1.0]), np.zeros(1))


def test_properness_guard():
    bad = ProperFunction("bad", 1, lambda x: -math.inf)
    with pytest.raises(ProperFunctionError):
        bad(np.zeros(1))
    nan = ProperFunction("nan", 1, lambda x: float("nan"))
    with pytest.raises(ProperFunctionError):
        nan(np.zeros(1))


def test_corpus_functions_proper(entries, rng):
    for entry in entries.values():
        f = entry.function
        lo, hi = f.box()
        for _ in range(200):
            x = lo + (hi - lo) * rng.uniform(size=f.dim)
            v = f(x)
            assert v > -math.inf
        assert math.isfinite(f(entry.candidate_point))


def test_ex1_axis_identity(entries):
    f = entries["EX1"].function
    for t in (1.0, 0.1, 0.333, 1e-4, 1e-8):
        assert f(np.array([t, 0.0])) == pytest.approx(t * t, rel=1e-12)
        assert f(np.array([-t, 0.0])) == pytest.approx(t * t, rel=1e-12)


def test_parabola_values(entries):
    f = entries["PARABOLA_TRAP"].function
    assert f(np.array([0.5, 0.25])) == pytest.approx(-(0.25 + 0.0625))
    assert f(np.array([0.5, 0.2501])) == 0.0
    assert f(np.array([-0.5, 0.25])) == 0.0
    assert f(np.array([0.3, 0.7])) == 0.0


def test_gradient_cross_check(entries, rng):
    for name in ("SQNORM", "NEG_QUAD"):
        f = entries[name].function
        pts = random_interior_points(f, 20, rng)
        assert len(pts) == 20
        assert check_gradient(f, pts) == []


def test_gradient_cross_check_ex1_off_curve(entries, rng):
    f = entries["EX1"].function
    pts = []
    while len(pts) < 20:
        x = -1 + 2 * rng.uniform(size=2)
        if abs(x[1] - np.cbrt(x[0] ** 4)) > 0.05:
            pts.append(x)
    assert check_gradient(f, pts, rel_tol=1e-4) == []


def test_witness_scaling(entries):
    f = entries["PARABOLA_TRAP"].function
    base = f.witness_pairs(np.zeros(2), np.array([1.0, 0.0]), count=10)
    scaled = f.witness_pairs(np.zeros(2), np.array([2.0, 0.0]), count=10)
    assert base is not None and scaled is not None
    for (t, up), (ts, ups) in zip(base, scaled):
        assert ts == pytest.approx(t / 2.0, rel=1e-15)
        # same point on the curve either way
        np.testing.assert_allclose(ts * ups, t * up, rtol=1e-15)
    assert f.witness_pairs(np.zeros(2), np.array([0.0, 1.0])) is None
    assert f.witness_pairs(np.array([0.5, 0.0]), np.array([1.0, 0.0])) is None
