"""Generalized directional derivative estimators.

All estimators return :class:`~nsopt.core.LiminfEstimate`.  The pinned-ray
variants (lower Dini, the two comparison derivatives) sample the step only;
the joint variants (lower Hadamard, the three-term chain) shrink the step
and the direction ball together and merge any witness pairs the function
handle carries for the queried (point, direction).

Chained estimators subtract the extrapolated limit of the lower-order
estimate rather than its raw final-stage minimum: the raw minimum carries an
O(tau) discretization bias which, divided by t or t^2, would swamp the
higher-order quotient.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from . import extreal
from .core import (
    TREND_CONVERGED,
    TREND_DIV_MINUS,
    TREND_DIV_PLUS,
    LiminfEstimate,
    SampleSchedule,
    estimate_liminf,
    inconclusive_estimate,
)
from .errors import CapabilityError, ConfigurationError, PreconditionError
from .functions import ProperFunction, eval_quotient1, eval_quotient2
from .verdicts import FAIL, INCONCLUSIVE, PASS, Verdict

Array = np.ndarray

#: The three-term chain's second-order stage regions keep this direction
#: ratio at minimum so the ball shrinks strictly slower than the step;
#: with equal ratios the direction-coupled first-order term stays bounded
#: on every annulus and genuine divergence is invisible.
CHAIN_EPS_RATIO = 0.75
CHAIN_MIN_STAGES = 24


@dataclass(frozen=True)
class DirectionSet:
    """A finite set of unit directions standing in for "all directions"."""

    directions: tuple[tuple[float, ...], ...]
    generator: str = "explicit"

    def __post_init__(self):
        if not self.directions:
            raise ConfigurationError("direction set must be nonempty")
        for d in self.directions:
            n = math.sqrt(sum(c * c for c in d))
            if abs(n - 1.0) > 1e-9:
                raise ConfigurationError(f"direction {d} is not unit norm")

    def __iter__(self):
        for d in self.directions:
            yield np.asarray(d, dtype=float)

    def __len__(self) -> int:
        return len(self.directions)

    @property
    def dim(self) -> int:
        return len(self.directions[0])

    @staticmethod
    def explicit(vectors) -> "DirectionSet":
        dirs = []
        for v in vectors:
            v = np.asarray(v, dtype=float)
            n = float(np.linalg.norm(v))
            if n == 0.0:
                raise ConfigurationError("zero vector in direction set")
            dirs.append(tuple(v / n))
        return DirectionSet(tuple(dirs), "explicit")

    @staticmethod
    def fibonacci_sphere(n: int, dim: int) -> "DirectionSet":
        """Evenly spread unit directions: +-1 in 1-D, the roots-of-unity
        circle in 2-D, a golden-spiral sphere in 3-D, and a seeded
        low-discrepancy normalization above that."""
        if n < 1:
            raise ConfigurationError("need at least one direction")
        if dim == 1:
            return DirectionSet(((1.0,), (-1.0,)), f"fibonacci_sphere({n})")
        if dim == 2:
            dirs = []
            for k in range(n):
                th = 2.0 * math.pi * k / n
                dirs.append((math.cos(th), math.sin(th)))
            return DirectionSet(tuple(dirs), f"fibonacci_sphere({n})")
        if dim == 3:
            golden = math.pi * (3.0 - math.sqrt(5.0))
            dirs = []
            for k in range(n):
                z = 1.0 - 2.0 * (k + 0.5) / n
                r = math.sqrt(max(0.0, 1.0 - z * z))
                th = golden * k
                dirs.append((r * math.cos(th), r * math.sin(th), z))
            return DirectionSet(tuple(dirs), f"fibonacci_sphere({n})")
        rng = np.random.default_rng(1234)
        pts = rng.standard_normal((n, dim))
        pts /= np.linalg.norm(pts, axis=1, keepdims=True)
        return DirectionSet(tuple(tuple(p) for p in pts), f"fibonacci_sphere({n})")

    @staticmethod
    def axis_and_diagonals(dim: int) -> "DirectionSet":
        dirs: list[tuple[float, ...]] = []
        for i in range(dim):
            e = [0.0] * dim
            e[i] = 1.0
            dirs.append(tuple(e))
            e2 = list(e)
            e2[i] = -1.0
            dirs.append(tuple(e2))
        if dim > 1:
            scale = 1.0 / math.sqrt(dim)
            for mask in range(2**dim):
                d = tuple(
                    (scale if (mask >> i) & 1 == 0 else -scale) for i in range(dim)
                )
                dirs.append(d)
        return DirectionSet(tuple(dict.fromkeys(dirs)), "axis_and_diagonals")

    @staticmethod
    def default(dim: int, n: int = 64) -> "DirectionSet":
        return DirectionSet.fibonacci_sphere(n, dim)


def _resolve_hints(f: ProperFunction, x, u, hints):
    """``"auto"`` pulls witness pairs off the function handle."""
    if hints == "auto":
        return f.witness_pairs(x, u)
    return hints


def dini1(
    f: ProperFunction, x, u, schedule: SampleSchedule
) -> LiminfEstimate:
    """Lower Dini first-order derivative: step-only liminf of the quotient."""
    q = eval_quotient1(f, x)
    return estimate_liminf(q, np.asarray(u, float), schedule, vary_direction=False)


def dini2(
    f: ProperFunction,
    x,
    u,
    schedule: SampleSchedule,
    first_order: Optional[LiminfEstimate] = None,
) -> LiminfEstimate:
    """Lower Dini second-order derivative.

    Subtracts the first-order estimate's extrapolated limit; a diverging or
    infinite first-order estimate makes the second-order quotient undefined,
    in which case an inconclusive-trend estimate is returned instead of
    raising.
    """
    d1 = first_order if first_order is not None else dini1(f, x, u, schedule)
    if d1.trend in (TREND_DIV_PLUS, TREND_DIV_MINUS):
        return inconclusive_estimate()
    slope = d1.limit if d1.trend == TREND_CONVERGED else d1.value
    if not math.isfinite(slope):
        return inconclusive_estimate()
    x = np.asarray(x, dtype=float)
    fx = f(x)

    def q(t: float, up: Array) -> float:
        return 2.0 * extreal.sub(f(x + t * up), fx + t * slope) / (t * t)

    return estimate_liminf(q, np.asarray(u, float), schedule, vary_direction=False)


def hadamard1(
    f: ProperFunction, x, u, schedule: SampleSchedule, hints="auto"
) -> LiminfEstimate:
    """Lower Hadamard first-order derivative: joint (t, u') liminf."""
    q = eval_quotient1(f, x)
    pairs = _resolve_hints(f, x, u, hints)
    return estimate_liminf(q, np.asarray(u, float), schedule, hints=pairs)


def hadamard2(
    f: ProperFunction, x, x1star, u, schedule: SampleSchedule, hints="auto"
) -> LiminfEstimate:
    """Second-order joint-limit derivative relative to the linear functional
    ``x1star``.  The formula is total in ``x1star``; that the functional
    belongs to the first-order subdifferential is checked separately by
    :func:`subdiff_contains`."""
    q = eval_quotient2(f, x, x1star)
    pairs = _resolve_hints(f, x, u, hints)
    return estimate_liminf(q, np.asarray(u, float), schedule, hints=pairs)


def ginchev(
    f: ProperFunction, x, u, schedule: SampleSchedule
) -> tuple[LiminfEstimate, LiminfEstimate, LiminfEstimate]:
    """Three-term chain of joint lower limits (orders 0, 1, 2).

    Order 0 is the liminf of the function values themselves, order 1
    subtracts the order-0 limit, order 2 subtracts both.  The chain runs on
    a derived schedule whose direction ball shrinks slower than the step
    (ratio at least CHAIN_EPS_RATIO, CHAIN_MIN_STAGES stages): the order-2
    quotient contains a (u' - u)/t term that diverges whenever the function
    has a nonzero slope at x, and an equal-ratio schedule would cap that
    term on every annulus and mask the divergence.
    """
    x = np.asarray(x, dtype=float)
    u = np.asarray(u, dtype=float)
    sched = schedule.with_(
        eps_ratio=max(schedule.eps_ratio, CHAIN_EPS_RATIO),
        stages=max(schedule.stages, CHAIN_MIN_STAGES),
    )

    def q0(t: float, up: Array) -> float:
        return f(x + t * up)

    e0 = estimate_liminf(q0, u, sched)
    v0 = e0.limit if e0.trend == TREND_CONVERGED else e0.value
    if not math.isfinite(v0):
        return e0, inconclusive_estimate(), inconclusive_estimate()

    def q1(t: float, up: Array) -> float:
        return extreal.sub(f(x + t * up), v0) / t

    e1 = estimate_liminf(q1, u, sched)
    v1 = e1.limit if e1.trend == TREND_CONVERGED else e1.value
    if not math.isfinite(v1):
        return e0, e1, inconclusive_estimate()

    def q2(t: float, up: Array) -> float:
        return 2.0 * extreal.sub(f(x + t * up), v0 + t * v1) / (t * t)

    e2 = estimate_liminf(q2, u, sched)
    return e0, e1, e2


def bz2(
    f: ProperFunction, x, u, z, schedule: SampleSchedule
) -> LiminfEstimate:
    """Second-order derivative along the parabolic arc x + t u + t^2 z.

    Realized as a liminf whose converged trend certifies the plain limit
    numerically.  Requires a resolved first-order directional derivative
    along u (pinned-ray estimate with converged trend)."""
    d1 = dini1(f, x, u, schedule)
    if d1.trend != TREND_CONVERGED or not math.isfinite(d1.limit):
        raise PreconditionError(
            "first-order directional derivative did not converge; "
            f"trend={d1.trend}"
        )
    slope = d1.limit
    x = np.asarray(x, dtype=float)
    u = np.asarray(u, dtype=float)
    z = np.asarray(z, dtype=float)
    fx = f(x)

    def q(t: float, _up: Array) -> float:
        return extreal.sub(f(x + t * u + t * t * z), fx + t * slope) / (t * t)

    return estimate_liminf(q, u, schedule, vary_direction=False)


def bp2(
    f: ProperFunction, x, u, v, schedule: SampleSchedule
) -> LiminfEstimate:
    """Gradient-difference second-order derivative along u, paired with v."""
    if f.gradient is None:
        raise CapabilityError(f"{f.name} has no gradient; this derivative needs one")
    x = np.asarray(x, dtype=float)
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    g0v = float(f.grad(x) @ v)

    def q(t: float, _up: Array) -> float:
        return (float(f.grad(x + t * u) @ v) - g0v) / t

    return estimate_liminf(q, u, schedule, vary_direction=False)


def subdiff_contains(
    f: ProperFunction,
    x,
    xstar,
    dirs: DirectionSet,
    schedule: SampleSchedule,
    zero_band: float = 1e-6,
    hints="auto",
) -> Verdict:
    """Membership test for the first-order lower subdifferential.

    PASS means <xstar, u> minorizes the first-order joint-limit derivative
    (up to the zero band) on every direction whose estimate resolved; a
    single conclusive violation is a FAIL with that direction as witness.
    """
    xstar = np.asarray(xstar, dtype=float)
    witnesses = []
    unresolved = []
    for u in dirs:
        est = hadamard1(f, x, u, schedule, hints=hints)
        bound = float(xstar @ u)
        if est.trend == TREND_DIV_PLUS:
            continue
        if est.trend == TREND_CONVERGED:
            if bound <= est.limit + zero_band:
                continue
            witnesses.append(_witness(u, "hadamard1", est, extra={"bound": bound}))
            return Verdict("subdiff", FAIL, witnesses, zero_band)
        if est.trend == TREND_DIV_MINUS:
            witnesses.append(_witness(u, "hadamard1", est, extra={"bound": bound}))
            return Verdict("subdiff", FAIL, witnesses, zero_band)
        unresolved.append(_witness(u, "hadamard1", est))
    if unresolved:
        return Verdict("subdiff", INCONCLUSIVE, unresolved, zero_band,
                       note="some directional estimates did not resolve")
    return Verdict("subdiff", PASS, [], zero_band)


def _witness(u: Array, kind: str, est: LiminfEstimate, extra: Optional[dict] = None):
    w = {
        "direction": [float(c) for c in u],
        "kind": kind,
        "value": est.value,
        "limit": est.limit,
        "trend": est.trend,
    }
    if extra:
        w.update(extra)
    return w
