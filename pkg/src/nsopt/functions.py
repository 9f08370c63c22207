"""Proper extended-real function handles and their difference quotients.

A function handle maps R^dim to the reals extended with +inf (the +inf value
encodes leaving the domain); it must never produce -inf and must be finite
somewhere.  Handles may carry an analytic gradient and witness families:
explicit (t, u') sequences that steer the joint-limit estimators onto
structure (curves, switching surfaces) that random sampling misses.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

from . import extreal
from .errors import CapabilityError, PreconditionError, ProperFunctionError

Array = np.ndarray


@dataclass
class WitnessFamily:
    """A (t, u') sequence anchored at (point, direction).

    ``make_pairs(count)`` returns the first ``count`` pairs of a sequence
    with t decreasing to 0 and u' approaching the anchor direction; the
    points ``point + t*u'`` trace the structure of interest.  A family keyed
    at direction d also serves any positively scaled direction tau*d: the
    pair (t, u') becomes (t/tau, tau*u') which visits the same point.
    """

    point: Array
    direction: Array
    make_pairs: Callable[[int], list[tuple[float, Array]]]

    def match_scale(self, x: Array, u: Array, tol: float = 1e-9) -> Optional[float]:
        """Return tau > 0 with u ~= tau * direction at matching base point."""
        if float(np.linalg.norm(np.asarray(x, float) - self.point)) > tol:
            return None
        d = self.direction
        dd = float(d @ d)
        if dd == 0.0:
            return None
        tau = float(np.asarray(u, float) @ d) / dd
        if tau <= 0.0:
            return None
        if float(np.linalg.norm(np.asarray(u, float) - tau * d)) > tol * max(1.0, tau):
            return None
        return tau

    def pairs_for(self, x: Array, u: Array, count: int = 200) -> Optional[list[tuple[float, Array]]]:
        tau = self.match_scale(x, u)
        if tau is None:
            return None
        raw = self.make_pairs(count)
        if tau == 1.0:
            return [(t, np.asarray(up, float)) for t, up in raw]
        return [(t / tau, tau * np.asarray(up, float)) for t, up in raw]


@dataclass
class ProperFunction:
    """Evaluatable proper extended-real function on R^dim."""

    name: str
    dim: int
    fn: Callable[[Array], float]
    gradient: Optional[Callable[[Array], Array]] = None
    domain_box: Optional[tuple[Array, Array]] = None
    witnesses: list[WitnessFamily] = field(default_factory=list)

    def __call__(self, x) -> float:
        v = float(self.fn(np.asarray(x, dtype=float)))
        if math.isnan(v):
            raise ProperFunctionError(f"{self.name} returned NaN")
        if v == -math.inf:
            raise ProperFunctionError(f"{self.name} returned -inf (not a proper function)")
        return v

    def grad(self, x) -> Array:
        if self.gradient is None:
            raise CapabilityError(f"{self.name} has no analytic gradient")
        return np.asarray(self.gradient(np.asarray(x, dtype=float)), dtype=float)

    def witness_pairs(self, x, u, count: int = 200) -> Optional[list[tuple[float, Array]]]:
        """Pairs from the first witness family matching (x, u) up to scale."""
        for fam in self.witnesses:
            pairs = fam.pairs_for(x, u, count)
            if pairs is not None:
                return pairs
        return None

    def box(self) -> tuple[Array, Array]:
        if self.domain_box is not None:
            return self.domain_box
        one = np.ones(self.dim)
        return (-one, one)


def eval_quotient1(f: ProperFunction, x) -> Callable[[float, Array], float]:
    """First-order difference quotient sampler: (t, u') -> [f(x+t u') - f(x)] / t."""
    x = np.asarray(x, dtype=float)
    fx = f(x)
    if not math.isfinite(fx):
        raise PreconditionError(f"f({x}) must be finite, got {fx}")

    def q(t: float, up: Array) -> float:
        return extreal.sub(f(x + t * up), fx) / t

    return q


def eval_quotient2(f: ProperFunction, x, x1star) -> Callable[[float, Array], float]:
    """Second-order quotient sampler: (t, u') -> 2 [f(x+t u') - f(x) - t <x1*, u'>] / t^2.

    ``x1star`` is an exact linear functional (coefficient vector); it is the
    caller's responsibility that it minorizes the first-order derivative.
    """
    x = np.asarray(x, dtype=float)
    s = np.asarray(x1star, dtype=float)
    fx = f(x)
    if not math.isfinite(fx):
        raise PreconditionError(f"f({x}) must be finite, got {fx}")

    def q(t: float, up: Array) -> float:
        return 2.0 * extreal.sub(f(x + t * up), fx + t * float(s @ up)) / (t * t)

    return q


def eval_growth2(f: ProperFunction, x) -> Callable[[float, Array], float]:
    """Quadratic growth ratio sampler: (t, u') -> [f(x+t u') - f(x)] / t^2."""
    x = np.asarray(x, dtype=float)
    fx = f(x)
    if not math.isfinite(fx):
        raise PreconditionError(f"f({x}) must be finite, got {fx}")

    def q(t: float, up: Array) -> float:
        return extreal.sub(f(x + t * up), fx) / (t * t)

    return q


def check_gradient(
    f: ProperFunction,
    points: Sequence[Array],
    rel_tol: float = 1e-4,
    h: float = 1e-6,
) -> list[tuple[Array, float]]:
    """Cross-check the analytic gradient against central differences.

    Returns the list of (point, worst relative error) entries exceeding
    ``rel_tol``; empty means the check passed everywhere.
    """
    bad = []
    for x in points:
        x = np.asarray(x, dtype=float)
        g = f.grad(x)
        num = np.zeros_like(g)
        ok = True
        for i in range(f.dim):
            e = np.zeros(f.dim)
            e[i] = h * max(1.0, abs(x[i]))
            fp, fm = f(x + e), f(x - e)
            if not (math.isfinite(fp) and math.isfinite(fm)):
                ok = False
                break
            num[i] = (fp - fm) / (2 * e[i])
        if not ok:
            continue
        scale = max(1.0, float(np.linalg.norm(g)))
        err = float(np.linalg.norm(num - g)) / scale
        if err > rel_tol:
            bad.append((x, err))
    return bad


def random_interior_points(
    f: ProperFunction, n: int, rng: np.random.Generator
) -> list[Array]:
    """Sample points in the domain box with finite values in a small neighborhood."""
    lo, hi = f.box()
    pts = []
    attempts = 0
    while len(pts) < n and attempts < 50 * n:
        attempts += 1
        x = lo + (hi - lo) * rng.uniform(size=f.dim)
        if math.isfinite(f(x)) and all(
            math.isfinite(f(x + d))
            for d in (np.full(f.dim, 1e-5), np.full(f.dim, -1e-5))
        ):
            pts.append(x)
    return pts
