"""Grid-based ground truth for minimality claims.

These oracles are deliberately independent of the derivative estimators:
they evaluate the function on shrinking boxes and decide by direct
comparison.  Grids miss measure-zero structure, so witness points carried
by a function handle (or passed explicitly) are always merged into the
evaluation set.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .errors import ConfigurationError, PreconditionError
from .functions import ProperFunction

Array = np.ndarray

YES = "YES"
NO = "NO"
UNDECIDED = "UNDECIDED"

GROWTH_FLOOR = 1e-6
STABLE_REL = 0.2


@dataclass(frozen=True)
class GridSpec:
    """Nested evaluation grids: decreasing radii, odd points per axis."""

    center: tuple[float, ...]
    radii: tuple[float, ...] = (0.25, 0.125, 0.0625, 0.03125, 0.015625)
    points_per_axis: int = 21

    def __post_init__(self):
        r = list(self.radii)
        if not r or any(x <= 0 for x in r) or any(b >= a for a, b in zip(r, r[1:])):
            raise ConfigurationError("radii must be positive and strictly decreasing")
        if self.points_per_axis < 3 or self.points_per_axis % 2 == 0:
            raise ConfigurationError("points_per_axis must be odd and >= 3")

    @staticmethod
    def around(center, radii=None, points_per_axis: int = 21) -> "GridSpec":
        c = tuple(float(v) for v in np.atleast_1d(center))
        if radii is None:
            return GridSpec(c, points_per_axis=points_per_axis)
        return GridSpec(c, tuple(float(r) for r in radii), points_per_axis)


@dataclass
class OracleReport:
    kind: str
    outcome: str
    C_estimates: list[tuple[float, float]] = field(default_factory=list)
    counterexample: Optional[tuple[list[float], float]] = None

    def __bool__(self) -> bool:
        return self.outcome == YES


def _grid_points(center: Array, radius: float, ppa: int) -> Array:
    axes = [np.linspace(c - radius, c + radius, ppa) for c in center]
    mesh = np.meshgrid(*axes, indexing="ij")
    pts = np.stack([m.ravel() for m in mesh], axis=-1)
    keep = np.any(pts != center, axis=1)
    return pts[keep]


def _witness_points(f: ProperFunction, x: Array, radius: float,
                    extra: Optional[Sequence] = None) -> list[Array]:
    pts: list[Array] = []
    for fam in f.witnesses:
        if float(np.linalg.norm(fam.point - x)) > 1e-12:
            continue
        for t, up in fam.make_pairs(200):
            y = x + t * np.asarray(up, float)
            if 0.0 < float(np.linalg.norm(y - x)) <= radius:
                pts.append(y)
    if extra is not None:
        for y in extra:
            y = np.asarray(y, dtype=float)
            if 0.0 < float(np.linalg.norm(y - x)) <= radius:
                pts.append(y)
    return pts


def local_min(
    f: ProperFunction, x, grid: GridSpec, extra_witnesses: Optional[Sequence] = None
) -> OracleReport:
    """YES when the smallest-radius grid (plus witnesses) shows no point
    below f(x); NO with the counterexample otherwise."""
    x = np.asarray(x, dtype=float)
    fx = f(x)
    if not math.isfinite(fx):
        raise PreconditionError("query point must have finite value")
    r = grid.radii[-1]
    candidates = list(_grid_points(x, r, grid.points_per_axis))
    candidates += _witness_points(f, x, r, extra_witnesses)
    for y in candidates:
        fy = f(y)
        if fy < fx - 1e-12:
            return OracleReport("local_min", NO,
                                counterexample=([float(c) for c in y], fy))
    return OracleReport("local_min", YES)


def _growth_constants(
    f: ProperFunction, x: Array, grid: GridSpec,
    extra_witnesses: Optional[Sequence],
) -> tuple[list[tuple[float, float]], Optional[tuple[list[float], float]]]:
    """Per-radius smallest quadratic growth ratio and its attaining point."""
    fx = f(x)
    out = []
    worst_point = None
    for r in grid.radii:
        candidates = list(_grid_points(x, r, grid.points_per_axis))
        candidates += _witness_points(f, x, r, extra_witnesses)
        c_min = math.inf
        arg = None
        for y in candidates:
            d2 = float(np.linalg.norm(y - x)) ** 2
            ratio = (f(y) - fx) / d2
            if ratio < c_min:
                c_min = ratio
                arg = y
        out.append((r, c_min))
        worst_point = ([float(c) for c in arg], f(arg)) if arg is not None else None
    return out, worst_point


def isolated_order2(
    f: ProperFunction, x, grid: GridSpec, extra_witnesses: Optional[Sequence] = None
) -> OracleReport:
    """Does f grow at least quadratically around x?

    Computes C(r) = min [f(y) - f(x)] / |y - x|^2 over each punctured grid.
    YES when the last constants stay above the growth floor and either
    stabilize (within 20% of each other) or increase; NO when a constant
    falls to the floor or they decay geometrically toward it; UNDECIDED
    otherwise.
    """
    x = np.asarray(x, dtype=float)
    fx = f(x)
    if not math.isfinite(fx):
        raise PreconditionError("query point must have finite value")
    cs, worst = _growth_constants(f, x, grid, extra_witnesses)
    vals = [c for _, c in cs]
    report = OracleReport("isolated_order2", UNDECIDED, C_estimates=cs)
    if vals[-1] <= GROWTH_FLOOR:
        report.outcome = NO
        report.counterexample = worst
        return report
    last = vals[-3:] if len(vals) >= 3 else vals
    finite_last = [v for v in last if math.isfinite(v)]
    if len(finite_last) == len(last):
        lo, hi = min(last), max(last)
        if lo > GROWTH_FLOOR and hi <= lo * (1.0 + STABLE_REL):
            report.outcome = YES
            return report
        if all(b > a for a, b in zip(last, last[1:])):
            report.outcome = YES
            return report
        decaying = all(b <= a * (1.0 - STABLE_REL) for a, b in zip(last, last[1:]))
        if decaying:
            report.outcome = NO
            report.counterexample = worst
            return report
    elif all(v == math.inf for v in last):
        # every nearby point left the domain upward: vacuous quadratic growth
        report.outcome = YES
        return report
    return report


def global_min_box(
    f: ProperFunction, box, points_per_axis: int, query=None
) -> OracleReport:
    """Grid argmin over a box; YES when the query point attains it."""
    lo, hi = (np.asarray(b, dtype=float) for b in box)
    dim = lo.size
    if points_per_axis**dim > 10**6:
        raise ConfigurationError("grid exceeds the 1e6-point budget")
    axes = [np.linspace(lo[i], hi[i], points_per_axis) for i in range(dim)]
    mesh = np.meshgrid(*axes, indexing="ij")
    pts = np.stack([m.ravel() for m in mesh], axis=-1)
    vals = np.array([f(p) for p in pts])
    idx = int(np.argmin(vals))
    gmin = float(vals[idx])
    argmin = pts[idx]
    report = OracleReport("global_min_box", YES)
    if query is not None:
        fq = f(np.asarray(query, dtype=float))
        if fq > gmin + 1e-12:
            report.outcome = NO
            report.counterexample = ([float(c) for c in argmin], gmin)
    return report
