"""Cone-constrained vector problems: feasibility, scalarization, and
minimality checks.

A problem asks to C-minimize a vector objective f subject to g(x) in -K,
with C and K polyhedral cones (C with nonempty interior).  The central
device is the scalarization

    F(x) = max { <lam, f(x) - f(xbar)> + <mu, g(x)> :
                 lam in polar(C), mu in polar(K), |(lam, mu)| = 1 },

a single proper function that vanishes at the candidate, stays nonnegative
near it when the candidate is a weak local minimizer, and is strictly
positive at infeasible points.  All scalar optimality machinery then
applies to F directly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np

from . import classify
from .cones import PolyhedralCone, contains, polar, product_cone, sphere_max
from .core import SampleSchedule
from .derivatives import DirectionSet
from .errors import ConfigurationError, PreconditionError
from .functions import ProperFunction
from .oracle import GROWTH_FLOOR, NO, STABLE_REL, UNDECIDED, YES, OracleReport
from .verdicts import INCONCLUSIVE, Verdict

Array = np.ndarray


@dataclass
class VectorProblem:
    name: str
    dim: int            # decision-space dimension s
    n_objectives: int
    n_constraints: int
    f: Callable[[Array], Array]
    g: Callable[[Array], Array]
    C: PolyhedralCone
    K: PolyhedralCone
    domain_box: tuple[Array, Array]

    def __post_init__(self):
        if self.C.dim != self.n_objectives or self.K.dim != self.n_constraints:
            raise ConfigurationError("cone dimensions must match f and g")
        probe = self.C.generators.sum(axis=0) if len(self.C.generators) else None
        if probe is None or not self.C.interior_contains(probe):
            raise ConfigurationError("ordering cone C must have nonempty interior")

    def objective(self, x) -> Array:
        return np.asarray(self.f(np.asarray(x, dtype=float)), dtype=float)

    def constraint(self, x) -> Array:
        return np.asarray(self.g(np.asarray(x, dtype=float)), dtype=float)


def feasible(p: VectorProblem, x) -> bool:
    return contains(p.K, -p.constraint(x))


@dataclass
class ScalarizedF:
    problem: VectorProblem
    xbar: Array
    f_at_xbar: Array
    dual: PolyhedralCone

    def eval(self, x) -> float:
        a = np.concatenate([
            self.problem.objective(x) - self.f_at_xbar,
            self.problem.constraint(x),
        ])
        value, _ = sphere_max(self.dual, a)
        return value

    def as_proper_function(self) -> ProperFunction:
        return ProperFunction(
            name=f"F[{self.problem.name}]",
            dim=self.problem.dim,
            fn=self.eval,
            domain_box=self.problem.domain_box,
        )


def scalarize(p: VectorProblem, xbar) -> ScalarizedF:
    xbar = np.asarray(xbar, dtype=float)
    if not feasible(p, xbar):
        raise PreconditionError("candidate point is infeasible")
    dual = product_cone(polar(p.C), polar(p.K))
    return ScalarizedF(p, xbar, p.objective(xbar), dual)


def check_weak_min_necessary(
    p: VectorProblem, xbar, dirs: DirectionSet, schedule: SampleSchedule,
    zero_band: float = classify.DEFAULT_ZERO_BAND,
) -> Verdict:
    """Necessary conditions for a weak local minimizer, applied to the
    scalarization.  The scalarization's max over multipliers flattens its
    quotients' tails, so the deepened first-order schedule is used."""
    F = scalarize(p, xbar).as_proper_function()
    v = classify.check_necessary_local_min(
        F, xbar, dirs, classify._deepened(schedule), zero_band,
        condition_id="VP-Nec",
    )
    return v


def check_vector_isolated_order2(
    p: VectorProblem, xbar, dirs: DirectionSet, schedule: SampleSchedule,
    zero_band: float = classify.DEFAULT_ZERO_BAND,
) -> Verdict:
    """Isolated second-order vector minimality via the scalarization, run in
    both equivalent variants; disagreement downgrades to INCONCLUSIVE."""
    F = scalarize(p, xbar).as_proper_function()
    sched = classify._deepened(schedule)
    vb = classify.check_isolated_order2(F, xbar, dirs, sched, "b", zero_band)
    vc = classify.check_isolated_order2(F, xbar, dirs, sched, "c", zero_band)
    if vb.outcome != vc.outcome:
        return Verdict("VP-Iso2", INCONCLUSIVE, vb.witnesses + vc.witnesses,
                       zero_band, note=f"variants disagree: b={vb.outcome} c={vc.outcome}")
    return Verdict("VP-Iso2", vb.outcome, vb.witnesses, zero_band,
                   note=f"variants agree ({vb.outcome})")


# ---------------------------------------------------------------------------
# grid oracle for the vector notions
# ---------------------------------------------------------------------------

def _margin_componentwise_ball(df: Array) -> float:
    """Distance from the shifted objective's upper set to the reference."""
    return float(np.linalg.norm(np.clip(df, 0.0, None)))


def _margin_componentwise_max(df: Array) -> float:
    return float(np.max(df))


def vector_isolated_oracle(
    p: VectorProblem,
    xbar,
    radii: Sequence[float],
    points_per_axis: int,
    k: int = 2,
    variant: str = "lambda",
) -> OracleReport:
    """Grid ground truth for order-k vector minimality at xbar.

    Variants: "jimenez" (upper-set-versus-ball emptiness, componentwise),
    "isolmin" (some objective exceeds by the margin), both restricted to
    orthant ordering cones; "lambda" (a unit multiplier from the polar cone
    certifies the margin, via sphere_max) for general C.  Per radius the
    fitted constant is A(r) = min margin(x) / |x - xbar|^k over feasible
    grid points; stabilization rules match the scalar oracle.
    """
    if k not in (1, 2):
        raise ConfigurationError("order k must be 1 or 2")
    if variant in ("jimenez", "isolmin") and not p.C.is_orthant():
        raise ConfigurationError(f"variant {variant!r} requires the orthant cone")
    if variant not in ("jimenez", "isolmin", "lambda"):
        raise ConfigurationError(f"unknown variant {variant!r}")
    xbar = np.asarray(xbar, dtype=float)
    if not feasible(p, xbar):
        raise PreconditionError("candidate point is infeasible")
    if points_per_axis**p.dim > 10**6:
        raise ConfigurationError("grid exceeds the 1e6-point budget")

    fbar = p.objective(xbar)
    dual_c = polar(p.C) if variant == "lambda" else None
    radii = sorted(float(r) for r in radii)[::-1]

    cs: list[tuple[float, float]] = []
    worst: Optional[tuple[list[float], float]] = None
    for r in radii:
        axes = [np.linspace(c - r, c + r, points_per_axis) for c in xbar]
        mesh = np.meshgrid(*axes, indexing="ij")
        pts = np.stack([m.ravel() for m in mesh], axis=-1)
        a_min = math.inf
        arg = None
        for y in pts:
            d = float(np.linalg.norm(y - xbar))
            if d == 0.0 or not feasible(p, y):
                continue
            df = p.objective(y) - fbar
            if variant == "jimenez":
                margin = _margin_componentwise_ball(df)
            elif variant == "isolmin":
                margin = _margin_componentwise_max(df)
            else:
                margin, _ = sphere_max(dual_c, df)
            a = margin / d**k
            if a < a_min:
                a_min = a
                arg = y
        cs.append((r, a_min))
        if arg is not None:
            worst = ([float(c) for c in arg], float(a_min))

    vals = [c for _, c in cs]
    report = OracleReport(f"vector_isolated_order{k}:{variant}", UNDECIDED,
                          C_estimates=cs)
    if not vals or not math.isfinite(vals[-1]):
        return report
    if vals[-1] <= GROWTH_FLOOR:
        report.outcome = NO
        report.counterexample = worst
        return report
    last = vals[-3:] if len(vals) >= 3 else vals
    lo, hi = min(last), max(last)
    if lo > GROWTH_FLOOR and hi <= lo * (1.0 + STABLE_REL):
        report.outcome = YES
    elif all(b > a for a, b in zip(last, last[1:])):
        report.outcome = YES
    elif all(b <= a * (1.0 - STABLE_REL) for a, b in zip(last, last[1:])):
        report.outcome = NO
        report.counterexample = worst
    return report


# ---------------------------------------------------------------------------
# seeded random instances for the definitional-equivalence suite
# ---------------------------------------------------------------------------

def random_biobjective_instance(seed: int) -> VectorProblem:
    """Bi-objective piecewise-quadratic instance on [-1, 1]^2.

    Each objective switches between two random quadratic forms across a
    random hyperplane through the origin; both pieces vanish at the origin,
    which is the reference candidate.  The ordering cone is the plane
    orthant, the single constraint is inactive.
    """
    rng = np.random.default_rng(seed)
    w = rng.standard_normal(2)
    w /= np.linalg.norm(w)

    def make_quad():
        m = rng.standard_normal((2, 2))
        A = 0.5 * (m + m.T)
        b = rng.standard_normal(2)
        return A, b

    pieces = [(make_quad(), make_quad()) for _ in range(2)]

    def f(x: Array) -> Array:
        side = float(w @ x) > 0.0
        out = np.empty(2)
        for i, ((A1, b1), (A2, b2)) in enumerate(pieces):
            A, b = (A1, b1) if side else (A2, b2)
            out[i] = float(x @ A @ x + b @ x)
        return out

    box = (np.array([-1.0, -1.0]), np.array([1.0, 1.0]))
    return VectorProblem(
        name=f"biobjective-{seed}",
        dim=2,
        n_objectives=2,
        n_constraints=1,
        f=f,
        g=lambda x: np.array([-1.0]),
        C=PolyhedralCone.orthant(2),
        K=PolyhedralCone.orthant(1),
        domain_box=box,
    )


def definitional_equivalence_suite(
    n: int, seed: int, radii=(0.5, 0.25, 0.125), points_per_axis: int = 13,
    k: int = 2,
) -> tuple[int, list[int]]:
    """Run the two componentwise order-k definitions on n seeded random
    instances; returns (#agreements, seeds that disagreed)."""
    agree = 0
    mismatches = []
    for i in range(n):
        inst_seed = seed * 1000 + i
        p = random_biobjective_instance(inst_seed)
        a = vector_isolated_oracle(p, np.zeros(2), radii, points_per_axis, k, "jimenez")
        b = vector_isolated_oracle(p, np.zeros(2), radii, points_per_axis, k, "isolmin")
        if a.outcome == b.outcome:
            agree += 1
        else:
            mismatches.append(inst_seed)
    return agree, mismatches
