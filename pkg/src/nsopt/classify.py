"""Optimality-condition checks producing verdicts.

Each check sweeps a finite direction set, runs the relevant derivative
estimators, and compares their extrapolated limits against a zero band.
Condition tags (``Thm1``, ``Thm1-Dini``, ``Thm2-b``, ``Thm2-c``, ``2Stat``,
``2Invex``, ``SPC-Dini``, ``SPC-Had``, ``LStab``, ``Thm5``) name the checks
in reports and on the command line; the README documents what each one
asserts.

Semantics: a FAIL rests on a conclusively resolved violating direction and
is decisive modulo estimator soundness; a PASS over finitely many
directions is supporting evidence for a universally quantified condition;
INCONCLUSIVE means some needed estimate never resolved.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .core import (
    TREND_CONVERGED,
    TREND_DIV_MINUS,
    TREND_DIV_PLUS,
    LiminfEstimate,
    SampleSchedule,
    estimate_liminf,
)
from .derivatives import (
    DirectionSet,
    dini1,
    dini2,
    hadamard1,
    hadamard2,
    subdiff_contains,
)
from .errors import ConfigurationError, PreconditionError
from .functions import ProperFunction, eval_growth2
from .verdicts import FAIL, INCONCLUSIVE, PASS, Verdict

Array = np.ndarray

DEFAULT_ZERO_BAND = 1e-6
#: First-order scans that feed zero-direction detection and slope fits are
#: deepened to at least this many stages; a 12-stage schedule resolves
#: geometric tails but not the sqrt(t)-type tails these scans must separate
#: from genuine zeros.
FIRST_ORDER_MIN_STAGES = 20


def _deepened(schedule: SampleSchedule) -> SampleSchedule:
    if schedule.stages >= FIRST_ORDER_MIN_STAGES:
        return schedule
    return schedule.with_(stages=FIRST_ORDER_MIN_STAGES)


def _status_ge(est: LiminfEstimate, threshold: float) -> str:
    """'ok' / 'violation' / 'unresolved' for the condition est >= threshold."""
    if est.trend == TREND_DIV_PLUS:
        return "ok"
    if est.trend == TREND_DIV_MINUS:
        return "violation"
    if est.trend == TREND_CONVERGED:
        return "ok" if est.limit >= threshold else "violation"
    return "unresolved"


def _status_gt(est: LiminfEstimate, threshold: float) -> str:
    if est.trend == TREND_DIV_PLUS:
        return "ok"
    if est.trend == TREND_DIV_MINUS:
        return "violation"
    if est.trend == TREND_CONVERGED:
        return "ok" if est.limit > threshold else "violation"
    return "unresolved"


def _witness(u, kind: str, est: LiminfEstimate) -> dict:
    return {
        "direction": [float(c) for c in np.atleast_1d(u)],
        "kind": kind,
        "value": est.value,
        "limit": est.limit,
        "trend": est.trend,
    }


def _finish(condition: str, unresolved: list, zero_band: float, note: str = "") -> Verdict:
    if unresolved:
        return Verdict(condition, INCONCLUSIVE, unresolved, zero_band,
                       note=note or "unresolved directional estimates")
    return Verdict(condition, PASS, [], zero_band, note=note)


def check_necessary_local_min(
    f: ProperFunction,
    x,
    dirs: DirectionSet,
    schedule: SampleSchedule,
    zero_band: float = DEFAULT_ZERO_BAND,
    condition_id: str = "Thm1",
) -> Verdict:
    """Necessary conditions at a local minimizer, joint-limit form:
    first- and second-order lower Hadamard derivatives (the latter relative
    to the zero functional) nonnegative in every direction."""
    unresolved = []
    for u in dirs:
        e1 = hadamard1(f, x, u, schedule)
        s1 = _status_ge(e1, -zero_band)
        if s1 == "violation":
            return Verdict(condition_id, FAIL, [_witness(u, "hadamard1", e1)], zero_band)
        if s1 == "unresolved":
            unresolved.append(_witness(u, "hadamard1", e1))
        e2 = hadamard2(f, x, np.zeros(f.dim), u, schedule)
        s2 = _status_ge(e2, -zero_band)
        if s2 == "violation":
            return Verdict(condition_id, FAIL, [_witness(u, "hadamard2", e2)], zero_band)
        if s2 == "unresolved":
            unresolved.append(_witness(u, "hadamard2", e2))
    return _finish(condition_id, unresolved, zero_band)


def check_necessary_local_min_dini(
    f: ProperFunction,
    x,
    dirs: DirectionSet,
    schedule: SampleSchedule,
    zero_band: float = DEFAULT_ZERO_BAND,
) -> Verdict:
    """Dini-form necessary conditions: first-order ray derivative
    nonnegative everywhere; on rays where it vanishes, the second-order ray
    derivative nonnegative as well."""
    unresolved = []
    for u in dirs:
        e1 = dini1(f, x, u, schedule)
        s1 = _status_ge(e1, -zero_band)
        if s1 == "violation":
            return Verdict("Thm1-Dini", FAIL, [_witness(u, "dini1", e1)], zero_band)
        if s1 == "unresolved":
            unresolved.append(_witness(u, "dini1", e1))
            continue
        is_zero = e1.trend == TREND_CONVERGED and abs(e1.limit) <= zero_band
        if not is_zero:
            continue
        e2 = dini2(f, x, u, schedule, first_order=e1)
        s2 = _status_ge(e2, -zero_band)
        if s2 == "violation":
            return Verdict("Thm1-Dini", FAIL, [_witness(u, "dini2", e2)], zero_band)
        if s2 == "unresolved":
            unresolved.append(_witness(u, "dini2", e2))
    return _finish("Thm1-Dini", unresolved, zero_band)


def check_isolated_order2(
    f: ProperFunction,
    x,
    dirs: DirectionSet,
    schedule: SampleSchedule,
    variant: str = "b",
    zero_band: float = DEFAULT_ZERO_BAND,
) -> Verdict:
    """Equivalent characterizations of an isolated second-order minimizer.

    Variant "b": first-order derivative nonnegative and second-order (at the
    zero functional) strictly positive in every direction.  Variant "c":
    the strict second-order test applies only on directions where the
    first-order derivative vanishes.
    """
    if variant not in ("b", "c"):
        raise ConfigurationError(f"unknown variant {variant!r}")
    condition = f"Thm2-{variant}"
    unresolved = []
    for u in dirs:
        e1 = hadamard1(f, x, u, schedule)
        s1 = _status_ge(e1, -zero_band)
        if s1 == "violation":
            return Verdict(condition, FAIL, [_witness(u, "hadamard1", e1)], zero_band)
        if s1 == "unresolved":
            unresolved.append(_witness(u, "hadamard1", e1))
            continue
        if variant == "c":
            is_zero = e1.trend == TREND_CONVERGED and abs(e1.limit) <= zero_band
            if not is_zero:
                continue
        e2 = hadamard2(f, x, np.zeros(f.dim), u, schedule)
        s2 = _status_gt(e2, zero_band)
        if s2 == "violation":
            return Verdict(condition, FAIL, [_witness(u, "hadamard2", e2)], zero_band)
        if s2 == "unresolved":
            unresolved.append(_witness(u, "hadamard2", e2))
    return _finish(condition, unresolved, zero_band)


def is_2stationary(
    f: ProperFunction,
    x,
    dirs: DirectionSet,
    schedule: SampleSchedule,
    zero_band: float = DEFAULT_ZERO_BAND,
) -> Verdict:
    """Second-order stationarity: both joint-limit derivatives nonnegative."""
    return check_necessary_local_min(
        f, x, dirs, schedule, zero_band, condition_id="2Stat"
    )


def check_2invex_on_box(
    f: ProperFunction,
    box,
    grid_n: int,
    dirs: DirectionSet,
    schedule: SampleSchedule,
    zero_band: float = DEFAULT_ZERO_BAND,
) -> Verdict:
    """Box surrogate for the global characterization of second-order
    invexity: every second-order stationary grid point must attain the grid
    minimum.  Vacuous PASS when no grid point is stationary."""
    lo, hi = (np.asarray(b, dtype=float) for b in box)
    if grid_n**f.dim > 10**6:
        raise ConfigurationError("grid exceeds the 1e6-point budget")
    axes = [np.linspace(lo[i], hi[i], grid_n) for i in range(f.dim)]
    mesh = np.meshgrid(*axes, indexing="ij")
    points = np.stack([m.ravel() for m in mesh], axis=-1)
    values = np.array([f(p) for p in points])
    finite = np.isfinite(values)
    grid_min = float(values[finite].min())
    argmin_pt = points[finite][int(np.argmin(values[finite]))]

    stationary: list[tuple[Array, float]] = []
    unresolved_points = 0
    for p, v in zip(points, values):
        if not math.isfinite(v):
            continue
        verdict = is_2stationary(f, p, dirs, schedule, zero_band)
        if verdict.outcome == PASS:
            stationary.append((p, float(v)))
        elif verdict.outcome == INCONCLUSIVE:
            unresolved_points += 1

    note = (
        f"{len(stationary)} stationary grid point(s), grid min {grid_min:.6g}"
        + (f", {unresolved_points} unresolved point(s)" if unresolved_points else "")
    )
    for p, v in stationary:
        if v > grid_min + zero_band:
            witness = {
                "stationary_point": [float(c) for c in p],
                "value": v,
                "grid_min": grid_min,
                "grid_argmin": [float(c) for c in argmin_pt],
            }
            return Verdict("2Invex", FAIL, [witness], zero_band, note=note)
    return Verdict("2Invex", PASS, [], zero_band, note=note)


@dataclass
class StrongPseudoconvexityReport:
    """Zero-derivative directions with their fitted quadratic growth.

    ``alpha`` maps each zero direction to the smallest sampled growth ratio
    [f(x + t d') - f(x)] / t^2 on the finest stage; ``delta`` is the step
    range the fit covered.  PASS requires strictly positive growth on every
    zero direction."""

    mode: str
    zero_dirs: list[tuple[float, ...]] = field(default_factory=list)
    alpha: dict[tuple[float, ...], float] = field(default_factory=dict)
    delta: float = 0.0
    outcome: Verdict = None  # type: ignore[assignment]


def check_strong_pseudoconvex(
    f: ProperFunction,
    x,
    dirs: DirectionSet,
    schedule: SampleSchedule,
    mode: str = "dini",
    zero_band: float = DEFAULT_ZERO_BAND,
) -> StrongPseudoconvexityReport:
    """Pointwise strong pseudoconvexity probe.

    Identifies directions with vanishing first-order derivative (ray
    derivative in "dini" mode, joint-limit derivative in "hadamard" mode)
    and fits the quadratic growth constant along each; "hadamard" mode fits
    over the shrinking direction ball as well, witnesses included.
    """
    if mode not in ("dini", "hadamard"):
        raise ConfigurationError(f"unknown mode {mode!r}")
    sched = _deepened(schedule)
    condition = "SPC-Dini" if mode == "dini" else "SPC-Had"
    report = StrongPseudoconvexityReport(mode=mode, delta=sched.tau(sched.stages - 1))

    unresolved = []
    for u in dirs:
        e1 = dini1(f, x, u, sched) if mode == "dini" else hadamard1(f, x, u, sched)
        if e1.trend in (TREND_DIV_PLUS, TREND_DIV_MINUS):
            continue
        if e1.trend != TREND_CONVERGED:
            unresolved.append(_witness(u, "first_order", e1))
            continue
        if abs(e1.limit) > zero_band:
            continue
        key = tuple(float(c) for c in u)
        report.zero_dirs.append(key)
        growth = estimate_liminf(
            eval_growth2(f, x),
            u,
            sched,
            hints=f.witness_pairs(x, u) if mode == "hadamard" else None,
            vary_direction=(mode == "hadamard"),
        )
        report.alpha[key] = growth.value

    failing = [k for k, a in report.alpha.items() if a <= zero_band]
    if failing:
        witnesses = [
            {"direction": list(k), "kind": "growth2", "value": report.alpha[k]}
            for k in failing
        ]
        report.outcome = Verdict(condition, FAIL, witnesses, zero_band)
    elif unresolved:
        report.outcome = Verdict(condition, INCONCLUSIVE, unresolved, zero_band)
    else:
        report.outcome = Verdict(
            condition, PASS, [], zero_band,
            note=f"{len(report.zero_dirs)} zero direction(s)"
        )
    return report


@dataclass
class LStabilityReport:
    """Probe for a Lipschitz-type bound on the ray derivative in the point.

    ``K_hat`` is the largest observed ratio |d1(y;u) - d1(x;u)| / (|y-x| |u|);
    ``ratios_by_radius`` records the per-radius maxima.  FAIL (with the
    growing ratios as witness) when the maxima grow monotonically by at
    least a factor 4 from the largest probe radius to the smallest; a PASS
    is only the absence of observed violation."""

    K_hat: float
    ratios_by_radius: list[tuple[float, float]]
    violation_witness: Optional[list[tuple[float, float]]]
    outcome: Verdict = None  # type: ignore[assignment]


def check_lstability(
    f: ProperFunction,
    x,
    dirs: DirectionSet,
    schedule: SampleSchedule,
    probe_radii: Sequence[float] = (1e-2, 1e-3, 1e-4),
    growth_factor: float = 4.0,
) -> LStabilityReport:
    x = np.asarray(x, dtype=float)
    sched = _deepened(schedule)
    radii = sorted(float(r) for r in probe_radii)[::-1]
    if len(radii) < 2:
        raise ConfigurationError("need at least two probe radii")

    base: dict[tuple, float] = {}
    for u in dirs:
        e = dini1(f, x, u, sched)
        base[tuple(u)] = e.limit if e.trend == TREND_CONVERGED else e.value

    ratios = []
    for r in radii:
        worst = 0.0
        for dy in dirs:
            y = x + r * np.asarray(dy)
            if not math.isfinite(f(y)):
                continue
            for u in dirs:
                b = base[tuple(u)]
                if not math.isfinite(b):
                    continue
                e = dini1(f, y, u, sched)
                v = e.limit if e.trend == TREND_CONVERGED else e.value
                if not math.isfinite(v):
                    continue
                worst = max(worst, abs(v - b) / r)
        ratios.append((r, worst))

    k_hat = max(w for _, w in ratios)
    vals = [w for _, w in ratios]
    growing = all(b > a for a, b in zip(vals, vals[1:]))
    blown_up = vals[0] > 0 and vals[-1] >= growth_factor * vals[0]
    if growing and blown_up:
        outcome = Verdict(
            "LStab", FAIL,
            [{"radius": r, "ratio": w} for r, w in ratios],
            note=f"ratio grew {vals[-1] / vals[0]:.3g}x from r={radii[0]:g} to r={radii[-1]:g}",
        )
        witness = list(ratios)
    else:
        outcome = Verdict(
            "LStab", PASS, [],
            note=f"no violation found, K_hat = {k_hat:.6g}",
        )
        witness = None
    return LStabilityReport(k_hat, ratios, witness, outcome)


def check_spc_first_order_sufficiency(
    f: ProperFunction,
    x,
    dirs: DirectionSet,
    schedule: SampleSchedule,
    zero_band: float = DEFAULT_ZERO_BAND,
) -> Verdict:
    """First-order test for an isolated second-order minimum under strong
    pseudoconvexity in the joint-limit sense.

    The pseudoconvexity precondition is checked first (joint-limit mode);
    when it does not PASS the verdict is INCONCLUSIVE with note
    "precondition-not-met" rather than an exception, since a failed
    precondition is itself an informative outcome.  With the precondition
    in place the verdict reduces to zero belonging to the first-order
    subdifferential.
    """
    spc = check_strong_pseudoconvex(f, x, dirs, schedule, mode="hadamard",
                                    zero_band=zero_band)
    sd = subdiff_contains(f, x, np.zeros(f.dim), dirs, schedule, zero_band)
    if spc.outcome.outcome != PASS:
        return Verdict(
            "Thm5", INCONCLUSIVE, spc.outcome.witnesses, zero_band,
            note=(
                "precondition-not-met: strong pseudoconvexity "
                f"(joint-limit mode) was {spc.outcome.outcome}; "
                f"subdifferential membership alone was {sd.outcome}"
            ),
        )
    return Verdict("Thm5", sd.outcome, sd.witnesses, zero_band,
                   note="strong pseudoconvexity precondition PASS")
