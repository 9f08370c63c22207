"""Built-in test functions with known derivative values and witnesses.

Each entry bundles a function handle, a candidate point, and a list of
machine-checkable expected results.  Expected values are tagged with their
basis: "known-value" for results with a stated closed form, "algebra" for
direct symbolic computation, "grid-oracle" for values the brute-force
oracles reproduce, "divergence" for sign-of-infinity claims.

The two functions with structure on a measure-zero set (the parabola trap
and the quartic-root valley) ship witness families: random sampling almost
surely misses their curves, so the sequences that expose the structure are
part of the corpus data.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from . import classify, oracle
from .core import (
    TREND_DIV_PLUS,
    SampleSchedule,
    estimate_liminf,
)
from .derivatives import DirectionSet, dini1, dini2, ginchev, hadamard1, hadamard2
from .errors import ConfigurationError
from .functions import ProperFunction, WitnessFamily, eval_growth2

Array = np.ndarray


@dataclass(frozen=True)
class Expected:
    """One reproducible claim about a corpus entry."""

    id: str
    basis: str
    run: Callable[["CorpusEntry", SampleSchedule], tuple[bool, str]]


@dataclass
class CorpusEntry:
    function: ProperFunction
    candidate_point: Array
    expected: list[Expected] = field(default_factory=list)

    @property
    def name(self) -> str:
        return self.function.name


# ---------------------------------------------------------------------------
# function definitions
# ---------------------------------------------------------------------------

def _neg_quad() -> ProperFunction:
    return ProperFunction(
        name="NEG_QUAD",
        dim=2,
        fn=lambda x: -(x[0] ** 2 + x[1] ** 2),
        gradient=lambda x: np.array([-2.0 * x[0], -2.0 * x[1]]),
        domain_box=(np.array([-2.0, -2.0]), np.array([2.0, 2.0])),
    )


def _ex1() -> ProperFunction:
    def fn(x):
        s = x[1] - np.cbrt(x[0] ** 4)
        return abs(s) ** 1.5

    def gradient(x):
        s = x[1] - np.cbrt(x[0] ** 4)
        root = math.sqrt(abs(s)) * np.sign(s)
        return np.array([-2.0 * root * np.cbrt(x[0]), 1.5 * root])

    def curve_pairs(sign: float):
        # depth capped so t^2 stays representable in the quotients
        def make_pairs(count: int):
            pairs = []
            for m in range(1, min(count, 100) + 1):
                t = 8.0 ** (-m)
                pairs.append((t, np.array([sign, 2.0 ** (-m)])))
            return pairs

        return make_pairs

    zero = np.zeros(2)
    return ProperFunction(
        name="EX1",
        dim=2,
        fn=fn,
        gradient=gradient,
        domain_box=(np.array([-1.0, -1.0]), np.array([1.0, 1.0])),
        witnesses=[
            WitnessFamily(zero, np.array([1.0, 0.0]), curve_pairs(1.0)),
            WitnessFamily(zero, np.array([-1.0, 0.0]), curve_pairs(-1.0)),
        ],
    )


def _parabola_trap() -> ProperFunction:
    def fn(x):
        if x[1] == x[0] * x[0] and x[0] > 0.0:
            return -(x[0] ** 2 + x[1] ** 2)
        return 0.0

    def make_pairs(count: int):
        pairs = []
        for k in range(3, min(count, 120) + 3):
            t = 2.0 ** (-k)
            pairs.append((t, np.array([1.0, t])))
        return pairs

    return ProperFunction(
        name="PARABOLA_TRAP",
        dim=2,
        fn=fn,
        domain_box=(np.array([-1.0, -1.0]), np.array([1.0, 1.0])),
        witnesses=[WitnessFamily(np.zeros(2), np.array([1.0, 0.0]), make_pairs)],
    )


def _sqnorm() -> ProperFunction:
    return ProperFunction(
        name="SQNORM",
        dim=2,
        fn=lambda x: float(x @ x),
        gradient=lambda x: 2.0 * x,
        domain_box=(np.array([-2.0, -2.0]), np.array([2.0, 2.0])),
    )


def _quartic() -> ProperFunction:
    return ProperFunction(
        name="QUARTIC",
        dim=2,
        fn=lambda x: float(x @ x) ** 2,
        gradient=lambda x: 4.0 * float(x @ x) * x,
        domain_box=(np.array([-2.0, -2.0]), np.array([2.0, 2.0])),
    )


def _cube1d() -> ProperFunction:
    return ProperFunction(
        name="CUBE1D",
        dim=1,
        fn=lambda x: x[0] ** 3,
        gradient=lambda x: np.array([3.0 * x[0] ** 2]),
        domain_box=(np.array([-1.5]), np.array([1.5])),
    )


def _abs1d() -> ProperFunction:
    return ProperFunction(
        name="ABS1D",
        dim=1,
        fn=lambda x: abs(x[0]),
        domain_box=(np.array([-1.5]), np.array([1.5])),
    )


def _half1d() -> ProperFunction:
    return ProperFunction(
        name="HALF1D",
        dim=1,
        fn=lambda x: x[0] if x[0] >= 0.0 else math.inf,
        domain_box=(np.array([-1.5]), np.array([1.5])),
    )


# ---------------------------------------------------------------------------
# expected-value helpers
# ---------------------------------------------------------------------------

DEEP = SampleSchedule(stages=20)


def _close(got: float, want: float, tol: float) -> tuple[bool, str]:
    ok = math.isfinite(got) and abs(got - want) <= tol
    return ok, f"got {got:.9g}, want {want:.9g} (tol {tol:g})"


def _est_value(kind: str, e: CorpusEntry, u, schedule: SampleSchedule,
               use_limit: bool = False):
    f, x = e.function, e.candidate_point
    u = np.asarray(u, dtype=float)
    if kind == "hadamard1":
        est = hadamard1(f, x, u, schedule)
    elif kind == "hadamard2":
        est = hadamard2(f, x, np.zeros(f.dim), u, schedule)
    elif kind == "dini1":
        est = dini1(f, x, u, schedule)
    elif kind == "dini2":
        est = dini2(f, x, u, schedule)
    elif kind == "growth2":
        est = estimate_liminf(eval_growth2(f, x), u, schedule, vary_direction=False)
    else:
        raise ConfigurationError(f"unknown estimate kind {kind}")
    return est.limit if use_limit else est.value, est


def expect_value(ident, basis, kind, u, want, tol, schedule=None, use_limit=False):
    def run(entry: CorpusEntry, default_schedule: SampleSchedule):
        sched = schedule if schedule is not None else default_schedule
        got, _ = _est_value(kind, entry, u, sched, use_limit)
        return _close(got, want, tol)

    return Expected(ident, basis, run)


def expect_trend(ident, basis, kind, u, want_trend, schedule=None):
    def run(entry: CorpusEntry, default_schedule: SampleSchedule):
        sched = schedule if schedule is not None else default_schedule
        _, est = _est_value(kind, entry, u, sched)
        return est.trend == want_trend, f"trend {est.trend}, want {want_trend}"

    return Expected(ident, basis, run)


def expect_verdict(ident, basis, tag, want_outcome, dirs_builder=None, note_contains=None):
    def run(entry: CorpusEntry, schedule: SampleSchedule):
        f, x = entry.function, entry.candidate_point
        dirs = (dirs_builder(f.dim) if dirs_builder
                else DirectionSet.fibonacci_sphere(16, f.dim))
        if tag == "Thm1":
            v = classify.check_necessary_local_min(f, x, dirs, schedule)
        elif tag == "Thm1-Dini":
            v = classify.check_necessary_local_min_dini(f, x, dirs, schedule)
        elif tag == "Thm2-b":
            v = classify.check_isolated_order2(f, x, dirs, schedule, variant="b")
        elif tag == "Thm2-c":
            v = classify.check_isolated_order2(f, x, dirs, schedule, variant="c")
        elif tag == "2Stat":
            v = classify.is_2stationary(f, x, dirs, schedule)
        elif tag == "SPC-Dini":
            v = classify.check_strong_pseudoconvex(f, x, dirs, schedule, "dini").outcome
        elif tag == "SPC-Had":
            v = classify.check_strong_pseudoconvex(f, x, dirs, schedule, "hadamard").outcome
        elif tag == "LStab":
            v = classify.check_lstability(f, x, dirs, schedule).outcome
        elif tag == "Thm5":
            v = classify.check_spc_first_order_sufficiency(f, x, dirs, schedule)
        else:
            raise ConfigurationError(f"unknown condition tag {tag}")
        ok = v.outcome == want_outcome
        if ok and note_contains:
            ok = note_contains in v.note
        detail = f"{tag} -> {v.outcome}"
        if v.note:
            detail += f" ({v.note})"
        return ok, detail

    return Expected(ident, basis, run)


def expect_oracle(ident, basis, kind, want, grid_radii=None, ppa=21):
    def run(entry: CorpusEntry, schedule: SampleSchedule):
        f, x = entry.function, entry.candidate_point
        grid = oracle.GridSpec.around(x, grid_radii, ppa)
        if kind == "local_min":
            rep = oracle.local_min(f, x, grid)
        elif kind == "isolated_order2":
            rep = oracle.isolated_order2(f, x, grid)
        else:
            raise ConfigurationError(f"unknown oracle kind {kind}")
        return rep.outcome == want, f"oracle {kind} -> {rep.outcome}, want {want}"

    return Expected(ident, basis, run)


def _axes_dirs(dim: int) -> DirectionSet:
    return DirectionSet.axis_and_diagonals(dim)


# ---------------------------------------------------------------------------
# the corpus
# ---------------------------------------------------------------------------

def corpus() -> list[CorpusEntry]:
    entries = []

    neg = CorpusEntry(_neg_quad(), np.zeros(2))
    neg.expected = [
        expect_value("hadamard1@e1=0", "algebra", "hadamard1", [1, 0], 0.0, 1e-3),
        expect_value("hadamard2@e1=-2", "known-value", "hadamard2", [1, 0], -2.0, 1e-3),
        expect_value("hadamard2@diag=-2", "known-value", "hadamard2",
                     [math.sqrt(0.5), math.sqrt(0.5)], -2.0, 1e-3),
        expect_value("dini1@(1,0)from(1,0)", "known-value", "dini1", [1, 0], 0.0, 1e-3),
        expect_verdict("thm1-fail", "known-value", "Thm1", "FAIL"),
        expect_verdict("thm1-dini-fail", "known-value", "Thm1-Dini", "FAIL"),
        expect_verdict("2stat-fail", "known-value", "2Stat", "FAIL"),
        expect_oracle("oracle-not-isolated", "grid-oracle", "isolated_order2", "NO"),
    ]
    entries.append(neg)

    ex1 = CorpusEntry(_ex1(), np.zeros(2))
    ex1.expected = [
        expect_value("growth2@(1,0)=1", "known-value", "growth2", [1, 0], 1.0, 1e-9),
        expect_value("growth2@(-1,0)=1", "known-value", "growth2", [-1, 0], 1.0, 1e-9),
        expect_trend("growth2@(0,1)-diverges", "known-value", "growth2", [0, 1],
                     TREND_DIV_PLUS, schedule=DEEP),
        expect_trend("growth2@diag-diverges", "known-value", "growth2",
                     [math.sqrt(0.5), math.sqrt(0.5)], TREND_DIV_PLUS, schedule=DEEP),
        expect_value("dini2@(1,0)=2", "known-value", "dini2", [1, 0], 2.0, 1e-3),
        expect_verdict("spc-dini-pass", "known-value", "SPC-Dini", "PASS",
                       dirs_builder=_axes_dirs),
        expect_verdict("lstab-fail", "known-value", "LStab", "FAIL",
                       dirs_builder=_axes_dirs),
        expect_verdict("thm2-b-fail", "known-value", "Thm2-b", "FAIL",
                       dirs_builder=_axes_dirs),
        expect_verdict("thm5-precondition", "known-value", "Thm5", "INCONCLUSIVE",
                       dirs_builder=_axes_dirs, note_contains="precondition-not-met"),
        expect_oracle("oracle-local-min", "known-value", "local_min", "YES"),
        expect_oracle("oracle-not-isolated", "known-value", "isolated_order2", "NO"),
    ]
    entries.append(ex1)

    trap = CorpusEntry(_parabola_trap(), np.zeros(2))
    trap.expected = [
        expect_value("hadamard1@(1,0)=0", "known-value", "hadamard1", [1, 0],
                     0.0, 1e-6, schedule=DEEP),
        expect_value("hadamard2@(1,0)=-2", "known-value", "hadamard2", [1, 0],
                     -2.0, 1e-3),
        expect_value("dini1@(1,0)=0", "known-value", "dini1", [1, 0], 0.0, 1e-6),
        expect_value("dini2@(1,0)=0", "known-value", "dini2", [1, 0], 0.0, 1e-6),
        expect_verdict("thm1-fail", "known-value", "Thm1", "FAIL"),
        expect_verdict("thm1-dini-pass", "known-value", "Thm1-Dini", "PASS"),
        expect_oracle("oracle-not-local-min", "known-value", "local_min", "NO"),
    ]
    entries.append(trap)

    sq = CorpusEntry(_sqnorm(), np.zeros(2))
    sq.expected = [
        expect_value("hadamard2@e1=2", "algebra", "hadamard2", [1, 0], 2.0, 1e-3),
        expect_value("dini2@e1=2", "algebra", "dini2", [1, 0], 2.0, 1e-3),
        expect_verdict("thm1-pass", "algebra", "Thm1", "PASS"),
        expect_verdict("thm1-dini-pass", "algebra", "Thm1-Dini", "PASS"),
        expect_verdict("thm2-b-pass", "algebra", "Thm2-b", "PASS"),
        expect_verdict("2stat-pass", "algebra", "2Stat", "PASS"),
        expect_verdict("spc-dini-pass", "algebra", "SPC-Dini", "PASS"),
        expect_verdict("lstab-pass", "algebra", "LStab", "PASS",
                       dirs_builder=_axes_dirs),
        expect_oracle("oracle-isolated", "grid-oracle", "isolated_order2", "YES"),
        expect_oracle("oracle-local-min", "grid-oracle", "local_min", "YES"),
    ]
    entries.append(sq)

    quart = CorpusEntry(_quartic(), np.zeros(2))
    quart.expected = [
        expect_verdict("thm2-b-fail", "grid-oracle", "Thm2-b", "FAIL"),
        expect_verdict("thm2-c-fail", "grid-oracle", "Thm2-c", "FAIL"),
        expect_oracle("oracle-not-isolated", "grid-oracle", "isolated_order2", "NO"),
        expect_oracle("oracle-local-min", "grid-oracle", "local_min", "YES"),
    ]
    entries.append(quart)

    cube = CorpusEntry(_cube1d(), np.zeros(1))

    def cube_ginchev(entry: CorpusEntry, schedule: SampleSchedule):
        e0, e1, e2 = ginchev(entry.function, entry.candidate_point,
                             np.array([1.0]), schedule)
        vals = (e0.limit, e1.limit, e2.limit)
        ok = all(abs(v) <= 1e-3 for v in vals)
        return ok, f"chain limits {tuple(round(v, 6) for v in vals)}, want (0, 0, 0)"

    cube.expected = [
        Expected("ginchev=(0,0,0)", "grid-oracle", cube_ginchev),
        expect_verdict("2stat-pass", "grid-oracle", "2Stat", "PASS"),
        expect_oracle("oracle-not-isolated", "grid-oracle", "isolated_order2", "NO"),
    ]
    entries.append(cube)

    ab = CorpusEntry(_abs1d(), np.zeros(1))
    ab.expected = [
        expect_verdict("thm2-b-pass", "algebra", "Thm2-b", "PASS"),
        expect_verdict("lstab-fail", "algebra", "LStab", "FAIL"),
        expect_oracle("oracle-isolated", "grid-oracle", "isolated_order2", "YES"),
    ]
    entries.append(ab)

    half = CorpusEntry(_half1d(), np.zeros(1))
    half.expected = [
        expect_trend("hadamard1@-1-plus-inf", "algebra", "hadamard1", [-1.0],
                     TREND_DIV_PLUS),
        expect_verdict("thm2-b-pass", "algebra", "Thm2-b", "PASS"),
        expect_oracle("oracle-isolated", "grid-oracle", "isolated_order2", "YES"),
    ]
    entries.append(half)

    return entries


def by_name(name: str) -> CorpusEntry:
    for entry in corpus():
        if entry.name == name:
            return entry
    raise ConfigurationError(f"unknown corpus function {name!r}")


def names() -> list[str]:
    return [e.name for e in corpus()]
