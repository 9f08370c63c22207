"""Sampling schedules and the shared liminf-estimation engine.

Every generalized directional derivative in this package is a joint lower
limit of a difference quotient as the step ``t`` shrinks to zero and the
probe direction ``u'`` drifts toward ``u``.  The engine discretizes that
limit as a sequence of nested rectangles

    region j = (0, tau_j] x ball(u, eps_j),    tau_j, eps_j geometric,

samples the quotient on the annulus ``(tau_{j+1}, tau_j]`` of each region
(log-uniform in t, uniform in the direction ball, plus a small set of
deterministic edge probes), merges any caller-supplied witness pairs that
fall inside the region, and records the per-stage sample minimum.

A liminf is not computable from finitely many black-box evaluations, so the
result is evidence, not a certificate: ``value`` is the final-stage sample
minimum, ``limit`` is a geometric (Aitken) extrapolation of the stage minima
that strips the leading O(tau) discretization bias, and ``trend`` labels how
the stage minima behaved.  Consumers that compare against exact thresholds
(zero bands, strict positivity) should use ``limit`` and gate on ``trend``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Callable, Optional, Sequence

import numpy as np

from .errors import ConfigurationError, DomainArithmeticError

TREND_CONVERGED = "converged"
TREND_DIV_PLUS = "diverging_plus_inf"
TREND_DIV_MINUS = "diverging_minus_inf"
TREND_OSCILLATING = "oscillating"
TREND_INCONCLUSIVE = "inconclusive"

TRENDS = (
    TREND_CONVERGED,
    TREND_DIV_PLUS,
    TREND_DIV_MINUS,
    TREND_OSCILLATING,
    TREND_INCONCLUSIVE,
)

#: Relative tolerance for calling the last three stage minima "converged".
DEFAULT_TREND_TOL = 1e-3
#: Absolute magnitude beyond which a monotone tail is labeled diverging.
DEFAULT_DIVERGENCE_THRESHOLD = 1e3

QuotientSampler = Callable[[float, np.ndarray], float]
HintPair = tuple[float, np.ndarray]


@dataclass(frozen=True)
class SampleSchedule:
    """Geometric discretization of a joint (t, u') lower limit.

    ``t0`` and ``eps0`` are the initial step bound and direction-ball radius;
    both shrink geometrically by their ratios, one stage per level.  The seed
    pins every random draw: stage j uses an RNG derived from (seed, j) only,
    so extending ``stages`` or ``samples_per_stage`` reproduces the draws of
    the shorter run as a prefix.
    """

    t0: float = 0.1
    t_ratio: float = 0.5
    eps0: float = 0.5
    eps_ratio: float = 0.5
    stages: int = 12
    samples_per_stage: int = 64
    seed: int = 0

    def __post_init__(self):
        if not (self.t0 > 0 and self.eps0 > 0):
            raise ConfigurationError("t0 and eps0 must be positive")
        if not (0.0 < self.t_ratio < 1.0 and 0.0 < self.eps_ratio < 1.0):
            raise ConfigurationError("ratios must lie strictly in (0, 1)")
        if self.stages < 3:
            raise ConfigurationError("trend labeling needs at least 3 stages")
        if self.samples_per_stage < 1:
            raise ConfigurationError("samples_per_stage must be positive")

    def tau(self, j: int) -> float:
        return self.t0 * self.t_ratio**j

    def eps(self, j: int) -> float:
        return self.eps0 * self.eps_ratio**j

    def with_(self, **kwargs) -> "SampleSchedule":
        return replace(self, **kwargs)


@dataclass
class LiminfEstimate:
    """Stagewise evidence for a liminf.

    ``stage_infima[j]`` is the minimum sampled quotient over region j
    (annulus samples, probes, and in-region hints).  True region infima are
    nondecreasing in j because the regions are nested; the sampled minima
    need not be monotone, which is what ``trend`` encodes.  ``value`` is the
    final-stage minimum, ``witness`` the pair attaining it, and ``limit`` the
    extrapolated stage-minimum limit (equal to ``value`` when extrapolation
    is not applicable).
    """

    stage_infima: list[float]
    value: float
    limit: float
    trend: str
    witness: Optional[HintPair] = None
    n_hints_used: int = 0

    @property
    def converged(self) -> bool:
        return self.trend == TREND_CONVERGED

    def conclusive_value(self) -> float:
        """Best point estimate for threshold tests: the extrapolated limit
        for converged trends, +/-inf for diverging ones, ``value`` otherwise."""
        if self.trend == TREND_DIV_PLUS:
            return math.inf
        if self.trend == TREND_DIV_MINUS:
            return -math.inf
        if self.trend == TREND_CONVERGED:
            return self.limit
        return self.value


def _stage_rng(seed: int, stage: int, block: int) -> np.random.Generator:
    return np.random.default_rng(
        np.random.SeedSequence(
            entropy=seed & 0xFFFFFFFFFFFFFFFF, spawn_key=(stage, block)
        )
    )


def _stage_samples(
    seed: int, stage: int, m: int, u: np.ndarray,
    tau_lo: float, tau_hi: float, eps: float, vary_direction: bool,
) -> tuple[np.ndarray, Optional[np.ndarray]]:
    """m random (t, u') samples for one stage.

    Each random block (steps, gaussians, radii) draws from its own
    (seed, stage)-keyed stream, so enlarging samples_per_stage keeps the
    original draws as a prefix and adding stages never disturbs earlier
    ones.
    """
    rng_t = _stage_rng(seed, stage, 0)
    ts = np.exp(rng_t.uniform(math.log(tau_lo), math.log(tau_hi), size=m))
    if not vary_direction:
        return ts, None
    n = u.size
    g = _stage_rng(seed, stage, 1).standard_normal((m, n))
    norms = np.linalg.norm(g, axis=1)
    norms[norms == 0.0] = 1.0
    radii = eps * _stage_rng(seed, stage, 2).uniform(size=m) ** (1.0 / n)
    ups = u + g * (radii / norms)[:, None]
    return ts, ups


def _direction_probes(u: np.ndarray, eps: float) -> list[np.ndarray]:
    """Deterministic ball-boundary probes: u itself, axis offsets, radial scalings."""
    probes = [u.copy()]
    n = u.size
    for i in range(n):
        e = np.zeros(n)
        e[i] = eps
        probes.append(u + e)
        probes.append(u - e)
    nu = float(np.linalg.norm(u))
    if nu > 0.0:
        probes.append(u * (1.0 + eps / nu))
        probes.append(u * (1.0 - eps / nu))
    return probes


def _eval_quotient(q: QuotientSampler, t: float, up: np.ndarray) -> float:
    v = float(q(t, up))
    if math.isnan(v):
        raise DomainArithmeticError(f"sampler returned NaN at t={t!r}")
    return v


def label_trend(
    stage_infima: Sequence[float],
    trend_tol: float = DEFAULT_TREND_TOL,
    divergence_threshold: float = DEFAULT_DIVERGENCE_THRESHOLD,
) -> str:
    """Classify the last three stage minima."""
    if len(stage_infima) < 3:
        return TREND_INCONCLUSIVE
    a, b, c = stage_infima[-3], stage_infima[-2], stage_infima[-1]
    if any(math.isinf(v) for v in (a, b, c)):
        if a == b == c == math.inf:
            return TREND_DIV_PLUS
        if a == b == c == -math.inf:
            return TREND_DIV_MINUS
        return TREND_INCONCLUSIVE
    scale = max(1.0, abs(a), abs(b), abs(c))
    tol = trend_tol * scale
    if max(abs(b - a), abs(c - b)) <= tol:
        return TREND_CONVERGED
    if c > b > a and c > divergence_threshold:
        return TREND_DIV_PLUS
    if c < b < a and c < -divergence_threshold:
        return TREND_DIV_MINUS
    d1, d2 = b - a, c - b
    if d1 * d2 < 0 and min(abs(d1), abs(d2)) > tol:
        return TREND_OSCILLATING
    return TREND_INCONCLUSIVE


def _aitken(tail: Sequence[float]) -> Optional[float]:
    a, b, c = tail[-3], tail[-2], tail[-1]
    denom = (c - b) - (b - a)
    if abs(denom) <= 1e-300:
        return c
    ait = c - (c - b) ** 2 / denom
    return ait if math.isfinite(ait) else None


def _wynn(tail: Sequence[float]) -> Optional[float]:
    """Even columns of Wynn's epsilon table; exact for sums of up to
    len(tail)//2 geometric modes."""
    prev = [0.0] * (len(tail) + 1)
    curr = list(tail)
    best: Optional[float] = None
    col = 0
    while len(curr) >= 2:
        nxt = []
        for i in range(len(curr) - 1):
            d = curr[i + 1] - curr[i]
            if d == 0.0 or not math.isfinite(d):
                return best
            nxt.append(prev[i + 1] + 1.0 / d)
        prev, curr = curr, nxt
        col += 1
        if col % 2 == 0 and curr:
            cand = curr[-1]
            if math.isfinite(cand):
                best = cand
    return best


def extrapolate_limit(stage_infima: Sequence[float], trend: str) -> float:
    """Extrapolated limit of the stage minima.

    Converged stage minima approach the liminf along geometric tails
    inherited from the schedule (one mode per shrinking scale: step ratio,
    ball ratio, their products).  Wynn's epsilon algorithm on the last few
    minima removes up to two such modes exactly; Aitken's delta-squared is
    the fallback.  Extrapolations that leave the neighborhood of the tail
    are rejected in favor of the final value, and non-converged trends are
    never extrapolated.
    """
    if trend == TREND_DIV_PLUS:
        return math.inf
    if trend == TREND_DIV_MINUS:
        return -math.inf
    tail = [v for v in stage_infima if math.isfinite(v)]
    if not tail:
        return stage_infima[-1] if stage_infima else math.inf
    c = tail[-1]
    if trend != TREND_CONVERGED or len(tail) < 3:
        return c
    spread = abs(tail[-1] - tail[-3]) + abs(tail[-2] - tail[-3])
    window = 4.0 * spread + 1e-12

    candidates = []
    if len(tail) >= 5:
        w = _wynn(tail[-5:])
        if w is not None:
            candidates.append(w)
    a = _aitken(tail)
    if a is not None:
        candidates.append(a)
    for cand in candidates:
        if abs(cand - c) <= window:
            return cand
    return c


def estimate_liminf(
    q: QuotientSampler,
    u: np.ndarray,
    schedule: SampleSchedule,
    hints: Optional[Sequence[HintPair]] = None,
    *,
    vary_direction: bool = True,
    trend_tol: float = DEFAULT_TREND_TOL,
    divergence_threshold: float = DEFAULT_DIVERGENCE_THRESHOLD,
) -> LiminfEstimate:
    """Estimate ``liminf q(t, u')`` as t -> 0+ and u' -> u.

    Stage j draws ``samples_per_stage`` pairs with t log-uniform on the
    annulus ``(tau_{j+1}, tau_j]`` and u' uniform in ``ball(u, eps_j)``
    (pinned to ``u`` when ``vary_direction`` is false), adds deterministic
    edge probes, and merges every hint pair lying in region j.  Hints are
    (t, u') pairs supplied by the caller to steer the sampler onto structure
    that random draws would miss (e.g. a measure-zero curve).

    Sampling is pre-generated per stage from (seed, stage) only, so results
    are deterministic for a fixed seed, stage extensions reproduce earlier
    stages, and doubling ``samples_per_stage`` keeps the original draws as a
    prefix (stage minima can only decrease).
    """
    u = np.asarray(u, dtype=float)
    if u.ndim != 1 or u.size < 1:
        raise ConfigurationError("direction must be a 1-D vector")
    hint_list: list[HintPair] = []
    if hints is not None:
        for t, up in hints:
            t = float(t)
            if t <= 0.0:
                raise ConfigurationError("hint steps must be positive")
            if t < 1e-150:
                continue  # below the representable quotient scale (t^2 underflows)
            hint_list.append((t, np.asarray(up, dtype=float)))

    stage_infima: list[float] = []
    final_best: Optional[tuple[float, HintPair]] = None
    hints_used = 0

    for j in range(schedule.stages):
        tau_hi = schedule.tau(j)
        tau_lo = schedule.tau(j + 1)
        eps_j = schedule.eps(j)

        pairs: list[HintPair] = []
        t_mid = math.sqrt(tau_lo * tau_hi)
        if vary_direction:
            dprobes = _direction_probes(u, eps_j)
            for tp in (tau_lo, tau_hi):
                for dp in dprobes:
                    pairs.append((tp, dp))
            pairs.append((t_mid, u))
        else:
            for tp in (tau_lo, t_mid, tau_hi):
                pairs.append((tp, u))

        ts, ups = _stage_samples(
            schedule.seed, j, schedule.samples_per_stage, u,
            tau_lo, tau_hi, eps_j, vary_direction,
        )
        if ups is None:
            pairs.extend((float(t), u) for t in ts)
        else:
            pairs.extend((float(t), up) for t, up in zip(ts, ups))

        if vary_direction:
            for t, up in hint_list:
                if t <= tau_hi and float(np.linalg.norm(up - u)) <= eps_j * (1 + 1e-12):
                    pairs.append((t, up))
                    hints_used += 1

        best_v = math.inf
        best_pair = pairs[0]
        first = True
        for t, up in pairs:
            v = _eval_quotient(q, t, up)
            if first or v < best_v:
                best_v = v
                best_pair = (t, up)
                first = False
        stage_infima.append(best_v)
        final_best = (best_v, best_pair)

    assert final_best is not None
    value = final_best[0]
    trend = label_trend(stage_infima, trend_tol, divergence_threshold)
    limit = extrapolate_limit(stage_infima, trend)
    return LiminfEstimate(
        stage_infima=stage_infima,
        value=value,
        limit=limit,
        trend=trend,
        witness=final_best[1],
        n_hints_used=hints_used,
    )


def inconclusive_estimate(note_value: float = math.inf) -> LiminfEstimate:
    """Error value for chained estimators whose inputs were unusable."""
    return LiminfEstimate(
        stage_infima=[], value=note_value, limit=note_value, trend=TREND_INCONCLUSIVE
    )
