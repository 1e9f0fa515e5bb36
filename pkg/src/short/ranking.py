"""Rank decisions by their share of the best solutions, then test prefixes.

rank() pools many independent optimize() runs and, per objective, marks the
top decile of pooled solutions "best". A decision scores

    support s = n1 * decile
    probability p = n1 * decile / (n1 * decile + n2 * (1 - decile))

per objective, where n1 counts best solutions holding the decision and
n2 = N - n1; its rank value is the sum of s*p over enabled objectives.

prefix_curve() replays prefixes of the ranked ordering as fixed priors (x = 0
is the no-decision baseline) and records per-objective medians and spreads
over repeated samples. smooth_curve() pools statistically indistinguishable
consecutive stretches. detect_keys() reports the shortest prefix that
collapses every objective's spread below a fraction of the baseline spread.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from math import ceil
from random import Random
from typing import Mapping, Sequence

from short.config import PipelineConfig
from short.inference import Decision, Graph, sample
from short.model import GoalModel
from short.optimize import Individual, individual_decisions, optimize
from short.stats import median_iqr, segment_ordered


def bore_score(n1: int, n2: int, decile: float = 0.1) -> tuple[float, float]:
    """(support, probability) of a decision from best/rest counts."""
    if n1 < 0 or n2 < 0:
        raise ValueError("counts must be nonnegative")
    s = n1 * decile
    denom = n1 * decile + n2 * (1.0 - decile)
    if denom == 0.0:
        return 0.0, 0.0
    return s, s / denom


@dataclass(frozen=True)
class DecisionScore:
    """One ranked decision with its per-objective evidence."""

    node: str
    polarity: str
    value: float
    support: Mapping[str, float]
    probability: Mapping[str, float]

    @property
    def decision(self) -> Decision:
        return (self.node, self.polarity)

    def to_dict(self) -> dict:
        return {
            "node": self.node,
            "polarity": self.polarity,
            "value": self.value,
            "support": dict(self.support),
            "probability": dict(self.probability),
        }


@dataclass(frozen=True)
class DecisionOrdering:
    """Decisions sorted most-valuable-first; one entry per node."""

    entries: tuple[DecisionScore, ...]

    @property
    def decisions(self) -> tuple[Decision, ...]:
        return tuple(e.decision for e in self.entries)

    def __len__(self) -> int:
        return len(self.entries)

    def to_dict(self) -> dict:
        return {"entries": [e.to_dict() for e in self.entries]}


def rank(
    model: GoalModel,
    costs: Mapping[str, float],
    cfg: PipelineConfig,
    rng: Random,
    *,
    graph: Graph | None = None,
    base_prior: tuple[Decision, ...] = (),
) -> DecisionOrdering:
    """Pool cfg.rank_runs optimize() runs and score every decision seen."""
    g = graph or Graph(model)
    runs = []
    for _ in range(cfg.rank_runs):
        child = Random(rng.getrandbits(64))
        runs.append(
            optimize(model, costs, cfg.optimizer, child, graph=g, base_prior=base_prior)
        )
    pooled: list[Individual] = [ind for res in runs for ind in res.population]
    run_sizes = [len(res.population) for res in runs]
    return _score_pool(g, pooled, run_sizes, cfg, exclude={nid for nid, _ in base_prior})


def _score_pool(
    g: Graph,
    pooled: Sequence[Individual],
    run_sizes: Sequence[int],
    cfg: PipelineConfig,
    exclude: set[str] | None = None,
) -> DecisionOrdering:
    decision_sets = [individual_decisions(g, ind) for ind in pooled]
    total = len(pooled)
    enabled = cfg.enabled
    directions = cfg.optimizer.directions

    best_indices: dict[str, list[int]] = {}
    for key in enabled:
        sign = -1.0 if directions[key] > 0 else 1.0  # sort ascending on sign*value

        def sort_block(indices: list[int]) -> list[int]:
            k = max(1, ceil(cfg.decile * len(indices)))
            ordered = sorted(
                indices, key=lambda i: (sign * pooled[i].solution.objectives.get(key), i)
            )
            return ordered[:k]

        if cfg.decile_scope == "pooled":
            best_indices[key] = sort_block(list(range(total)))
        else:
            best, start = [], 0
            for size in run_sizes:
                best.extend(sort_block(list(range(start, start + size))))
                start += size
            best_indices[key] = best

    candidates: set[Decision] = set()
    for ds in decision_sets:
        candidates.update(ds)
    if exclude:
        candidates = {d for d in candidates if d[0] not in exclude}

    scores: list[DecisionScore] = []
    for nid, pol in sorted(candidates):
        support: dict[str, float] = {}
        prob: dict[str, float] = {}
        value = 0.0
        for key in enabled:
            n1 = sum(1 for i in best_indices[key] if (nid, pol) in decision_sets[i])
            s, p = bore_score(n1, total - n1, cfg.decile)
            support[key], prob[key] = s, p
            value += s * p
        scores.append(DecisionScore(nid, pol, value, support, prob))

    # most valuable first; ties settle lexicographically, then one entry per
    # node (the stronger polarity) so prefixes are coherent priors
    scores.sort(key=lambda e: (-e.value, e.node, e.polarity))
    seen: set[str] = set()
    entries = []
    for e in scores:
        if e.node not in seen:
            seen.add(e.node)
            entries.append(e)
    return DecisionOrdering(tuple(entries))


# -- prefix testing -------------------------------------------------------------


@dataclass(frozen=True)
class CurvePoint:
    """Outcome spread after fixing the first x ranked decisions."""

    x: int
    median: Mapping[str, float]
    iqr: Mapping[str, float]
    batch: Mapping[str, tuple[float, ...]]
    median_smoothed: Mapping[str, float] | None = None
    iqr_smoothed: Mapping[str, float] | None = None

    def to_dict(self) -> dict:
        out = {
            "x": self.x,
            "median": dict(self.median),
            "iqr": dict(self.iqr),
        }
        if self.median_smoothed is not None:
            out["median_smoothed"] = dict(self.median_smoothed)
            out["iqr_smoothed"] = dict(self.iqr_smoothed or {})
        return out


@dataclass(frozen=True)
class PrefixCurve:
    """Per-prefix-length outcome statistics, x = 0 .. len(decisions)."""

    decisions: tuple[Decision, ...]
    objectives: tuple[str, ...]
    points: tuple[CurvePoint, ...]

    @property
    def smoothed(self) -> bool:
        return bool(self.points) and self.points[0].median_smoothed is not None

    def to_dict(self) -> dict:
        return {
            "decisions": [list(d) for d in self.decisions],
            "objectives": list(self.objectives),
            "points": [p.to_dict() for p in self.points],
        }


def prefix_curve(
    model: GoalModel,
    ordering: DecisionOrdering,
    costs: Mapping[str, float],
    cfg: PipelineConfig,
    rng: Random,
    *,
    graph: Graph | None = None,
    base_prior: tuple[Decision, ...] = (),
) -> PrefixCurve:
    """Sample each ranked prefix; one cost draw serves the whole curve unless
    cfg.redraw_costs asks for a fresh draw per point."""
    from short.model import sample_costs  # local: avoids cycle at import time

    g = graph or Graph(model)
    decisions = ordering.decisions
    points: list[CurvePoint] = []
    for x in range(len(decisions) + 1):
        prior = base_prior + decisions[:x]
        point_costs = costs
        if cfg.redraw_costs:
            point_costs = sample_costs(model, seed=rng.getrandbits(64)).values
        batch: dict[str, list[float]] = {key: [] for key in cfg.enabled}
        for _ in range(cfg.samples_per_point):
            child = Random(rng.getrandbits(64))
            sol = sample(
                model,
                prior,
                point_costs,
                child,
                graph=g,
                goals_roots_only=cfg.optimizer.goals_roots_only,
            )
            for key in cfg.enabled:
                batch[key].append(sol.objectives.get(key))
        med: dict[str, float] = {}
        iqr: dict[str, float] = {}
        for key in cfg.enabled:
            med[key], iqr[key] = median_iqr(batch[key])
        points.append(
            CurvePoint(x, med, iqr, {k: tuple(v) for k, v in batch.items()})
        )
    return PrefixCurve(decisions, cfg.enabled, tuple(points))


def smooth_curve(curve: PrefixCurve, cfg: PipelineConfig | None = None) -> PrefixCurve:
    """Pool consecutive stretches whose batches are statistically alike.

    Deterministic (fixed internal seed) and idempotent: segmentation depends
    only on the raw batches, which smoothing never rewrites.
    """
    cfg = cfg or PipelineConfig()
    med_by_x: list[dict[str, float]] = [dict() for _ in curve.points]
    iqr_by_x: list[dict[str, float]] = [dict() for _ in curve.points]
    for key in curve.objectives:
        groups = [list(p.batch[key]) for p in curve.points]
        segments = segment_ordered(
            groups,
            a12_threshold=cfg.smooth_a12,
            confidence=cfg.smooth_confidence,
            resamples=cfg.smooth_resamples,
            rng=Random(0),
        )
        for lo, hi in segments:
            pooled = [v for grp in groups[lo:hi] for v in grp]
            med, iqr = median_iqr(pooled)
            for x in range(lo, hi):
                med_by_x[x][key] = med
                iqr_by_x[x][key] = iqr
    points = tuple(
        replace(p, median_smoothed=med_by_x[i], iqr_smoothed=iqr_by_x[i])
        for i, p in enumerate(curve.points)
    )
    return PrefixCurve(curve.decisions, curve.objectives, points)


# -- key detection ----------------------------------------------------------------


@dataclass(frozen=True)
class KeyReport:
    """The shortest ranked prefix that pins down every enabled objective."""

    kappa: int
    keys: tuple[Decision, ...]
    baseline_iqr: Mapping[str, float]
    residual_iqr: Mapping[str, float]
    collapse_ratio: Mapping[str, float]
    collapsed: bool
    threshold: float

    def to_dict(self) -> dict:
        return {
            "kappa": self.kappa,
            "keys": [list(d) for d in self.keys],
            "baseline_iqr": dict(self.baseline_iqr),
            "residual_iqr": dict(self.residual_iqr),
            "collapse_ratio": dict(self.collapse_ratio),
            "collapsed": self.collapsed,
            "threshold": self.threshold,
        }


def detect_keys(curve: PrefixCurve, cfg: PipelineConfig | None = None) -> KeyReport:
    """Find the smallest x whose spread is <= threshold * baseline everywhere.

    Uses smoothed spreads when present (raw behind cfg.keys_use_raw_iqr).
    A baseline spread of zero counts as already collapsed. When no prefix
    collapses, kappa = len(decisions) and collapsed is False.
    """
    cfg = cfg or PipelineConfig()
    if not curve.points:
        raise ValueError("empty curve")

    def spread(point: CurvePoint) -> Mapping[str, float]:
        if curve.smoothed and not cfg.keys_use_raw_iqr:
            return point.iqr_smoothed or point.iqr
        return point.iqr

    baseline = dict(spread(curve.points[0]))
    threshold = cfg.key_ratio_threshold
    kappa = None
    for point in curve.points[1:]:
        ok = True
        for key in curve.objectives:
            base = baseline[key]
            if base == 0.0:
                continue
            if spread(point)[key] > threshold * base:
                ok = False
                break
        if ok:
            kappa = point.x
            break
    collapsed = kappa is not None
    if kappa is None:
        kappa = len(curve.decisions)
    at = curve.points[kappa] if kappa < len(curve.points) else curve.points[-1]
    residual = dict(spread(at))
    ratio = {
        key: (0.0 if baseline[key] == 0.0 else residual[key] / baseline[key])
        for key in curve.objectives
    }
    return KeyReport(
        kappa=kappa,
        keys=curve.decisions[:kappa],
        baseline_iqr=baseline,
        residual_iqr=residual,
        collapse_ratio=ratio,
        collapsed=collapsed,
        threshold=threshold,
    )


# -- the whole pipeline -------------------------------------------------------------


@dataclass(frozen=True)
class KeysResult:
    ordering: DecisionOrdering
    curve: PrefixCurve
    report: KeyReport


def find_keys(
    model: GoalModel,
    costs: Mapping[str, float],
    cfg: PipelineConfig,
    rng: Random,
    *,
    graph: Graph | None = None,
    base_prior: tuple[Decision, ...] = (),
) -> KeysResult:
    """rank -> test -> smooth -> detect, sharing one rng and cost draw."""
    g = graph or Graph(model)
    ordering = rank(model, costs, cfg, rng, graph=g, base_prior=base_prior)
    curve = prefix_curve(model, ordering, costs, cfg, rng, graph=g, base_prior=base_prior)
    curve = smooth_curve(curve, cfg)
    report = detect_keys(curve, cfg)
    return KeysResult(ordering, curve, report)
