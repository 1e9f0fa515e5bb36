"""Rank statistics: percentiles, effect size, bootstrap, Scott-Knott clustering.

Two clustering entry points share the same split arithmetic and significance
gate:

* scott_knott(groups)      - sorts groups by mean, biclusters, returns ranks.
* segment_ordered(groups)  - keeps the given order (curve x positions are an
                             ordering, not a sortable set) and returns the
                             contiguous segments it found.

A split is kept only when it is both a non-small effect (A12) and significant
under a pooled bootstrap; otherwise the cluster stays whole.
"""

from __future__ import annotations

from random import Random
from typing import Sequence

import numpy as np

A12_THRESHOLD = 0.6
BOOTSTRAP_RESAMPLES = 512
BOOTSTRAP_CONFIDENCE = 0.99


def median_iqr(values: Sequence[float]) -> tuple[float, float]:
    """Median and 75th-minus-25th percentile, linear interpolation."""
    if not len(values):
        raise ValueError("median_iqr of empty sequence")
    arr = np.asarray(values, dtype=float)
    lo, mid, hi = np.percentile(arr, [25.0, 50.0, 75.0])
    return float(mid), float(hi - lo)


def a12(xs: Sequence[float], ys: Sequence[float]) -> float:
    """Vargha-Delaney effect size: P(x > y) + 0.5 * P(x == y)."""
    if not len(xs) or not len(ys):
        raise ValueError("a12 needs two nonempty samples")
    x = np.asarray(xs, dtype=float)[:, None]
    y = np.asarray(ys, dtype=float)[None, :]
    gt = np.count_nonzero(x > y)
    eq = np.count_nonzero(x == y)
    return (gt + 0.5 * eq) / (x.size * y.size)


def bootstrap_significant(
    xs: Sequence[float],
    ys: Sequence[float],
    confidence: float = BOOTSTRAP_CONFIDENCE,
    resamples: int = BOOTSTRAP_RESAMPLES,
    rng: Random | None = None,
) -> bool:
    """Two-sided pooled bootstrap test on the difference of means.

    Draws both resamples from the combined data (the no-difference world) and
    asks how often that world produces a gap at least as large as observed.
    """
    rng = rng or Random(0)
    xs = list(map(float, xs))
    ys = list(map(float, ys))
    observed = abs(_mean(xs) - _mean(ys))
    pool = xs + ys
    n, m = len(xs), len(ys)
    hits = 0
    for _ in range(resamples):
        a = [rng.choice(pool) for _ in range(n)]
        b = [rng.choice(pool) for _ in range(m)]
        if abs(_mean(a) - _mean(b)) >= observed:
            hits += 1
    return hits / resamples < 1.0 - confidence


def _mean(values: list[float]) -> float:
    return sum(values) / len(values)


def sk_split(values: Sequence[float]) -> tuple[int, float]:
    """Best binary split of an ordered value list.

    Returns (index, gain) where index i cuts into values[:i] / values[i:] and
    gain is the weighted squared deviation of part means from the whole mean:

        gain = (|m|/|l|) * (mean(m) - mean(l))^2 + (|n|/|l|) * (mean(n) - mean(l))^2

    Leftmost cut wins ties.
    """
    if len(values) < 2:
        raise ValueError("sk_split needs at least two values")
    arr = np.asarray(values, dtype=float)
    total = arr.sum()
    mu = total / arr.size
    best_i, best_gain = 1, -1.0
    acc = 0.0
    for i in range(1, arr.size):
        acc += float(arr[i - 1])
        ms, ns = i, arr.size - i
        m_mu = acc / ms
        n_mu = (total - acc) / ns
        gain = (ms * (m_mu - mu) ** 2 + ns * (n_mu - mu) ** 2) / arr.size
        if gain > best_gain + 1e-12:
            best_i, best_gain = i, gain
    return best_i, best_gain


def _group_split(groups: Sequence[Sequence[float]]) -> tuple[int, float]:
    # Same gain as sk_split but cuts only at group boundaries.
    sums = np.array([float(np.sum(g)) for g in groups])
    sizes = np.array([len(g) for g in groups], dtype=float)
    total, count = sums.sum(), sizes.sum()
    mu = total / count
    best_i, best_gain = 1, -1.0
    acc_s = acc_n = 0.0
    for i in range(1, len(groups)):
        acc_s += sums[i - 1]
        acc_n += sizes[i - 1]
        m_mu = acc_s / acc_n
        n_mu = (total - acc_s) / (count - acc_n)
        gain = (acc_n * (m_mu - mu) ** 2 + (count - acc_n) * (n_mu - mu) ** 2) / count
        if gain > best_gain + 1e-12:
            best_i, best_gain = i, gain
    return best_i, best_gain


def _split_is_real(
    left: list[float],
    right: list[float],
    a12_threshold: float,
    confidence: float,
    resamples: int,
    rng: Random,
) -> bool:
    if not left or not right:
        return False
    effect = a12(left, right)
    if max(effect, 1.0 - effect) < a12_threshold:
        return False
    return bootstrap_significant(left, right, confidence, resamples, rng)


def segment_ordered(
    groups: Sequence[Sequence[float]],
    a12_threshold: float = A12_THRESHOLD,
    confidence: float = BOOTSTRAP_CONFIDENCE,
    resamples: int = BOOTSTRAP_RESAMPLES,
    rng: Random | None = None,
) -> list[tuple[int, int]]:
    """Contiguous Scott-Knott segments [lo, hi) over groups kept in order."""
    if any(not len(g) for g in groups):
        raise ValueError("segment_ordered: empty group")
    rng = rng or Random(0)
    out: list[tuple[int, int]] = []

    def recurse(lo: int, hi: int) -> None:
        if hi - lo < 2:
            out.append((lo, hi))
            return
        cut, gain = _group_split(groups[lo:hi])
        cut += lo
        left = [float(v) for g in groups[lo:cut] for v in g]
        right = [float(v) for g in groups[cut:hi] for v in g]
        if gain <= 0.0 or not _split_is_real(left, right, a12_threshold, confidence, resamples, rng):
            out.append((lo, hi))
            return
        recurse(lo, cut)
        recurse(cut, hi)

    if groups:
        recurse(0, len(groups))
    return out


def scott_knott(
    groups: Sequence[Sequence[float]],
    a12_threshold: float = A12_THRESHOLD,
    confidence: float = BOOTSTRAP_CONFIDENCE,
    resamples: int = BOOTSTRAP_RESAMPLES,
    rng: Random | None = None,
) -> list[int]:
    """Cluster groups into statistically distinct ranks (1 = lowest mean).

    Groups are ordered by mean before splitting, so equal-rank groups are
    indistinguishable and rank labels are nondecreasing along that order.
    Returns one rank per input group, in input order.
    """
    if not groups:
        return []
    rng = rng or Random(0)
    order = sorted(range(len(groups)), key=lambda i: float(np.mean(groups[i])))
    segments = segment_ordered(
        [groups[i] for i in order], a12_threshold, confidence, resamples, rng
    )
    ranks = [0] * len(groups)
    for rank, (lo, hi) in enumerate(sorted(segments), start=1):
        for pos in range(lo, hi):
            ranks[order[pos]] = rank
    return ranks
