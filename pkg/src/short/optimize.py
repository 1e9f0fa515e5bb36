"""Decision-set search: continuous domination plus a differential-evolution loop.

Comparison never uses raw objective values. Each generation normalizes every
objective over the population snapshot's min/max to [0, 1], then scores

    loss(x, y) = sum_j -exp(direction_j * (x_j - y_j) / n) / n

and x dominates y exactly when loss(y, x) > loss(x, y). The exponential makes
a large edge on one objective outweigh many small losses, so the comparison
stays decisive even with four objectives.

The loop seeds a population of plain samples, then per slot builds a mutant
from three distinct donors and replaces the slot only when the mutant
dominates it. Donors and normalization bounds come from the generation-start
snapshot and replacements land in index order, so evaluation order cannot
change the result. The search stops after a generation with zero
replacements, or at the generation cap.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import exp
from random import Random
from typing import Mapping, Sequence

from short.inference import (
    Decision,
    Graph,
    ObjectiveVector,
    Solution,
    leaf_decisions,
    sample,
)
from short.model import GoalModel

DEFAULT_DIRECTIONS: Mapping[str, int] = {"o1": -1, "o2": -1, "o3": 1, "o4": 1}


@dataclass(frozen=True)
class OptimizerConfig:
    """Knobs for the search; defaults match the reference procedure."""

    pop_multiplier: int = 10
    p1: float = 0.5
    max_generations: int = 100
    enabled: tuple[str, ...] = ("o1", "o2", "o3", "o4")
    directions: Mapping[str, int] = field(default_factory=lambda: dict(DEFAULT_DIRECTIONS))
    # The published mutation gate reads `p1 < rand()`; set this to compare
    # `rand() < p1` instead.
    mutation_rand_first: bool = False
    goals_roots_only: bool = False

    def __post_init__(self) -> None:
        if not 0.0 <= self.p1 <= 1.0:
            raise ValueError("p1 must be in [0, 1]")
        if self.pop_multiplier < 1:
            raise ValueError("pop_multiplier must be >= 1")
        if self.max_generations < 0:
            raise ValueError("max_generations must be >= 0")
        if not self.enabled:
            raise ValueError("at least one objective must be enabled")
        for key in self.enabled:
            if key not in self.directions:
                raise ValueError(f"no direction for objective {key!r}")

    @property
    def weights(self) -> tuple[int, ...]:
        return tuple(int(self.directions[k]) for k in self.enabled)

    def values(self, vec: ObjectiveVector) -> tuple[float, ...]:
        return tuple(vec.get(k) for k in self.enabled)


@dataclass(frozen=True)
class Individual:
    """A prior (possibly empty) plus the solution it sampled."""

    prior: tuple[Decision, ...]
    solution: Solution


def individual_decisions(graph: Graph, ind: Individual) -> frozenset[Decision]:
    """Donor material: the prior plus every full leaf label of the solution."""
    return leaf_decisions(graph, ind.solution) | frozenset(ind.prior)


# -- continuous domination ----------------------------------------------------


def cdom_loss(x: Sequence[float], y: Sequence[float], cfg: OptimizerConfig) -> float:
    """Mean exponential loss of x against y over normalized objectives."""
    w = cfg.weights
    n = len(w)
    if len(x) != n or len(y) != n:
        raise ValueError("objective vectors must match cfg.enabled")
    return sum(-exp(w[j] * (x[j] - y[j]) / n) for j in range(n)) / n


def dominates(x: Sequence[float], y: Sequence[float], cfg: OptimizerConfig) -> bool:
    """Strict continuous domination on normalized vectors."""
    return cdom_loss(y, x, cfg) > cdom_loss(x, y, cfg)


def normalize_objectives(
    vectors: Sequence[Sequence[float]],
) -> list[tuple[float, ...]]:
    """Map each objective across the given vectors onto [0, 1].

    A constant objective maps to 0.0 everywhere so it cannot contribute any
    loss difference.
    """
    if not vectors:
        return []
    n = len(vectors[0])
    los = [min(v[j] for v in vectors) for j in range(n)]
    his = [max(v[j] for v in vectors) for j in range(n)]
    spans = [hi - lo for lo, hi in zip(los, his)]
    out = []
    for v in vectors:
        out.append(
            tuple(
                0.0 if spans[j] == 0.0 else (v[j] - los[j]) / spans[j]
                for j in range(n)
            )
        )
    return out


class _Bounds:
    """Normalization bounds frozen from a population snapshot."""

    __slots__ = ("los", "spans")

    def __init__(self, vectors: Sequence[Sequence[float]]):
        n = len(vectors[0])
        self.los = [min(v[j] for v in vectors) for j in range(n)]
        his = [max(v[j] for v in vectors) for j in range(n)]
        self.spans = [hi - lo for lo, hi in zip(self.los, his)]

    def norm(self, v: Sequence[float]) -> tuple[float, ...]:
        return tuple(
            0.0 if self.spans[j] == 0.0 else (v[j] - self.los[j]) / self.spans[j]
            for j in range(len(v))
        )


# -- mutation -------------------------------------------------------------------


def mutate(
    a: frozenset[Decision],
    b: frozenset[Decision],
    c: frozenset[Decision],
    p1: float,
    rng: Random,
    rand_first: bool = False,
) -> tuple[Decision, ...]:
    """Recombine three donor decision sets into a mutant prior.

    Per candidate decision k: take it when a holds it, else when the gate
    fires and b or c holds it. Gates draw once per candidate in sorted order,
    so equal seeds give equal mutants. Donor a wins polarity conflicts, then
    b. With the default gate `p1 < rand()`, p1 = 1 copies a exactly and
    p1 = 0 admits every donor decision.
    """
    union = sorted(a | b | c)
    gates = {}
    for k in union:
        u = rng.random()
        gates[k] = (u < p1) if rand_first else (p1 < u)
    chosen: dict[str, str] = {}
    for nid, pol in union:
        if (nid, pol) in a and nid not in chosen:
            chosen[nid] = pol
    for donor in (b, c):
        for nid, pol in union:
            if (nid, pol) in donor and gates[(nid, pol)] and nid not in chosen:
                chosen[nid] = pol
    return tuple(sorted(chosen.items()))


# -- the search loop ------------------------------------------------------------


@dataclass(frozen=True)
class OptimizeResult:
    population: tuple[Individual, ...]
    generations: int
    evaluations: int  # sample() calls spent


def optimize(
    model: GoalModel,
    costs: Mapping[str, float],
    cfg: OptimizerConfig,
    rng: Random,
    *,
    graph: Graph | None = None,
    base_prior: tuple[Decision, ...] = (),
) -> OptimizeResult:
    """Evolve decision sets for the model; deterministic in the rng."""
    g = graph or Graph(model)
    n_slots = cfg.pop_multiplier * len(g.leaf_order)
    if n_slots == 0:
        raise ValueError("model has no decision leaves")
    pinned_nodes = {nid for nid, _ in base_prior}

    def run_sample(prior: tuple[Decision, ...]) -> Solution:
        child = Random(rng.getrandbits(64))
        return sample(
            model, prior, costs, child, graph=g, goals_roots_only=cfg.goals_roots_only
        )

    pop = [Individual(base_prior, run_sample(base_prior)) for _ in range(n_slots)]
    evaluations = n_slots

    generations = 0
    for _gen in range(cfg.max_generations):
        generations += 1
        snapshot = pop[:]
        decision_sets = [individual_decisions(g, ind) for ind in snapshot]
        bounds = _Bounds([cfg.values(ind.solution.objectives) for ind in snapshot])
        replaced = False
        new_pop = pop[:]
        for i in range(n_slots):
            donors = rng.sample([j for j in range(n_slots) if j != i], 3)
            da, db, dc = (decision_sets[j] for j in donors)
            mutant_decisions = mutate(da, db, dc, cfg.p1, rng, cfg.mutation_rand_first)
            prior = base_prior + tuple(
                (nid, pol) for nid, pol in mutant_decisions if nid not in pinned_nodes
            )
            sol = run_sample(prior)
            evaluations += 1
            nx = bounds.norm(cfg.values(sol.objectives))
            ny = bounds.norm(cfg.values(snapshot[i].solution.objectives))
            if dominates(nx, ny, cfg):
                new_pop[i] = Individual(prior, sol)
                replaced = True
        pop = new_pop
        if not replaced:
            break
    return OptimizeResult(tuple(pop), generations, evaluations)


def cdom_best(population: Sequence[Individual], cfg: OptimizerConfig) -> Individual:
    """Round-robin champion: the member dominating the most peers."""
    if not population:
        raise ValueError("empty population")
    vectors = normalize_objectives([cfg.values(ind.solution.objectives) for ind in population])
    best_i, best_score = 0, -1
    for i, x in enumerate(vectors):
        score = sum(1 for y in vectors if dominates(x, y, cfg))
        if score > best_score:
            best_i, best_score = i, score
    return population[best_i]
