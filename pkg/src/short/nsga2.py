"""NSGA-II baseline over the same decision space and sampling core.

Kept deliberately textbook: classic Pareto dominance on the enabled
objectives, fast non-dominated sort, crowding distance, binary tournament,
uniform crossover, per-trit mutation. No continuous domination here; the
point of the baseline is an external reference, not a second copy of the
main search.

A genome holds one trit per decision leaf: satisfy, deny, or leave free.
Decoding turns the non-free trits into a prior and the sampler fills in
the rest, so both methods answer the same question about the same space.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field, replace
from random import Random
from typing import Mapping, Sequence

from short.inference import Graph, Solution, sample
from short.model import GoalModel
from short.optimize import DEFAULT_DIRECTIONS, OptimizerConfig, optimize

SATISFY = 1
DENY = -1
FREE = 0

Genome = tuple[int, ...]


@dataclass(frozen=True)
class Nsga2Config:
    """Standard knobs; defaults follow common practice for this size."""

    population: int = 100
    generations: int = 250
    crossover_rate: float = 0.9
    mutation_rate: float | None = None  # default 1 / genome length
    enabled: tuple[str, ...] = ("o1", "o2", "o3", "o4")
    directions: Mapping[str, int] = field(default_factory=lambda: dict(DEFAULT_DIRECTIONS))

    def __post_init__(self) -> None:
        if self.population < 4:
            raise ValueError("population must be >= 4")
        if self.generations < 0:
            raise ValueError("generations must be >= 0")
        if not 0.0 <= self.crossover_rate <= 1.0:
            raise ValueError("crossover_rate must be in [0, 1]")
        if self.mutation_rate is not None and not 0.0 <= self.mutation_rate <= 1.0:
            raise ValueError("mutation_rate must be in [0, 1]")
        if not self.enabled:
            raise ValueError("at least one objective must be enabled")
        for key in self.enabled:
            if key not in self.directions:
                raise ValueError(f"no direction for objective {key!r}")


def decode(genome: Genome, leaf_order: Sequence[str]) -> tuple[tuple[str, str], ...]:
    """Non-free trits become the prior; free leaves stay with the sampler."""
    if len(genome) != len(leaf_order):
        raise ValueError("genome length must match leaf count")
    out = []
    for trit, leaf in zip(genome, leaf_order):
        if trit == SATISFY:
            out.append((leaf, "satisfied"))
        elif trit == DENY:
            out.append((leaf, "denied"))
    return tuple(out)


def pareto_dominates(x: Sequence[float], y: Sequence[float]) -> bool:
    """x weakly better everywhere and strictly better somewhere (maximizing)."""
    better = False
    for a, b in zip(x, y):
        if a < b:
            return False
        if a > b:
            better = True
    return better


def fast_nondominated_sort(
    vectors: Sequence[Sequence[float]],
) -> list[list[int]]:
    """Deb's front peeling over maximized objective vectors."""
    if not vectors:
        raise ValueError("fast_nondominated_sort needs at least one vector")
    n = len(vectors)
    dominated_by: list[list[int]] = [[] for _ in range(n)]
    counts = [0] * n
    for i in range(n):
        for j in range(i + 1, n):
            if pareto_dominates(vectors[i], vectors[j]):
                dominated_by[i].append(j)
                counts[j] += 1
            elif pareto_dominates(vectors[j], vectors[i]):
                dominated_by[j].append(i)
                counts[i] += 1
    fronts = [[i for i in range(n) if counts[i] == 0]]
    while True:
        nxt: list[int] = []
        for i in fronts[-1]:
            for j in dominated_by[i]:
                counts[j] -= 1
                if counts[j] == 0:
                    nxt.append(j)
        if not nxt:
            break
        fronts.append(sorted(nxt))
    return fronts


def crowding_distance(
    front: Sequence[int], vectors: Sequence[Sequence[float]]
) -> dict[int, float]:
    """Sum over objectives of each member's normalized neighbor gap."""
    dist = {i: 0.0 for i in front}
    if len(front) <= 2:
        return {i: float("inf") for i in front}
    n_obj = len(vectors[front[0]])
    for j in range(n_obj):
        ordered = sorted(front, key=lambda i: (vectors[i][j], i))
        lo = vectors[ordered[0]][j]
        hi = vectors[ordered[-1]][j]
        dist[ordered[0]] = dist[ordered[-1]] = float("inf")
        span = hi - lo
        if span == 0.0:
            continue
        for pos in range(1, len(ordered) - 1):
            gap = vectors[ordered[pos + 1]][j] - vectors[ordered[pos - 1]][j]
            dist[ordered[pos]] += gap / span
    return dist


@dataclass(frozen=True)
class Nsga2Result:
    genomes: tuple[Genome, ...]
    solutions: tuple[Solution, ...]
    fronts: tuple[tuple[int, ...], ...]
    generations: int
    evaluations: int  # sample() calls spent


def nsga2(
    model: GoalModel,
    costs: Mapping[str, float],
    cfg: Nsga2Config,
    rng: Random,
    *,
    graph: Graph | None = None,
) -> Nsga2Result:
    """Evolve trit genomes; deterministic in the rng."""
    g = graph or Graph(model)
    leaf_order = [g.ids[i] for i in g.leaf_order]
    length = len(leaf_order)
    if length == 0:
        raise ValueError("model has no decision leaves")
    mut = cfg.mutation_rate if cfg.mutation_rate is not None else 1.0 / length
    weights = tuple(int(cfg.directions[k]) for k in cfg.enabled)

    def evaluate(genome: Genome) -> Solution:
        child = Random(rng.getrandbits(64))
        return sample(model, decode(genome, leaf_order), costs, child, graph=g)

    def keyed(sol: Solution) -> tuple[float, ...]:
        return tuple(w * sol.objectives.get(k) for k, w in zip(cfg.enabled, weights))

    def random_genome() -> Genome:
        return tuple(rng.choice((DENY, FREE, SATISFY)) for _ in range(length))

    pop = [random_genome() for _ in range(cfg.population)]
    sols = [evaluate(genome) for genome in pop]
    evaluations = cfg.population

    def tournament(ranks: dict[int, int], crowd: dict[int, float]) -> int:
        a, b = rng.sample(range(len(pop)), 2)
        if ranks[a] != ranks[b]:
            return a if ranks[a] < ranks[b] else b
        if crowd[a] != crowd[b]:
            return a if crowd[a] > crowd[b] else b
        return a

    def cross(pa: Genome, pb: Genome) -> tuple[Genome, Genome]:
        if rng.random() >= cfg.crossover_rate:
            return pa, pb
        ca, cb = [], []
        for x, y in zip(pa, pb):
            if rng.random() < 0.5:
                ca.append(x)
                cb.append(y)
            else:
                ca.append(y)
                cb.append(x)
        return tuple(ca), tuple(cb)

    def mutate(genome: Genome) -> Genome:
        return tuple(
            rng.choice((DENY, FREE, SATISFY)) if rng.random() < mut else trit
            for trit in genome
        )

    for _gen in range(cfg.generations):
        vectors = [keyed(s) for s in sols]
        fronts = fast_nondominated_sort(vectors)
        ranks = {i: r for r, fr in enumerate(fronts) for i in fr}
        crowd: dict[int, float] = {}
        for fr in fronts:
            crowd.update(crowding_distance(fr, vectors))

        children: list[Genome] = []
        while len(children) < cfg.population:
            pa = pop[tournament(ranks, crowd)]
            pb = pop[tournament(ranks, crowd)]
            ca, cb = cross(pa, pb)
            children.append(mutate(ca))
            if len(children) < cfg.population:
                children.append(mutate(cb))
        child_sols = [evaluate(genome) for genome in children]
        evaluations += len(children)

        # Elitist truncation of the combined generation.
        all_pop = pop + children
        all_sols = sols + child_sols
        vectors = [keyed(s) for s in all_sols]
        fronts = fast_nondominated_sort(vectors)
        chosen: list[int] = []
        for fr in fronts:
            if len(chosen) + len(fr) <= cfg.population:
                chosen.extend(fr)
                continue
            crowd = crowding_distance(fr, vectors)
            rest = sorted(fr, key=lambda i: (-crowd[i], i))
            chosen.extend(rest[: cfg.population - len(chosen)])
            break
        pop = [all_pop[i] for i in chosen]
        sols = [all_sols[i] for i in chosen]

    vectors = [keyed(s) for s in sols]
    fronts = fast_nondominated_sort(vectors)
    return Nsga2Result(
        genomes=tuple(pop),
        solutions=tuple(sols),
        fronts=tuple(tuple(fr) for fr in fronts),
        generations=cfg.generations,
        evaluations=evaluations,
    )


# -- comparison harness -------------------------------------------------------


def _coverage(model: GoalModel, sol: Solution) -> tuple[float, float]:
    """(f1 softgoal %, f2 goal %) for one outcome."""
    softs = sum(1 for n in model.nodes if n.kind.value == "softgoal")
    hards = sum(1 for n in model.nodes if n.kind.value == "hardgoal")
    f1 = 100.0 * sol.objectives.o4_softgoals / softs if softs else 100.0
    f2 = 100.0 * sol.objectives.o3_goals / hards if hards else 100.0
    return f1, f2


@dataclass(frozen=True)
class MethodSummary:
    name: str
    f1_median: float
    f1_iqr: float
    f2_median: float
    f2_iqr: float
    wall_clock_median: float
    evaluations_median: float

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "f1_median": self.f1_median,
            "f1_iqr": self.f1_iqr,
            "f2_median": self.f2_median,
            "f2_iqr": self.f2_iqr,
            "wall_clock_median": self.wall_clock_median,
            "evaluations_median": self.evaluations_median,
        }


@dataclass(frozen=True)
class ComparisonReport:
    runs: int
    short: MethodSummary
    baseline: MethodSummary

    def to_dict(self) -> dict:
        return {
            "runs": self.runs,
            "short": self.short.to_dict(),
            "nsga2": self.baseline.to_dict(),
        }

    def to_markdown(self) -> str:
        header = (
            "| method | f1: soft goals satisfied (%) | f2: goals satisfied (%) "
            "| wall clock (s) | sample() calls |\n"
            "|---|---|---|---|---|"
        )
        rows = []
        for s in (self.short, self.baseline):
            rows.append(
                f"| {s.name} | {s.f1_median:.2f} ± {s.f1_iqr:.2f} "
                f"| {s.f2_median:.2f} ± {s.f2_iqr:.2f} "
                f"| {s.wall_clock_median:.3f} | {s.evaluations_median:.0f} |"
            )
        return "\n".join([header] + rows)


def _summary(name, f1s, f2s, clocks, evals) -> MethodSummary:
    from short.stats import median_iqr

    f1m, f1q = median_iqr(f1s)
    f2m, f2q = median_iqr(f2s)
    cm, _ = median_iqr(clocks)
    em, _ = median_iqr(evals)
    return MethodSummary(name, f1m, f1q, f2m, f2q, cm, em)


def compare(
    model: GoalModel,
    costs: Mapping[str, float],
    short_cfg: OptimizerConfig,
    nsga_cfg: Nsga2Config,
    rng: Random,
    *,
    runs: int = 20,
    match_budget: bool = True,
    graph: Graph | None = None,
) -> ComparisonReport:
    """Median coverage and runtime for both methods over repeated runs.

    Both methods score the same model with the same cost draw, and both
    report the same statistic: best coverage sum over the run's final
    population. With match_budget the baseline's generation count is cut
    so both spend about the same number of sample() calls per run.
    """
    g = graph or Graph(model)
    s_f1, s_f2, s_clk, s_ev = [], [], [], []
    b_f1, b_f2, b_clk, b_ev = [], [], [], []
    for _run in range(runs):
        t0 = time.perf_counter()
        res = optimize(model, costs, short_cfg, Random(rng.getrandbits(64)), graph=g)
        s_clk.append(time.perf_counter() - t0)
        s_ev.append(float(res.evaluations))
        covs = [_coverage(model, ind.solution) for ind in res.population]
        f1, f2 = max(covs, key=lambda c: (c[0] + c[1], c))
        s_f1.append(f1)
        s_f2.append(f2)

        cfg = nsga_cfg
        if match_budget:
            gens = max(1, round(res.evaluations / nsga_cfg.population) - 1)
            cfg = replace(nsga_cfg, generations=gens)
        t0 = time.perf_counter()
        base = nsga2(model, costs, cfg, Random(rng.getrandbits(64)), graph=g)
        b_clk.append(time.perf_counter() - t0)
        b_ev.append(float(base.evaluations))
        front = base.fronts[0]
        covs = [_coverage(model, base.solutions[i]) for i in front]
        f1, f2 = max(covs, key=lambda c: (c[0] + c[1], c))
        b_f1.append(f1)
        b_f2.append(f2)

    return ComparisonReport(
        runs=runs,
        short=_summary("short", s_f1, s_f2, s_clk, s_ev),
        baseline=_summary("nsga2", b_f1, b_f2, b_clk, b_ev),
    )
