"""Label propagation and stochastic sampling over goal models.

The unit of propagation is a *wave*, started from one labeled node. A wave
crosses each incident edge and pushes an expectation onto the neighbor:

    expectation(source, edge) = edge.weight * source      if |source| == 1
                                source                    if edge.weight > 0
                                -source                   otherwise

Undefined neighbors take the expectation and the wave continues from them;
labeled neighbors that disagree in polarity mark the edge ignored and keep
their label. Direction matters:

* upward (child -> parent) propagation is always on: a decision's label is
  evidence for every goal it feeds;
* downward (parent -> child) propagation of positive expectations happens
  only while walking down from the wave's start node, so satisfying one
  alternative under a goal never force-satisfies its siblings;
* negative expectations also descend from nodes reached on the way up: an
  abandoned goal suppresses the subtree that exists only to serve it.

After a wave visit finishes, an AND node whose labeled children disagree with
its own polarity resets the children that this visit set (pinned nodes are
kept and the conflicting edge is ignored instead).

sample() seeds priors, then repeatedly picks an undefined decision leaf
uniformly at random, satisfies it, and propagates. A leaf knocked back to
undefined by an AND reset is re-picked at most once; after that it is pinned.
"""

from __future__ import annotations

from dataclasses import dataclass
from random import Random
from typing import Iterable, Iterator, Mapping, Sequence

from short.model import EdgeKind, GoalModel, Label, NodeKind, leaves

SATISFIED = "satisfied"
DENIED = "denied"

Decision = tuple[str, str]  # (node id, "satisfied" | "denied")

OBJECTIVE_KEYS = ("o1", "o2", "o3", "o4")


def expectation(source: Label, kind: EdgeKind) -> Label:
    """Label a neighbor is expected to take, given a fully committed source."""
    if source is Label.UNDEFINED:
        raise ValueError("no expectation propagates from an UNDEFINED label")
    return Label(_expect(source.value, kind.weight))


def _expect(src: float, weight: float) -> float:
    if src == 1.0 or src == -1.0:
        return weight * src
    if weight > 0.0:
        return src
    return -src


@dataclass(frozen=True)
class ObjectiveVector:
    """The four outcome measures of one labeling."""

    o1_cost: float
    o2_ignored: float
    o3_goals: float
    o4_softgoals: float

    def as_tuple(self) -> tuple[float, float, float, float]:
        return (self.o1_cost, self.o2_ignored, self.o3_goals, self.o4_softgoals)

    def get(self, key: str) -> float:
        return self.as_tuple()[OBJECTIVE_KEYS.index(key)]

    def to_dict(self) -> dict[str, float]:
        return {
            "o1_cost": self.o1_cost,
            "o2_ignored": self.o2_ignored,
            "o3_goals": self.o3_goals,
            "o4_softgoals": self.o4_softgoals,
        }


@dataclass(frozen=True)
class Solution:
    """Outcome of one sample(): terminal labels summarized plus objectives."""

    satisfied: frozenset[str]
    denied: frozenset[str]
    ignored_count: int
    objectives: ObjectiveVector
    prior_used: tuple[Decision, ...]

    def to_dict(self) -> dict:
        return {
            "satisfied": sorted(self.satisfied),
            "denied": sorted(self.denied),
            "ignored_count": self.ignored_count,
            "objectives": self.objectives.to_dict(),
            "prior_used": [list(d) for d in self.prior_used],
        }


class Graph:
    """Flat integer-indexed view of a model; build once, sample many times."""

    __slots__ = (
        "model",
        "ids",
        "idx",
        "incident",
        "child_adj",
        "is_and",
        "hard",
        "soft",
        "root_hard",
        "leaf_order",
        "leaf_set",
        "edge_ends",
        "n",
    )

    def __init__(self, model: GoalModel):
        self.model = model
        self.ids = [n.id for n in model.nodes]
        self.idx = {nid: i for i, nid in enumerate(self.ids)}
        self.n = len(self.ids)
        kinds = [n.kind for n in model.nodes]
        self.is_and = [k is NodeKind.AND for k in kinds]
        self.hard = [i for i, k in enumerate(kinds) if k is NodeKind.HARDGOAL]
        self.soft = [i for i, k in enumerate(kinds) if k is NodeKind.SOFTGOAL]
        self.root_hard = [
            i for i, k in enumerate(kinds) if k is NodeKind.HARDGOAL and model.nodes[i].root
        ]
        # incident[u] = (edge id, neighbor, weight, downward?); parents first
        inc: list[list[tuple[int, int, float, bool]]] = [[] for _ in range(self.n)]
        child_adj: list[list[tuple[int, int, float]]] = [[] for _ in range(self.n)]
        self.edge_ends = []
        for eid, e in enumerate(model.edges):
            p, c, w = self.idx[e.parent], self.idx[e.child], e.kind.weight
            inc[c].append((eid, p, w, False))
            self.edge_ends.append((e.parent, e.child))
        for eid, e in enumerate(model.edges):
            p, c, w = self.idx[e.parent], self.idx[e.child], e.kind.weight
            inc[p].append((eid, c, w, True))
            child_adj[p].append((eid, c, w))
        self.incident = [tuple(v) for v in inc]
        self.child_adj = [tuple(v) for v in child_adj]
        self.leaf_order = [self.idx[nid] for nid in leaves(model)]
        self.leaf_set = set(self.leaf_order)


@dataclass
class LabelState:
    """Mutable labeling: per-node levels plus the set of ignored edges."""

    graph: Graph
    values: list[float]
    ignored: set[int]
    pinned: set[int]

    @classmethod
    def initial(cls, model_or_graph: GoalModel | Graph) -> "LabelState":
        g = model_or_graph if isinstance(model_or_graph, Graph) else Graph(model_or_graph)
        return cls(g, [0.0] * g.n, set(), set())

    @property
    def labels(self) -> dict[str, Label]:
        return {nid: Label(v) for nid, v in zip(self.graph.ids, self.values)}

    @property
    def ignored_edges(self) -> frozenset[tuple[str, str]]:
        return frozenset(self.graph.edge_ends[eid] for eid in self.ignored)

    @property
    def ignored_count(self) -> int:
        return len(self.ignored)

    def assign(self, node_id: str, label: Label, pin: bool = False) -> None:
        i = self.graph.idx[node_id]
        self.values[i] = label.value
        if pin:
            self.pinned.add(i)


# wave visit modes
_ROOT, _ASCENT, _DESCENT = 0, 1, 2


def _wave(state: LabelState, start: int, rng: Random | None) -> None:
    """One propagation wave from a labeled node; iterative post-order."""
    g = state.graph
    values = state.values
    ignored = state.ignored
    pinned = state.pinned

    # frame: [node, mode, arrival edge, edges, cursor, children set by visit]
    def make_frame(u: int, mode: int, arrival: int) -> list:
        edges = list(g.incident[u])
        if rng is not None and len(edges) > 1:
            rng.shuffle(edges)
        return [u, mode, arrival, edges, 0, []]

    stack = [make_frame(start, _ROOT, -1)]
    while stack:
        frame = stack[-1]
        u, mode, arrival, edges, cursor, set_children = frame
        if cursor < len(edges):
            frame[4] += 1
            eid, other, weight, down = edges[cursor]
            if eid == arrival or eid in ignored:
                continue
            exp = _expect(values[u], weight)
            if down and mode == _ASCENT and exp >= 0.0:
                continue  # positive push downward only while already walking down
            cur = values[other]
            if cur == 0.0:
                values[other] = exp
                if down:
                    set_children.append((eid, other))
                stack.append(make_frame(other, _DESCENT if down else _ASCENT, eid))
            elif cur * exp < 0.0:
                ignored.add(eid)
            continue
        # visit complete: AND nodes require labeled children to share polarity
        if g.is_and[u] and values[u] != 0.0:
            sign = values[u]
            failed = False
            for eid, c, _w in g.child_adj[u]:
                if eid not in ignored and values[c] != 0.0 and values[c] * sign < 0.0:
                    failed = True
                    break
            if failed:
                for eid, c in set_children:
                    if c in pinned:
                        ignored.add(eid)
                    else:
                        values[c] = 0.0
        stack.pop()


def step(state: LabelState, model: GoalModel, node: str, rng: Random | None) -> LabelState:
    """Propagate one wave from `node`; mutates and returns `state`."""
    i = state.graph.idx[node]
    if state.values[i] == 0.0:
        raise ValueError(f"step from UNDEFINED node {node!r}")
    _wave(state, i, rng)
    return state


def _polarity_value(polarity: str | Label) -> float:
    if isinstance(polarity, Label):
        if polarity in (Label.SATISFIED, Label.DENIED):
            return polarity.value
        raise ValueError(f"prior polarity must be full: {polarity}")
    if polarity == SATISFIED:
        return 1.0
    if polarity == DENIED:
        return -1.0
    raise ValueError(f"unknown polarity {polarity!r}")


def normalize_prior(prior: Mapping[str, str | Label] | Iterable[Decision] | None) -> tuple[Decision, ...]:
    if prior is None:
        return ()
    items = prior.items() if isinstance(prior, Mapping) else prior
    out: list[Decision] = []
    for nid, pol in items:
        out.append((nid, SATISFIED if _polarity_value(pol) > 0 else DENIED))
    return tuple(out)


def sample(
    model: GoalModel,
    prior: Mapping[str, str | Label] | Iterable[Decision] | None,
    costs: Mapping[str, float],
    rng: Random,
    *,
    graph: Graph | None = None,
    goals_roots_only: bool = False,
) -> Solution:
    """One stochastic labeling: priors first, then random satisfaction picks.

    Deterministic in (model, prior order, costs, rng state). Every decision
    leaf is labeled at termination.
    """
    g = graph or Graph(model)
    state = LabelState.initial(g)
    decided = normalize_prior(prior)

    # priors are pinned before any wave so no reset can undo a fixed decision
    for nid, pol in decided:
        i = g.idx[nid]
        state.values[i] = 1.0 if pol == SATISFIED else -1.0
        state.pinned.add(i)
    for nid, _pol in decided:
        _wave(state, g.idx[nid], rng)

    values = state.values
    picks: dict[int, int] = {}
    while True:
        open_leaves = [i for i in g.leaf_order if values[i] == 0.0]
        if not open_leaves:
            break
        i = open_leaves[rng.randrange(len(open_leaves))]
        picks[i] = picks.get(i, 0) + 1
        if picks[i] >= 2:
            state.pinned.add(i)  # one re-pick allowed, then the label sticks
        values[i] = 1.0
        _wave(state, i, rng)

    return _summarize(g, state, decided, costs, goals_roots_only)


def _summarize(
    g: Graph,
    state: LabelState,
    prior_used: tuple[Decision, ...],
    costs: Mapping[str, float],
    goals_roots_only: bool,
) -> Solution:
    values = state.values
    sat = frozenset(g.ids[i] for i, v in enumerate(values) if v == 1.0)
    den = frozenset(g.ids[i] for i, v in enumerate(values) if v == -1.0)
    o1 = 0.0
    for i in g.leaf_order:
        if values[i] == 1.0:
            o1 += costs[g.ids[i]]
    goal_pool = g.root_hard if goals_roots_only else g.hard
    o3 = sum(1 for i in goal_pool if values[i] == 1.0)
    o4 = sum(1 for i in g.soft if values[i] == 1.0)
    vec = ObjectiveVector(o1, float(len(state.ignored)), float(o3), float(o4))
    return Solution(sat, den, len(state.ignored), vec, prior_used)


def leaf_decisions(model_or_graph: GoalModel | Graph, solution: Solution) -> frozenset[Decision]:
    """The ±1 leaf assignments of a solution, as (id, polarity) pairs."""
    g = model_or_graph if isinstance(model_or_graph, Graph) else Graph(model_or_graph)
    out: set[Decision] = set()
    for i in g.leaf_order:
        nid = g.ids[i]
        if nid in solution.satisfied:
            out.add((nid, SATISFIED))
        elif nid in solution.denied:
            out.add((nid, DENIED))
    return frozenset(out)


def enumerate_worlds(
    model: GoalModel,
    costs: Mapping[str, float],
    *,
    max_leaves: int = 20,
    goals_roots_only: bool = False,
) -> Iterator[tuple[dict[str, str], Solution]]:
    """Exhaustive ground truth: every satisfy/deny assignment of the leaves.

    Deterministic: leaves toggle in lexicographic order and waves run with
    canonical (unshuffled) edge order. Usable up to max_leaves decisions.
    """
    g = Graph(model)
    ids = [g.ids[i] for i in g.leaf_order]
    if len(ids) > max_leaves:
        raise ValueError(f"{len(ids)} leaves exceed the enumeration cap {max_leaves}")
    for mask in range(1 << len(ids)):
        state = LabelState.initial(g)
        assignment: dict[str, str] = {}
        for bit, (i, nid) in enumerate(zip(g.leaf_order, ids)):
            up = bool(mask & (1 << bit))
            state.values[i] = 1.0 if up else -1.0
            state.pinned.add(i)
            assignment[nid] = SATISFIED if up else DENIED
        for i in g.leaf_order:
            _wave(state, i, None)
        decided = tuple((nid, assignment[nid]) for nid in ids)
        yield assignment, _summarize(g, state, decided, costs, goals_roots_only)
