"""Synthetic planning models with known high-leverage decisions.

Every generated model follows the same recipe: two top goals rest on one
cheap anchor commitment, a handful of expensive bets threaten the tops
through quality conduits, and each bet can be ruled out early by cheap
evidence tracks. The anchor plus the bet denials are therefore the model's
leverage points by construction, and generate_model returns them as ground
truth next to the model itself.

The rest of the node budget is decor that widens the baseline spread
without disturbing the planted outcome: conjunctive milestone chains on
the anchor's spine, and work-item leaves grouped into equal-cost exclusive
pairs (plus one three-way cycle when the leaf budget is odd).

Placement rules the recipe must respect, found the hard way:

- Rule-out gates take no parents. A parent over a gate relays the gate's
  negative label downward into its sibling when an evidence track loses,
  which silently kills the other track and makes bet denial deterministic.
- Conjunctive nodes appear only as single-child links in the spine chain,
  where parent and child always agree. Anywhere else a negative label on
  the parent washes live siblings.
- A bet's two gates listen to evidence leaves from two different exclusive
  pairs, so no single evidence leaf becomes ubiquitous and denial odds
  stay close to even.
- Exclusive pairs price both sides the same, so pair outcomes cancel out
  of the cost objective once the planted decisions are pinned.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from random import Random
from typing import Mapping

from short.model import (
    Edge,
    EdgeKind,
    GoalModel,
    Node,
    NodeKind,
)

DEFAULT_EDGE_MIX: Mapping[str, float] = {
    "makes": 0.5,
    "helps": 0.2,
    "hurts": 0.1,
    "breaks": 0.2,
}

SATISFIED = "satisfied"
DENIED = "denied"


class InfeasibleSpec(ValueError):
    """The requested node budget cannot host the requested key count."""


@dataclass(frozen=True)
class GenSpec:
    """Tuning knobs for one synthetic model."""

    nodes: int = 53
    keys: int = 3
    edge_mix: Mapping[str, float] = field(default_factory=lambda: dict(DEFAULT_EDGE_MIX))
    and_ratio: float = 0.25
    softgoal_fraction: float = 0.25
    seed: int = 0

    def __post_init__(self) -> None:
        if self.nodes < 3:
            raise ValueError("nodes must be >= 3")
        if self.keys < 1:
            raise ValueError("keys must be >= 1")
        extra = set(self.edge_mix) - set(DEFAULT_EDGE_MIX)
        if extra:
            raise ValueError(f"unknown edge kinds in mix: {sorted(extra)}")
        total = sum(self.edge_mix.values())
        if abs(total - 1.0) > 1e-9:
            raise ValueError(f"edge mix must sum to 1, got {total}")
        if any(p < 0.0 for p in self.edge_mix.values()):
            raise ValueError("edge mix probabilities must be >= 0")
        if not 0.0 <= self.and_ratio <= 1.0:
            raise ValueError("and_ratio must be in [0, 1]")
        if not 0.0 <= self.softgoal_fraction <= 1.0:
            raise ValueError("softgoal_fraction must be in [0, 1]")


def _split_decor(slack: int, and_ratio: float) -> tuple[int, int]:
    """Split leftover nodes into chain links and filler leaves.

    Returns (chain_length, filler_leaves). Each filler leaf brings its own
    choice frame, so fillers consume two nodes apiece; the chain absorbs
    whatever parity is left over. A lone filler leaf would have no rival to
    pair with, so that last slot becomes chain instead.
    """
    links = round(and_ratio * slack)
    links = max(0, min(slack, links))
    if (slack - links) % 2:
        links += 1 if links < slack else -1
    fillers = (slack - links) // 2
    if fillers == 1:
        links += 2
        fillers = 0
    return links, fillers


def _pick_kind(rng: Random, mix: Mapping[str, float], a: str, b: str) -> EdgeKind:
    """Weighted coin between two edge kinds, renormalized from the mix."""
    pa = mix.get(a, 0.0)
    pb = mix.get(b, 0.0)
    if pa + pb <= 0.0:
        return EdgeKind(a)
    return EdgeKind(a) if rng.random() * (pa + pb) < pa else EdgeKind(b)


def generate_model(spec: GenSpec) -> tuple[GoalModel, tuple[tuple[str, str], ...]]:
    """Build one synthetic model and return it with its planted decisions.

    Raises InfeasibleSpec when the node budget cannot host the requested
    number of keys (each bet beyond the anchor costs eight nodes, plus four
    more for rival tracks when there is exactly one bet).
    """
    m = spec.keys - 1
    required = 3 + 8 * m + (4 if m == 1 else 0)
    slack = spec.nodes - required
    if slack < 0:
        raise InfeasibleSpec(
            f"{spec.keys} keys need at least {required} nodes, got {spec.nodes}"
        )
    # Extra guards sharpen the conflict signal: each live bet clashes with
    # every guard hooked to it, while a denied bet quiets all of them.
    extra_guards = min(2 * m, slack)
    slack -= extra_guards
    links, fillers = _split_decor(slack, spec.and_ratio)

    rng = Random(spec.seed)
    nodes: list[Node] = []
    edges: list[Edge] = []
    costs: dict[str, tuple[float, float, float]] = {}

    roots = ("mission_00", "mission_01")
    for rid in roots:
        nodes.append(Node(rid, NodeKind.HARDGOAL, root=True))
    anchor = "anchor_commitment"
    nodes.append(Node(anchor, NodeKind.LEAF))
    costs[anchor] = (1.0, 2.0, 4.0)

    # Spine: both tops lean on the anchor, through the milestone chain if any.
    chain = [f"milestone_{i:02d}" for i in range(links)]
    for mid in chain:
        nodes.append(Node(mid, NodeKind.AND))
    spine = chain + [anchor]
    for rid in roots:
        edges.append(Edge(rid, spine[0], EdgeKind.MAKES))
    for upper, lower in zip(spine, spine[1:]):
        edges.append(Edge(upper, lower, EdgeKind.MAKES))

    # Bets, conduits, and parentless rule-out gates.
    bets = [f"risk_bet_{i:02d}" for i in range(m)]
    gates: list[str] = []
    for i, bet in enumerate(bets):
        nodes.append(Node(bet, NodeKind.LEAF))
        costs[bet] = (30.0 + 10 * i, 36.0 + 12 * i, 44.0 + 14 * i)
        guards = 1 + extra_guards // m + (1 if i < extra_guards % m else 0)
        for j in range(guards):
            conduit = f"quality_guard_{i:02d}_{j}"
            nodes.append(Node(conduit, NodeKind.SOFTGOAL))
            edges.append(Edge(roots[(i + j) % 2], conduit, EdgeKind.MAKES))
            edges.append(Edge(conduit, bet, EdgeKind.BREAKS))
        for slot in range(2):
            gid = f"veto_check_{i:02d}_{slot}"
            gates.append(gid)
            nodes.append(Node(gid, NodeKind.HARDGOAL))
            edges.append(Edge(gid, bet, EdgeKind.BREAKS))

    # Flip trailing gates to softgoals until the quota is met.
    internal = 2 + links + 3 * m + extra_guards
    quota = round(spec.softgoal_fraction * internal)
    for gid in reversed(gates):
        if quota <= m:
            break
        idx = next(i for i, n in enumerate(nodes) if n.id == gid)
        nodes[idx] = Node(gid, NodeKind.SOFTGOAL)
        quota -= 1

    def add_pair(a: str, b: str, cost: float) -> None:
        """Two leaves where satisfying one washes out the other.

        Both sides cost the same, and far less than a tenth of the bet
        scale: a prefix that pins both sides of one pair shifts total cost
        by the pair price only, which stays under the collapse threshold.
        """
        for lid in (a, b):
            nodes.append(Node(lid, NodeKind.LEAF))
            costs[lid] = (cost, cost, cost)
        for lid, rival in ((a, b), (b, a)):
            frame = f"opt_{lid}"
            nodes.append(Node(frame, NodeKind.OR))
            edges.append(Edge(frame, lid, _pick_kind(rng, spec.edge_mix, "makes", "helps")))
            edges.append(Edge(frame, rival, _pick_kind(rng, spec.edge_mix, "breaks", "hurts")))

    # Evidence tracks. With several bets the two tracks of one pair serve
    # two different bets; a single bet instead gets each track paired
    # against a plain rival task.
    if m >= 2:
        for k in range(m):
            a = f"evidence_{k:02d}_a"
            b = f"evidence_{k:02d}_b"
            add_pair(a, b, 1.0)
            edges.append(Edge(f"veto_check_{k:02d}_0", a, EdgeKind.MAKES))
            edges.append(Edge(f"veto_check_{(k + 1) % m:02d}_1", b, EdgeKind.MAKES))
    elif m == 1:
        for slot, track in enumerate(("evidence_00_a", "evidence_00_b")):
            add_pair(track, f"rival_task_{slot:02d}", 1.0)
            edges.append(Edge(f"veto_check_00_{slot}", track, EdgeKind.MAKES))

    # Filler work items: equal-cost pairs, one 3-cycle if the count is odd.
    cycle = fillers % 2 == 1
    paired = fillers - (3 if cycle else 0)
    for j in range(0, paired, 2):
        add_pair(f"task_{j:02d}", f"task_{j + 1:02d}", 1.0)
    if cycle:
        trio = [f"scope_{t}" for t in "abc"]
        for lid in trio:
            nodes.append(Node(lid, NodeKind.LEAF))
            costs[lid] = (1.0, 1.0, 1.0)
        for t, lid in enumerate(trio):
            frame = f"opt_{lid}"
            nodes.append(Node(frame, NodeKind.OR))
            edges.append(Edge(frame, lid, _pick_kind(rng, spec.edge_mix, "makes", "helps")))
            edges.append(
                Edge(frame, trio[(t + 1) % 3], _pick_kind(rng, spec.edge_mix, "breaks", "hurts"))
            )

    model = GoalModel(tuple(nodes), tuple(edges), costs)
    planted = [(anchor, SATISFIED)] + [(bet, DENIED) for bet in bets]
    return model, tuple(planted)
