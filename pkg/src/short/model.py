"""Goal-model core: node/edge types, parsing, validation, cost sampling.

A goal model is a DAG. Edges run parent -> child: goals at the top decompose
toward the concrete tasks at the bottom. Nodes with no outgoing edge are the
decision variables ("leaves", whatever their declared kind). Edge kinds carry
the contribution weight of the child toward the parent:

    makes +1.0    helps +0.5    hurts -0.5    breaks -1.0

Labels live on nodes and take five values between DENIED (-1) and
SATISFIED (+1), with UNDEFINED (0) in the middle.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property
from random import Random
from typing import Iterator, Mapping


class Label(float, Enum):
    """Node label; float value is the label's numeric level."""

    SATISFIED = 1.0
    PARTIAL_SAT = 0.5
    UNDEFINED = 0.0
    PARTIAL_DEN = -0.5
    DENIED = -1.0

    def __repr__(self) -> str:  # pragma: no cover - debugging aid
        return f"Label.{self.name}"


class EdgeKind(str, Enum):
    """Contribution type of a child toward its parent."""

    MAKES = "makes"
    HELPS = "helps"
    HURTS = "hurts"
    BREAKS = "breaks"

    @property
    def weight(self) -> float:
        return _EDGE_WEIGHT[self]


_EDGE_WEIGHT = {
    EdgeKind.MAKES: 1.0,
    EdgeKind.HELPS: 0.5,
    EdgeKind.HURTS: -0.5,
    EdgeKind.BREAKS: -1.0,
}


class NodeKind(str, Enum):
    LEAF = "leaf"
    AND = "and"
    OR = "or"
    SOFTGOAL = "softgoal"
    HARDGOAL = "hardgoal"


@dataclass(frozen=True)
class Node:
    """One node; `name` is display text and defaults to the id."""

    id: str
    kind: NodeKind
    root: bool = False
    name: str = ""

    def __post_init__(self) -> None:
        if not self.name:
            object.__setattr__(self, "name", self.id)


@dataclass(frozen=True)
class Edge:
    """Directed parent -> child contribution."""

    parent: str
    child: str
    kind: EdgeKind


class ModelError(ValueError):
    """Raised on malformed model text or an invariant violation.

    `violations` is empty for syntax errors and carries the failed rules
    when the text parsed but the model is structurally invalid, so
    callers can tell the two apart (usage error vs validation failure).
    """

    def __init__(
        self,
        message: str,
        line: int | None = None,
        col: int | None = None,
        violations: tuple["Violation", ...] = (),
    ):
        self.line = line
        self.col = col
        self.violations = violations
        where = f" (line {line}, col {col})" if line is not None else ""
        super().__init__(message + where)


@dataclass(frozen=True)
class Violation:
    """One failed validation rule, as data."""

    rule: str
    subject: str
    message: str


@dataclass(frozen=True)
class GoalModel:
    """Immutable goal model: nodes and edges in declaration order."""

    nodes: tuple[Node, ...]
    edges: tuple[Edge, ...]
    costs: Mapping[str, tuple[float, float, float]] = field(default_factory=dict)

    # -- derived views ----------------------------------------------------

    @cached_property
    def by_id(self) -> dict[str, Node]:
        return {n.id: n for n in self.nodes}

    @cached_property
    def children(self) -> dict[str, tuple[Edge, ...]]:
        out: dict[str, list[Edge]] = {n.id: [] for n in self.nodes}
        for e in self.edges:
            out[e.parent].append(e)
        return {k: tuple(v) for k, v in out.items()}

    @cached_property
    def parents(self) -> dict[str, tuple[Edge, ...]]:
        out: dict[str, list[Edge]] = {n.id: [] for n in self.nodes}
        for e in self.edges:
            out[e.child].append(e)
        return {k: tuple(v) for k, v in out.items()}

    @cached_property
    def roots(self) -> tuple[str, ...]:
        return tuple(n.id for n in self.nodes if n.root)

    def __hash__(self) -> int:
        return hash((self.nodes, self.edges, tuple(sorted(self.costs.items()))))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, GoalModel):
            return NotImplemented
        return (
            self.nodes == other.nodes
            and self.edges == other.edges
            and dict(self.costs) == dict(other.costs)
        )


def leaves(model: GoalModel) -> list[str]:
    """Decision variables: nodes with no outgoing edge, lexicographic by id."""
    return sorted(n.id for n in model.nodes if not model.children[n.id])


# -- validation ------------------------------------------------------------


def validate(model: GoalModel) -> list[Violation]:
    """Check every structural invariant; returns violations instead of raising."""
    out: list[Violation] = []
    if not model.nodes:
        out.append(Violation("nonempty", "", "model has no nodes"))
        return out

    seen: set[str] = set()
    for n in model.nodes:
        if n.id in seen:
            out.append(Violation("unique-ids", n.id, f"duplicate node id {n.id!r}"))
        seen.add(n.id)

    pairs: set[tuple[str, str]] = set()
    for e in model.edges:
        for end in (e.parent, e.child):
            if end not in seen:
                out.append(Violation("known-endpoints", end, f"edge references unknown node {end!r}"))
        if e.parent == e.child:
            out.append(Violation("acyclic", e.parent, f"self-edge on {e.parent!r}"))
        if (e.parent, e.child) in pairs:
            out.append(
                Violation("unique-edges", f"{e.parent}->{e.child}", f"duplicate edge {e.parent!r} -> {e.child!r}")
            )
        pairs.add((e.parent, e.child))

    if any(v.rule == "known-endpoints" for v in out):
        return out  # adjacency below would KeyError

    for n in model.nodes:
        deg = len(model.children[n.id])
        if n.kind is NodeKind.LEAF and deg:
            out.append(Violation("leaf-terminal", n.id, f"leaf node {n.id!r} has {deg} children"))
        if n.kind in (NodeKind.AND, NodeKind.OR) and not deg:
            out.append(Violation("combine-nonempty", n.id, f"{n.kind.value} node {n.id!r} has no children"))
        if n.root and model.parents[n.id]:
            out.append(Violation("root-top", n.id, f"root node {n.id!r} has an incoming edge"))

    for nid, (low, mode, high) in model.costs.items():
        if nid not in seen:
            out.append(Violation("known-cost-node", nid, f"cost override for unknown node {nid!r}"))
        if not (low <= mode <= high) or low < 0:
            out.append(Violation("cost-shape", nid, f"cost triple for {nid!r} must satisfy 0 <= low <= mode <= high"))

    out.extend(_find_cycle(model))
    return out


def _find_cycle(model: GoalModel) -> list[Violation]:
    # Iterative three-color DFS; recursion depth is unbounded on deep chains.
    WHITE, GRAY, BLACK = 0, 1, 2
    color = {n.id: WHITE for n in model.nodes}
    for start in color:
        if color[start] != WHITE:
            continue
        stack: list[tuple[str, Iterator[Edge]]] = [(start, iter(model.children[start]))]
        color[start] = GRAY
        while stack:
            nid, it = stack[-1]
            advanced = False
            for e in it:
                tgt = e.child
                if color[tgt] == GRAY:
                    return [Violation("acyclic", tgt, f"cycle through node {tgt!r}")]
                if color[tgt] == WHITE:
                    color[tgt] = GRAY
                    stack.append((tgt, iter(model.children[tgt])))
                    advanced = True
                    break
            if not advanced:
                color[nid] = BLACK
                stack.pop()
    return []


# -- text format -------------------------------------------------------------

_TOKEN = re.compile(r'"[^"]*"|\S+')
_NODE_KINDS = {k.value: k for k in NodeKind}
_EDGE_KINDS = {k.value: k for k in EdgeKind}


def parse_model(text: str) -> GoalModel:
    """Parse the line-oriented model format; raises ModelError with position info.

    Grammar, one declaration per line, `#` starts a comment:

        node <id> <leaf|and|or|softgoal|hardgoal> [root] ["Display Name"]
        edge <parent-id> <child-id> <makes|helps|hurts|breaks>
        cost <id> <low> <mode> <high>
    """
    nodes: list[Node] = []
    edges: list[Edge] = []
    costs: dict[str, tuple[float, float, float]] = {}

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        toks = [(m.group(0), m.start() + 1) for m in _TOKEN.finditer(line)]
        if not toks:
            continue
        head, col = toks[0]
        args = toks[1:]

        if head == "node":
            if len(args) < 2:
                raise ModelError("node needs: id kind [root] [\"name\"]", lineno, col)
            nid = args[0][0]
            kind_tok, kind_col = args[1]
            if kind_tok not in _NODE_KINDS:
                raise ModelError(f"unknown node kind {kind_tok!r}", lineno, kind_col)
            root = False
            name = ""
            for tok, tcol in args[2:]:
                if tok == "root":
                    root = True
                elif tok.startswith('"') and tok.endswith('"'):
                    name = tok[1:-1]
                else:
                    raise ModelError(f"unexpected token {tok!r}", lineno, tcol)
            nodes.append(Node(nid, _NODE_KINDS[kind_tok], root=root, name=name))
        elif head == "edge":
            if len(args) != 3:
                raise ModelError("edge needs: parent child kind", lineno, col)
            kind_tok, kind_col = args[2]
            if kind_tok not in _EDGE_KINDS:
                raise ModelError(f"unknown edge kind {kind_tok!r}", lineno, kind_col)
            edges.append(Edge(args[0][0], args[1][0], _EDGE_KINDS[kind_tok]))
        elif head == "cost":
            if len(args) != 4:
                raise ModelError("cost needs: id low mode high", lineno, col)
            nums = []
            for tok, tcol in args[1:]:
                try:
                    nums.append(float(tok))
                except ValueError:
                    raise ModelError(f"not a number: {tok!r}", lineno, tcol) from None
            costs[args[0][0]] = (nums[0], nums[1], nums[2])
        else:
            raise ModelError(f"unknown directive {head!r}", lineno, col)

    model = GoalModel(tuple(nodes), tuple(edges), costs)
    bad = validate(model)
    if bad:
        raise ModelError(
            "; ".join(f"{v.rule}: {v.message}" for v in bad), violations=tuple(bad)
        )
    return model


def render_model(model: GoalModel) -> str:
    """Inverse of parse_model: parse_model(render_model(m)) == m."""
    out: list[str] = []
    for n in model.nodes:
        parts = ["node", n.id, n.kind.value]
        if n.root:
            parts.append("root")
        if n.name != n.id:
            parts.append(f'"{n.name}"')
        out.append(" ".join(parts))
    for e in model.edges:
        out.append(f"edge {e.parent} {e.child} {e.kind.value}")
    for nid, (low, mode, high) in model.costs.items():
        out.append(f"cost {nid} {_num(low)} {_num(mode)} {_num(high)}")
    return "\n".join(out) + "\n"


def _num(x: float) -> str:
    return str(int(x)) if float(x).is_integer() else repr(x)


# -- JSON form ---------------------------------------------------------------


def model_to_dict(model: GoalModel) -> dict:
    return {
        "nodes": [
            {"id": n.id, "name": n.name, "kind": n.kind.value, "root": n.root}
            for n in model.nodes
        ],
        "edges": [
            {"parent": e.parent, "child": e.child, "kind": e.kind.value} for e in model.edges
        ],
        "costs": {nid: {"low": c[0], "mode": c[1], "high": c[2]} for nid, c in model.costs.items()},
    }


def model_from_dict(data: dict) -> GoalModel:
    try:
        nodes = tuple(
            Node(
                d["id"],
                NodeKind(d["kind"]),
                root=bool(d.get("root", False)),
                name=d.get("name", ""),
            )
            for d in data["nodes"]
        )
        edges = tuple(Edge(d["parent"], d["child"], EdgeKind(d["kind"])) for d in data.get("edges", []))
        costs = {
            nid: (float(c["low"]), float(c["mode"]), float(c["high"]))
            for nid, c in data.get("costs", {}).items()
        }
    except (KeyError, TypeError, ValueError) as exc:
        raise ModelError(f"malformed model JSON: {exc}") from exc
    model = GoalModel(nodes, edges, costs)
    bad = validate(model)
    if bad:
        raise ModelError(
            "; ".join(f"{v.rule}: {v.message}" for v in bad), violations=tuple(bad)
        )
    return model


def load_model(text: str) -> GoalModel:
    """Parse either the text format or the JSON form, by sniffing."""
    stripped = text.lstrip()
    if stripped.startswith("{"):
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ModelError(f"invalid JSON: {exc}") from exc
        return model_from_dict(data)
    return parse_model(text)


# -- costs -------------------------------------------------------------------

DEFAULT_COST = (1.0, 5.0, 10.0)


@dataclass(frozen=True)
class CostSpec:
    """Triangular(low, mode, high) per decision; overrides beat the default."""

    default: tuple[float, float, float] = DEFAULT_COST
    overrides: Mapping[str, tuple[float, float, float]] = field(default_factory=dict)

    def triple_for(self, node_id: str, model: GoalModel) -> tuple[float, float, float]:
        if node_id in self.overrides:
            return self.overrides[node_id]
        if node_id in model.costs:
            return model.costs[node_id]
        return self.default


@dataclass(frozen=True)
class CostAssignment:
    """One frozen draw of per-decision costs."""

    values: Mapping[str, float]

    def __getitem__(self, node_id: str) -> float:
        return self.values[node_id]

    def __contains__(self, node_id: str) -> bool:
        return node_id in self.values


def sample_costs(model: GoalModel, spec: CostSpec | None = None, seed: int = 0) -> CostAssignment:
    """Draw one cost per decision leaf, deterministic in (model, spec, seed).

    Inverse-CDF triangular draw; leaves are visited in lexicographic order so
    equal seeds give equal assignments.
    """
    spec = spec or CostSpec()
    rng = Random(seed)
    values: dict[str, float] = {}
    for leaf in leaves(model):
        low, mode, high = spec.triple_for(leaf, model)
        values[leaf] = rng.triangular(low, high, mode)
    return CostAssignment(values)
