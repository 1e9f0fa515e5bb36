"""Synthetic model generator: shape, determinism, and the planted-key guarantee."""

from random import Random

import pytest

from short.config import PipelineConfig
from short.generator import DEFAULT_EDGE_MIX, GenSpec, InfeasibleSpec, generate_model
from short.inference import sample
from short.model import NodeKind, leaves, render_model, sample_costs, validate
from short.optimize import OptimizerConfig
from short.ranking import find_keys
from short.stats import median_iqr

FAST = PipelineConfig(
    optimizer=OptimizerConfig(pop_multiplier=4, max_generations=30),
    rank_runs=8,
)


def batch_iqr(model, costs, prior, seed, runs=20):
    sols = [sample(model, prior, costs, Random(seed + i)) for i in range(runs)]
    out = {}
    for key in ("o1", "o2", "o3", "o4"):
        _, iqr = median_iqr([s.objectives.get(key) for s in sols])
        out[key] = iqr
    return out


class TestSpecValidation:
    def test_rejects_tiny_node_budget(self):
        with pytest.raises(ValueError):
            GenSpec(nodes=2, keys=1)

    def test_rejects_zero_keys(self):
        with pytest.raises(ValueError):
            GenSpec(nodes=20, keys=0)

    def test_rejects_unknown_edge_kind(self):
        with pytest.raises(ValueError):
            GenSpec(nodes=20, keys=1, edge_mix={"teleports": 1.0})

    def test_rejects_mix_not_summing_to_one(self):
        with pytest.raises(ValueError):
            GenSpec(nodes=20, keys=1, edge_mix={"makes": 0.5, "breaks": 0.2})

    def test_rejects_negative_probability(self):
        with pytest.raises(ValueError):
            GenSpec(nodes=20, keys=1, edge_mix={"makes": 1.2, "breaks": -0.2})

    def test_rejects_out_of_range_ratios(self):
        with pytest.raises(ValueError):
            GenSpec(nodes=20, keys=1, and_ratio=1.5)
        with pytest.raises(ValueError):
            GenSpec(nodes=20, keys=1, softgoal_fraction=-0.1)

    def test_infeasible_key_count(self):
        with pytest.raises(InfeasibleSpec):
            generate_model(GenSpec(nodes=10, keys=3))


class TestShape:
    @pytest.mark.parametrize("nodes,keys", [(5, 1), (19, 2), (53, 3), (50, 3), (100, 4)])
    def test_valid_and_exactly_sized(self, nodes, keys):
        model, planted = generate_model(GenSpec(nodes=nodes, keys=keys, seed=0))
        assert validate(model) == []
        assert len(model.nodes) == nodes
        assert len(planted) == keys

    @pytest.mark.parametrize("nodes", [50, 100, 200, 400])
    def test_scaling_family_is_valid(self, nodes):
        model, _ = generate_model(GenSpec(nodes=nodes, keys=3, seed=1))
        assert validate(model) == []
        assert len(model.nodes) == nodes

    def test_single_key_tree(self):
        model, planted = generate_model(GenSpec(nodes=5, keys=1, seed=0))
        assert planted == (("anchor_commitment", "satisfied"),)
        kinds = {n.id: n.kind for n in model.nodes}
        assert sum(1 for n in model.nodes if n.root) == 2
        assert kinds["anchor_commitment"] is NodeKind.LEAF

    def test_planted_decisions_are_leaves(self):
        model, planted = generate_model(GenSpec(nodes=53, keys=3, seed=2))
        leaf_ids = set(leaves(model))
        assert {nid for nid, _ in planted} <= leaf_ids
        polarities = [pol for _, pol in planted]
        assert polarities[0] == "satisfied"
        assert all(p == "denied" for p in polarities[1:])

    def test_deterministic_per_seed(self):
        a, keys_a = generate_model(GenSpec(nodes=53, keys=3, seed=9))
        b, keys_b = generate_model(GenSpec(nodes=53, keys=3, seed=9))
        assert render_model(a) == render_model(b)
        assert keys_a == keys_b

    def test_seed_changes_the_frame_edges(self):
        a, _ = generate_model(GenSpec(nodes=53, keys=3, seed=0))
        b, _ = generate_model(GenSpec(nodes=53, keys=3, seed=1))
        assert render_model(a) != render_model(b)

    def test_edge_mix_limits_frame_kinds(self):
        mix = {"makes": 0.5, "breaks": 0.5}
        model, _ = generate_model(GenSpec(nodes=53, keys=3, seed=3, edge_mix=mix))
        kinds = {e.kind.value for e in model.edges}
        assert "helps" not in kinds and "hurts" not in kinds

    def test_and_ratio_grows_the_chain(self):
        lean, _ = generate_model(GenSpec(nodes=53, keys=3, seed=4, and_ratio=0.0))
        stacked, _ = generate_model(GenSpec(nodes=53, keys=3, seed=4, and_ratio=0.8))
        count = lambda m: sum(1 for n in m.nodes if n.kind is NodeKind.AND)
        assert count(stacked) > count(lean)

    def test_softgoal_fraction_grows_softgoals(self):
        low, _ = generate_model(GenSpec(nodes=53, keys=3, seed=4, softgoal_fraction=0.05))
        high, _ = generate_model(GenSpec(nodes=53, keys=3, seed=4, softgoal_fraction=0.6))
        count = lambda m: sum(1 for n in m.nodes if n.kind is NodeKind.SOFTGOAL)
        assert count(high) > count(low)

    def test_default_mix_is_normalized(self):
        assert sum(DEFAULT_EDGE_MIX.values()) == pytest.approx(1.0)


class TestPlantedKeys:
    @pytest.mark.parametrize("nodes,keys", [(53, 3), (100, 4)])
    def test_priors_collapse_every_objective(self, nodes, keys):
        model, planted = generate_model(GenSpec(nodes=nodes, keys=keys, seed=5))
        costs = sample_costs(model, seed=3).values
        base = batch_iqr(model, costs, (), seed=11)
        pinned = batch_iqr(model, costs, planted, seed=11)
        for key, baseline in base.items():
            if baseline == 0.0:
                continue
            assert pinned[key] <= 0.1 * baseline, (key, baseline, pinned[key])

    def test_detected_keys_match_plant_near_spec_example(self):
        model, planted = generate_model(GenSpec(nodes=53, keys=3, seed=5))
        costs = sample_costs(model, seed=3).values
        res = find_keys(model, costs, FAST, Random(1))
        assert res.report.collapsed
        assert 2 <= res.report.kappa <= 4
        top = {(e.node, e.polarity) for e in res.ordering.entries[:3]}
        assert top == set(planted)
