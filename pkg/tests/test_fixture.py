"""Shape checks for the bundled IT modernization planning model."""

from pathlib import Path

import pytest

from short.model import NodeKind, leaves, parse_model, validate

FIXTURE = Path(__file__).resolve().parent.parent / "models" / "it_modernization.model"


@pytest.fixture(scope="module")
def model():
    return parse_model(FIXTURE.read_text())


def test_fixture_is_valid(model):
    assert validate(model) == []


def test_fixture_counts(model):
    assert len(model.nodes) == 53
    assert len(model.edges) == 57
    assert len(leaves(model)) == 24


def test_fixture_roots(model):
    assert set(model.roots) == {"modernize", "share_data"}


def test_fixture_key_leaves_have_costs(model):
    # The three planning decisions the model is built around. The platform
    # commitment is cheap, the two product bets dominate the cost spread.
    assert model.costs["j2ee_specification"] == (1.0, 2.0, 4.0)
    low, mode, high = model.costs["pnp_framework"]
    assert low >= 10.0 and low < mode < high
    low, mode, high = model.costs["new_database"]
    assert low >= 10.0 and low < mode < high


def test_fixture_display_names(model):
    by_id = model.by_id
    assert by_id["j2ee_specification"].name == "J2EE Specification"
    assert by_id["pnp_framework"].name == "Pnp Framework"
    assert by_id["new_database"].name == "New Database"


def test_fixture_paired_costs_match(model):
    pairs = [
        ("bakeoff_result", "db_vendor_test_env"),
        ("two_tier", "three_tier"),
        ("documentation_tool", "monitoring_pilot"),
        ("data_service_spec", "define_ext_data_std"),
        ("define_shared_data_model", "provide_logical_scheme"),
    ]
    for a, b in pairs:
        assert model.costs[a] == model.costs[b], (a, b)


def test_fixture_softgoals_present(model):
    kinds = {n.id: n.kind for n in model.nodes}
    assert kinds["vendor_independence"] == NodeKind.SOFTGOAL
    assert kinds["low_operating_cost"] == NodeKind.SOFTGOAL
