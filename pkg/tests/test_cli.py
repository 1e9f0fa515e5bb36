"""Command-line surface: artifacts, exit codes, and determinism."""

import json
from pathlib import Path

import pytest
from click.testing import CliRunner

from short.cli import main
from short.generator import GenSpec, generate_model
from short.model import render_model

FAST_CONFIG = {
    "rank_runs": 5,
    "optimizer": {"pop_multiplier": 3, "max_generations": 12},
}


@pytest.fixture(scope="module")
def model_file(tmp_path_factory) -> Path:
    model, _ = generate_model(GenSpec(nodes=19, keys=2, seed=4))
    path = tmp_path_factory.mktemp("cli") / "small.model"
    path.write_text(render_model(model))
    return path


@pytest.fixture(scope="module")
def config_file(tmp_path_factory) -> Path:
    path = tmp_path_factory.mktemp("cfg") / "fast.json"
    path.write_text(json.dumps(FAST_CONFIG))
    return path


def run_cli(*argv: str, env: dict | None = None):
    return CliRunner().invoke(main, list(argv), env=env)


class TestValidate:
    def test_valid_model(self, model_file, tmp_path):
        res = run_cli("validate", str(model_file), "--out", str(tmp_path))
        assert res.exit_code == 0, res.output
        payload = json.loads((tmp_path / "validate.json").read_text())
        assert payload["valid"] is True
        assert payload["nodes"] == 19

    def test_unparseable_model_is_usage_error(self, tmp_path):
        bad = tmp_path / "broken.model"
        bad.write_text("node ???\n")
        res = run_cli("validate", str(bad), "--out", str(tmp_path))
        assert res.exit_code == 2

    def test_violations_exit_one_on_stderr(self, tmp_path):
        bad = tmp_path / "leafy.model"
        bad.write_text(
            "node top hardgoal root\nnode mid leaf\nnode low leaf\n"
            "edge top mid makes\nedge mid low makes\n"
        )
        res = run_cli("validate", str(bad), "--out", str(tmp_path))
        assert res.exit_code == 1
        assert "violation" in res.stderr

    def test_missing_file_is_usage_error(self, tmp_path):
        res = run_cli("validate", str(tmp_path / "nope.model"), "--out", str(tmp_path))
        assert res.exit_code == 2


class TestSample:
    def test_writes_solution_json(self, model_file, tmp_path):
        res = run_cli(
            "sample",
            str(model_file),
            "--seed",
            "5",
            "--prior",
            "anchor_commitment=sat",
            "--out",
            str(tmp_path),
        )
        assert res.exit_code == 0, res.output
        payload = json.loads((tmp_path / "sample.json").read_text())
        assert payload["prior"] == [["anchor_commitment", "satisfied"]]
        assert "anchor_commitment" in payload["solution"]["satisfied"]
        keys = set(payload["solution"]["objectives"])
        assert {k.split("_")[0] for k in keys} == {"o1", "o2", "o3", "o4"}

    def test_bad_prior_is_usage_error(self, model_file, tmp_path):
        res = run_cli(
            "sample", str(model_file), "--prior", "nope=sideways", "--out", str(tmp_path)
        )
        assert res.exit_code == 2


class TestPipelineCommands:
    def test_optimize_reports_champion(self, model_file, config_file, tmp_path):
        res = run_cli(
            "optimize",
            str(model_file),
            "--seed",
            "3",
            "--config",
            str(config_file),
            "--out",
            str(tmp_path),
        )
        assert res.exit_code == 0, res.output
        payload = json.loads((tmp_path / "optimize.json").read_text())
        assert payload["evaluations"] > 0
        assert "champion" in payload and payload["population"]

    def test_rank_writes_all_projections(self, model_file, config_file, tmp_path):
        res = run_cli(
            "rank",
            str(model_file),
            "--seed",
            "3",
            "--config",
            str(config_file),
            "--out",
            str(tmp_path),
        )
        assert res.exit_code == 0, res.output
        assert (tmp_path / "rank.json").exists()
        assert (tmp_path / "rank.csv").read_text().startswith("rank,node,polarity,value")
        assert (tmp_path / "rank.svg").read_text().lstrip().startswith("<?xml")

    def test_format_restricts_projections(self, model_file, config_file, tmp_path):
        res = run_cli(
            "rank",
            str(model_file),
            "--seed",
            "3",
            "--config",
            str(config_file),
            "--out",
            str(tmp_path),
            "--format",
            "json",
        )
        assert res.exit_code == 0
        assert (tmp_path / "rank.json").exists()
        assert not (tmp_path / "rank.csv").exists()
        assert not (tmp_path / "rank.svg").exists()

    def test_test_curve_artifacts(self, model_file, config_file, tmp_path):
        res = run_cli(
            "test",
            str(model_file),
            "--seed",
            "3",
            "--config",
            str(config_file),
            "--out",
            str(tmp_path),
        )
        assert res.exit_code == 0, res.output
        header = (tmp_path / "test.csv").read_text().splitlines()[0]
        assert header.startswith("x,decision,polarity,o1_median")
        curve = json.loads((tmp_path / "test.json").read_text())["curve"]
        assert curve["points"][0]["x"] == 0

    def test_keys_reports_kappa(self, model_file, config_file, tmp_path):
        res = run_cli(
            "keys",
            str(model_file),
            "--seed",
            "3",
            "--config",
            str(config_file),
            "--out",
            str(tmp_path),
        )
        assert res.exit_code == 0, res.output
        payload = json.loads((tmp_path / "keys.json").read_text())
        assert payload["report"]["kappa"] >= 1
        assert "kappa=" in res.output

    def test_objectives_flag_narrows_curve(self, model_file, config_file, tmp_path):
        res = run_cli(
            "test",
            str(model_file),
            "--seed",
            "3",
            "--config",
            str(config_file),
            "--objectives",
            "o1,o3",
            "--out",
            str(tmp_path),
        )
        assert res.exit_code == 0, res.output
        curve = json.loads((tmp_path / "test.json").read_text())["curve"]
        assert curve["objectives"] == ["o1", "o3"]

    def test_unknown_objective_is_usage_error(self, model_file, tmp_path):
        res = run_cli(
            "rank", str(model_file), "--objectives", "o9", "--out", str(tmp_path)
        )
        assert res.exit_code == 2


class TestCompare:
    def test_json_omits_wall_clock(self, model_file, config_file, tmp_path):
        res = run_cli(
            "compare",
            str(model_file),
            "--seed",
            "2",
            "--runs",
            "2",
            "--population",
            "8",
            "--generations",
            "4",
            "--config",
            str(config_file),
            "--out",
            str(tmp_path),
        )
        assert res.exit_code == 0, res.output
        payload = json.loads((tmp_path / "compare.json").read_text())
        assert "wall_clock_median" not in payload["short"]
        assert "wall_clock_median" not in payload["nsga2"]
        assert (tmp_path / "compare.md").read_text().startswith("| method |")
        assert (tmp_path / "compare.csv").exists()


class TestGen:
    def test_writes_model_and_plant(self, tmp_path):
        res = run_cli(
            "gen", "--nodes", "27", "--keys", "2", "--seed", "4", "--out", str(tmp_path)
        )
        assert res.exit_code == 0, res.output
        payload = json.loads((tmp_path / "gen.json").read_text())
        assert payload["planted"][0] == ["anchor_commitment", "satisfied"]
        assert (tmp_path / "gen.model").read_text().startswith("node ")

    def test_infeasible_spec_is_usage_error(self, tmp_path):
        res = run_cli("gen", "--nodes", "10", "--keys", "5", "--out", str(tmp_path))
        assert res.exit_code == 2


class TestDeterminism:
    def test_keys_json_byte_identical(self, model_file, config_file, tmp_path):
        for sub in ("a", "b"):
            res = run_cli(
                "keys",
                str(model_file),
                "--seed",
                "9",
                "--config",
                str(config_file),
                "--out",
                str(tmp_path / sub),
            )
            assert res.exit_code == 0, res.output
        assert (tmp_path / "a" / "keys.json").read_bytes() == (
            tmp_path / "b" / "keys.json"
        ).read_bytes()

    def test_env_seed_matches_flag(self, model_file, tmp_path):
        flagged = run_cli(
            "sample", str(model_file), "--seed", "11", "--out", str(tmp_path / "flag")
        )
        via_env = run_cli(
            "sample",
            str(model_file),
            "--out",
            str(tmp_path / "env"),
            env={"SHORT_SEED": "11"},
        )
        assert flagged.exit_code == 0 and via_env.exit_code == 0
        assert (tmp_path / "flag" / "sample.json").read_bytes() == (
            tmp_path / "env" / "sample.json"
        ).read_bytes()
