"""Command-line surface.

Every subcommand writes canonical JSON into the output directory; curve
shaped results also get CSV and SVG projections. Identical invocations
with the same --seed produce byte-identical JSON files (timing numbers
are kept out of the JSON and live in the CSV/Markdown projections).

Exit codes: 0 success, 1 validation failure, 2 usage errors.
"""

from __future__ import annotations

import json
import sys
from pathlib import Path
from random import Random

import click

from short.config import PipelineConfig, load_config
from short.generator import GenSpec, InfeasibleSpec, generate_model
from short.inference import sample
from short.model import (
    CostAssignment,
    GoalModel,
    ModelError,
    leaves,
    load_model,
    model_to_dict,
    render_model,
    sample_costs,
)
from short.nsga2 import Nsga2Config, compare
from short.optimize import cdom_best, optimize
from short.ranking import find_keys, prefix_curve, rank, smooth_curve
from short import report

OBJECTIVE_KEYS = ("o1", "o2", "o3", "o4")
POLARITY_ALIASES = {
    "satisfied": "satisfied",
    "sat": "satisfied",
    "+": "satisfied",
    "denied": "denied",
    "den": "denied",
    "-": "denied",
}


def _fail_usage(message: str) -> None:
    click.echo(f"error: {message}", err=True)
    sys.exit(2)


def _load_model_arg(path: Path) -> GoalModel:
    try:
        text = path.read_text()
    except OSError as exc:
        _fail_usage(f"cannot read {path}: {exc}")
    try:
        return load_model(text)
    except ModelError as exc:
        # parsed-but-invalid is a validation failure, not a usage error
        if exc.violations:
            for v in exc.violations:
                click.echo(f"violation [{v.rule}] {v.subject}: {v.message}", err=True)
            sys.exit(1)
        _fail_usage(f"cannot load {path}: {exc}")


def _load_costs(model: GoalModel, costs_file: Path | None, seed: int) -> CostAssignment:
    if costs_file is None:
        return sample_costs(model, seed=seed)
    try:
        data = json.loads(costs_file.read_text())
    except (OSError, json.JSONDecodeError) as exc:
        _fail_usage(f"cannot read costs {costs_file}: {exc}")
    if not isinstance(data, dict):
        _fail_usage("costs file must be a JSON object of node-id to number")
    values = data.get("values", data)
    try:
        mapping = {str(k): float(v) for k, v in values.items()}
    except (TypeError, ValueError):
        _fail_usage("costs file must map node ids to numbers")
    missing = [leaf for leaf in leaves(model) if leaf not in mapping]
    if missing:
        _fail_usage(f"costs file lacks entries for: {', '.join(missing[:5])}")
    return CostAssignment(mapping)


def _load_pipeline_config(config_file: Path | None, objectives: str | None) -> PipelineConfig:
    cfg = PipelineConfig()
    if config_file is not None:
        try:
            cfg = load_config(config_file)
        except (OSError, ValueError) as exc:
            _fail_usage(f"cannot load config {config_file}: {exc}")
    if objectives:
        keys = tuple(part.strip() for part in objectives.split(",") if part.strip())
        bad = [k for k in keys if k not in OBJECTIVE_KEYS]
        if bad or not keys:
            _fail_usage(f"unknown objectives: {', '.join(bad) or '(none)'}")
        ordered = tuple(k for k in OBJECTIVE_KEYS if k in keys)
        cfg = cfg.with_objectives(ordered)
    return cfg


def _parse_prior(pins: tuple[str, ...], model: GoalModel) -> tuple[tuple[str, str], ...]:
    leaf_set = set(leaves(model))
    out = []
    for pin in pins:
        node, sep, pol = pin.partition("=")
        if not sep or pol.lower() not in POLARITY_ALIASES:
            _fail_usage(f"bad --prior {pin!r}; use node=satisfied or node=denied")
        if node not in leaf_set:
            _fail_usage(f"--prior names unknown decision leaf {node!r}")
        out.append((node, POLARITY_ALIASES[pol.lower()]))
    return tuple(out)


def _out_dir(out: str) -> Path:
    path = Path(out)
    path.mkdir(parents=True, exist_ok=True)
    return path


def _emit(path: Path, label: str) -> None:
    click.echo(f"wrote {label}: {path}")


seed_option = click.option(
    "--seed",
    type=click.IntRange(0, 2**64 - 1),
    default=0,
    envvar="SHORT_SEED",
    show_default=True,
    help="Random seed (also honors SHORT_SEED).",
)
costs_option = click.option(
    "--costs",
    "costs_file",
    type=click.Path(exists=False, path_type=Path),
    default=None,
    help="JSON file of per-leaf costs; default draws from the model's ranges.",
)
config_option = click.option(
    "--config",
    "config_file",
    type=click.Path(exists=False, path_type=Path),
    default=None,
    help="Pipeline config file (JSON or TOML).",
)
objectives_option = click.option(
    "--objectives",
    default=None,
    help="Comma list from o1,o2,o3,o4 to enable.",
)
out_option = click.option(
    "--out",
    default="out",
    show_default=True,
    help="Directory for artifacts.",
)
format_option = click.option(
    "--format",
    "fmt",
    type=click.Choice(["json", "csv", "svg"]),
    default=None,
    help="Restrict projections; JSON is always written.",
)


@click.group(name="short")
def main() -> None:
    """Find the few decisions that matter in a propositional goal model."""


@main.command(name="validate")
@click.argument("model_file", type=click.Path(path_type=Path))
@out_option
def validate_cmd(model_file: Path, out: str) -> None:
    """Check a model file; violations go to standard error."""
    try:
        text = model_file.read_text()
    except OSError as exc:
        _fail_usage(f"cannot read {model_file}: {exc}")
    try:
        model = load_model(text)
    except ModelError as exc:
        if not exc.violations:
            _fail_usage(f"cannot load {model_file}: {exc}")
        payload = {
            "valid": False,
            "violations": [
                {"rule": v.rule, "subject": v.subject, "message": v.message}
                for v in exc.violations
            ],
        }
        report.write_json(_out_dir(out) / "validate.json", payload)
        for v in exc.violations:
            click.echo(f"violation [{v.rule}] {v.subject}: {v.message}", err=True)
        sys.exit(1)
    payload = {
        "valid": True,
        "violations": [],
        "nodes": len(model.nodes),
        "edges": len(model.edges),
        "decisions": len(leaves(model)),
    }
    path = report.write_json(_out_dir(out) / "validate.json", payload)
    _emit(path, "validation")
    click.echo(f"valid: {len(model.nodes)} nodes, {len(model.edges)} edges")


@main.command(name="sample")
@click.argument("model_file", type=click.Path(path_type=Path))
@click.option("--prior", "pins", multiple=True, help="node=satisfied|denied, repeatable.")
@seed_option
@costs_option
@out_option
def sample_cmd(model_file: Path, pins: tuple[str, ...], seed: int, costs_file, out: str) -> None:
    """Draw one random world under an optional prior."""
    model = _load_model_arg(model_file)
    costs = _load_costs(model, costs_file, seed)
    prior = _parse_prior(pins, model)
    solution = sample(model, prior, costs.values, Random(seed))
    payload = {"seed": seed, "prior": [list(p) for p in prior], "solution": solution.to_dict()}
    path = report.write_json(_out_dir(out) / "sample.json", payload)
    _emit(path, "sample")
    click.echo(f"objectives: {solution.objectives.to_dict()}")


@main.command(name="optimize")
@click.argument("model_file", type=click.Path(path_type=Path))
@seed_option
@costs_option
@config_option
@objectives_option
@out_option
def optimize_cmd(model_file: Path, seed: int, costs_file, config_file, objectives, out: str) -> None:
    """Evolve a population of priors toward the good worlds."""
    model = _load_model_arg(model_file)
    cfg = _load_pipeline_config(config_file, objectives)
    costs = _load_costs(model, costs_file, seed)
    result = optimize(model, costs.values, cfg.optimizer, Random(seed))
    champion = cdom_best(result.population, cfg.optimizer)
    payload = {
        "seed": seed,
        "generations": result.generations,
        "evaluations": result.evaluations,
        "population": [
            {"prior": [list(p) for p in ind.prior], "objectives": ind.solution.objectives.to_dict()}
            for ind in result.population
        ],
        "champion": {
            "prior": [list(p) for p in champion.prior],
            "objectives": champion.solution.objectives.to_dict(),
        },
    }
    path = report.write_json(_out_dir(out) / "optimize.json", payload)
    _emit(path, "optimize result")
    click.echo(
        f"{result.generations} generations, {result.evaluations} samples, "
        f"champion objectives: {champion.solution.objectives.to_dict()}"
    )


@main.command(name="rank")
@click.argument("model_file", type=click.Path(path_type=Path))
@seed_option
@costs_option
@config_option
@objectives_option
@out_option
@format_option
def rank_cmd(model_file: Path, seed: int, costs_file, config_file, objectives, out: str, fmt) -> None:
    """Rank decisions by how often they appear in the best worlds."""
    model = _load_model_arg(model_file)
    cfg = _load_pipeline_config(config_file, objectives)
    costs = _load_costs(model, costs_file, seed)
    ordering = rank(model, costs.values, cfg, Random(seed))
    out_path = _out_dir(out)
    path = report.write_json(out_path / "rank.json", {"seed": seed, **ordering.to_dict()})
    _emit(path, "ranking")
    if fmt in (None, "csv"):
        csv_path = out_path / "rank.csv"
        csv_path.write_text(report.ordering_to_csv(ordering))
        _emit(csv_path, "ranking table")
    if fmt in (None, "svg"):
        _emit(report.render_ranking_svg(ordering, out_path / "rank.svg"), "ranking chart")
    top = ", ".join(f"{e.node}={e.polarity}" for e in ordering.entries[:3])
    click.echo(f"top decisions: {top}")


@main.command(name="test")
@click.argument("model_file", type=click.Path(path_type=Path))
@click.option("--prior", "pins", multiple=True, help="node=satisfied|denied, repeatable.")
@seed_option
@costs_option
@config_option
@objectives_option
@out_option
@format_option
def test_cmd(
    model_file: Path, pins: tuple[str, ...], seed: int, costs_file, config_file, objectives, out: str, fmt
) -> None:
    """Re-rank then walk the ranking prefix, recording objective spreads."""
    model = _load_model_arg(model_file)
    cfg = _load_pipeline_config(config_file, objectives)
    costs = _load_costs(model, costs_file, seed)
    base_prior = _parse_prior(pins, model)
    rng = Random(seed)
    ordering = rank(model, costs.values, cfg, rng, base_prior=base_prior)
    curve = prefix_curve(model, ordering, costs.values, cfg, rng, base_prior=base_prior)
    curve = smooth_curve(curve, cfg)
    out_path = _out_dir(out)
    path = report.write_json(
        out_path / "test.json",
        {"seed": seed, "prior": [list(p) for p in base_prior], "curve": curve.to_dict()},
    )
    _emit(path, "prefix curve")
    if fmt in (None, "csv"):
        csv_path = out_path / "test.csv"
        csv_path.write_text(report.curve_to_csv(curve))
        _emit(csv_path, "curve table")
    if fmt in (None, "svg"):
        _emit(report.render_curve_svg(curve, out_path / "test.svg"), "curve plot")
    click.echo(f"{len(curve.points)} prefix points over {len(curve.decisions)} decisions")


@main.command(name="keys")
@click.argument("model_file", type=click.Path(path_type=Path))
@click.option("--prior", "pins", multiple=True, help="node=satisfied|denied, repeatable.")
@seed_option
@costs_option
@config_option
@objectives_option
@out_option
@format_option
def keys_cmd(
    model_file: Path, pins: tuple[str, ...], seed: int, costs_file, config_file, objectives, out: str, fmt
) -> None:
    """Run the whole pipeline and report the key decisions."""
    model = _load_model_arg(model_file)
    cfg = _load_pipeline_config(config_file, objectives)
    costs = _load_costs(model, costs_file, seed)
    base_prior = _parse_prior(pins, model)
    result = find_keys(model, costs.values, cfg, Random(seed), base_prior=base_prior)
    out_path = _out_dir(out)
    payload = {
        "seed": seed,
        "prior": [list(p) for p in base_prior],
        "report": result.report.to_dict(),
        "ordering": result.ordering.to_dict(),
        "curve": result.curve.to_dict(),
    }
    path = report.write_json(out_path / "keys.json", payload)
    _emit(path, "key report")
    if fmt in (None, "csv"):
        csv_path = out_path / "keys.csv"
        csv_path.write_text(report.curve_to_csv(result.curve))
        _emit(csv_path, "curve table")
    if fmt in (None, "svg"):
        _emit(report.render_curve_svg(result.curve, out_path / "keys.svg"), "curve plot")
    kappa = result.report.kappa
    names = ", ".join(f"{n}={p}" for n, p in result.report.keys)
    click.echo(f"kappa={kappa} collapsed={result.report.collapsed} keys: {names}")


@main.command(name="compare")
@click.argument("model_file", type=click.Path(path_type=Path))
@click.option("--runs", type=click.IntRange(1, 1000), default=20, show_default=True)
@click.option("--population", type=click.IntRange(4, 10000), default=100, show_default=True)
@click.option("--generations", type=click.IntRange(0, 100000), default=250, show_default=True)
@click.option("--match-budget/--no-match-budget", default=True, show_default=True)
@seed_option
@costs_option
@config_option
@objectives_option
@out_option
@format_option
def compare_cmd(
    model_file: Path,
    runs: int,
    population: int,
    generations: int,
    match_budget: bool,
    seed: int,
    costs_file,
    config_file,
    objectives,
    out: str,
    fmt,
) -> None:
    """Benchmark the pipeline's optimizer against the NSGA-II baseline."""
    model = _load_model_arg(model_file)
    cfg = _load_pipeline_config(config_file, objectives)
    costs = _load_costs(model, costs_file, seed)
    nsga_cfg = Nsga2Config(
        population=population,
        generations=generations,
        enabled=cfg.enabled,
    )
    result = compare(
        model,
        costs.values,
        cfg.optimizer,
        nsga_cfg,
        Random(seed),
        runs=runs,
        match_budget=match_budget,
    )
    payload = result.to_dict()
    # keep nondeterministic timing out of the canonical JSON
    for side in ("short", "nsga2"):
        payload[side].pop("wall_clock_median", None)
    payload["seed"] = seed
    out_path = _out_dir(out)
    path = report.write_json(out_path / "compare.json", payload)
    _emit(path, "comparison")
    if fmt in (None, "csv"):
        csv_path = out_path / "compare.csv"
        csv_path.write_text(report.comparison_to_csv(result))
        _emit(csv_path, "comparison table")
    md_path = out_path / "compare.md"
    md_path.write_text(result.to_markdown() + "\n")
    _emit(md_path, "comparison markdown")
    click.echo(result.to_markdown())


@main.command(name="gen")
@click.option("--nodes", type=click.IntRange(3, 100000), default=53, show_default=True)
@click.option("--keys", "n_keys", type=click.IntRange(1, 1000), default=3, show_default=True)
@click.option("--and-ratio", type=click.FloatRange(0.0, 1.0), default=0.25, show_default=True)
@click.option(
    "--softgoal-fraction", type=click.FloatRange(0.0, 1.0), default=0.25, show_default=True
)
@seed_option
@out_option
def gen_cmd(
    nodes: int, n_keys: int, and_ratio: float, softgoal_fraction: float, seed: int, out: str
) -> None:
    """Generate a synthetic model with a planted key set."""
    try:
        spec = GenSpec(
            nodes=nodes,
            keys=n_keys,
            and_ratio=and_ratio,
            softgoal_fraction=softgoal_fraction,
            seed=seed,
        )
        model, planted = generate_model(spec)
    except (InfeasibleSpec, ValueError) as exc:
        _fail_usage(str(exc))
    out_path = _out_dir(out)
    model_path = out_path / "gen.model"
    model_path.write_text(render_model(model))
    _emit(model_path, "model")
    payload = {
        "seed": seed,
        "nodes": nodes,
        "keys": n_keys,
        "planted": [list(p) for p in planted],
        "model": model_to_dict(model),
    }
    path = report.write_json(out_path / "gen.json", payload)
    _emit(path, "model JSON")
    names = ", ".join(f"{n}={p}" for n, p in planted)
    click.echo(f"planted: {names}")


@main.command(name="serve")
@click.option("--port", type=click.IntRange(1, 65535), default=8080, show_default=True)
@click.option("--host", default="127.0.0.1", show_default=True)
@config_option
def serve_cmd(port: int, host: str, config_file) -> None:
    """Serve the what-if HTTP API (and the UI build, if present)."""
    import uvicorn

    from short.service import create_app

    cfg = _load_pipeline_config(config_file, None)
    uvicorn.run(create_app(cfg), host=host, port=port)


if __name__ == "__main__":
    main()
