"""One config object for the whole pipeline, loadable from JSON or TOML."""

from __future__ import annotations

import json
from dataclasses import dataclass, field, fields, replace
from pathlib import Path
from typing import Any, Mapping

from short.optimize import OptimizerConfig

try:  # python >= 3.11
    import tomllib as _toml
except ModuleNotFoundError:  # pragma: no cover - depends on interpreter
    import tomli as _toml  # type: ignore[no-redef]


@dataclass(frozen=True)
class PipelineConfig:
    """Settings for rank/test/keys on top of the optimizer's own knobs."""

    optimizer: OptimizerConfig = field(default_factory=OptimizerConfig)
    rank_runs: int = 20
    decile: float = 0.1
    decile_scope: str = "pooled"  # "pooled" | "per_run"
    samples_per_point: int = 20
    redraw_costs: bool = False
    key_ratio_threshold: float = 0.1
    keys_use_raw_iqr: bool = False
    smooth_a12: float = 0.6
    smooth_confidence: float = 0.99
    smooth_resamples: int = 512

    def __post_init__(self) -> None:
        if self.rank_runs < 1:
            raise ValueError("rank_runs must be >= 1")
        if not 0.0 < self.decile <= 1.0:
            raise ValueError("decile must be in (0, 1]")
        if self.decile_scope not in ("pooled", "per_run"):
            raise ValueError("decile_scope must be 'pooled' or 'per_run'")
        if self.samples_per_point < 1:
            raise ValueError("samples_per_point must be >= 1")
        if not 0.0 < self.key_ratio_threshold:
            raise ValueError("key_ratio_threshold must be positive")

    @property
    def enabled(self) -> tuple[str, ...]:
        return self.optimizer.enabled

    def with_objectives(self, enabled: tuple[str, ...]) -> "PipelineConfig":
        return replace(self, optimizer=replace(self.optimizer, enabled=enabled))


def config_from_dict(data: Mapping[str, Any]) -> PipelineConfig:
    data = dict(data)
    opt_data = dict(data.pop("optimizer", {}))
    if "enabled" in opt_data:
        opt_data["enabled"] = tuple(opt_data["enabled"])
    if "directions" in opt_data:
        opt_data["directions"] = {k: int(v) for k, v in opt_data["directions"].items()}
    known_opt = {f.name for f in fields(OptimizerConfig)}
    bad = set(opt_data) - known_opt
    if bad:
        raise ValueError(f"unknown optimizer settings: {sorted(bad)}")
    known = {f.name for f in fields(PipelineConfig)} - {"optimizer"}
    bad = set(data) - known
    if bad:
        raise ValueError(f"unknown settings: {sorted(bad)}")
    return PipelineConfig(optimizer=OptimizerConfig(**opt_data), **data)


def load_config(path: str | Path) -> PipelineConfig:
    """Read a JSON or TOML config file (by extension, JSON by default)."""
    p = Path(path)
    raw = p.read_bytes()
    if p.suffix.lower() == ".toml":
        return config_from_dict(_toml.loads(raw.decode("utf-8")))
    return config_from_dict(json.loads(raw.decode("utf-8")))
