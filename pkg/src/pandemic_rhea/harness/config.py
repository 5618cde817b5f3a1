"""Experiment configuration and its TOML file format.

A config file has exactly three tables::

    [game]   source, library, subset, players, epidemics, roles, setups
    [agent]  kind, fitness, c_p, literal_foa, horizon, generations,
             repetitions, mutation_start, mutation_end
    [run]    trials, seed, jobs, out

Unknown tables or keys are rejected.
"""

from __future__ import annotations

import dataclasses
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

from ..rules import ConfigError
from .common import AgentConfig

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib


@dataclass(frozen=True)
class GameSource:
    source: str = "random"  # "random" or "library"
    library: str | None = None
    subset: str = "medoids"
    players: int = 4
    epidemics: int = 4
    roles: str = "random"
    setups: int = 10

    def __post_init__(self):
        if self.source not in ("random", "library"):
            raise ConfigError(f"game.source must be 'random' or 'library', got {self.source!r}")
        if self.source == "library" and not self.library:
            raise ConfigError("game.library is required when game.source = 'library'")
        if self.source == "random":
            if self.players not in (2, 3, 4) or self.epidemics not in (4, 5, 6):
                raise ConfigError("game.players must be 2..4 and game.epidemics 4..6")
            if self.roles not in ("random", "fixed"):
                raise ConfigError("game.roles must be 'random' or 'fixed'")
            if self.setups < 1:
                raise ConfigError("game.setups must be >= 1")


@dataclass(frozen=True)
class RunSettings:
    trials: int = 1
    seed: int = 0
    jobs: int = 1
    out: str = "records.jsonl"

    def __post_init__(self):
        if self.trials < 1:
            raise ConfigError(f"run.trials must be >= 1, got {self.trials}")
        if self.jobs < 1:
            raise ConfigError(f"run.jobs must be >= 1, got {self.jobs}")


@dataclass(frozen=True)
class ExperimentConfig:
    game: GameSource = field(default_factory=GameSource)
    agent: AgentConfig = field(default_factory=AgentConfig)
    run: RunSettings = field(default_factory=RunSettings)

    def identity(self) -> dict[str, Any]:
        """Everything that determines the records' content (not where or how fast they are written)."""
        d = to_dict(self)
        del d["run"]["jobs"]
        del d["run"]["out"]
        return d

    def replace(self, **sections) -> ExperimentConfig:
        return dataclasses.replace(self, **sections)


_SECTIONS = {"game": GameSource, "agent": AgentConfig, "run": RunSettings}


def _build(cls, table: dict[str, Any], section: str):
    names = {f.name for f in dataclasses.fields(cls)}
    unknown = sorted(set(table) - names)
    if unknown:
        raise ConfigError(f"unknown key(s) in [{section}]: {', '.join(unknown)}")
    try:
        return cls(**table)
    except ConfigError:
        raise
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"[{section}]: {exc}") from exc


def config_from_dict(doc: dict[str, Any]) -> ExperimentConfig:
    unknown = sorted(set(doc) - set(_SECTIONS))
    if unknown:
        raise ConfigError(f"unknown section(s): {', '.join(unknown)}")
    parts = {}
    for name, cls in _SECTIONS.items():
        table = doc.get(name, {})
        if not isinstance(table, dict):
            raise ConfigError(f"[{name}] must be a table")
        parts[name] = _build(cls, table, name)
    return ExperimentConfig(**parts)


def load_config(path: str | Path) -> ExperimentConfig:
    try:
        with open(path, "rb") as fh:
            doc = tomllib.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"invalid TOML in {path}: {exc}") from exc
    return config_from_dict(doc)


def to_dict(config: ExperimentConfig) -> dict[str, dict[str, Any]]:
    return {name: dataclasses.asdict(getattr(config, name)) for name in _SECTIONS}


def _toml_value(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, str):
        return '"' + v.replace("\\", "\\\\").replace('"', '\\"') + '"'
    return repr(v)


def dumps_toml(config: ExperimentConfig) -> str:
    lines = []
    for name, table in to_dict(config).items():
        lines.append(f"[{name}]")
        for k, v in table.items():
            if v is not None:
                lines.append(f"{k} = {_toml_value(v)}")
        lines.append("")
    return "\n".join(lines)
