"""Batch play: one JSON record per game, written in game order, resumable."""

from __future__ import annotations

import json
import os
import random
import traceback
from dataclasses import dataclass
from multiprocessing import Pool
from pathlib import Path
from typing import Any, Iterator

from .. import snapshot
from ..board import standard_map
from ..rules import ConfigError
from .common import AgentConfig, build_fingerprint, derive_seed, play_game, timing_summary
from .config import ExperimentConfig
from .setups import LibraryError, SetupLibrary, make_setup

RECORDS_FORMAT = "pandemic-rhea/records"
RECORDS_VERSION = 1
TIMING_KEY = "timing"


class RecordsError(RuntimeError):
    pass


@dataclass(frozen=True)
class GameTask:
    game: int
    setup_id: str
    trial: int
    seed: int
    state: dict[str, Any]
    agent: AgentConfig


def load_setups(config: ExperimentConfig) -> list[tuple[str, dict[str, Any]]]:
    """(setup id, snapshot dict) pairs in play order."""
    g = config.game
    if g.source == "library":
        try:
            lib = SetupLibrary.load(g.library)
        except LibraryError as exc:
            raise ConfigError(str(exc)) from exc
        if lib.map_checksum != standard_map().checksum:
            raise ConfigError(f"library {g.library} was built on a different map ({lib.map_checksum})")
        entries = lib.subset(g.subset)
        if not entries:
            raise ConfigError(f"library {g.library} has no {g.subset!r} setups")
        return [(e.id, e.state) for e in entries]
    out = []
    for i in range(g.setups):
        sd = derive_seed(config.run.seed, "setup", i)
        state = make_setup(sd, g.players, g.epidemics, g.roles)
        out.append((f"{sd:016x}", snapshot.state_to_dict(state)))
    return out


def game_tasks(config: ExperimentConfig) -> list[GameTask]:
    tasks = []
    for i, (sid, state) in enumerate(load_setups(config)):
        for t in range(config.run.trials):
            g = i * config.run.trials + t
            tasks.append(GameTask(g, sid, t, derive_seed(config.run.seed, "game", g), state, config.agent))
    return tasks


def run_game(task: GameTask) -> dict[str, Any]:
    """Play one game and return its record; exceptions become a failed record."""
    cmap = standard_map()
    base = {
        "type": "game",
        "game": task.game,
        "setup": task.setup_id,
        "trial": task.trial,
        "seed": task.seed,
        "agent": task.agent.fingerprint(),
        "map": cmap.checksum,
    }
    try:
        setup = snapshot.state_from_dict(task.state, cmap)
        agent = task.agent.make(random.Random(derive_seed(task.seed, "agent")))
        res = play_game(setup, agent, task.seed)
    except Exception as exc:  # a crashed game must not take the batch down
        base.update(outcome="failed", error=f"{type(exc).__name__}: {exc}", trace=traceback.format_exc(limit=5))
        return base
    s = res.state
    base.update(
        outcome=s.status.value,
        loss_cause=s.loss_cause.value if s.loss_cause else None,
        duration=s.turn,
        max_turns=s.max_turns(),
        cured=s.n_cured,
        outbreaks=s.outbreaks,
        epidemics=s.epidemics_drawn,
        actions=res.action_counts,
        macros=res.macro_counts,
        decisions=len(res.decision_times),
    )
    base[TIMING_KEY] = dict(timing_summary(res.decision_times), per_decision=[round(t, 6) for t in res.decision_times])
    return base


def header(config: ExperimentConfig) -> dict[str, Any]:
    return {
        "type": "header",
        "format": RECORDS_FORMAT,
        "version": RECORDS_VERSION,
        "map_checksum": standard_map().checksum,
        "build": build_fingerprint(),
        "config": config.identity(),
    }


def _line(obj: dict[str, Any]) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":")) + "\n"


def read_records(path: str | Path) -> tuple[dict[str, Any] | None, list[dict[str, Any]], int]:
    """(header, game records, byte offset just past the last intact line).

    A truncated or unparseable final line (an interrupted write) is ignored.
    """
    data = Path(path).read_bytes()
    head, records = None, []
    offset = 0
    for raw in data.splitlines(keepends=True):
        if not raw.endswith(b"\n"):
            break
        try:
            obj = json.loads(raw)
        except json.JSONDecodeError:
            break
        if obj.get("type") == "header":
            if head is not None:
                raise RecordsError(f"{path}: more than one header line")
            head = obj
        else:
            records.append(obj)
        offset += len(raw)
    return head, records, offset


def _resume_point(path: Path, expected: dict[str, Any]) -> tuple[list[dict[str, Any]], int]:
    head, records, offset = read_records(path)
    if head is None:
        return [], 0
    for key in ("format", "version", "map_checksum", "build", "config"):
        if head.get(key) != expected[key]:
            raise RecordsError(
                f"cannot resume {path}: header field {key!r} differs "
                f"({head.get(key)!r} != {expected[key]!r})"
            )
    for i, r in enumerate(records):
        if r.get("game") != i:
            raise RecordsError(f"cannot resume {path}: record {i} is game {r.get('game')}")
    return records, offset


def _play_all(tasks: list[GameTask], jobs: int) -> Iterator[dict[str, Any]]:
    if jobs <= 1 or len(tasks) <= 1:
        for t in tasks:
            yield run_game(t)
        return
    with Pool(min(jobs, len(tasks))) as pool:
        yield from pool.imap(run_game, tasks, chunksize=1)


def run_experiment(
    config: ExperimentConfig,
    out: str | Path | None = None,
    jobs: int | None = None,
    resume: bool = False,
    overwrite: bool = False,
    progress=None,
) -> list[dict[str, Any]]:
    """Play every game of ``config`` and stream records to ``out``; returns all records.

    Game ``g`` uses seed ``derive_seed(master seed, "game", g)``, so results
    do not depend on ``jobs``. With ``resume`` an existing file produced by
    the same build and config is continued after its last intact record.
    """
    path = Path(out or config.run.out)
    jobs = jobs or config.run.jobs
    tasks = game_tasks(config)
    head = header(config)
    done: list[dict[str, Any]] = []
    exists = path.exists() and path.stat().st_size > 0
    if exists and resume:
        done, offset = _resume_point(path, head)
        with open(path, "r+b") as fh:
            fh.truncate(offset)
    elif exists and not overwrite:
        raise RecordsError(f"{path} exists; pass resume or overwrite")
    if not done:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(_line(head))
    remaining = tasks[len(done):]
    with open(path, "a") as fh:
        for n, rec in enumerate(_play_all(remaining, jobs), start=len(done) + 1):
            fh.write(_line(rec))
            fh.flush()
            os.fsync(fh.fileno())
            done.append(rec)
            if progress:
                progress(n, len(tasks), rec)
    return done


def strip_timing(path: str | Path) -> list[str]:
    """Record lines with the wall-time field removed, for determinism comparisons."""
    out = []
    for raw in Path(path).read_text().splitlines():
        obj = json.loads(raw)
        obj.pop(TIMING_KEY, None)
        out.append(_line(obj))
    return out
