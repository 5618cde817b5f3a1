"""Setup library: rank random setups by HPA win ratio and pick k-medoid representatives."""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from multiprocessing import Pool
from pathlib import Path
from typing import Any

from .. import snapshot
from ..agents import HPAgent
from ..board import CityMap, standard_map
from ..rules import GameConfig, GameState, Role, Status, new_game
from .common import derive_seed, play_game
from .kmedoids import kmedoids

LIBRARY_FORMAT = "pandemic-rhea/setup-library"
LIBRARY_VERSION = 1
FIXED_ROLE_ORDER = (Role.OPERATIONS_EXPERT, Role.MEDIC, Role.RESEARCHER, Role.SCIENTIST)


class LibraryError(ValueError):
    pass


@dataclass
class SetupEntry:
    id: str
    seed: int
    players: int
    epidemics: int
    wins: int = 0
    trials: int = 0
    mean_duration: float = 0.0
    normalized_duration: float = 0.0
    selected: bool = False
    medoid: bool = False
    state: dict[str, Any] = field(default_factory=dict)

    @property
    def win_ratio(self) -> float:
        return self.wins / self.trials if self.trials else 0.0

    def to_dict(self) -> dict[str, Any]:
        d = {k: getattr(self, k) for k in (
            "id", "seed", "players", "epidemics", "wins", "trials", "mean_duration",
            "normalized_duration", "selected", "medoid",
        )}
        d["win_ratio"] = self.win_ratio
        d["state"] = self.state
        return d

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> SetupEntry:
        fields = {k: d[k] for k in (
            "id", "seed", "players", "epidemics", "wins", "trials", "mean_duration",
            "normalized_duration", "selected", "medoid", "state",
        )}
        return cls(**fields)

    def game_state(self, cmap: CityMap | None = None) -> GameState:
        return snapshot.state_from_dict(self.state, cmap)


@dataclass
class SetupLibrary:
    setups: list[SetupEntry]
    params: dict[str, Any]
    map_checksum: str

    def medoids(self) -> list[SetupEntry]:
        return [e for e in self.setups if e.medoid]

    def selected(self) -> list[SetupEntry]:
        return [e for e in self.setups if e.selected]

    def subset(self, name: str) -> list[SetupEntry]:
        if name == "medoids":
            return self.medoids()
        if name == "selected":
            return self.selected()
        if name == "all":
            return list(self.setups)
        raise LibraryError(f"unknown setup subset {name!r}; expected medoids, selected or all")

    def to_json(self) -> str:
        doc = {
            "format": LIBRARY_FORMAT,
            "version": LIBRARY_VERSION,
            "map_checksum": self.map_checksum,
            "params": self.params,
            "setups": [e.to_dict() for e in self.setups],
        }
        return json.dumps(doc, indent=1)

    def save(self, path: str | Path) -> None:
        Path(path).write_text(self.to_json())

    @classmethod
    def load(cls, path: str | Path) -> SetupLibrary:
        try:
            doc = json.loads(Path(path).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise LibraryError(f"cannot load setup library {path}: {exc}") from exc
        if doc.get("format") != LIBRARY_FORMAT or doc.get("version") != LIBRARY_VERSION:
            raise LibraryError(f"{path} is not a version-{LIBRARY_VERSION} setup library")
        try:
            setups = [SetupEntry.from_dict(d) for d in doc["setups"]]
        except KeyError as exc:
            raise LibraryError(f"setup entry missing field {exc}") from exc
        return cls(setups, doc.get("params", {}), doc["map_checksum"])


def make_setup(seed: int, players: int, epidemics: int, roles: str = "fixed") -> GameState:
    """A post-setup state fully determined by ``seed``.

    ``roles="fixed"`` seats the first ``players`` roles in the canonical order
    (operations expert, medic, researcher, scientist); ``"random"`` samples them.
    """
    rng = random.Random(seed)
    if roles == "fixed":
        config = GameConfig(players, epidemics, FIXED_ROLE_ORDER[:players], seed)
    elif roles == "random":
        config = GameConfig.random(players, epidemics, rng, seed)
    else:
        raise ValueError(f"roles must be 'fixed' or 'random', got {roles!r}")
    return new_game(config, rng)


def _rate_candidate(args) -> tuple[int, int, int]:
    seed, players, epidemics, roles, trials = args
    state = make_setup(seed, players, epidemics, roles)
    wins, turns = 0, 0
    for t in range(trials):
        agent = HPAgent(random.Random(derive_seed(seed, "hpa", t)))
        s = play_game(state, agent, derive_seed(seed, "game", t)).state
        wins += s.status is Status.WON
        turns += s.turn
    return wins, turns, state.max_turns()


def build_setup_library(
    n_candidates: int,
    trials: int,
    k: int,
    players: int = 4,
    epidemics: int = 4,
    seed: int = 0,
    top_fraction: float = 0.1,
    roles: str = "fixed",
    jobs: int = 1,
    restarts: int = 50,
    progress=None,
    seeds: list[int] | None = None,
) -> SetupLibrary:
    """Rate ``n_candidates`` setups with ``trials`` HPA games each, keep the easiest, cluster.

    The easiest ``top_fraction`` by win ratio (ties to the lower setup id) is
    clustered on (win ratio, duration / max turns) and the k medoids marked.
    ``seeds`` overrides the per-candidate seeds derived from ``seed``.
    """
    if seeds is not None:
        n_candidates = len(seeds)
    if not 1 <= k <= n_candidates:
        raise ValueError(f"need 1 <= k <= n_candidates, got k={k}")
    if trials < 1:
        raise ValueError("trials must be >= 1")
    if not 0 < top_fraction <= 1:
        raise ValueError("top_fraction must lie in (0, 1]")
    if seeds is None:
        seeds = [derive_seed(seed, "setup", i) for i in range(n_candidates)]
    tasks = [(sd, players, epidemics, roles, trials) for sd in seeds]
    if jobs > 1:
        with Pool(jobs) as pool:
            rated = list(pool.imap(_rate_candidate, tasks, chunksize=4))
    else:
        rated = []
        for i, task in enumerate(tasks):
            rated.append(_rate_candidate(task))
            if progress:
                progress(i + 1, n_candidates)

    entries = []
    for sd, (wins, turns, bound) in zip(seeds, rated):
        mean_dur = turns / trials
        entries.append(SetupEntry(
            id=f"{sd:016x}",
            seed=sd,
            players=players,
            epidemics=epidemics,
            wins=wins,
            trials=trials,
            mean_duration=mean_dur,
            normalized_duration=mean_dur / bound,
            state=snapshot.state_to_dict(make_setup(sd, players, epidemics, roles)),
        ))
    keep = max(k, round(top_fraction * n_candidates))
    ranked = sorted(entries, key=lambda e: (-e.win_ratio, e.id))[:keep]
    ranked.sort(key=lambda e: e.id)
    for e in ranked:
        e.selected = True
    points = [(e.win_ratio, e.normalized_duration) for e in ranked]
    clustering = kmedoids(points, k, restarts=restarts, seed=seed)
    for i in clustering.medoids:
        ranked[i].medoid = True
    params = {
        "candidates": n_candidates,
        "trials": trials,
        "k": k,
        "players": players,
        "epidemics": epidemics,
        "seed": seed,
        "top_fraction": top_fraction,
        "roles": roles,
        "restarts": restarts,
        "clustering_cost": clustering.cost,
    }
    return SetupLibrary(entries, params, standard_map().checksum)
