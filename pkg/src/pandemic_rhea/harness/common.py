"""Seed derivation, build fingerprint and the single-game controller."""

from __future__ import annotations

import hashlib
import random
import statistics
import time
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from ..agents import Agent, HPAgent, RheaAgent, RheaParams, RPAgent
from ..fitness import parse_fitness
from ..rules import KIND_NAMES, GameState, Phase, RuleViolation, Status, apply_unchecked, end_turn_inplace, is_legal

# files that cannot change game outcomes are left out of the fingerprint
_FINGERPRINT_EXCLUDE = {"cli.py", "report.py", "__main__.py"}


def derive_seed(*parts) -> int:
    """Stable 63-bit seed from any sequence of ints and strings."""
    text = "/".join(str(p) for p in parts)
    return int.from_bytes(hashlib.sha256(text.encode()).digest()[:8], "big") >> 1


def build_fingerprint() -> str:
    pkg = Path(str(resources.files("pandemic_rhea")))
    h = hashlib.sha256()
    for path in sorted(pkg.rglob("*")):
        if path.suffix not in (".py", ".txt") or path.name in _FINGERPRINT_EXCLUDE:
            continue
        if "__pycache__" in path.parts:
            continue
        h.update(path.relative_to(pkg).as_posix().encode())
        h.update(path.read_bytes())
    return h.hexdigest()[:16]


@dataclass(frozen=True)
class AgentConfig:
    kind: str = "rhea"
    fitness: str = "p(mean(f_oa,f_cm))"
    c_p: float = 0.1
    literal_foa: bool = False
    horizon: int = 3
    generations: int = 100
    repetitions: int = 10
    mutation_start: float = 1.0
    mutation_end: float = 0.5

    def __post_init__(self):
        if self.kind not in ("hpa", "rpa", "rhea"):
            raise ValueError(f"agent kind must be hpa, rpa or rhea, got {self.kind!r}")
        if self.kind == "rhea":
            self.rhea_params()

    def rhea_params(self, seed: int = 0) -> RheaParams:
        spec = parse_fitness(self.fitness, c_p=self.c_p, literal_foa=self.literal_foa)
        return RheaParams(
            horizon=self.horizon,
            generations=self.generations,
            repetitions=self.repetitions,
            mutation_start=self.mutation_start,
            mutation_end=self.mutation_end,
            fitness=spec,
            seed=seed,
        )

    def make(self, rng: random.Random) -> Agent:
        if self.kind == "hpa":
            return HPAgent(rng)
        if self.kind == "rpa":
            return RPAgent(rng)
        return RheaAgent(self.rhea_params(), rng)

    def fingerprint(self) -> str:
        return self.make(random.Random(0)).fingerprint()


@dataclass
class GameResult:
    state: GameState
    action_counts: dict[str, int] = field(default_factory=dict)
    macro_counts: dict[str, int] = field(default_factory=dict)
    decision_times: list[float] = field(default_factory=list)


def play_game(setup: GameState, agent: Agent, seed: int, log=None) -> GameResult:
    """Play ``setup`` to the end; ``seed`` drives the epidemic reshuffles.

    Only the agent's ``decide`` call is timed. ``log`` (if given) receives one
    line per turn header and per macro-action.
    """
    s = setup.copy()
    rng = random.Random(seed)
    result = GameResult(s)
    counts = {name: 0 for name in KIND_NAMES.values()}
    macros: dict[str, int] = {}
    while s.status is Status.ONGOING:
        if log:
            log(f"turn {s.turn} player {s.current} ({s.roles[s.current].name.lower()})")
        while s.phase == Phase.ACTIONS and s.status is Status.ONGOING:
            t0 = time.perf_counter()
            macro = agent.decide(s)
            result.decision_times.append(time.perf_counter() - t0)
            fam = macro.family.name.lower()
            macros[fam] = macros.get(fam, 0) + 1
            if log:
                log("  " + macro.describe(s.cmap))
            for a in macro.actions():
                if s.phase != Phase.ACTIONS or s.status is not Status.ONGOING:
                    break
                if not is_legal(s, a):
                    raise RuleViolation(f"agent chose illegal action {a.describe(s.cmap)}")
                apply_unchecked(s, a)
                counts[KIND_NAMES[a.kind]] += 1
        if s.status is Status.ONGOING:
            end_turn_inplace(s, rng)
    result.state = s
    result.action_counts = counts
    result.macro_counts = dict(sorted(macros.items()))
    return result


def timing_summary(times: list[float]) -> dict[str, float]:
    if not times:
        return {"decisions": 0}
    qs = statistics.quantiles(times, n=20, method="inclusive") if len(times) > 1 else [times[0]] * 19
    return {
        "decisions": len(times),
        "mean": statistics.fmean(times),
        "p50": qs[9],
        "p90": qs[17],
        "max": max(times),
    }
