"""Decision makers: hierarchical policy (HPA), random-order policy (RPA) and RHEA."""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from .fitness import FitnessSpec, evaluate_state
from .forward import determinize, play_gene_tolerant, play_macro_tolerant, rollout
from .planner import MacroAction, MacroContext, wait_macro
from .rules import (
    ACTIONS_PER_TURN,
    MAX_STATIONS,
    GameState,
    Phase,
    PhaseError,
    Status,
    apply_unchecked,
    end_turn_inplace,
)


def _check_actionable(state: GameState) -> None:
    if state.status is not Status.ONGOING or state.phase != Phase.ACTIONS:
        raise PhaseError("agents decide only during an ongoing Actions phase")


def hpa_next(state: GameState, rng: random.Random, ctx: MacroContext | None = None) -> MacroAction:
    """First non-empty level of the fixed priority list, uniform choice within it."""
    _check_actionable(state)
    ctx = ctx or MacroContext(state)
    for level in _hpa_levels(ctx):
        options = level()
        if options:
            return rng.choice(options)
    raise AssertionError("walk-away level is never empty")


def _hpa_levels(ctx: MacroContext):
    stations_left = ctx.state.n_stations < MAX_STATIONS
    return (
        ctx.cure,
        lambda: ctx.treat_level(3),
        lambda: _share_level(ctx),
        (ctx.build if stations_left else list),
        lambda: ctx.treat_level(2),
        lambda: ctx.treat_level(1),
        ctx.walk_away,
    )


def _share_level(ctx: MacroContext) -> list[MacroAction]:
    immediate, waiting = ctx.share()
    return immediate or waiting


def _treat_cascade(ctx: MacroContext) -> list[MacroAction]:
    for cubes in (3, 2, 1):
        options = ctx.treat_level(cubes)
        if options:
            return options
    return []


def rpa_next(state: GameState, rng: random.Random, ctx: MacroContext | None = None) -> MacroAction:
    """Shuffle the four purposeful categories; walk away only if all are empty."""
    _check_actionable(state)
    ctx = ctx or MacroContext(state)
    stations_left = state.n_stations < MAX_STATIONS
    categories = [
        ctx.cure,
        lambda: _treat_cascade(ctx),
        lambda: _share_level(ctx),
        (ctx.build if stations_left else list),
    ]
    rng.shuffle(categories)
    for category in categories:
        options = category()
        if options:
            return rng.choice(options)
    return rng.choice(ctx.walk_away())


def _play_exact(s: GameState, macro: MacroAction) -> None:
    for a in macro.actions():
        if s.phase != Phase.ACTIONS or s.status is not Status.ONGOING:
            break
        apply_unchecked(s, a)


def seed_genome(state: GameState, horizon: int, rng: random.Random) -> list[list[MacroAction]]:
    """HPA plan for ``horizon`` player turns on one determinization."""
    _check_actionable(state)
    s = determinize(state, rng)
    genome = []
    for i in range(horizon):
        budget = state.actions_left if i == 0 else ACTIONS_PER_TURN
        if s.status is not Status.ONGOING:
            genome.append([wait_macro(s, budget)])
            continue
        genome.append(_fill_turn(s, [], rng, budget))
        end_turn_inplace(s, rng)
    return genome


def _fill_turn(s: GameState, gene: list, rng: random.Random, budget: int, first_policy=None) -> list:
    policy = first_policy or hpa_next
    while s.status is Status.ONGOING and s.phase == Phase.ACTIONS:
        macro = policy(s, rng)
        policy = hpa_next
        _play_exact(s, macro)
        gene.append(macro)
    spent = sum(m.cost for m in gene)
    if spent < budget:
        gene.append(wait_macro(s, budget - spent))
    return gene


def choose_destruction_points(genome, rate: float, rng: random.Random) -> dict[int, int]:
    points = {}
    for i, gene in enumerate(genome):
        if rng.random() < rate:
            points[i] = rng.randrange(len(gene))
    if not points:
        i = rng.randrange(len(genome))
        points[i] = rng.randrange(len(genome[i]))
    return points


def mutate(genome, state: GameState, rate: float, rng: random.Random, points: dict[int, int] | None = None):
    """Partial destruction of genes and stochastic repair on a fresh determinization."""
    if not 0.0 <= rate <= 1.0:
        raise ValueError(f"mutation rate {rate} outside [0, 1]")
    if points is None:
        points = choose_destruction_points(genome, rate, rng)
    last = max(points)
    s = determinize(state, rng)
    out = []
    for i, gene in enumerate(genome):
        if i > last:
            out.extend(list(g) for g in genome[i:])
            break
        budget = state.actions_left if i == 0 else ACTIONS_PER_TURN
        if i not in points or s.status is not Status.ONGOING:
            out.append(list(gene))
            if s.status is Status.ONGOING:
                play_gene_tolerant(s, gene)
                end_turn_inplace(s, rng)
            continue
        k = points[i]
        kept = list(gene[:k])
        for macro in kept:
            if s.phase != Phase.ACTIONS or s.status is not Status.ONGOING:
                break
            play_macro_tolerant(s, macro)
        if s.status is Status.ONGOING and s.phase == Phase.ACTIONS:
            new_gene = _fill_turn(s, kept, rng, budget, first_policy=rpa_next)
        else:
            new_gene = kept
            spent = sum(m.cost for m in new_gene)
            if spent < budget:
                new_gene.append(wait_macro(s, budget - spent))
        out.append(new_gene)
        while s.status is Status.ONGOING and s.phase == Phase.ACTIONS:
            play_macro_tolerant(s, wait_macro(s, s.actions_left))
        end_turn_inplace(s, rng)
    return out


def evaluate_genome(state: GameState, genome, spec: FitnessSpec, repetitions: int, rng: random.Random) -> float:
    if repetitions < 1:
        raise ValueError("repetitions must be >= 1")
    total = 0.0
    for _ in range(repetitions):
        stream = random.Random(rng.getrandbits(64))
        total += evaluate_state(rollout(state, genome, stream), spec)
    return total / repetitions


@dataclass(frozen=True)
class RheaParams:
    horizon: int = 3
    generations: int = 100
    repetitions: int = 10
    mutation_start: float = 1.0
    mutation_end: float = 0.5
    fitness: FitnessSpec = field(default_factory=FitnessSpec)
    seed: int = 0

    def __post_init__(self):
        if self.horizon < 1 or self.repetitions < 1 or self.generations < 0:
            raise ValueError("horizon and repetitions must be >= 1, generations >= 0")
        for r in (self.mutation_start, self.mutation_end):
            if not 0.0 <= r <= 1.0:
                raise ValueError("mutation rates must lie in [0, 1]")

    def rate(self, generation: int) -> float:
        if self.generations <= 1:
            return self.mutation_start
        frac = generation / (self.generations - 1)
        return self.mutation_start + (self.mutation_end - self.mutation_start) * frac


@dataclass
class SearchTrace:
    genome: list
    fitness: float
    history: list[float]
    accepted: int


def rhea_search(state: GameState, params: RheaParams, rng: random.Random) -> SearchTrace:
    """1+1 evolution of a horizon-long plan; offspring replace the parent on ties."""
    _check_actionable(state)
    spec = params.fitness
    parent = seed_genome(state, params.horizon, rng)
    parent_fit = evaluate_genome(state, parent, spec, params.repetitions, rng)
    history = [parent_fit]
    accepted = 0
    for g in range(params.generations):
        child = mutate(parent, state, params.rate(g), rng)
        child_fit = evaluate_genome(state, child, spec, params.repetitions, rng)
        if child_fit >= parent_fit:
            parent, parent_fit = child, child_fit
            accepted += 1
        history.append(parent_fit)
    return SearchTrace(parent, parent_fit, history, accepted)


def rhea_decide(state: GameState, params: RheaParams, rng: random.Random | None = None) -> MacroAction:
    """First macro-action of the best plan found."""
    rng = rng or random.Random(params.seed)
    return rhea_search(state, params, rng).genome[0][0]


# ---------------------------------------------------------------- controllers


class Agent:
    name = "agent"

    def decide(self, state: GameState) -> MacroAction:
        raise NotImplementedError

    def fingerprint(self) -> str:
        return self.name


class HPAgent(Agent):
    name = "hpa"

    def __init__(self, rng: random.Random):
        self.rng = rng

    def decide(self, state: GameState) -> MacroAction:
        return hpa_next(state, self.rng)


class RPAgent(Agent):
    name = "rpa"

    def __init__(self, rng: random.Random):
        self.rng = rng

    def decide(self, state: GameState) -> MacroAction:
        return rpa_next(state, self.rng)


class RheaAgent(Agent):
    name = "rhea"

    def __init__(self, params: RheaParams, rng: random.Random):
        self.params = params
        self.rng = rng

    def decide(self, state: GameState) -> MacroAction:
        return rhea_decide(state, self.params, self.rng)

    def fingerprint(self) -> str:
        p = self.params
        return (
            f"rhea:{p.fitness.name}:cp={p.fitness.c_p}:horizon={p.horizon}:generations={p.generations}:"
            f"repetitions={p.repetitions}:mutation={p.mutation_start}->{p.mutation_end}"
            + (":literal_foa" if p.fitness.literal_foa else "")
        )
