"""Forward model over hidden information: deck determinization and genome rollouts."""

from __future__ import annotations

import random

from .planner import Family, MacroAction, MovePlan, _search
from .rules import (
    EPIDEMIC,
    WAIT,
    Action,
    GameState,
    Kind,
    Phase,
    Status,
    apply_unchecked,
    cards_to_cure,
    cure,
    end_turn_inplace,
    is_legal,
)
from .valuation import spendable_counts

Gene = list  # list[MacroAction]
Genome = list  # list[Gene]


class GenomeError(ValueError):
    pass


def _shuffle(items: list, rng: random.Random) -> None:
    # Fisher-Yates driven by rng.random(); faster than Random.shuffle on short lists
    rand = rng.random
    for i in range(len(items) - 1, 0, -1):
        j = int(rand() * (i + 1))
        items[i], items[j] = items[j], items[i]


def determinize(state: GameState, rng: random.Random) -> GameState:
    """Copy of ``state`` with both face-down decks reordered consistently with what is known.

    Player deck: city cards are pooled and re-dealt into sub-stacks of the
    same city-card counts; sub-stacks still holding an epidemic get it back at
    a uniform position. Infection deck: each sub-stack is shuffled in place,
    sub-stack order unchanged.
    """
    s = state.copy()
    pool = [c for pile in s.player_deck for c in pile if c != EPIDEMIC]
    _shuffle(pool, rng)
    piles = []
    i = 0
    for pile in s.player_deck:
        has_epidemic = EPIDEMIC in pile
        k = len(pile) - (1 if has_epidemic else 0)
        new = pool[i:i + k]
        i += k
        if has_epidemic:
            new.insert(int(rng.random() * (k + 1)), EPIDEMIC)
        piles.append(new)
    s.player_deck = piles
    for pile in s.infection_deck:
        _shuffle(pile, rng)
    return s


def _reroute(s: GameState, dest: int, max_cost: int) -> MovePlan | None:
    p = s.current
    plans = _search(s, p, spendable_counts(s, p), max_cost=max_cost)
    return plans.get(dest)


def _adapt_terminal(s: GameState, a: Action) -> Action | None:
    if is_legal(s, a):
        return a
    if a.kind == Kind.CURE and not s.cured[a.color] and s.stations[s.locations[s.current]]:
        need = cards_to_cure(s.roles[s.current])
        colors = s.cmap.colors
        same = [c for c in s.hands[s.current] if colors[c] == a.color]
        if len(same) >= need:
            return cure(a.color, same[:need])
    return None


def play_macro_tolerant(s: GameState, macro: MacroAction) -> int:
    """Execute ``macro`` in place, absorbing whatever the current determinization invalidates.

    A movement leg that became illegal is replaced by the cheapest route to the
    macro's destination within the remaining move budget, or the rest of the
    movement is dropped. An inapplicable terminal action is wasted. Either way
    the macro consumes exactly ``macro.cost`` action points (padding with
    waits) unless the turn or game ends first. Returns the number of wasted
    action points.
    """
    budget = macro.cost
    used = 0
    wasted = 0
    steps = macro.move.steps
    for i, step in enumerate(steps):
        if s.phase != Phase.ACTIONS or s.status is not Status.ONGOING:
            return wasted
        if is_legal(s, step):
            apply_unchecked(s, step)
            used += 1
            continue
        plan = _reroute(s, macro.move.destination, len(steps) - i)
        if plan is not None:
            for a in plan.steps:
                apply_unchecked(s, a)
            used += plan.cost
        break
    if macro.terminal is not None and s.phase == Phase.ACTIONS and s.status is Status.ONGOING:
        a = _adapt_terminal(s, macro.terminal)
        if a is not None and used < budget:
            apply_unchecked(s, a)
            used += 1
    while used < budget and s.phase == Phase.ACTIONS and s.status is Status.ONGOING:
        apply_unchecked(s, WAIT)
        used += 1
        wasted += 1
    return wasted - macro.waits if macro.terminal is None else wasted


def play_gene_tolerant(s: GameState, gene) -> None:
    for macro in gene:
        if s.phase != Phase.ACTIONS or s.status is not Status.ONGOING:
            break
        play_macro_tolerant(s, macro)
    while s.phase == Phase.ACTIONS and s.status is Status.ONGOING:
        apply_unchecked(s, WAIT)


def rollout(state: GameState, genome, rng: random.Random, horizon: int | None = None, determinized: bool = False) -> GameState:
    """Play ``genome`` forward on one determinization; returns the final state.

    Draw and infection phases run after every gene. Stops early once the game
    is won or lost. ``horizon`` (if given) must equal the number of genes.
    """
    if horizon is not None and len(genome) != horizon:
        raise GenomeError(f"genome has {len(genome)} genes, expected {horizon}")
    if not genome:
        raise GenomeError("empty genome")
    s = state.copy() if determinized else determinize(state, rng)
    for gene in genome:
        if s.status is not Status.ONGOING:
            break
        play_gene_tolerant(s, gene)
        end_turn_inplace(s, rng)
    return s


def is_wait_gene(gene) -> bool:
    return all(m.family == Family.WAIT for m in gene)
