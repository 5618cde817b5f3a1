from __future__ import annotations

import random

from pandemic_rhea.agents import hpa_next
from pandemic_rhea.rules import (
    GameConfig,
    GameState,
    Phase,
    Status,
    apply_unchecked,
    end_turn_inplace,
    legal_actions,
    new_game,
)


def random_config(rng: random.Random) -> GameConfig:
    return GameConfig.random(rng.choice((2, 3, 4)), rng.choice((4, 5, 6)), rng, seed=rng.getrandbits(32))


def random_action_turn(s: GameState, rng: random.Random) -> None:
    """Uniformly random legal actions until the actions phase ends."""
    while s.phase == Phase.ACTIONS and s.status is Status.ONGOING:
        apply_unchecked(s, rng.choice(legal_actions(s)))


def hpa_turn(s: GameState, rng: random.Random) -> None:
    while s.phase == Phase.ACTIONS and s.status is Status.ONGOING:
        for a in hpa_next(s, rng).actions():
            apply_unchecked(s, a)


def midgame_state(seed: int, policy=hpa_turn, max_turns: int | None = None) -> GameState:
    """An ongoing Actions-phase state some turns into a game, sometimes mid-turn."""
    rng = random.Random(seed)
    config = random_config(rng)
    s = new_game(config)
    target = rng.randint(0, max_turns if max_turns is not None else 12)
    history = [s.copy()]
    for _ in range(target):
        policy(s, rng)
        end_turn_inplace(s, rng)
        if s.status is not Status.ONGOING:
            break
        history.append(s.copy())
    s = history[-1]
    # spend a few actions so mid-turn budgets are covered too
    for _ in range(rng.randint(0, 2)):
        acts = [a for a in legal_actions(s)]
        apply_unchecked(s, rng.choice(acts))
        if s.phase != Phase.ACTIONS:
            return history[-1]
    return s
