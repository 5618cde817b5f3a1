"""Card valuation through cure ability.

Abilities are kept internally as integers in units of 1/20 (the common
denominator of 1/4 and 1/5) so comparisons are exact.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

from .board import N_COLORS

UNIT = 20


def _threshold(role: int) -> int:
    # Scientist (role 3) cures with 4 cards
    return 4 if role == 3 else 5


def color_counts(state, player: int, exclude=()) -> list[int]:
    counts = [0] * N_COLORS
    colors = state.cmap.colors
    for c in state.hands[player]:
        if c not in exclude:
            counts[colors[c]] += 1
    return counts


def _player_units(count: int, role: int) -> int:
    need = _threshold(role)
    if count >= need:
        return UNIT
    return count * UNIT // need


def ability_units(state, removed: dict[int, tuple[int, ...]] | None = None) -> list[int]:
    """Team cure ability per color in 1/20 units, optionally with some cards taken out of hands."""
    colors = state.cmap.colors
    cured = state.cured
    out = [UNIT if cured[t] else 0 for t in range(N_COLORS)]
    for p, role in enumerate(state.roles):
        counts = [0] * N_COLORS
        skip = removed.get(p, ()) if removed else ()
        for c in state.hands[p]:
            if c not in skip:
                counts[colors[c]] += 1
        need = 4 if role == 3 else 5
        for t in range(N_COLORS):
            n = counts[t]
            if n:
                u = UNIT if n >= need else n * UNIT // need
                if u > out[t]:
                    out[t] = u
    return out


@dataclass(frozen=True)
class CureAbility:
    per_color: tuple[float, ...]
    per_player: tuple[tuple[float, ...], ...]

    @property
    def total(self) -> float:
        return sum(self.per_color)


def cure_ability(state) -> CureAbility:
    per_player = []
    for p, role in enumerate(state.roles):
        counts = color_counts(state, p)
        per_player.append(tuple(min(1.0, counts[t] / _threshold(role)) for t in range(N_COLORS)))
    per_color = tuple(
        1.0 if state.cured[t] else max(row[t] for row in per_player) for t in range(N_COLORS)
    )
    return CureAbility(per_color=per_color, per_player=tuple(per_player))


def spendable_counts(state, player: int) -> list[int]:
    """How many of ``player``'s cards of each color can go without lowering the team's cure ability."""
    counts = [color_counts(state, q) for q in range(len(state.roles))]
    own = counts[player]
    role = state.roles[player]
    out = []
    for t in range(N_COLORS):
        h = own[t]
        if state.cured[t] or h == 0:
            out.append(h)
            continue
        others = max(
            (_player_units(counts[q][t], state.roles[q]) for q in range(len(state.roles)) if q != player),
            default=0,
        )
        mine = _player_units(h, role)
        if others >= mine:
            out.append(h)
        elif mine == UNIT:
            out.append(h - _threshold(role))
        else:
            out.append(0)
    return out


def spend_allowed(state, player: int, cards) -> bool:
    """True iff discarding ``cards`` from ``player``'s hand leaves the cure ability of every color unchanged."""
    return ability_units(state, {player: tuple(cards)}) == ability_units(state)


def select_discards(state, player: int, count: int) -> list[int]:
    """Cards to drop so that the total cure ability falls the least.

    Ties go to cards of the color with most duplicates in hand, then to the
    alphabetically first city name.
    """
    hand = state.hands[player]
    if count < 0 or count > len(hand):
        raise ValueError(f"cannot discard {count} of {len(hand)} cards")
    if count == 0:
        return []
    names = state.cmap.names
    colors = state.cmap.colors
    dup = color_counts(state, player)
    base = sum(ability_units(state))
    best, best_key = None, None
    for combo in combinations(hand, count):
        drop = base - sum(ability_units(state, {player: combo}))
        key = (drop, sorted((-dup[colors[c]], names[c]) for c in combo))
        if best_key is None or key < best_key:
            best, best_key = combo, key
    return list(best)
