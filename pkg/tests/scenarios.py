"""Hand-built states shared by the forward-model and agent tests."""

from __future__ import annotations

from pandemic_rhea.board import standard_map
from pandemic_rhea.planner import Family, MacroAction, MovePlan, wait_macro
from pandemic_rhea.rules import EPIDEMIC, GameConfig, Role, new_game, treat

M = standard_map()
C = M.city


def empty_board(roles=(Role.SCIENTIST, Role.RESEARCHER), epidemics: bool = True):
    """Fresh game with no cubes and empty hands; optionally no epidemics left in the deck."""
    s = new_game(GameConfig(len(roles), 4, tuple(roles)))
    for row in s.cubes:
        for i in range(48):
            row[i] = 0
    s.supply = [24] * 4
    for h in s.hands:
        s.player_discard.extend(h)
        h.clear()
    if not epidemics:
        for pile in s.player_deck:
            if EPIDEMIC in pile:
                pile.remove(EPIDEMIC)
        s.epidemic_count = 0
    return s


def place(s, city: int, n: int) -> None:
    color = M.colors[city]
    s.supply[color] += s.cubes[color][city] - n
    s.cubes[color][city] = n


def set_infection_top(s, top: list[int]) -> None:
    """Make ``top`` the first infection sub-stack (last element drawn first)."""
    rest = [c for c in range(48) if c not in top and c not in s.infection_discard]
    s.infection_deck = [list(top), rest]


def brink():
    """Seven outbreaks; the top infection sub-stack is Chicago (3 cubes), Lagos, Cairo.

    The Scientist stands in Chicago. Two of the three cards get drawn.
    """
    s = empty_board(epidemics=False)
    chicago, lagos, cairo = C("Chicago"), C("Lagos"), C("Cairo")
    place(s, chicago, 3)
    place(s, cairo, 1)
    s.outbreaks = 7
    s.locations[0] = chicago
    set_infection_top(s, [chicago, lagos, cairo])
    return s


def wait_genome(s, horizon: int = 1):
    return [[wait_macro(s, s.actions_left if i == 0 else 4)] for i in range(horizon)]


def treat_here_genome(s):
    loc = s.locations[s.current]
    color = M.colors[loc]
    m = MacroAction(Family.TREAT, MovePlan(loc, (), (), 0), treat(color), 1, s.cubes[color][loc])
    return [[m, wait_macro(s, s.actions_left - 1)]]
