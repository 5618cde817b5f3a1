from __future__ import annotations

import random
from collections import Counter
from itertools import permutations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.stats import chisquare

from helpers import midgame_state
from pandemic_rhea.forward import GenomeError, determinize, play_macro_tolerant, rollout
from pandemic_rhea.planner import Family, MacroAction, MovePlan, generate_macros
from pandemic_rhea.rules import (
    EPIDEMIC,
    GameConfig,
    LossCause,
    Phase,
    Status,
    drive,
    new_game,
    treat,
)
from scenarios import C, M, brink, empty_board, set_infection_top, treat_here_genome, wait_genome


def observable(s):
    """Everything except the order of face-down cards."""
    return (
        s.roles, s.cubes, s.stations, s.locations, s.hands, s.current, s.actions_left, s.cured,
        s.supply, s.outbreaks, s.epidemics_drawn, s.player_discard, s.infection_discard,
        s.ops_flight_used, s.phase, s.status, s.turn,
        [(len(p), EPIDEMIC in p) for p in s.player_deck],
        sorted(c for p in s.player_deck for c in p),
        [sorted(p) for p in s.infection_deck],
    )


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 10**6))
def test_determinize_preserves_observation(seed):
    s = midgame_state(seed)
    d = determinize(s, random.Random(seed))
    assert observable(d) == observable(s)


def test_small_substack_is_permutation():
    s = new_game(GameConfig())
    cards = [c for c in s.player_deck[0] if c != EPIDEMIC][:3]
    s.player_discard.extend(c for p in s.player_deck for c in p if c != EPIDEMIC and c not in cards)
    s.player_deck = [cards]
    s.epidemics_drawn = 4
    rng = random.Random(0)
    seen = set()
    for _ in range(200):
        d = determinize(s, rng)
        assert sorted(d.player_deck[0]) == sorted(cards)
        seen.add(tuple(d.player_deck[0]))
    assert len(seen) == 6


def test_epidemic_position_uniform():
    s = new_game(GameConfig(4, 4, seed=5))
    assert len(s.player_deck[0]) == 11
    rng = random.Random(123)
    counts = Counter(determinize(s, rng).player_deck[0].index(EPIDEMIC) for _ in range(10_000))
    assert sorted(counts) == list(range(11))
    assert chisquare([counts[i] for i in range(11)]).pvalue > 0.01


def test_infection_substack_order_uniform():
    s = empty_board()
    top = [C(n) for n in ("Paris", "London", "Madrid", "Essen", "Milan")]
    set_infection_top(s, top)
    rng = random.Random(7)
    counts = Counter(determinize(s, rng).infection_deck[0].index(C("Paris")) for _ in range(10_000))
    assert chisquare([counts[i] for i in range(5)]).pvalue > 0.01


def test_upper_substack_drawn_first():
    s = empty_board()
    paris, london, miami = C("Paris"), C("London"), C("Miami")
    s.infection_deck = [[paris, london], [miami]]
    s.infection_discard = [c for c in range(48) if c not in (paris, london, miami)]
    rng = random.Random(1)
    for _ in range(500):
        d = determinize(s, rng)
        assert d.infection_deck[0][-2:] in ([paris, london], [london, paris])
        assert d.infection_deck[1] == [miami]


def test_wait_genome_advances_turns_only():
    s = empty_board(epidemics=False)
    g = wait_genome(s, 3)
    end = rollout(s, g, random.Random(0), horizon=3)
    assert end.turn == s.turn + 3
    assert end.locations == s.locations and end.stations == s.stations
    assert end.current == (s.current + 3) % 2
    assert sum(end.supply) == 96 - 6  # two infections per turn on an empty board
    assert sum(len(h) for h in end.hands) == 6


def test_wasted_treat_still_moves():
    s = empty_board()
    m = MacroAction(Family.TREAT, MovePlan(C("Chicago"), (drive(C("Chicago")),), (), 1), treat(0), 2, 1)
    wasted = play_macro_tolerant(s, m)
    assert wasted == 1
    assert s.locations[0] == C("Chicago") and s.actions_left == 2


def test_invalid_leg_rerouted():
    s = empty_board()
    # the first leg is stale (already in Chicago); Montreal is one drive away
    leg = MovePlan(C("Montreal"), (drive(C("Chicago")), drive(C("Montreal"))), (), 2)
    s.locations[0] = C("Chicago")
    wasted = play_macro_tolerant(s, MacroAction(Family.WALK_AWAY, leg, None, 2))
    assert s.locations[0] == C("Montreal")
    assert s.actions_left == 2
    assert wasted == 1


def _enumerate(s, genome):
    """Outcome of ``genome`` for each order of the top infection sub-stack."""
    out = []
    for order in permutations(s.infection_deck[0]):
        t = s.copy()
        t.infection_deck[0] = list(order)
        out.append(rollout(t, genome, random.Random(0), determinized=True))
    return out


def test_brink_scenario_enumerated():
    s = brink()
    lost = [e.loss_cause for e in _enumerate(s, wait_genome(s))]
    # Chicago is among the two drawn cards in four of the six orders
    assert lost.count(LossCause.OUTBREAKS) == 4 and lost.count(None) == 2
    saved = _enumerate(s, treat_here_genome(s))
    assert all(e.status is Status.ONGOING for e in saved)
    rng = random.Random(3)
    results = Counter(rollout(s, wait_genome(s), rng).status for _ in range(600))
    assert 0.6 < results[Status.LOST] / 600 < 0.73


def test_rollout_is_repeatable():
    s = midgame_state(42)
    g = wait_genome(s, 3)
    a = rollout(s, g, random.Random(9))
    b = rollout(s, g, random.Random(9))
    assert a == b


def test_bad_genome():
    s = empty_board()
    with pytest.raises(GenomeError):
        rollout(s, wait_genome(s, 2), random.Random(0), horizon=3)
    with pytest.raises(GenomeError):
        rollout(s, [], random.Random(0))


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6), st.integers(0, 10**6))
def test_rollout_absorbs_foreign_genomes(seed_a, seed_b):
    """Macros planned on one state never raise when replayed on an unrelated one."""
    a, b = midgame_state(seed_a), midgame_state(seed_b)
    rng = random.Random(seed_a ^ seed_b)
    macros = generate_macros(a, budget=4)
    genome = []
    for _ in range(3):
        gene, left = [], 4
        while left:
            fits = [m for m in macros if m.cost <= left]
            m = rng.choice(fits) if fits else None
            if m is None:
                break
            gene.append(m)
            left -= m.cost
        genome.append(gene)
    end = rollout(b, genome, rng)
    assert end.status is not Status.ONGOING or end.phase == Phase.ACTIONS
    assert end.turn <= b.turn + 3
