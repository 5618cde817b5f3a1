from __future__ import annotations

import random
from itertools import permutations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import midgame_state
from pandemic_rhea.agents import (
    HPAgent,
    RheaAgent,
    RheaParams,
    RPAgent,
    choose_destruction_points,
    evaluate_genome,
    hpa_next,
    mutate,
    rhea_decide,
    rhea_search,
    rpa_next,
    seed_genome,
)
from pandemic_rhea.fitness import evaluate_state, parse_fitness
from pandemic_rhea.forward import determinize, rollout
from pandemic_rhea.planner import Family, MacroContext
from pandemic_rhea.rules import (
    Phase,
    PhaseError,
    Role,
    Status,
    apply_action,
    end_turn_inplace,
)
from scenarios import C, M, brink, empty_board, place, set_infection_top, treat_here_genome, wait_genome

DIST = M.drive_distances()


def gene_cost(gene):
    return sum(m.cost for m in gene)


def check_shape(genome, state, horizon):
    assert len(genome) == horizon
    assert gene_cost(genome[0]) == state.actions_left
    assert all(gene_cost(g) == 4 for g in genome[1:])


# ---------------------------------------------------------------- HPA / RPA


def test_hpa_cure_beats_crisis():
    s = empty_board((Role.SCIENTIST, Role.MEDIC))
    for n in ("Essen", "London", "Madrid", "Paris"):
        s.hands[0].append(C(n))
    place(s, C("Chicago"), 3)
    place(s, C("Miami"), 3)
    for seed in range(10):
        assert hpa_next(s, random.Random(seed)).family == Family.CURE


def test_hpa_two_cube_treat():
    s = empty_board()
    target = next(v for v in range(48) if DIST[C("Atlanta")][v] == 2)
    place(s, target, 2)
    m = hpa_next(s, random.Random(0))
    assert m.family == Family.TREAT and m.move.destination == target


def test_hpa_empty_walks_away():
    s = empty_board()
    assert hpa_next(s, random.Random(0)).family == Family.WALK_AWAY


def test_rpa_prefers_three_cubes():
    s = empty_board()
    place(s, C("Chicago"), 1)
    place(s, C("Miami"), 3)
    for seed in range(10):
        m = rpa_next(s, random.Random(seed))
        assert m.family == Family.TREAT and m.move.destination == C("Miami")


def test_rpa_falls_back_to_walk_away():
    s = empty_board()
    assert rpa_next(s, random.Random(0)).family == Family.WALK_AWAY


def test_rpa_fixed_seed_deterministic():
    s = midgame_state(17)
    assert rpa_next(s, random.Random(5)) == rpa_next(s, random.Random(5))


def test_agents_refuse_wrong_phase():
    s = empty_board()
    s.phase = Phase.DRAW
    with pytest.raises(PhaseError):
        hpa_next(s, random.Random(0))
    with pytest.raises(PhaseError):
        rpa_next(s, random.Random(0))


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6))
def test_hpa_always_cures_when_possible(seed):
    s = midgame_state(seed)
    if MacroContext(s).cure():
        assert hpa_next(s, random.Random(seed)).family == Family.CURE


# ---------------------------------------------------------------- seeding


def test_seed_one_gene():
    s = midgame_state(3)
    g = seed_genome(s, 1, random.Random(0))
    check_shape(g, s, 1)


def test_seed_replays_on_its_determinization():
    s = midgame_state(11)
    genome = seed_genome(s, 5, random.Random(99))
    assert genome == seed_genome(s, 5, random.Random(99))
    check_shape(genome, s, 5)
    # replay with the same stream: every macro is HPA's pick and every action is legal
    rng = random.Random(99)
    t = determinize(s, rng)
    for gene in genome:
        for m in gene:
            if t.status is not Status.ONGOING:
                assert m.family == Family.WAIT
                continue
            assert hpa_next(t, rng) == m
            for a in m.actions():
                t = apply_action(t, a)
        assert t.phase != Phase.ACTIONS
        end_turn_inplace(t, rng)


def test_seed_pads_after_game_end():
    s = empty_board(epidemics=False)
    far = [v for v in range(48) if DIST[C("Atlanta")][v] >= 5]
    place(s, far[0], 3)
    place(s, far[1], 3)
    s.outbreaks = 7
    set_infection_top(s, far[:2])
    genome = seed_genome(s, 3, random.Random(0))
    check_shape(genome, s, 3)
    assert all(m.family == Family.WAIT for g in genome[1:] for m in g)


# ---------------------------------------------------------------- mutation


def test_rate_zero_mutates_one_gene():
    rng = random.Random(0)
    genome = [[None] * 3 for _ in range(5)]
    for _ in range(200):
        assert len(choose_destruction_points(genome, 0.0, rng)) == 1


def test_rate_one_mutates_every_gene():
    rng = random.Random(0)
    genome = [[None] * 3 for _ in range(5)]
    for _ in range(200):
        pts = choose_destruction_points(genome, 1.0, rng)
        assert sorted(pts) == list(range(5))
        assert all(0 <= k < 3 for k in pts.values())


@pytest.mark.parametrize("rate", [0.1, 0.5, 0.8])
def test_expected_destruction_count(rate):
    h, n = 4, 20_000
    rng = random.Random(1)
    genome = [[None] for _ in range(h)]
    mean = sum(len(choose_destruction_points(genome, rate, rng)) for _ in range(n)) / n
    exact = rate * h + (1 - rate) ** h
    assert mean == pytest.approx(exact, abs=0.03)
    assert mean >= max(1, rate * h) - 0.03


def test_destroy_first_macro_replans_first_turn():
    s = midgame_state(8)
    genome = seed_genome(s, 3, random.Random(2))
    child = mutate(genome, s, 0.0, random.Random(3), points={0: 0})
    check_shape(child, s, 3)
    assert child[1:] == genome[1:]


def test_mutate_rejects_bad_rate():
    s = midgame_state(8)
    genome = seed_genome(s, 2, random.Random(2))
    with pytest.raises(ValueError):
        mutate(genome, s, 1.5, random.Random(0))


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10**6), st.floats(0, 1), st.integers(1, 4))
def test_mutate_keeps_shape(seed, rate, horizon):
    s = midgame_state(seed)
    rng = random.Random(seed)
    genome = seed_genome(s, horizon, rng)
    for _ in range(3):
        genome = mutate(genome, s, rate, rng)
        check_shape(genome, s, horizon)


# ---------------------------------------------------------------- evaluation


def test_single_repetition_matches_rollout():
    s = midgame_state(21)
    spec = parse_fitness("p(mean(f_oa,f_cm))")
    genome = seed_genome(s, 2, random.Random(0))
    rng_a, rng_b = random.Random(4), random.Random(4)
    value = evaluate_genome(s, genome, spec, 1, rng_a)
    expect = evaluate_state(rollout(s, genome, random.Random(rng_b.getrandbits(64))), spec)
    assert value == expect


def test_won_state_scores_one():
    s = empty_board()
    s.cured = [True] * 4
    s.status = Status.WON
    s.phase = Phase.OVER
    for r in (1, 5):
        assert evaluate_genome(s, wait_genome(s, 2), parse_fitness("w(f_b)"), r, random.Random(0)) == 1.0


def test_average_matches_enumeration():
    s = brink()
    # cube fitness does not depend on the player cards drawn, so the six
    # infection orders give the exact expectation
    spec = parse_fitness("p(f_cm)")
    genome = wait_genome(s)
    values = []
    for order in permutations(s.infection_deck[0]):
        t = s.copy()
        t.infection_deck[0] = list(order)
        values.append(evaluate_state(rollout(t, genome, random.Random(0), determinized=True), spec))
    exact = sum(values) / len(values)
    got = evaluate_genome(s, genome, spec, 1000, random.Random(12))
    assert got == pytest.approx(exact, abs=0.02)
    saved = evaluate_genome(s, treat_here_genome(s), spec, 200, random.Random(12))
    assert saved > got


# ---------------------------------------------------------------- RHEA


def test_rate_schedule_linear():
    p = RheaParams(generations=11, mutation_start=1.0, mutation_end=0.5)
    assert p.rate(0) == 1.0
    assert p.rate(10) == pytest.approx(0.5)
    assert p.rate(5) == pytest.approx(0.75)


@pytest.mark.parametrize("kwargs", [dict(horizon=0), dict(repetitions=0), dict(generations=-1), dict(mutation_end=1.2)])
def test_params_validated(kwargs):
    with pytest.raises(ValueError):
        RheaParams(**kwargs)


def test_zero_generations_is_hpa_seed():
    s = midgame_state(31)
    params = RheaParams(horizon=2, generations=0, repetitions=1)
    assert rhea_decide(s, params, random.Random(6)) == seed_genome(s, 2, random.Random(6))[0][0]


def test_rhea_deterministic_and_elitist():
    s = midgame_state(14)
    params = RheaParams(horizon=2, generations=8, repetitions=2)
    a = rhea_search(s, params, random.Random(1))
    b = rhea_search(s, params, random.Random(1))
    assert a.genome == b.genome and a.history == b.history
    assert all(y >= x for x, y in zip(a.history, a.history[1:]))
    assert len(a.history) == 9
    check_shape(a.genome, s, 2)


def test_rhea_avoids_the_eighth_outbreak():
    s = brink()
    params = RheaParams(horizon=1, generations=15, repetitions=4)
    first = rhea_decide(s, params, random.Random(0))
    assert first.family == Family.TREAT and first.move.destination == C("Chicago")


def test_controllers():
    s = midgame_state(5)
    for agent in (HPAgent(random.Random(0)), RPAgent(random.Random(0)),
                  RheaAgent(RheaParams(horizon=1, generations=2, repetitions=1), random.Random(0))):
        m = agent.decide(s)
        assert m.cost <= s.actions_left
        t = s
        for a in m.actions():
            t = apply_action(t, a)
    assert RheaAgent(RheaParams(), random.Random(0)).fingerprint().startswith("rhea:p(mean(f_oa,f_cm))")
