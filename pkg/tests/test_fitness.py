from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import midgame_state
from pandemic_rhea.fitness import (
    BASE_NAMES,
    FitnessSpec,
    evaluate_state,
    f_ca,
    f_cm,
    f_cp,
    f_oa,
    parse_fitness,
)
from pandemic_rhea.rules import LossCause, Phase, Status
from scenarios import empty_board


def test_two_cured_f_od():
    s = empty_board()
    s.cured = [True, False, True, False]
    assert evaluate_state(s, parse_fitness("f_od")) == 0.5


def test_clean_board_f_cm():
    assert evaluate_state(empty_board(), parse_fitness("f_cm")) == 1.0


def test_lost_penalty():
    s = empty_board()
    s.supply = [24, 24, 18, 16]  # cube product 0.75 * 2/3 = 0.5
    s.status = Status.LOST
    s.loss_cause = LossCause.OUTBREAKS
    s.phase = Phase.OVER
    assert f_cp(s) == pytest.approx(0.5)
    assert evaluate_state(s, parse_fitness("p(f_cp)", c_p=0.1)) == pytest.approx(0.05)
    assert evaluate_state(s, parse_fitness("w(f_cp)")) == 0.0
    assert evaluate_state(s, parse_fitness("f_cp")) == pytest.approx(0.5)


@pytest.mark.parametrize("name", BASE_NAMES)
def test_won_is_one_under_w(name):
    s = empty_board()
    s.cured = [True] * 4
    s.status = Status.WON
    s.phase = Phase.OVER
    assert evaluate_state(s, parse_fitness(f"w({name})")) == 1.0
    assert evaluate_state(s, parse_fitness(f"p({name})")) == 1.0


def test_f_oa_normalized_and_literal():
    s = empty_board()
    s.cured = [True] * 4
    assert f_oa(s) == pytest.approx(1.0)
    assert f_oa(s, literal=True) > 1.0
    s.cured = [False] * 4
    assert f_oa(s) == 0.0


def test_parse_names():
    spec = parse_fitness("p(mean(f_oa, f_cm))", c_p=0.2)
    assert spec == FitnessSpec(("f_oa", "f_cm"), "p", 0.2)
    assert spec.name == "p(mean(f_oa,f_cm))"
    assert parse_fitness("f_b").wrapper == "raw"
    assert parse_fitness("mean(f_ca,f_b)", wrapper="w").name == "w(mean(f_ca,f_b))"


@pytest.mark.parametrize("text", ["f_xx", "mean(f_oa,f_cm,f_b)", "q(f_od)", "mean()"])
def test_parse_rejects(text):
    with pytest.raises(ValueError):
        parse_fitness(text)


def test_wrapper_given_twice():
    with pytest.raises(ValueError):
        parse_fitness("p(f_od)", wrapper="w")


ALL_SPECS = [
    f"{w}({b})" if w != "raw" else b
    for w in ("raw", "w", "p")
    for b in list(BASE_NAMES) + [f"mean({a},{c})" for i, a in enumerate(BASE_NAMES) for c in BASE_NAMES[i + 1:]]
]


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6))
def test_every_spec_in_unit_interval(seed):
    s = midgame_state(seed)
    assert f_cp(s) <= f_cm(s) <= f_ca(s)
    for text in ALL_SPECS:
        v = evaluate_state(s, parse_fitness(text))
        assert 0.0 <= v <= 1.0, text
