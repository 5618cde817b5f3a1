"""State evaluation: the six base heuristics and the win/loss-aware wrappers."""

from __future__ import annotations

import math
import re
from dataclasses import dataclass

from .board import N_COLORS
from .rules import CUBES_PER_COLOR, MAX_OUTBREAKS, GameState, Status
from .valuation import UNIT, ability_units

BASE_NAMES = ("f_od", "f_oa", "f_ca", "f_cm", "f_cp", "f_b")
WRAPPERS = ("raw", "w", "p")
CURED_BONUS = 0.3


def f_od(s: GameState) -> float:
    return s.n_cured / 4


def f_oa(s: GameState, literal: bool = False) -> float:
    mean_ability = sum(ability_units(s)) / (UNIT * N_COLORS)
    cured_term = CURED_BONUS * (s.n_cured if literal else s.n_cured / 4)
    return (mean_ability + cured_term) / (1 + CURED_BONUS)


def f_ca(s: GameState) -> float:
    return sum(s.supply) / (CUBES_PER_COLOR * N_COLORS)


def f_cm(s: GameState) -> float:
    return min(s.supply) / CUBES_PER_COLOR


def f_cp(s: GameState) -> float:
    return math.prod(n / CUBES_PER_COLOR for n in s.supply)


def f_b(s: GameState) -> float:
    return 1 - s.outbreaks / MAX_OUTBREAKS


_BASES = {"f_od": f_od, "f_ca": f_ca, "f_cm": f_cm, "f_cp": f_cp, "f_b": f_b}


@dataclass(frozen=True)
class FitnessSpec:
    bases: tuple[str, ...] = ("f_oa", "f_cm")
    wrapper: str = "p"
    c_p: float = 0.1
    literal_foa: bool = False

    def __post_init__(self):
        if not 1 <= len(self.bases) <= 2:
            raise ValueError("a fitness uses one base or the mean of two")
        for b in self.bases:
            if b not in BASE_NAMES:
                raise ValueError(f"unknown fitness {b!r}; expected one of {BASE_NAMES}")
        if self.wrapper not in WRAPPERS:
            raise ValueError(f"unknown wrapper {self.wrapper!r}")
        if not 0 <= self.c_p <= 1:
            raise ValueError("c_p must lie in [0, 1]")

    @property
    def base_name(self) -> str:
        if len(self.bases) == 1:
            return self.bases[0]
        return f"mean({self.bases[0]},{self.bases[1]})"

    @property
    def name(self) -> str:
        return self.base_name if self.wrapper == "raw" else f"{self.wrapper}({self.base_name})"


_SPEC_RE = re.compile(r"^(?:(?P<wrap>[wp])\()?(?P<body>.*?)(?(wrap)\))$")


def parse_fitness(text: str, wrapper: str | None = None, c_p: float = 0.1, literal_foa: bool = False) -> FitnessSpec:
    """Parse ``f_od``, ``mean(f_oa,f_cm)`` or a wrapped form like ``p(mean(f_oa,f_cm))``."""
    text = text.replace(" ", "")
    m = _SPEC_RE.match(text)
    if m is None:
        raise ValueError(f"cannot parse fitness {text!r}")
    body = m.group("body")
    inline_wrap = m.group("wrap")
    if inline_wrap and wrapper and wrapper != inline_wrap:
        raise ValueError(f"wrapper given twice: {inline_wrap!r} vs {wrapper!r}")
    wrap = inline_wrap or wrapper or "raw"
    if body.startswith("mean(") and body.endswith(")"):
        bases = tuple(b for b in body[5:-1].split(","))
    else:
        bases = (body,)
    return FitnessSpec(bases=bases, wrapper=wrap, c_p=c_p, literal_foa=literal_foa)


def base_value(state: GameState, spec: FitnessSpec) -> float:
    vals = []
    for b in spec.bases:
        if b == "f_oa":
            vals.append(f_oa(state, spec.literal_foa))
        else:
            vals.append(_BASES[b](state))
    return sum(vals) / len(vals)


def evaluate_state(state: GameState, spec: FitnessSpec) -> float:
    f = base_value(state, spec)
    if spec.wrapper == "raw":
        return f
    if state.status is Status.WON:
        return 1.0
    if state.status is Status.LOST:
        return 0.0 if spec.wrapper == "w" else spec.c_p * f
    return f
