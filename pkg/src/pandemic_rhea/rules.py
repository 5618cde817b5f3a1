"""Rules of the simplified four-role Pandemic variant.

Public operations (``new_game``, ``apply_action``, ``draw_phase``,
``infection_phase``) are pure: they copy the input state. The ``*_inplace``
variants mutate and are what the forward model uses in its inner loops.

Card ids are city ids (0..47). Epidemic cards are the sentinel ``EPIDEMIC``.
Sub-stacks in both decks are stored top sub-stack first; within a sub-stack
the last element is the next card to be drawn.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from enum import Enum, IntEnum
from itertools import combinations
from typing import NamedTuple

from .board import COLORS, N_COLORS, START_CITY_NAME, CityMap, standard_map

EPIDEMIC = -1
MAX_CUBES = 3
CUBES_PER_COLOR = 24
MAX_OUTBREAKS = 8
MAX_STATIONS = 6
HAND_LIMIT = 7
ACTIONS_PER_TURN = 4
INFECTION_RATES = (2, 2, 2, 3, 3, 4, 4)
INITIAL_HAND = {2: 4, 3: 3, 4: 2}


class RuleViolation(Exception):
    """An action was applied that the rules do not allow in this state."""


class PhaseError(RuleViolation):
    pass


class ConfigError(ValueError):
    pass


class Role(IntEnum):
    OPERATIONS_EXPERT = 0
    MEDIC = 1
    RESEARCHER = 2
    SCIENTIST = 3


ROLE_NAMES = {
    Role.OPERATIONS_EXPERT: "OperationsExpert",
    Role.MEDIC: "Medic",
    Role.RESEARCHER: "Researcher",
    Role.SCIENTIST: "Scientist",
}
ROLE_BY_NAME = {v: k for k, v in ROLE_NAMES.items()}


class Phase(IntEnum):
    ACTIONS = 0
    DRAW = 1
    INFECT = 2
    OVER = 3


class Status(Enum):
    ONGOING = "ongoing"
    WON = "won"
    LOST = "lost"


class LossCause(str, Enum):
    OUTBREAKS = "outbreaks"
    CUBES = "cubes"
    PLAYER_CARDS = "player-cards"


class Kind(IntEnum):
    DRIVE = 0
    DIRECT = 1
    CHARTER = 2
    SHUTTLE = 3
    OPS_FLIGHT = 4
    BUILD = 5
    TREAT = 6
    SHARE = 7
    CURE = 8
    WAIT = 9
    DISCARD = 10


MOVE_KINDS = frozenset({Kind.DRIVE, Kind.DIRECT, Kind.CHARTER, Kind.SHUTTLE, Kind.OPS_FLIGHT})
KIND_NAMES = {k: k.name.lower() for k in Kind}


class Action(NamedTuple):
    kind: Kind
    city: int = -1
    card: int = -1
    color: int = -1
    other: int = -1
    give: bool = False
    cards: tuple[int, ...] = ()

    def describe(self, cmap: CityMap | None = None) -> str:
        cmap = cmap or standard_map()
        k = self.kind
        if k in (Kind.DRIVE, Kind.SHUTTLE, Kind.DIRECT):
            return f"{KIND_NAMES[k]} {cmap.names[self.city]}"
        if k == Kind.CHARTER:
            return f"charter {cmap.names[self.card]} -> {cmap.names[self.city]}"
        if k == Kind.OPS_FLIGHT:
            return f"ops-flight [{cmap.names[self.card]}] -> {cmap.names[self.city]}"
        if k == Kind.BUILD:
            return f"build {cmap.names[self.city]}"
        if k == Kind.TREAT:
            return f"treat {COLORS[self.color]}"
        if k == Kind.SHARE:
            verb = "give" if self.give else "take"
            return f"{verb} {cmap.names[self.card]} {'to' if self.give else 'from'} P{self.other}"
        if k == Kind.CURE:
            return f"cure {COLORS[self.color]}"
        if k == Kind.DISCARD:
            return f"discard {cmap.names[self.card]}"
        return "wait"


def drive(to: int) -> Action:
    return Action(Kind.DRIVE, city=to)


def direct_flight(card: int) -> Action:
    return Action(Kind.DIRECT, city=card, card=card)


def charter_flight(origin: int, to: int) -> Action:
    return Action(Kind.CHARTER, city=to, card=origin)


def shuttle_flight(to: int) -> Action:
    return Action(Kind.SHUTTLE, city=to)


def ops_flight(card: int, to: int) -> Action:
    return Action(Kind.OPS_FLIGHT, city=to, card=card)


def build_station(city: int) -> Action:
    return Action(Kind.BUILD, city=city)


def treat(color: int) -> Action:
    return Action(Kind.TREAT, color=color)


def share(give: bool, card: int, other: int) -> Action:
    return Action(Kind.SHARE, card=card, other=other, give=give)


def cure(color: int, cards) -> Action:
    return Action(Kind.CURE, color=color, cards=tuple(sorted(cards)))


WAIT = Action(Kind.WAIT)


def discard(card: int) -> Action:
    return Action(Kind.DISCARD, card=card)


def cards_to_cure(role: int) -> int:
    return 4 if role == Role.SCIENTIST else 5


@dataclass(frozen=True)
class GameConfig:
    players: int = 4
    epidemics: int = 4
    roles: tuple[Role, ...] = (
        Role.OPERATIONS_EXPERT,
        Role.MEDIC,
        Role.RESEARCHER,
        Role.SCIENTIST,
    )
    seed: int = 0

    def validate(self) -> None:
        if self.players not in (2, 3, 4):
            raise ConfigError(f"players must be 2..4, got {self.players}")
        if self.epidemics not in (4, 5, 6):
            raise ConfigError(f"epidemics must be 4, 5 or 6, got {self.epidemics}")
        if len(self.roles) != self.players:
            raise ConfigError("one role per player required")
        if len(set(self.roles)) != len(self.roles):
            raise ConfigError("roles may not repeat")
        for r in self.roles:
            Role(r)

    @classmethod
    def random(cls, players: int, epidemics: int, rng: random.Random, seed: int = 0) -> GameConfig:
        roles = tuple(Role(r) for r in rng.sample(list(Role), players))
        return cls(players=players, epidemics=epidemics, roles=roles, seed=seed)


@dataclass(slots=True)
class GameState:
    cmap: CityMap
    roles: tuple[Role, ...]
    cubes: list[list[int]]  # [color][city]
    stations: list[bool]
    n_stations: int
    locations: list[int]
    hands: list[list[int]]
    current: int
    actions_left: int
    cured: list[bool]
    supply: list[int]
    outbreaks: int
    epidemics_drawn: int
    epidemic_count: int
    player_deck: list[list[int]]
    player_discard: list[int]
    infection_deck: list[list[int]]
    infection_discard: list[int]
    ops_flight_used: bool
    phase: Phase
    status: Status
    loss_cause: LossCause | None
    turn: int

    def copy(self) -> GameState:
        return GameState(
            self.cmap,
            self.roles,
            [row[:] for row in self.cubes],
            self.stations[:],
            self.n_stations,
            self.locations[:],
            [h[:] for h in self.hands],
            self.current,
            self.actions_left,
            self.cured[:],
            self.supply[:],
            self.outbreaks,
            self.epidemics_drawn,
            self.epidemic_count,
            [s[:] for s in self.player_deck],
            self.player_discard[:],
            [s[:] for s in self.infection_deck],
            self.infection_discard[:],
            self.ops_flight_used,
            self.phase,
            self.status,
            self.loss_cause,
            self.turn,
        )

    @property
    def n_players(self) -> int:
        return len(self.roles)

    @property
    def n_cured(self) -> int:
        return sum(self.cured)

    @property
    def infection_rate(self) -> int:
        return INFECTION_RATES[self.epidemics_drawn]

    @property
    def player_deck_size(self) -> int:
        return sum(len(s) for s in self.player_deck)

    @property
    def is_over(self) -> bool:
        return self.status is not Status.ONGOING

    def city_cubes(self, city: int) -> list[int]:
        return [self.cubes[c][city] for c in range(N_COLORS)]

    def max_turns(self) -> int:
        """Upper bound on player turns: the deck runs out on the draw after this many."""
        total = 48 - INITIAL_HAND[self.n_players] * self.n_players + self.epidemic_count
        return total // 2 + 1


def infection_rate_for(epidemics_drawn: int) -> int:
    return INFECTION_RATES[epidemics_drawn]


def _split_sizes(n: int, parts: int) -> list[int]:
    base, extra = divmod(n, parts)
    return [base + (1 if i < extra else 0) for i in range(parts)]


def new_game(config: GameConfig, rng: random.Random | None = None, cmap: CityMap | None = None) -> GameState:
    """Set up a fresh game. ``rng`` defaults to ``Random(config.seed)``."""
    config.validate()
    cmap = cmap or standard_map()
    if rng is None:
        rng = random.Random(config.seed)
    n = cmap.n_cities
    start = cmap.city(START_CITY_NAME)

    cubes = [[0] * n for _ in range(N_COLORS)]
    supply = [CUBES_PER_COLOR] * N_COLORS
    infection = list(range(n))
    rng.shuffle(infection)
    discard_pile: list[int] = []
    for amount in (3, 3, 3, 2, 2, 2, 1, 1, 1):
        city = infection.pop()
        color = cmap.colors[city]
        cubes[color][city] = amount
        supply[color] -= amount
        discard_pile.append(city)

    cards = list(range(n))
    rng.shuffle(cards)
    per_hand = INITIAL_HAND[config.players]
    hands = []
    for _ in range(config.players):
        hands.append(sorted(cards.pop() for _ in range(per_hand)))

    piles = []
    offset = 0
    for size in _split_sizes(len(cards), config.epidemics):
        pile = cards[offset:offset + size] + [EPIDEMIC]
        offset += size
        rng.shuffle(pile)
        piles.append(pile)

    stations = [False] * n
    stations[start] = True
    return GameState(
        cmap=cmap,
        roles=tuple(Role(r) for r in config.roles),
        cubes=cubes,
        stations=stations,
        n_stations=1,
        locations=[start] * config.players,
        hands=hands,
        current=0,
        actions_left=ACTIONS_PER_TURN,
        cured=[False] * N_COLORS,
        supply=supply,
        outbreaks=0,
        epidemics_drawn=0,
        epidemic_count=config.epidemics,
        player_deck=piles,
        player_discard=[],
        infection_deck=[infection],
        infection_discard=discard_pile,
        ops_flight_used=False,
        phase=Phase.ACTIONS,
        status=Status.ONGOING,
        loss_cause=None,
        turn=1,
    )


# ---------------------------------------------------------------- actions


def legal_actions(state: GameState) -> list[Action]:
    if state.status is not Status.ONGOING or state.phase != Phase.ACTIONS:
        raise PhaseError(f"no actions in phase {state.phase.name}")
    p = state.current
    role = state.roles[p]
    loc = state.locations[p]
    hand = state.hands[p]
    n = state.cmap.n_cities
    out = [drive(v) for v in state.cmap.neighbors[loc]]
    out.extend(direct_flight(c) for c in hand if c != loc)
    if loc in hand:
        out.extend(charter_flight(loc, v) for v in range(n) if v != loc)
    if state.stations[loc]:
        out.extend(shuttle_flight(v) for v in range(n) if v != loc and state.stations[v])
        if role == Role.OPERATIONS_EXPERT and not state.ops_flight_used:
            for c in hand:
                out.extend(ops_flight(c, v) for v in range(n) if v != loc)
    if not state.stations[loc] and (role == Role.OPERATIONS_EXPERT or loc in hand):
        out.append(build_station(loc))
    for color in range(N_COLORS):
        if state.cubes[color][loc]:
            out.append(treat(color))
    out.extend(_share_actions(state, p))
    if state.stations[loc]:
        need = cards_to_cure(role)
        colors = state.cmap.colors
        for color in range(N_COLORS):
            if state.cured[color]:
                continue
            same = [c for c in hand if colors[c] == color]
            if len(same) >= need:
                out.extend(cure(color, combo) for combo in combinations(same, need))
    out.append(WAIT)
    return out


def _share_actions(state: GameState, p: int) -> list[Action]:
    loc = state.locations[p]
    out = []
    seen = set()
    for q in range(state.n_players):
        if q == p:
            continue
        qloc = state.locations[q]
        # give
        if state.roles[p] == Role.RESEARCHER:
            for c in state.hands[p]:
                if qloc == c:
                    seen.add((True, c, q))
        elif qloc == loc and loc in state.hands[p]:
            seen.add((True, loc, q))
        # take
        if loc in state.hands[q] and (qloc == loc or state.roles[q] == Role.RESEARCHER):
            seen.add((False, loc, q))
    for give, c, q in sorted(seen, key=lambda t: (t[2], not t[0], t[1])):
        out.append(share(give, c, q))
    return out


def can_share(state: GameState, p: int, give: bool, card: int, q: int) -> bool:
    if q == p or not 0 <= q < state.n_players:
        return False
    loc = state.locations[p]
    qloc = state.locations[q]
    if give:
        if card not in state.hands[p]:
            return False
        if state.roles[p] == Role.RESEARCHER:
            return qloc == card
        return card == loc and qloc == loc
    if card not in state.hands[q] or card != loc:
        return False
    return qloc == loc or state.roles[q] == Role.RESEARCHER


def is_legal(state: GameState, a: Action) -> bool:
    """Targeted legality check, equivalent to ``a in legal_actions(state)``."""
    if state.status is not Status.ONGOING:
        return False
    p = state.current
    hand = state.hands[p]
    if a.kind == Kind.DISCARD:
        return a.card in hand and len(hand) > HAND_LIMIT
    if state.phase != Phase.ACTIONS:
        return False
    loc = state.locations[p]
    k = a.kind
    n = state.cmap.n_cities
    if k == Kind.DRIVE:
        return a.city in state.cmap.neighbors[loc]
    if k == Kind.DIRECT:
        return a.card == a.city and a.card != loc and a.card in hand
    if k == Kind.CHARTER:
        return a.card == loc and loc in hand and 0 <= a.city < n and a.city != loc
    if k == Kind.SHUTTLE:
        return 0 <= a.city < n and a.city != loc and state.stations[loc] and state.stations[a.city]
    if k == Kind.OPS_FLIGHT:
        return (
            state.roles[p] == Role.OPERATIONS_EXPERT
            and not state.ops_flight_used
            and state.stations[loc]
            and a.card in hand
            and 0 <= a.city < n
            and a.city != loc
        )
    if k == Kind.BUILD:
        return (
            a.city == loc
            and not state.stations[loc]
            and (state.roles[p] == Role.OPERATIONS_EXPERT or loc in hand)
        )
    if k == Kind.TREAT:
        return 0 <= a.color < N_COLORS and state.cubes[a.color][loc] > 0
    if k == Kind.SHARE:
        return can_share(state, p, a.give, a.card, a.other)
    if k == Kind.CURE:
        if not (0 <= a.color < N_COLORS) or state.cured[a.color] or not state.stations[loc]:
            return False
        cards = a.cards
        if len(cards) != cards_to_cure(state.roles[p]) or len(set(cards)) != len(cards):
            return False
        colors = state.cmap.colors
        return all(c in hand and colors[c] == a.color for c in cards)
    return k == Kind.WAIT


def apply_action(state: GameState, action: Action) -> GameState:
    if not is_legal(state, action):
        if state.phase != Phase.ACTIONS and action.kind != Kind.DISCARD:
            raise PhaseError(f"cannot act in phase {state.phase.name}")
        raise RuleViolation(f"illegal action {action}")
    s = state.copy()
    apply_unchecked(s, action)
    return s


def apply_unchecked(s: GameState, a: Action) -> None:
    """Apply a legal action in place."""
    p = s.current
    k = a.kind
    if k == Kind.DISCARD:
        s.hands[p].remove(a.card)
        s.player_discard.append(a.card)
        return
    if k in MOVE_KINDS:
        if k == Kind.DIRECT or k == Kind.CHARTER or k == Kind.OPS_FLIGHT:
            s.hands[p].remove(a.card)
            s.player_discard.append(a.card)
            if k == Kind.OPS_FLIGHT:
                s.ops_flight_used = True
        s.locations[p] = a.city
        if s.roles[p] == Role.MEDIC:
            _medic_sweep(s, a.city)
    elif k == Kind.BUILD:
        loc = a.city
        if s.n_stations >= MAX_STATIONS:
            s.stations[_station_to_relocate(s, loc)] = False
        else:
            s.n_stations += 1
        s.stations[loc] = True
        if s.roles[p] != Role.OPERATIONS_EXPERT:
            s.hands[p].remove(loc)
            s.player_discard.append(loc)
    elif k == Kind.TREAT:
        loc = s.locations[p]
        row = s.cubes[a.color]
        removed = row[loc] if (s.cured[a.color] or s.roles[p] == Role.MEDIC) else 1
        row[loc] -= removed
        s.supply[a.color] += removed
    elif k == Kind.SHARE:
        q = a.other
        giver, receiver = (p, q) if a.give else (q, p)
        s.hands[giver].remove(a.card)
        s.hands[receiver].append(a.card)
        s.hands[receiver].sort()
        if len(s.hands[receiver]) > HAND_LIMIT:
            _discard_excess(s, receiver)
    elif k == Kind.CURE:
        hand = s.hands[p]
        for c in a.cards:
            hand.remove(c)
            s.player_discard.append(c)
        s.cured[a.color] = True
        for q, role in enumerate(s.roles):
            if role == Role.MEDIC:
                _medic_sweep(s, s.locations[q])
        if all(s.cured):
            s.status = Status.WON
            s.phase = Phase.OVER
            s.actions_left -= 1
            return
    s.actions_left -= 1
    if s.actions_left <= 0:
        s.phase = Phase.DRAW


def _medic_sweep(s: GameState, city: int) -> None:
    for color in range(N_COLORS):
        if s.cured[color]:
            n = s.cubes[color][city]
            if n:
                s.cubes[color][city] = 0
                s.supply[color] += n


def _station_to_relocate(s: GameState, target: int) -> int:
    dist = s.cmap.drive_distances()
    best, best_key = -1, None
    for c in range(s.cmap.n_cities):
        if s.stations[c] and c != target:
            key = (min(dist[c][loc] for loc in s.locations), -c)
            if best_key is None or key > best_key:
                best, best_key = c, key
    return best


def _discard_excess(s: GameState, player: int) -> None:
    from .valuation import select_discards

    excess = len(s.hands[player]) - HAND_LIMIT
    for c in select_discards(s, player, excess):
        s.hands[player].remove(c)
        s.player_discard.append(c)


# ---------------------------------------------------------------- escalation


def spread_infection(
    row: list[int],
    neighbors,
    city: int,
    amount: int,
    supply: int,
    outbreaks: int,
    max_outbreaks: int = MAX_OUTBREAKS,
) -> tuple[int, int, LossCause | None]:
    """Place ``amount`` cubes of one color on ``city``, resolving outbreaks.

    ``row`` holds the cube count per city for that color and is mutated.
    Returns the new ``(supply, outbreaks, loss)``. Each city outbreaks at
    most once per call; cities that already outbroke receive no cubes.
    """
    for _ in range(amount):
        if row[city] < MAX_CUBES:
            if supply <= 0:
                return supply, outbreaks, LossCause.CUBES
            row[city] += 1
            supply -= 1
            continue
        outbroken = {city}
        queue = [city]
        outbreaks += 1
        if outbreaks >= max_outbreaks:
            return supply, outbreaks, LossCause.OUTBREAKS
        i = 0
        while i < len(queue):
            src = queue[i]
            i += 1
            for nb in neighbors[src]:
                if nb in outbroken:
                    continue
                if row[nb] < MAX_CUBES:
                    if supply <= 0:
                        return supply, outbreaks, LossCause.CUBES
                    row[nb] += 1
                    supply -= 1
                else:
                    outbroken.add(nb)
                    outbreaks += 1
                    if outbreaks >= max_outbreaks:
                        return supply, outbreaks, LossCause.OUTBREAKS
                    queue.append(nb)
        break
    return supply, outbreaks, None


def _infect(s: GameState, city: int, amount: int) -> None:
    color = s.cmap.colors[city]
    supply, outbreaks, loss = spread_infection(
        s.cubes[color], s.cmap.neighbors, city, amount, s.supply[color], s.outbreaks
    )
    s.supply[color] = supply
    s.outbreaks = outbreaks
    if loss is not None:
        _lose(s, loss)


def _lose(s: GameState, cause: LossCause) -> None:
    s.status = Status.LOST
    s.loss_cause = cause
    s.phase = Phase.OVER


def _pop_top(piles: list[list[int]]) -> int:
    while piles and not piles[0]:
        piles.pop(0)
    card = piles[0].pop()
    if not piles[0]:
        piles.pop(0)
    return card


def _epidemic(s: GameState, rng: random.Random) -> None:
    s.epidemics_drawn += 1
    deck = s.infection_deck
    if not deck:
        _recycle_infection_discard(s, rng)
    bottom = deck[-1].pop(0)
    if not deck[-1]:
        deck.pop()
    _infect(s, bottom, MAX_CUBES)
    s.infection_discard.append(bottom)
    if s.status is not Status.ONGOING:
        return
    _recycle_infection_discard(s, rng)


def _recycle_infection_discard(s: GameState, rng: random.Random) -> None:
    pile = s.infection_discard
    s.infection_discard = []
    rng.shuffle(pile)
    if pile:
        s.infection_deck.insert(0, pile)


def draw_phase_inplace(s: GameState, rng: random.Random, discard_policy=None) -> None:
    if s.phase != Phase.DRAW:
        raise PhaseError(f"draw phase requested in phase {s.phase.name}")
    if s.player_deck_size < 2:
        _lose(s, LossCause.PLAYER_CARDS)
        return
    p = s.current
    drawn = [_pop_top(s.player_deck), _pop_top(s.player_deck)]
    s.hands[p].extend(c for c in drawn if c != EPIDEMIC)
    s.hands[p].sort()
    for _ in range(drawn.count(EPIDEMIC)):
        _epidemic(s, rng)
        if s.status is not Status.ONGOING:
            return
    excess = len(s.hands[p]) - HAND_LIMIT
    if excess > 0:
        if discard_policy is None:
            _discard_excess(s, p)
        else:
            for c in discard_policy(s, p, excess):
                s.hands[p].remove(c)
                s.player_discard.append(c)
    s.phase = Phase.INFECT


def infection_phase_inplace(s: GameState, rng: random.Random) -> None:
    if s.phase != Phase.INFECT:
        raise PhaseError(f"infection phase requested in phase {s.phase.name}")
    for _ in range(INFECTION_RATES[s.epidemics_drawn]):
        if not any(s.infection_deck):
            s.infection_deck = []
            _recycle_infection_discard(s, rng)
        city = _pop_top(s.infection_deck)
        _infect(s, city, 1)
        s.infection_discard.append(city)
        if s.status is not Status.ONGOING:
            return
    s.current = (s.current + 1) % s.n_players
    s.actions_left = ACTIONS_PER_TURN
    s.ops_flight_used = False
    s.phase = Phase.ACTIONS
    s.turn += 1


def end_turn_inplace(s: GameState, rng: random.Random) -> None:
    """Draw then infect; no-op once the game is over."""
    if s.status is Status.ONGOING and s.phase == Phase.DRAW:
        draw_phase_inplace(s, rng)
    if s.status is Status.ONGOING and s.phase == Phase.INFECT:
        infection_phase_inplace(s, rng)


def draw_phase(state: GameState, rng: random.Random, discard_policy=None) -> GameState:
    s = state.copy()
    draw_phase_inplace(s, rng, discard_policy)
    return s


def infection_phase(state: GameState, rng: random.Random) -> GameState:
    s = state.copy()
    infection_phase_inplace(s, rng)
    return s


def game_status(state: GameState) -> tuple[Status, LossCause | None]:
    return state.status, state.loss_cause


# ---------------------------------------------------------------- checks


def check_invariants(s: GameState) -> list[str]:
    """Return a list of violated invariants (empty when the state is sound)."""
    errors = []
    n = s.cmap.n_cities
    for color in range(N_COLORS):
        row = s.cubes[color]
        if any(not 0 <= v <= MAX_CUBES for v in row):
            errors.append(f"cube count out of range for {COLORS[color]}")
        if sum(row) + s.supply[color] != CUBES_PER_COLOR:
            errors.append(f"cube conservation broken for {COLORS[color]}")
        if s.supply[color] < 0:
            errors.append("negative supply")
    cards = [c for h in s.hands for c in h] + s.player_discard
    cards += [c for pile in s.player_deck for c in pile if c != EPIDEMIC]
    if sorted(cards) != list(range(n)):
        errors.append("player card conservation broken")
    epi_left = sum(1 for pile in s.player_deck for c in pile if c == EPIDEMIC)
    if epi_left + s.epidemics_drawn != s.epidemic_count:
        errors.append("epidemic count mismatch")
    inf = [c for pile in s.infection_deck for c in pile] + s.infection_discard
    if sorted(inf) != list(range(n)):
        errors.append("infection card conservation broken")
    if s.phase not in (Phase.DRAW, Phase.OVER) and any(len(h) > HAND_LIMIT for h in s.hands):
        errors.append("hand limit exceeded")
    if sum(s.stations) != s.n_stations or s.n_stations > MAX_STATIONS:
        errors.append("research station count mismatch")
    if not 0 <= s.outbreaks <= MAX_OUTBREAKS:
        errors.append("outbreak counter out of range")
    if s.status is Status.WON and not all(s.cured):
        errors.append("won without four cures")
    if all(s.cured) and s.status is not Status.WON:
        errors.append("four cures but not won")
    if s.status is Status.ONGOING and s.outbreaks >= MAX_OUTBREAKS:
        errors.append("ongoing at max outbreaks")
    if not 0 <= s.actions_left <= ACTIONS_PER_TURN:
        errors.append("actions remaining out of range")
    return errors
