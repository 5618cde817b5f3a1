"""Macro-actions: shortest move plans composed with one purposeful action."""

from __future__ import annotations

from collections.abc import Mapping
from enum import IntEnum
from typing import NamedTuple

from .board import N_COLORS
from .rules import (
    WAIT,
    Action,
    GameState,
    Kind,
    Role,
    build_station,
    cards_to_cure,
    charter_flight,
    cure,
    direct_flight,
    drive,
    ops_flight,
    share,
    shuttle_flight,
    treat,
)
from .valuation import ability_units, cure_ability, select_discards, spendable_counts

__all__ = [
    "Family",
    "MacroAction",
    "MacroContext",
    "MovePlan",
    "cure_ability",
    "generate_macros",
    "movement_costs",
    "select_discards",
    "wait_macro",
]


class MovePlan(NamedTuple):
    destination: int
    steps: tuple[Action, ...]
    cards: tuple[int, ...]
    cost: int


class Family(IntEnum):
    TREAT = 0
    CURE = 1
    BUILD = 2
    SHARE = 3
    WALK_AWAY = 4
    WAIT = 5


class MacroAction(NamedTuple):
    family: Family
    move: MovePlan
    terminal: Action | None
    cost: int
    # cube count for treat macros; 1 for an immediate share, 0 for a share-wait
    detail: int = 0

    @property
    def waits(self) -> int:
        return self.cost - self.move.cost - (1 if self.terminal is not None else 0)

    def actions(self) -> tuple[Action, ...]:
        tail = (self.terminal,) if self.terminal is not None else (WAIT,) * self.waits
        return self.move.steps + tail

    def describe(self, cmap=None) -> str:
        parts = [a.describe(cmap) for a in self.actions()]
        return f"{self.family.name.lower()}[{self.cost}]: " + ", ".join(parts)


def wait_macro(state: GameState, cost: int) -> MacroAction:
    loc = state.locations[state.current]
    return MacroAction(Family.WAIT, MovePlan(loc, (), (), 0), None, cost)


def _search(
    state: GameState,
    player: int,
    spare: list[int] | None,
    reserved: frozenset[int] = frozenset(),
    max_cost: int | None = None,
) -> dict[int, MovePlan]:
    """Layered search over (city, cards spent, ops flight used).

    ``spare`` caps the number of cards spent per color; ``None`` lifts the cap.
    A node is pruned when an accepted node at the same city had no higher
    cost, a subset of its cards and the ops flight no less available. Among
    equal-cost plans to a city the one spending fewest cards wins, then the
    one found first (children are generated in ascending city order).
    """
    cmap = state.cmap
    nbrs = cmap.neighbors
    colors = cmap.colors
    n = cmap.n_cities
    loc = state.locations[player]
    hand = [c for c in state.hands[player] if c not in reserved]
    if spare is not None:
        hand = [c for c in hand if spare[colors[c]] > 0]
    is_station = state.stations
    station_list = [c for c in range(n) if is_station[c]]
    ops_ok = state.roles[player] == Role.OPERATIONS_EXPERT and not (
        state.ops_flight_used and player == state.current
    )
    if not ops_ok or not hand:
        ops_ok = False
    limit = n if max_cost is None else max_cost

    # node: (city, spent, used, parent index, kind, card)
    nodes: list[tuple] = [(loc, (), False, -1, -1, -1)]
    best_node = {loc: 0}
    best_cost = {loc: 0}
    free = [False] * n  # reached with no cards spent and ops flight unused
    free[loc] = True
    accepted: dict[int, list[tuple[frozenset, bool]]] = {}
    layer = [0]
    cost = 0
    while layer and cost < limit:
        cost += 1
        nxt: list[int] = []
        for idx in layer:
            u, spent, used, _, _, _ = nodes[idx]
            plain = not spent and not used
            targets = list(nbrs[u])
            kinds = [Kind.DRIVE] * len(targets)
            if is_station[u]:
                for v in station_list:
                    if v != u:
                        targets.append(v)
                        kinds.append(Kind.SHUTTLE)
            for v, k in zip(targets, kinds):
                if free[v]:
                    continue
                if plain:
                    free[v] = True
                elif not _accept(accepted, v, spent, used):
                    continue
                nodes.append((v, spent, used, idx, k, -1))
                nxt.append(len(nodes) - 1)
                _offer(best_node, best_cost, nodes, v, cost)
            if not hand:
                continue
            for c in hand:
                if c in spent or not _can_spend(spent, c, spare, colors):
                    continue
                sp = tuple(sorted(spent + (c,)))
                if c != u and not free[c] and _accept(accepted, c, sp, used):
                    nodes.append((c, sp, used, idx, Kind.DIRECT, c))
                    nxt.append(len(nodes) - 1)
                    _offer(best_node, best_cost, nodes, c, cost)
                teleport = []
                if c == u:
                    teleport.append((Kind.CHARTER, used))
                if ops_ok and not used and is_station[u]:
                    teleport.append((Kind.OPS_FLIGHT, True))
                for k, now_used in teleport:
                    for v in range(n):
                        if v == u or free[v] or not _accept(accepted, v, sp, now_used):
                            continue
                        nodes.append((v, sp, now_used, idx, k, c))
                        nxt.append(len(nodes) - 1)
                        _offer(best_node, best_cost, nodes, v, cost)
        layer = nxt
    return PlanTable(nodes, best_node, best_cost)


class PlanTable(Mapping):
    """City -> MovePlan, building each plan's step list on first access."""

    __slots__ = ("_nodes", "_best", "costs", "_cache")

    def __init__(self, nodes, best_node, best_cost):
        self._nodes = nodes
        self._best = best_node
        self.costs = best_cost
        self._cache: dict[int, MovePlan] = {}

    def __getitem__(self, city: int) -> MovePlan:
        plan = self._cache.get(city)
        if plan is None:
            plan = _materialize(self._nodes, self._best[city], self.costs[city])
            self._cache[city] = plan
        return plan

    def get(self, city, default=None):
        if city not in self._best:
            return default
        return self[city]

    def cards_of(self, city: int) -> tuple[int, ...]:
        return self._nodes[self._best[city]][1]

    def __contains__(self, city) -> bool:
        return city in self._best

    def __iter__(self):
        return iter(self._best)

    def __len__(self) -> int:
        return len(self._best)


def _can_spend(spent, card, spare, colors) -> bool:
    if spare is None:
        return True
    col = colors[card]
    return sum(1 for c in spent if colors[c] == col) < spare[col]


def _accept(accepted, v, spent, used) -> bool:
    sset = frozenset(spent)
    acc = accepted.get(v)
    if acc is None:
        accepted[v] = [(sset, used)]
        return True
    for s, o in acc:
        if s <= sset and (used or not o):
            return False
    acc.append((sset, used))
    return True


def _offer(best_node, best_cost, nodes, v, cost) -> None:
    cur = best_node.get(v)
    if cur is None:
        best_node[v] = len(nodes) - 1
        best_cost[v] = cost
    elif best_cost[v] == cost and len(nodes[-1][1]) < len(nodes[cur][1]):
        best_node[v] = len(nodes) - 1


def _materialize(nodes, idx, cost) -> MovePlan:
    dest = nodes[idx][0]
    spent = nodes[idx][1]
    steps = []
    while True:
        v, _, _, parent, kind, card = nodes[idx]
        if parent < 0:
            break
        if kind == Kind.DRIVE:
            steps.append(drive(v))
        elif kind == Kind.SHUTTLE:
            steps.append(shuttle_flight(v))
        elif kind == Kind.DIRECT:
            steps.append(direct_flight(v))
        elif kind == Kind.CHARTER:
            steps.append(charter_flight(card, v))
        else:
            steps.append(ops_flight(card, v))
        idx = parent
    steps.reverse()
    return MovePlan(dest, tuple(steps), spent, cost)


def movement_costs(state: GameState, player: int | None = None, max_cost: int | None = None) -> dict[int, MovePlan]:
    """Cheapest plan to every city, spending only cards that keep cure ability intact."""
    p = state.current if player is None else player
    return _search(state, p, spendable_counts(state, p), max_cost=max_cost)


def _plan_key(plan: MovePlan):
    return (plan.cost, len(plan.cards), plan.destination)


class MacroContext:
    """Lazily computed macro families for one player and action budget."""

    def __init__(self, state: GameState, player: int | None = None, budget: int | None = None):
        self.state = state
        self.p = state.current if player is None else player
        self.budget = state.actions_left if budget is None else budget
        self.spare = spendable_counts(state, self.p)
        self._plans: dict[int, MovePlan] | None = None
        self._reserved: dict[frozenset, dict[int, MovePlan]] = {}
        self._treat: list[MacroAction] | None = None
        self._share: tuple[list[MacroAction], list[MacroAction]] | None = None

    @property
    def plans(self) -> dict[int, MovePlan]:
        if self._plans is None:
            self._plans = _search(self.state, self.p, self.spare, max_cost=self.budget)
        return self._plans

    def plan_to(self, city: int, reserved: frozenset = frozenset(), max_cost: int | None = None) -> MovePlan | None:
        limit = self.budget - 1 if max_cost is None else max_cost
        table = self.plans
        if city not in table or table.costs[city] > limit:
            if not reserved:
                return None
        if reserved and city in table and reserved.intersection(table.cards_of(city)):
            table = self._reserved.get(reserved)
            if table is None:
                table = _search(self.state, self.p, self.spare, reserved, max_cost=self.budget)
                self._reserved[reserved] = table
        if city not in table or table.costs[city] > limit:
            return None
        return table[city]

    # -- families

    def treat(self) -> list[MacroAction]:
        if self._treat is None:
            s = self.state
            medic = s.roles[self.p] == Role.MEDIC
            out = []
            for color in range(N_COLORS):
                if medic and s.cured[color]:
                    # the medic clears cured colors on arrival; nothing to treat
                    continue
                row = s.cubes[color]
                for city, n in enumerate(row):
                    if n:
                        plan = self.plan_to(city)
                        if plan is not None:
                            out.append(MacroAction(Family.TREAT, plan, treat(color), plan.cost + 1, n))
            self._treat = out
        return self._treat

    def treat_level(self, cubes: int) -> list[MacroAction]:
        return [m for m in self.treat() if m.detail == cubes]

    def cure(self) -> list[MacroAction]:
        s = self.state
        need = cards_to_cure(s.roles[self.p])
        colors = s.cmap.colors
        out = []
        for color in range(N_COLORS):
            if s.cured[color]:
                continue
            same = sorted(c for c in s.hands[self.p] if colors[c] == color)
            if len(same) < need:
                continue
            cards = frozenset(same[:need])
            best = None
            for st in range(s.cmap.n_cities):
                if s.stations[st]:
                    plan = self.plan_to(st, cards)
                    if plan is not None and (best is None or _plan_key(plan) < _plan_key(best)):
                        best = plan
            if best is not None:
                out.append(MacroAction(Family.CURE, best, cure(color, cards), best.cost + 1))
        return out

    def build(self) -> list[MacroAction]:
        s = self.state
        if s.roles[self.p] == Role.OPERATIONS_EXPERT:
            targets = [(c, frozenset()) for c in range(s.cmap.n_cities) if not s.stations[c]]
        else:
            targets = [(c, frozenset((c,))) for c in s.hands[self.p] if not s.stations[c]]
        out = []
        for city, reserved in targets:
            plan = self.plan_to(city, reserved)
            if plan is not None:
                out.append(MacroAction(Family.BUILD, plan, build_station(city), plan.cost + 1))
        return out

    def share(self) -> tuple[list[MacroAction], list[MacroAction]]:
        """(immediate exchanges, move-and-wait macros)."""
        if self._share is not None:
            return self._share
        s = self.state
        p = self.p
        me_researcher = s.roles[p] == Role.RESEARCHER
        base = ability_units(s)
        colors = s.cmap.colors
        immediate: list[MacroAction] = []
        waiting: dict[int, MacroAction] = {}

        def improves(giver: int, receiver: int, card: int) -> bool:
            s.hands[giver].remove(card)
            s.hands[receiver].append(card)
            after = ability_units(s)
            s.hands[receiver].remove(card)
            s.hands[giver].append(card)
            s.hands[giver].sort()
            t = colors[card]
            return after[t] > base[t]

        for q in range(s.n_players):
            if q == p:
                continue
            qloc = s.locations[q]
            q_researcher = s.roles[q] == Role.RESEARCHER
            for card in list(s.hands[p]):
                if not improves(p, q, card):
                    continue
                if me_researcher:
                    if qloc == card:
                        plan = self.plan_to(s.locations[p], max_cost=0)
                        immediate.append(MacroAction(Family.SHARE, plan, share(True, card, q), 1, 1))
                    continue
                plan = self.plan_to(card, frozenset((card,)))
                if plan is None:
                    continue
                if qloc == card:
                    immediate.append(MacroAction(Family.SHARE, plan, share(True, card, q), plan.cost + 1, 1))
                elif card not in waiting:
                    waiting[card] = MacroAction(Family.SHARE, plan, None, self.budget, 0)
            for card in list(s.hands[q]):
                if not improves(q, p, card):
                    continue
                plan = self.plan_to(card)
                if plan is None:
                    continue
                if qloc == card or q_researcher:
                    immediate.append(MacroAction(Family.SHARE, plan, share(False, card, q), plan.cost + 1, 1))
                elif card not in waiting:
                    waiting[card] = MacroAction(Family.SHARE, plan, None, self.budget, 0)
        self._share = (immediate, [waiting[k] for k in sorted(waiting)])
        return self._share

    def walk_away(self) -> list[MacroAction]:
        n_moves = self.budget
        table = _search(self.state, self.p, None, max_cost=n_moves)
        costs = table.costs
        targets = [v for v, c in costs.items() if c == n_moves]
        if not targets:
            longest = max(costs.values())
            targets = [v for v, c in costs.items() if c == longest and c > 0]
        exact = [table[v] for v in sorted(targets)]
        if not exact:
            return [wait_macro(self.state, n_moves)]
        return [MacroAction(Family.WALK_AWAY, pl, None, n_moves) for pl in exact]

    def all(self) -> list[MacroAction]:
        imm, wait = self.share()
        return self.treat() + self.cure() + self.build() + imm + wait + self.walk_away()


def generate_macros(state: GameState, player: int | None = None, budget: int | None = None) -> list[MacroAction]:
    ctx = MacroContext(state, player, budget)
    if not 1 <= ctx.budget <= 4:
        raise ValueError(f"budget must be 1..4, got {ctx.budget}")
    return ctx.all()
