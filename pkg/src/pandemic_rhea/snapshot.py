"""Versioned, human-readable JSON encoding of a complete game state.

Cards and locations are written as city names so a stored setup can be
inspected by eye. Deck orders are kept exactly, which makes a stored setup
replay identically for any agent given the same rng stream.
"""

from __future__ import annotations

import json
from typing import Any

from .board import COLORS, CityMap, standard_map
from .rules import EPIDEMIC, GameState, LossCause, Phase, Role, Status

FORMAT = "pandemic-rhea/state"
VERSION = 1
EPIDEMIC_NAME = "EPIDEMIC"


class SnapshotError(ValueError):
    pass


def _card_name(cmap: CityMap, card: int) -> str:
    return EPIDEMIC_NAME if card == EPIDEMIC else cmap.names[card]


def _card_id(cmap: CityMap, name: str) -> int:
    return EPIDEMIC if name == EPIDEMIC_NAME else cmap.city(name)


def state_to_dict(s: GameState) -> dict[str, Any]:
    cm = s.cmap
    names = cm.names
    cubes = {}
    for city in range(cm.n_cities):
        row = {COLORS[t]: s.cubes[t][city] for t in range(len(COLORS)) if s.cubes[t][city]}
        if row:
            cubes[names[city]] = row
    return {
        "format": FORMAT,
        "version": VERSION,
        "map_checksum": cm.checksum,
        "turn": s.turn,
        "phase": s.phase.name.lower(),
        "status": s.status.name.lower(),
        "loss_cause": s.loss_cause.value if s.loss_cause else None,
        "current": s.current,
        "actions_left": s.actions_left,
        "ops_flight_used": s.ops_flight_used,
        "players": [
            {"role": s.roles[p].name.lower(), "location": names[s.locations[p]], "hand": [names[c] for c in s.hands[p]]}
            for p in range(s.n_players)
        ],
        "cubes": cubes,
        "supply": dict(zip(COLORS, s.supply)),
        "cured": [COLORS[t] for t in range(len(COLORS)) if s.cured[t]],
        "stations": [names[c] for c in range(cm.n_cities) if s.stations[c]],
        "outbreaks": s.outbreaks,
        "epidemics_drawn": s.epidemics_drawn,
        "epidemic_count": s.epidemic_count,
        "player_deck": [[_card_name(cm, c) for c in pile] for pile in s.player_deck],
        "player_discard": [names[c] for c in s.player_discard],
        "infection_deck": [[names[c] for c in pile] for pile in s.infection_deck],
        "infection_discard": [names[c] for c in s.infection_discard],
    }


def state_from_dict(data: dict[str, Any], cmap: CityMap | None = None) -> GameState:
    if data.get("format") != FORMAT:
        raise SnapshotError(f"not a state snapshot (format={data.get('format')!r})")
    if data.get("version") != VERSION:
        raise SnapshotError(f"unsupported snapshot version {data.get('version')!r}")
    cm = cmap or standard_map()
    if data["map_checksum"] != cm.checksum:
        raise SnapshotError(f"snapshot map checksum {data['map_checksum']} does not match map {cm.checksum}")
    n = cm.n_cities
    try:
        cubes = [[0] * n for _ in COLORS]
        for name, row in data["cubes"].items():
            for color, count in row.items():
                cubes[COLORS.index(color)][cm.city(name)] = count
        stations = [False] * n
        for name in data["stations"]:
            stations[cm.city(name)] = True
        players = data["players"]
        return GameState(
            cmap=cm,
            roles=tuple(Role[p["role"].upper()] for p in players),
            cubes=cubes,
            stations=stations,
            n_stations=sum(stations),
            locations=[cm.city(p["location"]) for p in players],
            hands=[sorted(cm.city(c) for c in p["hand"]) for p in players],
            current=data["current"],
            actions_left=data["actions_left"],
            cured=[c in data["cured"] for c in COLORS],
            supply=[data["supply"][c] for c in COLORS],
            outbreaks=data["outbreaks"],
            epidemics_drawn=data["epidemics_drawn"],
            epidemic_count=data["epidemic_count"],
            player_deck=[[_card_id(cm, c) for c in pile] for pile in data["player_deck"]],
            player_discard=[cm.city(c) for c in data["player_discard"]],
            infection_deck=[[cm.city(c) for c in pile] for pile in data["infection_deck"]],
            infection_discard=[cm.city(c) for c in data["infection_discard"]],
            ops_flight_used=data["ops_flight_used"],
            phase=Phase[data["phase"].upper()],
            status=Status[data["status"].upper()],
            loss_cause=LossCause(data["loss_cause"]) if data["loss_cause"] else None,
            turn=data["turn"],
        )
    except (KeyError, ValueError, TypeError) as exc:
        raise SnapshotError(f"malformed snapshot: {exc}") from exc


def dumps(s: GameState, indent: int | None = 1) -> str:
    return json.dumps(state_to_dict(s), indent=indent)


def loads(text: str, cmap: CityMap | None = None) -> GameState:
    return state_from_dict(json.loads(text), cmap)
