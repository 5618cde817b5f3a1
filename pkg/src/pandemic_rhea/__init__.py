"""Simplified Pandemic engine with rolling-horizon evolutionary and policy agents."""

from .board import CityMap, load_map, standard_map
from .rules import GameConfig, GameState, LossCause, Phase, Role, Status, new_game

__version__ = "0.1.0"

__all__ = [
    "CityMap",
    "GameConfig",
    "GameState",
    "LossCause",
    "Phase",
    "Role",
    "Status",
    "load_map",
    "new_game",
    "standard_map",
]
