"""Deterministic turn-based roguelike engine."""

from .actions import *  # noqa: F401,F403
from .engine import GameOver, StepResult, compute_score, has_line_of_sight, step, visible_tiles
from .items import Item, ItemKind
from .monsters import Attitude, Monster
from .state import GameState, Hunger, LevelMap, MenuKind, MenuState, PlayerState, Status, state_digest
from .tiles import PASSABLE, TileKind
from .world import PlacementImpossible, new_game

__all__ = [
    "Attitude",
    "GameOver",
    "GameState",
    "Hunger",
    "Item",
    "ItemKind",
    "LevelMap",
    "MenuKind",
    "MenuState",
    "Monster",
    "PASSABLE",
    "PlacementImpossible",
    "PlayerState",
    "Status",
    "StepResult",
    "TileKind",
    "compute_score",
    "has_line_of_sight",
    "new_game",
    "state_digest",
    "step",
    "visible_tiles",
]
