"""Building a fresh :class:`GameState` from a scenario or for a full game."""

from __future__ import annotations

import random
from typing import TYPE_CHECKING

from .items import ItemKind, make_item, shuffle_appearances
from .monsters import MONSTERS, Attitude, Monster
from .state import GameState, LevelMap, PlayerState
from .tiles import PASSABLE, Pos, TileKind

if TYPE_CHECKING:
    from ..scenarios.model import Placement, ScenarioSpec, Where

BASE_GLYPHS: dict[str, TileKind] = {
    " ": TileKind.STONE,
    "-": TileKind.WALL,
    "|": TileKind.WALL,
    ".": TileKind.FLOOR,
    "#": TileKind.CORRIDOR,
    "+": TileKind.DOOR_CLOSED,
    "/": TileKind.DOOR_OPEN,
    "<": TileKind.STAIRS_UP,
    ">": TileKind.STAIRS_DOWN,
    "{": TileKind.FOUNTAIN,
    "_": TileKind.ALTAR,
}

# Names usable on the right-hand side of a LEGEND entry; "hard" kinds cannot be dug.
LEGEND_KINDS: dict[str, tuple[TileKind, bool]] = {
    "boulder": (TileKind.BOULDER, False),
    "statue": (TileKind.STATUE, False),
    "locked door": (TileKind.DOOR_LOCKED, False),
    "closed door": (TileKind.DOOR_CLOSED, False),
    "open door": (TileKind.DOOR_OPEN, False),
    "hard wall": (TileKind.WALL, True),
    "hard stone": (TileKind.STONE, True),
    "wall": (TileKind.WALL, False),
    "stone": (TileKind.STONE, False),
    "floor": (TileKind.FLOOR, False),
    "corridor": (TileKind.CORRIDOR, False),
    "fountain": (TileKind.FOUNTAIN, False),
    "altar": (TileKind.ALTAR, False),
    "stairs up": (TileKind.STAIRS_UP, False),
    "stairs down": (TileKind.STAIRS_DOWN, False),
}

FEATURES = {"fountain": TileKind.FOUNTAIN, "altar": TileKind.ALTAR, "statue": TileKind.STATUE, "boulder": TileKind.BOULDER}


class PlacementImpossible(RuntimeError):
    pass


def new_game(spec: "ScenarioSpec | None", seed: int) -> GameState:
    """Instantiate a scenario (or, with ``spec=None``, a full ten-level game)."""
    if spec is None:
        from .levelgen import new_full_game

        return new_full_game(seed)
    return _instantiate(spec, seed)


def build_level(spec: "ScenarioSpec", depth: int = 1) -> LevelMap:
    legend = {g: LEGEND_KINDS[name] for g, name in spec.legend}
    lvl = LevelMap.filled(depth, spec.width, spec.height)
    for y, row in enumerate(spec.map):
        for x, ch in enumerate(row):
            if ch in legend:
                kind, hard = legend[ch]
            else:
                kind, hard = BASE_GLYPHS[ch], False
            lvl.set_kind((x, y), kind)
            if hard:
                lvl.nondiggable.add((x, y))
    for (x, y), kind in [(p, lvl.kind(p)) for p in lvl.positions()]:
        if kind is TileKind.BOULDER:
            lvl.under[(x, y)] = _ground_under(lvl, (x, y))
    for name, x1, y1, x2, y2 in spec.regions:
        lvl.regions[name] = (x1, y1, x2, y2)
    return lvl


def _ground_under(lvl: LevelMap, pos: Pos) -> TileKind:
    x, y = pos
    for n in ((x + 1, y), (x - 1, y), (x, y + 1), (x, y - 1)):
        if lvl.in_bounds(n) and lvl.kind(n) is TileKind.CORRIDOR:
            return TileKind.CORRIDOR
    return TileKind.FLOOR


def _instantiate(spec: "ScenarioSpec", seed: int) -> GameState:
    rng = random.Random(seed)
    lvl = build_level(spec)
    state = GameState(levels=[lvl], player=PlayerState(pos=(0, 0)), rng=rng, name=spec.name)
    state.appearances = shuffle_appearances(rng)
    taken: set[Pos] = set()

    start = _resolve_where(state, lvl, spec.start, taken, want=PASSABLE)
    state.player.pos = start
    taken.add(start)

    for placement in spec.placements:
        descriptor = rng.choice(placement.choices())
        lo, hi = placement.count
        count = rng.randint(lo, hi)
        for _ in range(count):
            _place(state, lvl, placement, descriptor, taken)

    lvl.index_rooms()
    return state


def _candidates(lvl: LevelMap, where: "Where", taken: set[Pos], want) -> list[Pos]:
    out = []
    for pos in lvl.positions():
        if pos in taken or lvl.kind(pos) not in want:
            continue
        if where.region is not None and not lvl.in_region(where.region, pos):
            continue
        out.append(pos)
    return out


def _resolve_where(state: GameState, lvl: LevelMap, where: "Where", taken: set[Pos], want) -> Pos:
    if not where.random:
        return where.pos
    options = _candidates(lvl, where, taken, want)
    if not options:
        raise PlacementImpossible(f"no free tile for random placement{' in ' + where.region if where.region else ''}")
    return state.rng.choice(options)


def _place(state: GameState, lvl: LevelMap, placement: "Placement", descriptor: str, taken: set[Pos]) -> None:
    what = placement.what
    if what == "inventory":
        item = make_item(descriptor, state.new_id, state.rng, turn=state.turn, appearances=state.appearances)
        if item.kind is ItemKind.GOLD:
            state.player.gold += item.amount
            return
        item.letter = state.player.free_letter()
        state.player.inventory.append(item)
        return
    want = {TileKind.FLOOR} if what == "feature" else PASSABLE
    pos = _resolve_where(state, lvl, placement.where, taken, want)
    taken.add(pos)
    if what == "object":
        lvl.add_item(pos, make_item(descriptor, state.new_id, state.rng, turn=state.turn, appearances=state.appearances))
    elif what == "monster":
        if descriptor not in MONSTERS:
            raise ValueError(f"unknown monster {descriptor!r}")
        lvl.monsters.append(Monster.spawn(state.new_id(), descriptor, pos, Attitude(placement.attitude)))
    elif what == "feature":
        kind = FEATURES[descriptor]
        if kind is TileKind.BOULDER:
            lvl.under[pos] = lvl.kind(pos)
        lvl.set_kind(pos, kind)
    elif what == "engraving":
        lvl.engravings[pos] = descriptor
    else:
        raise ValueError(f"unknown placement {what!r}")
