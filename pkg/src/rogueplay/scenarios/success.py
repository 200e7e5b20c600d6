"""Evaluate success expressions against a game state.

History atoms (things that happened, like ``drank`` or ``picked_up``) read the
state's achievement log, so they also know *when* they first became true;
``ordered(...)`` uses those times to check the sequence of sub-goals.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

from ..sim.items import Item, ItemKind
from ..sim.state import GameState
from ..sim.tiles import TileKind
from .model import Atom, Combinator, Literal, SuccessExpr


def _match(needle: str, *names: str | None) -> bool:
    needle = needle.lower()
    return any(n is not None and needle in n.lower() for n in names)


def _item_matches(item: Item, needle: str) -> bool:
    return _match(needle, item.name, item.display_name)


def _nth_event(state: GameState, what: str, needle: str, count: int = 1) -> int | None:
    seen = 0
    for turn, kind, detail in state.history:
        if kind == what and _match(needle, detail):
            seen += 1
            if seen >= count:
                return turn
    return None


def _all_items(items: list[Item]):
    for it in items:
        yield it
        yield from _all_items(it.contents)


# ---- state atoms: (state, *args) -> bool


def has_item(state: GameState, name: str) -> bool:
    return any(_item_matches(i, name) for i in state.player.inventory)


def item_in_container(state: GameState, name: str, container: str, count: int = 1) -> bool:
    containers = [i for i in _all_items(state.player.inventory) if i.kind is ItemKind.BAG_OF_HOLDING]
    for pile in state.level.piles.values():
        containers += [i for i in _all_items(pile) if i.kind is ItemKind.BAG_OF_HOLDING]
    found = sum(1 for c in containers if _match(container, c.name) for i in c.contents if _item_matches(i, name))
    return found >= count


def on_tile(state: GameState, kind: str) -> bool:
    here = state.level.kind(state.player.pos)
    return kind.lower().replace("_", " ") in (here.value, here.name.lower().replace("_", " "))


def door_open(state: GameState, x: int, y: int) -> bool:
    lvl = state.level
    return lvl.in_bounds((x, y)) and lvl.kind((x, y)) is TileKind.DOOR_OPEN


def reached_depth(state: GameState, n: int) -> bool:
    return state.player.max_depth >= n


def boulder_removed(state: GameState, x: int, y: int) -> bool:
    return state.levels[0].kind((x, y)) is not TileKind.BOULDER


def escaped_region(state: GameState, region: str) -> bool:
    return not state.level.in_region(region, state.player.pos)


def no_items_at(state: GameState, x: int, y: int) -> bool:
    return not state.level.items_at((x, y))


def item_in_region(state: GameState, name: str, region: str, count: int = 1) -> bool:
    lvl = state.level
    found = 0
    for pos, pile in lvl.piles.items():
        if lvl.in_region(region, pos):
            found += sum(1 for i in _all_items(pile) if _item_matches(i, name))
    if lvl.in_region(region, state.player.pos):
        found += sum(1 for i in _all_items(state.player.inventory) if _item_matches(i, name))
    return found >= count


# ---- history atoms: (state, *args) -> first turn or None


def monster_dead(state: GameState, kind: str, count: int = 1) -> int | None:
    return _nth_event(state, "killed", "" if kind == "any" else kind, count)


def drank(state: GameState, source: str) -> int | None:
    return _nth_event(state, "drank", source)


def feature_destroyed(state: GameState, kind: str) -> int | None:
    return _nth_event(state, "destroyed", kind)


def picked_up(state: GameState, name: str, count: int = 1) -> int | None:
    return _nth_event(state, "pickup", name, count)


def identified(state: GameState, name: str) -> int | None:
    return _nth_event(state, "identified", name)


@dataclass(frozen=True)
class AtomDef:
    fn: Callable
    types: tuple[type, ...]
    required: int
    history: bool = False


ATOMS: dict[str, AtomDef] = {
    "has_item": AtomDef(has_item, (str,), 1),
    "item_in_container": AtomDef(item_in_container, (str, str, int), 2),
    "on_tile": AtomDef(on_tile, (str,), 1),
    "monster_dead": AtomDef(monster_dead, (str, int), 1, history=True),
    "door_open": AtomDef(door_open, (int, int), 2),
    "reached_depth": AtomDef(reached_depth, (int,), 1),
    "drank": AtomDef(drank, (str,), 1, history=True),
    "boulder_removed": AtomDef(boulder_removed, (int, int), 2),
    "escaped_region": AtomDef(escaped_region, (str,), 1),
    "feature_destroyed": AtomDef(feature_destroyed, (str,), 1, history=True),
    "picked_up": AtomDef(picked_up, (str, int), 1, history=True),
    "identified": AtomDef(identified, (str,), 1, history=True),
    "no_items_at": AtomDef(no_items_at, (int, int), 2),
    "item_in_region": AtomDef(item_in_region, (str, str, int), 2),
}

COMBINATORS = ("all", "any", "not", "ordered")


def check_atom_args(name: str, args: tuple) -> str | None:
    """Return a problem description, or None when the arguments fit the atom."""
    spec = ATOMS[name]
    if not spec.required <= len(args) <= len(spec.types):
        return f"{name} takes {spec.required}..{len(spec.types)} arguments, got {len(args)}"
    for value, expected in zip(args, spec.types):
        if not isinstance(value, expected):
            return f"{name} expects {expected.__name__} arguments, got {value!r}"
    return None


def _when(expr: SuccessExpr, state: GameState) -> int | None:
    if isinstance(expr, Atom):
        spec = ATOMS[expr.name]
        if spec.history:
            return spec.fn(state, *expr.args)
        return state.turn if spec.fn(state, *expr.args) else None
    if isinstance(expr, Literal):
        return 0 if expr.value else None
    times = [_when(c, state) for c in expr.children]
    if expr.op == "all":
        return None if any(t is None for t in times) else max(times, default=0)
    if expr.op == "any":
        done = [t for t in times if t is not None]
        return min(done) if done else None
    if expr.op == "not":
        return None if times[0] is not None else state.turn
    # ordered
    if any(t is None for t in times):
        return None
    if any(a > b for a, b in zip(times, times[1:])):
        return None
    return times[-1] if times else 0


def evaluate_success(expr: SuccessExpr, state: GameState) -> bool:
    """True when the goal expression holds for ``state``. Never mutates the state."""
    return _when(expr, state) is not None
