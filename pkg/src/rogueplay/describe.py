"""Turn the tracker's memory and the player's state into observation text."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

from .sim.items import article
from .sim.monsters import Attitude
from .sim.state import GameState, MenuState, PlayerState
from .sim.tiles import Pos, TileKind, compass
from .tracker import TrackerState, blockers, frontier_tiles

CLOSE_MONSTER_STEPS = 8

SECTIONS = ("position", "level", "explore", "blockers", "monsters", "inventory", "stats", "menu")


def estimate_tokens(text: str) -> int:
    """Rough token count: one token per four characters, rounded up."""
    return math.ceil(len(text) / 4)


def _xy(pos: Pos) -> str:
    return f"({pos[0]},{pos[1]})"


def _steps(n: int | None) -> str:
    if n is None:
        return "unreachable"
    return f"{n} step" + ("" if n == 1 else "s")


def _structure_steps(dist: dict[Pos, int], tiles) -> int | None:
    best = None
    for t in tiles:
        d = dist.get(t)
        if d is not None and (best is None or d < best):
            best = d
    return best


def _sort_key(steps: int | None, pos: Pos):
    return (steps is None, steps if steps is not None else 0, pos[1], pos[0])


def _reach(dist: dict[Pos, int], pos: Pos) -> int | None:
    """Steps to a tile, or to stand next to it when the tile itself cannot be entered."""
    if pos in dist:
        return dist[pos]
    around = [dist[(pos[0] + dx, pos[1] + dy)] for dx in (-1, 0, 1) for dy in (-1, 0, 1) if (pos[0] + dx, pos[1] + dy) in dist]
    return min(around) + 1 if around else None


def describe_level(tracker: TrackerState, player: PlayerState) -> str:
    """One line per known structure with its distance and contents."""
    if tracker.last_depth is None or not tracker.current.structures:
        return "You have not discovered any structures yet."
    mem = tracker.current
    dist = mem.distances(player.pos)
    by_pos: dict[Pos, list] = {}
    for ki in mem.known_items.values():
        by_pos.setdefault(ki.pos, []).append(ki.name)
    for pos, kind in mem.features.items():
        by_pos.setdefault(pos, []).append(kind.value)
    lines = []
    for s in sorted(mem.structures, key=lambda s: s.id):
        objects = []
        for pos in s.tiles & by_pos.keys():
            for name in by_pos[pos]:
                objects.append((_reach(dist, pos), pos, name))
        objects.sort(key=lambda o: (*_sort_key(o[0], o[1]), o[2]))
        head = f"{s.name} ({_steps(_structure_steps(dist, s.tiles))})"
        if objects:
            head += ": " + "; ".join(f"{name} at {_xy(pos)} ({_steps(n)})" for n, pos, name in objects)
        lines.append(head)
    covered = set().union(*(s.tiles for s in mem.structures))
    loose = [ki for ki in mem.known_items.values() if ki.pos not in covered]
    if loose:
        loose.sort(key=lambda ki: (*_sort_key(_reach(dist, ki.pos), ki.pos), ki.name))
        lines.append("elsewhere: " + "; ".join(f"{ki.name} at {_xy(ki.pos)} ({_steps(_reach(dist, ki.pos))})" for ki in loose))
    return "\n".join(lines)


def explorable_structures(tracker: TrackerState) -> list[str]:
    mem = tracker.current
    frontier = frontier_tiles(mem)
    return [s.name for s in sorted(mem.structures, key=lambda s: s.id) if s.tiles & frontier]


def describe_explorable(tracker: TrackerState) -> str:
    if tracker.last_depth is None:
        return ""
    names = explorable_structures(tracker)
    if not names:
        return "No known structure can be explored further."
    return "Structures that can be further explored: " + ", ".join(names) + "."


def describe_blockers(tracker: TrackerState, player: PlayerState) -> str:
    if tracker.last_depth is None:
        return ""
    mem = tracker.current
    found = blockers(mem)
    if not found:
        return ""
    dist = mem.distances(player.pos)
    parts = [f"{kind.value} at {_xy(pos)} ({_steps(_reach(dist, pos))})" for pos, kind in found]
    return "Things blocking your way: " + "; ".join(parts) + "."


def _monster_label(kind: str, attitude: Attitude) -> str:
    if attitude is Attitude.PEACEFUL:
        return f"peaceful {kind}"
    if attitude is Attitude.PET:
        return f"{kind} (your pet)"
    return kind


def describe_monsters(tracker: TrackerState, player: PlayerState, close_steps: int = CLOSE_MONSTER_STEPS) -> str:
    """Known monsters split into close (with compass direction) and distant."""
    if tracker.last_depth is None or not tracker.current.known_monsters:
        return "You do not see any monsters."
    mem = tracker.current
    dist = mem.distances(player.pos)
    close, distant = [], []
    for km in sorted(mem.known_monsters.values(), key=lambda m: m.id):
        n = dist.get(km.pos)
        label = f"{_monster_label(km.kind, km.attitude)} at {_xy(km.pos)}"
        if n is not None and n <= close_steps:
            close.append((n, km.id, f"{label}, {_steps(n)}, {compass(player.pos, km.pos) or 'here'}"))
        else:
            distant.append((n if n is not None else math.inf, km.id, f"{label}, {_steps(n)}"))
    out = []
    if close:
        out.append("Close monsters:\n" + "\n".join(f"- {t}" for _, _, t in sorted(close)))
    if distant:
        out.append("Distant monsters:\n" + "\n".join(f"- {t}" for _, _, t in sorted(distant)))
    return "\n".join(out)


def describe_inventory(player: PlayerState) -> str:
    lines = []
    for it in sorted(player.inventory, key=lambda i: (i.letter.lower(), i.letter.isupper())):
        notes = []
        if it.id == player.wielded:
            notes.append("weapon in hand")
        if it.id in player.worn:
            notes.append("being worn")
        if it.contents:
            notes.append(f"containing {len(it.contents)} item" + ("" if len(it.contents) == 1 else "s"))
        if it.charges and it.identified:
            notes.append(f"{it.charges} charges")
        suffix = f" ({', '.join(notes)})" if notes else ""
        lines.append(f"{it.letter} - {article(it.display_name)}{suffix}")
    head = "Inventory:" if lines else "Inventory: empty"
    body = "\n".join(lines)
    gold = f"\nGold: {player.gold}" if player.gold else ""
    return head + ("\n" + body if body else "") + gold


def describe_stats(state: GameState) -> str:
    p = state.player
    parts = [
        f"HP {p.hp}/{p.max_hp}",
        f"experience level {p.xp_level} ({p.xp_points} points)",
        f"dungeon level {p.depth}",
        f"turn {state.turn}",
        f"hunger: {p.hunger.label}",
    ]
    if p.status:
        parts.append("status: " + ", ".join(sorted(p.status)))
    if p.form:
        parts.append(f"polymorphed into {article(p.form)}")
    return "Stats: " + ", ".join(parts) + "."


def describe_menu(menu: MenuState | None) -> str:
    """The open menu as a literal transcript, including which entries are marked."""
    if menu is None:
        return ""
    lines = [f"An open menu asks: {menu.prompt}"]
    for e in menu.entries:
        lines.append(f"{e.letter} - {e.label}" + (" [marked]" if e.marked else ""))
    if menu.kind.value == "text":
        lines.append(f'Typed so far: "{menu.buffer}". Press ENTER to finish.')
    elif menu.requires_confirm:
        lines.append("Press a letter to mark or unmark an entry, ENTER to confirm the selection, ESC to cancel.")
    elif menu.kind.value == "direction":
        lines.append("Answer with a direction key (k north, u northeast, l east, n southeast, j south, b southwest, h west, y northwest, s yourself) or ESC.")
    else:
        lines.append("Answer with y or n, or ESC to cancel.")
    return "\n".join(lines)


def describe_position(tracker: TrackerState, state: GameState) -> str:
    p = state.player
    text = f"You are at {_xy(p.pos)}"
    if tracker.last_depth is not None:
        s = tracker.current.structure_of(p.pos)
        if s is not None:
            text += f" in {s.name}"
    text += "."
    here = state.level.kind(p.pos)
    if here not in (TileKind.FLOOR, TileKind.CORRIDOR):
        text += f" You are standing on {article(here.value)}."
    pile = state.level.items_at(p.pos)
    if pile:
        text += " Here: " + ", ".join(article(i.display_name) for i in pile) + "."
    return text


@dataclass
class ObservationText:
    sections: dict[str, str]
    rendered: str
    token_estimate: int


@dataclass
class DescribeConfig:
    enabled: frozenset[str] = field(default_factory=lambda: frozenset(SECTIONS))
    close_steps: int = CLOSE_MONSTER_STEPS
    estimator: Callable[[str], int] = estimate_tokens


def describe(tracker: TrackerState, state: GameState, config: DescribeConfig | None = None) -> ObservationText:
    """All enabled sections in a fixed order; pure with respect to its inputs."""
    config = config or DescribeConfig()
    p = state.player
    builders = {
        "position": lambda: describe_position(tracker, state),
        "level": lambda: describe_level(tracker, p),
        "explore": lambda: describe_explorable(tracker),
        "blockers": lambda: describe_blockers(tracker, p),
        "monsters": lambda: describe_monsters(tracker, p, config.close_steps),
        "inventory": lambda: describe_inventory(p),
        "stats": lambda: describe_stats(state),
        "menu": lambda: describe_menu(state.open_menu),
    }
    sections = {name: builders[name]() for name in SECTIONS if name in config.enabled}
    rendered = "\n\n".join(text for text in sections.values() if text)
    return ObservationText(sections, rendered, config.estimator(rendered))
