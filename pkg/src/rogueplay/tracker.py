"""The agent's memory of the dungeon and the events it raises.

The tracker only looks at what the player can currently see (see
:func:`~rogueplay.sim.visible_tiles`) and remembers it per level. After each
engine step, :func:`update` folds the new view into memory and returns the
changes as :class:`Event` objects. Skills use those events to decide when to
stop and hand control back to the model.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable

from .sim import actions as A
from .sim.engine import visible_tiles
from .sim.items import article
from .sim.monsters import Attitude
from .sim.state import GameState, Status
from .sim.tiles import DOORS, NOTABLE_FEATURES, PASSABLE, ROOM_FLOOR, Pos, TileKind, chebyshev

LOW_HEALTH_FRACTION = 0.5


class EventKind(str, Enum):
    NEW_MESSAGE = "NewMessage"
    LEVEL_CHANGED = "LevelChanged"
    TELEPORTED = "Teleported"
    NEW_STRUCTURE = "NewStructure"
    NEW_MONSTER = "NewMonster"
    NEW_ITEM = "NewItem"
    NEW_FEATURE = "NewFeature"
    STAT_CHANGED = "StatChanged"
    LOW_HEALTH = "LowHealth"
    MENU_OPENED = "MenuOpened"
    GAME_ENDED = "GameEnded"


@dataclass(frozen=True)
class Event:
    kind: EventKind
    turn: int
    args: tuple = ()
    text: str = ""

    def __str__(self) -> str:
        return self.text or f"{self.kind.value}{self.args}"


@dataclass
class Structure:
    id: int
    kind: str  # "room" | "corridor"
    tiles: frozenset[Pos]
    discovered_turn: int = 0

    @property
    def name(self) -> str:
        return f"{self.kind}_{self.id}"


@dataclass
class KnownItem:
    id: int
    name: str
    pos: Pos
    last_seen: int
    occluded: bool = False


@dataclass
class KnownMonster:
    id: int
    kind: str
    pos: Pos
    attitude: Attitude
    last_seen: int


@dataclass
class LevelMemory:
    depth: int
    width: int
    height: int
    grid: list[list[TileKind | None]] = field(default_factory=list)
    seen: set[Pos] = field(default_factory=set)
    searched_count: dict[Pos, int] = field(default_factory=dict)
    structures: list[Structure] = field(default_factory=list)
    next_structure_id: int = 1
    known_items: dict[int, KnownItem] = field(default_factory=dict)
    known_monsters: dict[int, KnownMonster] = field(default_factory=dict)
    features: dict[Pos, TileKind] = field(default_factory=dict)
    version: int = 0
    _dist_cache: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        if not self.grid:
            self.grid = [[None] * self.width for _ in range(self.height)]

    def kind(self, pos: Pos) -> TileKind | None:
        x, y = pos
        if 0 <= x < self.width and 0 <= y < self.height:
            return self.grid[y][x]
        return None

    def known_grid(self) -> dict[Pos, TileKind]:
        return {(x, y): k for y, row in enumerate(self.grid) for x, k in enumerate(row) if k is not None}

    def passable(self, pos: Pos) -> bool:
        return self.kind(pos) in PASSABLE

    def structure_of(self, pos: Pos) -> Structure | None:
        for s in self.structures:
            if pos in s.tiles:
                return s
        return None

    def items_at(self, pos: Pos) -> list[KnownItem]:
        return sorted((i for i in self.known_items.values() if i.pos == pos), key=lambda i: i.id)

    def distances(self, start: Pos) -> dict[Pos, int]:
        """Shortest 8-connected step counts from ``start`` over known passable tiles."""
        key = (start, self.version)
        cached = self._dist_cache.get(key)
        if cached is None:
            if len(self._dist_cache) > 64:
                self._dist_cache.clear()
            cached = bfs(self, start, self.passable)
            self._dist_cache[key] = cached
        return cached


def bfs(mem: LevelMemory, start: Pos, ok, goal_ok=None) -> dict[Pos, int]:
    """Breadth-first step counts from ``start``; ``ok(pos)`` gates which tiles can be entered.

    ``goal_ok`` lets a tile be reached without being expanded (e.g. a closed door).
    """
    dist = {start: 0}
    queue = deque([start])
    w, h = mem.width, mem.height
    while queue:
        cur = queue.popleft()
        d = dist[cur] + 1
        x, y = cur
        for dx, dy in _OFFSETS:
            n = (x + dx, y + dy)
            if n in dist or not (0 <= n[0] < w and 0 <= n[1] < h):
                continue
            if ok(n):
                dist[n] = d
                queue.append(n)
            elif goal_ok is not None and goal_ok(n):
                dist[n] = d
    return dist


_OFFSETS = ((1, 0), (-1, 0), (0, 1), (0, -1), (1, 1), (-1, -1), (1, -1), (-1, 1))


# ---------------------------------------------------------------- segmentation


def _components(tiles: set[Pos]) -> list[set[Pos]]:
    out = []
    left = set(tiles)
    while left:
        seed = min(left, key=lambda p: (p[1], p[0]))
        comp = {seed}
        queue = deque([seed])
        left.discard(seed)
        while queue:
            x, y = queue.popleft()
            for dx, dy in _OFFSETS:
                n = (x + dx, y + dy)
                if n in left:
                    left.discard(n)
                    comp.add(n)
                    queue.append(n)
        out.append(comp)
    return out


def segment_structures(known_grid: dict[Pos, TileKind]) -> list[Structure]:
    """Split known tiles into rooms and corridors.

    Rooms are 8-connected groups of room-floor tiles, corridors are 8-connected
    groups of corridor tiles. Each door joins an orthogonally adjacent room if it
    has one, else an adjacent corridor, else it forms a corridor of its own. Ids
    are assigned 1.. in order of each structure's top-left tile.
    """
    rooms = _components({p for p, k in known_grid.items() if k in ROOM_FLOOR})
    corridors = _components({p for p, k in known_grid.items() if k is TileKind.CORRIDOR})
    groups: list[tuple[str, set[Pos]]] = [("room", r) for r in rooms] + [("corridor", c) for c in corridors]
    owner = {p: i for i, (_, tiles) in enumerate(groups) for p in tiles}
    loose: set[Pos] = set()
    for pos in sorted((p for p, k in known_grid.items() if k in DOORS), key=lambda p: (p[1], p[0])):
        x, y = pos
        orth = [owner.get(n) for n in ((x, y - 1), (x - 1, y), (x + 1, y), (x, y + 1))]
        room = [i for i in orth if i is not None and groups[i][0] == "room"]
        diag = [owner.get((x + dx, y + dy)) for dx, dy in _OFFSETS]
        corr = [i for i in orth + diag if i is not None and groups[i][0] == "corridor"]
        target = min(room) if room else min(corr) if corr else None
        if target is None:
            loose.add(pos)
        else:
            groups[target][1].add(pos)
    for comp in _components(loose):
        groups.append(("corridor", comp))
    groups.sort(key=lambda g: min((p[1], p[0]) for p in g[1]))
    return [Structure(i + 1, kind, frozenset(tiles)) for i, (kind, tiles) in enumerate(groups)]


# ---------------------------------------------------------------- tracker


@dataclass
class TrackerState:
    levels: dict[int, LevelMemory] = field(default_factory=dict)
    last_stats: dict | None = None
    last_depth: int | None = None
    last_pos: Pos | None = None
    last_menu: object | None = None
    ended: bool = False
    low_health_fraction: float = LOW_HEALTH_FRACTION
    replicate_occlusion_bug: bool = False
    turn: int = 0

    def memory(self, depth: int) -> LevelMemory:
        return self.levels[depth]

    @property
    def current(self) -> LevelMemory:
        return self.levels[self.last_depth]

    @property
    def seen(self) -> set[Pos]:
        return self.current.seen

    @property
    def structures(self) -> list[Structure]:
        return self.current.structures

    @property
    def known_items(self) -> dict[int, KnownItem]:
        return self.current.known_items

    @property
    def known_monsters(self) -> dict[int, KnownMonster]:
        return self.current.known_monsters


def steps_to(tracker: TrackerState, start: Pos, goal: Pos, depth: int | None = None) -> int | None:
    """Shortest 8-connected path length over known passable tiles, or None."""
    mem = tracker.levels[tracker.last_depth if depth is None else depth]
    if start == goal:
        return 0
    return mem.distances(start).get(goal)


def _stats(state: GameState) -> dict:
    p = state.player
    return {"hp": p.hp, "max_hp": p.max_hp, "hunger": p.hunger.label, "xp_level": p.xp_level, "gold": p.gold}


def update(
    tracker: TrackerState,
    state: GameState,
    step_messages: Iterable[str] = (),
    action: A.Action | None = None,
) -> list[Event]:
    """Fold the current view into memory and return what changed, in a fixed order."""
    turn = state.turn
    tracker.turn = turn
    lvl, p = state.level, state.player
    events: list[Event] = []

    for text in step_messages:
        events.append(Event(EventKind.NEW_MESSAGE, turn, (text,), f"Message: {text}"))

    first = tracker.last_depth is None
    if not first and p.depth != tracker.last_depth:
        verb = "descended" if p.depth > tracker.last_depth else "climbed"
        events.append(Event(EventKind.LEVEL_CHANGED, turn, (p.depth,), f"You {verb} to dungeon level {p.depth}."))
    elif not first and chebyshev(p.pos, tracker.last_pos) > 1:
        events.append(Event(EventKind.TELEPORTED, turn, (p.pos,), f"You were teleported to ({p.pos[0]},{p.pos[1]})."))

    mem = tracker.levels.get(p.depth)
    if mem is None:
        mem = tracker.levels[p.depth] = LevelMemory(p.depth, lvl.width, lvl.height)
    tracker.last_depth, tracker.last_pos = p.depth, p.pos

    if isinstance(action, A.Search):
        x, y = p.pos
        for dx in (-1, 0, 1):
            for dy in (-1, 0, 1):
                n = (x + dx, y + dy)
                mem.searched_count[n] = mem.searched_count.get(n, 0) + 1

    visible = visible_tiles(state)
    changed = False
    for pos in visible:
        x, y = pos
        kind = lvl.tiles[y][x]
        if mem.grid[y][x] is not kind:
            mem.grid[y][x] = kind
            changed = True
        mem.seen.add(pos)
    if changed:
        mem.version += 1
        events += _restructure(mem, turn)

    # monsters
    monsters_here = {m.pos: m for m in lvl.monsters}
    in_view = {m.id for m in lvl.monsters if m.pos in visible}
    for mid in list(mem.known_monsters):
        # forget a monster whose last known spot is in view but empty, unless it is seen elsewhere
        if mem.known_monsters[mid].pos in visible and mid not in in_view:
            del mem.known_monsters[mid]
    for m in sorted(lvl.monsters, key=lambda m: m.id):
        if m.pos not in visible:
            continue
        km = mem.known_monsters.get(m.id)
        if km is None:
            mem.known_monsters[m.id] = KnownMonster(m.id, m.kind, m.pos, m.attitude, turn)
            label = {Attitude.PEACEFUL: "peaceful ", Attitude.PET: "your "}.get(m.attitude, "")
            events.append(Event(EventKind.NEW_MONSTER, turn, (m.id,), f"You see {label}{m.kind} at ({m.pos[0]},{m.pos[1]})."))
        else:
            km.pos, km.kind, km.attitude, km.last_seen = m.pos, m.kind, m.attitude, turn

    # items
    for pos in sorted(visible, key=lambda q: (q[1], q[0])):
        occluded = pos in monsters_here and pos != p.pos
        known_here = [ki for ki in mem.known_items.values() if ki.pos == pos]
        if occluded:
            for ki in known_here:
                ki.occluded = True
            continue
        actual = {it.id: it for it in lvl.items_at(pos)}
        for ki in known_here:
            if ki.id not in actual and not (tracker.replicate_occlusion_bug and ki.occluded):
                del mem.known_items[ki.id]
        for iid, it in actual.items():
            ki = mem.known_items.get(iid)
            if ki is None:
                mem.known_items[iid] = KnownItem(iid, it.display_name, pos, turn)
                events.append(Event(EventKind.NEW_ITEM, turn, (iid,), f"You see {article(it.display_name)} at ({pos[0]},{pos[1]})."))
            else:
                ki.pos, ki.name, ki.last_seen, ki.occluded = pos, it.display_name, turn, False
    carried = {it.id for it in p.inventory}
    for iid in [i for i in mem.known_items if i in carried]:
        del mem.known_items[iid]

    # features
    for pos in sorted(visible, key=lambda q: (q[1], q[0])):
        kind = mem.kind(pos)
        if kind in NOTABLE_FEATURES and mem.features.get(pos) is not kind:
            mem.features[pos] = kind
            events.append(Event(EventKind.NEW_FEATURE, turn, (kind.value, pos), f"You see a {kind.value} at ({pos[0]},{pos[1]})."))
        elif kind not in NOTABLE_FEATURES and pos in mem.features:
            del mem.features[pos]

    # stats
    stats = _stats(state)
    old = tracker.last_stats
    if old is not None:
        for name in ("hp", "hunger", "xp_level", "gold"):
            if stats[name] != old[name]:
                events.append(Event(EventKind.STAT_CHANGED, turn, (name, old[name], stats[name]), f"Your {name} changed from {old[name]} to {stats[name]}."))
        limit = tracker.low_health_fraction
        was_low = old["hp"] < limit * old["max_hp"]
        is_low = stats["hp"] < limit * stats["max_hp"]
        if is_low and not was_low:
            events.append(Event(EventKind.LOW_HEALTH, turn, (stats["hp"], stats["max_hp"]), f"Your health is low: {stats['hp']}/{stats['max_hp']} HP."))
    tracker.last_stats = stats

    menu = state.open_menu
    if menu is not None and menu is not tracker.last_menu:
        events.append(Event(EventKind.MENU_OPENED, turn, (menu.kind.value,), f"A menu opened: {menu.prompt}"))
    tracker.last_menu = menu

    if state.done is not Status.RUNNING and not tracker.ended:
        tracker.ended = True
        cause = f" ({state.death_cause})" if state.death_cause else ""
        events.append(Event(EventKind.GAME_ENDED, turn, (state.done.value,), f"The game ended: {state.done.value}{cause}."))
    return events


def _restructure(mem: LevelMemory, turn: int) -> list[Event]:
    """Re-segment the level and keep structure ids stable by matching tile overlap."""
    fresh = segment_structures(mem.known_grid())
    old = mem.structures
    result: list[Structure] = []
    events = []
    claimed: set[int] = set()
    for s in fresh:
        best = None
        best_overlap = 0
        for o in old:
            if o.kind != s.kind or o.id in claimed:
                continue
            overlap = len(o.tiles & s.tiles)
            if overlap > best_overlap or (overlap == best_overlap and overlap and o.id < best.id):
                best, best_overlap = o, overlap
        if best is not None:
            claimed.add(best.id)
            result.append(Structure(best.id, s.kind, s.tiles, best.discovered_turn))
        else:
            new = Structure(mem.next_structure_id, s.kind, s.tiles, turn)
            mem.next_structure_id += 1
            result.append(new)
            events.append(Event(EventKind.NEW_STRUCTURE, turn, (new.id,), f"You discovered a new {s.kind}: {new.name}."))
    result.sort(key=lambda s: s.id)
    mem.structures = result
    return events


BLOCKER_KINDS = frozenset({TileKind.BOULDER, TileKind.DOOR_CLOSED, TileKind.DOOR_LOCKED})


def frontier_tiles(mem: LevelMemory) -> set[Pos]:
    """Known passable tiles with at least one never-seen neighbor."""
    out = set()
    for y, row in enumerate(mem.grid):
        for x, k in enumerate(row):
            if k not in PASSABLE:
                continue
            for dx, dy in _OFFSETS:
                nx, ny = x + dx, y + dy
                if 0 <= nx < mem.width and 0 <= ny < mem.height and mem.grid[ny][nx] is None:
                    out.add((x, y))
                    break
    return out


def blockers(mem: LevelMemory) -> list[tuple[Pos, TileKind]]:
    """Boulders and closed or locked doors next to known passable ground, top-left first."""
    out = []
    for y, row in enumerate(mem.grid):
        for x, k in enumerate(row):
            if k in BLOCKER_KINDS and any(mem.passable((x + dx, y + dy)) for dx, dy in _OFFSETS):
                out.append(((x, y), k))
    return out
