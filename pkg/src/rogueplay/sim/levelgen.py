"""Procedural ten-level dungeon for full-game runs."""

from __future__ import annotations

import random
from collections import deque
from dataclasses import dataclass

from .items import make_item, shuffle_appearances
from .monsters import WANDERING_KINDS, Attitude, Monster
from .state import GameState, LevelMap, PlayerState
from .tiles import PASSABLE, Pos, TileKind, chebyshev

WIDTH, HEIGHT = 79, 21
N_LEVELS = 10
SPAWN_CHANCE = 1 / 60


@dataclass
class Room:
    x1: int  # interior bounds, inclusive
    y1: int
    x2: int
    y2: int

    def overlaps(self, other: "Room", margin: int = 3) -> bool:
        return not (
            self.x2 + margin < other.x1 or other.x2 + margin < self.x1 or self.y2 + margin < other.y1 or other.y2 + margin < self.y1
        )

    @property
    def center(self) -> Pos:
        return (self.x1 + self.x2) // 2, (self.y1 + self.y2) // 2

    def tiles(self):
        for y in range(self.y1, self.y2 + 1):
            for x in range(self.x1, self.x2 + 1):
                yield x, y


def new_full_game(seed: int) -> GameState:
    rng = random.Random(seed)
    state = GameState(levels=[], player=PlayerState(pos=(0, 0)), rng=rng, full_game=True, spawn_chance=SPAWN_CHANCE, name="full-game")
    state.appearances = shuffle_appearances(rng)
    for depth in range(1, N_LEVELS + 1):
        state.levels.append(_generate_level(state, depth))

    first = state.levels[0]
    start = next(p for p in first.positions() if first.kind(p) is TileKind.STAIRS_UP)
    p = state.player
    p.pos = start
    for desc in ("long sword", "dagger", "food ration"):
        item = make_item(desc, state.new_id)
        item.letter = p.free_letter()
        p.inventory.append(item)
    p.wielded = p.inventory[0].id
    for n in sorted(_room_neighbors(first, start)):
        if first.kind(n) in PASSABLE:
            first.monsters.append(Monster.spawn(state.new_id(), "kitten", n, Attitude.PET))
            break
    return state


def _room_neighbors(lvl: LevelMap, pos: Pos):
    x, y = pos
    return [(x + dx, y + dy) for dx in (-1, 0, 1) for dy in (-1, 0, 1) if (dx or dy) and lvl.in_bounds((x + dx, y + dy))]


def _generate_level(state: GameState, depth: int) -> LevelMap:
    rng = state.rng
    while True:
        lvl = LevelMap.filled(depth, WIDTH, HEIGHT)
        rooms = _place_rooms(rng)
        for r in rooms:
            _carve_room(lvl, r)
        rooms.sort(key=lambda r: r.center)
        pairs = [(i, i + 1) for i in range(len(rooms) - 1)]
        for _ in range(rng.randint(1, 2)):
            a, b = rng.sample(range(len(rooms)), 2)
            pairs.append((min(a, b), max(a, b)))
        for a, b in pairs:
            _connect(lvl, rooms[a], rooms[b], rng)
        if _connected(lvl, rooms):
            break
    _furnish(state, lvl, rooms, depth)
    lvl.index_rooms()
    return lvl


def _place_rooms(rng: random.Random) -> list[Room]:
    target = rng.randint(5, 8)
    rooms: list[Room] = []
    for _ in range(300):
        if len(rooms) >= target:
            break
        w, h = rng.randint(3, 10), rng.randint(2, 5)
        x1 = rng.randint(2, WIDTH - w - 3)
        y1 = rng.randint(2, HEIGHT - h - 3)
        room = Room(x1, y1, x1 + w - 1, y1 + h - 1)
        if not any(room.overlaps(o) for o in rooms):
            rooms.append(room)
    return rooms


def _carve_room(lvl: LevelMap, r: Room) -> None:
    for y in range(r.y1 - 1, r.y2 + 2):
        for x in range(r.x1 - 1, r.x2 + 2):
            inside = r.x1 <= x <= r.x2 and r.y1 <= y <= r.y2
            lvl.set_kind((x, y), TileKind.FLOOR if inside else TileKind.WALL)


def _door_spot(r: Room, toward: Room, rng: random.Random) -> tuple[Pos, Pos]:
    """A wall tile of ``r`` facing ``toward`` and the stone tile just outside it."""
    tx, ty = toward.center
    if tx > r.x2 + 1:
        y = rng.randint(r.y1, r.y2)
        return (r.x2 + 1, y), (r.x2 + 2, y)
    if tx < r.x1 - 1:
        y = rng.randint(r.y1, r.y2)
        return (r.x1 - 1, y), (r.x1 - 2, y)
    x = rng.randint(r.x1, r.x2)
    if ty > r.y2:
        return (x, r.y2 + 1), (x, r.y2 + 2)
    return (x, r.y1 - 1), (x, r.y1 - 2)


def _connect(lvl: LevelMap, a: Room, b: Room, rng: random.Random) -> None:
    door_a, out_a = _door_spot(a, b, rng)
    door_b, out_b = _door_spot(b, a, rng)
    path = _dig_path(lvl, out_a, out_b)
    if path is None:
        return
    for door in (door_a, door_b):
        if lvl.kind(door) is TileKind.WALL:
            roll = rng.random()
            lvl.set_kind(door, TileKind.DOOR_OPEN if roll < 0.45 else TileKind.DOOR_CLOSED if roll < 0.8 else TileKind.DOOR_LOCKED)
    for pos in path:
        if lvl.kind(pos) is TileKind.STONE:
            lvl.set_kind(pos, TileKind.CORRIDOR)
    if len(path) > 6 and rng.random() < 0.2:
        hidden = path[len(path) // 2]
        if lvl.kind(hidden) is TileKind.CORRIDOR and hidden not in lvl.hidden:
            lvl.set_kind(hidden, TileKind.STONE)
            lvl.hidden[hidden] = TileKind.CORRIDOR


def _dig_path(lvl: LevelMap, start: Pos, goal: Pos) -> list[Pos] | None:
    def ok(p: Pos) -> bool:
        x, y = p
        return 1 <= x < WIDTH - 1 and 1 <= y < HEIGHT - 1 and lvl.kind(p) in (TileKind.STONE, TileKind.CORRIDOR)

    if not ok(start) or not ok(goal):
        return None
    prev: dict[Pos, Pos | None] = {start: None}
    queue = deque([start])
    while queue:
        cur = queue.popleft()
        if cur == goal:
            path = []
            while cur is not None:
                path.append(cur)
                cur = prev[cur]
            return path[::-1]
        x, y = cur
        for n in ((x + 1, y), (x - 1, y), (x, y + 1), (x, y - 1)):
            if n not in prev and ok(n):
                prev[n] = cur
                queue.append(n)
    return None


def _connected(lvl: LevelMap, rooms: list[Room]) -> bool:
    def walkable(p: Pos) -> bool:
        k = lvl.kind(p)
        return k in PASSABLE or k in (TileKind.DOOR_CLOSED, TileKind.DOOR_LOCKED) or p in lvl.hidden

    start = rooms[0].center
    seen = {start}
    queue = deque([start])
    while queue:
        x, y = queue.popleft()
        for n in ((x + 1, y), (x - 1, y), (x, y + 1), (x, y - 1), (x + 1, y + 1), (x - 1, y - 1), (x + 1, y - 1), (x - 1, y + 1)):
            if n not in seen and lvl.in_bounds(n) and walkable(n):
                seen.add(n)
                queue.append(n)
    return all(r.center in seen for r in rooms)


def _furnish(state: GameState, lvl: LevelMap, rooms: list[Room], depth: int) -> None:
    rng = state.rng
    up_room, down_room = rng.sample(range(len(rooms)), 2)
    up = rng.choice(list(rooms[up_room].tiles()))
    lvl.set_kind(up, TileKind.STAIRS_UP)
    if depth < N_LEVELS:
        lvl.set_kind(rng.choice(list(rooms[down_room].tiles())), TileKind.STAIRS_DOWN)
    else:
        lvl.add_item(rng.choice(list(rooms[down_room].tiles())), make_item("amulet of yendor", state.new_id))
    floor = [p for r in rooms for p in r.tiles() if lvl.kind(p) is TileKind.FLOOR]
    if rng.random() < 0.3:
        lvl.set_kind(rng.choice(floor), TileKind.FOUNTAIN)
    if rng.random() < 0.1:
        lvl.set_kind(rng.choice(floor), TileKind.ALTAR)
    floor = [p for p in floor if lvl.kind(p) is TileKind.FLOOR]

    for _ in range(rng.randint(3, 6)):
        roll = rng.random()
        if roll < 0.3:
            desc = "food ration"
        elif roll < 0.55:
            desc = "random potion"
        elif roll < 0.85:
            desc = f"{rng.randint(5, 20) * depth} gold pieces"
        else:
            desc = "random weapon"
        lvl.add_item(rng.choice(floor), make_item(desc, state.new_id, rng, appearances=state.appearances))

    kinds = [k.name for k in WANDERING_KINDS if k.difficulty <= depth + 1]
    spots = [p for p in floor if chebyshev(p, up) > 6]
    for _ in range(rng.randint(1, 3) + depth // 3):
        if not spots:
            break
        pos = rng.choice(spots)
        spots.remove(pos)
        lvl.monsters.append(Monster.spawn(state.new_id(), rng.choice(kinds), pos, Attitude.HOSTILE))
