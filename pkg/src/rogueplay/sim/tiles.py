"""Tile kinds, directions and small geometry helpers shared across the engine."""

from __future__ import annotations

from enum import Enum

Pos = tuple[int, int]


class TileKind(str, Enum):
    WALL = "wall"
    FLOOR = "floor"
    CORRIDOR = "corridor"
    DOOR_OPEN = "open door"
    DOOR_CLOSED = "closed door"
    DOOR_LOCKED = "locked door"
    STAIRS_UP = "staircase up"
    STAIRS_DOWN = "staircase down"
    FOUNTAIN = "fountain"
    ALTAR = "altar"
    BOULDER = "boulder"
    STATUE = "statue"
    STONE = "stone"
    UNKNOWN = "unknown"  # render-only

    def __str__(self) -> str:
        return self.value


PASSABLE = frozenset(
    {
        TileKind.FLOOR,
        TileKind.CORRIDOR,
        TileKind.DOOR_OPEN,
        TileKind.STAIRS_UP,
        TileKind.STAIRS_DOWN,
        TileKind.FOUNTAIN,
        TileKind.ALTAR,
        TileKind.STATUE,
    }
)

# Tiles that stop line of sight.
OPAQUE = frozenset(
    {
        TileKind.WALL,
        TileKind.STONE,
        TileKind.DOOR_CLOSED,
        TileKind.DOOR_LOCKED,
        TileKind.BOULDER,
    }
)

DOORS = frozenset({TileKind.DOOR_OPEN, TileKind.DOOR_CLOSED, TileKind.DOOR_LOCKED})

# Kinds that make up the inside of a room (everything a room floor can hold).
ROOM_FLOOR = frozenset(
    {
        TileKind.FLOOR,
        TileKind.STAIRS_UP,
        TileKind.STAIRS_DOWN,
        TileKind.FOUNTAIN,
        TileKind.ALTAR,
        TileKind.STATUE,
    }
)

# Features the tracker announces when first seen.
NOTABLE_FEATURES = frozenset(
    {
        TileKind.FOUNTAIN,
        TileKind.ALTAR,
        TileKind.STAIRS_UP,
        TileKind.STAIRS_DOWN,
        TileKind.STATUE,
    }
)

GLYPHS: dict[TileKind, str] = {
    TileKind.WALL: "|",
    TileKind.FLOOR: ".",
    TileKind.CORRIDOR: "#",
    TileKind.DOOR_OPEN: "/",
    TileKind.DOOR_CLOSED: "+",
    TileKind.DOOR_LOCKED: "+",
    TileKind.STAIRS_UP: "<",
    TileKind.STAIRS_DOWN: ">",
    TileKind.FOUNTAIN: "{",
    TileKind.ALTAR: "_",
    TileKind.BOULDER: "0",
    TileKind.STATUE: "'",
    TileKind.STONE: " ",
    TileKind.UNKNOWN: " ",
}

# Compass directions, y grows downward (south).
DIRECTIONS: dict[str, Pos] = {
    "N": (0, -1),
    "NE": (1, -1),
    "E": (1, 0),
    "SE": (1, 1),
    "S": (0, 1),
    "SW": (-1, 1),
    "W": (-1, 0),
    "NW": (-1, -1),
}
DELTA_TO_DIR = {v: k for k, v in DIRECTIONS.items()}

# Keys accepted by a direction prompt. "s" targets yourself.
DIRECTION_KEYS: dict[str, str] = {
    "k": "N",
    "u": "NE",
    "l": "E",
    "n": "SE",
    "j": "S",
    "b": "SW",
    "h": "W",
    "y": "NW",
}
DIR_TO_KEY = {v: k for k, v in DIRECTION_KEYS.items()}

COMPASS_NAMES = {
    "N": "north",
    "NE": "northeast",
    "E": "east",
    "SE": "southeast",
    "S": "south",
    "SW": "southwest",
    "W": "west",
    "NW": "northwest",
}

NEIGHBOR_DELTAS: tuple[Pos, ...] = tuple(DIRECTIONS.values())


def neighbors8(pos: Pos, width: int, height: int):
    x, y = pos
    for dx, dy in NEIGHBOR_DELTAS:
        nx, ny = x + dx, y + dy
        if 0 <= nx < width and 0 <= ny < height:
            yield nx, ny


def chebyshev(a: Pos, b: Pos) -> int:
    return max(abs(a[0] - b[0]), abs(a[1] - b[1]))


def sign(v: int) -> int:
    return (v > 0) - (v < 0)


def compass(from_pos: Pos, to_pos: Pos) -> str | None:
    """Compass word for the direction from one tile to another (sign of deltas)."""
    d = (sign(to_pos[0] - from_pos[0]), sign(to_pos[1] - from_pos[1]))
    if d == (0, 0):
        return None
    return COMPASS_NAMES[DELTA_TO_DIR[d]]


def direction_between(a: Pos, b: Pos) -> str | None:
    """Direction name for two 8-adjacent tiles, None otherwise."""
    d = (b[0] - a[0], b[1] - a[1])
    return DELTA_TO_DIR.get(d)
