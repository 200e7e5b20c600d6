"""Random 21x79 level memories for oracle tests."""

import random

from rogueplay.sim.tiles import TileKind
from rogueplay.tracker import LevelMemory, TrackerState

WIDTH, HEIGHT = 79, 21

_WEIGHTS = [
    (TileKind.FLOOR, 30),
    (TileKind.CORRIDOR, 18),
    (TileKind.WALL, 25),
    (TileKind.STONE, 10),
    (TileKind.DOOR_OPEN, 4),
    (TileKind.DOOR_CLOSED, 3),
    (TileKind.DOOR_LOCKED, 2),
    (TileKind.STAIRS_DOWN, 1),
    (TileKind.FOUNTAIN, 1),
    (TileKind.BOULDER, 2),
    (None, 8),
]


def random_memory(seed: int) -> LevelMemory:
    """A level memory with blobs of rooms and corridors, walls and unknown tiles."""
    rng = random.Random(seed)
    kinds = [k for k, _ in _WEIGHTS]
    weights = [w for _, w in _WEIGHTS]
    mem = LevelMemory(1, WIDTH, HEIGHT)
    for y in range(HEIGHT):
        for x in range(WIDTH):
            mem.grid[y][x] = rng.choices(kinds, weights)[0]
    # carve a few rectangles so that rooms are larger than single tiles
    for _ in range(rng.randint(3, 9)):
        w, h = rng.randint(3, 14), rng.randint(2, 6)
        x0, y0 = rng.randrange(WIDTH - w), rng.randrange(HEIGHT - h)
        for y in range(y0, y0 + h):
            for x in range(x0, x0 + w):
                mem.grid[y][x] = TileKind.FLOOR
    return mem


def tracker_for(mem: LevelMemory) -> TrackerState:
    tracker = TrackerState()
    tracker.levels[mem.depth] = mem
    tracker.last_depth = mem.depth
    return tracker
