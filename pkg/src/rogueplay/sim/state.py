"""Game state containers: levels, player, menus and the whole-game value."""

from __future__ import annotations

import dataclasses
import hashlib
import random
from dataclasses import dataclass, field
from enum import Enum

from .items import Item, ItemKind
from .monsters import Monster
from .tiles import PASSABLE, ROOM_FLOOR, DOORS, Pos, TileKind, neighbors8

START_NUTRITION = 900
CARRY_CAPACITY = 600
INITIAL_PRAYER_TIMEOUT = 300


class Hunger(int, Enum):
    SATIATED = 0
    NOT_HUNGRY = 1
    HUNGRY = 2
    WEAK = 3
    STARVING = 4

    @property
    def label(self) -> str:
        return self.name.replace("_", " ").title()


def hunger_band(nutrition: int) -> Hunger:
    if nutrition > 1000:
        return Hunger.SATIATED
    if nutrition >= 150:
        return Hunger.NOT_HUNGRY
    if nutrition >= 50:
        return Hunger.HUNGRY
    if nutrition > 0:
        return Hunger.WEAK
    return Hunger.STARVING


def xp_threshold(level: int) -> int:
    """Experience points needed for ``level`` (level 1 starts at 0, then doubling from 20)."""
    if level <= 1:
        return 0
    return 20 * 2 ** (level - 2)


def xp_level_for(points: int) -> int:
    level = 1
    while points >= xp_threshold(level + 1):
        level += 1
    return level


class Status(str, Enum):
    RUNNING = "running"
    DEAD = "dead"
    WON = "won"


class MenuKind(str, Enum):
    PICKUP_MULTI = "pickup"
    CONTAINER_LOOT = "container"
    DIRECTION_PROMPT = "direction"
    CONFIRM_PROMPT = "confirm"
    TEXT_ENTRY = "text"
    ITEM_SELECT = "item select"


@dataclass
class MenuEntry:
    letter: str
    label: str
    marked: bool = False
    ref: int | None = None  # item id or option code


@dataclass
class MenuState:
    kind: MenuKind
    prompt: str
    entries: list[MenuEntry] = field(default_factory=list)
    context: dict = field(default_factory=dict)
    buffer: str = ""
    single: bool = False

    @property
    def requires_confirm(self) -> bool:
        return self.kind in (MenuKind.PICKUP_MULTI, MenuKind.CONTAINER_LOOT, MenuKind.ITEM_SELECT)


@dataclass
class PlayerState:
    pos: Pos
    depth: int = 1
    hp: int = 16
    max_hp: int = 16
    xp_points: int = 0
    xp_level: int = 1
    nutrition: int = START_NUTRITION
    status: set[str] = field(default_factory=set)
    inventory: list[Item] = field(default_factory=list)
    gold: int = 0
    prayer_cooldown: int = INITIAL_PRAYER_TIMEOUT
    wielded: int | None = None
    worn: set[int] = field(default_factory=set)
    form: str | None = None
    ill_since: int | None = None
    max_depth: int = 1

    @property
    def hunger(self) -> Hunger:
        return hunger_band(self.nutrition)

    def item(self, letter: str) -> Item | None:
        for it in self.inventory:
            if it.letter == letter:
                return it
        return None

    def carried_weight(self) -> int:
        return sum(i.total_weight() for i in self.inventory)

    def free_letter(self) -> str | None:
        used = {i.letter for i in self.inventory}
        for c in "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ":
            if c not in used:
                return c
        return None

    def wears(self, effect: str) -> bool:
        return any(i.id in self.worn and i.kind is ItemKind.RING and i.effect == effect for i in self.inventory)


@dataclass
class LevelMap:
    depth: int
    width: int
    height: int
    tiles: list[list[TileKind]]
    under: dict[Pos, TileKind] = field(default_factory=dict)
    piles: dict[Pos, list[Item]] = field(default_factory=dict)
    monsters: list[Monster] = field(default_factory=list)
    nondiggable: set[Pos] = field(default_factory=set)
    hidden: dict[Pos, TileKind] = field(default_factory=dict)
    engravings: dict[Pos, str] = field(default_factory=dict)
    regions: dict[str, tuple[int, int, int, int]] = field(default_factory=dict)
    room_of: dict[Pos, int] = field(default_factory=dict)
    room_view: dict[int, list[Pos]] = field(default_factory=dict)

    @classmethod
    def filled(cls, depth: int, width: int, height: int, kind: TileKind = TileKind.STONE) -> "LevelMap":
        return cls(depth, width, height, [[kind] * width for _ in range(height)])

    def in_bounds(self, pos: Pos) -> bool:
        return 0 <= pos[0] < self.width and 0 <= pos[1] < self.height

    def kind(self, pos: Pos) -> TileKind:
        return self.tiles[pos[1]][pos[0]]

    def set_kind(self, pos: Pos, kind: TileKind) -> None:
        self.tiles[pos[1]][pos[0]] = kind

    def passable(self, pos: Pos) -> bool:
        return self.in_bounds(pos) and self.tiles[pos[1]][pos[0]] in PASSABLE

    def monster_at(self, pos: Pos) -> Monster | None:
        for m in self.monsters:
            if m.pos == pos:
                return m
        return None

    def items_at(self, pos: Pos) -> list[Item]:
        return self.piles.get(pos, [])

    def add_item(self, pos: Pos, item: Item) -> None:
        item.letter = None
        self.piles.setdefault(pos, []).append(item)

    def remove_item(self, pos: Pos, item: Item) -> None:
        pile = self.piles[pos]
        pile.remove(item)
        if not pile:
            del self.piles[pos]

    def positions(self):
        for y in range(self.height):
            for x in range(self.width):
                yield x, y

    def in_region(self, name: str, pos: Pos) -> bool:
        x1, y1, x2, y2 = self.regions[name]
        return x1 <= pos[0] <= x2 and y1 <= pos[1] <= y2

    def index_rooms(self) -> None:
        """Label rooms (8-connected room-floor components) and their bounding walls and doors."""
        self.room_of.clear()
        self.room_view.clear()

        def is_room(p: Pos) -> bool:
            k = self.kind(p)
            return k in ROOM_FLOOR or (k is TileKind.BOULDER and self.under.get(p, TileKind.FLOOR) in ROOM_FLOOR)

        rid = 0
        for start in self.positions():
            if start in self.room_of or not is_room(start):
                continue
            rid += 1
            comp = [start]
            self.room_of[start] = rid
            i = 0
            while i < len(comp):
                for n in neighbors8(comp[i], self.width, self.height):
                    if n not in self.room_of and is_room(n):
                        self.room_of[n] = rid
                        comp.append(n)
                i += 1
            view = set(comp)
            for p in comp:
                for n in neighbors8(p, self.width, self.height):
                    k = self.kind(n)
                    if k is TileKind.WALL or k in DOORS or n in self.nondiggable:
                        view.add(n)
                        if k in DOORS and n not in self.room_of:
                            self.room_of[n] = rid
            self.room_view[rid] = sorted(view, key=lambda p: (p[1], p[0]))


@dataclass
class GameState:
    levels: list[LevelMap]
    player: PlayerState
    rng: random.Random
    turn: int = 0
    open_menu: MenuState | None = None
    pending_messages: list[str] = field(default_factory=list)
    done: Status = Status.RUNNING
    death_cause: str | None = None
    history: list[tuple[int, str, str]] = field(default_factory=list)
    next_id: int = 1
    appearances: dict[str, str] = field(default_factory=dict)
    full_game: bool = False
    spawn_chance: float = 0.0
    name: str = ""

    @property
    def level(self) -> LevelMap:
        return self.levels[self.player.depth - 1]

    def new_id(self) -> int:
        nid = self.next_id
        self.next_id += 1
        return nid

    def record(self, what: str, detail: str) -> None:
        self.history.append((self.turn, what, detail))


def _plain(obj):
    if type(obj) is tuple and all(type(v) is int for v in obj):
        return obj
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        return (type(obj).__name__,) + tuple((f.name, _plain(getattr(obj, f.name))) for f in dataclasses.fields(obj))
    if isinstance(obj, Enum):
        return obj.value
    if isinstance(obj, dict):
        return tuple(sorted((repr(_plain(k)), _plain(v)) for k, v in obj.items()))
    if isinstance(obj, (set, frozenset)):
        return tuple(sorted(repr(_plain(v)) for v in obj))
    if isinstance(obj, (list, tuple)):
        # fast path for tile rows
        if obj and all(type(v) is type(obj[0]) for v in obj) and isinstance(obj[0], Enum):
            return tuple(v.value for v in obj)
        return tuple(_plain(v) for v in obj)
    if isinstance(obj, random.Random):
        return obj.getstate()
    return obj


def state_digest(state: GameState) -> str:
    """Stable hash over the complete game state, rng included."""
    return hashlib.sha256(repr(_plain(state)).encode()).hexdigest()
