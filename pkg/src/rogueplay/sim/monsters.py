"""Monster table and the live Monster entity."""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

from .items import Item


class Attitude(str, Enum):
    HOSTILE = "hostile"
    PEACEFUL = "peaceful"
    PET = "pet"


@dataclass(frozen=True)
class MonsterKind:
    name: str
    hp: int
    damage: int
    xp: int
    difficulty: int
    corpse_weight: int
    nutrition: int
    glyph: str
    verb: str = "hits"
    stationary: bool = False
    phasing: bool = False


MONSTERS: dict[str, MonsterKind] = {
    m.name: m
    for m in [
        MonsterKind("newt", 1, 1, 1, 0, 10, 20, ":", "bites"),
        MonsterKind("grid bug", 2, 1, 2, 0, 15, 10, "x", "bites"),
        MonsterKind("jackal", 3, 2, 5, 1, 300, 250, "d", "bites"),
        MonsterKind("sewer rat", 4, 3, 6, 1, 20, 12, "r", "bites"),
        MonsterKind("gnome", 5, 3, 8, 2, 650, 100, "G"),
        MonsterKind("hill orc", 9, 5, 15, 3, 1000, 200, "o"),
        MonsterKind("giant ant", 10, 4, 20, 4, 10, 10, "a", "bites"),
        MonsterKind("dwarf", 12, 6, 25, 4, 900, 300, "h"),
        MonsterKind("soldier ant", 14, 6, 30, 6, 20, 5, "a", "stings"),
        MonsterKind("gnome lord", 8, 4, 12, 3, 700, 120, "G"),
        MonsterKind("wolf", 18, 8, 35, 5, 500, 250, "d", "bites"),
        MonsterKind("dwarf lord", 16, 8, 35, 5, 900, 300, "h"),
        MonsterKind("giant beetle", 20, 10, 45, 6, 10, 10, "a", "bites"),
        MonsterKind("owlbear", 30, 12, 70, 7, 1700, 700, "Y", "claws"),
        MonsterKind("troll", 40, 14, 100, 9, 800, 350, "T"),
        MonsterKind("kitten", 8, 3, 10, 99, 150, 150, "f", "bites"),
        MonsterKind("little dog", 8, 3, 10, 99, 150, 150, "d", "bites"),
        MonsterKind("shopkeeper", 60, 12, 100, 99, 1450, 400, "@", stationary=True),
        MonsterKind("watchman", 30, 8, 60, 99, 1450, 400, "@"),
        MonsterKind("xorn", 20, 6, 40, 99, 1200, 700, "X", phasing=True),
        MonsterKind("earth elemental", 25, 8, 50, 99, 2500, 0, "E", phasing=True),
        MonsterKind("floating eye", 6, 0, 8, 2, 10, 10, "e", "gazes at", stationary=True),
    ]
}

# Forms an uncontrolled polymorph may produce; none of them can pass walls.
RANDOM_FORMS = ("newt", "jackal", "gnome", "hill orc", "giant ant", "floating eye")
WANDERING_KINDS = [m for m in MONSTERS.values() if m.difficulty < 99]


@dataclass
class Monster:
    id: int
    kind: str
    pos: tuple[int, int]
    hp: int
    max_hp: int
    attitude: Attitude
    xp_value: int
    inventory: list[Item] = field(default_factory=list)

    @property
    def info(self) -> MonsterKind:
        return MONSTERS[self.kind]

    @classmethod
    def spawn(cls, monster_id: int, kind: str, pos: tuple[int, int], attitude: Attitude) -> "Monster":
        info = MONSTERS[kind]
        return cls(monster_id, kind, pos, info.hp, info.hp, attitude, info.xp)
