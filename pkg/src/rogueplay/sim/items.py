"""Item model and the catalog used by scenarios and level generation."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable

ROT_THRESHOLD = 30


class ItemKind(str, Enum):
    FOOD_RATION = "food ration"
    CORPSE = "corpse"
    POTION = "potion"
    WAND = "wand"
    SCROLL = "scroll"
    WEAPON = "weapon"
    PICKAXE = "pick-axe"
    BAG_OF_HOLDING = "bag of holding"
    RING = "ring"
    GOLD = "gold"
    ROCK = "rock"
    AMULET = "amulet"
    TOOL = "tool"


@dataclass
class Item:
    id: int
    kind: ItemKind
    name: str
    weight: int
    letter: str | None = None
    effect: str | None = None
    charges: int = 0
    damage: int = 0
    monster: str | None = None
    kill_turn: int = 0
    amount: int = 0
    contents: list["Item"] = field(default_factory=list)
    appearance: str | None = None
    identified: bool = True

    @property
    def display_name(self) -> str:
        if self.kind is ItemKind.GOLD:
            return f"{self.amount} gold piece" + ("" if self.amount == 1 else "s")
        if not self.identified and self.appearance:
            return self.appearance
        return self.name

    def total_weight(self) -> int:
        if self.kind is ItemKind.BAG_OF_HOLDING:
            inner = sum(i.total_weight() for i in self.contents)
            return self.weight + (inner + 1) // 2
        return self.weight

    def is_food(self) -> bool:
        return self.kind in (ItemKind.FOOD_RATION, ItemKind.CORPSE)

    def is_rotten(self, turn: int) -> bool:
        return self.kind is ItemKind.CORPSE and turn - self.kill_turn > ROT_THRESHOLD


def article(name: str) -> str:
    if name[:1].isdigit():
        return name
    return ("an " if name[:1].lower() in "aeiou" else "a ") + name


POTIONS = ("healing", "extra healing", "water", "fruit juice", "see invisible")
WANDS = ("digging", "teleportation", "polymorph", "striking")
SCROLLS = ("identify", "teleportation", "blank paper")
RINGS = ("polymorph control", "regeneration")
WEAPONS = {"dagger": 4, "short sword": 6, "long sword": 8, "mace": 6, "axe": 6}
WEAPON_WEIGHTS = {"dagger": 10, "short sword": 30, "long sword": 40, "mace": 30, "axe": 60}

APPEARANCES = {
    ItemKind.POTION: ["ruby potion", "murky potion", "bubbly potion", "cloudy potion", "milky potion"],
    ItemKind.WAND: ["oak wand", "glass wand", "iron wand", "bone wand"],
    ItemKind.SCROLL: ["scroll labeled FOOBIE BLETCH", "scroll labeled ZELGO MER", "scroll labeled XIXAXA"],
    ItemKind.RING: ["ruby ring", "wooden ring"],
}
_EFFECTS = {ItemKind.POTION: POTIONS, ItemKind.WAND: WANDS, ItemKind.SCROLL: SCROLLS, ItemKind.RING: RINGS}


def shuffle_appearances(rng: random.Random) -> dict[str, str]:
    """Per-game mapping from true item names to unidentified appearances."""
    table: dict[str, str] = {}
    for kind, effects in _EFFECTS.items():
        looks = list(APPEARANCES[kind])
        rng.shuffle(looks)
        for effect, look in zip(effects, looks):
            table[f"{kind.value} of {effect}"] = look
    return table


class UnknownItem(ValueError):
    pass


RANDOM_POOLS = {
    "potion": [f"potion of {e}" for e in POTIONS],
    "wand": [f"wand of {e}" for e in WANDS],
    "scroll": [f"scroll of {e}" for e in SCROLLS],
    "ring": [f"ring of {e}" for e in RINGS],
    "weapon": list(WEAPONS),
    "food": ["food ration", "food ration", "newt corpse"],
    "object": [
        "potion of healing",
        "potion of water",
        "wand of striking",
        "scroll of blank paper",
        "dagger",
        "food ration",
        "rock",
        "ring of regeneration",
    ],
}


def make_item(
    descriptor: str,
    new_id: Callable[[], int],
    rng: random.Random | None = None,
    *,
    turn: int = 0,
    appearances: dict[str, str] | None = None,
) -> Item:
    """Build an item from a descriptor such as ``"wand of digging"`` or ``"random potion"``.

    A leading ``"unidentified "`` hides the true name behind the per-game appearance.
    """
    desc = descriptor.strip().lower()
    identified = True
    if desc.startswith("unidentified "):
        identified = False
        desc = desc[len("unidentified ") :]
    if desc.startswith("random "):
        pool = RANDOM_POOLS.get(desc[len("random ") :])
        if pool is None:
            raise UnknownItem(descriptor)
        desc = (rng or random.Random(0)).choice(pool)

    item = _build(desc, new_id(), turn)
    if not identified and appearances and item.name in appearances:
        item.appearance = appearances[item.name]
        item.identified = False
    return item


def _build(desc: str, item_id: int, turn: int) -> Item:
    from .monsters import MONSTERS

    if desc == "food ration":
        return Item(item_id, ItemKind.FOOD_RATION, desc, 20)
    if desc.endswith(" corpse"):
        kind = desc[: -len(" corpse")]
        if kind not in MONSTERS:
            raise UnknownItem(desc)
        return Item(item_id, ItemKind.CORPSE, desc, MONSTERS[kind].corpse_weight, monster=kind, kill_turn=turn)
    for kind, effects in _EFFECTS.items():
        prefix = f"{kind.value} of "
        if desc.startswith(prefix) and desc[len(prefix) :] in effects:
            weight = {ItemKind.POTION: 20, ItemKind.WAND: 7, ItemKind.SCROLL: 5, ItemKind.RING: 3}[kind]
            charges = 6 if kind is ItemKind.WAND else 0
            return Item(item_id, kind, desc, weight, effect=desc[len(prefix) :], charges=charges)
    if desc in WEAPONS:
        return Item(item_id, ItemKind.WEAPON, desc, WEAPON_WEIGHTS[desc], damage=WEAPONS[desc])
    if desc in ("pick-axe", "pickaxe"):
        return Item(item_id, ItemKind.PICKAXE, "pick-axe", 100, damage=6)
    if desc == "bag of holding":
        return Item(item_id, ItemKind.BAG_OF_HOLDING, desc, 15)
    if desc == "rock":
        return Item(item_id, ItemKind.ROCK, desc, 10)
    if desc == "heavy iron ball":
        return Item(item_id, ItemKind.ROCK, desc, 480)
    if desc == "amulet of yendor":
        return Item(item_id, ItemKind.AMULET, "Amulet of Yendor", 20)
    if desc == "cloak of invisibility":
        return Item(item_id, ItemKind.TOOL, desc, 10)
    if desc.endswith("gold pieces") or desc.endswith("gold") or desc.endswith("gold piece"):
        head = desc.split()[0]
        amount = int(head) if head.isdigit() else 10
        return Item(item_id, ItemKind.GOLD, "gold", 0, amount=amount)
    raise UnknownItem(desc)
