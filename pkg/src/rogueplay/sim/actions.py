"""Player actions accepted by :func:`rogueplay.sim.engine.step`.

Commands that take an item or a direction accept ``None`` for it, in which
case the engine opens the matching prompt (direction, yes/no, text) instead.
"""

from __future__ import annotations

from dataclasses import dataclass

SPECIAL_KEYS = ("ESC", "SPACE", "ENTER")


@dataclass(frozen=True)
class Action:
    @property
    def name(self) -> str:
        return type(self).__name__


@dataclass(frozen=True)
class Move(Action):
    direction: str


@dataclass(frozen=True)
class Kick(Action):
    direction: str | None = None


@dataclass(frozen=True)
class Pickup(Action):
    pass


@dataclass(frozen=True)
class Drop(Action):
    letter: str


@dataclass(frozen=True)
class Wield(Action):
    letter: str


@dataclass(frozen=True)
class Eat(Action):
    letter: str | None = None  # None eats from the floor


@dataclass(frozen=True)
class Quaff(Action):
    letter: str | None = None  # None drinks from a fountain


@dataclass(frozen=True)
class Zap(Action):
    letter: str
    direction: str | None = None


@dataclass(frozen=True)
class Apply(Action):
    letter: str
    direction: str | None = None


@dataclass(frozen=True)
class Read(Action):
    letter: str


@dataclass(frozen=True)
class PutOn(Action):
    letter: str


@dataclass(frozen=True)
class PutIn(Action):
    letter: str


@dataclass(frozen=True)
class Pray(Action):
    pass


@dataclass(frozen=True)
class Search(Action):
    pass


@dataclass(frozen=True)
class Open(Action):
    direction: str | None = None


@dataclass(frozen=True)
class Close(Action):
    direction: str | None = None


@dataclass(frozen=True)
class GoUp(Action):
    pass


@dataclass(frozen=True)
class GoDown(Action):
    pass


@dataclass(frozen=True)
class Engrave(Action):
    text: str | None = None


@dataclass(frozen=True)
class ReadFloor(Action):
    pass


@dataclass(frozen=True)
class Pay(Action):
    pass


@dataclass(frozen=True)
class Cast(Action):
    pass


@dataclass(frozen=True)
class PressKey(Action):
    key: str

    def __post_init__(self):
        if self.key not in SPECIAL_KEYS and not (len(self.key) == 1 and self.key.isalpha()):
            raise ValueError(f"unsupported key {self.key!r}; use a letter or one of {', '.join(SPECIAL_KEYS)}")


@dataclass(frozen=True)
class TypeText(Action):
    text: str


@dataclass(frozen=True)
class Wait(Action):
    pass
