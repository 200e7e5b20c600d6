"""Hand-written solutions for the builtin scenarios, played through the scripted backend.

Each solution is a small policy that reads only the prompt text (the same
observation a language model would get) and answers with one skill call. They
keep a little private state, the way a model keeps notes in its memory.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from typing import Callable

from ..backends import ScriptedBackend, always

_POS = re.compile(r"You are at \((\d+),(\d+)\)")
_INV = re.compile(r"^([A-Za-z]) - (.+?)(?: \((.*)\))?$")
_MONSTER = re.compile(r"^- (.+?) at \((\d+),(\d+)\)")


@dataclass
class Thing:
    name: str
    pos: tuple[int, int]


@dataclass
class View:
    """The parts of a rendered observation the solutions care about."""

    pos: tuple[int, int]
    things: list[Thing] = field(default_factory=list)
    inventory: dict[str, str] = field(default_factory=dict)
    inventory_notes: dict[str, str] = field(default_factory=dict)
    monsters: list[Thing] = field(default_factory=list)
    menu_prompt: str | None = None
    menu: list[tuple[str, str, bool]] = field(default_factory=list)
    explored: bool = False
    blockers: str = ""
    here: str = ""

    def find(self, needle: str) -> list[Thing]:
        return [t for t in self.things if needle in t.name]

    def letter(self, needle: str) -> str | None:
        for letter, name in self.inventory.items():
            if needle in name:
                return letter
        return None


def observation_of(prompt: str) -> str:
    """Cut the observation out of a full prompt (memory, observation, task)."""
    start = prompt.rfind("You are at (")
    end = prompt.rfind("You can use the following skills:")
    return prompt[start:end if end > start else None]


def parse_view(prompt: str) -> View:
    text = observation_of(prompt)
    m = _POS.search(text)
    view = View((int(m.group(1)), int(m.group(2))) if m else (0, 0))
    for section in text.split("\n\n"):
        lines = section.strip().splitlines()
        if not lines:
            continue
        head = lines[0]
        if head.startswith("You are at"):
            if "Here: " in head:
                view.here = head.split("Here: ", 1)[1]
        elif head.startswith(("room_", "corridor_", "elsewhere:")):
            for line in lines:
                body = line.split(": ", 1)[1] if ": " in line else ""
                for part in body.split("; "):
                    hit = re.match(r"(.+?) at \((\d+),(\d+)\)", part)
                    if hit:
                        view.things.append(Thing(hit.group(1), (int(hit.group(2)), int(hit.group(3)))))
        elif head.startswith("No known structure can be explored"):
            view.explored = True
        elif head.startswith("Things blocking"):
            view.blockers = head
        elif head.startswith(("Close monsters", "Distant monsters")):
            for line in lines:
                hit = _MONSTER.match(line)
                if hit:
                    view.monsters.append(Thing(hit.group(1), (int(hit.group(2)), int(hit.group(3)))))
        elif head.startswith("Inventory:"):
            for line in lines[1:]:
                hit = _INV.match(line)
                if hit:
                    view.inventory[hit.group(1)] = hit.group(2)
                    view.inventory_notes[hit.group(1)] = hit.group(3) or ""
        elif head.startswith("An open menu asks:"):
            view.menu_prompt = head[len("An open menu asks: ") :]
            for line in lines[1:]:
                hit = re.match(r"^([A-Za-z]) - (.+?)( \[marked\])?$", line)
                if hit:
                    view.menu.append((hit.group(1), hit.group(2), bool(hit.group(3))))
    return view


def call(skill: str, thoughts: str = "", **params) -> str:
    return json.dumps({"thoughts": thoughts, "skill": skill, "params": params})


def _near(view: View, things: list[Thing]) -> Thing:
    x, y = view.pos
    return min(things, key=lambda t: (max(abs(t.pos[0] - x), abs(t.pos[1] - y)), t.pos[1], t.pos[0]))


def _select_menu(view: View, want: Callable[[str], bool]) -> str:
    """Mark every wanted entry one key at a time, then confirm."""
    for letter, label, marked in view.menu:
        if want(label) and not marked:
            return call("press_key", f"Mark {label}.", key=letter)
    if any(marked for _, _, marked in view.menu):
        return call("press_key", "Confirm the selection.", key="ENTER")
    return call("press_key", "Nothing useful here.", key="ESC")


def _pick_one(view: View, want: Callable[[str], bool]) -> str:
    """For menus that take a single choice: mark the first wanted entry, then confirm."""
    if any(marked for _, _, marked in view.menu):
        return call("press_key", "Confirm the choice.", key="ENTER")
    for letter, label, _ in view.menu:
        if want(label):
            return call("press_key", f"Choose {label}.", key=letter)
    return call("press_key", "Nothing to choose.", key="ESC")


def _fight(view: View) -> str | None:
    hostile = [m for m in view.monsters if "peaceful" not in m.name and "your pet" not in m.name]
    if hostile:
        target = _near(view, hostile)
        return call("move_to", f"Attack the {target.name}.", x=target.pos[0], y=target.pos[1])
    return None


class Solution:
    """Base class: one instance per run."""

    def __call__(self, prompt: str, index: int) -> str:
        return self.decide(parse_view(prompt))

    def decide(self, view: View) -> str:  # pragma: no cover - abstract
        raise NotImplementedError


class BagSolution(Solution):
    def decide(self, view: View) -> str:
        if view.menu_prompt:
            if view.menu_prompt.startswith("Do what with"):
                marked = [letter for letter, _, m in view.menu if m]
                if "A" not in marked:
                    return call("press_key", "Put everything in at once.", key="A")
                return call("press_key", "Confirm.", key="ENTER")
            return _select_menu(view, lambda label: True)
        if view.things:
            target = _near(view, view.things)
            return call("pickup", "Collect everything first.", x=target.pos[0], y=target.pos[1])
        bag = view.letter("bag of holding")
        loose = [k for k, v in view.inventory.items() if "bag of holding" not in v]
        if bag and loose:
            return call("apply", "Open the bag to stash the objects.", item_letter=bag)
        return call("finish_task", "All objects are in the bag.")


class MultiPickupSolution(Solution):
    def decide(self, view: View) -> str:
        if view.menu_prompt:
            return _select_menu(view, lambda label: True)
        if view.find(""):
            return call("pickup", "The pile is at (8,2).", x=8, y=2)
        return call("finish_task", "The spot is empty.")


class WandSolution(Solution):
    def __init__(self):
        self.zapped = False

    def decide(self, view: View) -> str:
        statue = view.find("statue")
        if view.menu_prompt and "direction" in view.menu_prompt and statue:
            sx, sy = statue[0].pos
            x, y = view.pos
            key = {(0, -1): "k", (1, -1): "u", (1, 0): "l", (1, 1): "n", (0, 1): "j", (-1, 1): "b", (-1, 0): "h", (-1, -1): "y"}[
                ((sx > x) - (sx < x), (sy > y) - (sy < y))
            ]
            self.zapped = True
            return call("press_key", "Aim at the statue.", key=key)
        if view.menu_prompt:
            return call("press_key", "Close this.", key="ESC")
        if not statue or self.zapped:
            return call("finish_task", "The statue is gone.")
        wand = view.letter("wand")
        if wand is None:
            target = view.find("wand")[0]
            return call("pickup", "Get the wand first.", x=target.pos[0], y=target.pos[1])
        sx, sy = statue[0].pos
        spots = [(sx + dx, sy + dy) for dy in (-1, 0, 1) for dx in (-1, 0, 1) if (dx or dy)]
        spots = [p for p in spots if 1 <= p[0] <= 12 and 1 <= p[1] <= 4 and p != view.pos]
        x, y = view.pos
        if max(abs(sx - x), abs(sy - y)) != 1:
            spot = min(spots, key=lambda p: (max(abs(p[0] - x), abs(p[1] - y)), p[1], p[0]))
            return call("move_to", "Stand next to the statue.", x=spot[0], y=spot[1])
        return call("zap", "Zap the wand at the statue.", item_letter=wand)


class OrderedSolution(Solution):
    def __init__(self):
        self.read = False

    def _wands(self, view: View) -> list[str]:
        return [k for k, v in view.inventory.items() if "wand" in v]

    def decide(self, view: View) -> str:
        need_wands = len(self._wands(view)) < 2
        if view.menu_prompt:
            if "identify" in view.menu_prompt:
                return _pick_one(view, lambda label: "wand" in label)
            if need_wands:
                return _select_menu(view, lambda label: "wand" in label)
            return _select_menu(view, lambda label: "scroll of identify" in label)
        if need_wands:
            target = _near(view, view.find("wand"))
            return call("pickup", "Wands come first.", x=target.pos[0], y=target.pos[1])
        scroll = view.letter("scroll of identify")
        if scroll is None and not self.read:
            target = _near(view, view.find("scroll of identify"))
            return call("pickup", "Now the scroll.", x=target.pos[0], y=target.pos[1])
        if scroll is not None:
            self.read = True
            return call("read", "Read it to identify a wand.", item_letter=scroll)
        return call("finish_task", "Done in order.")


class UnorderedSolution(Solution):
    def __init__(self):
        self.drank = False

    def decide(self, view: View) -> str:
        if view.menu_prompt:
            if "fountain" in view.menu_prompt:
                self.drank = True
                return call("press_key", "Yes, drink.", key="y")
            if "direction" in view.menu_prompt:
                return call("press_key", "The closed door is east of me.", key="l")
            return call("press_key", "Never mind.", key="ESC")
        attack = _fight(view)
        if attack:
            return attack
        if "locked door at (9,2)" in view.blockers:
            return call("kick", "Kick the locked door open.", x=9, y=2)
        if "closed door at (9,5)" in view.blockers:
            if view.pos != (8, 5):
                return call("move_to", "Go next to the closed door.", x=8, y=5)
            return call("open", "Open the door.")
        if not self.drank:
            fountain = view.find("fountain")[0]
            if view.pos != fountain.pos:
                return call("move_to", "Walk onto the fountain.", x=fountain.pos[0], y=fountain.pos[1])
            return call("quaff", "Drink from the fountain.")
        return call("finish_task", "All four goals are done.")


class DrinkSolution(Solution):
    """Fountain first; a potion when there is none (or, for the alternative task, whichever is found)."""

    def __init__(self, prefer_fountain: bool):
        self.prefer_fountain = prefer_fountain
        self.done = False

    def decide(self, view: View) -> str:
        if view.menu_prompt:
            if "fountain" in view.menu_prompt:
                self.done = True
                return call("press_key", "Drink.", key="y")
            return _select_menu(view, lambda label: "potion" in label)
        if self.done:
            return call("finish_task", "I drank.")
        potion = view.letter("potion")
        if potion:
            self.done = True
            return call("quaff", "Drink the potion.", item_letter=potion)
        fountains = view.find("fountain")
        if fountains:
            f = fountains[0]
            if view.pos != f.pos:
                return call("move_to", "Walk to the fountain.", x=f.pos[0], y=f.pos[1])
            return call("quaff", "Drink from the fountain.")
        potions = view.find("potion")
        if potions and (not self.prefer_fountain or view.explored):
            p = _near(view, potions)
            return call("pickup", "Take the potion.", x=p.pos[0], y=p.pos[1])
        return call("explore_level", "Look for a fountain.")


class BoulderSolution(Solution):
    def __init__(self):
        self.cleared = False

    def decide(self, view: View) -> str:
        if view.menu_prompt:
            if "direction" in view.menu_prompt:
                self.cleared = True
                return call("press_key", "East, at the boulder.", key="l")
            return call("press_key", "Never mind.", key="ESC")
        if not self.cleared and "boulder at (12,3)" in view.blockers:
            pick = view.letter("pick-axe")
            if pick:
                self.cleared = True
                return call("apply", "Dig through the boulder.", item_letter=pick, x=12, y=3)
            wand = view.letter("wand of digging")
            if view.pos != (11, 3):
                return call("move_to", "Stand west of the boulder.", x=11, y=3)
            return call("zap", "Blast the boulder.", item_letter=wand)
        if not self.cleared and "boulder" not in view.blockers:
            return call("explore_level", "Find the way east.")
        if not (20 <= view.pos[0] <= 24):
            if not view.explored:
                return call("explore_level", "Uncover the path past the boulder.")
            return call("move_to", "Walk into the east room.", x=22, y=3)
        return call("finish_task", "I am in the east room.")


class EscapeSolution(Solution):
    def __init__(self):
        self.dug = False

    def decide(self, view: View) -> str:
        if view.menu_prompt:
            if "direction" in view.menu_prompt:
                self.dug = True
                return call("press_key", "Dig east through the brittle wall.", key="l")
            return call("press_key", "Never mind.", key="ESC")
        x, y = view.pos
        if x > 6:
            return call("finish_task", "I am out.")
        if not self.dug:
            if x != 5:
                return call("move_to", "Go to the east wall.", x=5, y=y)
            return call("zap", "Dig out.", item_letter=view.letter("wand of digging"))
        return call("move_to", "Step into the new tunnel.", x=x + 1, y=y)


class CarrySolution(Solution):
    def decide(self, view: View) -> str:
        if view.menu_prompt:
            return _select_menu(view, lambda label: "heavy iron ball" in label)
        sword = view.letter("long sword")
        if sword and "weapon in hand" not in view.inventory_notes.get(sword, ""):
            return call("wield", "Arm myself.", item_letter=sword)
        loose_ball = view.letter("heavy iron ball")
        if loose_ball:
            return call("put_in", "Balls are too heavy to carry loose.", item_letter=loose_ball)
        balls = view.find("heavy iron ball")
        if balls:
            b = _near(view, balls)
            return call("pickup", "Take a ball.", x=b.pos[0], y=b.pos[1])
        attack = _fight(view)
        if attack:
            return attack
        if not (29 <= view.pos[0] <= 33):
            if not view.explored:
                return call("explore_level", "Head east and find the goal room.")
            return call("move_to", "Carry the bag to the goal room.", x=31, y=3)
        return call("finish_task", "Both balls are in the goal room.")


SOLUTIONS: dict[str, Callable[[], Solution]] = {
    "bag": BagSolution,
    "guided-bag": BagSolution,
    "multipickup": MultiPickupSolution,
    "wand": WandSolution,
    "guided-wand": WandSolution,
    "ordered": OrderedSolution,
    "unordered": UnorderedSolution,
    "alternative": lambda: DrinkSolution(prefer_fountain=False),
    "conditional": lambda: DrinkSolution(prefer_fountain=True),
    "boulder": BoulderSolution,
    "focused-boulder": BoulderSolution,
    "guided-boulder": BoulderSolution,
    "escape": EscapeSolution,
    "hint-escape": EscapeSolution,
    "carry": CarrySolution,
    "guided-carry": CarrySolution,
}


def solution_backend(name: str) -> ScriptedBackend:
    """A fresh scripted backend that plays the hand-written solution for ``name``."""
    try:
        policy = SOLUTIONS[name]()
    except KeyError:
        raise KeyError(f"no scripted solution for scenario {name!r}") from None
    return ScriptedBackend([(always(), policy)], name=f"solution:{name}")
