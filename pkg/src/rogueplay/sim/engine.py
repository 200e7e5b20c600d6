"""Turn resolution for the roguelike engine.

:func:`step` mutates a :class:`GameState` in place and reports what happened.
Everything random goes through ``state.rng`` so that a seed plus an action
sequence always reproduces the same game.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

from . import actions as A
from .items import Item, ItemKind, article, make_item
from .monsters import MONSTERS, RANDOM_FORMS, WANDERING_KINDS, Attitude, Monster
from .state import (
    CARRY_CAPACITY,
    START_NUTRITION,
    GameState,
    Hunger,
    LevelMap,
    MenuEntry,
    MenuKind,
    MenuState,
    Status,
    xp_level_for,
)
from .tiles import (
    DIRECTION_KEYS,
    DIRECTIONS,
    DOORS,
    NEIGHBOR_DELTAS,
    OPAQUE,
    PASSABLE,
    Pos,
    TileKind,
    chebyshev,
    neighbors8,
)

log = logging.getLogger(__name__)

ILLNESS_LIMIT = 40
PRAYER_TIMEOUT = 500
PRAYER_PENALTY = 3
STARVATION_LIMIT = -100
REGEN_INTERVAL = 10
RAY_RANGE = 8
KICK_DOOR_CHANCE = 0.35
SEARCH_CHANCE = 1 / 3
MONSTER_SENSE_RANGE = 10
MAX_WANDERERS = 10
PLAYER_HIT_CHANCE = 0.8
PET_CARRY_LIMIT = 40


class GameOver(RuntimeError):
    """Raised when stepping a game that has already ended."""


class _Invalid(Exception):
    pass


@dataclass
class StepResult:
    messages: list[str] = field(default_factory=list)
    turn_delta: int = 0
    done: Status = Status.RUNNING
    invalid: bool = False


def step(state: GameState, action: A.Action) -> StepResult:
    """Resolve one player action and, if it took time, one world turn."""
    if state.done is not Status.RUNNING:
        raise GameOver(f"game already ended ({state.done.value})")
    msgs: list[str] = []
    turn_before = state.turn
    invalid = False
    try:
        if state.open_menu is not None:
            if not isinstance(action, (A.PressKey, A.TypeText)):
                raise _Invalid("A menu is open; answer it with a key or close it with ESC.")
            # menu input never advances the clock, even when it completes a command
            _menu_input(state, action, msgs)
            took_time = False
        else:
            handler = _HANDLERS.get(type(action))
            if handler is None:
                raise _Invalid(f"Unknown command {action.name}.")
            took_time = handler(state, action, msgs)
    except _Invalid as exc:
        msgs.append(str(exc))
        took_time = False
        invalid = True
    if took_time and state.done is Status.RUNNING:
        _advance_world(state, msgs)
    state.pending_messages = list(msgs)
    return StepResult(msgs, state.turn - turn_before, state.done, invalid)


# ---------------------------------------------------------------- helpers


def _target(state: GameState, direction: str) -> Pos:
    dx, dy = DIRECTIONS[direction]
    x, y = state.player.pos
    return x + dx, y + dy


def _die(state: GameState, cause: str, msgs: list[str]) -> None:
    if state.done is not Status.RUNNING:
        return
    state.done = Status.DEAD
    state.death_cause = cause
    state.open_menu = None
    msgs.append(f"You die... ({cause})")


def _gain_xp(state: GameState, amount: int, msgs: list[str]) -> None:
    p = state.player
    p.xp_points += amount
    new_level = xp_level_for(p.xp_points)
    while p.xp_level < new_level:
        p.xp_level += 1
        gain = state.rng.randint(1, 8)
        p.max_hp += gain
        p.hp += gain
        msgs.append(f"Welcome to experience level {p.xp_level}.")


def _kill_monster(state: GameState, lvl: LevelMap, m: Monster, msgs: list[str], killer: str | None = None) -> None:
    lvl.monsters.remove(m)
    for it in m.inventory:
        lvl.add_item(m.pos, it)
    m.inventory = []
    lvl.add_item(m.pos, make_item(f"{m.kind} corpse", state.new_id, turn=state.turn))
    state.record("killed", m.kind)
    if killer is None:
        msgs.append(f"You kill the {m.kind}!")
        _gain_xp(state, m.xp_value, msgs)
    else:
        msgs.append(f"The {killer} kills the {m.kind}.")


def _player_damage(state: GameState) -> int:
    p = state.player
    for it in p.inventory:
        if it.id == p.wielded and it.damage:
            return it.damage
    if p.form:
        return max(2, MONSTERS[p.form].damage)
    return 2


def _player_attack(state: GameState, m: Monster, msgs: list[str], damage: int | None = None) -> None:
    if m.attitude is Attitude.PEACEFUL:
        m.attitude = Attitude.HOSTILE
    if damage is None:
        if state.rng.random() >= PLAYER_HIT_CHANCE:
            msgs.append(f"You miss the {m.kind}.")
            return
        damage = state.rng.randint(1, _player_damage(state))
    m.hp -= damage
    if m.hp <= 0:
        _kill_monster(state, state.level, m, msgs)
    else:
        msgs.append(f"You hit the {m.kind}.")


def _describe_here(state: GameState, msgs: list[str]) -> None:
    lvl, pos = state.level, state.player.pos
    pile = lvl.items_at(pos)
    if len(pile) == 1:
        msgs.append(f"You see here {article(pile[0].display_name)}.")
    elif pile:
        msgs.append("There are several objects here.")
    if pos in lvl.engravings:
        msgs.append("Something is written here in the dust.")
    kind = lvl.kind(pos)
    if kind in (TileKind.FOUNTAIN, TileKind.ALTAR, TileKind.STAIRS_DOWN, TileKind.STAIRS_UP):
        msgs.append(f"There is {article(kind.value)} here.")


def _take(state: GameState, item: Item, msgs: list[str]) -> bool:
    p = state.player
    lvl = state.level
    if item.kind is ItemKind.GOLD:
        lvl.remove_item(p.pos, item)
        p.gold += item.amount
        msgs.append(f"{item.display_name}.")
        state.record("pickup", "gold")
        return True
    letter = p.free_letter()
    if letter is None:
        msgs.append("You have too many items to pick that up.")
        return False
    lvl.remove_item(p.pos, item)
    item.letter = letter
    p.inventory.append(item)
    msgs.append(f"{letter} - {article(item.display_name)}.")
    state.record("pickup", item.name)
    return True


def _inv(state: GameState, letter: str) -> Item:
    item = state.player.item(letter)
    if item is None:
        raise _Invalid("You don't have that object.")
    return item


def _remove_from_inventory(state: GameState, item: Item) -> None:
    p = state.player
    p.inventory.remove(item)
    if p.wielded == item.id:
        p.wielded = None
    p.worn.discard(item.id)
    item.letter = None


def _open_menu(state: GameState, kind: MenuKind, prompt: str, **kw) -> None:
    state.open_menu = MenuState(kind, prompt, **kw)


def _free_tiles(state: GameState, lvl: LevelMap, exclude_player: bool = True) -> list[Pos]:
    occupied = {m.pos for m in lvl.monsters}
    if exclude_player and lvl is state.level:
        occupied.add(state.player.pos)
    return [p for p in lvl.positions() if lvl.kind(p) in PASSABLE and p not in occupied]


def _teleport_player(state: GameState, msgs: list[str]) -> None:
    tiles = _free_tiles(state, state.level)
    if not tiles:
        msgs.append("You feel a wrenching sensation.")
        return
    state.player.pos = state.rng.choice(tiles)
    msgs.append("You feel disoriented for a moment.")
    _describe_here(state, msgs)


def _is_phasing(state: GameState) -> bool:
    form = state.player.form
    return bool(form and MONSTERS[form].phasing)


# ---------------------------------------------------------------- commands


def _move(state: GameState, a: A.Move, msgs: list[str]) -> bool:
    if a.direction not in DIRECTIONS:
        raise _Invalid(f"Unknown direction {a.direction}.")
    lvl, p = state.level, state.player
    target = _target(state, a.direction)
    if not lvl.in_bounds(target):
        raise _Invalid("You can't move there.")
    m = lvl.monster_at(target)
    if m is not None:
        if m.attitude is Attitude.HOSTILE:
            _player_attack(state, m, msgs)
            return True
        if m.attitude is Attitude.PEACEFUL:
            _open_menu(
                state,
                MenuKind.CONFIRM_PROMPT,
                f"Really attack the {m.kind}? [yn]",
                context={"cmd": "attack", "monster": m.id},
            )
            msgs.append(f"Really attack the {m.kind}? [yn]")
            return False
        m.pos, p.pos = p.pos, target
        msgs.append(f"You swap places with your {m.kind}.")
        _describe_here(state, msgs)
        return True
    kind = lvl.kind(target)
    phasing = _is_phasing(state) and kind in (TileKind.WALL, TileKind.STONE, TileKind.DOOR_CLOSED, TileKind.DOOR_LOCKED)
    if kind not in PASSABLE and not phasing:
        raise _Invalid(
            {
                TileKind.WALL: "It's a wall.",
                TileKind.STONE: "It's solid stone.",
                TileKind.DOOR_CLOSED: "The door is closed.",
                TileKind.DOOR_LOCKED: "This door is locked.",
                TileKind.BOULDER: "You try to move the boulder, but in vain.",
            }.get(kind, "You can't move there.")
        )
    if p.carried_weight() > CARRY_CAPACITY:
        raise _Invalid("You can't even move a handspan with this load!")
    p.pos = target
    _describe_here(state, msgs)
    return True


def _pickup(state: GameState, a: A.Pickup, msgs: list[str]) -> bool:
    pile = state.level.items_at(state.player.pos)
    if not pile:
        raise _Invalid("There is nothing here to pick up.")
    if len(pile) == 1:
        return _take(state, pile[0], msgs)
    entries = [MenuEntry(chr(ord("a") + i), article(it.display_name), ref=it.id) for i, it in enumerate(pile)]
    _open_menu(state, MenuKind.PICKUP_MULTI, "Pick up what?", entries=entries)
    msgs.append("Pick up what?")
    return False


def _drop(state: GameState, a: A.Drop, msgs: list[str]) -> bool:
    item = _inv(state, a.letter)
    _remove_from_inventory(state, item)
    state.level.add_item(state.player.pos, item)
    msgs.append(f"You drop {article(item.display_name)}.")
    state.record("drop", item.name)
    return True


def _wield(state: GameState, a: A.Wield, msgs: list[str]) -> bool:
    item = _inv(state, a.letter)
    state.player.wielded = item.id
    msgs.append(f"{item.letter} - {article(item.display_name)} (weapon in hand).")
    return True


def _consume_food(state: GameState, item: Item, msgs: list[str]) -> None:
    p = state.player
    if item.kind is ItemKind.FOOD_RATION:
        p.nutrition += 800
        msgs.append("This food really hits the spot!")
    elif item.is_rotten(state.turn):
        msgs.append("Ulch - that meat was tainted! You feel deathly sick.")
        p.status.add("Ill")
        p.ill_since = state.turn
    else:
        p.nutrition += MONSTERS[item.monster].nutrition
        msgs.append(f"This {item.name} tastes terrible!")
    state.record("ate", item.name)


def _eat(state: GameState, a: A.Eat, msgs: list[str]) -> bool:
    if a.letter is None:
        food = [i for i in state.level.items_at(state.player.pos) if i.is_food()]
        if not food:
            raise _Invalid("There is nothing here to eat.")
        prompt = f"There is {article(food[0].display_name)} here; eat it? [yn]"
        _open_menu(state, MenuKind.CONFIRM_PROMPT, prompt, context={"cmd": "eat_floor", "item": food[0].id})
        msgs.append(prompt)
        return False
    item = _inv(state, a.letter)
    if not item.is_food():
        raise _Invalid("You cannot eat that!")
    _remove_from_inventory(state, item)
    _consume_food(state, item, msgs)
    return True


def _drink_fountain(state: GameState, msgs: list[str]) -> None:
    state.player.nutrition += 10
    msgs.append("The cool draught refreshes you.")
    state.record("drank", "fountain")


def _quaff(state: GameState, a: A.Quaff, msgs: list[str]) -> bool:
    p = state.player
    if a.letter is None:
        if state.level.kind(p.pos) is not TileKind.FOUNTAIN:
            raise _Invalid("There is no fountain here.")
        _open_menu(state, MenuKind.CONFIRM_PROMPT, "Drink from the fountain? [yn]", context={"cmd": "quaff_fountain"})
        msgs.append("Drink from the fountain? [yn]")
        return False
    item = _inv(state, a.letter)
    if item.kind is not ItemKind.POTION:
        raise _Invalid("That is a silly thing to drink.")
    _remove_from_inventory(state, item)
    effect = item.effect
    if effect == "healing":
        p.hp = p.hp + 8 if p.hp + 8 <= p.max_hp else p.max_hp + (1 if p.hp == p.max_hp else 0)
        p.max_hp = max(p.max_hp, p.hp)
        msgs.append("You feel better.")
    elif effect == "extra healing":
        p.max_hp += 2 if p.hp + 20 > p.max_hp else 0
        p.hp = min(p.max_hp, p.hp + 20)
        msgs.append("You feel much better.")
    elif effect == "fruit juice":
        p.nutrition += 20
        msgs.append("This tastes like fruit juice.")
    elif effect == "see invisible":
        msgs.append("This tastes like slime mold juice.")
    else:
        msgs.append("This tastes like water.")
    state.record("drank", item.name)
    return True


def _zap(state: GameState, a: A.Zap, msgs: list[str]) -> bool:
    item = _inv(state, a.letter)
    if item.kind is not ItemKind.WAND:
        raise _Invalid("That is a silly thing to zap.")
    if a.direction is None:
        _open_menu(state, MenuKind.DIRECTION_PROMPT, "In what direction?", context={"cmd": "zap", "item": item.id})
        msgs.append("In what direction?")
        return False
    _zap_wand(state, item, a.direction, msgs)
    return True


def _zap_wand(state: GameState, wand: Item, direction: str, msgs: list[str]) -> None:
    if wand.charges <= 0:
        msgs.append("Nothing happens.")
        return
    wand.charges -= 1
    state.record("zapped", wand.name)
    p, lvl, effect = state.player, state.level, wand.effect
    if direction == "self":
        if effect == "teleportation":
            _teleport_player(state, msgs)
        elif effect == "polymorph":
            if p.wears("polymorph control"):
                prompt = "Become what kind of monster? [type the name]"
                _open_menu(state, MenuKind.TEXT_ENTRY, prompt, context={"cmd": "polyself"})
                msgs.append(prompt)
            else:
                _polymorph_player(state, state.rng.choice(RANDOM_FORMS), msgs)
        elif effect == "striking":
            p.hp -= 4
            msgs.append("You bash yourself!")
            if p.hp <= 0:
                _die(state, "killed by a wand of striking", msgs)
        elif effect == "digging":
            msgs.append("You dig a pit in the floor.")
        return

    dx, dy = DIRECTIONS[direction]
    x, y = p.pos
    dug = False
    for _ in range(RAY_RANGE):
        x, y = x + dx, y + dy
        pos = (x, y)
        if not lvl.in_bounds(pos):
            break
        kind = lvl.kind(pos)
        if effect == "digging":
            if kind in (TileKind.WALL, TileKind.STONE):
                if pos in lvl.nondiggable:
                    msgs.append(f"The {kind.value} here is too hard to dig in.")
                    break
                lvl.set_kind(pos, TileKind.CORRIDOR)
                lvl.hidden.pop(pos, None)
                dug = True
            elif kind in (TileKind.BOULDER, TileKind.STATUE):
                _shatter(state, lvl, pos, msgs)
            elif kind in (TileKind.DOOR_CLOSED, TileKind.DOOR_LOCKED):
                lvl.set_kind(pos, TileKind.DOOR_OPEN)
                msgs.append("The door is razed!")
            continue
        m = lvl.monster_at(pos)
        if m is not None:
            _ray_hits_monster(state, lvl, m, effect, msgs)
            break
        if kind in (TileKind.BOULDER, TileKind.STATUE) and effect == "striking":
            _shatter(state, lvl, pos, msgs)
            break
        if kind in OPAQUE:
            if effect == "striking":
                msgs.append("Boing!")
            break
    if dug:
        msgs.append("You dig through the rock.")


def _shatter(state: GameState, lvl: LevelMap, pos: Pos, msgs: list[str]) -> None:
    kind = lvl.kind(pos)
    lvl.set_kind(pos, lvl.under.pop(pos, TileKind.FLOOR))
    lvl.add_item(pos, make_item("rock", state.new_id))
    msgs.append(f"KADOOM! The {kind.value} falls apart." if kind is TileKind.BOULDER else f"The {kind.value} shatters!")
    state.record("destroyed", kind.value)


def _ray_hits_monster(state: GameState, lvl: LevelMap, m: Monster, effect: str, msgs: list[str]) -> None:
    if effect == "striking":
        msgs.append(f"The wand hits the {m.kind}!")
        m.hp -= 12
        if m.attitude is Attitude.PEACEFUL:
            m.attitude = Attitude.HOSTILE
        if m.hp <= 0:
            _kill_monster(state, lvl, m, msgs)
    elif effect == "teleportation":
        tiles = _free_tiles(state, lvl)
        if tiles:
            m.pos = state.rng.choice(tiles)
            msgs.append(f"The {m.kind} vanishes!")
    elif effect == "polymorph":
        new_kind = state.rng.choice([k.name for k in WANDERING_KINDS])
        msgs.append(f"The {m.kind} turns into {article(new_kind)}!")
        info = MONSTERS[new_kind]
        m.kind, m.hp, m.max_hp, m.xp_value = new_kind, info.hp, info.hp, info.xp


def _polymorph_player(state: GameState, form: str, msgs: list[str]) -> None:
    state.player.form = form
    msgs.append(f"You turn into {article(form)}!")
    state.record("polymorphed", form)


def _apply(state: GameState, a: A.Apply, msgs: list[str]) -> bool:
    item = _inv(state, a.letter)
    if item.kind is ItemKind.BAG_OF_HOLDING:
        entries = [
            MenuEntry("o", "Take something out", ref=1),
            MenuEntry("i", "Put something in", ref=2),
            MenuEntry("A", "Put in all items automatically", ref=3),
        ]
        _open_menu(
            state,
            MenuKind.CONTAINER_LOOT,
            f"Do what with the {item.name}?",
            entries=entries,
            context={"stage": "action", "bag": item.id},
            single=True,
        )
        msgs.append(f"Do what with the {item.name}?")
        return False
    if item.kind is not ItemKind.PICKAXE:
        raise _Invalid("Sorry, I don't know how to use that.")
    if a.direction is None:
        _open_menu(state, MenuKind.DIRECTION_PROMPT, "In what direction do you want to dig?", context={"cmd": "apply", "item": item.id})
        msgs.append("In what direction do you want to dig?")
        return False
    _dig(state, item, a.direction, msgs)
    return True


def _dig(state: GameState, pick: Item, direction: str, msgs: list[str]) -> None:
    state.player.wielded = pick.id
    if direction == "self":
        msgs.append("You dig a pit in the floor.")
        return
    lvl = state.level
    pos = _target(state, direction)
    if not lvl.in_bounds(pos):
        msgs.append("You swing your pick-axe through thin air.")
        return
    kind = lvl.kind(pos)
    if kind in (TileKind.WALL, TileKind.STONE):
        if pos in lvl.nondiggable:
            msgs.append(f"The {kind.value} here is too hard to dig in.")
            return
        lvl.set_kind(pos, TileKind.CORRIDOR)
        lvl.hidden.pop(pos, None)
        msgs.append(f"You dig through the {kind.value}.")
    elif kind in (TileKind.BOULDER, TileKind.STATUE):
        _shatter(state, lvl, pos, msgs)
    elif kind in (TileKind.DOOR_CLOSED, TileKind.DOOR_LOCKED):
        msgs.append("Your pick-axe bounces off the door.")
    else:
        msgs.append("You swing your pick-axe through thin air.")


def _read(state: GameState, a: A.Read, msgs: list[str]) -> bool:
    item = _inv(state, a.letter)
    if item.kind is not ItemKind.SCROLL:
        raise _Invalid("That is a silly thing to read.")
    _remove_from_inventory(state, item)
    state.record("read", item.name)
    if item.effect == "identify":
        msgs.append("This is an identify scroll.")
        unknown = [i for i in state.player.inventory if not i.identified]
        if not unknown:
            msgs.append("You have already identified all of your possessions.")
            return True
        entries = [MenuEntry(i.letter, article(i.display_name), ref=i.id) for i in unknown]
        _open_menu(state, MenuKind.ITEM_SELECT, "What would you like to identify first?", entries=entries, context={"cmd": "identify"}, single=True)
        msgs.append("What would you like to identify first?")
    elif item.effect == "teleportation":
        _teleport_player(state, msgs)
    else:
        msgs.append("This scroll seems to be blank.")
    return True


def _put_on(state: GameState, a: A.PutOn, msgs: list[str]) -> bool:
    item = _inv(state, a.letter)
    if item.kind is not ItemKind.RING:
        raise _Invalid("You cannot put that on.")
    if item.id in state.player.worn:
        raise _Invalid("You are already wearing that!")
    state.player.worn.add(item.id)
    msgs.append(f"{item.letter} - {article(item.display_name)} (on left hand).")
    return True


def _bag(state: GameState) -> Item | None:
    for it in state.player.inventory:
        if it.kind is ItemKind.BAG_OF_HOLDING:
            return it
    return None


def _stash(state: GameState, bag: Item, item: Item, msgs: list[str]) -> None:
    _remove_from_inventory(state, item)
    bag.contents.append(item)
    msgs.append(f"You put {article(item.display_name)} into the {bag.name}.")
    state.record("stash", item.name)


def _put_in(state: GameState, a: A.PutIn, msgs: list[str]) -> bool:
    item = _inv(state, a.letter)
    bag = _bag(state)
    if bag is None:
        raise _Invalid("You have no container to put things in.")
    if item.kind is ItemKind.BAG_OF_HOLDING:
        raise _Invalid("You cannot put a bag of holding into another container.")
    _stash(state, bag, item, msgs)
    return True


def _pray(state: GameState, a: A.Pray, msgs: list[str]) -> bool:
    p = state.player
    msgs.append("You begin praying to your god.")
    state.record("prayed", "")
    if p.prayer_cooldown == 0:
        p.hp = p.max_hp
        p.status.discard("Ill")
        p.ill_since = None
        p.nutrition = max(p.nutrition, START_NUTRITION)
        p.prayer_cooldown = PRAYER_TIMEOUT
        msgs.append("You feel a hopeful feeling. You feel much better.")
    else:
        p.prayer_cooldown = PRAYER_TIMEOUT
        p.hp -= PRAYER_PENALTY
        msgs.append("You feel that your god is displeased.")
        if p.hp <= 0:
            _die(state, "killed by divine wrath", msgs)
    return True


def _search(state: GameState, a: A.Search, msgs: list[str]) -> bool:
    lvl = state.level
    for n in neighbors8(state.player.pos, lvl.width, lvl.height):
        if n in lvl.hidden and state.rng.random() < SEARCH_CHANCE:
            kind = lvl.hidden.pop(n)
            lvl.set_kind(n, kind)
            msgs.append("You find a hidden door." if kind in (TileKind.DOOR_CLOSED, TileKind.DOOR_OPEN) else "You find a hidden passage.")
    return True


def _direction_cmd(state: GameState, cmd: str, direction: str | None, msgs: list[str]) -> bool:
    if direction is None:
        _open_menu(state, MenuKind.DIRECTION_PROMPT, "In what direction?", context={"cmd": cmd})
        msgs.append("In what direction?")
        return False
    if direction == "self":
        raise _Invalid("You can't do that to yourself.")
    return {"open": _open_door, "close": _close_door, "kick": _kick}[cmd](state, direction, msgs)


def _open_door(state: GameState, direction: str, msgs: list[str]) -> bool:
    lvl, pos = state.level, _target(state, direction)
    kind = lvl.kind(pos) if lvl.in_bounds(pos) else None
    if kind is TileKind.DOOR_CLOSED:
        lvl.set_kind(pos, TileKind.DOOR_OPEN)
        msgs.append("The door opens.")
        state.record("opened door", f"{pos[0]},{pos[1]}")
        return True
    if kind is TileKind.DOOR_LOCKED:
        msgs.append("This door is locked.")
        return False
    if kind is TileKind.DOOR_OPEN:
        raise _Invalid("This door is already open.")
    raise _Invalid("You see no door there.")


def _close_door(state: GameState, direction: str, msgs: list[str]) -> bool:
    lvl, pos = state.level, _target(state, direction)
    if not lvl.in_bounds(pos) or lvl.kind(pos) is not TileKind.DOOR_OPEN:
        raise _Invalid("You see no open door there.")
    if lvl.monster_at(pos) or lvl.items_at(pos):
        raise _Invalid("Something's in the way.")
    lvl.set_kind(pos, TileKind.DOOR_CLOSED)
    msgs.append("The door closes.")
    return True


def _kick(state: GameState, direction: str, msgs: list[str]) -> bool:
    lvl, pos = state.level, _target(state, direction)
    if not lvl.in_bounds(pos):
        raise _Invalid("You kick at empty space.")
    m = lvl.monster_at(pos)
    if m is not None:
        msgs.append(f"You kick the {m.kind}.")
        _player_attack(state, m, msgs, damage=2)
        return True
    kind = lvl.kind(pos)
    if kind in (TileKind.DOOR_CLOSED, TileKind.DOOR_LOCKED):
        if state.rng.random() < KICK_DOOR_CHANCE:
            lvl.set_kind(pos, TileKind.DOOR_OPEN)
            msgs.append("WHAMM!! The door crashes open!")
            state.record("opened door", f"{pos[0]},{pos[1]}")
        else:
            msgs.append("WHAMM!!")
    elif kind is TileKind.BOULDER:
        msgs.append("WHAMM! The boulder doesn't budge.")
    elif kind in (TileKind.WALL, TileKind.STONE):
        msgs.append("Ouch! That hurts!")
    else:
        msgs.append("You kick at empty space.")
    return True


def _open(state, a: A.Open, msgs):
    return _direction_cmd(state, "open", a.direction, msgs)


def _close(state, a: A.Close, msgs):
    return _direction_cmd(state, "close", a.direction, msgs)


def _kick_action(state, a: A.Kick, msgs):
    return _direction_cmd(state, "kick", a.direction, msgs)


def _find_tile(lvl: LevelMap, kind: TileKind) -> Pos | None:
    for pos in lvl.positions():
        if lvl.kind(pos) is kind:
            return pos
    return None


def _change_level(state: GameState, new_depth: int, arrive_on: TileKind, msgs: list[str]) -> None:
    p = state.player
    old = state.level
    pets = [m for m in old.monsters if m.attitude is Attitude.PET and chebyshev(m.pos, p.pos) <= 1]
    for m in pets:
        old.monsters.remove(m)
    p.depth = new_depth
    lvl = state.level
    p.pos = _find_tile(lvl, arrive_on) or state.rng.choice(_free_tiles(state, lvl, exclude_player=False))
    p.max_depth = max(p.max_depth, new_depth)
    squatter = lvl.monster_at(p.pos)
    if squatter is not None:
        # whoever stood on the arrival tile steps aside, or is displaced to any free tile
        spots = [n for n in neighbors8(p.pos, lvl.width, lvl.height) if lvl.passable(n) and not lvl.monster_at(n)]
        squatter.pos = spots[0] if spots else state.rng.choice(_free_tiles(state, lvl))
    for m in pets:
        spots = [n for n in neighbors8(p.pos, lvl.width, lvl.height) if lvl.passable(n) and not lvl.monster_at(n)]
        if spots:
            m.pos = spots[0]
            lvl.monsters.append(m)
    state.record("depth", str(new_depth))
    _describe_here(state, msgs)


def _go_down(state: GameState, a: A.GoDown, msgs: list[str]) -> bool:
    p = state.player
    if state.level.kind(p.pos) is not TileKind.STAIRS_DOWN:
        raise _Invalid("You can't go down here.")
    if p.depth >= len(state.levels):
        raise _Invalid("The stairs lead nowhere.")
    _change_level(state, p.depth + 1, TileKind.STAIRS_UP, msgs)
    return True


def _go_up(state: GameState, a: A.GoUp, msgs: list[str]) -> bool:
    p = state.player
    if state.level.kind(p.pos) is not TileKind.STAIRS_UP:
        raise _Invalid("You can't go up here.")
    if p.depth == 1:
        if state.full_game and any(i.kind is ItemKind.AMULET for i in p.inventory):
            state.done = Status.WON
            msgs.append("You escape the dungeon with the Amulet of Yendor!")
            return False
        raise _Invalid("You cannot leave the dungeon without the Amulet of Yendor.")
    _change_level(state, p.depth - 1, TileKind.STAIRS_DOWN, msgs)
    return True


def _engrave(state: GameState, a: A.Engrave, msgs: list[str]) -> bool:
    if a.text is None:
        prompt = "What do you want to write in the dust here?"
        _open_menu(state, MenuKind.TEXT_ENTRY, prompt, context={"cmd": "engrave"})
        msgs.append(prompt)
        return False
    state.level.engravings[state.player.pos] = a.text
    msgs.append("You write in the dust with your fingertip.")
    return True


def _read_floor(state: GameState, a: A.ReadFloor, msgs: list[str]) -> bool:
    text = state.level.engravings.get(state.player.pos)
    if text is None:
        raise _Invalid("You don't see anything written here.")
    msgs.append(f'Something is written here in the dust. You read: "{text}".')
    state.record("read", "engraving")
    return False


def _pay(state, a, msgs):
    msgs.append("You do not owe anyone anything.")
    return False


def _cast(state, a, msgs):
    msgs.append("You don't know any spells right now.")
    return False


def _wait(state, a, msgs):
    return True


def _no_menu(state, a, msgs):
    raise _Invalid("No menu is open.")


_HANDLERS = {
    A.Move: _move,
    A.Kick: _kick_action,
    A.Pickup: _pickup,
    A.Drop: _drop,
    A.Wield: _wield,
    A.Eat: _eat,
    A.Quaff: _quaff,
    A.Zap: _zap,
    A.Apply: _apply,
    A.Read: _read,
    A.PutOn: _put_on,
    A.PutIn: _put_in,
    A.Pray: _pray,
    A.Search: _search,
    A.Open: _open,
    A.Close: _close,
    A.GoUp: _go_up,
    A.GoDown: _go_down,
    A.Engrave: _engrave,
    A.ReadFloor: _read_floor,
    A.Pay: _pay,
    A.Cast: _cast,
    A.Wait: _wait,
    A.PressKey: _no_menu,
    A.TypeText: _no_menu,
}

# ---------------------------------------------------------------- menus


def _menu_input(state: GameState, action: A.Action, msgs: list[str]) -> bool:
    menu = state.open_menu
    assert menu is not None
    if isinstance(action, A.TypeText):
        if menu.kind is not MenuKind.TEXT_ENTRY:
            raise _Invalid("This prompt does not accept text.")
        state.open_menu = None
        return _commit_text(state, menu, action.text, msgs)
    key = action.key
    if key == "ESC":
        state.open_menu = None
        msgs.append("Never mind.")
        return False
    if menu.kind is MenuKind.DIRECTION_PROMPT:
        state.open_menu = None
        if key == "s":
            direction = "self"
        elif key in DIRECTION_KEYS:
            direction = DIRECTION_KEYS[key]
        else:
            msgs.append("What a strange direction!")
            return False
        return _run_deferred(state, menu.context, direction, msgs)
    if menu.kind is MenuKind.CONFIRM_PROMPT:
        state.open_menu = None
        if key != "y":
            msgs.append("Never mind.")
            return False
        return _run_confirmed(state, menu.context, msgs)
    if menu.kind is MenuKind.TEXT_ENTRY:
        if key == "ENTER":
            state.open_menu = None
            return _commit_text(state, menu, menu.buffer, msgs)
        menu.buffer += " " if key == "SPACE" else key
        return False
    # selection menus
    if key == "ENTER":
        state.open_menu = None
        return _commit_selection(state, menu, msgs)
    for entry in menu.entries:
        if entry.letter == key:
            if menu.single:
                for other in menu.entries:
                    if other is not entry:
                        other.marked = False
            entry.marked = not entry.marked
            break
    return False


def _run_deferred(state: GameState, ctx: dict, direction: str, msgs: list[str]) -> bool:
    cmd = ctx["cmd"]
    if cmd in ("zap", "apply"):
        item = next((i for i in state.player.inventory if i.id == ctx["item"]), None)
        if item is None:
            msgs.append("You no longer have that object.")
            return False
        if cmd == "zap":
            _zap_wand(state, item, direction, msgs)
        else:
            _dig(state, item, direction, msgs)
        return True
    try:
        return _direction_cmd(state, cmd, direction, msgs)
    except _Invalid as exc:
        msgs.append(str(exc))
        return False


def _run_confirmed(state: GameState, ctx: dict, msgs: list[str]) -> bool:
    cmd = ctx["cmd"]
    lvl = state.level
    if cmd == "attack":
        m = next((m for m in lvl.monsters if m.id == ctx["monster"]), None)
        if m is None or chebyshev(m.pos, state.player.pos) > 1:
            msgs.append("You attack thin air.")
            return True
        _player_attack(state, m, msgs)
        return True
    if cmd == "quaff_fountain":
        _drink_fountain(state, msgs)
        return True
    if cmd == "eat_floor":
        item = next((i for i in lvl.items_at(state.player.pos) if i.id == ctx["item"]), None)
        if item is None:
            msgs.append("There is nothing here to eat.")
            return False
        lvl.remove_item(state.player.pos, item)
        _consume_food(state, item, msgs)
        return True
    return False


def _commit_text(state: GameState, menu: MenuState, text: str, msgs: list[str]) -> bool:
    cmd = menu.context.get("cmd")
    if cmd == "engrave":
        state.level.engravings[state.player.pos] = text
        msgs.append("You write in the dust with your fingertip.")
        return True
    if cmd == "polyself":
        name = text.strip().lower()
        if name in MONSTERS:
            _polymorph_player(state, name, msgs)
        else:
            msgs.append("You feel a little strange.")
        return False
    return False


def _commit_selection(state: GameState, menu: MenuState, msgs: list[str]) -> bool:
    marked = [e for e in menu.entries if e.marked]
    if not marked:
        msgs.append("Never mind.")
        return False
    p, lvl = state.player, state.level
    if menu.kind is MenuKind.PICKUP_MULTI:
        ids = {e.ref for e in marked}
        took = False
        for item in [i for i in lvl.items_at(p.pos) if i.id in ids]:
            took = _take(state, item, msgs) or took
        return took
    if menu.kind is MenuKind.ITEM_SELECT:
        item = next((i for i in p.inventory if i.id == marked[0].ref), None)
        if item is not None:
            item.identified = True
            msgs.append(f"{item.letter} - {article(item.display_name)}.")
            state.record("identified", item.name)
        return False
    # container
    bag = next((i for i in p.inventory if i.id == menu.context["bag"]), None)
    if bag is None:
        msgs.append("You no longer have the bag.")
        return False
    stage = menu.context["stage"]
    if stage == "action":
        option = marked[0].ref
        if option == 3:
            items = [i for i in p.inventory if i.kind is not ItemKind.BAG_OF_HOLDING]
            if not items:
                msgs.append("You have nothing to put in.")
                return False
            for item in items:
                _stash(state, bag, item, msgs)
            return True
        if option == 2:
            items = [i for i in p.inventory if i.kind is not ItemKind.BAG_OF_HOLDING]
            entries = [MenuEntry(i.letter, article(i.display_name), ref=i.id) for i in items]
            stage_name, prompt = "put", "Put in what?"
        else:
            entries = [MenuEntry(chr(ord("a") + n), article(i.display_name), ref=i.id) for n, i in enumerate(bag.contents)]
            stage_name, prompt = "take", "Take out what?"
        if not entries:
            msgs.append("There is nothing to choose from.")
            return False
        _open_menu(state, MenuKind.CONTAINER_LOOT, prompt, entries=entries, context={"stage": stage_name, "bag": bag.id})
        msgs.append(prompt)
        return False
    ids = {e.ref for e in marked}
    if stage == "put":
        for item in [i for i in p.inventory if i.id in ids]:
            _stash(state, bag, item, msgs)
        return True
    for item in [i for i in bag.contents if i.id in ids]:
        letter = p.free_letter()
        if letter is None:
            msgs.append("You have too many items.")
            break
        bag.contents.remove(item)
        item.letter = letter
        p.inventory.append(item)
        msgs.append(f"{letter} - {article(item.display_name)}.")
    return True


# ---------------------------------------------------------------- world turn


_HUNGER_NEWS = {
    Hunger.HUNGRY: "You are beginning to feel hungry.",
    Hunger.WEAK: "You are beginning to feel weak.",
    Hunger.STARVING: "You are fainting from lack of food.",
}


def _advance_world(state: GameState, msgs: list[str]) -> None:
    state.turn += 1
    p = state.player
    before = p.hunger
    p.nutrition -= 1
    after = p.hunger
    if after > before and after in _HUNGER_NEWS:
        msgs.append(_HUNGER_NEWS[after])
    if p.nutrition <= STARVATION_LIMIT:
        _die(state, "starvation", msgs)
        return
    if "Ill" in p.status and p.ill_since is not None and state.turn - p.ill_since >= ILLNESS_LIMIT:
        _die(state, "illness", msgs)
        return
    if p.prayer_cooldown > 0:
        p.prayer_cooldown -= 1
    if p.hp < p.max_hp and (state.turn % REGEN_INTERVAL == 0 or p.wears("regeneration")):
        p.hp += 1
    _monsters_act(state, msgs)
    if state.spawn_chance > 0 and state.done is Status.RUNNING:
        _spawn(state)


def _monster_moves(state: GameState, lvl: LevelMap, m: Monster) -> list[Pos]:
    occupied = {o.pos for o in lvl.monsters}
    occupied.add(state.player.pos)
    return [n for n in neighbors8(m.pos, lvl.width, lvl.height) if lvl.kind(n) in PASSABLE and n not in occupied]


def _step_toward(state: GameState, lvl: LevelMap, m: Monster, goal: Pos) -> None:
    moves = _monster_moves(state, lvl, m)
    if not moves:
        return
    cur = chebyshev(m.pos, goal)
    best = min(moves, key=lambda n: (chebyshev(n, goal), (n[0] - goal[0]) ** 2 + (n[1] - goal[1]) ** 2))
    if chebyshev(best, goal) <= cur:
        m.pos = best


def _wander(state: GameState, lvl: LevelMap, m: Monster, chance: float) -> None:
    if state.rng.random() < chance:
        moves = _monster_moves(state, lvl, m)
        if moves:
            m.pos = state.rng.choice(moves)


def _monsters_act(state: GameState, msgs: list[str]) -> None:
    lvl, p = state.level, state.player
    for m in sorted(lvl.monsters, key=lambda m: m.id):
        if state.done is not Status.RUNNING:
            return
        if m not in lvl.monsters:
            continue
        info = m.info
        dist = chebyshev(m.pos, p.pos)
        if m.attitude is Attitude.HOSTILE:
            if dist <= 1:
                if info.damage > 0 and state.rng.random() < min(0.9, 0.6 + 0.05 * info.difficulty):
                    p.hp -= state.rng.randint(1, info.damage)
                    msgs.append(f"The {m.kind} {info.verb}!")
                    if p.hp <= 0:
                        _die(state, f"killed by {article(m.kind)}", msgs)
                elif info.damage > 0:
                    msgs.append(f"The {m.kind} misses.")
            elif info.stationary:
                continue
            elif dist <= MONSTER_SENSE_RANGE:
                _step_toward(state, lvl, m, p.pos)
            else:
                _wander(state, lvl, m, 1 / 3)
        elif m.attitude is Attitude.PEACEFUL:
            if not info.stationary:
                _wander(state, lvl, m, 1 / 3)
        else:
            _pet_act(state, lvl, m, dist, msgs)


def _pet_act(state: GameState, lvl: LevelMap, m: Monster, dist: int, msgs: list[str]) -> None:
    for o in sorted(lvl.monsters, key=lambda o: o.id):
        if o.attitude is Attitude.HOSTILE and chebyshev(o.pos, m.pos) <= 1:
            o.hp -= m.info.damage
            if o.hp <= 0:
                _kill_monster(state, lvl, o, msgs, killer=m.kind)
            return
    if dist > 2:
        _step_toward(state, lvl, m, state.player.pos)
        return
    pile = [i for i in lvl.items_at(m.pos) if i.kind is not ItemKind.GOLD and i.weight <= PET_CARRY_LIMIT]
    if pile and not m.inventory and pile[0].kind is not ItemKind.CORPSE:
        item = pile[0]
        lvl.remove_item(m.pos, item)
        m.inventory.append(item)
        msgs.append(f"The {m.kind} picks up {article(item.display_name)}.")
        return
    _wander(state, lvl, m, 1 / 2)


def _spawn(state: GameState) -> None:
    for lvl in state.levels:
        if state.rng.random() >= state.spawn_chance:
            continue
        if sum(m.attitude is Attitude.HOSTILE for m in lvl.monsters) >= MAX_WANDERERS:
            continue
        candidates = [k.name for k in WANDERING_KINDS if k.difficulty <= lvl.depth + 1]
        kind = state.rng.choice(candidates)
        tiles = _free_tiles(state, lvl)
        if lvl is state.level:
            seen = visible_tiles(state)
            tiles = [t for t in tiles if t not in seen and chebyshev(t, state.player.pos) > 5]
        if tiles:
            lvl.monsters.append(Monster.spawn(state.new_id(), kind, state.rng.choice(tiles), Attitude.HOSTILE))


# ---------------------------------------------------------------- observation


def _line(a: Pos, b: Pos):
    """Bresenham tiles strictly between a and b."""
    if a == b:
        return
    x0, y0 = a
    x1, y1 = b
    dx, dy = abs(x1 - x0), -abs(y1 - y0)
    sx, sy = (1 if x0 < x1 else -1), (1 if y0 < y1 else -1)
    err = dx + dy
    x, y = x0, y0
    while True:
        e2 = 2 * err
        if e2 >= dy:
            err += dy
            x += sx
        if e2 <= dx:
            err += dx
            y += sy
        if (x, y) == (x1, y1):
            return
        yield x, y


def has_line_of_sight(lvl: LevelMap, a: Pos, b: Pos) -> bool:
    tiles = lvl.tiles
    return all(tiles[y][x] not in OPAQUE for x, y in _line(a, b))


def visible_tiles(state: GameState) -> set[Pos]:
    """Tiles the player can see: the current room by line of sight, plus all neighbors."""
    lvl, pos = state.level, state.player.pos
    seen = {pos}
    seen.update(neighbors8(pos, lvl.width, lvl.height))
    rid = lvl.room_of.get(pos)
    if rid is not None and lvl.kind(pos) not in (TileKind.WALL, TileKind.STONE):
        boundary = []
        for t in lvl.room_view[rid]:
            if t in seen:
                continue
            if lvl.kind(t) in OPAQUE or lvl.kind(t) in DOORS:
                boundary.append(t)
            elif has_line_of_sight(lvl, pos, t):
                seen.add(t)
        # walls and doors show up once a floor tile next to them is in view
        for t in boundary:
            if any(n in seen and lvl.room_of.get(n) == rid and lvl.kind(n) not in OPAQUE for n in neighbors8(t, lvl.width, lvl.height)):
                seen.add(t)
    return seen


def compute_score(state: GameState) -> int:
    p = state.player
    return p.xp_points + 100 * (p.max_depth - 1) + p.gold
