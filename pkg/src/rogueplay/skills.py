"""Skills: the named, parameterized behaviors the agent chooses between.

A skill drives the engine one action at a time. After every action the tracker
is updated; if it reports an event from :data:`INTERRUPTS` the skill stops at
once and returns :class:`Outcome` ``INTERRUPTED``. The last command a skill was
asked to perform (``down``, ``zap`` ...) is exempt: whatever it causes is
reported as ``COMPLETED``.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable

from .sim import actions as A
from .sim.engine import step
from .sim.monsters import Attitude
from .sim.state import GameState, Status
from .sim.tiles import DELTA_TO_DIR, PASSABLE, Pos, TileKind, chebyshev
from .tracker import Event, EventKind, LevelMemory, TrackerState, blockers, frontier_tiles, update

SEARCH_CAP = 10
MAX_ACTIONS = 3000

INTERRUPTS = frozenset(
    {
        EventKind.LEVEL_CHANGED,
        EventKind.TELEPORTED,
        EventKind.NEW_STRUCTURE,
        EventKind.NEW_MONSTER,
        EventKind.NEW_ITEM,
        EventKind.NEW_FEATURE,
        EventKind.LOW_HEALTH,
        EventKind.GAME_ENDED,
    }
)


class SkillKind(str, Enum):
    SPECIAL = "special"
    BASIC = "basic"
    POSITION = "position"
    INVENTORY = "inventory"
    DIRECTION = "direction"


@dataclass(frozen=True)
class Param:
    name: str
    type: str  # "int" | "str" | "bool"
    optional: bool = False

    def render(self) -> str:
        text = f"{self.name}: {self.type}"
        return f"[{text}]" if self.optional else text


@dataclass(frozen=True)
class SkillSpec:
    name: str
    kind: SkillKind
    params: tuple[Param, ...]
    description: str
    handles_menu: bool = False

    def render(self) -> str:
        return f"{self.name}({', '.join(p.render() for p in self.params)}): {self.description}"


@dataclass(frozen=True)
class SkillCall:
    name: str
    params: dict = field(default_factory=dict)


class Status_(str, Enum):
    COMPLETED = "completed"
    FAILED = "failed"
    INTERRUPTED = "interrupted"
    TASK_FINISHED = "task finished"


@dataclass
class Outcome:
    status: Status_
    feedback: list[str] = field(default_factory=list)
    reason: str = ""
    events: list[Event] = field(default_factory=list)

    @classmethod
    def completed(cls, *feedback: str) -> "Outcome":
        return cls(Status_.COMPLETED, [f for f in feedback if f])

    @classmethod
    def failed(cls, reason: str) -> "Outcome":
        return cls(Status_.FAILED, reason=reason)

    def summary(self) -> str:
        if self.status is Status_.FAILED:
            return f"Skill failed: {self.reason}"
        if self.status is Status_.INTERRUPTED:
            kinds = sorted({e.kind.value for e in self.events if e.kind in INTERRUPTS or e.kind is EventKind.MENU_OPENED})
            note = f" ({'; '.join(self.feedback)})" if self.feedback else ""
            return "Skill interrupted by: " + ", ".join(kinds) + note
        if self.status is Status_.TASK_FINISHED:
            return "Task marked as finished."
        return "Skill completed" + (": " + " ".join(self.feedback) if self.feedback else ".")


OutcomeStatus = Status_

_P = Param
_XY = (_P("x", "int", True), _P("y", "int", True))


def _spec(name, kind, params, description, handles_menu=False):
    return SkillSpec(name, kind, tuple(params), description, handles_menu)


REGISTRY: tuple[SkillSpec, ...] = (
    _spec("explore_level", SkillKind.SPECIAL, [], "Walk toward unseen parts of the level, open closed doors and search dead ends for hidden passages."),
    _spec("set_avoid_monster_flag", SkillKind.SPECIAL, [_P("value", "bool")], "When true, movement tries to keep away from hostile monsters instead of attacking them."),
    _spec("press_key", SkillKind.SPECIAL, [_P("key", "str")], "Press one key in an open menu: a letter, or ESC, SPACE or ENTER.", handles_menu=True),
    _spec("type_text", SkillKind.SPECIAL, [_P("text", "str")], "Type a line of text into an open text prompt.", handles_menu=True),
    _spec("finish_task", SkillKind.SPECIAL, [], "Declare the current task done.", handles_menu=True),
    _spec("move_to", SkillKind.SPECIAL, [_P("x", "int"), _P("y", "int")], "Walk to a known position."),
    _spec("go_to", SkillKind.SPECIAL, [_P("structure", "str")], "Walk to the nearest tile of a room or corridor, e.g. room_2."),
    _spec("pickup", SkillKind.POSITION, _XY, "Pick up what lies on your tile, or walk to the given position first."),
    _spec("up", SkillKind.POSITION, _XY, "Climb the staircase up on your tile, or walk to the given staircase first."),
    _spec("down", SkillKind.POSITION, _XY, "Descend the staircase down on your tile, or walk to the given staircase first."),
    _spec("drop", SkillKind.INVENTORY, [_P("item_letter", "str")], "Drop an inventory item."),
    _spec("wield", SkillKind.INVENTORY, [_P("item_letter", "str")], "Hold a weapon or tool in your hands."),
    _spec("eat", SkillKind.INVENTORY, [_P("item_letter", "str", True)], "Eat food from your inventory, or from the floor when no letter is given."),
    _spec("quaff", SkillKind.INVENTORY, [_P("item_letter", "str", True)], "Drink a potion, or from the fountain you stand on when no letter is given."),
    _spec("zap", SkillKind.INVENTORY, [_P("item_letter", "str")], "Zap a wand; a direction prompt follows, answer it with press_key."),
    _spec("read", SkillKind.INVENTORY, [_P("item_letter", "str")], "Read a scroll."),
    _spec("put_on", SkillKind.INVENTORY, [_P("item_letter", "str")], "Put on a ring."),
    _spec("put_in", SkillKind.INVENTORY, [_P("item_letter", "str")], "Put an inventory item into the bag you carry."),
    _spec("kick", SkillKind.DIRECTION, [_P("x", "int"), _P("y", "int")], "Walk next to the position and kick it."),
    _spec(
        "apply",
        SkillKind.DIRECTION,
        [_P("item_letter", "str"), *_XY],
        "Use a tool such as a bag or pick-axe. With x and y, walk next to that position and use the tool toward it.",
    ),
    _spec("cast", SkillKind.BASIC, [], "Open your spellbook to cast a spell."),
    _spec("pay", SkillKind.BASIC, [], "Pay a shopkeeper what you owe."),
    _spec("pray", SkillKind.BASIC, [], "Pray to your god for help."),
    _spec("search", SkillKind.BASIC, [], "Search the tiles around you once for hidden passages."),
    _spec("open", SkillKind.BASIC, [], "Open a door; a direction prompt follows."),
    _spec("close", SkillKind.BASIC, [], "Close a door; a direction prompt follows."),
    _spec("engrave", SkillKind.BASIC, [_P("text", "str", True)], "Write in the dust on your tile."),
    _spec("read_floor", SkillKind.BASIC, [], "Read what is written on your tile."),
    _spec("wait", SkillKind.BASIC, [], "Let one turn pass."),
)

SKILLS: dict[str, SkillSpec] = {s.name: s for s in REGISTRY}
assert len(SKILLS) == len(REGISTRY)


def registry() -> list[SkillSpec]:
    return list(REGISTRY)


def render_skills(specs=REGISTRY) -> str:
    return "\n".join(s.render() for s in specs)


class SkillError(ValueError):
    pass


def _coerce(param: Param, value):
    if param.type == "int":
        if isinstance(value, bool):
            raise SkillError(f"parameter {param.name} must be an integer")
        if isinstance(value, int):
            return value
        if isinstance(value, str) and value.strip().lstrip("-").isdigit():
            return int(value)
        raise SkillError(f"parameter {param.name} must be an integer")
    if param.type == "bool":
        if isinstance(value, bool):
            return value
        if isinstance(value, str) and value.lower() in ("true", "false"):
            return value.lower() == "true"
        raise SkillError(f"parameter {param.name} must be true or false")
    if isinstance(value, (int, float)) and not isinstance(value, bool):
        return str(value)
    if not isinstance(value, str):
        raise SkillError(f"parameter {param.name} must be a string")
    return value


def validate(call: SkillCall) -> dict:
    """Check a call against the registry and return its coerced parameters."""
    spec = SKILLS.get(call.name)
    if spec is None:
        raise SkillError(f"unknown skill '{call.name}'")
    known = {p.name for p in spec.params}
    extra = sorted(set(call.params) - known)
    if extra:
        raise SkillError(f"{call.name} got unexpected parameter(s): {', '.join(extra)}")
    out = {}
    for p in spec.params:
        value = call.params.get(p.name)
        if value is None:
            if not p.optional:
                raise SkillError(f"{call.name} is missing parameter {p.name}")
            continue
        out[p.name] = _coerce(p, value)
    xs = [k for k in ("x", "y") if k in known]
    if xs and ("x" in out) != ("y" in out):
        raise SkillError(f"{call.name} needs both x and y or neither")
    return out


# ---------------------------------------------------------------- execution context


class _Stop(Exception):
    def __init__(self, outcome: Outcome):
        self.outcome = outcome


@dataclass
class TraceEntry:
    skill: str
    action: A.Action
    turn: int
    events: list[Event]


@dataclass
class SkillContext:
    state: GameState
    tracker: TrackerState
    avoid_monsters: bool = False
    trace: list[TraceEntry] | None = None
    on_action: Callable[[A.Action, list[Event]], None] | None = None
    turn_limit: int | None = None
    # per-execution scratch
    events: list[Event] = field(default_factory=list)
    skill: str = ""
    actions: int = 0
    notes: list[str] = field(default_factory=list)

    def act(self, action: A.Action, final: bool = False, menu_ok: bool = False):
        """Perform one engine action; stop the skill when an interrupting event fires."""
        if self.actions >= MAX_ACTIONS:
            raise _Stop(Outcome.failed(f"gave up after {MAX_ACTIONS} actions"))
        self.actions += 1
        result = step(self.state, action)
        events = update(self.tracker, self.state, result.messages, action)
        self.events.extend(events)
        if self.trace is not None:
            self.trace.append(TraceEntry(self.skill, action, self.state.turn, list(events)))
        if self.on_action is not None:
            self.on_action(action, events)
        if final:
            return result
        stop = [e for e in events if e.kind in INTERRUPTS or (e.kind is EventKind.MENU_OPENED and not menu_ok)]
        if stop:
            raise _Stop(Outcome(Status_.INTERRUPTED, events=list(stop)))
        if self.turn_limit is not None and self.state.turn >= self.turn_limit:
            raise _Stop(Outcome.failed("time limit reached"))
        return result


def execute(call: SkillCall, ctx: SkillContext) -> Outcome:
    """Run one skill to completion, failure or interruption."""
    state = ctx.state
    ctx.events, ctx.actions, ctx.skill, ctx.notes = [], 0, call.name, []
    try:
        params = validate(call)
    except SkillError as exc:
        return Outcome.failed(str(exc))
    spec = SKILLS[call.name]
    if state.done is not Status.RUNNING:
        return Outcome.failed("the game is over")
    if state.open_menu is not None and not spec.handles_menu:
        return Outcome.failed("menu open")
    if ctx.tracker.last_depth is None:
        update(ctx.tracker, state, [])
    try:
        outcome = _HANDLERS[call.name](ctx, **params)
    except _Stop as stop:
        outcome = stop.outcome
    if outcome.status is not Status_.INTERRUPTED:
        outcome.events = list(ctx.events)
    else:
        outcome.events = _merge(ctx.events, outcome.events)
    if ctx.notes and outcome.status in (Status_.COMPLETED, Status_.INTERRUPTED):
        outcome.feedback = ctx.notes + outcome.feedback
    elif ctx.notes and outcome.status is Status_.FAILED:
        outcome.reason = "; ".join([*ctx.notes, outcome.reason])
    return outcome


def _merge(all_events: list[Event], stop: list[Event]) -> list[Event]:
    return all_events if all(e in all_events for e in stop) else all_events + stop


# ---------------------------------------------------------------- navigation

_OFFSETS = ((0, -1), (1, 0), (0, 1), (-1, 0), (1, -1), (1, 1), (-1, 1), (-1, -1))


def _hostile_zone(ctx: SkillContext) -> set[Pos]:
    zone = set()
    for km in ctx.tracker.current.known_monsters.values():
        if km.attitude is Attitude.HOSTILE:
            x, y = km.pos
            zone.update((x + dx, y + dy) for dx in (-1, 0, 1) for dy in (-1, 0, 1))
    return zone


def _walkable(mem: LevelMemory, doors: bool):
    allowed = PASSABLE | ({TileKind.DOOR_CLOSED} if doors else frozenset())

    def ok(p: Pos) -> bool:
        return mem.kind(p) in allowed

    return ok


def shortest_path(mem: LevelMemory, start: Pos, goals: set[Pos], ok, blocked: set[Pos] = frozenset()) -> list[Pos] | None:
    """Path (excluding ``start``) to the nearest goal; among equally near goals the lowest (y, x) wins."""
    if start in goals:
        return []
    parent: dict[Pos, Pos | None] = {start: None}
    frontier = [start]
    w, h = mem.width, mem.height
    while frontier:
        nxt = []
        hits = []
        for cur in frontier:
            x, y = cur
            for dx, dy in _OFFSETS:
                n = (x + dx, y + dy)
                if n in parent or not (0 <= n[0] < w and 0 <= n[1] < h):
                    continue
                if n in goals and (ok(n) or n not in blocked):
                    if ok(n) and n not in blocked:
                        parent[n] = cur
                        hits.append(n)
                        continue
                if not ok(n) or n in blocked:
                    continue
                parent[n] = cur
                nxt.append(n)
        if hits:
            goal = min(hits, key=lambda p: (p[1], p[0]))
            path = []
            while goal != start:
                path.append(goal)
                goal = parent[goal]
            return path[::-1]
        frontier = nxt
    return None


def _plan(ctx: SkillContext, goals: set[Pos], doors: bool = True) -> list[Pos] | None:
    mem = ctx.tracker.current
    pos = ctx.state.player.pos
    ok = _walkable(mem, doors)
    if ctx.avoid_monsters:
        zone = _hostile_zone(ctx) - {pos}
        path = shortest_path(mem, pos, goals, ok, zone)
        if path is not None:
            return path
        path = shortest_path(mem, pos, goals, ok)
        if path is not None and "could not avoid monsters" not in ctx.notes:
            ctx.notes.append("could not avoid monsters")
        return path
    return shortest_path(mem, pos, goals, ok)


def _step_to(ctx: SkillContext, nxt: Pos) -> None:
    """Take one step (or open the door in the way) toward an adjacent tile."""
    state = ctx.state
    pos = state.player.pos
    direction = DELTA_TO_DIR[(nxt[0] - pos[0], nxt[1] - pos[1])]
    kind = state.level.kind(nxt)
    if kind is TileKind.DOOR_CLOSED and ctx.tracker.current.kind(nxt) is TileKind.DOOR_CLOSED:
        result = ctx.act(A.Open(direction))
    else:
        result = ctx.act(A.Move(direction))
    if result.invalid:
        raise _Stop(Outcome.failed(f"path blocked: {' '.join(result.messages)}"))


def navigate(ctx: SkillContext, goals: set[Pos], doors: bool = True, what: str = "there") -> None:
    """Walk until the player stands on one of ``goals``; raises _Stop on failure."""
    state = ctx.state
    path: list[Pos] | None = None
    version = -1
    last_pos = None
    stuck = 0
    while state.player.pos not in goals:
        mem = ctx.tracker.current
        pos = state.player.pos
        if ctx.avoid_monsters or path is None or mem.version != version or not path or chebyshev(path[0], pos) != 1 or pos != last_pos:
            path = _plan(ctx, goals, doors)
            version = mem.version
            if path is None:
                raise _Stop(Outcome.failed(f"no known path to {what}"))
        nxt = path[0]
        before = state.player.pos
        _step_to(ctx, nxt)
        last_pos = state.player.pos
        if state.player.pos == nxt:
            path.pop(0)
            stuck = 0
        elif state.player.pos == before:
            stuck += 1  # attacked something or opened a door
            if stuck > 50:
                raise _Stop(Outcome.failed(f"could not get past {nxt}"))
        if state.done is not Status.RUNNING:
            raise _Stop(Outcome(Status_.INTERRUPTED, events=[e for e in ctx.events if e.kind is EventKind.GAME_ENDED]))


def _known_walkable(ctx: SkillContext, x: int, y: int) -> bool:
    return ctx.tracker.current.kind((x, y)) in PASSABLE


def _go_to_position(ctx: SkillContext, x: int | None, y: int | None) -> None:
    if x is None:
        return
    if not _known_walkable(ctx, x, y):
        raise _Stop(Outcome.failed(f"({x},{y}) is not a known walkable position"))
    navigate(ctx, {(x, y)}, what=f"({x},{y})")


def _approach(ctx: SkillContext, target: Pos) -> str:
    """Stand on a tile 8-adjacent to ``target`` and return the direction toward it."""
    mem = ctx.tracker.current
    tx, ty = target
    around = {(tx + dx, ty + dy) for dx in (-1, 0, 1) for dy in (-1, 0, 1) if (dx or dy)}
    goals = {p for p in around if mem.kind(p) in PASSABLE}
    if not goals:
        raise _Stop(Outcome.failed(f"not adjacent and cannot approach ({tx},{ty})"))
    try:
        navigate(ctx, goals, what=f"a tile next to ({tx},{ty})")
    except _Stop as stop:
        if stop.outcome.status is Status_.FAILED:
            raise _Stop(Outcome.failed(f"not adjacent and cannot approach ({tx},{ty})")) from None
        raise
    pos = ctx.state.player.pos
    return DELTA_TO_DIR[(tx - pos[0], ty - pos[1])]


def _final(ctx: SkillContext, action: A.Action, done: str = "") -> Outcome:
    result = ctx.act(action, final=True)
    if result.invalid:
        return Outcome.failed(" ".join(result.messages) or "that did not work")
    return Outcome.completed(done, *result.messages)


def _need_item(ctx: SkillContext, letter: str):
    if ctx.state.player.item(letter) is None:
        raise _Stop(Outcome.failed(f"no such item letter '{letter}'"))


# ---------------------------------------------------------------- skill bodies


def _explore_level(ctx: SkillContext) -> Outcome:
    state = ctx.state
    searching: Pos | None = None
    while True:
        mem = ctx.tracker.current
        pos = state.player.pos
        frontier = frontier_tiles(mem)
        if frontier:
            path = _plan(ctx, frontier, doors=False)
            if path:
                searching = None
                _step_to(ctx, path[0])
                continue
        doors = {p for p in _known(mem, TileKind.DOOR_CLOSED)}
        if doors:
            around = {}
            for d in doors:
                for dx, dy in _OFFSETS:
                    n = (d[0] + dx, d[1] + dy)
                    if mem.kind(n) in PASSABLE:
                        around.setdefault(n, []).append(d)
            path = _plan(ctx, set(around), doors=False)
            if path is not None:
                if not path:
                    door = min(around[pos], key=lambda p: (p[1], p[0]))
                    _step_to(ctx, door)
                else:
                    _step_to(ctx, path[0])
                continue
        spots = {p for p in _dead_ends(mem) if mem.searched_count.get(p, 0) < SEARCH_CAP}
        if searching is not None and searching not in spots:
            searching = None
        if spots:
            path = _plan(ctx, spots, doors=False)
            if path is not None:
                if not path:
                    ctx.act(A.Search())
                else:
                    _step_to(ctx, path[0])
                continue
        notes = ["level fully explored"]
        found = blockers(mem)
        if found:
            notes.append("Blocked by: " + "; ".join(f"{k.value} at ({p[0]},{p[1]})" for p, k in found) + ".")
        return Outcome.completed(*notes)


def _known(mem: LevelMemory, kind: TileKind):
    for y, row in enumerate(mem.grid):
        for x, k in enumerate(row):
            if k is kind:
                yield (x, y)


def _dead_ends(mem: LevelMemory) -> set[Pos]:
    out = set()
    for y, row in enumerate(mem.grid):
        for x, k in enumerate(row):
            if k is not TileKind.CORRIDOR:
                continue
            exits = 0
            for dx, dy in _OFFSETS:
                nk = mem.kind((x + dx, y + dy))
                if nk in PASSABLE or nk in (TileKind.DOOR_CLOSED, TileKind.DOOR_LOCKED, TileKind.BOULDER):
                    exits += 1
            if exits <= 1:
                out.add((x, y))
    return out


def _set_avoid(ctx: SkillContext, value: bool) -> Outcome:
    ctx.avoid_monsters = value
    return Outcome.completed(f"avoid-monster flag set to {str(value).lower()}")


def _press_key(ctx: SkillContext, key: str) -> Outcome:
    key = key.strip()
    upper = key.upper()
    if upper in ("ESC", "ESCAPE"):
        key = "ESC"
    elif upper in ("SPACE", "ENTER", "RETURN"):
        key = "ENTER" if upper == "RETURN" else upper
    elif len(key) != 1 or not key.isalpha():
        return Outcome.failed(f"unsupported key '{key}'; use a single letter, ESC, SPACE or ENTER")
    if ctx.state.open_menu is None:
        return Outcome.failed("no menu is open")
    return _final(ctx, A.PressKey(key))


def _type_text(ctx: SkillContext, text: str) -> Outcome:
    menu = ctx.state.open_menu
    if menu is None or menu.kind.value != "text":
        return Outcome.failed("no text prompt is open")
    return _final(ctx, A.TypeText(text))


def _finish_task(ctx: SkillContext) -> Outcome:
    return Outcome(Status_.TASK_FINISHED)


def _move_to(ctx: SkillContext, x: int, y: int) -> Outcome:
    if ctx.state.player.pos == (x, y):
        return Outcome.completed(f"already at ({x},{y})")
    _go_to_position(ctx, x, y)
    return Outcome.completed(f"arrived at ({x},{y})")


def _go_to(ctx: SkillContext, structure: str) -> Outcome:
    key = structure.strip().lower()
    mem = ctx.tracker.current
    match = [s for s in mem.structures if s.name == key or str(s.id) == key]
    if not match:
        return Outcome.failed(f"unknown structure '{structure}'")
    s = match[0]
    if ctx.state.player.pos in s.tiles:
        return Outcome.completed(f"already in {s.name}")
    goals = {t for t in s.tiles if mem.kind(t) in PASSABLE}
    navigate(ctx, goals, what=s.name)
    return Outcome.completed(f"arrived in {s.name}")


def _position_cmd(action: A.Action):
    def run(ctx: SkillContext, x: int | None = None, y: int | None = None) -> Outcome:
        _go_to_position(ctx, x, y)
        return _final(ctx, action)

    return run


def _inventory_cmd(make: Callable[[str | None], A.Action], optional: bool = False):
    def run(ctx: SkillContext, item_letter: str | None = None) -> Outcome:
        if item_letter is not None:
            _need_item(ctx, item_letter)
        return _final(ctx, make(item_letter))

    return run


def _kick(ctx: SkillContext, x: int, y: int) -> Outcome:
    direction = _approach(ctx, (x, y))
    return _final(ctx, A.Kick(direction))


def _apply(ctx: SkillContext, item_letter: str, x: int | None = None, y: int | None = None) -> Outcome:
    _need_item(ctx, item_letter)
    if x is None:
        return _final(ctx, A.Apply(item_letter))
    direction = _approach(ctx, (x, y))
    return _final(ctx, A.Apply(item_letter, direction))


def _basic(action: A.Action):
    def run(ctx: SkillContext) -> Outcome:
        return _final(ctx, action)

    return run


def _engrave(ctx: SkillContext, text: str | None = None) -> Outcome:
    return _final(ctx, A.Engrave(text))


_HANDLERS: dict[str, Callable[..., Outcome]] = {
    "explore_level": _explore_level,
    "set_avoid_monster_flag": _set_avoid,
    "press_key": _press_key,
    "type_text": _type_text,
    "finish_task": _finish_task,
    "move_to": _move_to,
    "go_to": _go_to,
    "pickup": _position_cmd(A.Pickup()),
    "up": _position_cmd(A.GoUp()),
    "down": _position_cmd(A.GoDown()),
    "drop": _inventory_cmd(A.Drop),
    "wield": _inventory_cmd(A.Wield),
    "eat": _inventory_cmd(A.Eat, optional=True),
    "quaff": _inventory_cmd(A.Quaff, optional=True),
    "zap": _inventory_cmd(A.Zap),
    "read": _inventory_cmd(A.Read),
    "put_on": _inventory_cmd(A.PutOn),
    "put_in": _inventory_cmd(A.PutIn),
    "kick": _kick,
    "apply": _apply,
    "cast": _basic(A.Cast()),
    "pay": _basic(A.Pay()),
    "pray": _basic(A.Pray()),
    "search": _basic(A.Search()),
    "open": _basic(A.Open()),
    "close": _basic(A.Close()),
    "engrave": _engrave,
    "read_floor": _basic(A.ReadFloor()),
    "wait": _basic(A.Wait()),
}
assert set(_HANDLERS) == set(SKILLS)


def exploration_pending(mem: LevelMemory, pos: Pos) -> bool:
    """Whether explore_level would still find something to do from ``pos``."""
    dist = mem.distances(pos)
    if any(p in dist for p in frontier_tiles(mem)):
        return True
    for d in _known(mem, TileKind.DOOR_CLOSED):
        if any((d[0] + dx, d[1] + dy) in dist for dx, dy in _OFFSETS):
            return True
    return any(p in dist and mem.searched_count.get(p, 0) < SEARCH_CAP for p in _dead_ends(mem))
