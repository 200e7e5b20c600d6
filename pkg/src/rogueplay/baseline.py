"""Hand-written rule agent used as a point of comparison for the LLM agent.

Seven rules are checked in order after every skill ends; the first one that
applies picks the next skill.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .agent import Outcome, RunRecord, finish_record
from .scenarios.model import SuccessExpr
from .sim.items import ItemKind
from .sim.monsters import Attitude
from .sim.state import GameState, Hunger, Status
from .sim.tiles import Pos, TileKind
from .skills import SkillCall, SkillContext, Status_, execute, exploration_pending
from .tracker import TrackerState, blockers, update

HEAL_BELOW = 0.6
CLOSE_STEPS = 8
PRAYER_WAIT = 500
FIRST_SAFE_PRAYER = 300
STALL_LIMIT = 10

RULES = ("menu", "fight", "heal", "eat", "pickup", "descend", "explore")


@dataclass
class BaselineMemory:
    """What the rule agent remembers between decisions."""

    last_prayer: int | None = None
    failed_pickups: set[tuple[int, Pos]] = field(default_factory=set)


def _nearest_hostile(tracker: TrackerState, pos: Pos, close_steps: int):
    mem = tracker.current
    dist = mem.distances(pos)
    best = None
    for km in mem.known_monsters.values():
        if km.attitude is not Attitude.HOSTILE:
            continue
        d = dist.get(km.pos)
        if d is None or d > close_steps:
            continue
        key = (d, km.id)
        if best is None or key < best[0]:
            best = (key, km)
    return best[1] if best else None


def _healing_potion(state: GameState):
    for it in state.player.inventory:
        if it.kind is ItemKind.POTION and it.identified and "healing" in it.name:
            return it
    return None


def _prayer_safe(state: GameState, memory: BaselineMemory) -> bool:
    if memory.last_prayer is None:
        return state.turn >= FIRST_SAFE_PRAYER
    return state.turn - memory.last_prayer >= PRAYER_WAIT


def _food(state: GameState):
    for it in state.player.inventory:
        if it.kind is ItemKind.FOOD_RATION:
            return it
    return None


def _wanted(name: str) -> bool:
    name = name.lower()
    if "corpse" in name:
        return False
    return "potion" in name or "food" in name or "ration" in name


def _pickup_target(tracker: TrackerState, pos: Pos, memory: BaselineMemory, depth: int) -> Pos | None:
    mem = tracker.current
    dist = mem.distances(pos)
    best = None
    for ki in mem.known_items.values():
        if not _wanted(ki.name) or (depth, ki.pos) in memory.failed_pickups:
            continue
        d = dist.get(ki.pos)
        if d is None:
            continue
        key = (d, ki.pos[1], ki.pos[0])
        if best is None or key < best:
            best = key
    return (best[2], best[1]) if best else None


def _stairs_down(tracker: TrackerState, pos: Pos) -> Pos | None:
    mem = tracker.current
    dist = mem.distances(pos)
    for y, row in enumerate(mem.grid):
        for x, k in enumerate(row):
            if k is TileKind.STAIRS_DOWN and (x, y) in dist:
                return (x, y)
    return None


def rule_conditions(tracker: TrackerState, state: GameState, memory: BaselineMemory | None = None) -> list[SkillCall | None]:
    """For each rule in order, the skill it would choose, or None when it does not apply."""
    memory = memory or BaselineMemory()
    p = state.player
    pos = p.pos
    out: list[SkillCall | None] = []
    out.append(SkillCall("press_key", {"key": "ESC"}) if state.open_menu is not None else None)

    target = _nearest_hostile(tracker, pos, CLOSE_STEPS)
    out.append(SkillCall("move_to", {"x": target.pos[0], "y": target.pos[1]}) if target else None)

    heal = None
    if p.hp < HEAL_BELOW * p.max_hp:
        potion = _healing_potion(state)
        if potion is not None:
            heal = SkillCall("quaff", {"item_letter": potion.letter})
        elif _prayer_safe(state, memory):
            heal = SkillCall("pray")
    out.append(heal)

    food = _food(state) if p.hunger >= Hunger.HUNGRY else None
    out.append(SkillCall("eat", {"item_letter": food.letter}) if food else None)

    spot = _pickup_target(tracker, pos, memory, p.depth)
    out.append(SkillCall("pickup", {"x": spot[0], "y": spot[1]}) if spot else None)

    pending = exploration_pending(tracker.current, pos)
    stairs = None if pending else _stairs_down(tracker, pos)
    out.append(SkillCall("down", {"x": stairs[0], "y": stairs[1]}) if stairs else None)

    if pending:
        out.append(SkillCall("explore_level"))
    else:
        dist = tracker.current.distances(pos)
        locked = [
            b for b, kind in blockers(tracker.current)
            if kind is TileKind.DOOR_LOCKED and any((b[0] + dx, b[1] + dy) in dist for dx in (-1, 0, 1) for dy in (-1, 0, 1))
        ]
        if locked:
            door = min(locked, key=lambda b: (min(dist.get((b[0] + dx, b[1] + dy), 10**9) for dx in (-1, 0, 1) for dy in (-1, 0, 1)), b[1], b[0]))
            out.append(SkillCall("kick", {"x": door[0], "y": door[1]}))
        else:
            out.append(SkillCall("wait"))
    return out


def select_skill(tracker: TrackerState, state: GameState, memory: BaselineMemory | None = None) -> tuple[int, SkillCall]:
    """Index (0-based) of the first applicable rule and the skill it picks."""
    for i, call in enumerate(rule_conditions(tracker, state, memory)):
        if call is not None:
            return i, call
    raise AssertionError("the last rule always applies")


def run_baseline(
    state: GameState,
    tracker: TrackerState | None = None,
    time_limit: int | None = 5000,
    success: SuccessExpr | None = None,
    keep_trace: bool = False,
) -> RunRecord:
    """Play until death, victory or the time limit; never contacts a language model."""
    tracker = tracker or TrackerState()
    if tracker.last_depth is None:
        update(tracker, state, [])
    record = RunRecord()
    ctx = SkillContext(state, tracker, trace=record.trace if keep_trace else None, turn_limit=time_limit)
    memory = BaselineMemory()
    stall = 0
    while True:
        if state.done is not Status.RUNNING:
            return finish_record(record, state, Outcome.GAME_ENDED, success)
        if time_limit is not None and state.turn >= time_limit:
            return finish_record(record, state, Outcome.TIME_LIMIT, success)
        turn = state.turn
        baseline_step(ctx, memory)
        stall = stall + 1 if state.turn == turn else 0
        if stall >= STALL_LIMIT:
            return finish_record(record, state, Outcome.TIMEOUT, success)


def baseline_step(ctx: SkillContext, memory: BaselineMemory):
    """Pick one skill by the rules, run it and remember what the rules need to know."""
    state, tracker = ctx.state, ctx.tracker
    _, call = select_skill(tracker, state, memory)
    if call.name == "pray":
        memory.last_prayer = state.turn
    result = execute(call, ctx)
    if call.name == "pickup":
        pos = (call.params["x"], call.params["y"])
        left = any(_wanted(ki.name) for ki in tracker.current.items_at(pos))
        if left and (state.player.pos == pos or result.status is Status_.FAILED):
            memory.failed_pickups.add((state.player.depth, pos))
    return call, result
