import pytest

from rogueplay.scenarios import parse
from rogueplay.sim import Status, new_game
from rogueplay.sim.tiles import TileKind
from rogueplay.skills import (
    INTERRUPTS,
    REGISTRY,
    SEARCH_CAP,
    SkillCall,
    SkillContext,
    SkillError,
    Status_,
    _plan,
    execute,
    exploration_pending,
    render_skills,
    shortest_path,
    validate,
)
from rogueplay.tracker import EventKind, LevelMemory, TrackerState

HALL = """NAME: hall
MAP:
------------------------
|......................|
|......................|
------------------------
ENDMAP
START: 1 1
TASK: "Walk."
SUCCESS: true
"""

TWO_ROOMS = """NAME: two
MAP:
-------   -------
|.....|   |.....|
|.....+###+.....|
|.....|   |.....|
-------   -------
ENDMAP
START: 1 1
TASK: "Explore."
SUCCESS: true
"""


def context(text: str, seed: int = 0, **kw) -> SkillContext:
    state = new_game(parse(text), seed)
    return SkillContext(state, TrackerState(), trace=[], **kw)


def run(ctx, name, **params):
    return execute(SkillCall(name, params), ctx)


def test_registry_lists_every_skill_once():
    names = [s.name for s in REGISTRY]
    assert len(names) == len(set(names)) == 29
    for expected in ("explore_level", "move_to", "go_to", "pickup", "press_key", "type_text", "finish_task", "set_avoid_monster_flag"):
        assert expected in names
    assert "move_to(x: int, y: int): " in render_skills()


def test_validate_rejects_bad_calls():
    with pytest.raises(SkillError, match="unknown skill 'fly'"):
        validate(SkillCall("fly", {}))
    with pytest.raises(SkillError, match="missing parameter"):
        validate(SkillCall("move_to", {"x": 1}))
    with pytest.raises(SkillError, match="unexpected"):
        validate(SkillCall("wait", {"x": 1}))
    with pytest.raises(SkillError, match="both x and y"):
        validate(SkillCall("pickup", {"x": 1}))
    assert validate(SkillCall("move_to", {"x": "3", "y": 2})) == {"x": 3, "y": 2}


def test_move_to_walks_and_completes():
    ctx = context(HALL)
    out = run(ctx, "move_to", x=10, y=2)
    assert out.status is Status_.COMPLETED
    assert ctx.state.player.pos == (10, 2)
    assert ctx.state.turn == 9


def test_move_to_unknown_tile_fails_without_time():
    ctx = context(HALL)
    out = run(ctx, "move_to", x=30, y=1)
    assert out.status is Status_.FAILED
    assert ctx.state.turn == 0


def test_skill_refused_while_menu_open():
    ctx = context(HALL + "FEATURE: fountain AT 1 1\n")
    assert run(ctx, "quaff").status is Status_.COMPLETED
    assert ctx.state.open_menu is not None
    out = run(ctx, "move_to", x=5, y=1)
    assert out.status is Status_.FAILED and out.reason == "menu open"
    assert run(ctx, "press_key", key="ESC").status is Status_.COMPLETED
    assert ctx.state.open_menu is None
    out = run(ctx, "press_key", key="ESC")
    assert out.reason == "no menu is open"


def test_unknown_letter():
    ctx = context(HALL)
    out = run(ctx, "drop", item_letter="z")
    assert out.status is Status_.FAILED and "no such item letter 'z'" in out.reason


def test_kick_needs_approachable_target():
    ctx = context(HALL)
    out = run(ctx, "kick", x=30, y=9)
    assert out.status is Status_.FAILED
    assert out.reason.startswith("not adjacent and cannot approach")


def test_pickup_walks_to_item():
    ctx = context(HALL + "OBJECT: dagger AT 6 2\n")
    out = run(ctx, "pickup", x=6, y=2)
    assert out.status is Status_.COMPLETED
    assert any(it.name == "dagger" for it in ctx.state.player.inventory)


def test_new_monster_interrupts_walk():
    ctx = context(TWO_ROOMS + "MONSTER: newt AT 14 2 peaceful\n")
    out = run(ctx, "explore_level")
    assert out.status is Status_.INTERRUPTED
    assert any(e.kind in INTERRUPTS for e in out.events)


def test_explore_level_reveals_both_rooms():
    ctx = context(TWO_ROOMS)
    for _ in range(20):
        out = run(ctx, "explore_level")
        if out.status is Status_.COMPLETED:
            break
    assert out.status is Status_.COMPLETED
    mem = ctx.tracker.current
    assert mem.kind((15, 3)) is TileKind.FLOOR
    assert not exploration_pending(mem, ctx.state.player.pos)
    assert len([s for s in mem.structures if s.kind == "room"]) == 2


DEAD_END = """NAME: dead
MAP:
-------    
|.....|    
|...../####
-------    
ENDMAP
START: 1 1
TASK: "Explore."
SUCCESS: true
"""


def test_dead_end_search_is_capped():
    ctx = context(DEAD_END)
    for _ in range(30):
        out = run(ctx, "explore_level")
        if out.status is Status_.COMPLETED:
            break
    assert out.status is Status_.COMPLETED
    assert ctx.tracker.current.searched_count[(10, 2)] == SEARCH_CAP


def test_finish_task_and_game_over():
    ctx = context(HALL)
    assert run(ctx, "finish_task").status is Status_.TASK_FINISHED
    ctx.state.done = Status.DEAD
    assert run(ctx, "wait").reason == "the game is over"


def test_go_to_structure():
    ctx = context(TWO_ROOMS)
    run(ctx, "explore_level")
    out = run(ctx, "go_to", structure="room_99")
    assert out.status is Status_.FAILED and "unknown structure" in out.reason


ROWS = """NAME: rows
MAP:
------------
|..........|
|..........|
|..........|
|..........|
------------
ENDMAP
START: 1 2
TASK: "Walk."
SUCCESS: true
MONSTER: newt AT 5 1 hostile
"""


def test_avoid_flag_plans_around_hostiles():
    ctx = context(ROWS)
    run(ctx, "set_avoid_monster_flag", value=True)
    newt = ctx.state.level.monsters[0].pos
    path = _plan(ctx, {(9, 1)})
    zone = {(newt[0] + dx, newt[1] + dy) for dx in (-1, 0, 1) for dy in (-1, 0, 1)}
    assert path and not set(path) & zone
    assert ctx.notes == []


def test_avoid_flag_falls_back_with_feedback():
    ctx = context(ROWS.replace("|..........|\n|..........|\n|..........|\n|..........|", "|..........|\n|----------|\n|----------|\n|----------|").replace("START: 1 2", "START: 1 1"))
    assert run(ctx, "set_avoid_monster_flag", value=True).status is Status_.COMPLETED
    out = run(ctx, "move_to", x=9, y=1)
    assert "could not avoid monsters" in " ".join(out.feedback + [out.reason])
    assert "could not avoid monsters" in out.summary()


def test_shortest_path_prefers_top_left_goal():
    mem = LevelMemory(1, 5, 5)
    for y in range(5):
        for x in range(5):
            mem.grid[y][x] = TileKind.FLOOR
    ok = lambda p: mem.kind(p) is TileKind.FLOOR  # noqa: E731
    path = shortest_path(mem, (2, 2), {(0, 4), (4, 0), (0, 0)}, ok)
    assert path[-1] == (0, 0) and len(path) == 2
    assert shortest_path(mem, (2, 2), {(2, 2)}, ok) == []


def test_actions_are_traced_with_events():
    ctx = context(TWO_ROOMS)
    run(ctx, "explore_level")
    assert ctx.trace
    assert all(entry.skill == "explore_level" for entry in ctx.trace)
    kinds = {e.kind for entry in ctx.trace for e in entry.events}
    assert EventKind.NEW_STRUCTURE in kinds or kinds <= {EventKind.NEW_MESSAGE, EventKind.STAT_CHANGED}
