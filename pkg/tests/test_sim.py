import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rogueplay.scenarios import load_scenario, parse
from rogueplay.sim import (
    GameOver,
    ItemKind,
    MenuKind,
    Status,
    TileKind,
    compute_score,
    new_game,
    state_digest,
    step,
)
from rogueplay.sim import actions as A

from play import play, random_action

ROOM = """NAME: room
MAP:
-------
|.....|
|.....|
-------
ENDMAP
START: 1 1
TASK: "Stand around."
SUCCESS: true
"""


def room(extra: str = "", seed: int = 0):
    return new_game(parse(ROOM + extra), seed)


def test_new_game_places_player_on_start():
    state = room()
    assert state.player.pos == (1, 1)
    assert state.turn == 0
    assert state.done is Status.RUNNING


def test_move_advances_turn_and_walls_block():
    state = room()
    res = step(state, A.Move("E"))
    assert state.player.pos == (2, 1) and res.turn_delta == 1
    res = step(state, A.Move("N"))
    assert state.player.pos == (2, 1)
    assert res.turn_delta == 0


def test_invalid_drop_leaves_state_alone():
    state = room()
    res = step(state, A.Drop("q"))
    assert res.invalid and res.turn_delta == 0
    assert res.messages
    fresh = room()
    state.pending_messages = fresh.pending_messages = []
    assert state_digest(state) == state_digest(fresh)


def test_menu_blocks_other_commands_and_escape_closes_it():
    state = room("FEATURE: fountain AT 1 1\n")
    step(state, A.Quaff(None))
    assert state.open_menu is not None and state.open_menu.kind is MenuKind.CONFIRM_PROMPT
    res = step(state, A.Move("E"))
    assert res.invalid and state.player.pos == (1, 1)
    step(state, A.PressKey("ESC"))
    assert state.open_menu is None
    assert state.turn == 0


def test_pickup_and_drop_round_trip():
    state = room("OBJECT: dagger AT 2 1\n")
    step(state, A.Move("E"))
    step(state, A.Pickup())
    dagger = [it for it in state.player.inventory if "dagger" in it.name]
    assert dagger
    step(state, A.Drop(dagger[0].letter))
    assert any("dagger" in it.name for it in state.level.items_at((2, 1)))


def test_score_formula():
    state = room()
    state.player.gold = 7
    state.player.xp_points = 5
    state.player.max_depth = 3
    assert compute_score(state) == 5 + 200 + 7


def test_step_after_end_raises():
    state = room()
    state.done = Status.DEAD
    with pytest.raises(GameOver):
        step(state, A.Wait())


def test_full_game_has_ten_levels_with_stairs():
    state = new_game(None, 3)
    assert len(state.levels) == 10
    for lvl in state.levels[:-1]:
        kinds = {lvl.kind(p) for p in lvl.positions()}
        assert TileKind.STAIRS_DOWN in kinds
    assert state.full_game


def test_scenario_placements_follow_regions():
    spec = load_scenario("carry")
    for seed in range(10):
        state = new_game(spec, seed)
        balls = [p for p in state.level.positions() for it in state.level.items_at(p) if it.name == "heavy iron ball"]
        assert len(balls) == 2
        assert all(1 <= x <= 5 and 1 <= y <= 5 for x, y in balls)
        assert 1 <= state.player.pos[0] <= 5


@settings(max_examples=40, deadline=None)
@given(seed=st.integers(0, 10_000), n=st.integers(1, 80))
def test_same_seed_and_actions_give_same_digest(seed, n):
    a = play(new_game(None, seed % 50), seed, n)
    b = play(new_game(None, seed % 50), seed, n)
    assert state_digest(a) == state_digest(b)


@settings(max_examples=40, deadline=None)
@given(keys=st.lists(st.sampled_from(["a", "b", "c", "y", "n", "SPACE", "ENTER", "ESC"]), max_size=12))
def test_menu_input_never_advances_time(keys):
    state = room("FEATURE: fountain AT 1 1\nINVENTORY: bag of holding\nINVENTORY: dagger\n")
    step(state, A.Quaff(None))
    turn = state.turn
    for key in keys:
        if state.open_menu is None:
            break
        step(state, A.PressKey(key))
        assert state.turn == turn


@settings(max_examples=30, deadline=None)
@given(seed=st.integers(0, 500), n=st.integers(1, 120))
def test_invariants_hold_along_random_play(seed, n):
    state = new_game(None, seed)
    rng = random.Random(seed)
    for _ in range(n):
        if state.done is not Status.RUNNING:
            break
        turn = state.turn
        res = step(state, random_action(rng, state))
        assert state.turn >= turn
        if res.invalid:
            assert state.turn == turn
        p = state.player
        assert state.level.in_bounds(p.pos)
        assert p.hp <= p.max_hp
        if state.done is Status.RUNNING:
            assert p.hp > 0
            assert state.level.kind(p.pos) not in (TileKind.WALL, TileKind.STONE)
        letters = [it.letter for it in p.inventory]
        assert len(letters) == len(set(letters))
        assert all(it.kind is not ItemKind.GOLD for it in p.inventory)
        positions = [m.pos for m in state.level.monsters]
        assert len(positions) == len(set(positions))
        assert p.pos not in positions
