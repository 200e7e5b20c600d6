import math

from hypothesis import given, settings
from hypothesis import strategies as st

from rogueplay.describe import SECTIONS, DescribeConfig, describe, estimate_tokens
from rogueplay.scenarios import load_scenario, parse
from rogueplay.sim import new_game, state_digest, step
from rogueplay.sim import actions as A
from rogueplay.tracker import TrackerState, update

HALL = """NAME: hall
MAP:
------------------------
|......................|
|......................|
------------------------
ENDMAP
START: 1 1
TASK: "Look around."
SUCCESS: true
"""


def observe(spec, seed=0):
    state = new_game(spec, seed)
    tracker = TrackerState()
    update(tracker, state, [])
    return tracker, state


def test_token_estimate_is_chars_over_four_rounded_up():
    assert estimate_tokens("") == 0
    assert estimate_tokens("abcd") == 1
    assert estimate_tokens("abcde") == 2


@given(st.text(max_size=200))
def test_token_estimate_property(text):
    assert estimate_tokens(text) == math.ceil(len(text) / 4)


def test_sections_appear_in_fixed_order():
    tracker, state = observe(load_scenario("guided-wand"))
    obs = describe(tracker, state)
    assert list(obs.sections) == list(SECTIONS)
    assert obs.rendered.startswith("You are at (")
    positions = [obs.rendered.find(text) for text in obs.sections.values() if text]
    assert positions == sorted(positions)
    assert obs.token_estimate == estimate_tokens(obs.rendered)


def test_sections_can_be_disabled():
    tracker, state = observe(load_scenario("bag"))
    obs = describe(tracker, state, DescribeConfig(enabled=frozenset({"position", "stats"})))
    assert list(obs.sections) == ["position", "stats"]
    assert "Inventory" not in obs.rendered


def test_close_and_distant_monsters():
    spec = parse(HALL + "MONSTER: newt AT 3 1 hostile\nMONSTER: jackal AT 22 2 peaceful\n")
    tracker, state = observe(spec)
    text = describe(tracker, state).sections["monsters"]
    assert "Close monsters:\n- newt at (3,1), 2 steps, east" in text
    assert "Distant monsters:\n- peaceful jackal at (22,2), 21 steps" in text


def test_menu_transcript():
    spec = parse(HALL + "FEATURE: fountain AT 1 1\n")
    tracker, state = observe(spec)
    step(state, A.Quaff(None))
    text = describe(tracker, state).sections["menu"]
    assert text.startswith("An open menu asks: Drink from the fountain? [yn]")


def test_inventory_lists_letters():
    spec = parse(HALL + "INVENTORY: dagger\nINVENTORY: bag of holding\n")
    tracker, state = observe(spec)
    text = describe(tracker, state).sections["inventory"]
    assert text.splitlines()[0] == "Inventory:"
    assert "a - a dagger" in text


@settings(max_examples=25, deadline=None)
@given(seed=st.integers(0, 200))
def test_describe_is_pure(seed):
    state = new_game(None, seed)
    tracker = TrackerState()
    update(tracker, state, [])
    before = state_digest(state)
    first = describe(tracker, state)
    assert describe(tracker, state) == first
    assert state_digest(state) == before
