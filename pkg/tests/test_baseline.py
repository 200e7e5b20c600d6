from rogueplay.agent import Outcome
from rogueplay.baseline import BaselineMemory, RULES, rule_conditions, run_baseline, select_skill
from rogueplay.scenarios import parse
from rogueplay.sim import Hunger, new_game, step
from rogueplay.sim import actions as A
from rogueplay.skills import SkillCall
from rogueplay.tracker import TrackerState, update

ROOM = """NAME: room
MAP:
------------------------
|......................|
|......................|
------------------------
ENDMAP
START: 1 1
TASK: "Survive."
SUCCESS: true
"""


def observe(extra=""):
    state = new_game(parse(ROOM + extra), 0)
    tracker = TrackerState()
    update(tracker, state, [])
    return tracker, state


def test_seven_rules():
    assert RULES == ("menu", "fight", "heal", "eat", "pickup", "descend", "explore")
    tracker, state = observe()
    assert len(rule_conditions(tracker, state)) == 7


def test_menu_rule_comes_first():
    tracker, state = observe("FEATURE: fountain AT 1 1\nMONSTER: newt AT 3 1 hostile\n")
    step(state, A.Quaff(None))
    assert select_skill(tracker, state) == (0, SkillCall("press_key", {"key": "ESC"}))


def test_fight_close_hostile():
    tracker, state = observe("MONSTER: newt AT 4 1 hostile\nMONSTER: jackal AT 20 1 hostile\n")
    assert select_skill(tracker, state) == (1, SkillCall("move_to", {"x": 4, "y": 1}))


def test_heal_prefers_identified_potion_then_prayer():
    tracker, state = observe("INVENTORY: potion of healing\n")
    state.player.hp = 5
    potion = state.player.inventory[0]
    potion.identified = True
    assert select_skill(tracker, state) == (2, SkillCall("quaff", {"item_letter": potion.letter}))
    potion.identified = False
    state.turn = 400
    assert select_skill(tracker, state)[1] == SkillCall("pray")
    assert rule_conditions(tracker, state, BaselineMemory(last_prayer=350))[2] is None


def test_eat_when_hungry():
    tracker, state = observe("INVENTORY: food ration\n")
    state.player.nutrition = 100
    assert state.player.hunger >= Hunger.HUNGRY
    assert select_skill(tracker, state)[0] == 3


def test_pickup_potions_not_corpses():
    tracker, state = observe("OBJECT: potion of healing AT 6 2\nOBJECT: newt corpse AT 2 1\n")
    assert select_skill(tracker, state) == (4, SkillCall("pickup", {"x": 6, "y": 2}))
    memory = BaselineMemory(failed_pickups={(1, (6, 2))})
    assert rule_conditions(tracker, state, memory)[4] is None


def test_descend_once_explored_else_wait():
    state = new_game(parse(ROOM.replace("|......................|\n|...", "|......................|\n|..>", 1)), 0)
    tracker = TrackerState()
    update(tracker, state, [])
    assert select_skill(tracker, state) == (5, SkillCall("down", {"x": 3, "y": 2}))
    tracker, state = observe()
    assert select_skill(tracker, state) == (6, SkillCall("wait"))


def test_full_game_ends():
    state = new_game(None, 0)
    record = run_baseline(state, time_limit=5000)
    assert record.outcome in (Outcome.GAME_ENDED, Outcome.TIME_LIMIT, Outcome.TIMEOUT)
    assert record.llm_calls == 0
    assert record.max_depth >= 1
