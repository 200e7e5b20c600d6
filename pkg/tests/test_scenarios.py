import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rogueplay.scenarios import (
    ORDER,
    Atom,
    Combinator,
    Literal,
    RaggedMap,
    ScenarioError,
    ScenarioSyntaxError,
    UnknownAtom,
    UnknownGlyph,
    evaluate_success,
    format_success,
    load_scenario,
    parse,
    parse_success,
    to_text,
)
from rogueplay.sim import new_game, state_digest, step
from rogueplay.sim import actions as A

from conftest import GOLDEN

MINIMAL = """NAME: tiny
MAP:
-----
|...|
-----
ENDMAP
START: 1 1
TASK: "Do nothing."
SUCCESS: true
"""


def test_minimal_spec_uses_defaults():
    spec = parse(MINIMAL)
    assert spec.name == "tiny"
    assert spec.time_limit == 200
    assert spec.llm_call_limit == 40
    assert spec.success == Literal(True)
    assert spec.start.pos == (1, 1)


def test_undeclared_glyph_reports_line_and_column():
    text = MINIMAL.replace("|...|", "|.&.|")
    with pytest.raises(UnknownGlyph) as err:
        parse(text)
    assert (err.value.line, err.value.col) == (4, 3)
    assert str(err.value).startswith("4:3:")


def test_ragged_map():
    text = MINIMAL.replace("|...|\n", "|...|\n|..|\n")
    with pytest.raises(RaggedMap) as err:
        parse(text)
    assert err.value.line == 5


def test_unknown_atom_points_at_name():
    text = MINIMAL.replace("SUCCESS: true", "SUCCESS: all(true, fly_away(1))")
    with pytest.raises(UnknownAtom) as err:
        parse(text)
    assert err.value.line == 9
    assert err.value.col == len("SUCCESS: all(true, ") + 1


@pytest.mark.parametrize(
    "old,new,line",
    [
        ("SUCCESS: true", "SUCCESS: all(true", 9),
        ("TASK: \"Do nothing.\"", "TASK: Do nothing.", 8),
        ("START: 1 1", "START: somewhere", 7),
        ("START: 1 1", "START: 9 9", 7),
        ("ENDMAP\n", "ENDMAP\nMONSTER: dragon king AT 1 1\n", 7),
        ("ENDMAP\n", "ENDMAP\nOBJECT: nothing at all\n", 7),
        ("ENDMAP\n", "ENDMAP\nREGION: r 0 0 40 40\n", 7),
        ("ENDMAP\n", "ENDMAP\nLEGEND: 'x'=lava\n", 7),
        ("ENDMAP\n", "ENDMAP\nBOGUS: 1\n", 7),
        ("ENDMAP\n", "ENDMAP\nOBJECT: dagger AT random IN nowhere\n", 7),
        ("START: 1 1", "START: 1 1\nLIMITS: time=0", 8),
        ("SUCCESS: true", "SUCCESS: escaped_region(\"nowhere\")", 9),
        ("SUCCESS: true", "SUCCESS: not(true, false)", 9),
        ("SUCCESS: true", "SUCCESS: door_open(\"a\", 1)", 9),
    ],
)
def test_errors_carry_line_and_column(old, new, line):
    assert old in MINIMAL
    with pytest.raises(ScenarioError) as err:
        parse(MINIMAL.replace(old, new))
    assert err.value.line == line
    assert err.value.col >= 1


def test_missing_sections():
    with pytest.raises(ScenarioSyntaxError, match="missing TASK"):
        parse(MINIMAL.replace('TASK: "Do nothing."\n', ""))
    with pytest.raises(ScenarioSyntaxError, match="ENDMAP"):
        parse(MINIMAL.replace("ENDMAP\n", ""))


@pytest.mark.parametrize("name", ORDER)
def test_golden_round_trip(name):
    golden = (GOLDEN / f"{name}.scen").read_text(encoding="utf-8")
    spec = load_scenario(name)
    assert to_text(spec) == golden
    assert parse(golden) == spec


def test_sixteen_builtin_scenarios():
    assert len(ORDER) == 16
    assert {load_scenario(n).time_limit for n in ("carry", "boulder", "escape")} == {500}
    assert load_scenario("bag").time_limit == 200


def test_wand_success_names_the_statue():
    assert load_scenario("wand").success == Atom("feature_destroyed", ("statue",))


_leaf = st.one_of(
    st.builds(Literal, st.booleans()),
    st.builds(lambda s: Atom("has_item", (s,)), st.text("abcdef ", min_size=1, max_size=8).map(str.strip).filter(bool)),
    st.builds(lambda d: Atom("reached_depth", (d,)), st.integers(1, 10)),
    st.builds(lambda x, y: Atom("door_open", (x, y)), st.integers(0, 30), st.integers(0, 10)),
    st.builds(lambda k: Atom("on_tile", (k,)), st.sampled_from(["floor", "fountain", "staircase down"])),
)
exprs = st.recursive(
    _leaf,
    lambda kids: st.one_of(
        st.builds(lambda c: Combinator("not", (c,)), kids),
        st.builds(lambda cs: Combinator("all", tuple(cs)), st.lists(kids, min_size=1, max_size=3)),
        st.builds(lambda cs: Combinator("any", tuple(cs)), st.lists(kids, min_size=1, max_size=3)),
    ),
    max_leaves=8,
)


@settings(max_examples=200, deadline=None)
@given(exprs)
def test_success_expressions_round_trip(expr):
    assert parse_success(format_success(expr)) == expr


@settings(max_examples=100, deadline=None)
@given(expr=exprs, seed=st.integers(0, 20))
def test_evaluate_success_is_pure(expr, seed):
    state = new_game(load_scenario("bag"), seed)
    before = state_digest(state)
    first = evaluate_success(expr, state)
    assert state_digest(state) == before
    assert evaluate_success(expr, state) == first


@settings(max_examples=200, deadline=None)
@given(exprs)
def test_combinators_follow_boolean_logic(expr):
    state = new_game(load_scenario("bag"), 0)

    def oracle(e):
        if isinstance(e, Literal):
            return e.value
        if isinstance(e, Atom):
            return evaluate_success(e, state)
        vals = [oracle(c) for c in e.children]
        return {"not": lambda: not vals[0], "all": lambda: all(vals), "any": lambda: any(vals)}[e.op]()

    assert evaluate_success(expr, state) == oracle(expr)


def test_atoms_against_play():
    spec = parse(MINIMAL.replace("SUCCESS: true", 'SUCCESS: has_item("dagger")') + "OBJECT: dagger AT 2 1\n")
    state = new_game(spec, 0)
    assert not evaluate_success(spec.success, state)
    step(state, A.Move("E"))
    step(state, A.Pickup())
    assert evaluate_success(spec.success, state)
    assert evaluate_success(parse_success('not(reached_depth(2))'), state)
