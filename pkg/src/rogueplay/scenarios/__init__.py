"""Scenario language: parsing, success conditions and the bundled scenarios."""

from .builtin import ORDER, builtin_scenarios, load_scenario, scenario_source
from .model import (
    Atom,
    Combinator,
    Literal,
    Placement,
    RaggedMap,
    ScenarioError,
    ScenarioSpec,
    ScenarioSyntaxError,
    UnknownAtom,
    UnknownGlyph,
    Where,
)
from .parser import format_success, parse, parse_success, to_text
from .success import ATOMS, evaluate_success

__all__ = [
    "ATOMS",
    "ORDER",
    "Atom",
    "Combinator",
    "Literal",
    "Placement",
    "RaggedMap",
    "ScenarioError",
    "ScenarioSpec",
    "ScenarioSyntaxError",
    "UnknownAtom",
    "UnknownGlyph",
    "Where",
    "builtin_scenarios",
    "evaluate_success",
    "format_success",
    "load_scenario",
    "parse",
    "parse_success",
    "scenario_source",
    "to_text",
]
