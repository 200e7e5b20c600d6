"""The bundled scenario files."""

from __future__ import annotations

from functools import lru_cache
from importlib import resources

from .model import ScenarioSpec
from .parser import parse

ORDER = (
    "bag",
    "guided-bag",
    "multipickup",
    "wand",
    "guided-wand",
    "ordered",
    "unordered",
    "alternative",
    "conditional",
    "boulder",
    "focused-boulder",
    "guided-boulder",
    "escape",
    "hint-escape",
    "carry",
    "guided-carry",
)


def scenario_source(name: str) -> str:
    return resources.files(__package__).joinpath("data", f"{name}.scen").read_text(encoding="utf-8")


@lru_cache(maxsize=None)
def load_scenario(name: str) -> ScenarioSpec:
    if name not in ORDER:
        raise KeyError(f"unknown scenario {name!r}; choose from {', '.join(ORDER)}")
    return parse(scenario_source(name))


def builtin_scenarios() -> list[ScenarioSpec]:
    return [load_scenario(n) for n in ORDER]
