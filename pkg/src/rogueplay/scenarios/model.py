"""Data model for scenario files: placements, success expressions, errors."""

from __future__ import annotations

from dataclasses import dataclass, field


class ScenarioError(ValueError):
    """Base class for scenario diagnostics; carries a 1-based line and column."""

    def __init__(self, message: str, line: int = 0, col: int = 0):
        self.line = line
        self.col = col
        self.message = message
        super().__init__(f"{line}:{col}: {message}" if line else message)


class ScenarioSyntaxError(ScenarioError):
    pass


class UnknownGlyph(ScenarioError):
    pass


class RaggedMap(ScenarioError):
    pass


class UnknownAtom(ScenarioError):
    pass


@dataclass(frozen=True)
class Where:
    random: bool = False
    pos: tuple[int, int] | None = None
    region: str | None = None


@dataclass(frozen=True)
class Placement:
    what: str  # object | monster | feature | engraving | inventory
    descriptor: str  # alternatives separated by " | "
    where: Where | None = None
    count: tuple[int, int] = (1, 1)
    attitude: str = "hostile"

    def choices(self) -> list[str]:
        return [c.strip() for c in self.descriptor.split("|")]


@dataclass(frozen=True)
class Atom:
    name: str
    args: tuple = ()


@dataclass(frozen=True)
class Combinator:
    op: str  # all | any | not | ordered
    children: tuple = ()


@dataclass(frozen=True)
class Literal:
    value: bool


SuccessExpr = Atom | Combinator | Literal


@dataclass(frozen=True)
class ScenarioSpec:
    name: str
    map: tuple[str, ...]
    task: str
    success: SuccessExpr = Literal(True)
    legend: tuple[tuple[str, str], ...] = ()
    regions: tuple[tuple[str, int, int, int, int], ...] = ()
    placements: tuple[Placement, ...] = ()
    start: Where = field(default_factory=lambda: Where(random=True))
    guide: str | None = None
    time_limit: int = 200
    llm_call_limit: int = 40

    @property
    def width(self) -> int:
        return len(self.map[0]) if self.map else 0

    @property
    def height(self) -> int:
        return len(self.map)

    @property
    def full_task(self) -> str:
        return self.task if not self.guide else f"{self.task}\n{self.guide}"
