"""Parser and pretty-printer for ``.scen`` scenario files.

The format is line oriented::

    NAME: boulder
    MAP:
    -----
    |.0.|
    -----
    ENDMAP
    LEGEND: '0'=boulder
    REGION: room 1 1 3 1
    OBJECT: wand of digging AT random IN room
    MONSTER: newt AT 3 1 hostile
    INVENTORY: pick-axe | wand of digging
    START: 1 1
    TASK: "Get past the boulder."
    SUCCESS: boulder_removed(2, 1)
    LIMITS: time=200 llm_calls=40

Lines starting with ``#`` outside the map block are comments.
"""

from __future__ import annotations

import itertools
import json
import re

from ..sim.items import UnknownItem, make_item
from ..sim.monsters import MONSTERS
from ..sim.world import BASE_GLYPHS, FEATURES, LEGEND_KINDS
from .model import (
    Atom,
    Combinator,
    Literal,
    Placement,
    RaggedMap,
    ScenarioSpec,
    ScenarioSyntaxError,
    SuccessExpr,
    UnknownAtom,
    UnknownGlyph,
    Where,
)
from .success import ATOMS, COMBINATORS, check_atom_args

_SECTION = re.compile(r"^([A-Z]+):\s?(.*)$")
_WHERE = r"random(?:\s+IN\s+[\w-]+)?|\d+\s+\d+"
_PLACEMENT = re.compile(
    rf"^(?P<desc>.+?)(?:\s+AT\s+(?P<where>{_WHERE}))?(?:\s+COUNT\s+(?P<lo>\d+)(?:-(?P<hi>\d+))?)?"
    r"(?:\s+(?P<att>hostile|peaceful|pet))?\s*$"
)
_LEGEND_ENTRY = re.compile(r"'(.)'\s*=\s*([a-z ]+?)\s*(?:,|$)")
_ATTITUDES = ("hostile", "peaceful", "pet")


def _where(text: str | None) -> Where:
    if text is None or text == "random":
        return Where(random=True)
    parts = text.split()
    if parts[0] == "random":
        return Where(random=True, region=parts[2])
    return Where(pos=(int(parts[0]), int(parts[1])))


def _string(text: str, line: int, col: int) -> str:
    text = text.strip()
    if not (text.startswith('"') and text.endswith('"') and len(text) >= 2):
        raise ScenarioSyntaxError("expected a double-quoted string", line, col)
    try:
        value = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ScenarioSyntaxError(f"bad string literal: {exc.msg}", line, col + exc.pos) from None
    if not isinstance(value, str):
        raise ScenarioSyntaxError("expected a double-quoted string", line, col)
    return value


# ---- success expressions

_TOKEN = re.compile(r'\s*(?:(?P<num>-?\d+)|(?P<str>"(?:[^"\\]|\\.)*")|(?P<punct>[(),])|(?P<word>[A-Za-z_][\w -]*))')


class _ExprParser:
    def __init__(self, text: str, line: int, col0: int):
        self.text = text
        self.line = line
        self.col0 = col0
        self.tokens: list[tuple[str, object, int]] = []
        pos = 0
        while pos < len(text):
            if text[pos:].strip() == "":
                break
            m = _TOKEN.match(text, pos)
            if not m or m.end() == pos:
                raise ScenarioSyntaxError(f"unexpected character {text[pos:].lstrip()[:1]!r}", line, col0 + pos)
            start = m.start(m.lastgroup)
            kind = m.lastgroup
            raw = m.group(kind)
            if kind == "num":
                value: object = int(raw)
            elif kind == "str":
                value = _string(raw, line, col0 + start)
            elif kind == "word":
                value = raw.strip()
            else:
                value = raw
            self.tokens.append((kind, value, col0 + start))
            pos = m.end()
        self.i = 0

    def peek(self):
        return self.tokens[self.i] if self.i < len(self.tokens) else ("eof", None, self.col0 + len(self.text))

    def take(self, kind: str, value=None):
        tok = self.peek()
        if tok[0] != kind or (value is not None and tok[1] != value):
            want = value if value is not None else kind
            got = "end of line" if tok[0] == "eof" else repr(tok[1])
            raise ScenarioSyntaxError(f"expected {want!r}, got {got}", self.line, tok[2])
        self.i += 1
        return tok

    def parse(self) -> SuccessExpr:
        expr = self.expr()
        tok = self.peek()
        if tok[0] != "eof":
            raise ScenarioSyntaxError(f"trailing input {tok[1]!r}", self.line, tok[2])
        return expr

    def expr(self) -> SuccessExpr:
        _, name, col = self.take("word")
        if name in ("true", "false") and self.peek()[1] != "(":
            return Literal(name == "true")
        if name not in COMBINATORS and name not in ATOMS:
            raise UnknownAtom(f"unknown success atom {name!r}", self.line, col)
        self.take("punct", "(")
        args: list = []
        if self.peek()[1] != ")":
            while True:
                args.append(self.expr() if name in COMBINATORS else self.value())
                if self.peek()[1] == ",":
                    self.i += 1
                    continue
                break
        self.take("punct", ")")
        if name in COMBINATORS:
            if name == "not" and len(args) != 1:
                raise ScenarioSyntaxError("not() takes exactly one argument", self.line, col)
            return Combinator(name, tuple(args))
        problem = check_atom_args(name, tuple(args))
        if problem:
            raise ScenarioSyntaxError(problem, self.line, col)
        return Atom(name, tuple(args))

    def value(self):
        kind, value, col = self.peek()
        if kind not in ("num", "str", "word"):
            raise ScenarioSyntaxError("expected an argument", self.line, col)
        self.i += 1
        return value


def parse_success(text: str, line: int = 1, col: int = 1) -> SuccessExpr:
    return _ExprParser(text, line, col).parse()


# ---- whole files


def parse(text: str) -> ScenarioSpec:
    """Parse scenario source into a validated :class:`ScenarioSpec`."""
    fields: dict = {"legend": [], "regions": [], "placements": []}
    origin: dict = {"regions": [], "placements": []}  # (line, col) of each entry for later checks
    map_rows: list[tuple[int, str]] = []
    lines = text.splitlines()
    seen: set[str] = set()
    i = 0
    while i < len(lines):
        lineno, raw = i + 1, lines[i]
        i += 1
        if not raw.strip() or raw.lstrip().startswith("#"):
            continue
        m = _SECTION.match(raw.rstrip())
        if not m:
            raise ScenarioSyntaxError(f"expected a SECTION: line, got {raw.strip()[:30]!r}", lineno, 1)
        key, body = m.group(1), m.group(2).strip()
        col = m.start(2) + 1
        if key in ("NAME", "MAP", "TASK", "GUIDE", "SUCCESS", "START", "LIMITS") and key in seen:
            raise ScenarioSyntaxError(f"duplicate {key} section", lineno, 1)
        seen.add(key)

        if key == "NAME":
            if not re.fullmatch(r"[\w-]+", body):
                raise ScenarioSyntaxError("NAME must be a single word", lineno, col)
            fields["name"] = body
        elif key == "MAP":
            while i < len(lines) and lines[i].rstrip("\r") != "ENDMAP":
                map_rows.append((i + 1, lines[i].rstrip("\r")))
                i += 1
            if i >= len(lines):
                raise ScenarioSyntaxError("MAP block has no ENDMAP", lineno, 1)
            i += 1
        elif key == "LEGEND":
            _parse_legend(body, lineno, col, fields["legend"])
        elif key == "REGION":
            parts = body.split()
            if len(parts) != 5 or not all(p.isdigit() for p in parts[1:]):
                raise ScenarioSyntaxError("REGION needs: name x1 y1 x2 y2", lineno, col)
            fields["regions"].append((parts[0], *map(int, parts[1:])))
            origin["regions"].append((lineno, col))
        elif key in ("OBJECT", "MONSTER", "FEATURE", "ENGRAVE"):
            fields["placements"].append(_parse_placement(key.lower(), body, lineno, col))
            origin["placements"].append((lineno, col))
        elif key == "INVENTORY":
            fields["placements"].append(Placement("inventory", _normalize_alts(body)))
            origin["placements"].append((lineno, col))
        elif key == "START":
            if not re.fullmatch(_WHERE, body):
                raise ScenarioSyntaxError("START needs 'x y', 'random' or 'random IN region'", lineno, col)
            fields["start"] = _where(body)
            origin["start"] = (lineno, col)
        elif key in ("TASK", "GUIDE"):
            fields[key.lower()] = _string(body, lineno, col)
        elif key == "SUCCESS":
            fields["success"] = parse_success(body, lineno, col)
            origin["success"] = (lineno, col)
        elif key == "LIMITS":
            for part in body.split():
                lm = re.fullmatch(r"(time|llm_calls)=(\d+)", part)
                if not lm:
                    raise ScenarioSyntaxError(f"bad limit {part!r}", lineno, col + body.index(part))
                value = int(lm.group(2))
                if value <= 0:
                    raise ScenarioSyntaxError("limits must be positive", lineno, col + body.index(part))
                fields["time_limit" if lm.group(1) == "time" else "llm_call_limit"] = value
        else:
            raise ScenarioSyntaxError(f"unknown section {key}", lineno, 1)

    for required in ("name", "task"):
        if required not in fields:
            raise ScenarioSyntaxError(f"missing {required.upper()} section", len(lines) or 1, 1)
    if not map_rows:
        raise ScenarioSyntaxError("missing MAP section", len(lines) or 1, 1)

    legend = dict(fields["legend"])
    width = len(map_rows[0][1])
    for lineno, row in map_rows:
        for x, ch in enumerate(row):
            if ch not in legend and ch not in BASE_GLYPHS:
                raise UnknownGlyph(f"undeclared map glyph {ch!r}", lineno, x + 1)
        if len(row) != width:
            raise RaggedMap(f"map row has length {len(row)}, expected {width}", lineno, min(len(row), width) + 1)

    fields["map"] = tuple(row for _, row in map_rows)
    fields["legend"] = tuple(fields["legend"])
    fields["regions"] = tuple(fields["regions"])
    fields["placements"] = tuple(fields["placements"])
    spec = ScenarioSpec(**fields)
    _check_references(spec, origin)
    return spec


def _normalize_alts(desc: str) -> str:
    return " | ".join(p.strip() for p in desc.split("|"))


def _parse_legend(body: str, lineno: int, col: int, out: list) -> None:
    pos = 0
    body = body.rstrip()
    while pos < len(body):
        m = _LEGEND_ENTRY.match(body, pos)
        if not m:
            raise ScenarioSyntaxError("LEGEND entries look like 'c'=kind", lineno, col + pos)
        glyph, kind = m.group(1), m.group(2)
        if kind not in LEGEND_KINDS:
            raise ScenarioSyntaxError(f"unknown tile kind {kind!r}", lineno, col + m.start(2))
        if glyph == " ":
            raise ScenarioSyntaxError("space cannot be redefined", lineno, col + m.start(1))
        out.append((glyph, kind))
        pos = m.end()
        while pos < len(body) and body[pos] == " ":
            pos += 1


def _parse_placement(what: str, body: str, lineno: int, col: int) -> Placement:
    m = _PLACEMENT.match(body)
    if not m:
        raise ScenarioSyntaxError(f"cannot read {what.upper()} line", lineno, col)
    desc = m.group("desc").strip()
    att = m.group("att")
    if att and what != "monster":
        raise ScenarioSyntaxError("only monsters have an attitude", lineno, col + m.start("att"))
    lo = int(m.group("lo") or 1)
    hi = int(m.group("hi") or lo)
    if not 0 < lo <= hi:
        raise ScenarioSyntaxError("COUNT needs 1 <= lo <= hi", lineno, col + m.start("lo"))
    if what == "engraving" or what == "engrave":
        desc = _string(desc, lineno, col)
        what = "engraving"
        if m.group("where") is None or m.group("where").startswith("random"):
            raise ScenarioSyntaxError("ENGRAVE needs a fixed position", lineno, col)
    else:
        desc = _normalize_alts(desc)
    return Placement(what, desc, _where(m.group("where")), (lo, hi), att or "hostile")


def _check_references(spec: ScenarioSpec, origin: dict | None = None) -> None:
    origin = origin or {}
    regions = {r[0] for r in spec.regions}

    def check_where(where: Where | None, label: str, at: tuple[int, int]) -> None:
        if where is None:
            return
        if where.region is not None and where.region not in regions:
            raise ScenarioSyntaxError(f"{label} refers to unknown region {where.region!r}", *at)
        if where.pos is not None:
            x, y = where.pos
            if not (0 <= x < spec.width and 0 <= y < spec.height):
                raise ScenarioSyntaxError(f"{label} position {where.pos} is outside the map", *at)

    check_where(spec.start, "START", origin.get("start", (0, 0)))
    counter = itertools.count(1)
    places = origin.get("placements") or [(0, 0)] * len(spec.placements)
    for p, at in zip(spec.placements, places):
        check_where(p.where, p.what.upper(), at)
        for choice in p.choices() if p.what != "engraving" else ():
            if p.what == "monster" and choice not in MONSTERS:
                raise ScenarioSyntaxError(f"unknown monster {choice!r}", *at)
            if p.what == "feature" and choice not in FEATURES:
                raise ScenarioSyntaxError(f"unknown feature {choice!r}", *at)
            if p.what in ("object", "inventory"):
                try:
                    make_item(choice, lambda: next(counter))
                except UnknownItem:
                    raise ScenarioSyntaxError(f"unknown item {choice!r}", *at) from None
    spots = origin.get("regions") or [(0, 0)] * len(spec.regions)
    for (name, x1, y1, x2, y2), at in zip(spec.regions, spots):
        if not (0 <= x1 <= x2 < spec.width and 0 <= y1 <= y2 < spec.height):
            raise ScenarioSyntaxError(f"region {name!r} does not fit the map", *at)
    _check_region_atoms(spec.success, regions, origin.get("success", (0, 0)))


def _check_region_atoms(expr: SuccessExpr, regions: set[str], at: tuple[int, int] = (0, 0)) -> None:
    if isinstance(expr, Combinator):
        for c in expr.children:
            _check_region_atoms(c, regions, at)
    elif isinstance(expr, Atom):
        if expr.name == "escaped_region" and expr.args[0] not in regions:
            raise ScenarioSyntaxError(f"escaped_region refers to unknown region {expr.args[0]!r}", *at)
        if expr.name == "item_in_region" and expr.args[1] not in regions:
            raise ScenarioSyntaxError(f"item_in_region refers to unknown region {expr.args[1]!r}", *at)


# ---- printing


def format_success(expr: SuccessExpr) -> str:
    if isinstance(expr, Literal):
        return "true" if expr.value else "false"
    if isinstance(expr, Combinator):
        return f"{expr.op}({', '.join(format_success(c) for c in expr.children)})"
    args = ", ".join(json.dumps(a) if isinstance(a, str) else str(a) for a in expr.args)
    return f"{expr.name}({args})"


def _format_where(where: Where | None) -> str:
    if where is None or (where.random and where.region is None):
        return "random"
    if where.random:
        return f"random IN {where.region}"
    return f"{where.pos[0]} {where.pos[1]}"


def to_text(spec: ScenarioSpec) -> str:
    """Canonical source for ``spec``; ``parse(to_text(s)) == s``."""
    out = [f"NAME: {spec.name}", "MAP:", *spec.map, "ENDMAP"]
    if spec.legend:
        out.append("LEGEND: " + ", ".join(f"'{g}'={k}" for g, k in spec.legend))
    for r in spec.regions:
        out.append("REGION: " + " ".join(map(str, r)))
    for p in spec.placements:
        if p.what == "inventory":
            out.append(f"INVENTORY: {p.descriptor}")
            continue
        head = "ENGRAVE" if p.what == "engraving" else p.what.upper()
        desc = json.dumps(p.descriptor) if p.what == "engraving" else p.descriptor
        line = f"{head}: {desc} AT {_format_where(p.where)}"
        if p.count != (1, 1):
            line += f" COUNT {p.count[0]}-{p.count[1]}"
        if p.what == "monster":
            line += f" {p.attitude}"
        out.append(line)
    out.append(f"START: {_format_where(spec.start)}")
    out.append(f"TASK: {json.dumps(spec.task)}")
    if spec.guide is not None:
        out.append(f"GUIDE: {json.dumps(spec.guide)}")
    out.append(f"SUCCESS: {format_success(spec.success)}")
    out.append(f"LIMITS: time={spec.time_limit} llm_calls={spec.llm_call_limit}")
    return "\n".join(out) + "\n"
