"""The LLM agent loop: short-term memory, prompt assembly, response parsing and skill dispatch."""

from __future__ import annotations

import json
import re
import threading
from dataclasses import asdict, dataclass, field
from enum import Enum

from .backends import Backend, BackendError, CompletionOptions, request_digest
from .describe import CLOSE_MONSTER_STEPS, DescribeConfig, ObservationText, describe, estimate_tokens
from .scenarios.model import SuccessExpr
from .scenarios.success import evaluate_success
from .sim.engine import compute_score
from .sim.state import GameState, Status
from .skills import (
    REGISTRY,
    SkillCall,
    SkillContext,
    SkillError,
    SkillSpec,
    Status_,
    TraceEntry,
    execute,
    render_skills,
    validate,
)
from .tracker import TrackerState, update

MEMORY_CAP = 500
STALL_LIMIT = 10
TRUNCATION_MARK = "..."


class Category(str, Enum):
    SYSTEM = "system"
    ASSISTANT = "assistant"
    HUMAN = "human"


ROLES = {Category.SYSTEM: "system", Category.ASSISTANT: "assistant", Category.HUMAN: "user"}


@dataclass
class Message:
    category: Category
    text: str
    turn: int = 0
    token_cost: int = field(init=False)

    def __post_init__(self):
        self.token_cost = estimate_tokens(self.text)


def truncate_to(text: str, cap: int) -> str:
    """Keep the tail of ``text`` so that it costs at most ``cap`` tokens."""
    if estimate_tokens(text) <= cap:
        return text
    keep = max(0, 4 * cap - len(TRUNCATION_MARK))
    if keep == 0:
        return TRUNCATION_MARK[: 4 * cap]
    return TRUNCATION_MARK + text[-keep:]


@dataclass
class AgentMemory:
    cap: int = MEMORY_CAP
    messages: list[Message] = field(default_factory=list)

    @property
    def total(self) -> int:
        return sum(m.token_cost for m in self.messages)

    def push(self, msg: Message) -> list[Message]:
        """Append ``msg`` and evict the oldest messages until the cap holds; returns the evicted."""
        if msg.token_cost > self.cap:
            msg = Message(msg.category, truncate_to(msg.text, self.cap), msg.turn)
        self.messages.append(msg)
        evicted = []
        total = self.total
        while total > self.cap:
            old = self.messages.pop(0)
            total -= old.token_cost
            evicted.append(old)
        return evicted


def push_message(memory: AgentMemory, msg: Message) -> list[Message]:
    return memory.push(msg)


@dataclass
class AgentConfig:
    memory_cap: int = MEMORY_CAP
    llm_stall_limit: int = STALL_LIMIT
    temperature: float = 0.0
    close_monster_steps: int = CLOSE_MONSTER_STEPS
    low_health_fraction: float = 0.5
    time_limit: int | None = None
    llm_call_limit: int | None = None
    allow_finish_task: bool = True
    replicate_occlusion_bug: bool = False
    max_tokens: int = 512
    cancel: threading.Event | None = None


class ParseError(ValueError):
    pass


@dataclass(frozen=True)
class ParsedCall:
    thoughts: str
    skill: str
    params: dict

    @property
    def call(self) -> SkillCall:
        return SkillCall(self.skill, dict(self.params))

    def render(self) -> str:
        args = ", ".join(f"{k}={json.dumps(v)}" for k, v in self.params.items())
        return f"{self.skill}({args})"


_FENCE = re.compile(r"^```(?:json)?\s*(.*?)\s*```$", re.S)


def parse_response(text: str, allowed: set[str] | None = None) -> ParsedCall:
    """Parse ``{"thoughts": ..., "skill": ..., "params": {...}}`` and validate it against the registry."""
    body = text.strip()
    fenced = _FENCE.match(body)
    if fenced:
        body = fenced.group(1)
    try:
        data = json.loads(body)
    except json.JSONDecodeError:
        raise ParseError("malformed structured output") from None
    if not isinstance(data, dict):
        raise ParseError("malformed structured output")
    skill = data.get("skill")
    if not isinstance(skill, str) or not skill:
        raise ParseError("missing skill name")
    thoughts = data.get("thoughts", "")
    if not isinstance(thoughts, str):
        raise ParseError("thoughts must be a string")
    params = data.get("params", {})
    if params is None:
        params = {}
    if not isinstance(params, dict):
        raise ParseError("params must be an object")
    if allowed is not None and skill not in allowed:
        raise ParseError(f"unknown skill '{skill}'")
    try:
        coerced = validate(SkillCall(skill, params))
    except SkillError as exc:
        raise ParseError(str(exc)) from None
    return ParsedCall(thoughts, skill, coerced)


OUTPUT_FORMAT = '{"thoughts": "<your reasoning>", "skill": "<skill name>", "params": {"<name>": <value>}}'


def task_description(task: str, skills: list[SkillSpec], guide: str | None = None) -> str:
    parts = [
        "You can use the following skills:",
        render_skills(skills),
        "",
        f"Your task: {task}",
    ]
    if guide:
        parts += ["", "Advice for this task:", guide]
    parts += [
        "",
        "Think step by step before choosing: first explain your reasoning in thoughts, then pick exactly one skill.",
        "Answer with a single JSON object in this format:",
        OUTPUT_FORMAT,
    ]
    return "\n".join(parts)


def build_prompt(
    memory: AgentMemory,
    observation: ObservationText,
    task: str,
    skills: list[SkillSpec] | None = None,
    guide: str | None = None,
) -> list[dict]:
    """Memory in arrival order, then the observation, then the task and output format."""
    skills = list(REGISTRY) if skills is None else skills
    out = [{"role": ROLES[m.category], "content": m.text} for m in memory.messages]
    out.append({"role": "system", "content": observation.rendered})
    out.append({"role": "user", "content": task_description(task, skills, guide)})
    return out


class Outcome(str, Enum):
    TASK_FINISHED = "TaskFinished"
    GAME_ENDED = "GameEnded"
    TIME_LIMIT = "TimeLimit"
    TIMEOUT = "Timeout"
    CALL_LIMIT = "CallLimit"
    BACKEND_UNAVAILABLE = "BackendUnavailable"
    CANCELLED = "Cancelled"


@dataclass
class CallRecord:
    turn: int
    prompt_digest: str
    thoughts: str
    skill: str | None
    params: dict
    outcome: str
    events: list[str]
    messages: list[str]


@dataclass
class RunRecord:
    calls: list[CallRecord] = field(default_factory=list)
    outcome: Outcome | None = None
    score: int = 0
    depth: int = 1
    max_depth: int = 1
    xp_level: int = 1
    turns: int = 0
    llm_calls: int = 0
    death_cause: str | None = None
    success: bool | None = None
    diagnostic: str | None = None
    trace: list[TraceEntry] = field(default_factory=list, repr=False)

    def summary(self) -> dict:
        out = {
            "outcome": self.outcome.value if self.outcome else None,
            "score": self.score,
            "depth": self.depth,
            "max_depth": self.max_depth,
            "xp_level": self.xp_level,
            "turns": self.turns,
            "llm_calls": self.llm_calls,
        }
        if self.death_cause is not None:
            out["death_cause"] = self.death_cause
        if self.success is not None:
            out["success"] = self.success
        if self.diagnostic is not None:
            out["diagnostic"] = self.diagnostic
        return out

    def to_jsonl(self) -> str:
        lines = [json.dumps(asdict(c), sort_keys=True) for c in self.calls]
        lines.append(json.dumps({"summary": self.summary()}, sort_keys=True))
        return "\n".join(lines) + "\n"


def finish_record(record: RunRecord, state: GameState, outcome: Outcome, success: SuccessExpr | None = None) -> RunRecord:
    p = state.player
    record.outcome = outcome
    record.score = compute_score(state)
    record.depth = p.depth
    record.max_depth = p.max_depth
    record.xp_level = p.xp_level
    record.turns = state.turn
    record.death_cause = state.death_cause if state.done is Status.DEAD else None
    if success is not None:
        record.success = evaluate_success(success, state)
    return record


def advertised_skills(config: AgentConfig) -> list[SkillSpec]:
    return [s for s in REGISTRY if config.allow_finish_task or s.name != "finish_task"]


def run_task(
    state: GameState,
    tracker: TrackerState | None,
    backend: Backend,
    task: str,
    config: AgentConfig | None = None,
    guide: str | None = None,
    success: SuccessExpr | None = None,
    keep_trace: bool = False,
) -> RunRecord:
    """Prompt, parse, execute; repeat until the task is declared finished or the run has to stop."""
    config = config or AgentConfig()
    if tracker is None:
        tracker = TrackerState(low_health_fraction=config.low_health_fraction, replicate_occlusion_bug=config.replicate_occlusion_bug)
    if tracker.last_depth is None:
        update(tracker, state, [])
    memory = AgentMemory(config.memory_cap)
    skills = advertised_skills(config)
    allowed = {s.name for s in skills}
    options = CompletionOptions(config.temperature, True, config.max_tokens)
    describe_cfg = DescribeConfig(close_steps=config.close_monster_steps)
    record = RunRecord()
    ctx = SkillContext(state, tracker, trace=record.trace if keep_trace else None, turn_limit=config.time_limit)
    stall = 0

    def done(outcome: Outcome) -> RunRecord:
        return finish_record(record, state, outcome, success)

    while True:
        if state.done is not Status.RUNNING:
            return done(Outcome.GAME_ENDED)
        if config.time_limit is not None and state.turn >= config.time_limit:
            return done(Outcome.TIME_LIMIT)
        if config.llm_call_limit is not None and record.llm_calls >= config.llm_call_limit:
            return done(Outcome.CALL_LIMIT)
        if config.cancel is not None and config.cancel.is_set():
            return done(Outcome.CANCELLED)

        observation = describe(tracker, state, describe_cfg)
        prompt = build_prompt(memory, observation, task, skills, guide)
        digest = request_digest(prompt)
        turn_before = state.turn
        try:
            text = backend.complete(prompt, options)
        except BackendError as exc:
            record.diagnostic = f"{type(exc).__name__}: {exc}"
            return done(Outcome.BACKEND_UNAVAILABLE)
        record.llm_calls += 1

        try:
            parsed = parse_response(text, allowed)
        except ParseError as exc:
            note = f"Your last answer could not be used: {exc}."
            memory.push(Message(Category.SYSTEM, note, state.turn))
            record.calls.append(CallRecord(state.turn, digest, "", None, {}, "ParseError", [], [note]))
        else:
            memory.push(Message(Category.ASSISTANT, f"{parsed.thoughts}\nChosen skill: {parsed.render()}".strip(), state.turn))
            result = execute(parsed.call, ctx)
            texts = [e.text for e in result.events if e.text]
            for t in texts:
                memory.push(Message(Category.SYSTEM, t, state.turn))
            summary = result.summary()
            memory.push(Message(Category.SYSTEM, summary, state.turn))
            record.calls.append(
                CallRecord(
                    state.turn,
                    digest,
                    parsed.thoughts,
                    parsed.skill,
                    dict(parsed.params),
                    result.status.value,
                    [e.kind.value for e in result.events],
                    [*texts, summary],
                )
            )
            if result.status is Status_.TASK_FINISHED:
                return done(Outcome.TASK_FINISHED)

        stall = stall + 1 if state.turn == turn_before else 0
        if state.done is not Status.RUNNING:
            return done(Outcome.GAME_ENDED)
        if stall >= config.llm_stall_limit:
            return done(Outcome.TIMEOUT)
