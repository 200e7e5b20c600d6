"""Batch runner and reports: seeded runs, per-run logs and aggregated metrics."""

from __future__ import annotations

import json
import math
import statistics
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, replace
from pathlib import Path
from typing import Callable

from .agent import AgentConfig, Outcome, RunRecord, run_task
from .backends import Backend, Cassette, CassetteBackend
from .baseline import run_baseline
from .scenarios.builtin import load_scenario
from .scenarios.solutions import solution_backend
from .sim.state import Status
from .sim.world import new_game
from .tracker import TrackerState

FULL_GAME = "full-game"
FULL_GAME_TIME_LIMIT = 5000
FULL_GAME_TASK = (
    "Play the game. Go as deep into the dungeon as you can, gain experience and collect gold, and stay alive."
)
AGENTS = ("llm", "handcrafted", "scripted")
RESULTS = ("Success", "Fail", "Death", "Timeout", "TaskFinished")


@dataclass
class RunSummary:
    agent: str
    target: str
    seed: int
    outcome: str
    cause: str | None
    score: int
    max_depth: int
    xp_level: int
    turns: int
    llm_calls: int


def censor(text: str) -> str:
    return text.replace("NetHack", "the game").replace("nethack", "the game")


def classify(record: RunRecord, state, full_game: bool) -> tuple[str, str | None]:
    """Exactly one of Success, Fail, Death, Timeout, TaskFinished."""
    if state.done is Status.DEAD:
        return "Death", state.death_cause
    if full_game:
        if state.done is Status.WON:
            return "Success", None
        if record.outcome is Outcome.TIMEOUT:
            return "Timeout", None
        if record.outcome is Outcome.TASK_FINISHED:
            return "TaskFinished", None
        return "Fail", record.outcome.value if record.outcome else None
    if record.success:
        return "Success", None
    if record.outcome is Outcome.TIMEOUT:
        return "Timeout", None
    return "Fail", record.outcome.value if record.outcome else None


def run_one(
    agent: str,
    target: str,
    seed: int,
    backend: Backend | None = None,
    config: AgentConfig | None = None,
    censor_task: bool = False,
    full_game_time_limit: int = FULL_GAME_TIME_LIMIT,
    keep_trace: bool = False,
) -> tuple[RunSummary, RunRecord]:
    """Play one seeded run of ``target`` (a builtin scenario name or ``full-game``)."""
    if agent not in AGENTS:
        raise ValueError(f"unknown agent {agent!r}; choose from {', '.join(AGENTS)}")
    full = target == FULL_GAME
    spec = None if full else load_scenario(target)
    state = new_game(spec, seed)
    success = None if full else spec.success
    base = config or AgentConfig()
    tracker = TrackerState(low_health_fraction=base.low_health_fraction, replicate_occlusion_bug=base.replicate_occlusion_bug)
    if agent == "handcrafted":
        limit = full_game_time_limit if full else spec.time_limit
        record = run_baseline(state, tracker, time_limit=limit, success=success, keep_trace=keep_trace)
    else:
        if agent == "scripted" and backend is None:
            if full:
                raise ValueError("the scripted agent has no full-game solution; pass a backend")
            backend = solution_backend(target)
        if backend is None:
            raise ValueError("the llm agent needs a backend")
        cfg = replace(base)
        if full:
            cfg.time_limit = full_game_time_limit
            cfg.allow_finish_task = False
            task, guide = FULL_GAME_TASK, None
        else:
            cfg.time_limit = spec.time_limit
            cfg.llm_call_limit = spec.llm_call_limit
            task, guide = spec.task, spec.guide
        if censor_task:
            task = censor(task)
            guide = censor(guide) if guide else guide
        record = run_task(state, tracker, backend, task, cfg, guide=guide, success=success, keep_trace=keep_trace)
    outcome, cause = classify(record, state, full)
    summary = RunSummary(agent, target, seed, outcome, cause, record.score, record.max_depth, record.xp_level, record.turns, record.llm_calls)
    return summary, record


# ---------------------------------------------------------------- aggregation


def mean_stderr(values: list[float]) -> tuple[float, float]:
    """Mean and standard error (sample standard deviation over sqrt(n)); n=1 gives 0."""
    if not values:
        raise ValueError("need at least one value")
    mean = statistics.fmean(values)
    if len(values) == 1:
        return mean, 0.0
    return mean, statistics.stdev(values) / math.sqrt(len(values))


def fmt(values: list[float]) -> str:
    m, se = mean_stderr(values)
    return f"{m:.2f} ± {se:.2f}"


@dataclass
class BatchReport:
    summaries: list[RunSummary]
    metrics: dict[str, tuple[float, float]] = field(default_factory=dict)
    outcomes: dict[str, int] = field(default_factory=dict)
    deaths: dict[str, int] = field(default_factory=dict)
    success: dict[str, str] = field(default_factory=dict)

    @classmethod
    def of(cls, summaries: list[RunSummary]) -> "BatchReport":
        if not summaries:
            raise ValueError("a report needs at least one run")
        ordered = sorted(summaries, key=lambda s: (s.agent, s.target, s.seed))
        rep = cls(ordered)
        for name in ("score", "max_depth", "xp_level", "turns", "llm_calls"):
            rep.metrics[name] = mean_stderr([getattr(s, name) for s in ordered])
        rep.outcomes = dict(sorted(Counter(s.outcome for s in ordered).items()))
        rep.deaths = dict(sorted(Counter(s.cause for s in ordered if s.outcome == "Death").items()))
        by_target: dict[str, list[RunSummary]] = {}
        for s in ordered:
            by_target.setdefault(s.target, []).append(s)
        rep.success = {t: f"{sum(x.outcome == 'Success' for x in runs)}/{len(runs)}" for t, runs in by_target.items()}
        return rep

    def to_json(self) -> dict:
        return {
            "runs": [asdict(s) for s in self.summaries],
            "metrics": {k: {"mean": m, "stderr": se} for k, (m, se) in self.metrics.items()},
            "outcomes": self.outcomes,
            "deaths": self.deaths,
            "success": self.success,
        }


def report(summaries: list[RunSummary]) -> str:
    """Plain-text table: metrics as mean ± stderr, success rates and outcome/death histograms."""
    rep = BatchReport.of(summaries)
    cols = [("Score", "score"), ("Depth", "max_depth"), ("Level", "xp_level"), ("Time", "turns")]
    lines = [f"runs: {len(rep.summaries)}"]
    lines.append(" | ".join(f"{title}: {m:.2f} ± {se:.2f}" for title, key in cols for m, se in [rep.metrics[key]]))
    lines.append("success: " + ", ".join(f"{t} {frac}" for t, frac in rep.success.items()))
    lines.append("outcomes:")
    lines += [f"  {name}: {n}" for name, n in rep.outcomes.items()]
    if rep.deaths:
        lines.append("death causes:")
        lines += [f"  {cause}: {n}" for cause, n in rep.deaths.items()]
    return "\n".join(lines)


# ---------------------------------------------------------------- batches


BackendFactory = Callable[[str, int], Backend | None]


def _job(args) -> tuple[RunSummary, RunRecord, list[dict] | None]:
    agent, target, seed, factory, config, censor_task, out = args
    backend = factory(target, seed) if factory else None
    if backend is None and agent == "scripted" and target != FULL_GAME:
        backend = solution_backend(target)
    cassette = None
    if backend is not None and agent != "handcrafted" and not isinstance(backend, CassetteBackend):
        cassette = Cassette()
        backend = CassetteBackend(cassette, "record", backend)
    summary, record = run_one(agent, target, seed, backend, config, censor_task)
    return summary, record, cassette.entries if cassette else None


def run_batch(
    agent: str,
    target: str,
    n: int,
    base_seed: int = 0,
    backend_factory: BackendFactory | None = None,
    config: AgentConfig | None = None,
    out: str | Path | None = None,
    censor_task: bool = False,
    workers: int = 1,
) -> BatchReport:
    """Run seeds base_seed..base_seed+n-1, write one log per run and return the aggregate."""
    if n < 1:
        raise ValueError("n must be at least 1")
    if target != FULL_GAME:
        load_scenario(target)
    if agent == "llm" and backend_factory is None:
        raise ValueError("the llm agent needs a backend")
    jobs = [(agent, target, seed, backend_factory, config, censor_task, out) for seed in range(base_seed, base_seed + n)]
    if workers > 1:
        with ProcessPoolExecutor(workers) as pool:
            results = list(pool.map(_job, jobs))
    else:
        results = [_job(j) for j in jobs]
    summaries = [r[0] for r in results]
    rep = BatchReport.of(summaries)
    if out is not None:
        out = Path(out)
        out.mkdir(parents=True, exist_ok=True)
        for summary, record, cassette in results:
            stem = f"{agent}-{target}-{summary.seed}"
            (out / f"{stem}.jsonl").write_text(record.to_jsonl(), encoding="utf-8")
            if cassette is not None:
                Cassette(cassette).save(out / f"{stem}.cassette.jsonl")
        (out / "report.txt").write_text(report(summaries) + "\n", encoding="utf-8")
        (out / "summary.json").write_text(json.dumps(rep.to_json(), indent=2, sort_keys=True) + "\n", encoding="utf-8")
    return rep
