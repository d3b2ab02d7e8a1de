"""ISO 9241-11 style usability metrics: completion rate, TBE, ORE and SUS.

Everything is computed at full precision; rounding only happens when a report
is rendered (TBE 4 decimals, ORE 2, SUS 1, times to whole seconds).
"""
from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from statistics import fmean

from .errors import EmptyLog, MalformedResponse, NonPositiveTime
from .federation import render_aligned

SESSION_HEADER = ["participant", "task", "success", "time_seconds"]
SUS_HEADER = ["participant"] + [f"q{i}" for i in range(1, 11)]


@dataclass(frozen=True)
class TaskOutcome:
    participant: str
    task: str
    success: int
    time_seconds: float

    def __post_init__(self):
        if self.success not in (0, 1):
            raise ValueError("success must be 0 or 1")


@dataclass(frozen=True)
class SusResponse:
    participant: str
    answers: tuple[int, ...]

    def __post_init__(self):
        if len(self.answers) != 10:
            raise MalformedResponse(f"{self.participant}: expected 10 answers, got {len(self.answers)}")
        if any(not isinstance(a, int) or not 1 <= a <= 5 for a in self.answers):
            raise MalformedResponse(f"{self.participant}: answers must be integers 1..5")


@dataclass
class StudyLog:
    outcomes: list[TaskOutcome] = field(default_factory=list)
    sus: list[SusResponse] = field(default_factory=list)

    def __post_init__(self):
        pairs = [(o.participant, o.task) for o in self.outcomes]
        if len(set(pairs)) != len(pairs):
            raise ValueError("duplicate (participant, task) outcome")
        people = [r.participant for r in self.sus]
        if len(set(people)) != len(people):
            raise ValueError("duplicate participant in SUS responses")

    def tasks(self) -> list[str]:
        return list(dict.fromkeys(o.task for o in self.outcomes))

    def for_task(self, task: str) -> list[TaskOutcome]:
        return [o for o in self.outcomes if o.task == task]


def _checked(outcomes) -> list[TaskOutcome]:
    outcomes = list(outcomes)
    if not outcomes:
        raise EmptyLog("no task outcomes")
    for o in outcomes:
        if not o.time_seconds > 0:
            raise NonPositiveTime(f"{o.participant}/{o.task}: time must be positive")
    return outcomes


def _outcomes(log_or_outcomes) -> list[TaskOutcome]:
    if isinstance(log_or_outcomes, StudyLog):
        return _checked(log_or_outcomes.outcomes)
    return _checked(log_or_outcomes)


def completion_rate(outcomes) -> float:
    """Percentage of outcomes that succeeded."""
    outcomes = list(outcomes)
    if not outcomes:
        raise EmptyLog("no task outcomes")
    return 100.0 * sum(o.success for o in outcomes) / len(outcomes)


def time_based_efficiency(log) -> float:
    """Goals per second: sum of success/time over every (task, participant), divided by N*R.

    N*R is the number of cells in the task-by-participant grid, so a log in which some
    participant skipped a task is averaged over the attempts actually recorded.
    """
    outcomes = _outcomes(log)
    return math.fsum(o.success / o.time_seconds for o in outcomes) / len(outcomes)


def overall_relative_efficiency(log) -> float:
    """Share (in percent) of total time spent on tasks that were completed."""
    outcomes = _outcomes(log)
    total = math.fsum(o.time_seconds for o in outcomes)
    # ratio first so an all-success log is exactly 100
    return 100.0 * (math.fsum(o.success * o.time_seconds for o in outcomes) / total)


def sus_score(response: SusResponse) -> float:
    if not isinstance(response, SusResponse):
        response = SusResponse("?", tuple(response))
    odd = sum(response.answers[0::2]) - 5
    even = 25 - sum(response.answers[1::2])
    return (odd + even) * 2.5


def mean_sus(scores) -> float:
    scores = list(scores)
    if not scores:
        raise EmptyLog("no SUS scores")
    return fmean(scores)


@dataclass(frozen=True)
class TaskSummary:
    task: str
    attempts: int
    successes: int
    completion_rate: float
    mean_time: float
    tbe: float
    ore: float


@dataclass(frozen=True)
class StudyReport:
    tasks: list[TaskSummary]
    overall_tbe: float | None
    overall_ore: float | None
    sus_scores: dict[str, float]
    mean_sus: float | None

    def to_dict(self, rounded: bool = False) -> dict:
        r = (lambda x, d: None if x is None else round(x, d)) if rounded else (lambda x, d: x)
        return {
            "tasks": [
                {
                    "task": t.task,
                    "attempts": t.attempts,
                    "successes": t.successes,
                    "completion_rate": r(t.completion_rate, 2),
                    "mean_time_seconds": round(t.mean_time) if rounded else t.mean_time,
                    "tbe": r(t.tbe, 4),
                    "ore": r(t.ore, 2),
                }
                for t in self.tasks
            ],
            "overall_tbe": r(self.overall_tbe, 4),
            "overall_ore": r(self.overall_ore, 2),
            "sus_scores": {p: r(s, 1) for p, s in self.sus_scores.items()},
            "mean_sus": r(self.mean_sus, 1),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(rounded=True), indent=2)

    def to_text(self) -> str:
        rows = [
            [t.task, str(t.attempts), str(t.successes), f"{t.completion_rate:.2f}%",
             f"{t.mean_time:.0f}", f"{t.tbe:.4f}", f"{t.ore:.2f}%"]
            for t in self.tasks
        ]
        text = render_aligned(["TASK", "N", "SUCCESS", "COMPLETION", "AVG TOT (s)", "TBE (goals/s)", "ORE"], rows)
        lines = [text.rstrip("\n")]
        if self.overall_tbe is not None:
            lines.append(f"overall TBE: {self.overall_tbe:.4f} goals/s")
            lines.append(f"overall ORE: {self.overall_ore:.2f}%")
        if self.mean_sus is not None:
            lines.append(f"mean SUS: {self.mean_sus:.1f} ({len(self.sus_scores)} participants)")
        return "\n".join(lines) + "\n"


def summarize_study(log: StudyLog) -> StudyReport:
    tasks = []
    for task in log.tasks():
        outcomes = _checked(log.for_task(task))
        tasks.append(
            TaskSummary(
                task=task,
                attempts=len(outcomes),
                successes=sum(o.success for o in outcomes),
                completion_rate=completion_rate(outcomes),
                mean_time=fmean(o.time_seconds for o in outcomes),
                tbe=time_based_efficiency(outcomes),
                ore=overall_relative_efficiency(outcomes),
            )
        )
    scores = {r.participant: sus_score(r) for r in log.sus}
    return StudyReport(
        tasks=tasks,
        overall_tbe=time_based_efficiency(log) if log.outcomes else None,
        overall_ore=overall_relative_efficiency(log) if log.outcomes else None,
        sus_scores=scores,
        mean_sus=mean_sus(scores.values()) if scores else None,
    )


def _csv_rows(text: str, expected_header: list[str], what: str):
    reader = csv.reader(io.StringIO(text, newline=""))
    header = next(reader, None)
    if header != expected_header:
        raise MalformedResponse(f"{what} header must be exactly {','.join(expected_header)}")
    for lineno, row in enumerate(reader, start=2):
        if not row:
            continue
        if len(row) != len(expected_header):
            raise MalformedResponse(f"{what} line {lineno}: expected {len(expected_header)} cells")
        yield lineno, row


def read_sessions(text: str) -> list[TaskOutcome]:
    out = []
    for lineno, (participant, task, success, seconds) in _csv_rows(text, SESSION_HEADER, "session log"):
        try:
            out.append(TaskOutcome(participant, task, int(success), float(seconds)))
        except ValueError as exc:
            raise MalformedResponse(f"session log line {lineno}: {exc}") from exc
    return out


def read_sus(text: str) -> list[SusResponse]:
    out = []
    for lineno, row in _csv_rows(text, SUS_HEADER, "SUS file"):
        try:
            answers = tuple(int(a) for a in row[1:])
        except ValueError as exc:
            raise MalformedResponse(f"SUS file line {lineno}: {exc}") from exc
        out.append(SusResponse(row[0], answers))
    return out
