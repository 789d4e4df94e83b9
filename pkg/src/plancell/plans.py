"""Enumerate solution plans of an AND/OR project graph.

A solution picks one precondition group for every task it needs, starting
from the exit task and chaining backwards; the solution's task set is
exactly the backward closure of the exit under those choices. Each solution
is linearized into a deterministic step sequence: tasks are emitted in
waves of readiness (all chosen predecessors already emitted), smallest id
first inside a wave.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import DataError
from .project import ProjectGraph

DEFAULT_MAX_PLANS = 10_000


@dataclass(frozen=True)
class Plan:
    """An ordered, duplicate-free sequence of task or action identifiers."""

    id: str
    steps: tuple[str, ...]

    def __post_init__(self):
        if not self.steps:
            raise DataError(f"plan {self.id!r}: empty step sequence")
        if len(set(self.steps)) != len(self.steps):
            raise DataError(f"plan {self.id!r}: duplicate steps")


@dataclass(frozen=True)
class Solution:
    """A task subset plus the precondition group chosen for each member."""

    tasks: frozenset[str]
    chosen: dict[str, frozenset[str]]


@dataclass(frozen=True)
class PlanEnumeration:
    plans: tuple[Plan, ...]
    truncated: bool


def enumerate_plans(graph: ProjectGraph, max_plans: int = DEFAULT_MAX_PLANS) -> PlanEnumeration:
    """All distinct solution plans, sorted by step sequence.

    Plans are labelled P1, P2, ... in sorted order. Enumeration stops once
    more than ``max_plans`` distinct sequences have been found, returning
    the first ``max_plans`` of them with the truncated flag set. An
    unsolvable graph yields an empty, untruncated enumeration.
    """
    if max_plans < 1:
        raise DataError(f"max_plans must be >= 1, got {max_plans}")

    sequences: set[tuple[str, ...]] = set()
    truncated = False
    for solution in _solutions(graph):
        sequences.add(linearize(solution, graph))
        if len(sequences) > max_plans:
            truncated = True
            break

    ordered = sorted(sequences)[:max_plans]
    plans = tuple(Plan(f"P{i + 1}", steps) for i, steps in enumerate(ordered))
    return PlanEnumeration(plans, truncated)


def first_plan(graph: ProjectGraph) -> Plan | None:
    """The first solution in backward-chaining order, or None if unsolvable."""
    for solution in _solutions(graph):
        return Plan("P1", linearize(solution, graph))
    return None


def _solutions(graph: ProjectGraph):
    """Yield every grounded solution by backward chaining from the exit.

    Tasks are resolved smallest-id first; groups are tried in declaration
    order, so the yield order is deterministic. Choices whose closure cannot
    be executed bottom-up (cyclic or dangling) are discarded.
    """
    if graph.exit not in graph.tasks:
        return

    def recurse(chosen: dict[str, frozenset[str]], pending: set[str]):
        if not pending:
            if _grounded(chosen):
                yield Solution(frozenset(chosen), dict(chosen))
            return
        task_id = min(pending)
        rest = pending - {task_id}
        task = graph.tasks.get(task_id)
        if task is None:
            return
        if not task.preconditions:
            chosen[task_id] = frozenset()
            yield from recurse(chosen, rest)
            del chosen[task_id]
            return
        for group in task.preconditions:
            chosen[task_id] = group
            new = {t for t in group if t not in chosen}
            yield from recurse(chosen, rest | new)
            del chosen[task_id]

    yield from recurse({}, {graph.exit})


def _grounded(chosen: dict[str, frozenset[str]]) -> bool:
    """True when the closure can be executed bottom-up from no-precondition tasks."""
    done: set[str] = set()
    remaining = dict(chosen)
    while remaining:
        ready = [t for t, group in remaining.items() if group <= done]
        if not ready:
            return False
        for t in ready:
            done.add(t)
            del remaining[t]
    return True


def linearize(solution: Solution, graph: ProjectGraph) -> tuple[str, ...]:
    """Order a solution's tasks by readiness wave, then id.

    A task's wave is one past the latest wave among its chosen predecessors,
    which makes the ordering a topological sort of the chosen-group
    precedence relation with ties broken lexicographically.
    """
    wave: dict[str, int] = {}
    remaining = set(solution.tasks)
    while remaining:
        progressed = False
        for t in list(remaining):
            group = solution.chosen[t]
            if all(p in wave for p in group):
                wave[t] = max((wave[p] + 1 for p in group), default=0)
                remaining.discard(t)
                progressed = True
        if not progressed:
            raise DataError("solution contains a precedence cycle")
    return tuple(sorted(solution.tasks, key=lambda t: (wave[t], t)))
