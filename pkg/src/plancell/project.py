"""Project descriptions as AND/OR task graphs.

A project is a set of tasks with predecessor constraints in disjunctive
normal form: each task lists alternative groups of predecessors (OR over
groups), and every task in the chosen group must precede it (AND within a
group). The file format is JSON:

    {"entry": id, "exit": id,
     "tasks": [{"id": str, "desc": str, "resource": str|null,
                "pre": [[id, ...], ...]}]}

An empty "pre" list marks the entry task.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .errors import DataError


class ProjectParseError(DataError):
    """The project file is not valid JSON or violates a graph invariant."""


@dataclass(frozen=True)
class Task:
    id: str
    description: str = ""
    resource: str | None = None
    preconditions: tuple[frozenset[str], ...] = ()

    @property
    def is_entry_candidate(self) -> bool:
        return not self.preconditions


@dataclass(frozen=True)
class ProjectGraph:
    """Immutable AND/OR graph over tasks; construct via parse_project."""

    tasks: dict[str, Task] = field(default_factory=dict)
    entry: str = ""
    exit: str = ""

    def task_ids(self) -> list[str]:
        return list(self.tasks)

    def predecessors(self, task_id: str) -> set[str]:
        """Union of all tasks referenced by any precondition group."""
        return {t for group in self.tasks[task_id].preconditions for t in group}


def parse_project(text: str) -> ProjectGraph:
    """Parse and validate a project file; raises ProjectParseError on any fault."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ProjectParseError(
            f"syntax error at line {exc.lineno}, column {exc.colno}: {exc.msg}"
        ) from None

    if not isinstance(doc, dict):
        raise ProjectParseError("top-level value must be an object")
    for key in ("entry", "exit", "tasks"):
        if key not in doc:
            raise ProjectParseError(f"missing required key {key!r}")

    tasks: dict[str, Task] = {}
    for i, item in enumerate(doc["tasks"]):
        tid = item.get("id")
        if not tid or not isinstance(tid, str):
            raise ProjectParseError(f"task #{i + 1}: missing or empty id")
        if tid in tasks:
            raise ProjectParseError(f"duplicate task id {tid!r}")
        pre = item.get("pre", [])
        if not isinstance(pre, list) or any(not isinstance(g, list) for g in pre):
            raise ProjectParseError(f"task {tid!r}: 'pre' must be a list of lists")
        tasks[tid] = Task(
            id=tid,
            description=item.get("desc", ""),
            resource=item.get("resource"),
            preconditions=tuple(frozenset(g) for g in pre),
        )

    graph = ProjectGraph(tasks=tasks, entry=doc["entry"], exit=doc["exit"])
    violations = validate(graph)
    if violations:
        raise ProjectParseError("; ".join(violations))
    return graph


def validate(graph: ProjectGraph) -> list[str]:
    """Check every ProjectGraph invariant; returns one message per violation."""
    violations = []
    tasks = graph.tasks

    if graph.entry not in tasks:
        violations.append(f"entry task {graph.entry!r} not found")
    if graph.exit not in tasks:
        violations.append(f"exit task {graph.exit!r} not found")

    for task in tasks.values():
        for group in task.preconditions:
            if not group:
                violations.append(f"task {task.id!r}: empty precondition group")
            for ref in sorted(group):
                if ref not in tasks:
                    violations.append(f"task {task.id!r}: unknown task reference {ref!r}")

    if graph.entry in tasks and tasks[graph.entry].preconditions:
        violations.append(f"entry task {graph.entry!r} must have no preconditions")
    for task in tasks.values():
        if task.id != graph.entry and not task.preconditions:
            violations.append(f"task {task.id!r} has no preconditions but is not the entry")

    violations.extend(_find_cycle(graph))

    if graph.exit in tasks and not violations:
        if graph.exit not in _derivable(graph):
            violations.append(
                f"exit task {graph.exit!r} is not reachable from entry "
                "through any choice of precondition groups"
            )
    return violations


def _find_cycle(graph: ProjectGraph) -> list[str]:
    """DFS over the union precedence relation; reports one cycle if present."""
    WHITE, GRAY, BLACK = 0, 1, 2
    color = {tid: WHITE for tid in graph.tasks}

    for start in graph.tasks:
        if color[start] != WHITE:
            continue
        stack = [(start, iter(sorted(graph.predecessors(start))))]
        color[start] = GRAY
        path = [start]
        while stack:
            node, it = stack[-1]
            advanced = False
            for pred in it:
                if pred not in graph.tasks:
                    continue
                if color[pred] == GRAY:
                    cycle = path[path.index(pred):] + [pred]
                    return [f"task {pred!r} is reachable from itself: "
                            + " <- ".join(cycle)]
                if color[pred] == WHITE:
                    color[pred] = GRAY
                    path.append(pred)
                    stack.append((pred, iter(sorted(graph.predecessors(pred)))))
                    advanced = True
                    break
            if not advanced:
                color[node] = BLACK
                path.pop()
                stack.pop()
    return []


def _derivable(graph: ProjectGraph) -> set[str]:
    """Least fixpoint of tasks executable from the entry.

    A task is derivable when it has no preconditions or when some full
    precondition group is already derivable.
    """
    derivable = {tid for tid, t in graph.tasks.items() if not t.preconditions}
    changed = True
    while changed:
        changed = False
        for tid, task in graph.tasks.items():
            if tid in derivable:
                continue
            if any(group <= derivable for group in task.preconditions):
                derivable.add(tid)
                changed = True
    return derivable


def serialize_project(graph: ProjectGraph) -> str:
    """Write a graph back to the JSON project format (groups sorted for stability)."""
    doc = {
        "entry": graph.entry,
        "exit": graph.exit,
        "tasks": [
            {
                "id": t.id,
                "desc": t.description,
                "resource": t.resource,
                "pre": [sorted(g) for g in t.preconditions],
            }
            for t in graph.tasks.values()
        ],
    }
    return json.dumps(doc, indent=2)
