"""Small bundled datasets: a worked project graph and a solved-runs corpus.

The fire project models an emergency response with alternative routes for
police and fire units; it is the standard walk-through input for plan
enumeration. The plan-runs corpus is an 11-instance extract of solved
Blocksworld problems (problem name, solve time, plan length, plan label)
sized so every pipeline stage stays hand-checkable.
"""

from __future__ import annotations

from importlib import resources

from .dataset import TrainingSet, load_csv
from .project import ProjectGraph, parse_project


def _read(name: str) -> str:
    return (resources.files("plancell") / "data" / name).read_text(encoding="utf-8")


def sample_project_text() -> str:
    """The fire project file, verbatim."""
    return _read("fire_project.json")


def sample_project() -> ProjectGraph:
    """The fire project: 12 tasks, two resources, 8 distinct plans."""
    return parse_project(sample_project_text())


def sample_runs_text() -> str:
    """The solved-runs corpus file, verbatim."""
    return _read("plan_runs.csv")


def sample_runs() -> TrainingSet:
    """Eleven solved Blocksworld runs over five plan classes."""
    return load_csv(sample_runs_text())
