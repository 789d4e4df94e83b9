"""Numeric-attribute discretization: equal-width and entropy/MDL binning.

Both fitters produce a DiscretizationMap, a per-attribute list of strictly
increasing cut points. A value v falls into bin ``count of cuts < v``, so a
value equal to a cut maps to the bin on its left. ``apply_map`` rewrites the
numeric columns of a training set into nominal bin codes b0, b1, ...
"""

from __future__ import annotations

import math
from bisect import bisect_left
from collections import Counter
from dataclasses import dataclass, field

from .dataset import NOMINAL, NUMERIC, AttributeSpec, Instance, TrainingSet
from .errors import DataError


@dataclass(frozen=True)
class DiscretizationMap:
    """Sorted cut points per numeric attribute."""

    cuts: dict[str, tuple[float, ...]] = field(default_factory=dict)

    def __post_init__(self):
        for name, cs in self.cuts.items():
            if list(cs) != sorted(set(cs)):
                raise DataError(f"cuts for {name!r} must be strictly increasing")

    def bin_index(self, attribute: str, value: float) -> int:
        return bisect_left(self.cuts[attribute], value)

    def bin_label(self, attribute: str, value: float) -> str:
        return f"b{self.bin_index(attribute, value)}"

    def bin_count(self, attribute: str) -> int:
        return len(self.cuts[attribute]) + 1


def discretize_unsupervised(ts: TrainingSet, bins: int = 10) -> DiscretizationMap:
    """Equal-width cuts over each numeric attribute's observed range.

    ``bins`` intervals give ``bins - 1`` interior cuts; a constant column
    gets no cuts at all.
    """
    if bins < 1:
        raise DataError(f"bins must be >= 1, got {bins}")
    cuts = {}
    for spec in ts.attributes:
        if spec.kind != NUMERIC:
            continue
        lo, hi = spec.domain
        if lo == hi:
            cuts[spec.name] = ()
        else:
            width = (hi - lo) / bins
            cuts[spec.name] = tuple(lo + k * width for k in range(1, bins))
    return DiscretizationMap(cuts)


def discretize_supervised(ts: TrainingSet) -> DiscretizationMap:
    """Recursive entropy minimization with the MDL stopping rule.

    Candidate cuts sit at midpoints between consecutive distinct values
    whose class sets differ; a cut is kept only when its information gain
    clears the MDL threshold, then both sides are discretized recursively.
    """
    labels = [inst.label for inst in ts.instances]
    cuts: dict[str, tuple[float, ...]] = {}
    for spec in ts.attributes:
        if spec.kind != NUMERIC:
            continue
        pairs = sorted(zip(ts.column(spec.name), labels))
        found: list[float] = []
        _mdl_split(pairs, found)
        cuts[spec.name] = tuple(sorted(found))
    return DiscretizationMap(cuts)


def _entropy(counts: Counter) -> float:
    n = sum(counts.values())
    return -sum(c / n * math.log2(c / n) for c in counts.values() if c)


def boundary_candidates(pairs: list[tuple[float, str]]) -> list[float]:
    """Midpoints between consecutive distinct values with differing class sets.

    ``pairs`` must be sorted by value. These are the only cut positions a
    best entropy split can occupy.
    """
    groups: list[tuple[float, set[str]]] = []
    for value, label in pairs:
        if groups and groups[-1][0] == value:
            groups[-1][1].add(label)
        else:
            groups.append((value, {label}))
    out = []
    for (v1, c1), (v2, c2) in zip(groups, groups[1:]):
        if c1 != c2:
            out.append((v1 + v2) / 2.0)
    return out


def _mdl_split(pairs: list[tuple[float, str]], found: list[float]) -> None:
    candidates = boundary_candidates(pairs)
    if not candidates:
        return

    total = Counter(label for _, label in pairs)
    n = len(pairs)
    parent = _entropy(total)

    best = None
    for cut in candidates:
        left = Counter(label for value, label in pairs if value <= cut)
        right = total - left
        nl = sum(left.values())
        weighted = nl / n * _entropy(left) + (n - nl) / n * _entropy(right)
        if best is None or weighted < best[0]:
            best = (weighted, cut, left, right)

    weighted, cut, left, right = best
    gain = parent - weighted
    k, k1, k2 = len(total), len(left), len(right)
    delta = math.log2(3**k - 2) - (k * parent - k1 * _entropy(left) - k2 * _entropy(right))
    if gain <= (math.log2(n - 1) + delta) / n:
        return

    found.append(cut)
    _mdl_split([p for p in pairs if p[0] <= cut], found)
    _mdl_split([p for p in pairs if p[0] > cut], found)


def apply_map(dmap: DiscretizationMap, ts: TrainingSet) -> TrainingSet:
    """Rewrite numeric attributes as nominal bin codes.

    Nominal attributes, instance order and class labels are untouched. Every
    numeric attribute of ``ts`` must be covered by the map.
    """
    for spec in ts.attributes:
        if spec.kind == NUMERIC and spec.name not in dmap.cuts:
            raise DataError(f"attribute {spec.name!r} missing from discretization map")

    new_specs = []
    transforms = []
    for spec in ts.attributes:
        if spec.kind == NUMERIC:
            domain = tuple(f"b{i}" for i in range(dmap.bin_count(spec.name)))
            new_specs.append(AttributeSpec(spec.name, NOMINAL, domain))
            transforms.append(lambda v, name=spec.name: dmap.bin_label(name, v))
        else:
            new_specs.append(spec)
            transforms.append(lambda v: v)

    new_instances = tuple(
        Instance(tuple(t(v) for t, v in zip(transforms, inst.values)), inst.label)
        for inst in ts.instances
    )
    return TrainingSet(tuple(new_specs), ts.classes, new_instances)


def fit_map(ts: TrainingSet, mode: str, bins: int = 10) -> DiscretizationMap:
    """Dispatch on mode: 'supervised' or 'unsupervised'."""
    if mode == "supervised":
        return discretize_supervised(ts)
    if mode == "unsupervised":
        return discretize_unsupervised(ts, bins)
    raise DataError(f"unknown discretization mode {mode!r}")
