"""k-nearest-neighbor classification over mixed nominal/numeric data.

Distances are Euclidean over per-attribute differences: numeric values are
range-normalized against the training data, nominal values contribute 0 or
1. All tie-breaking is pinned down so results are reproducible: equal
distances keep training order, vote ties go to the label with the nearest
member and then lexicographically.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass

from .dataset import Instance, NUMERIC, TrainingSet
from .errors import DataError


@dataclass(frozen=True)
class KnnModel:
    """The stored training data plus normalization ranges."""

    training: TrainingSet
    k: int
    ranges: dict[str, tuple[float, float]]


def fit_knn(ts: TrainingSet, k: int = 1) -> KnnModel:
    """Memorize the training set; k must fit within it."""
    if k < 1:
        raise DataError(f"k must be >= 1, got {k}")
    if k > len(ts.instances):
        raise DataError(
            f"k={k} exceeds the {len(ts.instances)} training instances")
    ranges = {s.name: (float(s.domain[0]), float(s.domain[1]))
              for s in ts.attributes if s.kind == NUMERIC}
    return KnnModel(ts, k, ranges)


def _values(x) -> tuple:
    return x.values if isinstance(x, Instance) else tuple(x)


def distance(a, b, model: KnnModel) -> float:
    """Range-normalized Euclidean distance between two instances."""
    va, vb = _values(a), _values(b)
    specs = model.training.attributes
    if len(va) != len(specs) or len(vb) != len(specs):
        raise DataError("instance width does not match the model schema")
    total = 0.0
    for spec, x, y in zip(specs, va, vb):
        if spec.kind == NUMERIC:
            lo, hi = model.ranges[spec.name]
            span = hi - lo
            d = 0.0 if span == 0 else abs(float(x) - float(y)) / span
        else:
            d = 0.0 if x == y else 1.0
        total += d * d
    return math.sqrt(total)


def classify_knn(model: KnnModel, query) -> str:
    """Majority label among the k nearest training instances."""
    instances = model.training.instances
    dists = [distance(query, inst, model) for inst in instances]
    # stable sort: equal distances keep training order
    order = sorted(range(len(instances)), key=lambda i: dists[i])
    neighbors = order[:model.k]
    votes = Counter(instances[i].label for i in neighbors)
    top = max(votes.values())
    tied = [label for label, n in votes.items() if n == top]
    if len(tied) == 1:
        return tied[0]
    nearest = {label: min(dists[i] for i in neighbors
                          if instances[i].label == label)
               for label in tied}
    return min(tied, key=lambda label: (nearest[label], label))
