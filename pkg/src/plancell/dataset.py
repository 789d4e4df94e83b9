"""Training-set data model and CSV I/O.

A training set is a list of instances, each carrying one value per
descriptive attribute plus a class label. Attributes are either nominal
or numeric; the class column is always the last one and is named
``class``. Missing cells are a hard parse error.
"""

from __future__ import annotations

import csv
import io
from collections import Counter
from dataclasses import dataclass

from .errors import DataError

NOMINAL = "nominal"
NUMERIC = "numeric"


@dataclass(frozen=True)
class AttributeSpec:
    """One descriptive attribute: its name, kind, and observed domain.

    For nominal attributes ``domain`` is the list of values in first-seen
    order; for numeric attributes it is the observed ``(min, max)`` pair.
    """

    name: str
    kind: str
    domain: tuple

    def __post_init__(self):
        if self.kind not in (NOMINAL, NUMERIC):
            raise DataError(f"attribute {self.name!r}: unknown kind {self.kind!r}")
        if self.kind == NOMINAL and not self.domain:
            raise DataError(f"attribute {self.name!r}: empty nominal domain")


@dataclass(frozen=True)
class Instance:
    """One labelled case: a value per attribute plus its class."""

    values: tuple
    label: str


@dataclass(frozen=True)
class TrainingSet:
    attributes: tuple[AttributeSpec, ...]
    classes: tuple[str, ...]
    instances: tuple[Instance, ...]

    def __len__(self):
        return len(self.instances)

    @property
    def attribute_names(self) -> tuple[str, ...]:
        return tuple(a.name for a in self.attributes)

    def attribute(self, name: str) -> AttributeSpec:
        for spec in self.attributes:
            if spec.name == name:
                return spec
        raise KeyError(name)

    def column(self, name: str) -> list:
        """All values of one attribute, in instance order."""
        idx = self.attribute_names.index(name)
        return [inst.values[idx] for inst in self.instances]

    def value_of(self, inst: Instance, name: str):
        return inst.values[self.attribute_names.index(name)]


def build_training_set(columns: list[tuple[str, str]], rows: list[tuple]) -> TrainingSet:
    """Assemble a TrainingSet from descriptive ``(name, kind)`` column specs.

    Each row is the attribute values followed by the class label (one more
    cell than there are columns). Nominal domains are taken in first-seen
    order; numeric domains are the observed min/max. Classes are the sorted
    set of labels that occur.
    """
    if not rows:
        raise DataError("empty dataset: no instances")
    names = [n for n, _ in columns]
    if len(set(names)) != len(names):
        raise DataError("duplicate attribute names")

    specs = []
    for col, (name, kind) in enumerate(columns):
        values = [row[col] for row in rows]
        if kind == NOMINAL:
            domain = tuple(dict.fromkeys(values))
        elif kind == NUMERIC:
            domain = (min(values), max(values))
        else:
            raise DataError(f"attribute {name!r}: unknown kind {kind!r}")
        specs.append(AttributeSpec(name, kind, domain))

    instances = tuple(Instance(tuple(row[:-1]), row[-1]) for row in rows)
    classes = tuple(sorted({inst.label for inst in instances}))
    return TrainingSet(tuple(specs), classes, instances)


def load_csv(text: str) -> TrainingSet:
    """Parse a training set from CSV text.

    The header declares each column as ``name:kind``; the last column must
    be ``class:nominal``. Numeric cells must parse as floats, and every row
    must have exactly as many cells as the header.
    """
    reader = csv.reader(io.StringIO(text))
    try:
        header = next(reader)
    except StopIteration:
        raise DataError("empty dataset: missing header") from None

    columns = []
    for i, token in enumerate(header):
        name, sep, kind = token.strip().partition(":")
        if not sep or not name or kind not in (NOMINAL, NUMERIC):
            raise DataError(f"bad header column {i + 1}: {token!r} (expected name:kind)")
        columns.append((name, kind))
    if columns[-1] != ("class", NOMINAL):
        raise DataError("last column must be class:nominal")

    rows = []
    for lineno, raw in enumerate(reader, start=2):
        if not raw:
            continue
        if len(raw) != len(columns):
            raise DataError(f"row {lineno}: expected {len(columns)} cells, got {len(raw)}")
        row = []
        for (name, kind), cell in zip(columns, raw):
            cell = cell.strip()
            if not cell:
                raise DataError(f"row {lineno}: missing value in column {name!r}")
            if kind == NUMERIC:
                try:
                    row.append(float(cell))
                except ValueError:
                    raise DataError(
                        f"row {lineno}: non-numeric value {cell!r} in column {name!r}"
                    ) from None
            else:
                row.append(cell)
        rows.append(tuple(row))

    return build_training_set(columns[:-1], rows)


def save_csv(ts: TrainingSet) -> str:
    """Serialize a TrainingSet back to CSV (inverse of load_csv).

    Floats are written with repr, which round-trips exactly.
    """
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow([f"{a.name}:{a.kind}" for a in ts.attributes] + ["class:nominal"])
    for inst in ts.instances:
        writer.writerow([repr(v) if isinstance(v, float) else v for v in inst.values]
                        + [inst.label])
    return out.getvalue()


def class_distribution(ts: TrainingSet) -> dict[str, int]:
    """Count instances per class label."""
    return dict(Counter(inst.label for inst in ts.instances))


def subset(ts: TrainingSet, indices: list[int]) -> TrainingSet:
    """A new TrainingSet over the given instance indices.

    Domains and classes are re-inferred from the subset, so fitting on a
    fold never sees values that only occur outside it.
    """
    columns = [(a.name, a.kind) for a in ts.attributes]
    rows = [ts.instances[i].values + (ts.instances[i].label,) for i in indices]
    return build_training_set(columns, rows)
