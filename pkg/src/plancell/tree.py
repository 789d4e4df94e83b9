"""Decision-tree induction over nominal attributes, plus rule extraction.

Two growth modes: ``gain_ratio`` (C4.5-style selection) and ``info_gain``
(plain information gain), the latter usually followed by reduced-error
pruning on a held-out third of the data. Node ids s0, s1, ... are assigned
breadth-first, so the root is always s0. Trees classify by walking splits;
``extract_rules`` flattens the same structure into premise/conclusion rules
for the cellular engine.
"""

from __future__ import annotations

import math
import random
from collections import Counter, deque
from dataclasses import dataclass, field, replace

from .dataset import NOMINAL, AttributeSpec, Instance, TrainingSet
from .discretize import DiscretizationMap
from .errors import DataError, ModelIntegrityError, UnknownValueError

GAIN_RATIO = "gain_ratio"
INFO_GAIN = "info_gain"

CLASS_ATTRIBUTE = "class"


def _majority(counts: dict[str, int]) -> str:
    """Most frequent label; ties go to the lexicographically smallest."""
    best = max(counts.values())
    return min(label for label, n in counts.items() if n == best)


@dataclass
class TreeNode:
    """A split over one attribute, or a leaf carrying class counts."""

    node_id: str
    counts: dict[str, int]
    attribute: str | None = None
    children: dict[str, "TreeNode"] = field(default_factory=dict)

    @property
    def is_leaf(self) -> bool:
        return self.attribute is None

    @property
    def majority(self) -> str:
        return _majority(self.counts)


@dataclass(frozen=True)
class InductionGraph:
    """A grown tree plus the schema and discretization it was fit under."""

    root: TreeNode
    attributes: tuple[AttributeSpec, ...]
    classes: tuple[str, ...]
    mode: str
    discretization: DiscretizationMap | None = None

    def nodes(self) -> list[TreeNode]:
        """All nodes in breadth-first order (the id order)."""
        out = []
        queue = deque([self.root])
        while queue:
            node = queue.popleft()
            out.append(node)
            queue.extend(node.children.values())
        return out

    @property
    def node_count(self) -> int:
        return len(self.nodes())

    def depth(self) -> int:
        def walk(node, d):
            if node.is_leaf:
                return d
            return max(walk(c, d + 1) for c in node.children.values())
        return walk(self.root, 0)

    def attribute_index(self, name: str) -> int:
        for i, spec in enumerate(self.attributes):
            if spec.name == name:
                return i
        raise KeyError(name)


@dataclass(frozen=True)
class ClassificationRule:
    """Conjunction of premise facts implying one conclusion fact."""

    premises: tuple[str, ...]
    conclusion: str

    def __post_init__(self):
        if not self.premises:
            raise DataError("rule with empty premises")
        if self.conclusion in self.premises:
            raise DataError(f"rule concludes its own premise {self.conclusion!r}")

    def __str__(self):
        return f"{' & '.join(self.premises)} -> {self.conclusion}"


def entropy(dist) -> float:
    """Shannon entropy in bits of a class-count distribution."""
    counts = list(dist.values()) if hasattr(dist, "values") else list(dist)
    if any(n < 0 for n in counts):
        raise DataError("negative class count")
    total = sum(counts)
    if total == 0:
        raise DataError("entropy of an all-zero distribution")
    return -sum((n / total) * math.log2(n / total) for n in counts if n)


def _entropy_of(labels: list[str]) -> float:
    return entropy(Counter(labels))


def _gain(values: list, labels: list[str]) -> float:
    parent = _entropy_of(labels)
    groups: dict = {}
    for v, y in zip(values, labels):
        groups.setdefault(v, []).append(y)
    n = len(labels)
    return parent - sum(len(g) / n * _entropy_of(g) for g in groups.values())


def _split_info(values: list) -> float:
    return entropy(Counter(values))


def information_gain(ts: TrainingSet, attribute: str) -> float:
    """Entropy reduction from partitioning by the attribute's values."""
    labels = [inst.label for inst in ts.instances]
    return _gain(ts.column(attribute), labels)


def gain_ratio(ts: TrainingSet, attribute: str) -> float:
    """Information gain normalized by the split's own entropy.

    Zero when the attribute is single-valued (split info 0).
    """
    labels = [inst.label for inst in ts.instances]
    values = ts.column(attribute)
    info = _split_info(values)
    if info == 0:
        return 0.0
    return _gain(values, labels) / info


def grow(ts: TrainingSet, mode: str = GAIN_RATIO, min_leaf: int = 2,
         discretization: DiscretizationMap | None = None) -> InductionGraph:
    """Grow a tree by repeated best-attribute splits, breadth-first.

    A node becomes a leaf when it is pure, no attributes remain, the best
    split scores zero, or some branch of the best split would receive fewer
    than ``min_leaf`` instances. Score ties go to the attribute declared
    first. Branches exist only for values present at the node.
    """
    if mode not in (GAIN_RATIO, INFO_GAIN):
        raise DataError(f"unknown growth mode {mode!r}")
    if not ts.instances:
        raise DataError("cannot grow a tree from an empty training set")
    for spec in ts.attributes:
        if spec.kind != NOMINAL:
            raise DataError(
                f"attribute {spec.name!r} is numeric; discretize before growing")
    if min_leaf < 1:
        raise DataError(f"min_leaf must be >= 1, got {min_leaf}")

    columns = {s.name: ts.column(s.name) for s in ts.attributes}
    labels = [inst.label for inst in ts.instances]
    domains = {s.name: s.domain for s in ts.attributes}

    def score(idx: list[int], attr: str) -> float:
        vals = [columns[attr][i] for i in idx]
        labs = [labels[i] for i in idx]
        if mode == INFO_GAIN:
            return _gain(vals, labs)
        info = _split_info(vals)
        return _gain(vals, labs) / info if info else 0.0

    serial = iter(range(len(ts.instances) * 2 + 1))

    def new_node(idx: list[int]) -> TreeNode:
        return TreeNode(f"s{next(serial)}", dict(Counter(labels[i] for i in idx)))

    all_idx = list(range(len(ts.instances)))
    root = new_node(all_idx)
    queue = deque([(root, all_idx, tuple(ts.attribute_names))])
    while queue:
        node, idx, attrs = queue.popleft()
        if len(node.counts) == 1 or not attrs:
            continue
        best_attr, best_score = None, 0.0
        for attr in attrs:
            s = score(idx, attr)
            if s > best_score:
                best_attr, best_score = attr, s
        if best_attr is None:
            continue
        parts: dict = {}
        for i in idx:
            parts.setdefault(columns[best_attr][i], []).append(i)
        if min(len(p) for p in parts.values()) < min_leaf:
            continue
        node.attribute = best_attr
        remaining = tuple(a for a in attrs if a != best_attr)
        for value in domains[best_attr]:
            if value not in parts:
                continue
            child = new_node(parts[value])
            node.children[value] = child
            queue.append((child, parts[value], remaining))
    return InductionGraph(root, ts.attributes, ts.classes, mode, discretization)


def classify_tree(tree: InductionGraph, instance,
                  fallback: bool = False) -> tuple[str, tuple[str, ...]]:
    """Walk the splits; return (class, visited node ids).

    ``instance`` is an Instance or a plain value sequence aligned with the
    tree's attribute schema. A value with no branch raises UnknownValueError
    unless ``fallback`` routes it to the current node's majority class.
    """
    values = instance.values if isinstance(instance, Instance) else tuple(instance)
    if len(values) != len(tree.attributes):
        raise DataError(
            f"instance has {len(values)} values, schema has {len(tree.attributes)}")
    node = tree.root
    path = [node.node_id]
    while not node.is_leaf:
        value = values[tree.attribute_index(node.attribute)]
        child = node.children.get(value)
        if child is None:
            if fallback:
                return node.majority, tuple(path)
            raise UnknownValueError(
                f"value {value!r} of attribute {node.attribute!r} "
                f"has no branch at node {node.node_id}")
        node = child
        path.append(node.node_id)
    return node.majority, tuple(path)


def extract_rules(tree: InductionGraph) -> list[ClassificationRule]:
    """One rule per edge plus one per leaf, in breadth-first node order."""
    rules = []
    for node in tree.nodes():
        if node.is_leaf:
            rules.append(ClassificationRule(
                (node.node_id,), f"{CLASS_ATTRIBUTE}={node.majority}"))
        else:
            for value, child in node.children.items():
                rules.append(ClassificationRule(
                    (node.node_id, f"{node.attribute}={value}"), child.node_id))
    return rules


def _copy_leaf(node: TreeNode) -> TreeNode:
    return TreeNode(node.node_id, dict(node.counts))


def _renumber(root: TreeNode) -> TreeNode:
    """Fresh breadth-first ids after structural surgery."""
    serial = iter(range(10 ** 9))
    new_root = TreeNode(f"s{next(serial)}", dict(root.counts), root.attribute)
    queue = deque([(root, new_root)])
    while queue:
        old, new = queue.popleft()
        for value, child in old.children.items():
            twin = TreeNode(f"s{next(serial)}", dict(child.counts), child.attribute)
            new.children[value] = twin
            queue.append((child, twin))
    return new_root


def rep_prune(tree: InductionGraph, prune_set: TrainingSet) -> InductionGraph:
    """Reduced-error pruning: collapse subtrees that don't beat their leaf.

    Bottom-up over nodes reached by at least one prune instance: replace the
    subtree with its (training-)majority leaf unless the subtree makes
    strictly fewer errors on the prune instances that reach it. Subtrees no
    prune instance reaches are kept as grown. Node ids are reassigned
    breadth-first in the pruned tree.
    """
    if tuple(s.name for s in prune_set.attributes) != \
            tuple(s.name for s in tree.attributes):
        raise DataError("prune set schema does not match the tree schema")

    col = {s.name: prune_set.column(s.name) for s in prune_set.attributes}
    labels = [inst.label for inst in prune_set.instances]

    def errors(node: TreeNode, idx: list[int]) -> int:
        """Misclassifications of the pruned subtree; missing branch = error."""
        if node.is_leaf:
            return sum(1 for i in idx if labels[i] != node.majority)
        wrong = 0
        for i in idx:
            child = node.children.get(col[node.attribute][i])
            if child is None:
                wrong += 1
            else:
                wrong += errors(child, [i])
        return wrong

    def prune(node: TreeNode, idx: list[int]) -> TreeNode:
        if node.is_leaf:
            return _copy_leaf(node)
        pruned = TreeNode(node.node_id, dict(node.counts), node.attribute)
        for value, child in node.children.items():
            sub = [i for i in idx if col[node.attribute][i] == value]
            pruned.children[value] = prune(child, sub)
        if not idx:
            return pruned
        leaf_errors = sum(1 for i in idx if labels[i] != node.majority)
        if leaf_errors <= errors(pruned, idx):
            return _copy_leaf(node)
        return pruned

    new_root = _renumber(prune(tree.root, list(range(len(prune_set.instances)))))
    return replace(tree, root=new_root)


J48 = "j48"
REPTREE = "reptree"


def _stratified_thirds(ts: TrainingSet, seed: int) -> tuple[list[int], list[int]]:
    """Per-class seeded shuffle; every third instance goes to the prune side."""
    rng = random.Random(seed)
    grow_idx: list[int] = []
    prune_idx: list[int] = []
    for label in ts.classes:
        members = [i for i, inst in enumerate(ts.instances) if inst.label == label]
        rng.shuffle(members)
        take = len(members) // 3
        prune_idx.extend(members[:take])
        grow_idx.extend(members[take:])
    return sorted(grow_idx), sorted(prune_idx)


def _take(ts: TrainingSet, indices: list[int]) -> TrainingSet:
    # keep the full schema: branch order must follow fit-time domains
    return TrainingSet(ts.attributes, ts.classes,
                       tuple(ts.instances[i] for i in indices))


def induce(ts: TrainingSet, method: str = J48, min_leaf: int = 2,
           seed: int = 0,
           discretization: DiscretizationMap | None = None) -> InductionGraph:
    """Train with a named method: gain-ratio growth, or info-gain plus REP.

    ``reptree`` holds out a stratified third of the data (seeded) for
    reduced-error pruning and grows on the rest.
    """
    if method == J48:
        return grow(ts, GAIN_RATIO, min_leaf, discretization)
    if method == REPTREE:
        grow_idx, prune_idx = _stratified_thirds(ts, seed)
        graph = grow(_take(ts, grow_idx), INFO_GAIN, min_leaf, discretization)
        if prune_idx:
            graph = rep_prune(graph, _take(ts, prune_idx))
        return graph
    raise DataError(f"unknown induction method {method!r}")


def model_to_json(tree: InductionGraph) -> dict:
    """JSON-ready model: schema, discretization cuts, and the node table."""
    nodes = []
    for node in tree.nodes():
        entry: dict = {"id": node.node_id, "counts": dict(node.counts)}
        if node.is_leaf:
            entry["leaf_class"] = node.majority
        else:
            entry["split"] = node.attribute
            entry["children"] = {v: c.node_id for v, c in node.children.items()}
        nodes.append(entry)
    cuts = None
    if tree.discretization is not None:
        cuts = {a: list(c) for a, c in tree.discretization.cuts.items()}
    return {
        "format": "induction-graph",
        "mode": tree.mode,
        "attributes": [
            {"name": s.name, "kind": s.kind, "domain": list(s.domain)}
            for s in tree.attributes
        ],
        "classes": list(tree.classes),
        "discretization": cuts,
        "nodes": nodes,
    }


def model_from_json(data: dict) -> InductionGraph:
    """Rebuild a tree from its JSON form, checking structural integrity."""
    try:
        if data.get("format") != "induction-graph":
            raise ModelIntegrityError("not an induction-graph model file")
        attributes = tuple(
            AttributeSpec(a["name"], a["kind"], tuple(a["domain"]))
            for a in data["attributes"])
        classes = tuple(data["classes"])
        mode = data["mode"]
        cuts = data.get("discretization")
        raw_nodes = data["nodes"]
    except (KeyError, TypeError) as exc:
        raise ModelIntegrityError(f"malformed model file: {exc}") from exc
    if not raw_nodes:
        raise ModelIntegrityError("model has no nodes")

    dmap = None
    if cuts is not None:
        dmap = DiscretizationMap({a: tuple(c) for a, c in cuts.items()})

    nodes: dict[str, TreeNode] = {}
    for entry in raw_nodes:
        nid = entry["id"]
        if nid in nodes:
            raise ModelIntegrityError(f"duplicate node id {nid!r}")
        counts = {str(k): int(v) for k, v in entry["counts"].items()}
        nodes[nid] = TreeNode(nid, counts, entry.get("split"))
        if "leaf_class" in entry and entry["leaf_class"] != _majority(counts):
            raise ModelIntegrityError(
                f"leaf {nid} class {entry['leaf_class']!r} "
                f"disagrees with its counts")
    linked: set[str] = set()
    for entry in raw_nodes:
        node = nodes[entry["id"]]
        if node.attribute is None:
            continue
        for value, child_id in entry["children"].items():
            if child_id not in nodes:
                raise ModelIntegrityError(f"unknown child node {child_id!r}")
            if child_id in linked:
                raise ModelIntegrityError(f"node {child_id!r} has two parents")
            linked.add(child_id)
            node.children[value] = nodes[child_id]
        if not node.children:
            raise ModelIntegrityError(f"split node {node.node_id} has no children")
    root_id = raw_nodes[0]["id"]
    if root_id in linked:
        raise ModelIntegrityError("first node is not the root")
    graph = InductionGraph(nodes[root_id], attributes, classes, mode, dmap)
    if len(graph.nodes()) != len(nodes):
        raise ModelIntegrityError("model contains unreachable nodes")
    return graph
