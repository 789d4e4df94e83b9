"""Boolean cellular inference engine compiled from an induction graph.

The tree's rules become two cell layers: one per fact (tree nodes,
attribute=value tests, class assignments) and one per rule, wired by a
premise matrix and a conclusion matrix. Classification seeds the root and
the instance's attribute-value facts, then alternates an eligibility pass
(a rule becomes eligible once all its premise facts are established) with
an execution pass (eligible rules establish their conclusion facts) until
the configuration stops changing.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .dataset import AttributeSpec, Instance, NUMERIC
from .discretize import DiscretizationMap
from .errors import DataError, ModelIntegrityError, UnknownValueError
from .tree import CLASS_ATTRIBUTE, ClassificationRule, InductionGraph, extract_rules

CLASS_PREFIX = CLASS_ATTRIBUTE + "="


def _bool_vector(n: int) -> np.ndarray:
    return np.zeros(n, dtype=bool)


@dataclass(frozen=True, eq=False)
class Configuration:
    """One automaton state: three fact registers and three rule registers.

    EF marks established facts, IF is the fixed input-fact marker, SF echoes
    the previous EF. ER marks eligible rules, IR the (constant) active-rule
    mask, SR the complement of ER after each execution pass.
    """

    EF: np.ndarray
    IF: np.ndarray
    SF: np.ndarray
    ER: np.ndarray
    IR: np.ndarray
    SR: np.ndarray
    generation: int = 0

    def __eq__(self, other):
        if not isinstance(other, Configuration):
            return NotImplemented
        return (np.array_equal(self.EF, other.EF)
                and np.array_equal(self.IF, other.IF)
                and np.array_equal(self.SF, other.SF)
                and np.array_equal(self.ER, other.ER)
                and np.array_equal(self.IR, other.IR)
                and np.array_equal(self.SR, other.SR))


@dataclass(frozen=True)
class CellularKnowledgeBase:
    """Immutable compiled rule base: fact layer, rule layer, wiring."""

    facts: tuple[str, ...]
    input_flags: np.ndarray            # the fixed IF vector
    rules: tuple[ClassificationRule, ...]
    premise_matrix: np.ndarray         # facts x rules; 1 = fact in premise
    conclusion_matrix: np.ndarray      # facts x rules; 1 = fact in conclusion
    attributes: tuple[AttributeSpec, ...]
    classes: tuple[str, ...]
    discretization: DiscretizationMap | None = None

    @property
    def fact_count(self) -> int:
        return len(self.facts)

    @property
    def rule_count(self) -> int:
        return len(self.rules)

    def fact_index(self, descriptor: str) -> int:
        try:
            return self.facts.index(descriptor)
        except ValueError:
            raise UnknownValueError(f"unknown fact {descriptor!r}") from None

    def class_fact_indices(self) -> list[int]:
        return [i for i, f in enumerate(self.facts) if f.startswith(CLASS_PREFIX)]

    def initial_configuration(self, initial_facts=()) -> Configuration:
        """All registers clear except IF, IR, and the seeded EF cells."""
        ef = _bool_vector(self.fact_count)
        for descriptor in initial_facts:
            ef[self.fact_index(descriptor)] = True
        return Configuration(
            EF=ef,
            IF=self.input_flags.copy(),
            SF=_bool_vector(self.fact_count),
            ER=_bool_vector(self.rule_count),
            IR=np.ones(self.rule_count, dtype=bool),
            SR=_bool_vector(self.rule_count),
        )


def compile_tree(tree: InductionGraph) -> CellularKnowledgeBase:
    """Flatten a tree into fact/rule layers with incidence matrices.

    Fact order: node facts breadth-first, then attribute=value facts in
    schema order restricted to values actually tested on some edge, then
    class facts in label order restricted to leaf classes. Input flag is 1
    exactly for the facts containing '=' (the non-node facts).
    """
    nodes = tree.nodes()
    facts: list[str] = [n.node_id for n in nodes]

    edge_values: dict[str, set] = {}
    leaf_classes: set[str] = set()
    for node in nodes:
        if node.is_leaf:
            leaf_classes.add(node.majority)
        else:
            edge_values.setdefault(node.attribute, set()).update(node.children)
    for spec in tree.attributes:
        for value in spec.domain if spec.name in edge_values else ():
            if value in edge_values[spec.name]:
                facts.append(f"{spec.name}={value}")
    facts += [CLASS_PREFIX + c for c in tree.classes if c in leaf_classes]

    rules = tuple(extract_rules(tree))
    index = {f: i for i, f in enumerate(facts)}
    l, r = len(facts), len(rules)
    premise = np.zeros((l, r), dtype=bool)
    conclusion = np.zeros((l, r), dtype=bool)
    for j, rule in enumerate(rules):
        for p in rule.premises:
            premise[index[p], j] = True
        conclusion[index[rule.conclusion], j] = True

    input_flags = np.array(["=" in f for f in facts], dtype=bool)
    return CellularKnowledgeBase(
        facts=tuple(facts),
        input_flags=input_flags,
        rules=rules,
        premise_matrix=premise,
        conclusion_matrix=conclusion,
        attributes=tree.attributes,
        classes=tree.classes,
        discretization=tree.discretization,
    )


def eligible_rules(kb: CellularKnowledgeBase, ef: np.ndarray,
                   disjunctive: bool = False) -> np.ndarray:
    """Rules whose premises are satisfied by the established facts.

    The default requires every premise fact (column-subset test). The
    disjunctive variant is the raw matrix product, firing on any single
    premise fact; it exists for diagnostics only and is unsound for
    classification (a parent node fact alone would reach every leaf).
    """
    if disjunctive:
        return kb.premise_matrix.T @ ef
    missing = kb.premise_matrix & ~ef[:, np.newaxis]
    return ~missing.any(axis=0)


def delta_fact(kb: CellularKnowledgeBase, config: Configuration,
               disjunctive: bool = False) -> Configuration:
    """Assessment pass: copy EF into SF, extend ER with newly eligible rules."""
    return replace(
        config,
        SF=config.EF.copy(),
        ER=config.ER | eligible_rules(kb, config.EF, disjunctive),
    )


def delta_rule(kb: CellularKnowledgeBase, config: Configuration) -> Configuration:
    """Execution pass: eligible rules establish conclusions; SR = not ER."""
    return replace(
        config,
        EF=config.EF | (kb.conclusion_matrix @ config.ER),
        SR=~config.ER,
    )


def step(kb: CellularKnowledgeBase, config: Configuration,
         disjunctive: bool = False) -> Configuration:
    """One full generation: assessment then execution."""
    after = delta_rule(kb, delta_fact(kb, config, disjunctive))
    return replace(after, generation=config.generation + 1)


def infer(kb: CellularKnowledgeBase, initial_facts,
          disjunctive: bool = False) -> list[Configuration]:
    """Run to the first fixed point; return every configuration on the way.

    The trace starts at generation 0 and ends at the first configuration
    that reproduces itself. Tree-compiled bases stabilize within depth+2
    generations; the rule-count cap only guards corrupted bases.
    """
    trace = [kb.initial_configuration(initial_facts)]
    for _ in range(kb.rule_count + 2):
        succ = step(kb, trace[-1], disjunctive)
        if succ == trace[-1]:
            return trace
        trace.append(succ)
    raise ModelIntegrityError(
        f"inference did not stabilize within {kb.rule_count + 2} generations")


def established_facts(kb: CellularKnowledgeBase,
                      config: Configuration) -> tuple[str, ...]:
    return tuple(f for f, on in zip(kb.facts, config.EF) if on)


def instance_facts(kb: CellularKnowledgeBase, instance,
                   dmap: DiscretizationMap | None = None) -> list[str]:
    """The attribute=value descriptors an instance contributes.

    Numeric values are binned through the supplied map (or the base's own);
    descriptors naming values the rule base never tests are dropped, which
    at worst starves the inference and surfaces as an unknown-value error.
    """
    values = instance.values if isinstance(instance, Instance) else tuple(instance)
    if len(values) != len(kb.attributes):
        raise DataError(
            f"instance has {len(values)} values, schema has {len(kb.attributes)}")
    dmap = dmap or kb.discretization
    known = set(kb.facts)
    out = []
    for spec, value in zip(kb.attributes, values):
        if dmap is not None and spec.name in dmap.cuts \
                and isinstance(value, (int, float)) and not isinstance(value, bool):
            value = dmap.bin_label(spec.name, value)
        descriptor = f"{spec.name}={value}"
        if descriptor in known:
            out.append(descriptor)
    return out


def classify_casi(kb: CellularKnowledgeBase, instance,
                  dmap: DiscretizationMap | None = None) -> str:
    """Seed the root plus the instance's facts; read off the class fact.

    Exactly one established class fact is a classification; zero means the
    instance fell off the known paths (unknown value), more than one means
    the rule base is inconsistent.
    """
    root = kb.facts[0]
    seeds = [root] + instance_facts(kb, instance, dmap)
    final = infer(kb, seeds)[-1]
    hits = [kb.facts[i] for i in kb.class_fact_indices() if final.EF[i]]
    if not hits:
        raise UnknownValueError(
            "no class fact established; instance values leave the known paths")
    if len(hits) > 1:
        raise ModelIntegrityError(
            f"multiple class facts established: {', '.join(hits)}")
    return hits[0].removeprefix(CLASS_PREFIX)


def _bitrows(matrix: np.ndarray) -> list[str]:
    return ["".join("1" if b else "0" for b in row) for row in matrix]


def kb_to_json(kb: CellularKnowledgeBase) -> dict:
    """JSON-ready form: fact/rule tables plus row-major matrix bitstrings."""
    cuts = None
    if kb.discretization is not None:
        cuts = {a: list(c) for a, c in kb.discretization.cuts.items()}
    return {
        "format": "cellular-kb",
        "facts": [
            {"descriptor": f, "input": int(flag)}
            for f, flag in zip(kb.facts, kb.input_flags)
        ],
        "rules": [
            {"premises": list(r.premises), "conclusion": r.conclusion}
            for r in kb.rules
        ],
        "R_E": _bitrows(kb.premise_matrix),
        "R_S": _bitrows(kb.conclusion_matrix),
        "attributes": [
            {"name": s.name, "kind": s.kind, "domain": list(s.domain)}
            for s in kb.attributes
        ],
        "classes": list(kb.classes),
        "discretization": cuts,
    }


def kb_from_json(data: dict) -> CellularKnowledgeBase:
    """Rebuild a compiled base, cross-checking matrices against the rules."""
    try:
        if data.get("format") != "cellular-kb":
            raise ModelIntegrityError("not a cellular-kb file")
        facts = tuple(entry["descriptor"] for entry in data["facts"])
        flags = np.array([bool(entry["input"]) for entry in data["facts"]],
                         dtype=bool)
        rules = tuple(
            ClassificationRule(tuple(r["premises"]), r["conclusion"])
            for r in data["rules"])
        attributes = tuple(
            AttributeSpec(a["name"], a["kind"], tuple(a["domain"]))
            for a in data["attributes"])
        classes = tuple(data["classes"])
        cuts = data.get("discretization")
        re_rows, rs_rows = data["R_E"], data["R_S"]
    except (KeyError, TypeError) as exc:
        raise ModelIntegrityError(f"malformed rule-base file: {exc}") from exc

    if len(set(facts)) != len(facts):
        raise ModelIntegrityError("duplicate fact descriptors")
    index = {f: i for i, f in enumerate(facts)}
    l, r = len(facts), len(rules)
    premise = np.zeros((l, r), dtype=bool)
    conclusion = np.zeros((l, r), dtype=bool)
    for j, rule in enumerate(rules):
        for p in rule.premises:
            if p not in index:
                raise ModelIntegrityError(f"rule premise {p!r} is not a fact")
            premise[index[p], j] = True
        if rule.conclusion not in index:
            raise ModelIntegrityError(
                f"rule conclusion {rule.conclusion!r} is not a fact")
        conclusion[index[rule.conclusion], j] = True

    def parse_matrix(rows, name):
        if len(rows) != l or any(len(row) != r for row in rows):
            raise ModelIntegrityError(f"{name} shape is not facts x rules")
        return np.array([[c == "1" for c in row] for row in rows], dtype=bool)

    if not np.array_equal(parse_matrix(re_rows, "R_E"), premise):
        raise ModelIntegrityError("premise matrix disagrees with the rule table")
    if not np.array_equal(parse_matrix(rs_rows, "R_S"), conclusion):
        raise ModelIntegrityError("conclusion matrix disagrees with the rule table")

    dmap = None
    if cuts is not None:
        dmap = DiscretizationMap({a: tuple(c) for a, c in cuts.items()})
    return CellularKnowledgeBase(facts, flags, rules, premise, conclusion,
                                 attributes, classes, dmap)


def format_fact_table(kb: CellularKnowledgeBase,
                      config: Configuration | None = None) -> str:
    """The fact layer as an aligned table of EF/IF/SF per fact."""
    config = config or kb.initial_configuration()
    width = max(len("Facts"), max(len(f) for f in kb.facts))
    lines = [f"{'Facts':<{width}}  EF  IF  SF"]
    for i, fact in enumerate(kb.facts):
        lines.append(f"{fact:<{width}}  {int(config.EF[i])}   "
                     f"{int(config.IF[i])}   {int(config.SF[i])}")
    return "\n".join(lines)


def format_rule_table(kb: CellularKnowledgeBase,
                      config: Configuration | None = None) -> str:
    """The rule layer as an aligned table of ER/IR/SR per rule."""
    config = config or kb.initial_configuration()
    names = [f"R{j + 1}: {rule}" for j, rule in enumerate(kb.rules)]
    width = max(len("Rules"), max(len(n) for n in names))
    lines = [f"{'Rules':<{width}}  ER  IR  SR"]
    for j, name in enumerate(names):
        lines.append(f"{name:<{width}}  {int(config.ER[j])}   "
                     f"{int(config.IR[j])}   {int(config.SR[j])}")
    return "\n".join(lines)


def format_incidence(kb: CellularKnowledgeBase) -> str:
    """Both incidence matrices, facts as rows and rules as columns."""
    width = max(len(f) for f in kb.facts)
    header = "  ".join(f"R{j + 1}" for j in range(kb.rule_count))
    blocks = []
    for title, matrix in (("Input relation", kb.premise_matrix),
                          ("Output relation", kb.conclusion_matrix)):
        lines = [f"{title}:", f"{'':<{width}}  {header}"]
        for i, fact in enumerate(kb.facts):
            cells = "   ".join("1" if b else "0" for b in matrix[i])
            lines.append(f"{fact:<{width}}  {cells}")
        blocks.append("\n".join(lines))
    return "\n\n".join(blocks)
