import json
import random

import pytest

from plancell.dataset import TrainingSet, build_training_set, class_distribution
from plancell.discretize import discretize_supervised, apply_map
from plancell.errors import DataError, ModelIntegrityError, UnknownValueError
from plancell.tree import (ClassificationRule, INFO_GAIN, GAIN_RATIO,
                           classify_tree, entropy, extract_rules, gain_ratio,
                           grow, induce, information_gain, model_from_json,
                           model_to_json, rep_prune)


def nominal_set(columns, rows):
    return build_training_set([(name, "nominal") for name in columns], rows)


@pytest.fixture
def binned(runs11):
    return apply_map(discretize_supervised(runs11), runs11)


@pytest.fixture
def stump():
    return grow(nominal_set(["x"], [("a", "c1"), ("b", "c2")]), min_leaf=1)


def test_entropy_values():
    assert entropy({"A": 7}) == 0.0
    assert entropy({"A": 5, "B": 5}) == 1.0
    assert entropy([2, 2, 2, 2]) == 2.0


def test_entropy_runs_distribution(runs11):
    value = entropy(class_distribution(runs11))
    assert value == pytest.approx(2.2999, abs=1e-4)


def test_entropy_rejects_degenerate_input():
    with pytest.raises(DataError, match="all-zero"):
        entropy({"A": 0, "B": 0})
    with pytest.raises(DataError, match="negative"):
        entropy({"A": -1, "B": 3})


def test_information_gain_on_binned_runs(binned):
    assert information_gain(binned, "steps") == pytest.approx(1.4949, abs=1e-3)
    assert information_gain(binned, "problem") == pytest.approx(1.0031, abs=1e-3)
    assert information_gain(binned, "time") == 0.0


def test_gain_ratio_zero_for_single_valued(binned):
    # time collapses to one bin, so its split info is zero
    assert gain_ratio(binned, "time") == 0.0


def test_unique_id_attribute_gains_full_entropy():
    rows = [(f"row{i}", label) for i, label in enumerate("AABBC")]
    ts = nominal_set(["id"], rows)
    assert information_gain(ts, "id") == \
        pytest.approx(entropy(class_distribution(ts)))


def test_grow_single_class_is_one_leaf():
    tree = grow(nominal_set(["x"], [("a", "C"), ("b", "C")]))
    assert tree.root.is_leaf
    assert tree.root.node_id == "s0"
    assert tree.node_count == 1


def test_grow_stump_structure(stump):
    assert stump.root.attribute == "x"
    assert [n.node_id for n in stump.nodes()] == ["s0", "s1", "s2"]
    assert stump.root.children["a"].majority == "c1"
    assert stump.root.children["b"].majority == "c2"
    assert stump.depth() == 1


def test_grow_runs_tree_shape(binned):
    tree = grow(binned, INFO_GAIN, min_leaf=1)
    assert tree.node_count == 12
    assert tree.depth() == 2
    assert tree.root.attribute == "steps"
    assert sorted(tree.root.children) == ["b0", "b1", "b2"]
    assert tree.root.children["b0"].counts == {"P1": 3, "P5": 2}
    assert tree.root.children["b1"].counts == {"P2": 2, "P4": 2}
    b2 = tree.root.children["b2"]
    assert b2.is_leaf and b2.counts == {"P3": 2}


def test_node_ids_are_breadth_first(binned):
    tree = grow(binned, INFO_GAIN, min_leaf=1)
    assert [n.node_id for n in tree.nodes()] == [f"s{i}" for i in range(12)]


def test_perfect_training_accuracy_with_min_leaf_one(binned):
    tree = grow(binned, INFO_GAIN, min_leaf=1)
    for inst in binned.instances:
        label, _ = classify_tree(tree, inst)
        assert label == inst.label


def test_min_leaf_blocks_best_split_without_fallback():
    # x separates perfectly but has a one-instance branch; y scores lower.
    # the node must become a leaf rather than fall back to y.
    ts = nominal_set(["x", "y"], [
        ("a", "p", "c1"), ("a", "p", "c1"),
        ("b", "p", "c2"), ("b", "q", "c2"), ("c", "q", "c2")])
    tree = grow(ts, INFO_GAIN, min_leaf=2)
    assert tree.root.is_leaf
    assert tree.root.majority == "c2"


def test_score_tie_goes_to_first_declared_attribute():
    rows = [("a", "p", "c1"), ("b", "q", "c2")]
    assert grow(nominal_set(["x", "y"], rows), min_leaf=1).root.attribute == "x"
    assert grow(nominal_set(["y", "x"],
                            [(r[1], r[0], r[2]) for r in rows]),
                min_leaf=1).root.attribute == "y"


def test_branches_only_for_values_present_at_node():
    ts = nominal_set(["x", "y"], [
        ("a", "p", "c1"), ("a", "p", "c1"), ("a", "q", "c2"), ("a", "q", "c2"),
        ("b", "p", "c3"), ("b", "q", "c3"), ("b", "r", "c3")])
    tree = grow(ts, INFO_GAIN, min_leaf=1)
    assert tree.root.attribute == "x"
    under_a = tree.root.children["a"]
    assert under_a.attribute == "y"
    assert sorted(under_a.children) == ["p", "q"]  # r never occurs under a


def test_grow_rejects_bad_input(runs11):
    with pytest.raises(DataError, match="discretize"):
        grow(runs11)
    with pytest.raises(DataError, match="mode"):
        grow(nominal_set(["x"], [("a", "A")]), mode="gini")
    with pytest.raises(DataError, match="min_leaf"):
        grow(nominal_set(["x"], [("a", "A")]), min_leaf=0)
    with pytest.raises(DataError, match="empty"):
        grow(TrainingSet((), ("A",), ()))


def test_grow_is_deterministic(binned):
    one = model_to_json(grow(binned, GAIN_RATIO))
    two = model_to_json(grow(binned, GAIN_RATIO))
    assert one == two


def test_classify_returns_root_to_leaf_path(binned):
    tree = grow(binned, INFO_GAIN, min_leaf=1)
    label, path = classify_tree(tree, binned.instances[3])
    assert label == "P3"
    assert path[0] == "s0"
    assert len(path) == 2  # steps=b2 is pure one level down
    by_id = {n.node_id: n for n in tree.nodes()}
    assert by_id[path[-1]].is_leaf


def test_classify_unknown_value_and_fallback():
    ts = nominal_set(["x", "y"], [
        ("a", "p", "c1"), ("a", "p", "c1"), ("a", "q", "c2"), ("a", "q", "c2"),
        ("b", "p", "c3"), ("b", "q", "c3"), ("b", "r", "c3")])
    tree = grow(ts, INFO_GAIN, min_leaf=1)
    with pytest.raises(UnknownValueError, match="'r'"):
        classify_tree(tree, ("a", "r"))
    label, path = classify_tree(tree, ("a", "r"), fallback=True)
    assert label == "c1"  # majority tie at the x=a node breaks low
    assert path == ("s0", "s1")


def test_classify_checks_schema_width(stump):
    with pytest.raises(DataError, match="values"):
        classify_tree(stump, ("a", "extra"))


def test_extract_rules_stump(stump):
    assert extract_rules(stump) == [
        ClassificationRule(("s0", "x=a"), "s1"),
        ClassificationRule(("s0", "x=b"), "s2"),
        ClassificationRule(("s1",), "class=c1"),
        ClassificationRule(("s2",), "class=c2"),
    ]
    assert str(extract_rules(stump)[0]) == "s0 & x=a -> s1"


def test_extract_rules_single_leaf():
    tree = grow(nominal_set(["x"], [("a", "C")]))
    assert extract_rules(tree) == [ClassificationRule(("s0",), "class=C")]


def test_rule_count_is_edges_plus_leaves(binned):
    tree = grow(binned, INFO_GAIN, min_leaf=1)
    leaves = sum(1 for n in tree.nodes() if n.is_leaf)
    assert len(extract_rules(tree)) == (tree.node_count - 1) + leaves == 20


def test_rule_invariants():
    with pytest.raises(DataError, match="empty"):
        ClassificationRule((), "x")
    with pytest.raises(DataError, match="own premise"):
        ClassificationRule(("a", "b"), "a")


def test_prune_collapses_losing_subtree():
    ts = nominal_set(["x"], [("a", "c1"), ("a", "c1"), ("b", "c2")])
    tree = grow(ts, INFO_GAIN, min_leaf=1)
    prune_set = nominal_set(["x"], [("b", "c1")])
    pruned = rep_prune(tree, prune_set)
    assert pruned.root.is_leaf
    assert pruned.root.majority == "c1"
    assert pruned.root.node_id == "s0"


def test_prune_keeps_unvisited_subtree():
    ts = nominal_set(["x", "y"], [
        ("a", "p", "c1"), ("a", "p", "c1"), ("a", "q", "c2"),
        ("b", "p", "c3"), ("b", "q", "c3")])
    tree = grow(ts, INFO_GAIN, min_leaf=1)
    assert tree.root.children["a"].attribute == "y"
    prune_set = nominal_set(["x", "y"], [("b", "p", "c3"), ("b", "p", "c3")])
    pruned = rep_prune(tree, prune_set)
    assert pruned.root.attribute == "x"
    assert pruned.root.children["a"].attribute == "y"  # untouched: no visits
    assert pruned.root.children["b"].is_leaf


def test_prune_with_empty_prune_set_is_identity(binned):
    tree = grow(binned, INFO_GAIN, min_leaf=1)
    empty = TrainingSet(binned.attributes, binned.classes, ())
    assert model_to_json(rep_prune(tree, empty)) == model_to_json(tree)


def test_prune_requires_matching_schema(stump):
    other = nominal_set(["z"], [("a", "c1")])
    with pytest.raises(DataError, match="schema"):
        rep_prune(stump, other)


def error_count(tree, ts):
    wrong = 0
    for inst in ts.instances:
        try:
            label, _ = classify_tree(tree, inst)
        except UnknownValueError:
            wrong += 1
            continue
        if label != inst.label:
            wrong += 1
    return wrong


def test_pruning_never_hurts_on_the_prune_set():
    rng = random.Random(100)
    for _ in range(15):
        n = rng.randint(18, 36)
        rows = [(rng.choice("ab"), rng.choice("pqr"), rng.choice("uv"),
                 rng.choice("AB")) for _ in range(n)]
        cut = 2 * n // 3
        ts = nominal_set(["x", "y", "z"], rows[:cut])
        prune_set = nominal_set(["x", "y", "z"], rows[cut:])
        tree = grow(ts, INFO_GAIN, min_leaf=1)
        pruned = rep_prune(tree, prune_set)
        assert error_count(pruned, prune_set) <= error_count(tree, prune_set)
        ids = [node.node_id for node in pruned.nodes()]
        assert ids == [f"s{i}" for i in range(len(ids))]


def test_induce_reptree(binned):
    tree = induce(binned, "reptree", min_leaf=1, seed=0)
    assert tree.mode == INFO_GAIN
    assert [n.node_id for n in tree.nodes()] == \
        [f"s{i}" for i in range(tree.node_count)]
    for inst in binned.instances:
        classify_tree(tree, inst, fallback=True)


def test_induce_is_seed_deterministic(binned):
    one = model_to_json(induce(binned, "reptree", seed=5))
    two = model_to_json(induce(binned, "reptree", seed=5))
    assert one == two


def test_induce_unknown_method(binned):
    with pytest.raises(DataError, match="method"):
        induce(binned, "cart")


def full_model(runs11):
    dmap = discretize_supervised(runs11)
    cooked = apply_map(dmap, runs11)
    return model_to_json(grow(cooked, INFO_GAIN, min_leaf=1, discretization=dmap))


def test_model_json_round_trip(runs11):
    doc = full_model(runs11)
    rebuilt = model_from_json(json.loads(json.dumps(doc)))
    assert model_to_json(rebuilt) == doc
    assert rebuilt.discretization.cuts["steps"] == (8.0, 11.0)


def test_model_rejects_wrong_format():
    with pytest.raises(ModelIntegrityError, match="induction-graph"):
        model_from_json({"format": "something-else"})


def test_model_rejects_duplicate_id(runs11):
    doc = full_model(runs11)
    doc["nodes"][1]["id"] = doc["nodes"][0]["id"]
    with pytest.raises(ModelIntegrityError, match="duplicate node id"):
        model_from_json(doc)


def test_model_rejects_leaf_class_count_mismatch(runs11):
    doc = full_model(runs11)
    leaf = next(n for n in doc["nodes"] if "leaf_class" in n)
    leaf["leaf_class"] = "P9"
    with pytest.raises(ModelIntegrityError, match="disagrees"):
        model_from_json(doc)


def test_model_rejects_unknown_child(runs11):
    doc = full_model(runs11)
    split = next(n for n in doc["nodes"] if "children" in n)
    value = next(iter(split["children"]))
    split["children"][value] = "s99"
    with pytest.raises(ModelIntegrityError, match="unknown child"):
        model_from_json(doc)


def test_model_rejects_double_parenting(runs11):
    doc = full_model(runs11)
    splits = [n for n in doc["nodes"] if "children" in n]
    value = next(iter(splits[1]["children"]))
    splits[1]["children"][value] = next(iter(splits[0]["children"].values()))
    with pytest.raises(ModelIntegrityError, match="two parents"):
        model_from_json(doc)


def test_model_rejects_unreachable_nodes(runs11):
    doc = full_model(runs11)
    split = next(n for n in doc["nodes"] if "children" in n)
    value = next(iter(split["children"]))
    del split["children"][value]
    with pytest.raises(ModelIntegrityError, match="unreachable"):
        model_from_json(doc)


def test_model_rejects_linked_first_node(runs11):
    doc = full_model(runs11)
    doc["nodes"].append(doc["nodes"].pop(0))
    with pytest.raises(ModelIntegrityError, match="root"):
        model_from_json(doc)


def test_model_rejects_childless_split():
    doc = {
        "format": "induction-graph", "mode": INFO_GAIN,
        "attributes": [{"name": "x", "kind": "nominal", "domain": ["a"]}],
        "classes": ["A"], "discretization": None,
        "nodes": [{"id": "s0", "counts": {"A": 1},
                   "split": "x", "children": {}}],
    }
    with pytest.raises(ModelIntegrityError, match="no children"):
        model_from_json(doc)


def test_model_rejects_empty_node_table():
    doc = {
        "format": "induction-graph", "mode": INFO_GAIN,
        "attributes": [], "classes": ["A"], "discretization": None,
        "nodes": [],
    }
    with pytest.raises(ModelIntegrityError, match="no nodes"):
        model_from_json(doc)
