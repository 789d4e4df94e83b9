import pytest

from plancell import (DataError, build_training_set, class_distribution,
                      load_csv, save_csv, subset)

CSV = """problem:nominal,time:numeric,steps:numeric,class:nominal
blocks-4,0.5,6,P1
blocks-5,0.25,10,P2
blocks-4,0.125,6,P1
"""


def test_load_basic():
    ts = load_csv(CSV)
    assert len(ts.instances) == 3
    assert ts.attribute_names == ("problem", "time", "steps")
    assert ts.classes == ("P1", "P2")
    assert ts.instances[1].values == ("blocks-5", 0.25, 10.0)
    assert ts.instances[1].label == "P2"


def test_nominal_domain_first_seen_order():
    ts = load_csv("x:nominal,class:nominal\nc,A\na,A\nb,B\na,B\n")
    assert ts.attribute("x").domain == ("c", "a", "b")


def test_numeric_domain_min_max():
    ts = load_csv(CSV)
    assert ts.attribute("time").domain == (0.125, 0.5)
    assert ts.attribute("steps").domain == (6.0, 10.0)


def test_round_trip_exact():
    ts = load_csv(CSV)
    again = load_csv(save_csv(ts))
    assert again == ts
    # floats survive another lap byte-identically
    assert save_csv(again) == save_csv(ts)


def test_column_and_value_helpers():
    ts = load_csv(CSV)
    assert ts.column("steps") == [6.0, 10.0, 6.0]
    assert ts.value_of(ts.instances[0], "problem") == "blocks-4"


def test_class_distribution():
    assert class_distribution(load_csv(CSV)) == {"P1": 2, "P2": 1}


def test_missing_header():
    with pytest.raises(DataError, match="missing header"):
        load_csv("")


def test_untyped_header_rejected():
    with pytest.raises(DataError, match="bad header column 1"):
        load_csv("problem,class:nominal\nx,P1\n")


def test_last_column_must_be_class():
    with pytest.raises(DataError, match="class:nominal"):
        load_csv("a:nominal,b:nominal\nx,y\n")


def test_ragged_row_rejected():
    with pytest.raises(DataError, match="row 3"):
        load_csv("a:nominal,class:nominal\nx,P1\ny\n")


def test_missing_cell_rejected():
    with pytest.raises(DataError, match="column 'a'"):
        load_csv("a:nominal,class:nominal\n,P1\n")


def test_non_numeric_cell_rejected():
    with pytest.raises(DataError, match="non-numeric value 'abc'"):
        load_csv("t:numeric,class:nominal\nabc,P1\n")


def test_empty_body_rejected():
    with pytest.raises(DataError, match="no instances"):
        load_csv("a:nominal,class:nominal\n")


def test_duplicate_attribute_names_rejected():
    with pytest.raises(DataError, match="duplicate attribute"):
        build_training_set([("a", "nominal"), ("a", "nominal")],
                           [("x", "y", "P1")])


def test_unknown_kind_rejected():
    with pytest.raises(DataError, match="unknown kind"):
        build_training_set([("a", "ordinal")], [("x", "P1")])


def test_subset_reinfers_domains():
    ts = load_csv(CSV)
    sub = subset(ts, [0, 2])
    assert sub.classes == ("P1",)
    assert sub.attribute("problem").domain == ("blocks-4",)
    assert sub.attribute("time").domain == (0.125, 0.5)
    assert len(sub.instances) == 2


def test_subset_keeps_instance_order():
    ts = load_csv(CSV)
    sub = subset(ts, [2, 0])
    assert [i.values[1] for i in sub.instances] == [0.125, 0.5]
