import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rmas.errors import InfeasibleLabelingError, InstanceError, ParseError
from rmas.exact import brute_force_opt
from rmas.instance import (
    Edge,
    RmasInstance,
    evaluate,
    filter_edges,
    parse_instance,
    serialize_instance,
    total_weight,
)


@st.composite
def instances(draw, max_nodes=5, max_edges=8, integer_weights=True, labels=(-5, 9)):
    n = draw(st.integers(1, max_nodes))
    lists = [draw(st.lists(st.integers(*labels), min_size=1, max_size=4)) for _ in range(n)]
    weight = st.integers(0, 10).map(float) if integer_weights else st.floats(0, 100)
    edges = draw(st.lists(
        st.tuples(st.integers(0, n - 1), st.integers(0, n - 1), weight), max_size=max_edges
    ))
    return RmasInstance(tuple(tuple(l) for l in lists), tuple(Edge(*e) for e in edges))


def test_parse_two_cycle(i1):
    inst = parse_instance("nodes 2\nlabels 0 1 2\nlabels 1 1 2\nedge 0 1 1\nedge 1 0 1")
    assert inst == i1
    assert inst.label_lists == ((1, 2), (1, 2))
    assert [(e.tail, e.head, e.weight) for e in inst.edges] == [(0, 1, 1.0), (1, 0, 1.0)]


def test_parse_single_edge(i2):
    assert parse_instance("nodes 2\nlabels 0 1\nlabels 1 2\nedge 0 1 3") == i2


def test_self_loop_survives_parsing():
    inst = parse_instance("nodes 1\nlabels 0 5\nedge 0 0 1")
    assert inst.edges == (Edge(0, 0, 1.0),)
    report = filter_edges(inst)
    assert report.kept.edges == ()
    assert report.removed == ((Edge(0, 0, 1.0), "self-loop"),)


def test_parse_dedups_and_sorts_labels_and_skips_comments():
    inst = parse_instance("# header\nnodes 1\n\n  # indented comment\nlabels 0 3 1 3 -2\n")
    assert inst.label_lists == ((-2, 1, 3),)


@pytest.mark.parametrize("text, lineno", [
    ("nodes 2\nlabels 0 1\nlabels 1 2\nedge 0 1 -3", 4),
    ("nodes 2\nlabels 0 1\nlabels 2 2", 3),
    ("nodes 2\nlabels 0 1\nlabels 1 2\nedge 0 5 1", 4),
    ("nodes 2\nlabels 0 1\nlabels 1 2\nfoo 1", 4),
    ("nodes 2\nlabels 0 1\nlabels 1 2\nedge 0 1", 4),
    ("nodes 2\nlabels 0 x\nlabels 1 2", 2),
    ("labels 0 1", 1),
    ("nodes 1\nlabels 0 1\nlabels 0 2", 3),
    ("nodes 1\nlabels 0", 2),
    ("nodes 1\nlabels 0 1\nedge 0 0 nan", 3),
])
def test_parse_errors_carry_line_numbers(text, lineno):
    with pytest.raises(ParseError) as info:
        parse_instance(text)
    assert info.value.lineno == lineno
    assert f"line {lineno}" in str(info.value)


def test_parse_missing_labels_line():
    with pytest.raises(ParseError, match="missing 'labels' line for node 1"):
        parse_instance("nodes 2\nlabels 0 1\n")


def test_serialize_single_edge(i2):
    assert serialize_instance(i2).split("\n")[:3] == ["nodes 2", "labels 0 1", "labels 1 2"]
    assert serialize_instance(i2).strip() == "nodes 2\nlabels 0 1\nlabels 1 2\nedge 0 1 3"


def test_serialize_edgeless():
    assert serialize_instance(RmasInstance(((7,),))).strip() == "nodes 1\nlabels 0 7"


def test_round_trip_two_cycle(i1):
    assert parse_instance(serialize_instance(i1)) == i1


@given(instances(integer_weights=False))
def test_round_trip_property(inst):
    back = parse_instance(serialize_instance(inst))
    assert back == inst
    assert [e.weight for e in back.edges] == [e.weight for e in inst.edges]


def test_construction_rejects_bad_data():
    with pytest.raises(InstanceError):
        RmasInstance(((1,), ()))
    with pytest.raises(InstanceError):
        RmasInstance(((1,), (2,)), (Edge(0, 1, -1.0),))
    with pytest.raises(InstanceError):
        RmasInstance(((1,),), (Edge(0, 3, 1.0),))


def test_filter_blocked(i3):
    report = filter_edges(i3)
    assert report.kept.edges == ()
    assert report.removed == ((Edge(0, 1, 2.0), "blocked"),)
    assert total_weight(report.kept) == 0
    assert report.removed_weight == 2


def test_filter_keeps_two_cycle(i1):
    report = filter_edges(i1)
    assert report.kept == i1 and report.removed == ()


def test_filter_self_loop_with_room():
    inst = RmasInstance(((1, 2),), (Edge(0, 0, 1.0),))
    assert filter_edges(inst).removed == ((Edge(0, 0, 1.0), "self-loop"),)


def test_evaluate_examples(i1, i2):
    assert evaluate(i1, (1, 2)) == 1
    assert evaluate(i1, (1, 1)) == 0
    assert evaluate(i2, (1, 2)) == 3


def test_evaluate_rejects_off_list_label(i1):
    with pytest.raises(InfeasibleLabelingError):
        evaluate(i1, (1, 3))
    with pytest.raises(InfeasibleLabelingError):
        evaluate(i1, (1,))


def test_total_weight(i1, i2):
    assert total_weight(i1) == 2
    assert total_weight(i2) == 3
    assert total_weight(RmasInstance(((1,),))) == 0


def test_parallel_edges_count_separately():
    inst = RmasInstance(((1,), (2,)), (Edge(0, 1, 1.0), Edge(0, 1, 2.5)))
    assert evaluate(inst, (1, 2)) == 3.5


@given(instances(integer_weights=False))
def test_filter_partitions_weight(inst):
    report = filter_edges(inst)
    assert math.isclose(total_weight(report.kept) + report.removed_weight,
                        total_weight(inst), abs_tol=1e-9)
    assert report.kept.label_lists == inst.label_lists
    for e in report.kept.edges:
        assert e.tail != e.head and inst.lo(e.tail) < inst.hi(e.head)


@settings(max_examples=60)
@given(instances())
def test_filtering_preserves_opt(inst):
    assert brute_force_opt(inst).value == brute_force_opt(filter_edges(inst).kept).value


@given(instances(), st.data())
def test_evaluate_bounds_and_monotone_under_deletion(inst, data):
    lab = tuple(data.draw(st.sampled_from(ls)) for ls in inst.label_lists)
    value = evaluate(inst, lab)
    assert 0 <= value <= total_weight(inst)
    if inst.edges:
        drop = data.draw(st.integers(0, len(inst.edges) - 1))
        smaller = inst.with_edges(inst.edges[:drop] + inst.edges[drop + 1:])
        assert evaluate(smaller, lab) <= value
