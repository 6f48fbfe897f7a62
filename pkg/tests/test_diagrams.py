import json

import numpy as np
import pytest
from hypothesis import given, settings
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from planarloops.diagrams import (
    DiagramError,
    TLDiagram,
    catalan,
    compose,
    compose_many,
    empty,
    enumerate_diagrams,
    identity,
    juxtapose,
    left_cup,
    left_max,
    named_diagram,
    parse_diagram,
    phi_left,
    phi_right_prime,
    reflect,
    right_cup,
)

from conftest import composable_triples, diagrams


def _graph_compose(a: TLDiagram, b: TLDiagram):
    """Loop count and outer pairing by connected components of the glued graph."""
    l, m, n = a.left_count, a.right_count, b.right_count
    names = [("A", "L", k) for k in range(1, l + 1)] + [("M", k) for k in range(1, m + 1)] + \
            [("B", "R", k) for k in range(1, n + 1)]
    index = {v: j for j, v in enumerate(names)}

    def vertex(which, side, k):
        if which == "A":
            return index[("A", "L", k)] if side == "L" else index[("M", k)]
        return index[("M", k)] if side == "L" else index[("B", "R", k)]

    edges = [(vertex("A", *u), vertex("A", *v)) for u, v in a.arcs]
    edges += [(vertex("B", *u), vertex("B", *v)) for u, v in b.arcs]
    size = len(names)
    if not size:
        return empty(), 0
    rows = [u for u, _ in edges]
    cols = [v for _, v in edges]
    adj = coo_matrix((np.ones(len(rows)), (rows, cols)), shape=(size, size))
    _, labels = connected_components(adj, directed=False)
    outer = [j for j, v in enumerate(names) if v[0] != "M"]
    loops = len({labels[index[("M", k)]] for k in range(1, m + 1)} - {labels[j] for j in outer})
    arcs = []
    for c in {labels[j] for j in outer}:
        ends = [names[j] for j in outer if labels[j] == c]
        (_, s1, i1), (_, s2, i2) = ends
        arcs.append((s1, i1, s2, i2))
    return TLDiagram(l, n, arcs), loops


def test_catalan_counts():
    assert [len(enumerate_diagrams(2 * k, 2 * k)) for k in range(1, 5)] == [2, 14, 132, 1430]
    for m in range(7):
        for n in range(7):
            expected = catalan((m + n) // 2) if (m + n) % 2 == 0 else 0
            assert len(enumerate_diagrams(m, n)) == expected


def test_enumeration_is_sorted_and_distinct():
    ds = enumerate_diagrams(3, 5)
    assert len(set(ds)) == len(ds)
    assert list(ds) == sorted(ds)


def test_product_with_one_loop():
    d = parse_diagram(4, 4, "L3L4, R2R3, L1-R1, L2-R4")
    e = parse_diagram(4, 4, "L2L3, L1L4, R1R2, R3R4")
    assert compose(d, e) == (parse_diagram(4, 4, "L1L2, L3L4, R1R2, R3R4"), 1)


def test_rectangular_composite():
    d = parse_diagram(2, 6, "R4R5, R2R3, L1-R1, L2-R6")
    e = parse_diagram(6, 4, "L2L3, L1L4, L5-R1, L6-R4, R2R3")
    assert compose(d, e) == (parse_diagram(2, 4, "L1-R1, L2-R4, R2R3"), 1)


@pytest.mark.parametrize("size", [2, 4, 6, 8])
def test_loop_halves_close_to_one_cup(size):
    assert compose(phi_left(size), phi_right_prime(size)) == (right_cup(1, 2), 0)


def test_identity_is_neutral():
    for d in enumerate_diagrams(4, 2):
        assert compose(identity(4), d) == (d, 0)
        assert compose(d, identity(2)) == (d, 0)


def test_l_max_closes_r_max_into_loops():
    for size in (2, 4, 6):
        res = compose(reflect(left_max(size), "left_right"), left_max(size))
        assert res == (empty(), size // 2)


@pytest.mark.parametrize("text", ["L1L2, L1R1", "L1R2, L2R1", "L1L2"])
def test_invalid_diagrams_rejected(text):
    with pytest.raises(DiagramError):
        parse_diagram(2, 2, text)


def test_mismatched_composition_rejected():
    with pytest.raises(DiagramError):
        compose(identity(2), identity(4))


def test_odd_node_count_rejected():
    with pytest.raises(DiagramError):
        TLDiagram(1, 2, [("L", 1, "R", 1)])


def test_record_round_trip():
    for d in enumerate_diagrams(3, 3):
        assert TLDiagram.from_record(json.loads(d.to_json())) == d
        assert parse_diagram(3, 3, str(d)) == d


def test_named_diagrams():
    assert named_diagram("L_k", 2, 4) == left_cup(2, 4)
    assert named_diagram("id", 3) == identity(3)
    with pytest.raises(DiagramError):
        named_diagram("nope")


def test_partner_and_cups():
    d = parse_diagram(4, 2, "L1L2, L3-R1, L4-R2")
    assert d.partner("L", 3) == ("R", 1)
    assert d.left_cups() == [(1, 2)]
    assert not d.has_right_cup()
    assert d.through_strands() == 2


@settings(max_examples=1000, deadline=None)
@given(composable_triples())
def test_composition_associative_with_loops(triple):
    a, b, c = triple
    ab, k1 = compose(a, b)
    left, k2 = compose(ab, c)
    bc, k3 = compose(b, c)
    right, k4 = compose(a, bc)
    assert left == right
    assert k1 + k2 == k3 + k4
    assert compose_many([a, b, c]) == (left, k1 + k2)


@settings(max_examples=300, deadline=None)
@given(composable_triples(max_nodes=6))
def test_composition_matches_graph_oracle(triple):
    a, b, _ = triple
    assert tuple(compose(a, b)) == _graph_compose(a, b)


@settings(max_examples=200, deadline=None)
@given(diagrams())
def test_reflections_are_involutions(d):
    for axis in ("left_right", "top_bottom"):
        assert reflect(reflect(d, axis), axis) == d


@settings(max_examples=200, deadline=None)
@given(composable_triples(max_nodes=6))
def test_left_right_reverses_composition(triple):
    a, b, _ = triple
    ab, k = compose(a, b)
    assert compose(reflect(b, "left_right"), reflect(a, "left_right")) == (reflect(ab, "left_right"), k)


def test_juxtapose_counts():
    d = juxtapose(identity(1), left_cup(1, 2))
    assert (d.left_count, d.right_count) == (3, 1)
    assert d.left_cups() == [(1, 2)]
