import pytest

from planarloops import cupcx
from planarloops.chaincore import check_d_squared, euler_characteristic, homology_table
from planarloops.cupcx import (
    INN,
    OUT,
    CupComplexError,
    DashedDiagram,
    build_derived,
    build_inn_complex,
    build_out_complex,
    build_submaximal_complex,
    cell_act,
    cell_basis,
    check_dinn_top,
    check_forgetting_bijection,
    check_lifted_faces,
    close_all_cups,
    derived_word_complex,
    dout_total,
    inn_basis,
    innermost_right_cups,
    loop_class_witness,
    lifted_face,
    open_all_cups,
    out_act,
    out_basis,
    out_face_via_cell,
    out_faces,
    outermost_left_cups,
)
from planarloops.diagrams import enumerate_diagrams, identity, parse_diagram
from planarloops.exactlin import QQ, ZZ, RingError, prime_field
from planarloops.loops import loops_homology


def _acyclic(cx, q_max=None):
    return all(s.is_zero for s in homology_table(cx, q_max=q_max).entries.values())


def test_cell_bases():
    assert cell_basis(2, 2) == [identity(4)]
    assert len(cell_basis(2, 1)) == 3
    assert len(enumerate_diagrams(4, 2)) == 5
    assert cell_basis(1, 2) == []


def test_cup_lists():
    d = parse_diagram(4, 4, "L1L4, L2L3, R1R2, R3R4")
    assert innermost_right_cups(d) == [(1, 2), (3, 4)]
    e = parse_diagram(6, 0, "L1L6, L2L3, L4L5")
    assert outermost_left_cups(e) == [(1, 6)]


def test_dashed_validation():
    d = parse_diagram(0, 4, "R1R4, R2R3")
    with pytest.raises(CupComplexError):
        DashedDiagram(d, frozenset({(1, 4)}))
    with pytest.raises(CupComplexError):
        DashedDiagram(d, frozenset(), "sideways")
    assert DashedDiagram(d, frozenset({(2, 3)})).degree == 1


def test_inn_degree_zero_basis():
    assert len(inn_basis(2, 2, 0)) == 14


@pytest.mark.parametrize("n", range(0, 5))
def test_inn_augmented_acyclic(n):
    for i in range(n + 1):
        cx = build_inn_complex(n, i)
        assert check_d_squared(cx)
        assert _acyclic(cx)


@pytest.mark.parametrize("i", [1, 2])
def test_inn_from_zero_strands_acyclic(i):
    assert _acyclic(build_inn_complex(0, i, augmented=False))


def test_inn_over_other_rings():
    assert _acyclic(build_inn_complex(3, 2, ring=prime_field(2)))
    assert _acyclic(build_inn_complex(3, 2, ring=QQ))


@pytest.mark.parametrize("n,i", [(2, 1), (2, 2), (3, 2), (4, 3)])
def test_forgetting_dashed_cups_is_bijective(n, i):
    assert check_forgetting_bijection(n, i) == []


def test_out_dims_and_acyclicity():
    assert build_out_complex(2).total_dims() == {0: 2, 1: 3, 2: 1}
    for n in range(1, 5):
        cx = build_out_complex(n)
        assert _acyclic(cx)
        assert euler_characteristic(cx.total_dims()) == 0
    assert build_out_complex(0).total_dims() == {0: 1}


def test_out_needs_zero_parameter():
    with pytest.raises(RingError):
        build_out_complex(2, ZZ.with_parameter(1))


def test_close_all_cups_example():
    a = parse_diagram(6, 4, "L1-R1, L4-R2, L5-R3, L6-R4, L2L3")
    x = close_all_cups(a)
    assert x == DashedDiagram(parse_diagram(6, 0, "L1L4, L2L3, L5L6"), frozenset({(1, 4), (5, 6)}), OUT)
    assert open_all_cups(x) == a


@pytest.mark.parametrize("n", range(0, 5))
def test_close_all_cups_bijective(n):
    for q in range(n + 1):
        images = [close_all_cups(a) for a in cell_basis(n, q)]
        assert sorted(images) == out_basis(n, q)
        assert all(open_all_cups(x) == a for x, a in zip(images, cell_basis(n, q)))
    assert all(close_all_cups(d) == DashedDiagram(d, frozenset(), OUT) for d in cell_basis(n, 0))


@pytest.mark.parametrize("n", [1, 2, 3])
def test_out_faces_two_routes(n):
    for q in range(1, n + 1):
        for x in out_basis(n, q):
            direct = [face for face, _ in out_faces(x)]
            via = [out_face_via_cell(x, j) for j in range(q)]
            assert direct == via


@pytest.mark.parametrize("n", [1, 2, 3])
def test_out_action_two_routes(n):
    for q in range(n + 1):
        for x in out_basis(n, q):
            for d in enumerate_diagrams(2 * n, 2 * n):
                a = cell_act(d, open_all_cups(x))
                expected = None if a is None else close_all_cups(a)
                assert out_act(d, x) == expected


def test_lifted_face_example():
    src = DashedDiagram(parse_diagram(8, 6, "L1-R3, L6-R4, L7L8, L2L3, L4L5, R1R2, R5R6"),
                        frozenset({(1, 2), (5, 6)}))
    dst = DashedDiagram(parse_diagram(8, 4, "L1L6, L2L3, L4L5, L7L8, R1R2, R3R4"),
                        frozenset({(1, 2), (3, 4)}))
    assert lifted_face(1, {src: 1}) == {dst: 1}
    assert lifted_face(0, {src: 1}) == {}


@pytest.mark.parametrize("n,i", [(2, 2), (3, 2), (3, 3)])
def test_lifted_faces_commute_with_inn_differential(n, i):
    assert check_lifted_faces(n, i) == []


def test_submaximal_complex_is_a_complex():
    assert check_d_squared(build_submaximal_complex(3, 2))


@pytest.mark.parametrize("n,i,coeff", [(2, 1, 1), (2, 2, 2), (3, 2, 2), (3, 1, 1), (3, 3, 3)])
def test_witness_identity(n, i, coeff):
    report = loop_class_witness(n, i)
    assert report.lift_ok and report.holds
    assert report.coefficient == coeff


def test_witness_rejects_bad_sizes():
    with pytest.raises(CupComplexError):
        loop_class_witness(2, 3)


def test_dinn_lower_filtration_acyclic():
    wc = derived_word_complex("DInn", 2, ZZ, i=1, p=0)
    assert all(s.is_zero for s in wc.homology(3).entries.values())


@pytest.mark.parametrize("n,i", [(1, 1), (2, 1), (2, 2)])
def test_dinn_top_is_shifted_loops(n, i):
    report = check_dinn_top(n, i, 3)
    assert report.ok, report.problems


def test_dinn_top_homology_matches_loops():
    top = homology_table(build_derived("DInn", 2, ZZ, 3, i=2, p=2), q_max=2).collapsed()
    loops = loops_homology(2, ZZ, 2).collapsed()
    assert [top.degree(q) for q in range(3)] == [loops.degree(q) for q in range(3)]


def test_dout_total_resolves_ground_ring():
    table = homology_table(dout_total(2, ZZ, 3), q_max=3).collapsed()
    assert [str(table.degree(t)) for t in range(4)] == ["Z", "0", "0", "0"]
    assert _acyclic(dout_total(2, ZZ, 3, augmented=True), q_max=3)


def test_derived_rejects_bad_input():
    with pytest.raises(CupComplexError):
        derived_word_complex("DOut", 2, ZZ, p=3)
    with pytest.raises(RingError):
        derived_word_complex("DOut", 2, ZZ.with_parameter(1))
    with pytest.raises(CupComplexError):
        build_derived("DInn", 2, ZZ, -1, i=1)


def test_modes_are_exported():
    assert {INN, OUT} == {"inn", "out"}
    assert cupcx.is_submaximal([(1, 2), (5, 6)]) and not cupcx.is_submaximal([(2, 3)])


def test_ds_routes():
    from planarloops.torext import tor_with_cell

    ds0 = homology_table(build_derived("DS", 2, ZZ, 4, i=0), q_max=3).collapsed()
    loops = loops_homology(2, ZZ, 3).collapsed()
    assert [ds0.degree(q) for q in range(4)] == [loops.degree(q) for q in range(4)]
    ds1 = homology_table(build_derived("DS", 2, ZZ, 4, i=1), q_max=3).collapsed()
    tor = tor_with_cell(2, ZZ, 3)
    assert [str(ds1.degree(q)) for q in range(4)] == [str(tor.degree(q)) for q in range(4)] == \
        ["0", "Z", "Z", "Z/2"]
