from itertools import product

import pytest
from hypothesis import given, settings, strategies as st

from planarloops.chaincore import check_d_squared
from planarloops.diagrams import DiagramError, compose, empty, enumerate_diagrams
from planarloops.exactlin import QQ, ZZ, prime_field
from planarloops.loops import (
    WeightError,
    basis_elements,
    build_loops_complex,
    degree_of,
    hook,
    hook_basis,
    involution,
    involution_basis,
    loops_d,
    loops_homology,
    loops_multiply,
    phi,
    unit,
    weight,
    wind_sock,
)


def _sub(x, y, ring):
    out = dict(x)
    for k, c in y.items():
        out[k] = ring.add(out.get(k, 0), -c)
    return {k: c for k, c in out.items() if c}


def _add(x, y, ring):
    return _sub(x, {k: -c for k, c in y.items()}, ring)


def _leibniz_defect(b1, b2, ring):
    x, y = {b1: 1}, {b2: 1}
    lhs = loops_d(loops_multiply(x, y, ring), ring)
    sign = -1 if degree_of(b1) % 2 else 1
    rhs = _add(loops_multiply(loops_d(x, ring), y, ring),
               {k: sign * c for k, c in loops_multiply(x, loops_d(y, ring), ring).items()}, ring)
    return _sub(lhs, rhs, ring)


def test_dimensions():
    assert [len(basis_elements(1, q)) for q in range(1, 6)] == [2 ** (q - 1) for q in range(1, 6)]
    assert len(basis_elements(2, 1)) == 4
    cx = build_loops_complex(2, ZZ, 3)
    assert cx.total_dims() == {0: 1, 1: 4, 2: 56, 3: 784}
    assert len(basis_elements(2, 0, 2)) == 2


@pytest.mark.parametrize("n,a", [(1, 0), (1, 2), (2, 0), (2, 3), (3, 1)])
def test_d_squared(n, a):
    ring = ZZ.with_parameter(a)
    assert check_d_squared(build_loops_complex(n, ring, 3, weights=False))


def test_d_squared_on_modules():
    for i in (1, 2):
        assert check_d_squared(build_loops_complex(2, ZZ, 3, i=i))
        assert check_d_squared(build_loops_complex(2, ZZ.with_parameter(2), 3, i=i, weights=False))


@pytest.mark.parametrize("n,i,a", [(1, 0, 2), (2, 0, 0), (2, 0, 3), (2, 1, 1), (2, 2, 0)])
def test_word_engine_matches_element_differential(n, i, a):
    """The vectorised complex and the element-level differential agree column by column."""
    ring = ZZ.with_parameter(a)
    cx = build_loops_complex(n, ring, 3, i=i, weights=False)
    for q in range(1, 4):
        src, tgt = cx.blocks[(q, "ALL")], cx.blocks[(q - 1, "ALL")]
        index = {tgt[k]: k for k in range(len(tgt))}
        dense = cx.differential(q).entries
        for col in range(len(src)):
            expected = {(index[b], col): c for b, c in loops_d({src[col]: 1}, ring).items()}
            got = {key: v for key, v in dense.items() if key[1] == col}
            assert got == expected


def test_face_creating_a_loop_dies_at_zero():
    cx0 = build_loops_complex(2, ZZ, 2, weights=False)
    cx2 = build_loops_complex(2, ZZ.with_parameter(2), 2, weights=False)
    assert cx0.differential(2).nnz < cx2.differential(2).nnz


def test_weight_blocks_rejected_for_nonzero_parameter():
    with pytest.raises(WeightError):
        build_loops_complex(1, ZZ.with_parameter(1), 2, weights=True)


def test_weight_blocks_hold_weights():
    cx = build_loops_complex(2, ZZ, 3)
    for (q, w), basis in cx.blocks.items():
        assert all(weight(basis[k]) == w for k in range(len(basis)))


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_phi(n):
    assert weight(next(iter(phi(n)))) == 1
    assert loops_d(phi(n), ZZ) == {}
    for a in (1, 2, 3):
        assert loops_d(phi(n), ZZ.with_parameter(a)) == {(empty(),): a}


def test_phi_rejects_zero():
    with pytest.raises(DiagramError):
        phi(0)


def test_unit_and_phi_squared():
    x = phi(1)
    assert loops_multiply(unit(), x, ZZ) == x
    assert loops_multiply(x, unit(), ZZ) == x
    (b,) = loops_multiply(x, x, ZZ)
    assert weight(b) == 2 and weight((empty(),)) == 0
    middle = b[1]
    assert middle.left_cups() == [(1, 2)] and middle.right_cups() == [(1, 2)]


def test_multiply_mismatch():
    with pytest.raises(DiagramError):
        loops_multiply(phi(1), phi(2), ZZ)


@pytest.mark.parametrize("n,a", [(1, 0), (2, 0), (1, 2), (2, 1)])
def test_graded_leibniz_exhaustive(n, a):
    ring = ZZ.with_parameter(a)
    for p in range(1, 4):
        for r in range(1, 5 - p):
            for b1, b2 in product(basis_elements(n, p), basis_elements(n, r)):
                assert not _leibniz_defect(b1, b2, ring), (b1, b2)


@settings(max_examples=200, deadline=None)
@given(st.data())
def test_multiplication_associative(data):
    n = data.draw(st.integers(1, 2))
    pick = lambda: data.draw(st.sampled_from(basis_elements(n, data.draw(st.integers(1, 2)))))
    x, y, z = {pick(): 1}, {pick(): 1}, {pick(): 1}
    ring = ZZ.with_parameter(data.draw(st.integers(0, 3)))
    left = loops_multiply(loops_multiply(x, y, ring), z, ring)
    assert left == loops_multiply(x, loops_multiply(y, z, ring), ring)


def test_hook_on_l2():
    assert hook(unit()) == unit()
    seen = set()
    for q in range(1, 4):
        for b in basis_elements(1, q):
            h = hook_basis(b)
            assert weight(h) == weight(b)
            assert hook(loops_d({b: 1}, ZZ)) == loops_d({h: 1}, ZZ)
            seen.add(h)
        assert len(seen) == sum(len(basis_elements(1, k)) for k in range(1, q + 1))


def test_hook_is_multiplicative():
    for b1, b2 in product(basis_elements(1, 1) + basis_elements(1, 2), repeat=2):
        assert hook(loops_multiply({b1: 1}, {b2: 1}, ZZ)) == loops_multiply(hook({b1: 1}), hook({b2: 1}), ZZ)


@pytest.mark.parametrize("axis", ["left_right", "top_bottom"])
def test_involutions(axis):
    assert involution(unit(), axis) == unit()
    for q in range(0, 4):
        for b in basis_elements(2, q):
            x = {b: 1}
            if q <= 2:
                assert involution(involution(x, axis), axis) == x
            assert involution(loops_d(x, ZZ), axis) == loops_d(involution(x, axis), ZZ)


def test_involution_unknown_axis():
    with pytest.raises(DiagramError):
        involution_basis(basis_elements(1, 1)[0], "diagonal")


@pytest.mark.parametrize("n", [1, 2, 3])
def test_wind_sock(n):
    for i in (1, 2, 3):
        for z in enumerate_diagrams(0, 2 * i):
            x, y = wind_sock(n, z)
            assert compose(x, y) == (z, 0)


def test_normalized_matches_unreduced():
    for n, q in ((1, 4), (2, 3)):
        for ring in (ZZ, prime_field(2), ZZ.with_parameter(2)):
            full = loops_homology(n, ring, q)
            norm = loops_homology(n, ring, q, normalized=True)
            assert [full.degree(k) for k in range(q + 1)] == [norm.degree(k) for k in range(q + 1)]


def test_homology_l2_and_invertible_parameter():
    table = loops_homology(1, ZZ, 4)
    assert all(str(table.degree(q)) == "Z" for q in range(5))
    table = loops_homology(1, QQ.with_parameter(1), 3)
    assert all(table.degree(q).is_zero for q in range(4))


def test_module_homology_small():
    table = loops_homology(1, ZZ, 3, i=1)
    assert [table.degree(q).free_rank for q in range(4)] == [0, 0, 0, 0]
