import pytest

from planarloops import series
from planarloops.exactlin import QQ, ZZ, RingError, prime_field
from planarloops.loops import loops_homology
from planarloops.torext import (
    PeriodicResolution,
    check_augmentation,
    ext_table_truncated_poly,
    resolution_homology,
    tor_table,
    tor_with_cell,
    tor_word_complex,
)


def _strs(table, q_max):
    return [str(table.degree(q)) for q in range(q_max + 1)]


@pytest.mark.parametrize("n,a", [(1, 0), (1, 2), (2, 0), (2, 3)])
def test_augmentation_is_multiplicative(n, a):
    assert check_augmentation(n, ZZ.with_parameter(a)) == []


def test_tor_tl4_integral():
    assert _strs(tor_table(2, ZZ, 4), 4) == ["Z", "0", "0", "Z", "Z"]


def test_tor_ranks_follow_series():
    table = tor_table(2, QQ, 4)
    assert [table.degree(q).free_rank for q in range(5)] == series.series("tor-ranks-2n4", 4)


def test_tor_unit_parameter_vanishes():
    table = tor_table(2, ZZ.with_parameter(1), 3)
    assert all(table.degree(q).is_zero for q in (1, 2, 3))


@pytest.mark.parametrize("n,a,expected", [
    (1, 0, ["Z", "Z", "Z"]),
    (1, 3, ["Z", "Z/3", "0"]),
    (2, 2, ["Z", "0", "0", "Z/2", "0"]),
])
def test_tor_top_degrees(n, a, expected):
    # Tor_{2n-1} = R/a and Tor_{2n} = the a-torsion of R
    assert _strs(tor_table(n, ZZ.with_parameter(a), 2 * n), 2 * n) == expected


def test_tor_shift_matches_loops_homology():
    tor = tor_table(2, ZZ, 4)
    loops = loops_homology(2, ZZ, 1)
    assert tor.degree(3) == loops.degree(0)
    assert tor.degree(4) == loops.degree(1)


@pytest.mark.parametrize("ring", [ZZ, prime_field(2), ZZ.with_parameter(2)])
def test_normalized_matches_unreduced(ring):
    for n, q in ((1, 4), (2, 3)):
        assert _strs(tor_table(n, ring, q), q) == _strs(tor_table(n, ring, q, normalized=False), q)


def test_blocks_match_unblocked():
    assert _strs(tor_table(1, ZZ, 4), 4) == _strs(tor_table(1, ZZ, 4, blocks=False), 4)
    assert _strs(tor_table(1, ZZ.with_parameter(2), 3), 3) == \
        _strs(tor_table(1, ZZ.with_parameter(2), 3, blocks=False), 3)


def test_cell_coefficients():
    assert _strs(tor_with_cell(2, ZZ, 2), 2) == ["0", "Z", "Z"]
    assert _strs(tor_with_cell(1, ZZ, 2), 2) == ["Z", "Z", "Z"]
    assert tor_with_cell(2, ZZ.with_parameter(1), 1).degree(1).is_zero


def test_word_complex_names():
    assert "bar" in tor_word_complex(2, ZZ).name
    assert "S" in tor_word_complex(2, ZZ, cell=True).name


def test_ext_bidegrees():
    assert ext_table_truncated_poly(2, QQ, 9) == [(0, 0), (1, 1), (4, 3), (5, 4), (8, 6), (9, 7)]
    assert ext_table_truncated_poly(1, QQ, 5) == [(d, d) for d in range(6)]
    assert ext_table_truncated_poly(2, QQ, 9) == sorted(series.bigraded("free-2n4", 9))


def test_ext_needs_invertible_factorial():
    with pytest.raises(RingError):
        ext_table_truncated_poly(2, ZZ, 5)
    with pytest.raises(RingError):
        ext_table_truncated_poly(0, QQ, 5)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_periodic_resolution_is_exact(n):
    table = resolution_homology(n, QQ, 6)
    assert all(table.degree(q).is_zero for q in range(0, 6))
    res = PeriodicResolution(n, QQ)
    assert [res.power(s) for s in (1, 2, 3)] == [1, n, 1]
