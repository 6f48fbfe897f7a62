import pytest
from hypothesis import given, strategies as st

from planarloops import series


@pytest.mark.parametrize("name,order,expected", [
    ("torsion-2n4", 8, [0, 0, 1, 1, 1, 2, 4, 5, 7]),
    ("tor-ranks-2n4", 7, [1, 0, 0, 1, 1, 0, 0, 1]),
    ("free-2n4", 10, [1, 1, 0, 0, 1, 1, 0, 0, 1, 1, 0]),
    ("model-dims-2n4", 8, [1, 1, 1, 2, 3, 4, 6, 9, 13]),
])
def test_expansions(name, order, expected):
    assert series.series(name, order) == expected


def _power_series_product(a, b, order):
    return [sum(a[j] * b[k - j] for j in range(k + 1)) for k in range(order + 1)]


def test_universal_coefficients_relation():
    # dims over F_2 = free ranks + (1 + t) * number of Z/2 summands
    order = 12
    free = series.series("free-2n4", order)
    tors = series.series("torsion-2n4", order)
    shifted = [0] + tors[:-1]
    assert [f + t + s for f, t, s in zip(free, tors, shifted)] == series.series("model-dims-2n4", order)


def test_model_dims_recursion():
    c = series.series("model-dims-2n4", 20)
    assert all(c[k] == c[k - 1] + c[k - 3] for k in range(3, 21))



def test_torsion_times_denominator_is_t_squared():
    torsion = series.series("torsion-2n4", 20)
    # (1 - t - t^3)(1 - t^4)
    denominator = [1, -1, 0, -1, -1, 1, 0, 1] + [0] * 13
    assert _power_series_product(torsion, denominator, 20) == [0, 0, 1] + [0] * 18


@given(st.sampled_from(series.NAMES))
def test_order_zero_is_constant_term(name):
    assert series.series(name, 0) == [series.bigraded(name, 0).get((0, 0), 0)]


def test_errors():
    with pytest.raises(KeyError):
        series.series("nope", 3)
    with pytest.raises(ValueError):
        series.series("free-2n4", -1)


def test_bigraded_free():
    assert sorted(series.bigraded("free-2n4", 9)) == [(0, 0), (1, 1), (4, 3), (5, 4), (8, 6), (9, 7)]
