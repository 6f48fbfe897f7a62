"""Closed-form generating functions used as the expected side of checks.

Each series is a quotient N/D of integer polynomials in t (and s for the
bigraded ones) with D(0) = 1, expanded exactly by the recursion
c_k = N_k - sum_{j>=1} D_j c_{k-j}.
"""

from __future__ import annotations

# numerator, denominator as {(t-power, s-power): coefficient}
_SERIES = {
    # free ranks of H_*(M(4; Z, 0))
    "free-2n4": ({(0, 0): 1, (1, 1): 1}, {(0, 0): 1, (4, 3): -1}),
    # number of Z/2 summands of H_*(M(4; Z, 0)); the weights come from
    # universal coefficients, model-dims = free + (1 + t) torsion
    "torsion-2n4": ({(2, 2): 1}, {(0, 0): 1, (1, 1): -1, (3, 2): -1, (4, 3): -1, (5, 4): 1, (7, 5): 1}),
    # dim over F_2 of H_*(M(4; F_2, 0))
    "model-dims-2n4": ({(0, 0): 1}, {(0, 0): 1, (1, 1): -1, (3, 2): -1}),
    # ranks of Tor^{TL_4(Z,0)}(Z, Z)
    "tor-ranks-2n4": ({(0, 0): 1, (3, 0): 1}, {(0, 0): 1, (4, 0): -1}),
}

NAMES = tuple(sorted(_SERIES))


def _expand(num: dict, den: dict, order: int) -> dict[tuple[int, int], int]:
    if den.get((0, 0)) != 1 or any(t == 0 and s for t, s in den):
        raise ValueError("denominator must have constant term 1 and no pure s terms")
    out: dict[tuple[int, int], int] = {}
    for t in range(order + 1):
        # coefficients of t^t as a polynomial in s
        row: dict[int, int] = {}
        for (a, b), c in num.items():
            if a == t:
                row[b] = row.get(b, 0) + c
        for (a, b), c in den.items():
            if a == 0 or a > t:
                continue
            for (u, v), x in out.items():
                if u == t - a:
                    row[v + b] = row.get(v + b, 0) - c * x
        for v, c in row.items():
            if c:
                out[(t, v)] = c
    return out


def bigraded(which: str, order: int) -> dict[tuple[int, int], int]:
    """Nonzero coefficients {(d, w): c} up to t-degree ``order``."""
    if which not in _SERIES:
        raise KeyError(f"unknown series {which!r}; choose from {', '.join(NAMES)}")
    if order < 0:
        raise ValueError("order must be >= 0")
    return _expand(*_SERIES[which], order)


def series(which: str, order: int) -> list[int]:
    """Coefficients of t^0 .. t^order, summing over the second grading."""
    out = [0] * (order + 1)
    for (d, _), c in bigraded(which, order).items():
        out[d] += c
    return out
