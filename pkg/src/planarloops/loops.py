"""The dga of planar loops L(2n; R, a) and its modules L(0, 2n, 2i).

Sizes are given by the half-counts ``n`` and ``i``: the complex uses
diagrams with ``2n`` middle strands and ``2i`` free nodes on the right.

A basis element of degree q >= 1 is a tuple ``(D_0, ..., D_q)`` with
``D_0`` in TL(0,2n), ``D_1..D_{q-1}`` in TL(2n,2n) and ``D_q`` in
TL(2n,2i); in degree 0 it is a 1-tuple holding a TL(0,2i) diagram.
Elements are dicts from basis tuples to coefficients.
"""

from __future__ import annotations

import functools
from typing import Iterable

import numpy as np

from .barwords import MergeTable, WordComplex, compose_words, tl_alphabet, tl_merge
from .chaincore import BasisIndexedComplex
from .diagrams import (
    DiagramError,
    TLDiagram,
    compose,
    cut_cup,
    empty,
    enumerate_diagrams,
    left_cup,
    left_max,
    phi_left,
    phi_right,
    phi_right_prime,
    reflect,
    right_cup,
)
from .exactlin import CoeffRing, RingError

Element = dict


class WeightError(RingError):
    """Weight blocking asked for where the weight grading is undefined."""


# -- the complex --------------------------------------------------------------


@functools.lru_cache(maxsize=None)
def _loops_alphabets(n: int, i: int, normalized: bool):
    start = tl_alphabet(0, 2 * n)
    middle = tl_alphabet(2 * n, 2 * n, normalized)
    end = tl_alphabet(2 * n, 2 * i)
    base = tl_alphabet(0, 2 * i)
    full_middle = tl_alphabet(2 * n, 2 * n)
    merges = {
        (start.name, middle.name): tl_merge(start, middle, start),
        (middle.name, middle.name): tl_merge(middle, middle, full_middle),
        (middle.name, end.name): tl_merge(middle, end, end),
        (start.name, end.name): tl_merge(start, end, base),
        (full_middle.name, middle.name): tl_merge(full_middle, middle, full_middle),
        (full_middle.name, end.name): tl_merge(full_middle, end, end),
    }
    if normalized:
        # products of non-identity diagrams never give the identity, so the
        # middle-middle table can be re-indexed into the reduced alphabet
        full = merges[(middle.name, middle.name)]
        remap = np.array([middle.index.get(d, -1) for d in full_middle.labels], dtype=np.int32)
        merges[(middle.name, middle.name)] = MergeTable(middle, remap[full.result], full.loops)
    closing = left_max(2 * i)
    close_loops = np.array([compose(y, closing).loops for y in base.labels], dtype=np.int64)
    return start, middle, end, base, merges, close_loops


def loops_word_complex(n: int, ring: CoeffRing, i: int = 0, normalized: bool = False,
                       weights: bool | str = "auto") -> WordComplex:
    """The lazily built word complex behind :func:`build_loops_complex`."""
    if n < 1 or i < 0:
        raise DiagramError("need n >= 1 and i >= 0")
    if weights == "auto":
        weights = ring.weight_graded
    if weights and not ring.weight_graded:
        raise WeightError(f"weight grading undefined over {ring.label} with a = {ring.a}")
    start, middle, end, base, merges, close_loops = _loops_alphabets(n, i, normalized)

    def layout(q):
        if q == 0:
            return [base]
        return [start] + [middle] * (q - 1) + [end]

    def faces(q):
        return range(q)

    key = None
    if weights:
        def key(q, words):
            lay = layout(q)
            if q == 0:
                return close_loops[words[:, 0]]
            final, loops, _ = compose_words(words, lay, merges)
            return loops + close_loops[final]

    name = f"L(0,{2 * n},{2 * i})" if i else f"L({2 * n})"
    params = {"n": 2 * n, "i": 2 * i, "a": ring.a, "normalized": normalized}
    return WordComplex(ring, name + ("bar" if normalized else ""), layout, faces, merges,
                       key=key, params=params)


def build_loops_complex(n: int, ring: CoeffRing, q_max: int, i: int = 0, normalized: bool = False,
                        weights: bool | str = "auto") -> BasisIndexedComplex:
    """Degrees 0..q_max of L(0, 2n, 2i) over ``ring`` (its parameter is a).

    Weight blocks are used when the ring is graded (a = 0) unless
    ``weights=False``; asking for them with a != 0 raises WeightError.
    """
    return loops_word_complex(n, ring, i, normalized, weights).to_complex(q_max)


def loops_homology(n: int, ring: CoeffRing, q_max: int, i: int = 0, normalized: bool = False,
                   weights: bool | str = "auto", cache=None, progress=None):
    """Blockwise homology through degree q_max (builds d up to q_max + 1)."""
    wc = loops_word_complex(n, ring, i, normalized, weights)
    return wc.homology(q_max, cache=cache, progress=progress)


# -- elements -----------------------------------------------------------------


def _clean(x: Element, ring: CoeffRing) -> Element:
    out = {}
    for b, c in x.items():
        c = ring.coerce(c)
        if c != 0:
            out[b] = c
    return out


def _add(acc: dict, key, c, ring):
    acc[key] = ring.add(acc.get(key, ring.zero()), c)


def degree_of(b: tuple) -> int:
    return len(b) - 1 if len(b) > 1 else 0


def unit() -> Element:
    return {(empty(),): 1}


def phi(n: int) -> Element:
    """The degree-1 element (Phi_l | Phi_r) of L(2n): a single loop."""
    if n < 1:
        raise DiagramError("phi needs n >= 1")
    return {(phi_left(2 * n), phi_right(2 * n)): 1}


def _faces(b: tuple) -> Iterable[tuple[int, tuple, int]]:
    """(sign, face, loops) for each face of a basis tuple of degree >= 1."""
    q = len(b) - 1
    for j in range(q):
        res = compose(b[j], b[j + 1])
        yield (-1 if j % 2 else 1), b[:j] + (res.diagram,) + b[j + 2:], res.loops


def loops_d(x: Element, ring: CoeffRing) -> Element:
    """The bar differential on an element."""
    out: dict = {}
    for b, c in x.items():
        if len(b) == 1:
            continue
        for sign, face, k in _faces(b):
            coeff = ring.mul(ring.coerce(sign * c), ring.power_of_a(k))
            _add(out, face, coeff, ring)
    return _clean(out, ring)


def loops_multiply(x: Element, y: Element, ring: CoeffRing) -> Element:
    """Juxtaposition product; the left factor lies in L(2n), the right in L(0,2n,2i)."""
    out: dict = {}
    for b1, c1 in x.items():
        for b2, c2 in y.items():
            c = ring.mul(c1, c2)
            if len(b1) == 1:
                if b1[0].right_count:
                    raise DiagramError("left factor must lie in L(2n)")
                _add(out, b2, c, ring)
                continue
            if len(b2) == 1:
                if b2[0].right_count or b2[0].left_count:
                    raise DiagramError("cannot multiply by a degree-0 element of a module with i > 0")
                _add(out, b1, c, ring)
                continue
            if b1[-1].left_count != b2[0].right_count:
                raise DiagramError("mismatched strand counts")
            glued = compose(b1[-1], b2[0])
            _add(out, b1[:-1] + (glued.diagram,) + b2[1:], ring.mul(c, ring.power_of_a(glued.loops)), ring)
    return _clean(out, ring)


def weight(b: tuple) -> int:
    """Loops formed by the pinned system, after closing the right end with L_max."""
    total = 0
    cur = b[0]
    for d in b[1:]:
        res = compose(cur, d)
        cur = res.diagram
        total += res.loops
    return total + compose(cur, left_max(cur.right_count)).loops


def hook(x: Element) -> Element:
    """The hook map L(0,2n,2i) -> L(0,2n+2,2i) on elements."""
    out = {}
    for b, c in x.items():
        out[hook_basis(b)] = c
    return out


def hook_basis(b: tuple) -> tuple:
    if len(b) == 1:
        return b
    size = b[0].right_count
    r1 = right_cup(1, size + 2)
    l2 = left_cup(2, size + 2)
    first = compose(b[0], r1).diagram
    middle = tuple(compose(compose(l2, d).diagram, r1).diagram for d in b[1:-1])
    last = compose(l2, b[-1]).diagram
    return (first,) + middle + (last,)


def involution_basis(b: tuple, axis: str) -> tuple[int, tuple]:
    """(sign, image) of a basis tuple under a reflection.

    ``top_bottom`` reflects each diagram.  ``left_right`` also reverses the
    tuple, which reverses the order of the faces; the sign
    (-1)^(q(q-1)/2) makes it commute with d.
    """
    if axis == "top_bottom":
        return 1, tuple(reflect(d, axis) for d in b)
    if axis == "left_right":
        if b[-1].right_count:
            raise DiagramError("left_right reflection needs i = 0")
        q = degree_of(b)
        sign = -1 if (q * (q - 1) // 2) % 2 else 1
        return sign, tuple(reflect(d, axis) for d in reversed(b))
    raise DiagramError(f"unknown axis {axis!r}")


def involution(x: Element, axis: str) -> Element:
    out = {}
    for b, c in x.items():
        sign, img = involution_basis(b, axis)
        out[img] = sign * c
    return out


def wind_sock(n: int, z: TLDiagram) -> tuple[TLDiagram, TLDiagram]:
    """Diagrams x in TL(0,2n) and y in TL(2n,2i) with x . y = z (no loops)."""
    if z.left_count or not z.right_count:
        raise DiagramError("wind_sock expects a nonempty diagram in TL(0, 2i)")
    # an outermost cup of a TL(0,k) diagram: one not nested inside another
    cups = z.right_cups()
    outer = next(c for c in cups if not any(o[0] < c[0] and c[1] < o[1] for o in cups))
    opened = cut_cup(z, outer)
    return phi_left(2 * n), compose(phi_right_prime(2 * n), opened).diagram


def basis_elements(n: int, q: int, i: int = 0) -> list[tuple]:
    """All basis tuples of L(0,2n,2i) in degree q, in word order."""
    if q == 0:
        return [(d,) for d in enumerate_diagrams(0, 2 * i)]
    from itertools import product

    pieces = [enumerate_diagrams(0, 2 * n)] + [enumerate_diagrams(2 * n, 2 * n)] * (q - 1) + \
             [enumerate_diagrams(2 * n, 2 * i)]
    return list(product(*pieces))
