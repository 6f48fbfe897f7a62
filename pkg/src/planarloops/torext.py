"""Tor over TL_{2n} through bar complexes, and Ext over R[y]/(y^(n+1)).

The bar complex B(R, TL_{2n}, M) has the words ``(*, D_1, ..., D_q, m)``:
``*`` is the generator of the trivial module on the left, on which a
diagram acts by the augmentation (1 on the identity, 0 otherwise).  On the
right m is either ``*`` again or a basis diagram of the cell module
S(2n, 0) = TL(2n, 0).

Blocks: every nonzero face keeps the product of the middle letters (with
the right coefficient folded in), and for a = 0 also its loop count, so
those are used as block keys.
"""

from __future__ import annotations

from dataclasses import dataclass
import functools

import numpy as np

from .barwords import Alphabet, MergeTable, WordComplex, compose_words, tl_alphabet, tl_merge
from .chaincore import HomologyTable, complex_from_maps, homology_table
from .diagrams import compose, enumerate_diagrams, identity
from .exactlin import CoeffRing, RingError, SparseMatrix

TRIVIAL = Alphabet("triv", ["*"])


def augmentation(d, ring: CoeffRing):
    """The algebra map TL_{2n} -> R: 1 on the identity, 0 on every other diagram."""
    return ring.one() if d.through_strands() == d.left_count == d.right_count else ring.zero()


def check_augmentation(n: int, ring: CoeffRing) -> list:
    """Pairs (D, E) where eps(D E) != eps(D) eps(E); empty when multiplicative."""
    bad = []
    ds = enumerate_diagrams(2 * n, 2 * n)
    for x in ds:
        for y in ds:
            res = compose(x, y)
            lhs = ring.mul(ring.power_of_a(res.loops), augmentation(res.diagram, ring))
            rhs = ring.mul(augmentation(x, ring), augmentation(y, ring))
            if lhs != rhs:
                bad.append((x, y))
    return bad


def _eps_table(left: Alphabet, right: Alphabet, middle_on_left: bool) -> MergeTable:
    diags = left.labels if middle_on_left else right.labels
    ok = np.array([0 if d.through_strands() == d.left_count else -1 for d in diags], dtype=np.int32)
    shape = (len(left), len(right))
    res = np.broadcast_to(ok[:, None] if middle_on_left else ok[None, :], shape).copy()
    return MergeTable(TRIVIAL, res, np.zeros(shape, dtype=np.int16))


@functools.lru_cache(maxsize=None)
def _tor_alphabets(n: int, normalized: bool, cell: bool):
    middle = tl_alphabet(2 * n, 2 * n, normalized)
    full = tl_alphabet(2 * n, 2 * n)
    merges = {
        (TRIVIAL.name, middle.name): _eps_table(TRIVIAL, middle, False),
        (middle.name, middle.name): tl_merge(middle, middle, full),
        (full.name, middle.name): tl_merge(full, middle, full),
    }
    if normalized:
        tab = merges[(middle.name, middle.name)]
        remap = np.array([middle.index.get(d, -1) for d in full.labels], dtype=np.int32)
        merges[(middle.name, middle.name)] = MergeTable(middle, remap[tab.result], tab.loops)
    if cell:
        right = tl_alphabet(2 * n, 0)
        merges[(middle.name, right.name)] = tl_merge(middle, right, right)
        merges[(full.name, right.name)] = tl_merge(full, right, right)
    else:
        right = TRIVIAL
        merges[(middle.name, TRIVIAL.name)] = _eps_table(middle, TRIVIAL, True)
    return middle, full, right, merges


def tor_word_complex(n: int, ring: CoeffRing, normalized: bool = True, cell: bool = False,
                     blocks: bool = True) -> WordComplex:
    """Bar complex for Tor^{TL_{2n}(R,a)}(R, M), M trivial or S(2n,0)."""
    middle, full, right, merges = _tor_alphabets(n, normalized, cell)
    graded = ring.weight_graded
    size = len(full) if not cell else len(right)
    ident = full.index[identity(2 * n)]
    to_full = np.array([full.index[d] for d in middle.labels], dtype=np.int64)

    def layout(q):
        return [TRIVIAL] + [middle] * q + [right]

    def faces(q):
        return range(q + 1) if q else range(0)

    key = None
    if blocks:
        def key(q, words):
            lay = layout(q)
            if cell:
                final, loops, alpha = compose_words(words, lay, merges, start=1)
            elif q == 0:
                final = np.full(len(words), ident, dtype=np.int64)
                loops = np.zeros(len(words), dtype=np.int64)
            else:
                # fold the middle letters only; the reduced alphabet maps
                # into the full one through the middle-middle table
                final, loops, alpha = compose_words(words[:, 1:q + 1], lay[1:q + 1], merges)
                if alpha is middle:
                    final = to_full[final]
            return loops * size + final if graded else final

        def key_label(k):
            return (k // size, k % size) if graded else k
    else:
        key_label = None

    coeff = "S" if cell else "R"
    name = f"Bar(R,TL_{2 * n},{coeff})" + ("bar" if normalized else "")
    params = {"n": 2 * n, "a": ring.a, "normalized": normalized, "coefficients": coeff}
    return WordComplex(ring, name, layout, faces, merges, key=key, key_label=key_label, params=params)


def tor_table(n: int, ring: CoeffRing, q_max: int, normalized: bool = True, blocks: bool = True,
              cache=None, progress=None) -> HomologyTable:
    """Tor_q^{TL_{2n}(R,a)}(R, R) for q <= q_max, one entry per degree."""
    wc = tor_word_complex(n, ring, normalized, False, blocks)
    return wc.homology(q_max, cache=cache, progress=progress).collapsed()


def tor_with_cell(n: int, ring: CoeffRing, q_max: int, normalized: bool = True, blocks: bool = True,
                  cache=None, progress=None) -> HomologyTable:
    """Tor_q^{TL_{2n}(R,a)}(R, S(2n,0)) for q <= q_max."""
    wc = tor_word_complex(n, ring, normalized, True, blocks)
    return wc.homology(q_max, cache=cache, progress=progress).collapsed()


# -- Ext over the truncated polynomial ring --------------------------------------


@dataclass(frozen=True)
class PeriodicResolution:
    """Free resolution of R over A = R[y]/(y^(n+1)): maps alternate y and y^n.

    The generator g_s sits in internal bidegree ``shift(s)`` where y has
    internal bidegree (2, 1); homological bidegree is (internal - s, weight).
    """

    n: int
    ring: CoeffRing

    def power(self, s: int) -> int:
        """The power of y in the map P_s -> P_{s-1}."""
        return 1 if s % 2 else self.n

    def shift(self, s: int) -> tuple[int, int]:
        x = w = 0
        for t in range(1, s + 1):
            k = self.power(t)
            x += 2 * k
            w += k
        return x, w

    def bidegree(self, s: int) -> tuple[int, int]:
        x, w = self.shift(s)
        return x - s, w

    def as_complex(self, s_max: int):
        """The resolution as a complex of free R-modules (basis y^j g_s), augmented by P_0 -> R."""
        n, ring = self.n, self.ring
        dims = {-1: 1}
        maps = {0: SparseMatrix.from_dense([[1] + [0] * n], ring)}
        for s in range(0, s_max + 1):
            dims[s] = n + 1
        for s in range(1, s_max + 1):
            k = self.power(s)
            rows = [[1 if j == i + k else 0 for i in range(n + 1)] for j in range(n + 1)]
            maps[s] = SparseMatrix.from_dense(rows, ring)
        shifted = {q + 1: d for q, d in dims.items()}
        return complex_from_maps(ring, shifted, {q + 1: m for q, m in maps.items()},
                                 name=f"resolution of R over R[y]/(y^{n + 1})", top_degree=s_max + 1)

    def hom_to_ground(self, s_max: int) -> dict[int, SparseMatrix]:
        """Hom_A(P_*, R): each term is R, and the map is eps(y^k) = 0."""
        out = {}
        for s in range(1, s_max + 1):
            k = self.power(s)
            value = 1 if k == 0 else 0
            out[s] = SparseMatrix.from_dense([[value]], self.ring)
        return out


def ext_table_truncated_poly(n: int, ring: CoeffRing, d_max: int) -> list[tuple[int, int]]:
    """Bidegrees (d, w) of the rank-one summands of Ext_{R[y]/(y^(n+1))}(R, R) with d <= d_max."""
    if n < 1:
        raise RingError("need n >= 1")
    if not ring.factorial_invertible(n):
        raise RingError(f"{n}! is not invertible in {ring.label}")
    res = PeriodicResolution(n, ring)
    out = []
    s = 0
    while True:
        d, w = res.bidegree(s)
        if d > d_max and res.bidegree(s + 1)[0] > d_max:
            break
        if d <= d_max:
            out.append((d, w))
        s += 1
    dual = res.hom_to_ground(s)
    if any(not m.is_zero() for m in dual.values()):
        raise RingError("the dual of the resolution is not minimal")
    return out


def resolution_homology(n: int, ring: CoeffRing, s_max: int) -> HomologyTable:
    """Homology of the augmented resolution (should vanish below the top)."""
    cx = PeriodicResolution(n, ring).as_complex(s_max)
    return homology_table(cx)
