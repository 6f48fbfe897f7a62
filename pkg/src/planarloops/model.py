"""The small model M(2n; R, a): a tensor algebra on x_1, x_3, ..., x_{2n-1}.

A word is a tuple of odd generator indices, e.g. ``(1, 3)`` for x_1 x_3.
The generator x_{2i-1} has bidegree (2i-1, i), and

    d(x_1) = a,    d(x_{2i-1}) = sum_{j+k=i, j,k>=1} binom(i, j) x_{2j-1} x_{2k-1},

extended as a derivation with sign (-1)^(degree of the left factor).
Elements are dicts from words to coefficients.
"""

from __future__ import annotations

from dataclasses import dataclass, field
import functools
from fractions import Fraction
from math import comb, factorial, gcd

import numpy as np

from .chaincore import ALL, BasisIndexedComplex, HomologyTable, homology_table
from .exactlin import CoeffRing, SparseMatrix, prime_field
from .exactlin.smith import integer_kernel

Word = tuple
Element = dict


class ModelError(ValueError):
    pass


# -- words and elements ------------------------------------------------------


def bidegree(word: Word) -> tuple[int, int]:
    return sum(word), sum((g + 1) // 2 for g in word)


def word_str(word: Word) -> str:
    return "".join(f"x{g}" for g in word) or "1"


def element_str(x: Element) -> str:
    if not x:
        return "0"
    parts = []
    for w, c in sorted(x.items()):
        parts.append(word_str(w) if c == 1 else f"{c}*{word_str(w)}")
    return " + ".join(parts)


def gen(i: int) -> Element:
    """The generator x_i (i odd) as an element."""
    if i < 1 or i % 2 == 0:
        raise ModelError(f"x_{i} is not a generator")
    return {(i,): 1}


def add(*xs: Element, ring: CoeffRing | None = None) -> Element:
    out: dict = {}
    for x in xs:
        for w, c in x.items():
            out[w] = out.get(w, 0) + c
    return _clean(out, ring)


def scale(c, x: Element, ring: CoeffRing | None = None) -> Element:
    return _clean({w: c * v for w, v in x.items()}, ring)


def multiply(x: Element, y: Element, ring: CoeffRing | None = None) -> Element:
    out: dict = {}
    for w1, c1 in x.items():
        for w2, c2 in y.items():
            w = w1 + w2
            out[w] = out.get(w, 0) + c1 * c2
    return _clean(out, ring)


def _clean(x: dict, ring: CoeffRing | None) -> Element:
    if ring is not None:
        x = {w: ring.coerce(c) for w, c in x.items()}
    return {w: c for w, c in x.items() if c != 0}


def degree(x: Element) -> int:
    degs = {sum(w) for w in x}
    if len(degs) > 1:
        raise ModelError("element is not homogeneous")
    return degs.pop() if degs else 0


@functools.lru_cache(maxsize=None)
def _gen_boundary(g: int, a) -> tuple:
    i = (g + 1) // 2
    if i == 1:
        return (((), a),) if a else ()
    return tuple(((2 * j - 1, 2 * (i - j) - 1), comb(i, j)) for j in range(1, i))


def model_d(x: Element, a=0, ring: CoeffRing | None = None) -> Element:
    """The model differential, extended by the signed Leibniz rule."""
    out: dict = {}
    for w, c in x.items():
        for t, g in enumerate(w):
            sign = -1 if t % 2 else 1  # every generator has odd degree
            for piece, k in _gen_boundary(g, a):
                nw = w[:t] + piece + w[t + 1:]
                out[nw] = out.get(nw, 0) + sign * k * c
    return _clean(out, ring)


# -- bases and complexes --------------------------------------------------------


@functools.lru_cache(maxsize=None)
def _words_of_degree(n: int, d: int) -> tuple:
    if d == 0:
        return ((),)
    out = []
    for g in range(1, min(2 * n - 1, d) + 1, 2):
        for rest in _words_of_degree(n, d - g):
            out.append((g,) + rest)
    return tuple(sorted(out))


def model_basis(n: int, d: int, w: int | None = None) -> list[Word]:
    """Words of degree d (and weight w when given) in the generators of M(2n)."""
    words = _words_of_degree(n, d)
    if w is None:
        return list(words)
    return [word for word in words if bidegree(word)[1] == w]


def _matrix(source: list, target_index: dict, image, ring: CoeffRing) -> SparseMatrix:
    r, c, v = [], [], []
    for k, word in enumerate(source):
        for tw, coeff in image(word).items():
            r.append(target_index[tw])
            c.append(k)
            v.append(coeff)
    return SparseMatrix.from_triplets(len(target_index), len(source), np.array(r, dtype=np.int64),
                                      np.array(c, dtype=np.int64), np.array(v, dtype=object), ring)


def build_model_complex(n: int, ring: CoeffRing, d_max: int, weights: bool | str = "auto") -> BasisIndexedComplex:
    """M(2n; R, a) in degrees 0..d_max+1; homology through d_max is exact.

    Weight blocks are used when a = 0; otherwise each degree is one block.
    """
    if n < 1:
        raise ModelError("need n >= 1")
    a = ring.a
    if weights == "auto":
        weights = ring.weight_graded
    if weights and not ring.weight_graded:
        raise ModelError("weight blocks need a = 0")
    top = d_max + 1
    cx = BasisIndexedComplex(ring, f"M({2 * n})", {"n": 2 * n, "a": a}, top_degree=top)
    for d in range(top + 1):
        words = model_basis(n, d)
        if weights:
            groups: dict = {}
            for word in words:
                groups.setdefault(bidegree(word)[1], []).append(word)
            for w in sorted(groups):
                cx.add_block(d, w, groups[w])
        elif words:
            cx.add_block(d, ALL, words)
    for (d, w), words in list(cx.blocks.items()):
        if d == 0 or (d - 1, w) not in cx.blocks:
            continue
        index = {word: k for k, word in enumerate(cx.blocks[(d - 1, w)])}
        cx.set_differential(d, w, _matrix(words, index, lambda word: model_d({word: 1}, a), ring))
    return cx


def model_homology(n: int, ring: CoeffRing, d_max: int, cache=None) -> HomologyTable:
    cx = build_model_complex(n, ring, d_max)
    return homology_table(cx, q_max=d_max, cache=cache)


# -- the cycle z_0 and the quotient by M(2n-2) -------------------------------------


def z0(n: int) -> Element:
    """sum_{j+k=n+1, j,k>=1} binom(n+1, j) x_{2j-1} x_{2k-1}, of bidegree (2n, n+1)."""
    return {(2 * j - 1, 2 * (n + 1 - j) - 1): comb(n + 1, j) for j in range(1, n + 1)}


def z0_content(n: int) -> int:
    """gcd of the coefficients of z_0; z_0 / gcd generates the cycles."""
    return functools.reduce(gcd, z0(n).values())


def cycle_lattice(n: int, d: int, w: int) -> tuple[list[Word], list[list[int]]]:
    """Basis words and an integer basis (as coefficient vectors) of the cycles in bidegree (d, w)."""
    words = model_basis(n, d, w)
    below = {word: k for k, word in enumerate(model_basis(n, d - 1, w))}
    cols = [model_d({word: 1}) for word in words]
    dense = [[cols[c].get(t, 0) for c in range(len(words))] for t in below]
    if not dense:
        return words, [[1 if k == j else 0 for k in range(len(words))] for j in range(len(words))]
    return words, integer_kernel(dense, len(words))


def quotient_image_of_z0(n: int) -> dict:
    """Image of z_0 in M(2n) (x)_{M(2n-2)} Z, with its boundary status.

    The quotient kills every word ending in a generator of M(2n-2), so it has
    the words ending in x_{2n-1} (and the empty word) as a basis.
    """
    if n < 2:
        raise ModelError("need n >= 2")
    top = 2 * n - 1

    def keep(word):
        return not word or word[-1] == top

    def project(x):
        return {w: c for w, c in x.items() if keep(w) and c}

    image = project(z0(n))
    # quotient differential is well defined: d of a killed word is killed
    d_bidegree = (2 * n, n + 1)
    killed = [w for w in model_basis(n, *d_bidegree) if not keep(w)]
    well_defined = all(not project(model_d({w: 1})) for w in killed)
    is_cycle = not project(model_d(image))
    sources = [w for w in model_basis(n, d_bidegree[0] + 1, d_bidegree[1]) if keep(w)]
    boundaries = [project(model_d({w: 1})) for w in sources]
    hits = any(boundaries)
    return {"image": image, "well_defined": well_defined, "cycle": is_cycle,
            "boundary_sources": len(sources), "boundaries_nonzero": hits}


# -- Massey products ---------------------------------------------------------------


def bar(x: Element) -> Element:
    """May's sign: x-bar = (-1)^(deg x + 1) x."""
    if not x:
        return {}
    return scale(-1 if degree(x) % 2 == 0 else 1, x)


@dataclass
class MasseyResult:
    defined: bool
    product: Element = field(default_factory=dict)
    violation: tuple | None = None
    reason: str = ""

    def __str__(self):
        if self.defined:
            return element_str(self.product)
        return f"undefined: {self.reason}"


def massey_general(system: dict, arity: int, a=0, ring: CoeffRing | None = None) -> MasseyResult:
    """Check a defining system {(j, k): a_jk} and return its Massey product.

    ``system`` holds a_{j,k} for 0 <= j < k <= arity with (j, k) != (0, arity);
    a_{j-1,j} are the cycles.  Conditions checked in order of k - j:
    d(a_{j-1,j}) = 0, and d(a_{j,k}) = sum_{j<l<k} bar(a_{j,l}) a_{l,k}.
    """
    for length in range(1, arity):
        for j in range(0, arity - length + 1):
            k = j + length
            if (j, k) not in system:
                return MasseyResult(False, violation=(j, k), reason=f"a_{{{j},{k}}} missing")
            target: Element = {}
            for l in range(j + 1, k):
                target = add(target, multiply(bar(system[(j, l)]), system[(l, k)], ring), ring=ring)
            if add(model_d(system[(j, k)], a, ring), scale(-1, target, ring), ring=ring):
                return MasseyResult(False, violation=(j, k), reason=f"d(a_{{{j},{k}}}) condition fails")
    product: Element = {}
    for l in range(1, arity):
        product = add(product, multiply(bar(system[(0, l)]), system[(l, arity)], ring), ring=ring)
    return MasseyResult(True, product=product)


def power_system(n: int, arity: int, ring: CoeffRing) -> dict:
    """The defining system a_{j,k} = x_{2(k-j)-1} / (k-j)! for the arity-fold product of Phi."""
    system = {}
    for j in range(arity):
        for k in range(j + 1, arity + 1):
            if (j, k) == (0, arity):
                continue
            length = k - j
            system[(j, k)] = {(2 * length - 1,): ring.inverse(factorial(length))}
    return system


def doubled_middle_system() -> dict:
    """Defining system for <Phi, 2 Phi, Phi> in M(4; Z, 0): both length-2 entries are x_3."""
    x1, x3 = {(1,): 1}, {(3,): 1}
    return {(0, 1): x1, (1, 2): {(1,): 2}, (2, 3): x1, (0, 2): x3, (1, 3): x3}


def massey_power(n: int, ring: CoeffRing, arity: int) -> MasseyResult:
    """<Phi, ..., Phi> (arity copies) in M(2n; R, 0)."""
    if arity < 3:
        raise ModelError("Massey products need arity >= 3")
    if arity > n + 1:
        return MasseyResult(False, reason=f"x_{2 * arity - 3} is not a generator of M({2 * n}); "
                                          f"x_1^2 is a cycle but not a boundary")
    if not ring.factorial_invertible(arity - 1):
        return MasseyResult(False, reason=f"({arity - 1})! is not invertible in {ring.label}")
    return massey_general(power_system(n, arity, ring), arity, 0, ring)


def massey_formula(n: int, arity: int) -> Element:
    """(1/i!) sum_{j+k=i} binom(i, j) x_{2j-1} x_{2k-1}, over Q."""
    i = arity
    return {(2 * j - 1, 2 * (i - j) - 1): Fraction(comb(i, j), factorial(i)) for j in range(1, i)}


# -- the coalgebra C_n and its cobar complex ------------------------------------------


class CnCoalgebra:
    """Free module on 1, x_1, ..., x_{2n-1} with psi(x_{2i-1}) = sum binom(i,j) x_{2j-1} (x) x_{2k-1}.

    Basis element ``i`` stands for x_{2i-1} and ``0`` for 1 (so x_{-1} = 1).
    """

    def __init__(self, n: int):
        self.n = n
        self.basis = list(range(n + 1))

    def coproduct(self, i: int) -> dict[tuple[int, int], int]:
        return {(j, i - j): comb(i, j) for j in range(i + 1)}

    def reduced_coproduct(self, i: int) -> dict[tuple[int, int], int]:
        return {(j, k): c for (j, k), c in self.coproduct(i).items() if j and k}

    def counit(self, i: int) -> int:
        return 1 if i == 0 else 0

    def coaugmentation(self) -> int:
        return 0

    def check_coassociative(self) -> bool:
        for i in self.basis:
            left: dict = {}
            right: dict = {}
            for (j, k), c in self.coproduct(i).items():
                for (j1, j2), c1 in self.coproduct(j).items():
                    left[(j1, j2, k)] = left.get((j1, j2, k), 0) + c * c1
                for (k1, k2), c2 in self.coproduct(k).items():
                    right[(j, k1, k2)] = right.get((j, k1, k2), 0) + c * c2
            if left != right:
                return False
        return True

    def check_counit(self) -> bool:
        for i in self.basis:
            lhs = {}
            rhs = {}
            for (j, k), c in self.coproduct(i).items():
                if self.counit(j):
                    lhs[k] = lhs.get(k, 0) + c
                if self.counit(k):
                    rhs[j] = rhs.get(j, 0) + c
            if {k: v for k, v in lhs.items() if v} != {i: 1} or {k: v for k, v in rhs.items() if v} != {i: 1}:
                return False
        return True


def cobar_of_Cn(n: int, ring: CoeffRing, d_max: int) -> BasisIndexedComplex:
    """Cobar(R, C_n, R) built from the coalgebra tables, then compared to M(2n; R, 0).

    A cobar word [c_1|...|c_k] of desuspended letters is stored as the tuple
    of odd degrees 2i-1 of its letters.  Raises ModelError on any mismatch.
    """
    coalg = CnCoalgebra(n)
    if not (coalg.check_coassociative() and coalg.check_counit()):
        raise ModelError(f"C_{n} fails the coalgebra axioms")
    ring0 = ring.with_parameter(0)
    reference = build_model_complex(n, ring0, d_max)
    cx = BasisIndexedComplex(ring0, f"Cobar(C_{n})", {"n": 2 * n}, top_degree=reference.top_degree)

    def letter_degree(i):
        return 2 * i - 1

    def d_word(word):
        out: dict = {}
        for t, g in enumerate(word):
            sign = (-1) ** sum(letter_degree((h + 1) // 2) for h in word[:t])
            for (j, k), c in coalg.reduced_coproduct((g + 1) // 2).items():
                nw = word[:t] + (letter_degree(j), letter_degree(k)) + word[t + 1:]
                out[nw] = out.get(nw, 0) + sign * c
        return {w: c for w, c in out.items() if c}

    for d in range(reference.top_degree + 1):
        words = []
        stack = [((), 0)]
        while stack:
            word, deg = stack.pop()
            if deg == d:
                words.append(word)
                continue
            for i in range(1, n + 1):
                if deg + letter_degree(i) <= d:
                    stack.append((word + (letter_degree(i),), deg + letter_degree(i)))
        groups: dict = {}
        for word in sorted(words):
            groups.setdefault(bidegree(word)[1], []).append(word)
        for w, ws in groups.items():
            cx.add_block(d, w, ws)
    for (d, w), words in cx.blocks.items():
        if (d - 1, w) in cx.blocks:
            index = {word: k for k, word in enumerate(cx.blocks[(d - 1, w)])}
            cx.set_differential(d, w, _matrix(words, index, d_word, ring0))
    for key in set(cx.blocks) | set(reference.blocks):
        if list(cx.blocks.get(key, [])) != list(reference.blocks.get(key, [])):
            raise ModelError(f"cobar basis differs from the model at {key}")
    for key in set(cx.differentials) | set(reference.differentials):
        if cx.differential(*key) != reference.differential(*key):
            raise ModelError(f"cobar differential differs from the model at {key}")
    return cx


# -- the mod 2 Bockstein for 2n = 4 ------------------------------------------------


def beta(x: Element) -> Element:
    """beta(x_1) = 0, beta(x_3) = x_1^2, extended as a derivation over F_2."""
    out: dict = {}
    for w, c in x.items():
        for t, g in enumerate(w):
            if g == 3:
                nw = w[:t] + (1, 1) + w[t + 1:]
                out[nw] = (out.get(nw, 0) + c) % 2
    return {w: c for w, c in out.items() if c % 2}


def bockstein_complex(d_max: int) -> BasisIndexedComplex:
    """T_{F_2}[x_1, x_3] with differential beta, degrees 0..d_max+1."""
    f2 = prime_field(2)
    top = d_max + 1
    cx = BasisIndexedComplex(f2, "beta on T[x1,x3]", {"n": 4}, top_degree=top)
    for d in range(top + 1):
        groups: dict = {}
        for word in model_basis(2, d):
            groups.setdefault(bidegree(word)[1], []).append(word)
        for w, ws in sorted(groups.items()):
            cx.add_block(d, w, ws)
    for (d, w), words in cx.blocks.items():
        if (d - 1, w) in cx.blocks:
            index = {word: k for k, word in enumerate(cx.blocks[(d - 1, w)])}
            cx.set_differential(d, w, _matrix(words, index, lambda word: beta({word: 1}), f2))
    return cx


def bockstein_homology_2n4(d_max: int = 7) -> HomologyTable:
    return homology_table(bockstein_complex(d_max), q_max=d_max)


def beta_squared_vanishes(d_max: int = 10) -> bool:
    return all(not beta(beta({w: 1})) for d in range(d_max + 1) for w in model_basis(2, d))


def dims_by_degree(table: HomologyTable, p: int | None = None) -> list[int]:
    """Per-degree dimension: free rank, plus torsion factors divisible by p when given."""
    out = []
    for q in range(table.q_max + 1):
        s = table.degree(q)
        out.append(s.free_rank + (s.torsion_count(p) if p else 0))
    return out

