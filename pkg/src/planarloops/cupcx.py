"""Cell modules, complexes of dashed cups, and their derived versions.

Sizes are half-counts, as in :mod:`planarloops.loops`: ``n`` for the 2n
middle strands and ``i`` (or ``q``) for 2i right nodes.

A dashed diagram is a TL diagram with some arcs marked.  In ``inn`` mode
the marked arcs are innermost right cups (k, k+1); in ``out`` mode the
diagram lies in TL(2n, 0) and the marked arcs are outermost left cups.
Marked cups are always listed in increasing node order, and the j-th face
map (j = 0, 1, ...) un-marks the j-th one with sign (-1)^j.
"""

from __future__ import annotations

from dataclasses import dataclass, field
import functools
from itertools import combinations
from math import comb
from typing import Iterable

import numpy as np

from .barwords import Alphabet, WordComplex, compose_words, merge_table, tl_alphabet, tl_merge
from .chaincore import ALL, BasisIndexedComplex, assemble_differential, totalize
from .diagrams import (
    LEFT,
    RIGHT,
    TLDiagram,
    compose,
    dashed_free_cut,
    empty,
    enumerate_diagrams,
    left_cup,
    left_max,
    phi_left,
    phi_right,
    phi_right_prime,
    right_max,
)
from .exactlin import ZZ, CoeffRing, RingError, SparseMatrix

INN = "inn"
OUT = "out"


class CupComplexError(ValueError):
    """Invalid dashed data or parameters for a cup complex."""


# -- dashed diagrams ------------------------------------------------------------


def innermost_right_cups(d: TLDiagram) -> list[tuple[int, int]]:
    return [(k, k + 1) for k in range(1, d.right_count) if d.partner(RIGHT, k) == (RIGHT, k + 1)]


def outermost_left_cups(d: TLDiagram) -> list[tuple[int, int]]:
    cups = d.left_cups()
    return [c for c in cups if not any(o[0] < c[0] and c[1] < o[1] for o in cups)]


@dataclass(frozen=True)
class DashedDiagram:
    base: TLDiagram
    dashed: frozenset = field(default_factory=frozenset)
    mode: str = INN

    def __post_init__(self):
        object.__setattr__(self, "dashed", frozenset(tuple(c) for c in self.dashed))
        if self.mode == INN:
            allowed = set(innermost_right_cups(self.base))
        elif self.mode == OUT:
            if self.base.right_count:
                raise CupComplexError("outermost cups live on diagrams in TL(2n, 0)")
            allowed = set(outermost_left_cups(self.base))
        else:
            raise CupComplexError(f"unknown mode {self.mode!r}")
        bad = self.dashed - allowed
        if bad:
            raise CupComplexError(f"{sorted(bad)} are not {self.mode}ermost cups of {self.base}")

    @property
    def degree(self) -> int:
        return len(self.dashed)

    def ordered(self) -> list[tuple[int, int]]:
        return sorted(self.dashed)

    def undash(self, j: int) -> "DashedDiagram":
        cup = self.ordered()[j]
        return DashedDiagram(self.base, self.dashed - {cup}, self.mode)

    def sort_key(self):
        return self.base.sort_key(), tuple(self.ordered())

    def __lt__(self, other):
        return self.sort_key() < other.sort_key()

    def __str__(self):
        side = "R" if self.mode == INN else "L"
        marks = ", ".join(f"dashed {side}{a}{side}{b}" for a, b in self.ordered())
        return f"{self.base}" + (f" [{marks}]" if marks else "")


def _relabel(d: TLDiagram, m: int, n: int, right_map: dict, extra: Iterable = ()) -> TLDiagram:
    arcs = list(extra)
    for (s1, i1), (s2, i2) in d.arcs:
        j1 = right_map[i1] if s1 == RIGHT else i1
        j2 = right_map[i2] if s2 == RIGHT else i2
        arcs.append((s1, j1, s2, j2))
    return TLDiagram(m, n, arcs)


# -- cell modules and innermost cups ----------------------------------------------


def cell_basis(n: int, i: int) -> list[TLDiagram]:
    """Basis of S(2n, 2i): diagrams of TL(2n, 2i) without a right cup."""
    if n < 0 or i < 0:
        raise CupComplexError("sizes must be non-negative")
    if i > n:
        return []
    return [d for d in enumerate_diagrams(2 * n, 2 * i) if not d.has_right_cup()]


def inn_basis(n: int, i: int, q: int) -> list[DashedDiagram]:
    """Diagrams of TL(2n, 2i) with q dashed innermost right cups."""
    out = []
    for d in enumerate_diagrams(2 * n, 2 * i):
        for cups in combinations(innermost_right_cups(d), q):
            out.append(DashedDiagram(d, frozenset(cups)))
    return sorted(out)


def inn_faces(x: DashedDiagram) -> list[tuple[DashedDiagram, int]]:
    return [(x.undash(j), -1 if j % 2 else 1) for j in range(x.degree)]


def build_inn_complex(n: int, i: int, augmented: bool = True, ring: CoeffRing = ZZ) -> BasisIndexedComplex:
    """Inn_*(2n, 2i) as a complex of R-modules in degrees 0..i.

    With ``augmented`` the quotient map to S(2n, 2i) sits in degree -1.
    """
    cx = BasisIndexedComplex(ring, f"Inn({2 * n},{2 * i})" + ("aug" if augmented else ""),
                             {"n": 2 * n, "i": 2 * i, "augmented": augmented})
    for q in range(i + 1):
        cx.add_block(q, ALL, inn_basis(n, i, q))
    if augmented:
        cx.add_block(-1, ALL, cell_basis(n, i))
        target = {d: k for k, d in enumerate(cx.blocks[(-1, ALL)])}
        cx.set_differential(0, ALL, assemble_differential(
            ring, target, cx.blocks[(0, ALL)],
            lambda x: [] if x.base.has_right_cup() else [(x.base, 1)]))
    for q in range(1, i + 1):
        target = {x: k for k, x in enumerate(cx.blocks[(q - 1, ALL)])}
        cx.set_differential(q, ALL, assemble_differential(ring, target, cx.blocks[(q, ALL)], inn_faces))
    return cx


def forget_cups(x: DashedDiagram) -> TLDiagram:
    """Delete the dashed cups of an Inn basis diagram and renumber the right nodes."""
    gone = {k for cup in x.dashed for k in cup}
    keep = [k for k in range(1, x.base.right_count + 1) if k not in gone]
    right_map = {k: t for t, k in enumerate(keep, start=1)}
    arcs = [(s1, right_map[i1] if s1 == RIGHT else i1, s2, right_map[i2] if s2 == RIGHT else i2)
            for (s1, i1), (s2, i2) in x.base.arcs if not (s1 == RIGHT and i1 in gone)]
    return TLDiagram(x.base.left_count, len(keep), arcs)


def restore_cups(d: TLDiagram, cups: Iterable[tuple[int, int]]) -> DashedDiagram:
    """Inverse of :func:`forget_cups`: insert dashed right cups at the given positions."""
    cups = sorted(tuple(c) for c in cups)
    size = d.right_count + 2 * len(cups)
    used = {k for c in cups for k in c}
    if any(hi != lo + 1 for lo, hi in cups) or len(used) != 2 * len(cups) or (used and max(used) > size):
        raise CupComplexError(f"{cups} is not a set of disjoint innermost positions")
    free = [k for k in range(1, size + 1) if k not in used]
    right_map = {t: k for t, k in enumerate(free, start=1)}
    base = _relabel(d, d.left_count, size, right_map, [(RIGHT, lo, RIGHT, hi) for lo, hi in cups])
    return DashedDiagram(base, frozenset(cups))


def cup_decomposition(n: int, i: int, q: int) -> dict[tuple, list[DashedDiagram]]:
    """Split the degree-q basis of Inn(2n, 2i) by dashed set."""
    out: dict[tuple, list[DashedDiagram]] = {}
    for x in inn_basis(n, i, q):
        out.setdefault(tuple(x.ordered()), []).append(x)
    return out


def check_forgetting_bijection(n: int, i: int) -> list[str]:
    """Problems with Cup(F)(2n,2i) -> TL(2n, 2i - 2|F|); empty when it is a bijection for every F."""
    problems = []
    for q in range(i + 1):
        parts = cup_decomposition(n, i, q)
        if sum(len(v) for v in parts.values()) != len(inn_basis(n, i, q)):
            problems.append(f"degree {q}: the dashed sets do not partition the basis")
        if len(parts) != comb(2 * i - q, q):
            problems.append(f"degree {q}: {len(parts)} dashed sets occur, expected {comb(2 * i - q, q)}")
        for cups, xs in parts.items():
            images = [forget_cups(x) for x in xs]
            target = enumerate_diagrams(2 * n, 2 * (i - q))
            if len(set(images)) != len(xs) or set(images) != set(target):
                problems.append(f"F={cups}: {len(set(images))} images, {len(target)} targets")
            if any(restore_cups(d, cups) != x for d, x in zip(images, xs)):
                problems.append(f"F={cups}: restoring the cups is not inverse")
    return problems


# -- outermost cups (a = 0) ---------------------------------------------------------


def _require_a_zero(ring: CoeffRing, what: str):
    if ring.a != 0:
        raise RingError(f"{what} needs the parameter a = 0, got a = {ring.a}")


def out_basis(n: int, q: int) -> list[DashedDiagram]:
    """Diagrams of TL(2n, 0) with q dashed outermost left cups."""
    out = []
    for d in enumerate_diagrams(2 * n, 0):
        for cups in combinations(outermost_left_cups(d), q):
            out.append(DashedDiagram(d, frozenset(cups), OUT))
    return sorted(out)


def out_faces(x: DashedDiagram) -> list[tuple[DashedDiagram, int]]:
    return [(x.undash(j), -1 if j % 2 else 1) for j in range(x.degree)]


def build_out_complex(n: int, ring: CoeffRing = ZZ) -> BasisIndexedComplex:
    """Out_*(2n) in degrees 0..n as a complex of R-modules (module structure not kept)."""
    _require_a_zero(ring, "the complex of outermost cups")
    cx = BasisIndexedComplex(ring, f"Out({2 * n})", {"n": 2 * n})
    for q in range(n + 1):
        basis = out_basis(n, q)
        if basis:
            cx.add_block(q, ALL, basis)
    for q in range(1, n + 1):
        if (q, ALL) in cx.blocks:
            target = {x: k for k, x in enumerate(cx.blocks[(q - 1, ALL)])}
            cx.set_differential(q, ALL, assemble_differential(ring, target, cx.blocks[(q, ALL)], out_faces))
    return cx


def close_all_cups(d: TLDiagram) -> DashedDiagram:
    """S(2n, 2q) -> Out_q(2n): join right nodes 2j-1, 2j and dash the new cups."""
    if d.has_right_cup():
        raise CupComplexError("close_all_cups takes a cell-module diagram (no right cups)")
    q2 = d.right_count
    res = compose(d, left_max(q2))
    cups = []
    for j in range(1, q2, 2):
        (_, u), (_, v) = d.partner(RIGHT, j), d.partner(RIGHT, j + 1)
        cups.append((min(u, v), max(u, v)))
    return DashedDiagram(res.diagram, frozenset(cups), OUT)


def open_all_cups(x: DashedDiagram) -> TLDiagram:
    """Inverse of :func:`close_all_cups`: cut the dashed cups open to the right."""
    if x.mode != OUT:
        raise CupComplexError("open_all_cups takes an Out basis diagram")
    arcs = []
    for j, (lo, hi) in enumerate(x.ordered()):
        arcs += [(LEFT, lo, RIGHT, 2 * j + 1), (LEFT, hi, RIGHT, 2 * j + 2)]
    for (s1, i1), (s2, i2) in x.base.arcs:
        if (i1, i2) not in x.dashed:
            arcs.append((s1, i1, s2, i2))
    return TLDiagram(x.base.left_count, 2 * x.degree, arcs)


def out_face_via_cell(x: DashedDiagram, j: int) -> DashedDiagram | None:
    """The j-th face through S(2n,2q) = Out_q(2n): right-multiply by L_{2j+1}."""
    a = open_all_cups(x)
    res = compose(a, left_cup(2 * j + 1, a.right_count))
    if res.loops or res.diagram.has_right_cup():
        return None
    return close_all_cups(res.diagram)


def out_act(d: TLDiagram, x: DashedDiagram) -> DashedDiagram | None:
    """Left action of TL_{2n} on Out_q(2n) at a = 0; None for zero.

    The product is formed by concatenation; an arc is dashed when it runs
    through a dashed arc, and the result is zero if a loop forms or fewer
    than q dashed outermost cups survive.
    """
    res = compose(d, x.base)
    if res.loops:
        return None
    dashed = set()
    seen = set()
    for s in range(1, d.left_count + 1):
        if s in seen:
            continue
        side, t = d.partner(LEFT, s)
        marked = False
        while side == RIGHT:
            (_, u) = x.base.partner(LEFT, t)
            marked |= (min(t, u), max(t, u)) in x.dashed
            side, t = d.partner(RIGHT, u)
        seen |= {s, t}
        if marked:
            dashed.add((min(s, t), max(s, t)))
    outer = set(outermost_left_cups(res.diagram))
    if len(dashed & outer) < x.degree:
        return None
    return DashedDiagram(res.diagram, frozenset(dashed), OUT)


def cell_act(d: TLDiagram, a: TLDiagram) -> TLDiagram | None:
    """Left action of TL_{2n} on S(2n, 2q) at a = 0; None for zero."""
    res = compose(d, a)
    if res.loops or res.diagram.has_right_cup():
        return None
    return res.diagram


# -- submaximal cups and lifted faces -------------------------------------------------


def is_submaximal(cups: Iterable[tuple[int, int]]) -> bool:
    return all(lo % 2 == 1 and hi == lo + 1 for lo, hi in cups)


def submaximal_basis(n: int, i: int, q: int) -> list[DashedDiagram]:
    """M_q(2n, 2i); in degree 0 the diagrams sharing an innermost cup with (1,2),(3,4),..."""
    if q == 0:
        return [DashedDiagram(d) for d in enumerate_diagrams(2 * n, 2 * i)
                if any(lo % 2 for lo, _ in innermost_right_cups(d))]
    return [x for x in inn_basis(n, i, q) if is_submaximal(x.dashed)]


def build_submaximal_complex(n: int, i: int, ring: CoeffRing = ZZ) -> BasisIndexedComplex:
    if i > n:
        raise CupComplexError("the submaximal complex needs i <= n")
    cx = BasisIndexedComplex(ring, f"M({2 * n},{2 * i})", {"n": 2 * n, "i": 2 * i})
    for q in range(i + 1):
        cx.add_block(q, ALL, submaximal_basis(n, i, q))
    for q in range(1, i + 1):
        target = {x: k for k, x in enumerate(cx.blocks[(q - 1, ALL)])}
        cx.set_differential(q, ALL, assemble_differential(ring, target, cx.blocks[(q, ALL)], inn_faces))
    return cx


def _add(acc: dict, key, c):
    acc[key] = acc.get(key, 0) + c
    if acc[key] == 0:
        del acc[key]


def lifted_face(k: int, x: dict) -> dict:
    """The lift of the k-th Out face to submaximal Inn chains (a = 0).

    ``x`` maps DashedDiagrams to integer coefficients.  A diagram whose
    dashed set contains the cup (2k+1, 2k+2) goes to zero; otherwise it is
    multiplied on the right by L_{2k+1} and the dashes move with it.
    """
    out: dict = {}
    for dd, c in x.items():
        if dd.mode != INN or not is_submaximal(dd.dashed):
            raise CupComplexError(f"{dd} does not have a submaximal dashed set")
        size = dd.base.right_count
        if not 0 <= k < size // 2:
            raise CupComplexError(f"face {k} undefined for {size} right nodes")
        lo = 2 * k + 1
        if (lo, lo + 1) in dd.dashed:
            continue
        res = compose(dd.base, left_cup(lo, size))
        if res.loops:
            continue
        moved = frozenset((a - 2, b - 2) if a > lo else (a, b) for a, b in dd.dashed)
        _add(out, DashedDiagram(res.diagram, moved), c)
    return out


def lifted_boundary(x: dict) -> dict:
    """Alternating sum of the lifted faces."""
    out: dict = {}
    sizes = {dd.base.right_count for dd in x}
    for size in sizes:
        part = {dd: c for dd, c in x.items() if dd.base.right_count == size}
        for k in range(size // 2):
            for dd, c in lifted_face(k, part).items():
                _add(out, dd, -c if k % 2 else c)
    return out


def inn_d(x: dict) -> dict:
    out: dict = {}
    for dd, c in x.items():
        for face, sign in inn_faces(dd):
            _add(out, face, sign * c)
    return out


def check_lifted_faces(n: int, i: int) -> list[str]:
    """Where a lifted face fails to commute with the Inn differential on M_*(2n, 2i)."""
    problems = []
    for q in range(1, i + 1):
        for dd in submaximal_basis(n, i, q):
            for k in range(i):
                lhs = inn_d(lifted_face(k, {dd: 1}))
                rhs = lifted_face(k, inn_d({dd: 1}))
                if lhs != rhs:
                    problems.append(f"k={k}, {dd}")
    return problems


# -- derived complexes ---------------------------------------------------------


@functools.lru_cache(maxsize=None)
def _inn_alphabet(m: int, i: int, p: int) -> tuple[Alphabet, np.ndarray]:
    """Inn_p(m, 2i) letters and the index of each base diagram in TL(m, 2i)."""
    labels = inn_basis(m // 2, i, p)
    base = tl_alphabet(m, 2 * i)
    return Alphabet(f"Inn{p}({m},{2 * i})", labels), np.array([base.index[x.base] for x in labels], dtype=np.int64)


@functools.lru_cache(maxsize=None)
def _cell_alphabet(m: int, i: int) -> tuple[Alphabet, np.ndarray]:
    labels = [d for d in enumerate_diagrams(m, 2 * i) if not d.has_right_cup()]
    base = tl_alphabet(m, 2 * i)
    return Alphabet(f"S({m},{2 * i})", labels), np.array([base.index[d] for d in labels], dtype=np.int64)


@functools.lru_cache(maxsize=None)
def _out_alphabet(n: int, p: int) -> tuple[Alphabet, np.ndarray]:
    labels = out_basis(n, p)
    base = tl_alphabet(2 * n, 0)
    return Alphabet(f"Out{p}({2 * n})", labels), np.array([base.index[x.base] for x in labels], dtype=np.int64)


def _keep_dashes(d: TLDiagram, x: DashedDiagram):
    res = compose(d, x.base)
    return DashedDiagram(res.diagram, x.dashed), res.loops


def _cell_rule(d: TLDiagram, a: TLDiagram):
    res = compose(d, a)
    return None if res.diagram.has_right_cup() else (res.diagram, res.loops)


def _out_rule(d: TLDiagram, x: DashedDiagram):
    y = out_act(d, x)
    return None if y is None else (y, 0)


@functools.lru_cache(maxsize=None)
def _derived_data(kind: str, n: int, i: int, p: int):
    """Alphabets and merge tables for DInn_p(2n,2i), DS(2n,2i) or DOut_p(2n)."""
    start = tl_alphabet(0, 2 * n)
    middle = tl_alphabet(2 * n, 2 * n)
    if kind == "DInn":
        end, end_base = _inn_alphabet(2 * n, i, p)
        zero, zero_base = _inn_alphabet(0, i, p)
        act = merge_table(middle, end, end, lambda d, x: _keep_dashes(d, x))
        close = merge_table(start, end, zero, lambda d, x: _keep_dashes(d, x))
    elif kind == "DS":
        end, end_base = _cell_alphabet(2 * n, i)
        zero, zero_base = _cell_alphabet(0, i)
        act = merge_table(middle, end, end, _cell_rule)
        close = merge_table(start, end, zero, _cell_rule)
    elif kind == "DOut":
        end, end_base = _out_alphabet(n, p)
        labels = [empty()] if p == 0 else []
        zero = Alphabet(f"Y{p}", labels)
        zero_base = np.zeros(len(labels), dtype=np.int64)
        act = merge_table(middle, end, end, _out_rule)
        close = merge_table(start, end, zero, lambda d, x: tuple(compose(d, x.base)) if p == 0 else None)
    else:
        raise CupComplexError(f"unknown derived complex {kind!r}")
    merges = {
        (start.name, middle.name): tl_merge(start, middle, start),
        (middle.name, middle.name): tl_merge(middle, middle, middle),
        (middle.name, end.name): act,
        (start.name, end.name): close,
    }
    right = 0 if kind == "DOut" else 2 * i
    base_end, base_zero = tl_alphabet(2 * n, right), tl_alphabet(0, right)
    base_merges = {
        (start.name, middle.name): merges[(start.name, middle.name)],
        (middle.name, middle.name): merges[(middle.name, middle.name)],
        (middle.name, base_end.name): tl_merge(middle, base_end, base_end),
        (start.name, base_end.name): tl_merge(start, base_end, base_zero),
    }
    closing = left_max(right)
    close_loops = np.array([compose(y, closing).loops for y in base_zero.labels], dtype=np.int64)
    return start, middle, end, zero, merges, end_base, zero_base, base_end, base_zero, base_merges, close_loops


def derived_word_complex(kind: str, n: int, ring: CoeffRing, i: int = 0, p: int = 0,
                         weights: bool | str = "auto") -> WordComplex:
    """DInn_p(2n, 2i), DS(2n, 2i) or DOut_p(2n) as a word complex.

    Degree q >= 1 words are (D_0 | D_1 .. D_{q-1} | X) with X in the last
    module; degree 0 is the closed-up module (Inn_p(0,2i), S(0,2i), or R
    for DOut_0).  Blocks are loop counts after closing with L_max when
    a = 0.
    """
    if n < 1 or i < 0 or p < 0:
        raise CupComplexError("need n >= 1 and i, p >= 0")
    if kind == "DOut":
        _require_a_zero(ring, "the derived complex of outermost cups")
        if p > n:
            raise CupComplexError(f"DOut_{p}({2 * n}) is zero")
    if weights == "auto":
        weights = ring.weight_graded
    if weights and not ring.weight_graded:
        raise RingError(f"weight blocks need a = 0, got a = {ring.a}")
    (start, middle, end, zero, merges, end_base, zero_base,
     base_end, base_zero, base_merges, close_loops) = _derived_data(kind, n, i, p)

    def layout(q):
        if q == 0:
            return [zero]
        return [start] + [middle] * (q - 1) + [end]

    def faces(q):
        return range(q)

    key = None
    if weights:
        def key(q, words):
            if q == 0:
                return close_loops[zero_base[words[:, 0]]]
            w = words.astype(np.int64)
            w[:, -1] = end_base[w[:, -1]]
            lay = [start] + [middle] * (q - 1) + [base_end]
            final, loops, _ = compose_words(w, lay, base_merges)
            return loops + close_loops[final]

    label = {"DInn": f"DInn{p}({2 * n},{2 * i})", "DS": f"DS({2 * n},{2 * i})", "DOut": f"DOut{p}({2 * n})"}[kind]
    params = {"kind": kind, "n": 2 * n, "i": 2 * i, "p": p, "a": ring.a}
    return WordComplex(ring, label, layout, faces, merges, key=key, params=params)


def build_derived(kind: str, n: int, ring: CoeffRing, q_max: int, i: int = 0, p: int = 0,
                  weights: bool | str = "auto") -> BasisIndexedComplex:
    """Degrees 0..q_max of a derived cup complex (top degree flagged)."""
    if q_max < 0:
        raise CupComplexError("q_max must be >= 0")
    return derived_word_complex(kind, n, ring, i, p, weights).to_complex(q_max)


def _last_letter_map(src: WordComplex, tgt: WordComplex, q: int, key: int, images) -> SparseMatrix:
    """Matrix of a map acting on the last letter only; ``images[c]`` lists (letter, coeff)."""
    sd, td = src.degree(q), tgt.degree(q)
    nrows, ncols = tgt.dim(q, key), src.dim(q, key)
    if sd is None or td is None or key not in sd.slices or not nrows:
        return SparseMatrix.zeros(nrows, ncols, src.ring)
    words = sd.words[sd.slices[key]].astype(np.int64)
    prefix = np.zeros(len(words), dtype=np.int64)
    for t in range(words.shape[1] - 1):
        prefix += words[:, t] * td.radices[t]
    rows, cols, vals = [], [], []
    for col, (pre, last) in enumerate(zip(prefix, words[:, -1])):
        for letter, c in images[int(last)]:
            code = pre + letter * td.radices[-1]
            if td.key_of_code[code] != key:
                raise CupComplexError(f"map leaves block {key} in degree {q}")
            rows.append(td.pos_of_code[code])
            cols.append(col)
            vals.append(c)
    return SparseMatrix.from_triplets(nrows, ncols, np.array(rows, dtype=np.int64),
                                      np.array(cols, dtype=np.int64), np.array(vals, dtype=object), src.ring)


def dout_total(n: int, ring: CoeffRing, t_max: int, augmented: bool = False) -> BasisIndexedComplex:
    """Total complex of DOut_0(2n) <- DOut_1(2n) <- ... <- DOut_n(2n).

    Exact through total degree ``t_max``.  With ``augmented`` the map
    DOut_0(2n) = L(2n) -> R sits in total degree -1.
    """
    _require_a_zero(ring, "the derived complex of outermost cups")
    top = t_max + 1
    ps = range(min(n, top) + 1)
    words = [derived_word_complex("DOut", n, ring, p=p) for p in ps]
    columns = [wc.to_complex(top - p) for p, wc in zip(ps, words)]
    connecting = []
    for p in ps[1:]:
        src_alpha = _out_alphabet(n, p)[0]
        tgt_alpha = _out_alphabet(n, p - 1)[0]
        images = [[(tgt_alpha.index[face], sign) for face, sign in out_faces(x)] for x in src_alpha.labels]
        blocks = {}
        for q in range(1, top - p + 1):
            for key in words[p].block_keys(q):
                blocks[(q, key)] = _last_letter_map(words[p], words[p - 1], q, key, images)
        connecting.append(blocks)
    total = totalize(columns, connecting, name=f"Tot DOut({2 * n})" + ("aug" if augmented else ""))
    if augmented:
        total.add_block(-1, 0, ["R"])
        total.set_differential(0, 0, SparseMatrix.from_dense([[1]], ring))
    total.params = {"n": 2 * n, "augmented": augmented}
    return total


# -- structural checks --------------------------------------------------------------


@dataclass
class IsoReport:
    """Outcome of matching two complexes through a basis bijection."""

    ok: bool
    dims: dict
    problems: list


def check_dinn_top(n: int, i: int, q_max: int) -> IsoReport:
    """DInn_i(2n,2i) against L(2n) through right multiplication by the all-dashed R_max.

    Compares bases, weights (shifted by i) and differentials in degrees
    0..q_max over Z with a = 0.
    """
    from .loops import loops_word_complex

    ring = ZZ
    lw = loops_word_complex(n, ring)
    dw = derived_word_complex("DInn", n, ring, i=i, p=i)
    cap = right_max(2 * i)
    all_cups = frozenset((2 * j + 1, 2 * j + 2) for j in range(i))
    problems, dims = [], {}

    def image(letters):
        *head, last = letters
        res = compose(last, cap)
        return tuple(head) + (DashedDiagram(res.diagram, all_cups),)

    for q in range(q_max + 1):
        dims[q] = (lw.dim(q), dw.dim(q))
        if lw.dim(q) != dw.dim(q):
            problems.append(f"degree {q}: dimensions {dims[q]}")
            continue
        for key in lw.block_keys(q):
            if dw.dim(q, key + i) != lw.dim(q, key):
                problems.append(f"degree {q}: weight {key} does not match weight {key + i}")
                continue
            src, tgt = lw.block_basis(q, key), dw.block_basis(q, key + i)
            perm = np.array([tgt.index_of(image(b)) for b in src], dtype=np.int64)
            if len(set(perm.tolist())) != len(perm):
                problems.append(f"degree {q}: not injective")
                continue
            if q == 0 or not lw.dim(q - 1, key):
                continue
            row_perm = np.array([dw.block_basis(q - 1, key + i).index_of(image(b))
                                 for b in lw.block_basis(q - 1, key)], dtype=np.int64)
            d_l = lw.block_differential(q, key).entries
            d_d = dw.block_differential(q, key + i).entries
            moved = {(int(row_perm[r]), int(perm[c])): v for (r, c), v in d_l.items()}
            if moved != d_d:
                problems.append(f"degree {q}, weight {key}: differentials differ")
    return IsoReport(not problems, dims, problems)


@dataclass
class WitnessReport:
    """The chain-level identity behind multiplication by i times the loop class."""

    n: int
    i: int
    boundary: dict      # delta_i of the all-dashed R_max, in Inn_{i-1}(0, 2i)
    lift: dict          # z, in TL(0,2n) (x) Inn_{i-1}(2n, 2i)
    lift_ok: bool
    image: dict         # lifted boundary of z
    expected_term: tuple
    coefficient: int | None
    holds: bool

    def __str__(self):
        status = "holds" if self.holds else "FAILS"
        return f"(n,i)=({self.n},{self.i}): coefficient {self.coefficient}, identity {status}"


def loop_class_witness(n: int, i: int) -> WitnessReport:
    """Lift the boundary of the all-dashed R_max(2i) and push it down one step.

    Checks that z = sum_j (-1)^(j+1) Phi_l (x) Phi_r^j maps onto the
    boundary, and that the lifted boundary of z is
    i * Phi_l (x) Phi_r . R_max(2i-2) (dashed).
    """
    if not 1 <= i <= n:
        raise CupComplexError("need 1 <= i <= n")
    cups = [(2 * j - 1, 2 * j) for j in range(1, i + 1)]
    top = DashedDiagram(right_max(2 * i), frozenset(cups))
    boundary = inn_d({top: 1})
    left = phi_left(2 * n)
    lift: dict = {}
    for j in range(1, i + 1):
        rest = frozenset(c for c in cups if c != cups[j - 1])
        body = compose(phi_right_prime(2 * n), dashed_free_cut(2 * i, j))
        lift[(left, DashedDiagram(body.diagram, rest))] = (-1) ** (j + 1)
    closed: dict = {}
    for (d0, x), c in lift.items():
        res = compose(d0, x.base)
        if res.loops == 0:
            _add(closed, DashedDiagram(res.diagram, x.dashed), c)
    image: dict = {}
    for (d0, x), c in lift.items():
        for y, e in lifted_boundary({x: c}).items():
            image[(d0, y)] = image.get((d0, y), 0) + e
    image = {k: v for k, v in image.items() if v}
    low = frozenset((2 * j - 1, 2 * j) for j in range(1, i))
    target = compose(phi_right(2 * n), right_max(2 * i - 2)).diagram
    term = (left, DashedDiagram(target, low))
    coeff = image.get(term) if set(image) == {term} else None
    return WitnessReport(n, i, boundary, lift, closed == boundary, image, term, coeff,
                         closed == boundary and coeff == i)
