"""Complexes whose basis elements are words of diagrams.

Every bar-type complex in this package has the same shape: in degree q a
basis element is a word of letters drawn from fixed alphabets (diagram
sets), and the k-th face map multiplies two adjacent letters through a
precomputed table, picking up ``a**loops``.  Words are stored as rows of a
small-integer array and encoded as mixed-radix integers, which keeps the
construction vectorised even for millions of words.

Blocks: an optional key function assigns every word an integer that all
nonzero faces preserve (weight, or the composite of all letters).  The
builder asserts this, so a wrong key cannot silently corrupt homology.
"""

from __future__ import annotations

from dataclasses import dataclass
import functools
from typing import Callable, Sequence

import numpy as np

from .chaincore import ALL, BasisIndexedComplex, HomologyTable
from .diagrams import TLDiagram, compose, enumerate_diagrams
from .exactlin import CoeffRing, DifferentialError, HomologySummary, SparseMatrix, rank_over_field
from .exactlin import smith_normal_form


class Alphabet:
    """A finite ordered set of letters with a reverse index."""

    def __init__(self, name: str, labels: Sequence):
        self.name = name
        self.labels = tuple(labels)
        self.index = {lab: k for k, lab in enumerate(self.labels)}

    def __len__(self):
        return len(self.labels)

    def __repr__(self):
        return f"Alphabet({self.name}, {len(self)})"


@dataclass
class MergeTable:
    """Product of letters: ``result[i, j]`` (-1 for zero) and its loop count."""

    target: Alphabet
    result: np.ndarray
    loops: np.ndarray


def merge_table(left: Alphabet, right: Alphabet, target: Alphabet,
                rule: Callable[[object, object], tuple[object, int] | None]) -> MergeTable:
    """Tabulate ``rule(x, y) -> (label, loops)`` or None for a zero product."""
    res = np.full((len(left), len(right)), -1, dtype=np.int32)
    loops = np.zeros((len(left), len(right)), dtype=np.int16)
    for i, x in enumerate(left.labels):
        for j, y in enumerate(right.labels):
            out = rule(x, y)
            if out is not None:
                lab, k = out
                res[i, j] = target.index[lab]
                loops[i, j] = k
    return MergeTable(target, res, loops)


@functools.lru_cache(maxsize=None)
def tl_alphabet(m: int, n: int, drop_identity: bool = False) -> Alphabet:
    ds = enumerate_diagrams(m, n)
    if drop_identity and m == n:
        ds = tuple(d for d in ds if d.through_strands() < m)
    tag = "bar" if drop_identity else ""
    return Alphabet(f"TL({m},{n}){tag}", ds)


@functools.lru_cache(maxsize=None)
def tl_merge(left: Alphabet, right: Alphabet, target: Alphabet) -> MergeTable:
    return merge_table(left, right, target, lambda x, y: tuple(compose(x, y)))


class WordBasis:
    """A block basis backed by an integer word array; items decode to letters."""

    def __init__(self, words: np.ndarray, layout: Sequence[Alphabet]):
        self.words = words
        self.layout = tuple(layout)

    def __len__(self):
        return len(self.words)

    def __getitem__(self, k):
        row = self.words[k]
        return tuple(a.labels[int(x)] for a, x in zip(self.layout, row))

    def __iter__(self):
        for k in range(len(self)):
            yield self[k]

    def index_of(self, word: Sequence) -> int:
        codes = [a.index[lab] for a, lab in zip(self.layout, word)]
        hits = np.flatnonzero((self.words == np.array(codes, dtype=self.words.dtype)).all(axis=1))
        if not len(hits):
            raise KeyError(word)
        return int(hits[0])


@dataclass
class _Degree:
    layout: tuple
    radices: np.ndarray
    words: np.ndarray      # sorted by (key, code)
    keys: np.ndarray       # key per sorted word
    slices: dict           # key -> slice into words
    pos_of_code: np.ndarray  # position of each code inside its block
    key_of_code: np.ndarray


class WordComplex:
    """A lazily built, blocked complex of words.

    ``layout(q)`` gives the alphabets of a degree-q word (None or [] for an
    empty degree); ``faces(q)`` lists the positions j merged by the faces of
    a degree-q word, face number k merging ``faces(q)[k]`` and the next
    letter with sign ``(-1)**k``; ``merges`` maps alphabet-name pairs to
    tables.  ``key(q, words)`` returns an int64 block key per word.
    """

    def __init__(self, ring: CoeffRing, name: str, layout, faces, merges: dict,
                 key=None, key_label=None, params: dict | None = None, q_min: int = 0):
        self.ring = ring
        self.name = name
        self.layout = layout
        self.faces = faces
        self.merges = merges
        self.key = key
        self.key_label = key_label or (lambda k: k)
        self.params = dict(params or {})
        self.q_min = q_min
        self._degrees: dict[int, _Degree | None] = {}

    # -- bases ------------------------------------------------------------

    def degree(self, q: int) -> _Degree | None:
        if q not in self._degrees:
            self._degrees[q] = self._build_degree(q)
        return self._degrees[q]

    def _build_degree(self, q):
        if q < self.q_min:
            return None
        layout = self.layout(q)
        if not layout or any(len(a) == 0 for a in layout):
            return None
        sizes = [len(a) for a in layout]
        radices = np.ones(len(sizes), dtype=np.int64)
        for k in range(len(sizes) - 2, -1, -1):
            radices[k] = radices[k + 1] * sizes[k + 1]
        total = int(radices[0] * sizes[0])
        dtype = np.int16 if max(sizes) < 2**15 else np.int32
        words = np.empty((total, len(sizes)), dtype=dtype)
        codes = np.arange(total, dtype=np.int64)
        for k, s in enumerate(sizes):
            words[:, k] = (codes // radices[k]) % s
        if self.key is None:
            keys = np.zeros(total, dtype=np.int64)
        else:
            keys = np.asarray(self.key(q, words), dtype=np.int64)
        order = np.argsort(keys, kind="stable")
        words_sorted = words[order]
        keys_sorted = keys[order]
        uniq, starts = np.unique(keys_sorted, return_index=True)
        ends = list(starts[1:]) + [total]
        slices = {int(k): slice(int(a), int(b)) for k, a, b in zip(uniq, starts, ends)}
        pos_of_code = np.empty(total, dtype=np.int64)
        for k, sl in slices.items():
            pos_of_code[order[sl]] = np.arange(sl.stop - sl.start)
        del words
        return _Degree(tuple(layout), radices, words_sorted, keys_sorted, slices, pos_of_code, keys)

    def block_keys(self, q: int) -> list[int]:
        deg = self.degree(q)
        return sorted(deg.slices) if deg else []

    def block_basis(self, q: int, key: int) -> WordBasis:
        deg = self.degree(q)
        if deg is None or key not in deg.slices:
            return WordBasis(np.zeros((0, 0), dtype=np.int16), ())
        return WordBasis(deg.words[deg.slices[key]], deg.layout)

    def dim(self, q: int, key: int | None = None) -> int:
        deg = self.degree(q)
        if deg is None:
            return 0
        if key is None:
            return len(deg.keys)
        sl = deg.slices.get(key)
        return 0 if sl is None else sl.stop - sl.start

    # -- differentials ----------------------------------------------------

    def block_differential(self, q: int, key: int) -> SparseMatrix:
        """The differential from block ``(q, key)`` to ``(q - 1, key)``."""
        src = self.degree(q)
        tgt = self.degree(q - 1)
        ncols = self.dim(q, key)
        nrows = self.dim(q - 1, key)
        if src is None or key not in src.slices or tgt is None or ncols == 0:
            return SparseMatrix.zeros(nrows, ncols, self.ring)
        words = src.words[src.slices[key]]
        cols = np.arange(len(words), dtype=np.int64)
        rows_all, cols_all, vals_all = [], [], []
        a = self.ring.a
        for k, j in enumerate(self.faces(q)):
            left, right = src.layout[j].name, src.layout[j + 1].name
            table = self.merges[(left, right)]
            res = table.result[words[:, j], words[:, j + 1]]
            loops = table.loops[words[:, j], words[:, j + 1]].astype(np.int64)
            ok = res >= 0
            if a == 0:
                ok &= loops == 0
            if not ok.any():
                continue
            w_ok = words[ok]
            code = np.zeros(len(w_ok), dtype=np.int64)
            t = 0
            for p in range(len(src.layout)):
                if p == j:
                    code += res[ok].astype(np.int64) * tgt.radices[t]
                    t += 1
                elif p == j + 1:
                    continue
                else:
                    code += w_ok[:, p].astype(np.int64) * tgt.radices[t]
                    t += 1
            tkeys = tgt.key_of_code[code]
            if self.key is not None and (tkeys != key).any():
                bad = int(np.flatnonzero(tkeys != key)[0])
                raise DifferentialError(
                    f"{self.name}: face {k} leaves block {self.key_label(key)} in degree {q}",
                    witness=WordBasis(w_ok, src.layout)[bad],
                )
            sign = -1 if k % 2 else 1
            if a == 0:
                vals = np.full(len(code), sign, dtype=np.int64)
            else:
                vals = np.array([sign * a**int(x) for x in loops[ok]], dtype=object)
            rows_all.append(tgt.pos_of_code[code])
            cols_all.append(cols[ok])
            vals_all.append(vals)
        if not rows_all:
            return SparseMatrix.zeros(nrows, ncols, self.ring)
        vals = np.concatenate(vals_all) if all(v.dtype != object for v in vals_all) else \
            np.concatenate([v.astype(object) for v in vals_all])
        return SparseMatrix.from_triplets(nrows, ncols, np.concatenate(rows_all),
                                          np.concatenate(cols_all), vals, self.ring)

    # -- materialisation ----------------------------------------------------

    def to_complex(self, q_max: int, q_min: int | None = None) -> BasisIndexedComplex:
        """Build blocks and differentials for degrees ``q_min..q_max``.

        The result is truncated: homology in degree q_max is flagged.
        """
        q_min = self.q_min if q_min is None else q_min
        cx = BasisIndexedComplex(self.ring, self.name, self.params, top_degree=q_max)
        for q in range(q_min, q_max + 1):
            for key in self.block_keys(q):
                cx.add_block(q, self._label(key), self.block_basis(q, key))
        for q in range(q_min + 1, q_max + 1):
            for key in self.block_keys(q):
                if self.dim(q - 1, key):
                    cx.set_differential(q, self._label(key), self.block_differential(q, key))
        return cx

    def _label(self, key):
        return ALL if self.key is None else self.key_label(key)

    def homology(self, q_max: int, q_min: int | None = None, cache=None,
                 progress: Callable[[str], None] | None = None) -> HomologyTable:
        """Blockwise homology without keeping matrices in memory.

        Needs differentials up to degree ``q_max + 1``; if that degree is
        empty the top entries are exact.
        """
        q_min = self.q_min if q_min is None else q_min
        ring = self.ring
        memo: dict = {}

        def invariants(q, key):
            if (q, key) in memo:
                return memo[(q, key)]
            d = self.block_differential(q, key) if self.dim(q, key) and self.dim(q - 1, key) else None
            if d is None or d.is_zero():
                out = (0, [])
            else:
                hit = cache.get_invariants(d, ring) if cache else None
                if hit is not None:
                    out = hit
                elif ring.kind == "Z":
                    inv = smith_normal_form(d)
                    out = (len(inv), inv)
                else:
                    out = (rank_over_field(d, ring), [])
                if cache and hit is None:
                    cache.put_invariants(d, ring, out)
            if progress:
                progress(f"{self.name}: d_{q} block {self.key_label(key)} "
                         f"{self.dim(q - 1, key)}x{self.dim(q, key)} rank {out[0]}")
            memo[(q, key)] = out
            return out

        table = HomologyTable(metadata={"complex": self.name, "ring": ring.label, **self.params}, q_max=q_max)
        for q in range(q_min, q_max + 1):
            for key in self.block_keys(q):
                rank_out, _ = invariants(q, key)
                rank_in, factors = invariants(q + 1, key)
                # drop the per-block memo of the outgoing map once used
                memo.pop((q, key), None)
                summary = HomologySummary(self.dim(q, key) - rank_out - rank_in,
                                          tuple(d for d in factors if d > 1), ring.label, True)
                table.entries[(q, self._label(key))] = summary
        return table


def compose_words(words: np.ndarray, layout: Sequence[Alphabet], merges: dict,
                  start: int = 0) -> tuple[np.ndarray, np.ndarray, Alphabet]:
    """Fold letters left to right; returns (final letter, total loops, alphabet).

    Zero products (table entry -1) give letter -1.
    """
    cur = words[:, start].astype(np.int64)
    cur_alpha = layout[start]
    loops = np.zeros(len(words), dtype=np.int64)
    for p in range(start + 1, len(layout)):
        table = merges[(cur_alpha.name, layout[p].name)]
        dead = cur < 0
        safe = np.where(dead, 0, cur)
        nxt = table.result[safe, words[:, p]].astype(np.int64)
        loops += np.where(dead, 0, table.loops[safe, words[:, p]])
        cur = np.where(dead | (nxt < 0), -1, nxt)
        cur_alpha = table.target
    return cur, loops, cur_alpha
