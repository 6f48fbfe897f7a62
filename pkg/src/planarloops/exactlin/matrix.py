"""Sparse exact matrices stored as sorted coordinate triplets."""

from __future__ import annotations

from fractions import Fraction
import hashlib

import numpy as np
import scipy.sparse as sp

from .rings import CoeffRing, ZZ

# magnitudes below this stay in int64 arrays; anything larger moves to objects
_SAFE = 1 << 62


def _fits_int64(values) -> bool:
    if values.dtype != object:
        return True
    return all(isinstance(x, int) and -_SAFE < x < _SAFE for x in values)


class SparseMatrix:
    """An immutable ``rows x cols`` matrix over a :class:`CoeffRing`.

    Entries are kept as coordinate arrays sorted by (row, col), with
    duplicates summed and zeros dropped.  Integer and prime-field data live
    in ``int64`` arrays while they fit; rationals and very large integers
    use object arrays so that arithmetic stays exact.
    """

    __slots__ = ("rows", "cols", "ring", "_r", "_c", "_v")

    def __init__(self, rows: int, cols: int, entries=None, ring: CoeffRing = ZZ):
        entries = entries or {}
        keys = list(entries)
        r = np.fromiter((k[0] for k in keys), dtype=np.int64, count=len(keys))
        c = np.fromiter((k[1] for k in keys), dtype=np.int64, count=len(keys))
        v = np.empty(len(keys), dtype=object)
        v[:] = [entries[k] for k in keys]
        self._set(rows, cols, ring, r, c, v)

    @classmethod
    def from_triplets(cls, rows, cols, r, c, v, ring: CoeffRing = ZZ) -> "SparseMatrix":
        self = cls.__new__(cls)
        self._set(rows, cols, ring, np.asarray(r, dtype=np.int64), np.asarray(c, dtype=np.int64), v)
        return self

    def _set(self, rows, cols, ring, r, c, v):
        self.rows, self.cols, self.ring = int(rows), int(cols), ring
        if len(r) and (r.min() < 0 or r.max() >= rows or c.min() < 0 or c.max() >= cols):
            raise IndexError("matrix entry out of range")
        v = np.asarray(v)
        if v.dtype != object and not np.issubdtype(v.dtype, np.integer):
            v = v.astype(object)
        if ring.kind == "Q" or v.dtype == object:
            v = v.astype(object)
            v = np.array([ring.coerce(x) for x in v], dtype=object) if len(v) else v
        elif ring.kind == "Fp":
            v = np.mod(v.astype(np.int64), ring.p)
        else:
            v = v.astype(np.int64)
        order = np.lexsort((c, r))
        r, c, v = r[order], c[order], v[order]
        if len(r):
            key = r * max(cols, 1) + c
            starts = np.flatnonzero(np.r_[True, key[1:] != key[:-1]])
            if len(starts) != len(key):
                if v.dtype == object:
                    sums = np.array(
                        [sum(v[a:b], ring.zero()) for a, b in zip(starts, list(starts[1:]) + [len(v)])],
                        dtype=object,
                    )
                    v = np.array([ring.coerce(x) for x in sums], dtype=object)
                else:
                    v = np.add.reduceat(v, starts)
                    if ring.kind == "Fp":
                        v = np.mod(v, ring.p)
                r, c = r[starts], c[starts]
            keep = v != 0
            if v.dtype == object:
                keep = np.array([x != 0 for x in v], dtype=bool)
            r, c, v = r[keep], c[keep], v[keep]
        if v.dtype == object and ring.kind == "Z" and _fits_int64(v):
            v = v.astype(np.int64)
        self._r, self._c, self._v = r, c, v

    # -- accessors --------------------------------------------------------

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    @property
    def nnz(self) -> int:
        return len(self._r)

    def triplets(self):
        return self._r, self._c, self._v

    @property
    def entries(self) -> dict:
        return {(int(r), int(c)): _plain(v) for r, c, v in zip(self._r, self._c, self._v)}

    def __getitem__(self, rc):
        r, c = rc
        lo = np.searchsorted(self._r, r, side="left")
        hi = np.searchsorted(self._r, r, side="right")
        for k in range(lo, hi):
            if self._c[k] == c:
                return _plain(self._v[k])
        return self.ring.zero()

    def is_zero(self) -> bool:
        return self.nnz == 0

    def to_dense(self) -> list[list]:
        out = [[self.ring.zero()] * self.cols for _ in range(self.rows)]
        for r, c, v in zip(self._r, self._c, self._v):
            out[r][c] = _plain(v)
        return out

    @classmethod
    def from_dense(cls, rows, ring: CoeffRing = ZZ, ncols: int | None = None) -> "SparseMatrix":
        rows = [list(row) for row in rows]
        ncols = len(rows[0]) if rows else (ncols or 0)
        entries = {(i, j): x for i, row in enumerate(rows) for j, x in enumerate(row) if x != 0}
        return cls(len(rows), ncols, entries, ring)

    @classmethod
    def zeros(cls, rows: int, cols: int, ring: CoeffRing = ZZ) -> "SparseMatrix":
        return cls(rows, cols, {}, ring)

    @classmethod
    def identity(cls, size: int, ring: CoeffRing = ZZ) -> "SparseMatrix":
        return cls(size, size, {(i, i): 1 for i in range(size)}, ring)

    def __eq__(self, other):
        if not isinstance(other, SparseMatrix):
            return NotImplemented
        return (
            self.shape == other.shape
            and np.array_equal(self._r, other._r)
            and np.array_equal(self._c, other._c)
            and all(x == y for x, y in zip(self._v, other._v))
        )

    def __repr__(self):
        return f"SparseMatrix({self.rows}x{self.cols}, nnz={self.nnz}, ring={self.ring.label})"

    # -- algebra ----------------------------------------------------------

    def transpose(self) -> "SparseMatrix":
        return SparseMatrix.from_triplets(self.cols, self.rows, self._c, self._r, self._v, self.ring)

    @property
    def T(self):
        return self.transpose()

    def scaled(self, x) -> "SparseMatrix":
        x = self.ring.coerce(x)
        v = np.array([y * x for y in self._v], dtype=object)
        return SparseMatrix.from_triplets(self.rows, self.cols, self._r, self._c, v, self.ring)

    def __neg__(self):
        return self.scaled(-1)

    def __add__(self, other: "SparseMatrix") -> "SparseMatrix":
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} + {other.shape}")
        v = np.concatenate([self._v.astype(object), other._v.astype(object)])
        return SparseMatrix.from_triplets(
            self.rows, self.cols,
            np.concatenate([self._r, other._r]), np.concatenate([self._c, other._c]), v, self.ring,
        )

    def __sub__(self, other):
        return self + (-other)

    def __matmul__(self, other: "SparseMatrix") -> "SparseMatrix":
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        ring = self.ring
        if self._int64_product_safe(other):
            a = sp.csr_matrix((self._v, (self._r, self._c)), shape=self.shape, dtype=np.int64)
            b = sp.csr_matrix((other._v, (other._r, other._c)), shape=other.shape, dtype=np.int64)
            prod = (a @ b).tocoo()
            return SparseMatrix.from_triplets(self.rows, other.cols, prod.row, prod.col, prod.data, ring)
        by_row: dict[int, list] = {}
        for r, c, v in zip(other._r, other._c, other._v):
            by_row.setdefault(int(r), []).append((int(c), v))
        acc: dict = {}
        for r, k, v in zip(self._r, self._c, self._v):
            for c, w in by_row.get(int(k), ()):
                key = (int(r), c)
                acc[key] = acc.get(key, 0) + _plain(v) * _plain(w)
        return SparseMatrix(self.rows, other.cols, acc, ring)

    def _int64_product_safe(self, other) -> bool:
        if self.ring.kind == "Q" or self._v.dtype == object or other._v.dtype == object:
            return False
        if not self.nnz or not other.nnz:
            return True
        bound = int(np.abs(self._v).max()) * int(np.abs(other._v).max()) * max(self.cols, 1)
        return bound < _SAFE

    def select_rows(self, rows) -> "SparseMatrix":
        rows = list(rows)
        where = {r: k for k, r in enumerate(rows)}
        keep = np.array([int(r) in where for r in self._r], dtype=bool)
        nr = np.array([where[int(r)] for r in self._r[keep]], dtype=np.int64)
        return SparseMatrix.from_triplets(len(rows), self.cols, nr, self._c[keep], self._v[keep], self.ring)

    def select_cols(self, cols) -> "SparseMatrix":
        return self.transpose().select_rows(cols).transpose()

    def change_ring(self, ring: CoeffRing) -> "SparseMatrix":
        v = np.array([ring.coerce(_plain(x)) for x in self._v], dtype=object)
        return SparseMatrix.from_triplets(self.rows, self.cols, self._r, self._c, v, ring)

    def integer_scaled(self) -> "SparseMatrix":
        """Clear denominators row by row; the result has the same rank."""
        if self.ring.kind != "Q":
            return self
        lcm = {}
        for r, v in zip(self._r, self._v):
            d = Fraction(v).denominator
            lcm[int(r)] = np.lcm(lcm.get(int(r), 1), d)
        v = np.array([int(Fraction(x) * int(lcm[int(r)])) for r, x in zip(self._r, self._v)], dtype=object)
        return SparseMatrix.from_triplets(self.rows, self.cols, self._r, self._c, v, ZZ)

    def content_hash(self) -> str:
        h = hashlib.sha256()
        h.update(f"{self.rows}x{self.cols}:{self.ring.label}:{self.ring.a}".encode())
        h.update(self._r.astype("<i8").tobytes())
        h.update(self._c.astype("<i8").tobytes())
        if self._v.dtype == object:
            h.update(";".join(map(str, self._v)).encode())
        else:
            h.update(self._v.astype("<i8").tobytes())
        return h.hexdigest()


def _plain(x):
    if isinstance(x, np.integer):
        return int(x)
    return x


def hstack(blocks: list[SparseMatrix]) -> SparseMatrix:
    rows = blocks[0].rows
    r, c, v, off = [], [], [], 0
    for b in blocks:
        if b.rows != rows:
            raise ValueError("row counts differ")
        r.append(b._r)
        c.append(b._c + off)
        v.append(b._v.astype(object))
        off += b.cols
    return SparseMatrix.from_triplets(rows, off, np.concatenate(r), np.concatenate(c), np.concatenate(v), blocks[0].ring)


def block_matrix(grid: list[list[SparseMatrix | None]], row_sizes, col_sizes, ring) -> SparseMatrix:
    """Assemble a block matrix; ``None`` blocks are zero."""
    r, c, v = [], [], []
    roff = 0
    for i, row in enumerate(grid):
        coff = 0
        for j, blk in enumerate(row):
            if blk is not None and blk.nnz:
                r.append(blk._r + roff)
                c.append(blk._c + coff)
                v.append(blk._v.astype(object))
            coff += col_sizes[j]
        roff += row_sizes[i]
    if not r:
        return SparseMatrix.zeros(sum(row_sizes), sum(col_sizes), ring)
    return SparseMatrix.from_triplets(
        sum(row_sizes), sum(col_sizes), np.concatenate(r), np.concatenate(c), np.concatenate(v), ring
    )
