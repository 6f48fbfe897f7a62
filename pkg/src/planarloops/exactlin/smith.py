"""Smith normal form, field ranks and homology of a two-map segment."""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd
import time

import numpy as np

from .elim import rank_mod_p, unit_reduce
from .matrix import SparseMatrix
from .rings import CoeffRing, ZZ, RingError


class DifferentialError(RuntimeError):
    """A composite of consecutive differentials is nonzero."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


# statistics of the last few eliminations, read by the benchmark and the CLI
STATS: list[dict] = []


def smith_normal_form(m: SparseMatrix, backend=None) -> list[int]:
    """Invariant factors d_1 | d_2 | ... of an integer matrix (nonzero ones)."""
    if m.ring.kind != "Z":
        raise RingError("Smith normal form needs an integer matrix")
    t0 = time.perf_counter()
    r, c, v = m.triplets()
    nrows, ncols = m.rows, m.cols
    factors: list[int] = []
    scale = 1
    rounds = 0
    while len(r):
        rounds += 1
        units, r, c, v = unit_reduce(nrows, ncols, r, c, v, backend=backend)
        factors.extend([scale] * units)
        if not len(r):
            break
        g = 0
        for x in v:
            g = gcd(g, int(x))
        if g > 1:
            # every remaining invariant factor is a multiple of g
            v = np.array([int(x) // g for x in v], dtype=object)
            if all(-(1 << 62) < x < (1 << 62) for x in v):
                v = v.astype(np.int64)
            scale *= g
            continue
        if units:
            continue
        factors.extend(scale * d for d in _sparse_smith_general(r, c, v))
        break
    STATS.append(
        {"shape": m.shape, "nnz": m.nnz, "rank": len(factors), "rounds": rounds,
         "seconds": time.perf_counter() - t0}
    )
    del STATS[:-50]
    return _divisibility_chain(factors)


def _divisibility_chain(diag: list[int]) -> list[int]:
    """Turn any diagonal into the equivalent chain d_1 | d_2 | ...

    For each prime the multiset of exponents is preserved, so sorting the
    exponents per prime and reassembling gives the invariant factors.
    """
    diag = [abs(int(x)) for x in diag if x]
    if all(diag[k] % diag[k - 1] == 0 for k in range(1, len(diag))):
        return diag
    from sympy import factorint

    per_prime: dict[int, list[int]] = {}
    for k, x in enumerate(diag):
        for q, e in factorint(x).items():
            per_prime.setdefault(q, []).append(e)
    size = len(diag)
    out = [1] * size
    for q, exps in per_prime.items():
        exps = sorted(exps)
        for k, e in enumerate(exps):
            out[size - len(exps) + k] *= q**e
    return out


def _sparse_smith_general(r, c, v) -> list[int]:
    """Diagonalise a residual integer matrix with least-magnitude pivots."""
    rows: dict[int, dict[int, int]] = {}
    for i, j, x in zip(r, c, v):
        x = int(x)
        if x:
            rows.setdefault(int(i), {})[int(j)] = x
    cols: dict[int, set[int]] = {}
    for i, row in rows.items():
        for j in row:
            cols.setdefault(j, set()).add(i)
    diag = []
    while True:
        for i in [i for i, row in rows.items() if not row]:
            del rows[i]
        if not rows:
            break
        # least magnitude pivot, ties to the sparsest row
        pi, pj, pv = None, None, None
        for i, row in rows.items():
            for j, x in row.items():
                if pv is None or (abs(x), len(row)) < (abs(pv), len(rows[pi])):
                    pi, pj, pv = i, j, x
        while True:
            clean = True
            # clear the column with row operations
            for i in list(cols.get(pj, ())):
                if i == pi:
                    continue
                q = rows[i][pj] // pv
                _row_axpy(rows, cols, i, pi, -q)
                if pj in rows.get(i, {}):
                    clean = False
            # clear the row with column operations
            for j in list(rows[pi]):
                if j == pj:
                    continue
                q = rows[pi][j] // pv
                _col_axpy(rows, cols, j, pj, -q)
                if j in rows[pi]:
                    clean = False
            if clean:
                break
            # a smaller remainder appeared: move the pivot there
            best = (abs(pv), pi, pj)
            for i in cols[pj]:
                best = min(best, (abs(rows[i][pj]), i, pj))
            for j in rows[pi]:
                best = min(best, (abs(rows[pi][j]), pi, j))
            _, pi, pj = best
            pv = rows[pi][pj]
        diag.append(abs(pv))
        del rows[pi]
        cols[pj].discard(pi)
        if not cols[pj]:
            del cols[pj]
    return diag


def _row_axpy(rows, cols, target, source, q):
    if not q:
        return
    row = rows[target]
    for j, x in rows[source].items():
        y = row.get(j, 0) + q * x
        if y:
            if j not in row:
                cols.setdefault(j, set()).add(target)
            row[j] = y
        elif j in row:
            del row[j]
            cols[j].discard(target)
    if not row:
        del rows[target]


def _col_axpy(rows, cols, target, source, q):
    if not q:
        return
    for i in list(cols.get(source, ())):
        row = rows[i]
        y = row.get(target, 0) + q * row[source]
        if y:
            if target not in row:
                cols.setdefault(target, set()).add(i)
            row[target] = y
        elif target in row:
            del row[target]
            cols[target].discard(i)
    if target in cols and not cols[target]:
        del cols[target]


def rank_over_field(m: SparseMatrix, field: CoeffRing | None = None, backend=None) -> int:
    """Exact rank over Q or F_p (defaults to the matrix's own ring)."""
    field = field or m.ring
    if field.kind == "Fp":
        mm = m if m.ring == field else m.change_ring(field)
        r, c, v = mm.triplets()
        return rank_mod_p(m.rows, m.cols, r, c, v, field.p, backend=backend)
    # rank over Q equals the number of integer invariant factors
    mm = m.integer_scaled() if m.ring.kind == "Q" else m
    if mm.ring.kind != "Z":
        mm = mm.change_ring(ZZ)
    return len(smith_normal_form(mm, backend=backend))


# -- homology ---------------------------------------------------------------


@dataclass(frozen=True)
class HomologySummary:
    """One homology group: free rank (or dimension) and torsion chain."""

    free_rank: int
    torsion: tuple[int, ...] = ()
    ring_label: str = "Z"
    exact: bool = True

    @property
    def is_zero(self) -> bool:
        return self.free_rank == 0 and not self.torsion

    def torsion_count(self, p: int) -> int:
        return sum(1 for d in self.torsion if d % p == 0)

    def __str__(self):
        parts = []
        if self.free_rank:
            parts.append(self.ring_label + (f"^{self.free_rank}" if self.free_rank > 1 else ""))
        counts: dict[int, int] = {}
        for d in self.torsion:
            counts[d] = counts.get(d, 0) + 1
        for d, k in sorted(counts.items()):
            parts.append(f"Z/{d}" + (f"^{k}" if k > 1 else ""))
        text = " + ".join(parts) or "0"
        return text if self.exact else text + " (kernel-only)"

    def to_record(self) -> dict:
        return {"free_rank": self.free_rank, "torsion": list(self.torsion), "exact": self.exact}


def check_composite(d_out: SparseMatrix, d_in: SparseMatrix, where="") -> None:
    if d_out.cols != d_in.rows:
        raise DifferentialError(f"shape mismatch at {where}: {d_out.shape} after {d_in.shape}")
    prod = d_out @ d_in
    if not prod.is_zero():
        r, c, v = prod.triplets()
        raise DifferentialError(
            f"d∘d != 0 at {where}: entry ({int(r[0])},{int(c[0])}) = {v[0]}",
            witness=(int(c[0]), int(r[0])),
        )


def homology_at(d_in: SparseMatrix | None, d_out: SparseMatrix | None, ring: CoeffRing,
                dim: int | None = None, where="", exact: bool = True) -> HomologySummary:
    """Homology at the middle term of ``C_{q+1} -> C_q -> C_{q-1}``.

    Over Z the torsion is read off the Smith form of the incoming map: the
    image of ``d_in`` lies in the kernel of ``d_out``, which is a saturated
    sublattice, so both quotients have the same torsion.
    """
    if dim is None:
        dim = d_in.rows if d_in is not None else d_out.cols
    if d_in is not None and d_in.rows != dim:
        raise ValueError("incoming map has the wrong target")
    if d_out is not None and d_out.cols != dim:
        raise ValueError("outgoing map has the wrong source")
    if d_in is not None and d_out is not None:
        check_composite(d_out, d_in, where)
    rank_out = rank_over_field(_over(d_out, ring), _field(ring)) if d_out is not None else 0
    if ring.kind == "Z":
        inv = smith_normal_form(_over(d_in, ring)) if d_in is not None else []
        torsion = tuple(d for d in inv if d > 1)
        return HomologySummary(dim - rank_out - len(inv), torsion, "Z", exact)
    rank_in = rank_over_field(_over(d_in, ring), ring) if d_in is not None else 0
    return HomologySummary(dim - rank_out - rank_in, (), ring.label, exact)


def _field(ring: CoeffRing) -> CoeffRing:
    return CoeffRing("Q") if ring.kind == "Z" else ring


def _over(m: SparseMatrix, ring: CoeffRing) -> SparseMatrix:
    if m.ring.kind == ring.kind and m.ring.p == ring.p:
        return m
    return m.change_ring(ring.with_parameter(0))


# -- small dense routines with transforms -----------------------------------


def smith_with_transforms(a: list[list[int]]):
    """Return ``(diag, U, V)`` with ``U a V`` diagonal (entries ``diag``).

    Plain dense elimination over Python ints for the small matrices that
    need kernels or preimages; ``U`` and ``V`` are unimodular.
    """
    m = len(a)
    n = len(a[0]) if m else 0
    A = [list(map(int, row)) for row in a]
    U = [[int(i == j) for j in range(m)] for i in range(m)]
    V = [[int(i == j) for j in range(n)] for i in range(n)]

    def swap_rows(i, k):
        A[i], A[k] = A[k], A[i]
        U[i], U[k] = U[k], U[i]

    def swap_cols(j, k):
        for row in A:
            row[j], row[k] = row[k], row[j]
        for row in V:
            row[j], row[k] = row[k], row[j]

    def add_row(target, source, q):
        A[target] = [x + q * y for x, y in zip(A[target], A[source])]
        U[target] = [x + q * y for x, y in zip(U[target], U[source])]

    def add_col(target, source, q):
        for row in A:
            row[target] += q * row[source]
        for row in V:
            row[target] += q * row[source]

    t = 0
    while t < min(m, n):
        nz = [(abs(A[i][j]), i, j) for i in range(t, m) for j in range(t, n) if A[i][j]]
        if not nz:
            break
        _, i, j = min(nz)
        swap_rows(t, i)
        swap_cols(t, j)
        while True:
            done = True
            for i in range(t + 1, m):
                if A[i][t]:
                    add_row(i, t, -(A[i][t] // A[t][t]))
                    if A[i][t]:
                        done = False
            for j in range(t + 1, n):
                if A[t][j]:
                    add_col(j, t, -(A[t][j] // A[t][t]))
                    if A[t][j]:
                        done = False
            if done:
                break
            cand = [(abs(A[i][t]), i, t) for i in range(t, m) if A[i][t]]
            cand += [(abs(A[t][j]), t, j) for j in range(t, n) if A[t][j]]
            _, i, j = min(cand)
            swap_rows(t, i)
            swap_cols(t, j)
        if A[t][t] < 0:
            A[t] = [-x for x in A[t]]
            U[t] = [-x for x in U[t]]
        t += 1
    diag = [A[k][k] for k in range(t)]
    return diag, U, V


def integer_kernel(a: list[list[int]], ncols: int | None = None) -> list[list[int]]:
    """A Z-basis of ``{x : a x = 0}`` as a list of column vectors."""
    n = len(a[0]) if a else (ncols or 0)
    if not a:
        return [[int(i == j) for i in range(n)] for j in range(n)]
    diag, _, V = smith_with_transforms(a)
    return [[V[i][j] for i in range(n)] for j in range(len(diag), n)]


def solve_integer(a: list[list[int]], b: list[int]) -> list[int] | None:
    """An integer solution of ``a x = b`` or None."""
    m = len(a)
    n = len(a[0]) if m else 0
    diag, U, V = smith_with_transforms(a)
    ub = [sum(U[i][k] * b[k] for k in range(m)) for i in range(m)]
    y = [0] * n
    for i in range(m):
        if i < len(diag):
            if ub[i] % diag[i]:
                return None
            y[i] = ub[i] // diag[i]
        elif ub[i]:
            return None
    return [sum(V[i][j] * y[j] for j in range(n)) for i in range(n)]
