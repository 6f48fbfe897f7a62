"""Bigraded chain complexes with labelled bases and sparse differentials."""

from __future__ import annotations

from dataclasses import dataclass, field
import csv
import io
import json
from typing import Callable, Iterable, Sequence

import numpy as np

from .exactlin import (
    CoeffRing,
    DifferentialError,
    HomologySummary,
    SparseMatrix,
    block_matrix,
    rank_over_field,
    smith_normal_form,
)
from .exactlin.smith import _divisibility_chain

ALL = "ALL"


class BasisIndexedComplex:
    """Free modules indexed by (degree, weight) with differentials of bidegree (-1, 0).

    ``blocks[(q, w)]`` is the ordered basis (any sequence of labels) and
    ``differentials[(q, w)]`` is the matrix from block ``(q, w)`` to
    ``(q - 1, w)``.  For a truncated complex ``top_degree`` is the highest
    degree that was built; homology there lacks incoming boundaries and is
    flagged.  ``None`` means the complex is complete.
    """

    def __init__(self, ring: CoeffRing, name: str = "", params: dict | None = None,
                 top_degree: int | None = None):
        self.ring = ring
        self.name = name
        self.params = dict(params or {})
        self.blocks: dict[tuple, Sequence] = {}
        self.differentials: dict[tuple, SparseMatrix] = {}
        self.top_degree = top_degree

    def add_block(self, q: int, w, basis: Sequence) -> None:
        self.blocks[(q, w)] = basis

    def set_differential(self, q: int, w, matrix: SparseMatrix) -> None:
        src = self.dim(q, w)
        tgt = self.dim(q - 1, w)
        if matrix.shape != (tgt, src):
            raise ValueError(f"differential at {(q, w)} has shape {matrix.shape}, expected {(tgt, src)}")
        self.differentials[(q, w)] = matrix

    def dim(self, q: int, w=ALL) -> int:
        return len(self.blocks.get((q, w), ()))

    def degrees(self) -> list[int]:
        return sorted({q for q, _ in self.blocks})

    def weights(self, q: int | None = None) -> list:
        ws = {w for (qq, w) in self.blocks if q is None or qq == q}
        return sorted(ws, key=_weight_key)

    def differential(self, q: int, w=ALL) -> SparseMatrix:
        if (q, w) in self.differentials:
            return self.differentials[(q, w)]
        return SparseMatrix.zeros(self.dim(q - 1, w), self.dim(q, w), self.ring)

    def total_dims(self) -> dict[int, int]:
        out: dict[int, int] = {}
        for (q, _), basis in self.blocks.items():
            out[q] = out.get(q, 0) + len(basis)
        return out

    def ungraded(self) -> "BasisIndexedComplex":
        """Forget the weight: one block per degree, weights stacked in order."""
        out = BasisIndexedComplex(self.ring, self.name + " (ungraded)", self.params, self.top_degree)
        for q in self.degrees():
            ws = self.weights(q)
            out.add_block(q, ALL, [(w, b) for w in ws for b in self.blocks[(q, w)]])
        for q in self.degrees():
            ws_src = self.weights(q)
            ws_tgt = self.weights(q - 1)
            if not ws_tgt:
                continue
            grid = [[self.differentials.get((q, w)) if v == w else None for w in ws_src] for v in ws_tgt]
            out.set_differential(
                q, ALL,
                block_matrix(grid, [self.dim(q - 1, v) for v in ws_tgt],
                             [self.dim(q, w) for w in ws_src], self.ring),
            )
        return out

    def __repr__(self):
        dims = ", ".join(f"{q}:{d}" for q, d in sorted(self.total_dims().items()))
        return f"<{self.name or 'complex'} over {self.ring} dims {{{dims}}}>"


def _weight_key(w):
    return (0, w) if isinstance(w, int) else (1, str(w))


# -- d squared ----------------------------------------------------------------


@dataclass
class DSquaredReport:
    passed: bool
    checked: int
    violations: list = field(default_factory=list)

    def __bool__(self):
        return self.passed


def check_d_squared(cx: BasisIndexedComplex) -> DSquaredReport:
    """Verify d_{q-1} d_q = 0 on every composable pair; name a witness otherwise."""
    violations = []
    checked = 0
    for (q, w), d in sorted(cx.differentials.items(), key=lambda kv: (kv[0][0], _weight_key(kv[0][1]))):
        below = cx.differentials.get((q - 1, w))
        if below is None:
            continue
        checked += 1
        prod = below @ d
        if not prod.is_zero():
            r, c, v = prod.triplets()
            label = cx.blocks[(q, w)][int(c[0])]
            violations.append({"degree": q, "weight": w, "basis_element": label,
                               "target_index": int(r[0]), "value": v[0]})
    return DSquaredReport(not violations, checked, violations)


def require_d_squared(cx: BasisIndexedComplex) -> None:
    report = check_d_squared(cx)
    if not report:
        v = report.violations[0]
        raise DifferentialError(
            f"{cx.name}: d∘d != 0 at degree {v['degree']}, weight {v['weight']}: "
            f"witness {v['basis_element']!r}",
            witness=v,
        )


# -- homology -------------------------------------------------------------------


@dataclass
class HomologyTable:
    """Homology per (degree, weight) block."""

    entries: dict = field(default_factory=dict)
    metadata: dict = field(default_factory=dict)
    q_max: int | None = None

    def __getitem__(self, key) -> HomologySummary:
        return self.entries[key]

    def degree(self, q: int) -> HomologySummary:
        """Direct sum over all weights in degree ``q``."""
        parts = [s for (qq, _), s in self.entries.items() if qq == q]
        if not parts:
            return HomologySummary(0, (), self.metadata.get("ring", "Z"))
        torsion = tuple(_divisibility_chain(sorted(d for s in parts for d in s.torsion)))
        torsion = tuple(d for d in torsion if d > 1)
        return HomologySummary(
            sum(s.free_rank for s in parts), torsion, parts[0].ring_label, all(s.exact for s in parts)
        )

    def degrees(self) -> list[int]:
        return sorted({q for q, _ in self.entries})

    def collapsed(self) -> "HomologyTable":
        """One entry per degree, summing over weights."""
        out = HomologyTable(metadata=dict(self.metadata), q_max=self.q_max)
        for q in self.degrees():
            out.entries[(q, ALL)] = self.degree(q)
        return out

    def records(self) -> list[dict]:
        out = []
        for (q, w), s in sorted(self.entries.items(), key=lambda kv: (kv[0][0], _weight_key(kv[0][1]))):
            out.append({"q": q, "w": w, "free_rank": s.free_rank, "torsion": list(s.torsion),
                        "exact": s.exact})
        return out

    def to_json(self) -> str:
        return json.dumps({"metadata": self.metadata, "q_max": self.q_max, "entries": self.records()},
                          indent=1, default=str)

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["q", "w", "free_rank", "torsion_rank", "torsion", "exact"])
        for rec in self.records():
            writer.writerow([rec["q"], rec["w"], rec["free_rank"], len(rec["torsion"]),
                             " ".join(map(str, rec["torsion"])), int(rec["exact"])])
        return buf.getvalue()

    def to_aligned(self) -> str:
        rows = [("q", "w", "homology")]
        for (q, w), s in sorted(self.entries.items(), key=lambda kv: (kv[0][0], _weight_key(kv[0][1]))):
            rows.append((str(q), str(w), str(s)))
        widths = [max(len(r[k]) for r in rows) for k in range(3)]
        return "\n".join("  ".join(cell.ljust(widths[k]) for k, cell in enumerate(r)).rstrip() for r in rows)


class _Invariants:
    """Rank (and over Z the Smith form) of each differential, computed once."""

    def __init__(self, cx: BasisIndexedComplex, cache=None):
        self.cx = cx
        self.cache = cache
        self._memo: dict = {}

    def get(self, q, w):
        key = (q, w)
        if key not in self._memo:
            d = self.cx.differentials.get(key)
            if d is None or d.is_zero():
                self._memo[key] = (0, [])
            else:
                self._memo[key] = self._compute(d)
        return self._memo[key]

    def _compute(self, d: SparseMatrix):
        ring = self.cx.ring
        cached = self.cache.get_invariants(d, ring) if self.cache else None
        if cached is not None:
            return cached
        if ring.kind == "Z":
            inv = smith_normal_form(d)
            result = (len(inv), inv)
        else:
            result = (rank_over_field(d, ring), [])
        if self.cache:
            self.cache.put_invariants(d, ring, result)
        return result


def homology_table(cx: BasisIndexedComplex, q_max: int | None = None, check: bool = True,
                   weights: Iterable | None = None, cache=None, q_min: int | None = None) -> HomologyTable:
    """Homology of every block with ``q <= q_max`` (and optionally chosen weights)."""
    if check:
        require_d_squared(cx)
    top = cx.top_degree
    if q_max is None:
        q_max = top if top is not None else (max(cx.degrees()) if cx.blocks else 0)
    wanted = None if weights is None else set(weights)
    inv = _Invariants(cx, cache)
    table = HomologyTable(metadata={"complex": cx.name, "ring": cx.ring.label, **cx.params}, q_max=q_max)
    for (q, w) in sorted(cx.blocks, key=lambda k: (k[0], _weight_key(k[1]))):
        if q > q_max or (q_min is not None and q < q_min):
            continue
        if wanted is not None and w not in wanted:
            continue
        dim = cx.dim(q, w)
        rank_out, _ = inv.get(q, w)
        rank_in, factors = inv.get(q + 1, w)
        exact = top is None or q < top
        torsion = tuple(d for d in factors if d > 1)
        table.entries[(q, w)] = HomologySummary(dim - rank_out - rank_in, torsion, cx.ring.label, exact)
    return table


def poincare_coefficients(table: HomologyTable, which: str = "free", p: int | None = None) -> dict:
    """Free ranks, or the number of torsion factors divisible by ``p``, per block."""
    out = {}
    for key, s in table.entries.items():
        if which == "free":
            out[key] = s.free_rank
        elif which == "torsion_dim_p":
            out[key] = s.torsion_count(p)
        else:
            raise ValueError(f"unknown coefficient kind {which!r}")
    return out


def by_degree(coeffs: dict) -> dict[int, int]:
    out: dict[int, int] = {}
    for (q, _), x in coeffs.items():
        out[q] = out.get(q, 0) + x
    return out


def euler_characteristic(dims: dict[int, int]) -> int:
    return sum((-1) ** (q % 2) * d for q, d in dims.items())


# -- totalisation -------------------------------------------------------------


def totalize(columns: list[BasisIndexedComplex], connecting: list[dict],
             name: str = "total") -> BasisIndexedComplex:
    """Total complex of ``C^0 <- C^1 <- ... <- C^k``.

    ``connecting[p - 1]`` maps ``C^p`` to ``C^{p-1}`` blockwise as a dict
    ``(q, w) -> SparseMatrix``.  Column p sits in total degree ``p + q`` and
    its internal differential is multiplied by ``(-1)**p``.
    """
    if len(connecting) != max(len(columns) - 1, 0):
        raise ValueError("need one connecting map per adjacent pair of columns")
    ring = columns[0].ring
    for p, f in enumerate(connecting, start=1):
        src, tgt = columns[p], columns[p - 1]
        for (q, w), m in f.items():
            if m.shape != (tgt.dim(q, w), src.dim(q, w)):
                raise ValueError(f"connecting map {p}->{p-1} at {(q, w)} has shape {m.shape}")
        _require_chain_map(src, tgt, f, p)
        if p >= 2:
            g = connecting[p - 2]
            for key, m in f.items():
                if key in g and not (g[key] @ m).is_zero():
                    raise DifferentialError(f"connecting maps {p}->{p-1}->{p-2} compose to nonzero at {key}")
    tops = [p + c.top_degree for p, c in enumerate(columns) if c.top_degree is not None]
    out = BasisIndexedComplex(ring, name, {}, None)
    keys = {}
    for p, col in enumerate(columns):
        for (q, w), basis in col.blocks.items():
            keys.setdefault((p + q, w), []).append((p, q))
    for (t, w), parts in keys.items():
        parts.sort()
        out.add_block(t, w, [(p, lab) for p, q in parts for lab in columns[p].blocks[(q, w)]])
    for (t, w), parts in keys.items():
        if (t - 1, w) not in keys:
            continue
        tgt_parts = sorted(keys[(t - 1, w)])
        grid = []
        for (pt, qt) in tgt_parts:
            row = []
            for (ps, qs) in parts:
                blk = None
                if ps == pt and qs == qt + 1:
                    d = columns[ps].differentials.get((qs, w))
                    if d is not None:
                        blk = d if ps % 2 == 0 else -d
                elif ps == pt + 1 and qs == qt:
                    blk = connecting[ps - 1].get((qs, w))
                row.append(blk)
            grid.append(row)
        out.set_differential(
            t, w,
            block_matrix(grid, [columns[p].dim(q, w) for p, q in tgt_parts],
                         [columns[p].dim(q, w) for p, q in parts], ring),
        )
    if tops:
        out.top_degree = min(top for top in tops)
    return out


def _require_chain_map(src, tgt, f, p):
    for (q, w), m in f.items():
        d_src = src.differentials.get((q, w))
        d_tgt = tgt.differentials.get((q, w))
        f_below = f.get((q - 1, w))
        left = d_tgt @ m if d_tgt is not None else None
        right = f_below @ d_src if (f_below is not None and d_src is not None) else None
        if left is None and right is None:
            continue
        if left is None:
            diff = right
        elif right is None:
            diff = left
        else:
            diff = left - right
        if not diff.is_zero():
            r, c, v = diff.triplets()
            raise DifferentialError(
                f"connecting map {p}->{p-1} is not a chain map at {(q, w)}: "
                f"witness {src.blocks[(q, w)][int(c[0])]!r}",
                witness=(q, w, int(c[0])),
            )


def complex_from_maps(ring: CoeffRing, dims: dict[int, int], maps: dict[int, SparseMatrix],
                      name: str = "", labels: Callable | None = None,
                      top_degree: int | None = None) -> BasisIndexedComplex:
    """Ungraded complex from degree dimensions and differentials ``q -> q-1``."""
    cx = BasisIndexedComplex(ring, name, top_degree=top_degree)
    for q, d in dims.items():
        cx.add_block(q, ALL, [labels(q, k) if labels else k for k in range(d)])
    for q, m in maps.items():
        cx.set_differential(q, ALL, m)
    return cx


def assemble_differential(ring: CoeffRing, target_index: dict, source_basis: Sequence,
                          faces: Callable[[object], Iterable[tuple[object, object]]]) -> SparseMatrix:
    """Matrix whose column k lists ``faces(source_basis[k])`` as (label, coeff) pairs."""
    r, c, v = [], [], []
    for k, b in enumerate(source_basis):
        for lab, coeff in faces(b):
            if coeff:
                r.append(target_index[lab])
                c.append(k)
                v.append(coeff)
    return SparseMatrix.from_triplets(
        len(target_index), len(source_basis), np.array(r, dtype=np.int64), np.array(c, dtype=np.int64),
        np.array(v, dtype=object), ring,
    )
