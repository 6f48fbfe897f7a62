"""Pure-Python sparse elimination kernels.

Both kernels share one strategy: repeatedly take the column with the fewest
live entries, pivot on its shortest row holding an admissible entry, clear
the column, then drop the pivot row and column.  Over F_p every nonzero
entry is admissible; over Z only entries of absolute value one are, which
keeps the row operations unimodular.
"""

from __future__ import annotations

import heapq


def _eliminate(nrows, ncols, r, c, v, p):
    rows = [dict() for _ in range(nrows)]
    cols = [set() for _ in range(ncols)]
    for i, j, x in zip(r, c, v):
        x = int(x)
        if x:
            rows[i][j] = x
            cols[j].add(i)

    if p:
        def admissible(x):
            return x % p != 0
    else:
        def admissible(x):
            return x == 1 or x == -1

    heap = [(len(s), j) for j, s in enumerate(cols) if s]
    heapq.heapify(heap)
    done = [False] * ncols
    pivots = 0
    while heap:
        count, col = heapq.heappop(heap)
        if done[col] or count != len(cols[col]):
            continue
        done[col] = True
        best, best_len = -1, 0
        for i in cols[col]:
            if admissible(rows[i][col]) and (best < 0 or len(rows[i]) < best_len):
                best, best_len = i, len(rows[i])
        if best < 0:
            continue
        prow = rows[best]
        pv = prow[col]
        inv = pow(pv, -1, p) if p else pv
        for i in list(cols[col]):
            if i == best:
                continue
            row = rows[i]
            factor = row[col] * inv
            if p:
                factor %= p
            for j, x in prow.items():
                y = row.get(j, 0) - factor * x
                if p:
                    y %= p
                if y:
                    if j not in row:
                        cols[j].add(i)
                        if not done[j]:
                            heapq.heappush(heap, (len(cols[j]), j))
                    row[j] = y
                elif j in row:
                    del row[j]
                    cols[j].discard(i)
                    if not done[j]:
                        heapq.heappush(heap, (len(cols[j]), j))
        for j in prow:
            cols[j].discard(best)
            if not done[j]:
                heapq.heappush(heap, (len(cols[j]), j))
        rows[best] = {}
        pivots += 1
    return pivots, rows


def rank_mod_p(nrows, ncols, r, c, v, p):
    """Rank of the matrix over F_p; ``v`` must already be reduced mod p."""
    pivots, _ = _eliminate(nrows, ncols, r, c, v, p)
    return pivots


def unit_reduce(nrows, ncols, r, c, v):
    """Eliminate unit pivots over Z.

    Returns ``(count, rr, rc, rv)``: the number of unit pivots taken and the
    residual matrix as triplets (Python ints).  The input is equivalent over
    Z to the identity of that size plus the residual on disjoint indices.
    """
    pivots, rows = _eliminate(nrows, ncols, r, c, v, 0)
    rr, rc, rv = [], [], []
    for i, row in enumerate(rows):
        for j in sorted(row):
            rr.append(i)
            rc.append(j)
            rv.append(row[j])
    return pivots, rr, rc, rv
