# distutils: language = c++
# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled sparse elimination kernels.

Same contract and pivot order as ``_pyelim``.  Rows are sorted vectors of
(column, value) pairs; column membership lists are kept lazily and checked
against the rows.  Integer values live in int64 and any operation that
could leave the safe range raises OverflowError so the caller can redo the
matrix in Python integers.
"""

import numpy as np
cimport numpy as cnp
from libcpp.vector cimport vector
from libcpp.queue cimport priority_queue
from libcpp.pair cimport pair
from libc.stdint cimport int64_t

cnp.import_array()

cdef struct Entry:
    int col
    int64_t val

cdef int64_t LIMIT = (<int64_t>1) << 61


cdef inline int find_entry(vector[Entry]& row, int col) nogil:
    cdef int lo = 0, hi = <int>row.size() - 1, mid
    while lo <= hi:
        mid = (lo + hi) >> 1
        if row[mid].col == col:
            return mid
        if row[mid].col < col:
            lo = mid + 1
        else:
            hi = mid - 1
    return -1


cdef inline int64_t mod(int64_t x, int64_t p) nogil:
    x = x % p
    if x < 0:
        x += p
    return x


cdef int64_t inv_mod(int64_t x, int64_t p):
    return pow(int(x), -1, int(p))


cdef class _Eliminator:
    cdef vector[vector[Entry]] rows
    cdef vector[vector[int]] cols
    cdef vector[int] col_count
    cdef vector[char] done
    cdef vector[int] stamp
    cdef int64_t p
    cdef int nrows, ncols

    def __init__(self, int nrows, int ncols, cnp.int64_t[:] r, cnp.int64_t[:] c, cnp.int64_t[:] v, int64_t p):
        cdef Py_ssize_t k
        cdef Entry e
        self.nrows, self.ncols, self.p = nrows, ncols, p
        self.rows.resize(nrows)
        self.cols.resize(ncols)
        self.col_count.resize(ncols, 0)
        self.done.resize(ncols, 0)
        self.stamp.resize(nrows, -1)
        # input arrives sorted by (row, col) with no duplicates
        for k in range(r.shape[0]):
            if v[k] == 0:
                continue
            e.col = <int>c[k]
            e.val = v[k]
            self.rows[r[k]].push_back(e)
            self.cols[c[k]].push_back(<int>r[k])
            self.col_count[c[k]] += 1

    cdef inline bint admissible(self, int64_t x):
        if self.p:
            return x != 0
        return x == 1 or x == -1

    cdef int run(self) except -1:
        cdef priority_queue[pair[int, int]] heap  # max-heap on (-count, -col)
        cdef int j, col, best, i, k, pos, step = 0, pivots = 0
        cdef size_t best_len
        cdef int64_t pv, factor, x, y, inv
        cdef vector[Entry] merged
        cdef vector[Entry]* prow
        cdef vector[Entry]* row
        cdef Entry e
        cdef size_t a, b
        cdef vector[int] live
        cdef bint fresh
        for j in range(self.ncols):
            if self.col_count[j]:
                heap.push(pair[int, int](-self.col_count[j], -j))
        while not heap.empty():
            col = -heap.top().second
            k = -heap.top().first
            heap.pop()
            if self.done[col] or k != self.col_count[col]:
                continue
            self.done[col] = 1
            # compact the membership list and pick the shortest admissible row
            step += 1
            live.clear()
            best = -1
            best_len = 0
            for i in self.cols[col]:
                if self.stamp[i] == step:
                    continue
                pos = find_entry(self.rows[i], col)
                if pos < 0:
                    continue
                self.stamp[i] = step
                live.push_back(i)
                if self.admissible(self.rows[i][pos].val) and (best < 0 or self.rows[i].size() < best_len):
                    best = i
                    best_len = self.rows[i].size()
            self.cols[col] = live
            if best < 0:
                continue
            prow = &self.rows[best]
            pv = prow[0][find_entry(prow[0], col)].val
            inv = inv_mod(pv, self.p) if self.p else pv
            for i in live:
                if i == best:
                    continue
                row = &self.rows[i]
                x = row[0][find_entry(row[0], col)].val
                if self.p:
                    factor = mod(x * inv, self.p)
                else:
                    factor = x * inv
                merged.clear()
                a = 0
                b = 0
                while a < row.size() or b < prow.size():
                    if b >= prow.size() or (a < row.size() and row[0][a].col < prow[0][b].col):
                        merged.push_back(row[0][a])
                        a += 1
                        continue
                    if a >= row.size() or prow[0][b].col < row[0][a].col:
                        y = 0
                        e.col = prow[0][b].col
                        fresh = True
                    else:
                        y = row[0][a].val
                        e.col = row[0][a].col
                        fresh = False
                        a += 1
                    x = prow[0][b].val
                    b += 1
                    if self.p:
                        y = mod(y - mod(factor * x, self.p), self.p)
                    else:
                        if (factor > 0 and (x > LIMIT // factor or x < -LIMIT // factor)) or \
                           (factor < 0 and (x > LIMIT // -factor or x < -LIMIT // -factor)):
                            raise OverflowError("entry growth beyond int64")
                        y = y - factor * x
                        if y > LIMIT or y < -LIMIT:
                            raise OverflowError("entry growth beyond int64")
                    if y != 0:
                        e.val = y
                        merged.push_back(e)
                        if fresh:
                            self.cols[e.col].push_back(i)
                            self.col_count[e.col] += 1
                            if not self.done[e.col]:
                                heap.push(pair[int, int](-self.col_count[e.col], -e.col))
                    elif not fresh:
                        self.col_count[e.col] -= 1
                        if not self.done[e.col]:
                            heap.push(pair[int, int](-self.col_count[e.col], -e.col))
                row.swap(merged)
            for e in prow[0]:
                self.col_count[e.col] -= 1
                if not self.done[e.col]:
                    heap.push(pair[int, int](-self.col_count[e.col], -e.col))
            prow.clear()
            pivots += 1
        return pivots

    def residual(self):
        cdef Py_ssize_t total = 0, k = 0
        cdef int i
        cdef Entry e
        for i in range(self.nrows):
            total += self.rows[i].size()
        rr = np.empty(total, dtype=np.int64)
        rc = np.empty(total, dtype=np.int64)
        rv = np.empty(total, dtype=np.int64)
        cdef cnp.int64_t[:] vr = rr, vc = rc, vv = rv
        for i in range(self.nrows):
            for e in self.rows[i]:
                vr[k] = i
                vc[k] = e.col
                vv[k] = e.val
                k += 1
        return rr, rc, rv


def _prep(r, c, v):
    return (np.ascontiguousarray(r, dtype=np.int64), np.ascontiguousarray(c, dtype=np.int64),
            np.ascontiguousarray(v, dtype=np.int64))


def rank_mod_p(nrows, ncols, r, c, v, p):
    """Rank of the matrix over F_p; ``v`` must already be reduced mod p."""
    r, c, v = _prep(r, c, v)
    return _Eliminator(nrows, ncols, r, c, v, p).run()


def unit_reduce(nrows, ncols, r, c, v):
    """Eliminate unit pivots over Z; see ``_pyelim.unit_reduce``."""
    r, c, v = _prep(r, c, v)
    elim = _Eliminator(nrows, ncols, r, c, v, 0)
    pivots = elim.run()
    rr, rc, rv = elim.residual()
    return pivots, rr, rc, rv
