"""Temperley-Lieb (m, n)-diagrams.

A diagram is a planar perfect matching between ``m`` nodes on a left bar and
``n`` nodes on a right bar, both numbered 1.. from bottom to top.  Internally
the nodes are placed on a circle: left nodes 1..m occupy circular positions
0..m-1 and right nodes n..1 occupy positions m..m+n-1.  In these coordinates
a matching is planar exactly when it is a balanced bracket word, and the
matching array itself is the canonical form.
"""

from __future__ import annotations

import functools
import json
import math
from typing import Iterable, Iterator, NamedTuple, Sequence

LEFT, RIGHT = "L", "R"


class DiagramError(ValueError):
    """Raised for malformed or incompatible diagrams."""


def _is_noncrossing(match: Sequence[int]) -> bool:
    stack = []
    for p, q in enumerate(match):
        if p < q:
            stack.append(q)
        elif not stack or stack.pop() != p:
            return False
    return not stack


class TLDiagram:
    """An immutable Temperley-Lieb (left_count, right_count)-diagram."""

    __slots__ = ("left_count", "right_count", "_match", "_hash")

    def __init__(self, left_count: int, right_count: int, arcs: Iterable):
        m, n = int(left_count), int(right_count)
        if m < 0 or n < 0:
            raise DiagramError("node counts must be non-negative")
        if (m + n) % 2:
            raise DiagramError(f"m + n must be even, got ({m}, {n})")
        match = [-1] * (m + n)
        for arc in arcs:
            (s1, i1), (s2, i2) = _parse_arc(arc)
            p, q = _position(m, n, s1, i1), _position(m, n, s2, i2)
            if p == q or match[p] != -1 or match[q] != -1:
                raise DiagramError(f"node used twice in arc {arc!r}")
            match[p], match[q] = q, p
        if -1 in match:
            raise DiagramError("not every node lies on an arc")
        if not _is_noncrossing(match):
            raise DiagramError("arcs cross")
        self._init(m, n, tuple(match))

    def _init(self, m, n, match):
        self.left_count = m
        self.right_count = n
        self._match = match
        self._hash = hash((m, n, match))

    @classmethod
    def from_matching(cls, m: int, n: int, match: Sequence[int], check: bool = True) -> "TLDiagram":
        """Build from an involution on circular positions."""
        match = tuple(match)
        if check:
            if len(match) != m + n or any(
                not 0 <= q < m + n or q == p or match[q] != p for p, q in enumerate(match)
            ):
                raise DiagramError("not a fixed-point-free involution")
            if not _is_noncrossing(match):
                raise DiagramError("arcs cross")
        self = cls.__new__(cls)
        self._init(m, n, match)
        return self

    # -- node bookkeeping -------------------------------------------------

    def node(self, pos: int) -> tuple[str, int]:
        m, n = self.left_count, self.right_count
        return (LEFT, pos + 1) if pos < m else (RIGHT, m + n - pos)

    def position(self, side: str, index: int) -> int:
        return _position(self.left_count, self.right_count, side, index)

    def partner(self, side: str, index: int) -> tuple[str, int]:
        return self.node(self._match[self.position(side, index)])

    @property
    def matching(self) -> tuple[int, ...]:
        return self._match

    @property
    def arcs(self) -> tuple[tuple[tuple[str, int], tuple[str, int]], ...]:
        """Arcs sorted by least circular position (the canonical form)."""
        return tuple(
            (self.node(p), self.node(q)) for p, q in enumerate(self._match) if p < q
        )

    def canonical_key(self) -> tuple[tuple[int, int], ...]:
        return tuple((p, q) for p, q in enumerate(self._match) if p < q)

    def left_cups(self) -> list[tuple[int, int]]:
        m = self.left_count
        return [(p + 1, q + 1) for p, q in enumerate(self._match) if p < q < m]

    def right_cups(self) -> list[tuple[int, int]]:
        m, n = self.left_count, self.right_count
        out = []
        for p, q in enumerate(self._match):
            if m <= p < q:
                out.append((m + n - q, m + n - p))
        return sorted(out)

    def through_strands(self) -> int:
        m = self.left_count
        return sum(1 for p in range(m) if self._match[p] >= m)

    def has_right_cup(self) -> bool:
        m = self.left_count
        return any(self._match[p] >= m for p in range(m, m + self.right_count))

    # -- value semantics --------------------------------------------------

    def __eq__(self, other):
        if not isinstance(other, TLDiagram):
            return NotImplemented
        return (
            self.left_count == other.left_count
            and self.right_count == other.right_count
            and self._match == other._match
        )

    def __hash__(self):
        return self._hash

    def __lt__(self, other: "TLDiagram"):
        return self.sort_key() < other.sort_key()

    def sort_key(self):
        return (self.left_count, self.right_count, self.canonical_key())

    def __repr__(self):
        return f"TLDiagram({self.left_count}, {self.right_count}, {self})"

    def __str__(self):
        parts = []
        for (s1, i1), (s2, i2) in self.arcs:
            if s1 == s2:
                parts.append(f"{s1}{min(i1, i2)}{s1}{max(i1, i2)}")
            else:
                parts.append(f"{s1}{i1}-{s2}{i2}")
        return "{" + ", ".join(parts) + "}"

    # -- serialization ----------------------------------------------------

    def to_record(self) -> dict:
        return {
            "left": self.left_count,
            "right": self.right_count,
            "arcs": [[s1, i1, s2, i2] for (s1, i1), (s2, i2) in self.arcs],
        }

    @classmethod
    def from_record(cls, record: dict) -> "TLDiagram":
        try:
            m, n, arcs = record["left"], record["right"], record["arcs"]
        except (KeyError, TypeError) as exc:
            raise DiagramError(f"bad diagram record: {exc}") from None
        return cls(m, n, arcs)

    def to_json(self) -> str:
        return json.dumps(self.to_record())

    @classmethod
    def from_json(cls, text: str) -> "TLDiagram":
        return cls.from_record(json.loads(text))


def _parse_arc(arc):
    if len(arc) == 4:
        return (arc[0], int(arc[1])), (arc[2], int(arc[3]))
    if len(arc) == 2:
        (s1, i1), (s2, i2) = arc
        return (s1, int(i1)), (s2, int(i2))
    raise DiagramError(f"cannot read arc {arc!r}")


def _position(m: int, n: int, side: str, index: int) -> int:
    side = str(side).upper()
    if side == LEFT and 1 <= index <= m:
        return index - 1
    if side == RIGHT and 1 <= index <= n:
        return m + n - index
    raise DiagramError(f"no node {side}{index} in a ({m},{n})-diagram")


def parse_diagram(m: int, n: int, text: str) -> TLDiagram:
    """Parse the compact notation used in docs, e.g. ``"L1L2, L3-R1, R2R3"``."""
    arcs = []
    for token in text.replace("{", "").replace("}", "").split(","):
        token = token.strip().replace("–", "-").replace("-", "")
        if not token:
            continue
        s1, rest = token[0], token[1:]
        k = 1
        while k < len(rest) and rest[k].isdigit():
            k += 1
        arcs.append((s1, int(rest[:k]), rest[k], int(rest[k + 1:])))
    return TLDiagram(m, n, arcs)


# -- enumeration ----------------------------------------------------------


def _matchings(size: int) -> Iterator[list[int]]:
    match = [-1] * size

    def place(start: int, stop: int):
        if start == stop:
            yield
            return
        for close in range(start + 1, stop, 2):
            match[start], match[close] = close, start
            for _ in place(start + 1, close):
                yield from place(close + 1, stop)

    for _ in place(0, size):
        yield list(match)


@functools.lru_cache(maxsize=None)
def enumerate_diagrams(m: int, n: int) -> tuple[TLDiagram, ...]:
    """All (m, n)-diagrams, sorted lexicographically by canonical form."""
    if m < 0 or n < 0:
        raise DiagramError("node counts must be non-negative")
    if (m + n) % 2:
        return ()
    found = [TLDiagram.from_matching(m, n, mt, check=False) for mt in _matchings(m + n)]
    found.sort(key=TLDiagram.canonical_key)
    return tuple(found)


@functools.lru_cache(maxsize=None)
def diagram_index(m: int, n: int) -> dict[TLDiagram, int]:
    return {d: k for k, d in enumerate(enumerate_diagrams(m, n))}


def catalan(k: int) -> int:
    return math.comb(2 * k, k) // (k + 1)


# -- composition ----------------------------------------------------------


class CompositionResult(NamedTuple):
    diagram: TLDiagram
    loops: int


class _UnionFind:
    def __init__(self, size: int):
        self.parent = list(range(size))

    def find(self, x: int) -> int:
        parent = self.parent
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(self, x: int, y: int) -> None:
        rx, ry = self.find(x), self.find(y)
        if rx != ry:
            self.parent[ry] = rx


def compose(first: TLDiagram, second: TLDiagram) -> CompositionResult:
    """Glue the right bar of ``first`` to the left bar of ``second``."""
    l, m = first.left_count, first.right_count
    if second.left_count != m:
        raise DiagramError(
            f"cannot compose TL({l},{m}) with TL({second.left_count},{second.right_count})"
        )
    n = second.right_count
    # union-find vertices: outer left 0..l-1, middle l..l+m-1, outer right l+m..l+m+n-1
    uf = _UnionFind(l + m + n)
    fm, sm = first._match, second._match

    def first_vertex(p):
        return p if p < l else l + (l + m - 1 - p)

    def second_vertex(p):
        return l + p if p < m else l + m + (m + n - 1 - p)

    for p, q in enumerate(fm):
        if p < q:
            uf.union(first_vertex(p), first_vertex(q))
    for p, q in enumerate(sm):
        if p < q:
            uf.union(second_vertex(p), second_vertex(q))

    outer = list(range(l)) + [l + m + n - 1 - j for j in range(n)]
    # outer[k] is the union-find vertex sitting at circular position k of the result
    by_root: dict[int, list[int]] = {}
    for pos, v in enumerate(outer):
        by_root.setdefault(uf.find(v), []).append(pos)
    match = [-1] * (l + n)
    for p, q in by_root.values():
        match[p], match[q] = q, p
    loop_roots = {uf.find(v) for v in range(l, l + m)} - set(by_root)
    return CompositionResult(
        TLDiagram.from_matching(l, n, match, check=False), len(loop_roots)
    )


def compose_many(diagrams: Sequence[TLDiagram]) -> CompositionResult:
    """Left-to-right composite of a chain of diagrams with total loop count."""
    if not diagrams:
        raise DiagramError("nothing to compose")
    current, loops = diagrams[0], 0
    for nxt in diagrams[1:]:
        current, k = compose(current, nxt)
        loops += k
    return CompositionResult(current, loops)


def juxtapose(top: TLDiagram, bottom: TLDiagram) -> TLDiagram:
    """Place ``top`` above ``bottom`` (tensor product of diagrams)."""
    lb, rb = bottom.left_count, bottom.right_count
    arcs = []
    for (s1, i1), (s2, i2) in bottom.arcs:
        arcs.append((s1, i1, s2, i2))
    for (s1, i1), (s2, i2) in top.arcs:
        arcs.append((s1, i1 + (lb if s1 == LEFT else rb), s2, i2 + (lb if s2 == LEFT else rb)))
    return TLDiagram(lb + top.left_count, rb + top.right_count, arcs)


# -- named diagrams -------------------------------------------------------


def identity(k: int) -> TLDiagram:
    return TLDiagram(k, k, [(LEFT, j, RIGHT, j) for j in range(1, k + 1)])


def empty() -> TLDiagram:
    return TLDiagram(0, 0, [])


def left_cup(k: int, size: int) -> TLDiagram:
    """L_k in TL(size, size-2): one left cup at (k, k+1), other strands straight."""
    if size < 2 or size % 2 or not 1 <= k <= size - 1:
        raise DiagramError(f"L_{k} undefined for {size} left nodes")
    arcs = [(LEFT, k, LEFT, k + 1)]
    for j in range(1, size - 1):
        arcs.append((LEFT, j if j < k else j + 2, RIGHT, j))
    return TLDiagram(size, size - 2, arcs)


def right_cup(k: int, size: int) -> TLDiagram:
    """R_k in TL(size-2, size), the mirror of L_k."""
    return reflect(left_cup(k, size), "left_right")


def left_max(size: int) -> TLDiagram:
    """L_max in TL(size, 0): cups (1,2), (3,4), ..."""
    if size < 0 or size % 2:
        raise DiagramError("L_max needs an even number of nodes")
    return TLDiagram(size, 0, [(LEFT, j, LEFT, j + 1) for j in range(1, size, 2)])


def right_max(size: int) -> TLDiagram:
    return reflect(left_max(size), "left_right")


def phi_left(size: int) -> TLDiagram:
    """The right-hand half of the single loop, as a diagram in TL(0, size)."""
    if size < 2 or size % 2:
        raise DiagramError("phi_left needs an even size >= 2")
    arcs = []
    if size % 4 == 0:
        starts = range(1, size, 4)
    else:
        arcs.append((RIGHT, 1, RIGHT, 2))
        starts = range(3, size, 4)
    for k in starts:
        arcs.append((RIGHT, k, RIGHT, k + 3))
        arcs.append((RIGHT, k + 1, RIGHT, k + 2))
    return TLDiagram(0, size, arcs)


def phi_right_prime(size: int) -> TLDiagram:
    """The diagram in TL(size, 2) closing phi_left into a single cup R_1."""
    if size < 2 or size % 2:
        raise DiagramError("phi_right_prime needs an even size >= 2")
    arcs = [(LEFT, size, RIGHT, 2), (LEFT, size - 1, RIGHT, 1)]
    top = size - 2
    while top >= 4:
        arcs.append((LEFT, top - 3, LEFT, top))
        arcs.append((LEFT, top - 2, LEFT, top - 1))
        top -= 4
    if top == 2:
        arcs.append((LEFT, 1, LEFT, 2))
    return TLDiagram(size, 2, arcs)


def phi_right(size: int) -> TLDiagram:
    return compose(phi_right_prime(size), left_cup(1, 2)).diagram


def cut_cup(target: TLDiagram, cup: tuple[int, int]) -> TLDiagram:
    """Open the outermost right cup ``cup`` of a TL(0, k) diagram into TL(2, k).

    Returns ``z'`` with ``R_1 . z' == target``: the lower end of the cup is
    joined to left node 1 and the upper end to left node 2.
    """
    if target.left_count:
        raise DiagramError("cut_cup expects a diagram with no left nodes")
    lo, hi = cup
    if (RIGHT, hi) != target.partner(RIGHT, lo):
        raise DiagramError(f"{cup} is not an arc of {target}")
    arcs = [(LEFT, 1, RIGHT, lo), (LEFT, 2, RIGHT, hi)]
    for (s1, i1), (s2, i2) in target.arcs:
        if {i1, i2} != {lo, hi}:
            arcs.append((s1, i1, s2, i2))
    return TLDiagram(2, target.right_count, arcs)


def dashed_free_cut(size: int, j: int) -> TLDiagram:
    """The diagram C^{free j} in TL(2, size): the j-th of the cups (1,2),(3,4),...

    of R_max is cut open to the two left nodes; the other cups stay right cups.
    """
    if size < 2 or size % 2 or not 1 <= j <= size // 2:
        raise DiagramError(f"cannot cut cup {j} of {size} nodes")
    return cut_cup(right_max(size), (2 * j - 1, 2 * j))


def named_diagram(kind: str, *params: int) -> TLDiagram:
    """Look up a named diagram by kind.

    ``L_k``/``R_k`` take ``(k, size)`` where size is the larger node count;
    ``L_max``, ``Phi_l``, ``Phi_r``, ``Phi_r_prime`` take ``(size,)`` and
    ``C_dashed_free`` takes ``(size, j)``.
    """
    table = {
        "L_k": left_cup,
        "R_k": right_cup,
        "L_max": left_max,
        "R_max": right_max,
        "Phi_l": phi_left,
        "Phi_r": phi_right,
        "Phi_r_prime": phi_right_prime,
        "C_dashed_free": dashed_free_cut,
        "id": identity,
    }
    try:
        builder = table[kind]
    except KeyError:
        raise DiagramError(f"unknown diagram kind {kind!r}") from None
    return builder(*params)


# -- involutions ----------------------------------------------------------


def reflect(d: TLDiagram, axis: str) -> TLDiagram:
    """Mirror a diagram left-to-right or top-to-bottom."""
    m, n = d.left_count, d.right_count
    if axis == "left_right":
        flip = {LEFT: RIGHT, RIGHT: LEFT}
        arcs = [(flip[s1], i1, flip[s2], i2) for (s1, i1), (s2, i2) in d.arcs]
        return TLDiagram(n, m, arcs)
    if axis == "top_bottom":
        size = {LEFT: m, RIGHT: n}
        arcs = [
            (s1, size[s1] + 1 - i1, s2, size[s2] + 1 - i2) for (s1, i1), (s2, i2) in d.arcs
        ]
        return TLDiagram(m, n, arcs)
    raise DiagramError(f"unknown axis {axis!r}")
