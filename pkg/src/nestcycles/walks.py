"""Closed walks and the elementary operations of the generation calculus.

A closed walk is stored as its vertex sequence with the base repeated at the
end, ``(x0, x1, ..., x_{n-1}, x0)``.  The empty walk at ``v`` is ``(v,)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Sequence

from .planar_map import Graph, PlanarMap, seq_key


class WalkError(ValueError):
    pass


@dataclass(frozen=True)
class ClosedWalk:
    seq: tuple

    def __post_init__(self):
        s = tuple(self.seq)
        if not s:
            raise WalkError("a closed walk needs at least its base vertex")
        if s[0] != s[-1]:
            raise WalkError(f"walk {s!r} is not closed")
        object.__setattr__(self, "seq", s)

    @classmethod
    def of(cls, *vertices) -> "ClosedWalk":
        """Build from vertices with the closing vertex implicit: ``of(1, 2, 3)``."""
        if len(vertices) == 1 and not isinstance(vertices[0], (int, str)):
            vertices = tuple(vertices[0])
        vs = tuple(vertices)
        if len(vs) > 1 and vs[0] == vs[-1]:
            return cls(vs)
        return cls(vs + vs[:1])

    @classmethod
    def empty(cls, v) -> "ClosedWalk":
        return cls((v,))

    def __len__(self):
        return len(self.seq) - 1

    def __iter__(self):
        return iter(self.seq)

    def __str__(self):
        return "-".join(map(str, self.seq))

    @property
    def base(self):
        return self.seq[0]

    @property
    def is_empty(self) -> bool:
        return len(self.seq) == 1

    @property
    def vertices(self) -> tuple:
        """Vertex sequence without the repeated base."""
        return self.seq[:-1] if len(self.seq) > 1 else self.seq

    def darts(self) -> list:
        return list(zip(self.seq, self.seq[1:]))

    def edges(self) -> set:
        return {frozenset(d) for d in self.darts()}

    def validate(self, g: Graph) -> "ClosedWalk":
        if self.base not in g.adj:
            raise WalkError(f"{self.base!r} is not a vertex")
        for a, b in self.darts():
            if not g.has_edge(a, b):
                raise WalkError(f"{a!r}{b!r} is not an edge")
        return self

    def inverse(self) -> "ClosedWalk":
        return ClosedWalk(self.seq[::-1])

    def rotate(self, k: int) -> "ClosedWalk":
        n = len(self)
        if n == 0:
            return self
        k %= n
        core = self.seq[:-1]
        r = core[k:] + core[:k]
        return ClosedWalk(r + r[:1])

    def rotate_to(self, v) -> "ClosedWalk":
        return self.rotate(self.seq.index(v))

    def rotations(self):
        for k in range(max(len(self), 1)):
            yield self.rotate(k)

    def __add__(self, other: "ClosedWalk") -> "ClosedWalk":
        return walk_sum(self, other)

    def power(self, n: int) -> "ClosedWalk":
        return ClosedWalk(self.seq[:1] + self.seq[1:] * n)

    def is_cycle(self) -> bool:
        vs = self.vertices
        return len(self) >= 3 and len(set(vs)) == len(vs)

    def is_spike_free(self) -> bool:
        """No spike, read cyclically."""
        n = len(self)
        if n == 0:
            return True
        vs = self.vertices
        return n > 2 and all(vs[i - 1] != vs[(i + 1) % n] for i in range(n))

    def key(self):
        return seq_key(self.seq)

    def canonical(self) -> "WalkClass":
        return WalkClass.of(self)


@dataclass(frozen=True)
class WalkClass:
    """A closed walk up to rotation, represented by its least rotation."""

    rep: ClosedWalk

    @classmethod
    def of(cls, w: ClosedWalk) -> "WalkClass":
        return cls(min(w.rotations(), key=lambda r: r.key()))

    def __len__(self):
        return len(self.rep)

    def __str__(self):
        return str(self.rep)

    def inverse(self) -> "WalkClass":
        return WalkClass.of(self.rep.inverse())

    def undirected(self) -> frozenset:
        """Rotation- and orientation-free identity of the underlying walk."""
        return frozenset((self, self.inverse()))

    def key(self):
        return self.rep.key()


def walk_sum(w1: ClosedWalk, w2: ClosedWalk) -> ClosedWalk:
    """Concatenation; ``w1`` must end where ``w2`` starts."""
    if w1.seq[-1] != w2.seq[0]:
        raise WalkError(f"cannot add walks based at {w1.seq[-1]!r} and {w2.seq[0]!r}")
    return ClosedWalk(w1.seq + w2.seq[1:])


def reduce_seq(seq: Sequence) -> tuple:
    """Remove spikes from a linear walk by repeated cancellation (a stack pass)."""
    out = []
    for x in seq:
        if len(out) >= 2 and out[-2] == x:
            out.pop()
        else:
            out.append(x)
    return tuple(out)


def reduce(w: ClosedWalk) -> ClosedWalk:
    """Fully reduced form of ``w``, keeping its base vertex."""
    return ClosedWalk(reduce_seq(w.seq))


def cyclic_reduce(w: ClosedWalk) -> ClosedWalk:
    """Reduce, then also cancel spikes across the base point."""
    s = reduce_seq(w.seq)
    i, j = 0, len(s) - 1
    while j - i >= 2 and s[i + 1] == s[j - 1]:
        i += 1
        j -= 1
    return ClosedWalk(s[i:j + 1])


def find_shortcut(g: Graph, w: ClosedWalk | Sequence) -> tuple | None:
    """Shortest shortcut of a closed walk, as a vertex path, or ``None``.

    A repeated vertex yields the trivial path ``(x,)``.  Otherwise the result is
    a path strictly shorter than both arcs of the walk between its ends; among
    shortest such paths the lexicographically least (length, path) wins.
    """
    if isinstance(g, PlanarMap):
        g = g.graph
    if not isinstance(w, ClosedWalk):
        w = ClosedWalk.of(*w)
    vs = w.vertices
    n = len(w)
    if n == 0:
        return None
    seen = {}
    for x in vs:
        if x in seen:
            return (x,)
        seen[x] = True
    best = None
    for j, k in combinations(range(n), 2):
        arc = min(k - j, n - (k - j))
        d = g.dist(vs[j], vs[k])
        if d < arc:
            a, b = sorted((vs[j], vs[k]), key=lambda v: seq_key((v,)))
            p = g.shortest_path(a, b)
            cand = (len(p) - 1, seq_key(p), p)
            if best is None or cand[:2] < best[:2]:
                best = cand
    return None if best is None else best[2]


def is_shortcut_free(g: Graph, w: ClosedWalk) -> bool:
    return find_shortcut(g, w) is None


def _isometric_cycles(g: Graph, length: int) -> list:
    """All cycles of the given length that are isometric (shortcut-free).

    Each cycle is returned once as a vertex tuple starting at its least vertex,
    with its second vertex less than its last.
    """
    order = g.vertex_index
    dist = g.distances
    out = []
    for s in g.vertices:
        si = order[s]
        path = [s]
        onpath = {s}

        def ok(x):
            # the new vertex must keep every pair on the path at cyclic arc distance
            k = len(path)
            for j, y in enumerate(path):
                gap = k - j
                want = min(gap, length - gap)
                if dist[y].get(x, 10**9) != want:
                    return False
            return True

        def dfs():
            x = path[-1]
            if len(path) == length:
                if g.has_edge(x, s) and order[path[1]] < order[path[-1]]:
                    out.append(tuple(path))
                return
            for y in g.adj[x]:
                if order[y] <= si or y in onpath:
                    continue
                if not ok(y):
                    continue
                path.append(y)
                onpath.add(y)
                dfs()
                path.pop()
                onpath.discard(y)

        dfs()
    return out


def candidate_indecomposables(g: Graph | PlanarMap, i: int) -> set:
    """Shortcut-free cycles of length ``i``, both orientations, as walk classes."""
    if isinstance(g, PlanarMap):
        g = g.graph
    if i < 3:
        raise WalkError("cycles have length at least 3")
    out = set()
    for c in _isometric_cycles(g, i):
        w = ClosedWalk.of(*c)
        out.add(WalkClass.of(w))
        out.add(WalkClass.of(w.inverse()))
    return out


def shortcut_free_cycles(g: Graph | PlanarMap, max_len: int | None = None) -> list:
    """One orientation per shortcut-free cycle, sorted by (length, key)."""
    if isinstance(g, PlanarMap):
        g = g.graph
    top = len(g.vertices) if max_len is None else max_len
    out = []
    for n in range(3, top + 1):
        out.extend(ClosedWalk.of(*c) for c in _isometric_cycles(g, n))
    return out


def all_cycles(g: Graph, max_len: int | None = None) -> list:
    """Every cycle once (least-vertex start, one orientation)."""
    order = g.vertex_index
    top = len(g.vertices) if max_len is None else max_len
    out = []
    for s in g.vertices:
        si = order[s]
        path, onpath = [s], {s}

        def dfs():
            x = path[-1]
            for y in g.adj[x]:
                if y == s and len(path) >= 3 and order[path[1]] < order[path[-1]]:
                    out.append(ClosedWalk.of(*path))
                if order[y] <= si or y in onpath or len(path) >= top:
                    continue
                path.append(y)
                onpath.add(y)
                dfs()
                path.pop()
                onpath.discard(y)

        dfs()
    out.sort(key=lambda w: (len(w), w.key()))
    return out


def path_walk(path: Sequence) -> tuple:
    return tuple(path)


def parse_walk(text: str) -> ClosedWalk:
    """Parse ``"1-2-3-1"`` (integers where possible)."""
    parts = [p for p in text.strip().split("-") if p != ""]
    vs = tuple(int(p) if p.lstrip("+").isdigit() else p for p in parts)
    return ClosedWalk(vs)


def walks_of(ws: Iterable) -> list:
    return [w if isinstance(w, ClosedWalk) else w.rep for w in ws]
