"""Fundamental group of a graph in the chord basis of a BFS spanning tree.

Letters are nonzero integers: ``+k`` traverses chord ``k - 1`` in its fixed
orientation (smaller endpoint to larger), ``-k`` traverses it backwards.
"""

from __future__ import annotations

from collections import deque

from .planar_map import Graph, vkey
from .walks import ClosedWalk, reduce_seq


def free_reduce(word) -> tuple:
    out = []
    for x in word:
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(x)
    return tuple(out)


def cyclic_free_reduce(word) -> tuple:
    w = free_reduce(word)
    i, j = 0, len(w)
    while j - i >= 2 and w[i] == -w[j - 1]:
        i += 1
        j -= 1
    return w[i:j]


def invert_word(word) -> tuple:
    return tuple(-x for x in reversed(word))


class Pi1Basis:
    """BFS spanning tree from ``base`` (ties by vertex order) and its chords."""

    def __init__(self, g: Graph, base):
        self.graph = g
        self.base = base
        parent = {base: None}
        depth = {base: 0}
        q = deque([base])
        while q:
            x = q.popleft()
            for y in g.adj[x]:
                if y not in parent:
                    parent[y] = x
                    depth[y] = depth[x] + 1
                    q.append(y)
        self.parent = parent
        self.depth = depth
        tree = {frozenset((v, p)) for v, p in parent.items() if p is not None}
        self.chords = tuple(e for e in g.edges if frozenset(e) not in tree and e[0] in parent)
        self.chord_index = {e: i for i, e in enumerate(self.chords)}

    @property
    def rank(self) -> int:
        return len(self.chords)

    def tree_path(self, v) -> tuple:
        """Tree path from the base to ``v``."""
        p = [v]
        while self.parent[p[-1]] is not None:
            p.append(self.parent[p[-1]])
        return tuple(reversed(p))

    def letter(self, a, b):
        e = (a, b) if vkey(a) <= vkey(b) else (b, a)
        k = self.chord_index.get(e)
        if k is None:
            return None
        return k + 1 if e == (a, b) else -(k + 1)

    def word(self, w) -> tuple:
        """Reduced chord word of a closed walk (conjugated to the base by tree paths)."""
        seq = getattr(w, "seq", w)
        out = []
        for a, b in zip(seq, seq[1:]):
            x = self.letter(a, b)
            if x is not None:
                out.append(x)
        return free_reduce(out)

    def walk(self, word) -> ClosedWalk:
        """Reduced closed walk at the base representing ``word``."""
        seq = [self.base]
        for x in word:
            a, b = self.chords[abs(x) - 1]
            if x < 0:
                a, b = b, a
            seq += list(reversed(self.tree_path(seq[-1])))[1:] + list(self.tree_path(a)[1:])
            seq.append(b)
        seq += list(reversed(self.tree_path(seq[-1])))[1:]
        return ClosedWalk(reduce_seq(seq))


def abelianization_rank(words, rank: int) -> int:
    """Rank over Z of the images of ``words`` in Z^rank."""
    from .homology import rank_Z
    vecs = []
    for w in words:
        v = [0] * rank
        for x in w:
            v[abs(x) - 1] += 1 if x > 0 else -1
        vecs.append(v)
    return rank_Z(vecs) if vecs and rank else 0


def abelian_image(words, rank: int) -> list:
    out = []
    for w in words:
        v = [0] * rank
        for x in w:
            v[abs(x) - 1] += 1 if x > 0 else -1
        out.append(v)
    return out
