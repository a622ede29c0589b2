"""Automorphism groups, Cayley-graph balls and the free-group action on based walks."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import networkx as nx
from networkx.algorithms.isomorphism import GraphMatcher

from .coset import StallingsGraph, coset_index
from .pi1 import Pi1Basis, abelianization_rank, free_reduce
from .planar_map import Graph, PlanarMap, vkey
from .walks import ClosedWalk, WalkClass, cyclic_reduce, reduce, reduce_seq


# ---- automorphisms ----------------------------------------------------------

def refine_colors(g: Graph, colors: dict) -> dict:
    """1-dimensional Weisfeiler-Leman refinement, canonical integer colours."""
    cur = dict(colors)
    while True:
        sig = {v: (cur[v], tuple(sorted(cur[w] for w in g.adj[v]))) for v in g.vertices}
        names = {s: i for i, s in enumerate(sorted(set(sig.values())))}
        new = {v: names[sig[v]] for v in g.vertices}
        if len(set(new.values())) == len(set(cur.values())):
            return new
        cur = new


@dataclass
class AutomorphismGroup:
    graph: Graph
    generators: list  # dicts vertex -> vertex
    order: int
    base: list = field(default_factory=list)

    @property
    def orbits(self) -> list:
        parent = {v: v for v in self.graph.vertices}

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for p in self.generators:
            for v, w in p.items():
                a, b = find(v), find(w)
                if a != b:
                    parent[max(a, b, key=vkey)] = min(a, b, key=vkey)
        cls = {}
        for v in self.graph.vertices:
            cls.setdefault(find(v), []).append(v)
        return sorted(cls.values(), key=lambda c: vkey(c[0]))

    def elements(self, cap: int = 100_000) -> list:
        """All group elements, by closure under the generators."""
        ident = {v: v for v in self.graph.vertices}
        key = lambda p: tuple(p[v] for v in self.graph.vertices)  # noqa: E731
        seen = {key(ident): ident}
        q = deque([ident])
        while q:
            p = q.popleft()
            for s in self.generators:
                r = {v: s[p[v]] for v in p}
                k = key(r)
                if k not in seen:
                    if len(seen) >= cap:
                        raise RuntimeError("group too large to enumerate")
                    seen[k] = r
                    q.append(r)
        return list(seen.values())

    def is_valid(self) -> bool:
        es = {frozenset(e) for e in self.graph.edges}
        for p in self.generators:
            if sorted(p.values(), key=vkey) != list(self.graph.vertices):
                return False
            if any(frozenset((p[u], p[v])) not in es for u, v in self.graph.edges):
                return False
        return True


def _nx_colored(g: Graph, colors: dict) -> nx.Graph:
    h = nx.Graph()
    for v in g.vertices:
        h.add_node(v, c=colors[v])
    h.add_edges_from(g.edges)
    return h


def _find_iso(g: Graph, ca: dict, cb: dict) -> dict | None:
    if sorted(ca.values()) != sorted(cb.values()):
        return None
    gm = GraphMatcher(_nx_colored(g, ca), _nx_colored(g, cb), node_match=lambda a, b: a["c"] == b["c"])
    return next(gm.isomorphisms_iter(), None)


def automorphisms(g: Graph) -> AutomorphismGroup:
    """Generators and exact order via a stabiliser chain.

    Each orbit of the point stabiliser is decided by colour-refined VF2 searches
    for an automorphism moving the base point to each candidate.
    """
    fixed = []
    gens = []
    order = 1

    def colouring(extra):
        init = {v: (0, g.degree(v)) for v in g.vertices}
        for k, v in enumerate(fixed + extra):
            init[v] = (1 + k, 0)
        return refine_colors(g, init)

    while True:
        col = colouring([])
        cells = {}
        for v in g.vertices:
            cells.setdefault(col[v], []).append(v)
        big = [c for c in cells.values() if len(c) > 1]
        if not big:
            break
        b = min((c[0] for c in big), key=vkey)
        cell = cells[col[b]]
        orbit = {b}
        level_gens = []
        cb = colouring([b])
        for x in cell:
            if x in orbit:
                continue
            # close the orbit under the generators found so far at this level
            grew = True
            while grew:
                grew = False
                for p in level_gens:
                    for y in list(orbit):
                        if p[y] not in orbit:
                            orbit.add(p[y])
                            grew = True
            if x in orbit:
                continue
            iso = _find_iso(g, cb, colouring([x]))
            if iso is not None:
                level_gens.append(iso)
                orbit.add(x)
        grew = True
        while grew:
            grew = False
            for p in level_gens:
                for y in list(orbit):
                    if p[y] not in orbit:
                        orbit.add(p[y])
                        grew = True
        gens += level_gens
        order *= len(orbit)
        fixed.append(b)
    return AutomorphismGroup(g, gens, order, fixed)


def map_walk(p: dict, w: ClosedWalk) -> ClosedWalk:
    return ClosedWalk(tuple(p[x] for x in w.seq))


# ---- presentations and rewriting -------------------------------------------------

def inv_letter(c: str) -> str:
    return c.swapcase()


def inv_word(w: str) -> str:
    return "".join(inv_letter(c) for c in reversed(w))


def free_reduce_str(w: str) -> str:
    out = []
    for c in w:
        if out and out[-1] == inv_letter(c):
            out.pop()
        else:
            out.append(c)
    return "".join(out)


@dataclass(frozen=True)
class Presentation:
    gens: tuple
    rels: tuple

    def __post_init__(self):
        for s in self.gens:
            if len(s) != 1 or not s.islower():
                raise ValueError(f"generator {s!r} must be a single lowercase letter")
        for r in self.rels:
            if not r or free_reduce_str(r) != r or any(c.lower() not in self.gens for c in r):
                raise ValueError(f"relator {r!r} must be a nonempty freely reduced word")

    @property
    def letters(self) -> tuple:
        return tuple(x for s in self.gens for x in (s, s.upper()))

    @classmethod
    def parse(cls, text: str) -> "Presentation":
        gens, rels = (), ()
        for ln in text.splitlines():
            head, _, rest = ln.partition(":")
            if head.strip() == "gens":
                gens = tuple(rest.split())
            elif head.strip() == "rels":
                rels = tuple(rest.split())
        if not gens:
            raise ValueError("presentation needs a 'gens:' line")
        return cls(gens, rels)

    def to_text(self) -> str:
        return f"gens: {' '.join(self.gens)}\nrels: {' '.join(self.rels)}\n"


class RewritingSystem:
    """Shortlex Knuth-Bendix completion with letter order a < A < b < B < ..."""

    def __init__(self, p: Presentation, max_rules: int = 400, max_rounds: int = 50):
        self.order = {c: i for i, c in enumerate(p.letters)}
        rules = {}
        for c in p.letters:
            rules[c + inv_letter(c)] = ""
        eqs = []
        for r in p.rels:
            for k in range(len(r)):
                rot = r[k:] + r[:k]
                eqs.append((rot, ""))
                eqs.append((inv_word(rot), ""))
        self.rules = rules
        for u, v in eqs:
            self._add(u, v)
        self._complete(max_rules, max_rounds)

    def _less(self, u: str, v: str) -> bool:
        if len(u) != len(v):
            return len(u) < len(v)
        return [self.order[c] for c in u] < [self.order[c] for c in v]

    def normal_form(self, w: str) -> str:
        changed = True
        while changed:
            changed = False
            for lhs, rhs in self.rules.items():
                i = w.find(lhs)
                if i >= 0:
                    w = w[:i] + rhs + w[i + len(lhs):]
                    changed = True
                    break
        return w

    def _add(self, u, v) -> bool:
        u, v = self.normal_form(u), self.normal_form(v)
        if u == v:
            return False
        if self._less(u, v):
            u, v = v, u
        self.rules[u] = v
        return True

    def _interreduce(self):
        changed = True
        while changed:
            changed = False
            for lhs in list(self.rules):
                rhs = self.rules.pop(lhs)
                l2, r2 = self.normal_form(lhs), self.normal_form(rhs)
                if l2 != r2:
                    if self._less(l2, r2):
                        l2, r2 = r2, l2
                    self.rules[l2] = r2
                if (l2, r2) != (lhs, rhs):
                    changed = True

    def _complete(self, max_rules, max_rounds):
        for _ in range(max_rounds):
            self._interreduce()
            new = False
            items = list(self.rules.items())
            for l1, r1 in items:
                for l2, r2 in items:
                    for k in range(1, min(len(l1), len(l2))):
                        if l1[-k:] == l2[:k]:
                            a = r1 + l2[k:]
                            b = l1[:-k] + r2
                            if self._add(a, b):
                                new = True
                    if len(l2) < len(l1) and l2 in l1 and (l1, r1) != (l2, r2):
                        i = l1.find(l2)
                        if self._add(l1[:i] + r2 + l1[i + len(l2):], r1):
                            new = True
                    if len(self.rules) > max_rules:
                        raise RuntimeError("Knuth-Bendix completion exceeded its rule cap")
            if not new:
                self._interreduce()
                return
        raise RuntimeError("Knuth-Bendix completion did not converge")


IDENTITY = "1"


def _label(w: str) -> str:
    return w if w else IDENTITY


def _unlabel(v: str) -> str:
    return "" if v == IDENTITY else v


class BoundaryError(ValueError):
    """An operation would leave the finite ball."""


@dataclass
class CayleyBall:
    presentation: Presentation
    radius: int
    graph: Graph
    dist: dict
    labels: dict  # (u, v) -> letter with u * letter = v
    rws: RewritingSystem

    base: str = IDENTITY

    @property
    def interior(self) -> set:
        return {v for v, d in self.dist.items() if d < self.radius}

    def multiply(self, g: str, w: str) -> str:
        return _label(self.rws.normal_form(_unlabel(g) + w))

    def path(self, w: str, start: str = IDENTITY) -> tuple:
        out = [start]
        for c in w:
            out.append(self.multiply(out[-1], c))
        return tuple(out)

    def to_text(self) -> str:
        lines = [f"# cayley ball radius {self.radius}: {self.presentation.to_text().strip()}".replace("\n", "; ")]
        for v in self.graph.vertices:
            lines.append(f"{v}: " + " ".join(self.graph.adj[v]))
        for (u, v), c in sorted(self.labels.items()):
            lines.append(f"# label {u} {v} {c}")
        return "\n".join(lines) + "\n"


def cayley_ball(p: Presentation, r: int, vertex_cap: int = 20_000) -> CayleyBall:
    """Ball of radius ``r`` about the identity in the Cayley graph of ``p``."""
    rws = RewritingSystem(p)
    dist = {"": 0}
    q = deque([""])
    labels = {}
    while q:
        g = q.popleft()
        if dist[g] == r:
            continue
        for c in p.letters:
            h = rws.normal_form(g + c)
            if h not in dist:
                dist[h] = dist[g] + 1
                if len(dist) > vertex_cap:
                    raise RuntimeError(f"ball exceeds {vertex_cap} vertices; use a smaller radius")
                q.append(h)
    edges = set()
    for g in dist:
        for c in p.letters:
            h = rws.normal_form(g + c)
            if h in dist and h != g:
                u, v = _label(g), _label(h)
                edges.add(frozenset((u, v)))
                labels.setdefault((u, v), c)
    graph = Graph((_label(g) for g in dist), (tuple(e) for e in edges))
    return CayleyBall(p, r, graph, {_label(g): d for g, d in dist.items()}, labels, rws)


def fs_act(ball: CayleyBall, w: str, W: ClosedWalk) -> ClosedWalk:
    """Image of the based closed walk W under the word w: P_w (w.W) P_w^{-1}."""
    if W.base != ball.base:
        raise ValueError("walk must be based at the identity")
    P = ball.path(w)
    moved = tuple(ball.multiply(P[-1], _unlabel(x)) for x in W.seq)
    seq = P + moved[1:] + tuple(reversed(P))[1:]
    vs = ball.dist
    bad = [x for x in seq if x not in vs]
    if bad:
        raise BoundaryError(f"translate by {w!r} leaves the ball at {bad[0]!r}")
    return ClosedWalk(seq)


# ---- pi_1 generators ------------------------------------------------------------

@dataclass(frozen=True)
class Pi1Element:
    word: tuple  # reduced chord word
    walk: ClosedWalk  # reduced closed walk at the base


def genpi(g: Graph | PlanarMap, V: Sequence, base, per_attachment: bool = True,
          basis: Pi1Basis | None = None) -> list:
    """Based conjugates P_W W P_W^{-1} of the walks of V, as pi_1 elements.

    P_W is the spanning-tree path to an attachment vertex of W; with
    ``per_attachment`` every vertex of W is used, otherwise only the one
    closest to the base.
    """
    if isinstance(g, PlanarMap):
        g = g.graph
    walks = [v.rep if isinstance(v, WalkClass) else v for v in V]
    classes = {WalkClass.of(w) for w in walks}
    if any(WalkClass.of(w.inverse()) not in classes for w in walks):
        raise ValueError("V must be closed under taking inverses")
    basis = basis or Pi1Basis(g, base)
    out, seen = [], set()
    for w in walks:
        verts = list(dict.fromkeys(w.vertices))
        if not per_attachment:
            verts = [min(verts, key=lambda x: (basis.depth[x], vkey(x)))]
        for x in verts:
            wx = w.rotate(w.vertices.index(x))
            P = basis.tree_path(x)
            based = reduce(ClosedWalk(P + wx.seq[1:] + tuple(reversed(P))[1:]))
            if based.seq in seen:
                continue
            seen.add(based.seq)
            out.append(Pi1Element(basis.word(based), based))
    return out


def cyclic_reduce_pi(e: Pi1Element) -> WalkClass | None:
    """Cyclic reduction of a based element; ``None`` for the identity."""
    c = cyclic_reduce(e.walk)
    return None if c.is_empty else WalkClass.of(c)


@dataclass(frozen=True)
class GenPiReport:
    rank: int
    abelian_rank: int
    normal_closure_trivial_quotient: bool | None
    subgroup_is_everything: bool

    @property
    def generates(self) -> bool:
        return self.abelian_rank == self.rank and self.normal_closure_trivial_quotient is not False


def verify_genpi(g: Graph, elements: Sequence, base, coset_cap: int = 20_000) -> GenPiReport:
    basis = Pi1Basis(g, base)
    words = [basis.word(e.walk) for e in elements]
    ab = abelianization_rank(words, basis.rank)
    idx = coset_index(basis.rank, words, (), coset_cap) if basis.rank else 1
    sg = StallingsGraph(words).is_whole_group(basis.rank)
    return GenPiReport(basis.rank, ab, None if idx is None else idx == 1, sg)


@dataclass(frozen=True)
class OrbitReport:
    count: int
    orbits: tuple  # tuples of seed indices
    explored: int
    exhausted: bool


def orbit_partition_pi(ball: CayleyBall, V_pi: Iterable, budget: int = 50_000) -> OrbitReport:
    """Partition seeds into F_S-orbits explored by single-letter moves inside the ball."""
    seeds = [reduce(e.walk if isinstance(e, Pi1Element) else e) for e in V_pi]
    if not seeds:
        return OrbitReport(0, (), 0, False)
    owner = {}
    parent = list(range(len(seeds)))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    q = deque()
    for i, s in enumerate(seeds):
        if s.seq in owner:
            a, b = find(owner[s.seq]), find(i)
            parent[max(a, b)] = min(a, b)
        else:
            owner[s.seq] = i
            q.append(s)
    explored = 0
    exhausted = False
    letters = ball.presentation.letters
    while q:
        if len({find(i) for i in range(len(seeds))}) == 1:
            break
        if explored >= budget:
            exhausted = True
            break
        w = q.popleft()
        explored += 1
        i = owner[w.seq]
        for c in letters:
            try:
                nxt = reduce(fs_act(ball, c, w))
            except BoundaryError:
                continue
            j = owner.get(nxt.seq)
            if j is None:
                owner[nxt.seq] = i
                q.append(nxt)
            else:
                a, b = find(i), find(j)
                if a != b:
                    parent[max(a, b)] = min(a, b)
    cls = {}
    for i in range(len(seeds)):
        cls.setdefault(find(i), []).append(i)
    orbits = tuple(tuple(v) for v in sorted(cls.values()))
    return OrbitReport(len(orbits), orbits, explored, exhausted)


def unit_squares(ball: CayleyBall, relator: str, interior_only: bool = True) -> list:
    """Closed walks spelling ``relator`` based at the identity's translates inside the ball.

    Each such cycle is returned once, based at the identity by a tree path
    being the caller's job; here the walks start at their own corner.
    """
    out, seen = [], set()
    allowed = ball.interior if interior_only else set(ball.dist)
    for v in ball.graph.vertices:
        p = ball.path(relator, v)
        if p[-1] != v or not set(p) <= allowed:
            continue
        w = ClosedWalk(p)
        k = WalkClass.of(w)
        if k not in seen:
            seen.add(k)
            out.append(w)
    return out


def based_at_identity(ball: CayleyBall, w: ClosedWalk) -> ClosedWalk:
    """Conjugate a closed walk to the identity along the normal-form path of its base."""
    g = _unlabel(w.base)
    P = ball.path(g)
    return reduce(ClosedWalk(P + w.seq[1:] + tuple(reversed(P))[1:]))


def reduce_word(word) -> tuple:
    return free_reduce(word)


def reduce_vertices(seq) -> tuple:
    return reduce_seq(seq)
