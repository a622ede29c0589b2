"""Finite simple graphs, rotation systems, face tracing and cycle regions."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from collections import deque
from typing import Hashable, Iterable, Mapping, Sequence

import networkx as nx

Vertex = Hashable
Dart = tuple  # (tail, head)


def vkey(v):
    """Total order on vertex labels, so that mixed int/str labels still sort."""
    if isinstance(v, int):
        return (0, v, "")
    return (1, 0, str(v))


def seq_key(seq):
    return tuple(vkey(v) for v in seq)


class GraphError(ValueError):
    pass


class EmbeddingError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class Graph:
    """A finite simple undirected graph with deterministic vertex and edge order.

    Edges are stored as ``(u, v)`` with ``u`` before ``v`` in vertex order; this is
    also the fixed orientation used for chains.
    """

    vertices: tuple
    edges: tuple

    def __init__(self, vertices: Iterable = (), edges: Iterable = ()):
        vs = set(vertices)
        es = set()
        for e in edges:
            u, v = tuple(e)
            if u == v:
                raise GraphError(f"loop at {u!r}")
            vs.add(u)
            vs.add(v)
            es.add((u, v) if vkey(u) <= vkey(v) else (v, u))
        object.__setattr__(self, "vertices", tuple(sorted(vs, key=vkey)))
        object.__setattr__(self, "edges", tuple(sorted(es, key=lambda e: (vkey(e[0]), vkey(e[1])))))

    @classmethod
    def from_adjacency(cls, adj: Mapping) -> "Graph":
        return cls(adj.keys(), ((u, v) for u, ns in adj.items() for v in ns))

    @classmethod
    def from_networkx(cls, g: nx.Graph) -> "Graph":
        return cls(g.nodes, g.edges)

    def to_networkx(self) -> nx.Graph:
        g = nx.Graph()
        g.add_nodes_from(self.vertices)
        g.add_edges_from(self.edges)
        return g

    def __eq__(self, other):
        return isinstance(other, Graph) and self.vertices == other.vertices and self.edges == other.edges

    def __hash__(self):
        return hash((self.vertices, self.edges))

    def __repr__(self):
        return f"Graph(|V|={len(self.vertices)}, |E|={len(self.edges)})"

    @cached_property
    def adj(self) -> dict:
        a = {v: [] for v in self.vertices}
        for u, v in self.edges:
            a[u].append(v)
            a[v].append(u)
        return {v: tuple(sorted(ns, key=vkey)) for v, ns in a.items()}

    @cached_property
    def edge_index(self) -> dict:
        return {e: i for i, e in enumerate(self.edges)}

    @cached_property
    def vertex_index(self) -> dict:
        return {v: i for i, v in enumerate(self.vertices)}

    def has_edge(self, u, v) -> bool:
        return v in self.adj.get(u, ())

    def norm_edge(self, u, v) -> tuple:
        return (u, v) if vkey(u) <= vkey(v) else (v, u)

    def degree(self, v) -> int:
        return len(self.adj[v])

    def subgraph(self, vs) -> "Graph":
        vs = set(vs)
        return Graph(vs, (e for e in self.edges if e[0] in vs and e[1] in vs))

    def relabel(self, f: Mapping) -> "Graph":
        return Graph((f[v] for v in self.vertices), ((f[u], f[v]) for u, v in self.edges))

    def bfs_dist(self, s) -> dict:
        dist = {s: 0}
        q = deque([s])
        while q:
            x = q.popleft()
            for y in self.adj[x]:
                if y not in dist:
                    dist[y] = dist[x] + 1
                    q.append(y)
        return dist

    @cached_property
    def distances(self) -> dict:
        return {v: self.bfs_dist(v) for v in self.vertices}

    def dist(self, u, v) -> float:
        return self.distances[u].get(v, float("inf"))

    def shortest_path(self, s, t, avoid_edge=None) -> tuple | None:
        """Lexicographically least shortest s-t path (greedy from ``s``).

        With ``avoid_edge`` the edge is deleted first.
        """
        if avoid_edge is None:
            d = self.distances[t]
            nbrs = self.adj
        else:
            a, b = avoid_edge
            nbrs = {v: tuple(w for w in ns if {v, w} != {a, b}) for v, ns in self.adj.items()}
            d = {t: 0}
            q = deque([t])
            while q:
                x = q.popleft()
                for y in nbrs[x]:
                    if y not in d:
                        d[y] = d[x] + 1
                        q.append(y)
        if s not in d:
            return None
        path = [s]
        while path[-1] != t:
            x = path[-1]
            path.append(next(y for y in nbrs[x] if d.get(y, -1) == d[x] - 1))
        return tuple(path)

    def is_connected(self) -> bool:
        if not self.vertices:
            return True
        return len(self.bfs_dist(self.vertices[0])) == len(self.vertices)

    def components(self) -> list:
        seen, out = set(), []
        for v in self.vertices:
            if v not in seen:
                comp = set(self.bfs_dist(v))
                seen |= comp
                out.append(sorted(comp, key=vkey))
        return out

    def is_biconnected(self) -> bool:
        if len(self.vertices) < 3 or not self.is_connected():
            return False
        return nx.is_biconnected(self.to_networkx())

    def is_triconnected(self) -> bool:
        n = len(self.vertices)
        if n < 4 or not self.is_biconnected():
            return False
        return nx.node_connectivity(self.to_networkx()) >= 3


@dataclass(frozen=True)
class NonPlanarWitness:
    """Edges of a Kuratowski subgraph (subdivided K5 or K3,3)."""

    edges: tuple


@dataclass(frozen=True, eq=False)
class PlanarMap:
    """A graph with a clockwise rotation system and a designated outer face.

    ``spin[v]`` lists the neighbours of ``v`` in clockwise order.  Faces are closed
    vertex sequences ``(x0, ..., xk, x0)``; ``outer`` indexes into :attr:`faces`.
    """

    graph: Graph
    spin: Mapping
    outer: int = field(default=-1)

    def __post_init__(self):
        spin = {v: tuple(self.spin[v]) if v in self.spin else () for v in self.graph.vertices}
        object.__setattr__(self, "spin", spin)
        self.validate()
        if self.outer == -1 and self.faces:
            object.__setattr__(self, "outer", default_outer(self.faces))
        if self.faces and not 0 <= self.outer < len(self.faces):
            raise EmbeddingError(f"outer face index {self.outer} out of range")

    def validate(self):
        g = self.graph
        for v in g.vertices:
            s = self.spin[v]
            if len(set(s)) != len(s) or set(s) != set(g.adj[v]):
                raise EmbeddingError(f"spin at {v!r} is not a cyclic order of its incident edges")
        for comp in g.components():
            sub = set(comp)
            ne = sum(1 for u, _ in g.edges if u in sub)
            nf = len({self.face_of[(u, w)] for u in comp for w in self.spin[u]}) if ne else 1
            if len(comp) - ne + nf != 2:
                raise EmbeddingError("Euler check failed: rotation system is not planar")

    @cached_property
    def _pos(self) -> dict:
        return {v: {w: i for i, w in enumerate(s)} for v, s in self.spin.items()}

    def next_dart(self, u, v) -> tuple:
        """Face-tracing successor of dart (u, v)."""
        s = self.spin[v]
        return (v, s[self._pos[v][u] - 1])

    @cached_property
    def _tracing(self):
        faces, face_of = [], {}
        darts = sorted(((u, v) for u in self.graph.vertices for v in self.spin[u]),
                       key=lambda d: (vkey(d[0]), vkey(d[1])))
        for d in darts:
            if d in face_of:
                continue
            idx = len(faces)
            walk = [d[0]]
            cur = d
            while cur not in face_of:
                face_of[cur] = idx
                walk.append(cur[1])
                cur = self.next_dart(*cur)
            faces.append(tuple(walk))
        return faces, face_of

    @property
    def faces(self) -> list:
        return self._tracing[0]

    @property
    def face_of(self) -> dict:
        """Map from dart to the index of the face it bounds."""
        return self._tracing[1]

    def bounded_faces(self) -> list:
        return [f for i, f in enumerate(self.faces) if i != self.outer]

    def with_outer(self, outer: int) -> "PlanarMap":
        return PlanarMap(self.graph, self.spin, outer)

    def mirror(self) -> "PlanarMap":
        """Reflected embedding; the outer face keeps its vertex set."""
        m = PlanarMap(self.graph, {v: tuple(reversed(s)) for v, s in self.spin.items()}, 0)
        target = set(self.faces[self.outer]) if self.faces else set()
        cands = [i for i, f in enumerate(m.faces) if set(f) == target and len(f) == len(self.faces[self.outer])]
        return m.with_outer(cands[0]) if cands else m

    def relabel(self, f: Mapping) -> "PlanarMap":
        outer_face = self.faces[self.outer]
        m = PlanarMap(self.graph.relabel(f), {f[v]: tuple(f[w] for w in s) for v, s in self.spin.items()}, 0)
        d = (f[outer_face[0]], f[outer_face[1]])
        return m.with_outer(m.face_of[d])

    def spin_contains(self, v, e1, e2, e3) -> bool:
        """Whether edges ``e1, e2, e3`` at ``v`` occur in this clockwise cyclic order.

        Edges may be given as neighbour vertices or as 2-element edges.
        """
        ns = [_other(v, e) for e in (e1, e2, e3)]
        pos = self._pos[v]
        for w in ns:
            if w not in pos:
                raise GraphError(f"edge {v!r}{w!r} is not incident to {v!r}")
        if len(set(ns)) < 3:
            raise GraphError("spin_contains needs three distinct edges")
        d = len(self.spin[v])
        i1, i2, i3 = (pos[w] for w in ns)
        return (i2 - i1) % d < (i3 - i1) % d

    def cycle_regions(self, cycle: Sequence) -> "RegionPartition":
        seen = self.__dict__.setdefault(_REGION_CACHE_ATTR, {})
        raw = tuple(getattr(cycle, "seq", cycle))
        hit = seen.get(raw)
        if hit is None:
            hit = seen[raw] = _regions(self, tuple(_cycle_vertices(self.graph, cycle)))
        return hit


def _other(v, e):
    if isinstance(e, (tuple, list, frozenset, set)) and len(e) == 2:
        a, b = tuple(e)
        if a == v:
            return b
        if b == v:
            return a
        raise GraphError(f"edge {e!r} is not incident to {v!r}")
    return e


def default_outer(faces) -> int:
    """Longest face; ties by the lexicographically least rotated vertex sequence."""
    def key(i):
        f = faces[i][:-1]
        rots = [f[k:] + f[:k] for k in range(len(f))]
        return (-len(f), min(seq_key(r) for r in rots))
    return min(range(len(faces)), key=key)


def embed(g: Graph) -> PlanarMap | NonPlanarWitness:
    """Combinatorial embedding of ``g`` or a Kuratowski witness.

    Uses the left-right planarity test from networkx on a graph built in sorted
    order, so the result is deterministic for a fixed vertex labelling.
    """
    h = nx.Graph()
    h.add_nodes_from(g.vertices)
    h.add_edges_from(g.edges)
    ok, cert = nx.check_planarity(h, counterexample=True)
    if not ok:
        return NonPlanarWitness(tuple(sorted((g.norm_edge(u, v) for u, v in cert.edges),
                                             key=lambda e: (vkey(e[0]), vkey(e[1])))))
    spin = {v: tuple(cert.neighbors_cw_order(v)) if v in cert else () for v in g.vertices}
    return PlanarMap(g, spin)


def embed_or_raise(g: Graph) -> PlanarMap:
    m = embed(g)
    if isinstance(m, NonPlanarWitness):
        raise EmbeddingError(f"graph is not planar; Kuratowski edges {list(m.edges)}")
    return m


def trace_faces(m: PlanarMap) -> list:
    """Face boundaries of ``m`` as closed vertex sequences."""
    m.validate()
    return list(m.faces)


def _cycle_vertices(g: Graph, cycle) -> list:
    c = list(getattr(cycle, "seq", cycle))
    if len(c) > 1 and c[0] == c[-1]:
        c = c[:-1]
    if len(c) < 3 or len(set(c)) != len(c):
        raise GraphError(f"not a cycle: {c!r}")
    for a, b in zip(c, c[1:] + c[:1]):
        if not g.has_edge(a, b):
            raise GraphError(f"not a cycle: {a!r}{b!r} is not an edge")
    return c


@dataclass(frozen=True)
class RegionPartition:
    cycle: tuple
    side0_vertices: frozenset
    side0_edges: frozenset
    side0_faces: frozenset
    side1_vertices: frozenset
    side1_edges: frozenset
    side1_faces: frozenset
    on_vertices: frozenset
    on_edges: frozenset

    def side_of_vertex(self, v):
        if v in self.on_vertices:
            return None
        return 0 if v in self.side0_vertices else 1

    def side_of_edge(self, e):
        e = frozenset(e)
        if e in self.on_edges:
            return None
        return 0 if e in self.side0_edges else 1


_REGION_CACHE_ATTR = "_region_cache"


def _regions(m: PlanarMap, c: tuple) -> RegionPartition:
    cache = m.__dict__.setdefault(_REGION_CACHE_ATTR, {})
    key = frozenset(frozenset(p) for p in zip(c, c[1:] + c[:1]))
    hit = cache.get(key)
    if hit is not None:
        return hit
    g = m.graph
    if not g.is_connected():
        raise GraphError("cycle_regions needs a connected map")
    on_edges = key
    nf = len(m.faces)
    parent = list(range(nf))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for u, v in g.edges:
        if frozenset((u, v)) not in on_edges:
            a, b = find(m.face_of[(u, v)]), find(m.face_of[(v, u)])
            if a != b:
                parent[a] = b
    classes = {find(i) for i in range(nf)}
    if len(classes) != 2:
        raise GraphError("cycle does not separate the sphere into two regions")
    outer_cls = find(m.outer)
    faces = {0: set(), 1: set()}
    for i in range(nf):
        faces[1 if find(i) == outer_cls else 0].add(i)
    on_v = frozenset(c)
    verts = {0: set(), 1: set()}
    edges = {0: set(), 1: set()}
    for u, v in g.edges:
        e = frozenset((u, v))
        if e in on_edges:
            continue
        s = 1 if find(m.face_of[(u, v)]) == outer_cls else 0
        edges[s].add(e)
        for x in (u, v):
            if x not in on_v:
                verts[s].add(x)
    rp = RegionPartition(c, frozenset(verts[0]), frozenset(edges[0]), frozenset(faces[0]),
                         frozenset(verts[1]), frozenset(edges[1]), frozenset(faces[1]),
                         on_v, on_edges)
    cache[key] = rp
    return rp


def cycle_regions(m: PlanarMap, cycle) -> RegionPartition:
    return m.cycle_regions(cycle)


def spin_contains(m: PlanarMap, v, e1, e2, e3) -> bool:
    return m.spin_contains(v, e1, e2, e3)
