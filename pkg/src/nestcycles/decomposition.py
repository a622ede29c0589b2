"""Blocks, Tutte decompositions, torsos and the degree-sequence order of orbits."""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Sequence

import networkx as nx

from .groups import AutomorphismGroup
from .homology import spans_cycle_lattice
from .planar_map import Graph, vkey
from .walks import ClosedWalk, reduce


class DecompositionError(ValueError):
    pass


# ---- blocks ------------------------------------------------------------------

@dataclass
class BlockTree:
    graph: Graph
    blocks: list  # Graph per block
    cutvertices: tuple
    tree: nx.Graph  # nodes ("B", i) and ("C", v)

    def block_of_edge(self, u, v) -> int:
        for i, b in enumerate(self.blocks):
            if b.has_edge(u, v):
                return i
        raise KeyError((u, v))

    def check(self) -> list:
        errs = []
        for e in self.graph.edges:
            n = sum(1 for b in self.blocks if b.has_edge(*e))
            if n != 1:
                errs.append(f"edge {e} lies in {n} blocks")
        if self.tree.number_of_nodes() and not nx.is_forest(self.tree):
            errs.append("block-cutvertex graph has a cycle")
        return errs


def blocks(g: Graph) -> BlockTree:
    h = g.to_networkx()
    comps = [set(c) for c in nx.biconnected_components(h)]
    comps.sort(key=lambda c: sorted(vkey(v) for v in c))
    bl = [g.subgraph(c) for c in comps]
    # isolated vertices form trivial blocks
    covered = set().union(*comps) if comps else set()
    bl += [Graph([v]) for v in g.vertices if v not in covered]
    cuts = tuple(sorted(nx.articulation_points(h), key=vkey))
    t = nx.Graph()
    for i, b in enumerate(bl):
        t.add_node(("B", i))
        for v in cuts:
            if v in b.adj:
                t.add_edge(("B", i), ("C", v))
    return BlockTree(g, bl, cuts, t)


# ---- Tutte decomposition -----------------------------------------------------------

@dataclass
class TutteTree:
    graph: Graph
    parts: list  # tuples of vertices
    kinds: list  # "3-connected" | "cycle" | "K2"
    tree_edges: list  # (s, t) with s < t
    adhesion: dict = field(default_factory=dict)  # (s, t) -> frozenset

    def neighbours(self, t) -> list:
        return sorted(b if a == t else a for a, b in self.tree_edges if t in (a, b))

    def adhesion_sets(self) -> set:
        return set(self.adhesion.values())

    def torso(self, t: int) -> Graph:
        return torso(self, t)

    def check(self) -> list:
        """Violations of (T1)-(T3), the adhesion bound, the torso trichotomy and normalisation."""
        g, errs = self.graph, []
        cover = set().union(*map(set, self.parts)) if self.parts else set()
        if cover != set(g.vertices):
            errs.append("T1: parts do not cover the vertices")
        for u, v in g.edges:
            if not any(u in p and v in p for p in map(set, self.parts)):
                errs.append(f"T2: edge {u}-{v} lies in no part")
        t = nx.Graph()
        t.add_nodes_from(range(len(self.parts)))
        t.add_edges_from(self.tree_edges)
        if not nx.is_tree(t):
            errs.append("decomposition graph is not a tree")
        else:
            for v in g.vertices:
                holders = [i for i, p in enumerate(self.parts) if v in p]
                if not nx.is_connected(t.subgraph(holders)):
                    errs.append(f"T3: parts containing {v} are not connected in the tree")
        for (a, b), s in self.adhesion.items():
            if s != frozenset(self.parts[a]) & frozenset(self.parts[b]):
                errs.append(f"adhesion of {a}-{b} is not the intersection of its parts")
            if len(s) > 2:
                errs.append(f"adhesion {sorted(s, key=vkey)} exceeds 2")
        for i in range(len(self.parts)):
            k = torso_kind(torso(self, i))
            if k is None:
                errs.append(f"torso {i} is neither 3-connected nor a cycle nor K2")
            elif k != self.kinds[i]:
                errs.append(f"torso {i} recorded as {self.kinds[i]} but is {k}")
        if len(self.parts) > 1:
            for i in range(len(self.parts)):
                if len(self.neighbours(i)) == 2 and self.kinds[i] == "K2":
                    errs.append(f"tree vertex {i} of degree 2 has a K2 torso")
            for a, b in self.tree_edges:
                s = self.adhesion[(a, b)]
                if self.kinds[a] == self.kinds[b] == "cycle" and not (len(s) == 2 and g.has_edge(*s)):
                    errs.append(f"adjacent cycle torsos {a}, {b} share a non-edge")
        counts = {}
        for s in self.adhesion.values():
            for v in s:
                counts[v] = counts.get(v, 0) + 1
        if any(c > len(self.tree_edges) for c in counts.values()):
            errs.append("a vertex lies in more adhesion sets than there are tree edges")
        return errs

    def to_text(self) -> str:
        lines = ["tutte-tree 1"]
        for i, p in enumerate(self.parts):
            lines.append(f"part {i} {self.kinds[i]}: {' '.join(map(str, p))}")
            virt = virtual_edges(self, i)
            if virt:
                lines.append("  virtual: " + " ".join(f"{a}-{b}" for a, b in virt))
        for a, b in self.tree_edges:
            lines.append(f"edge {a} {b}: {' '.join(map(str, sorted(self.adhesion[(a, b)], key=vkey)))}")
        return "\n".join(lines) + "\n"


def torso_kind(h: Graph) -> str | None:
    n, m = len(h.vertices), len(h.edges)
    if n == 2 and m == 1:
        return "K2"
    if n >= 3 and h.is_connected() and all(h.degree(v) == 2 for v in h.vertices):
        return "cycle"
    if n >= 4 and nx.node_connectivity(h.to_networkx()) >= 3:
        return "3-connected"
    return None


def torso(tt: TutteTree, t: int) -> Graph:
    """Part ``t`` with every edge of G inside it plus every adhesion pair inside it."""
    vs = set(tt.parts[t])
    es = [e for e in tt.graph.edges if e[0] in vs and e[1] in vs]
    es += [tuple(s) for s in tt.adhesion_sets() if len(s) == 2 and s <= vs]
    return Graph(vs, es)


def virtual_edges(tt: TutteTree, t: int) -> list:
    """Torso edges of part ``t`` that are not edges of G."""
    h = torso(tt, t)
    return [e for e in h.edges if not tt.graph.has_edge(*e)]


class _Skeletons:
    """Hopcroft-Tarjan style split components computed by brute force."""

    def __init__(self, g: Graph):
        self.next_id = len(g.edges)
        self.real = {i: e for i, e in enumerate(g.edges)}

    def new(self):
        self.next_id += 1
        return self.next_id - 1

    def split(self, skel: list) -> list:
        verts = sorted({x for _, u, v in skel for x in (u, v)}, key=vkey)
        if len(verts) == 2:
            return [("P", skel)]
        pairs = {}
        for e in skel:
            pairs.setdefault(frozenset(e[1:]), []).append(e)
        for s, es in sorted(pairs.items(), key=lambda kv: min(e[0] for e in kv[1])):
            if len(es) >= 2:
                vid = self.new()
                u, v = sorted(s, key=vkey)
                rest = [e for e in skel if e not in es]
                return self.split(es + [(vid, u, v)]) + self.split(rest + [(vid, u, v)])
        if len(skel) == 3 and len(verts) == 3:
            return [("S", skel)]
        for x, y in combinations(verts, 2):
            classes = self._classes(skel, x, y)
            big = [c for c in classes if not (len(c) == 1 and set(c[0][1:]) == {x, y})]
            if len(big) >= 2:
                first = min(big, key=lambda c: min(e[0] for e in c))
                rest = [e for e in skel if e not in first]
                vid = self.new()
                return self.split(first + [(vid, x, y)]) + self.split(rest + [(vid, x, y)])
        if all(sum(1 for e in skel if w in e[1:]) == 2 for w in verts):
            return [("S", skel)]
        return [("R", skel)]

    @staticmethod
    def _classes(skel, x, y):
        parent = list(range(len(skel)))

        def find(i):
            while parent[i] != i:
                parent[i] = parent[parent[i]]
                i = parent[i]
            return i

        at = {}
        for i, (_, u, v) in enumerate(skel):
            for w in (u, v):
                if w not in (x, y):
                    at.setdefault(w, []).append(i)
        for idx in at.values():
            for j in idx[1:]:
                parent[find(j)] = find(idx[0])
        cls = {}
        for i, e in enumerate(skel):
            cls.setdefault(find(i), []).append(e)
        return list(cls.values())


def tutte_decompose(g: Graph) -> TutteTree:
    """Normalised Tutte decomposition of a 2-connected graph."""
    if len(g.vertices) == 2 and len(g.edges) == 1:
        return TutteTree(g, [g.vertices], ["K2"], [], {})
    if len(g.vertices) < 3 or not g.is_biconnected():
        raise DecompositionError("Tutte decomposition needs a 2-connected graph")
    sk = _Skeletons(g)
    nodes = [[k, list(es)] for k, es in sk.split([(i, u, v) for i, (u, v) in sk.real.items()])]
    nreal = len(g.edges)

    # merge adjacent bonds and adjacent polygons
    changed = True
    while changed:
        changed = False
        where = {}
        for i, (k, es) in enumerate(nodes):
            for e in es:
                if e[0] >= nreal:
                    where.setdefault(e[0], []).append(i)
        for vid, (a, b) in sorted(where.items()):
            if nodes[a][0] == nodes[b][0] and nodes[a][0] in ("S", "P"):
                merged = [e for e in nodes[a][1] + nodes[b][1] if e[0] != vid]
                nodes[a] = [nodes[a][0], merged]
                nodes.pop(b)
                changed = True
                break

    # tree edges from shared virtual edges
    where = {}
    for i, (_, es) in enumerate(nodes):
        for e in es:
            if e[0] >= nreal:
                where.setdefault(e[0], []).append((i, frozenset(e[1:])))
    links = [(min(a, b), max(a, b), s) for (a, s), (b, _) in where.values()]

    # normalisation: drop bonds of tree degree two (they carry exactly one real edge)
    while True:
        deg = {}
        for a, b, _ in links:
            deg[a] = deg.get(a, 0) + 1
            deg[b] = deg.get(b, 0) + 1
        drop = next((i for i, (k, _) in enumerate(nodes) if k == "P" and deg.get(i) == 2), None)
        if drop is None:
            break
        (a1, b1, s), (a2, b2, _) = [l for l in links if drop in l[:2]]
        n1 = a1 if b1 == drop else b1
        n2 = a2 if b2 == drop else b2
        links = [l for l in links if drop not in l[:2]] + [(min(n1, n2), max(n1, n2), s)]
        nodes.pop(drop)
        links = [(a - (a > drop), b - (b > drop), s) for a, b, s in links]

    parts = [tuple(sorted({x for _, u, v in es for x in (u, v)}, key=vkey)) for _, es in nodes]
    order = sorted(range(len(parts)), key=lambda i: (len(parts[i]) == 2, [vkey(v) for v in parts[i]], nodes[i][0]))
    pos = {old: new for new, old in enumerate(order)}
    kind_name = {"R": "3-connected", "S": "cycle", "P": "K2"}
    parts = [parts[i] for i in order]
    kinds = [kind_name[nodes[i][0]] for i in order]
    tedges = sorted((min(pos[a], pos[b]), max(pos[a], pos[b])) for a, b, _ in links)
    adh = {(min(pos[a], pos[b]), max(pos[a], pos[b])): s for a, b, s in links}
    return TutteTree(g, parts, kinds, tedges, adh)


# ---- lifting and projecting generators ----------------------------------------------

def adhesion_paths(tt: TutteTree, group: AutomorphismGroup | None = None) -> dict:
    """P_xy for every ordered adhesion pair that is not an edge of G.

    Without a group: the lexicographically least shortest x-y path.  With a
    group: one such path per orbit of ordered pairs, carried to the others by
    the action.
    """
    g = tt.graph
    pairs = []
    for s in sorted(tt.adhesion_sets(), key=lambda s: sorted(vkey(v) for v in s)):
        if len(s) == 2 and not g.has_edge(*s):
            x, y = sorted(s, key=vkey)
            pairs += [(x, y), (y, x)]
    out = {}
    elems = group.elements() if group is not None else None
    for x, y in pairs:
        if (x, y) in out:
            continue
        p = g.shortest_path(x, y)
        if p is None:
            raise DecompositionError(f"no path between {x} and {y}")
        out[(x, y)] = p
        if elems is None:
            out.setdefault((y, x), tuple(reversed(p)))
            continue
        for a in elems:
            img = (a[x], a[y])
            if img in dict.fromkeys(pairs) and img not in out:
                out[img] = tuple(a[v] for v in p)
    return out


def lift_generators(tt: TutteTree, per_torso: dict, paths: dict | None = None) -> list:
    """Replace every virtual step x->y of the torso walks by P_xy."""
    g = tt.graph
    paths = adhesion_paths(tt) if paths is None else paths
    out = []
    for t in sorted(per_torso):
        for w in per_torso[t]:
            seq = [w.seq[0]]
            for a, b in zip(w.seq, w.seq[1:]):
                if g.has_edge(a, b):
                    seq.append(b)
                else:
                    p = paths.get((a, b))
                    if p is None:
                        raise DecompositionError(f"no path chosen for virtual edge {a}-{b}")
                    seq += list(p[1:])
            out.append(ClosedWalk(tuple(seq)))
    return out


def project_walk(tt: TutteTree, t: int, w: ClosedWalk) -> ClosedWalk | None:
    """The closed walk induced in the torso of ``t``; ``None`` when w misses the part."""
    vs = set(tt.parts[t])
    keep = [i for i, x in enumerate(w.seq[:-1]) if x in vs]
    if not keep:
        return None
    h = torso(tt, t)
    w = w.rotate(keep[0])
    seq = [x for x in w.seq if x in vs]
    out = [seq[0]]
    for x in seq[1:]:
        if x != out[-1]:
            if not h.has_edge(out[-1], x):
                raise DecompositionError(f"excursion {out[-1]}->{x} does not return through an adhesion set")
            out.append(x)
    if len(out) == 1:
        return ClosedWalk.empty(out[0])
    return reduce(ClosedWalk(tuple(out)))


def project_generators(tt: TutteTree, walks: Iterable) -> dict:
    walks = list(walks)
    out = {}
    for t in range(len(tt.parts)):
        ps = [project_walk(tt, t, w) for w in walks]
        out[t] = [p for p in ps if p is not None and not p.is_empty]
    return out


def generates_torsos(tt: TutteTree, per_torso: dict) -> dict:
    return {t: spans_cycle_lattice(torso(tt, t), per_torso.get(t, [])) for t in range(len(tt.parts))}


# ---- degree sequences ---------------------------------------------------------------

def _orbits(vertices, gens) -> list:
    parent = {v: v for v in vertices}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for p in gens:
        for v in vertices:
            a, b = find(v), find(p[v])
            if a != b:
                parent[b] = a
    cls = {}
    for v in vertices:
        cls.setdefault(find(v), []).append(v)
    return list(cls.values())


def degree_sequence(g: Graph, group) -> tuple:
    """Nonincreasing degrees of one representative per orbit."""
    gens = group.generators if isinstance(group, AutomorphismGroup) else list(group)
    return tuple(sorted((g.degree(o[0]) for o in _orbits(g.vertices, gens)), reverse=True))


def compare(a: Sequence[int], b: Sequence[int]) -> str:
    """The order of finite tuples: first difference decides, a proper prefix is smaller."""
    a, b = tuple(a), tuple(b)
    return "less" if a < b else "equal" if a == b else "greater"


@dataclass
class SplitPiece:
    graph: Graph
    stabilizer: list  # group elements mapping the piece onto itself
    sequence: tuple


def check_split_conditions(g: Graph, elems: list, S) -> str | None:
    """Name of the first failing condition among (i)-(iii), or ``None``."""
    S = set(S)
    rest = g.subgraph([v for v in g.vertices if v not in S])
    comps = [set(c) for c in rest.components()] if rest.vertices else []
    if len(comps) < 2:
        return "(i) G - S is not disconnected"
    for a in elems:
        img = {a[v] for v in S}
        if sum(1 for c in comps if c & img) > 1:
            return "(ii) some image of S meets two components of G - S"
    for v in S:
        if all(w in S for w in g.adj[v]):
            return f"(iii) every neighbour of {v} lies in S"
    return None


def split_along(g: Graph, group, S) -> list:
    """Maximal subgraphs not disconnected by any image of S, with their stabilisers.

    Each returned piece is asserted to have a strictly smaller degree sequence
    of orbits than ``(g, group)``.
    """
    elems = group.elements() if isinstance(group, AutomorphismGroup) else list(group)
    if not elems:
        elems = [{v: v for v in g.vertices}]
    why = check_split_conditions(g, elems, S)
    if why:
        raise DecompositionError(f"split condition {why}")
    images = {frozenset(a[v] for v in S) for a in elems}
    comp_of = []
    for T in sorted(images, key=lambda s: sorted(vkey(v) for v in s)):
        rest = g.subgraph([v for v in g.vertices if v not in T])
        lab = {}
        for k, c in enumerate(rest.components()):
            for v in c:
                lab[v] = k
        comp_of.append(lab)
    compat = nx.Graph()
    compat.add_nodes_from(g.vertices)
    for x, y in combinations(g.vertices, 2):
        if all(x not in lab or y not in lab or lab[x] == lab[y] for lab in comp_of):
            compat.add_edge(x, y)
    pieces = []
    for clique in sorted((sorted(c, key=vkey) for c in nx.find_cliques(compat)), key=lambda c: [vkey(v) for v in c]):
        U = set(clique)
        H = g.subgraph(U)
        if len(H.vertices) < 2 or not H.is_connected():
            continue
        if any(not H.subgraph([v for v in H.vertices if v not in T]).is_connected()
               for T in images if H.vertices and set(H.vertices) - T):
            continue
        stab = [a for a in elems if {a[v] for v in U} == U]
        seq = degree_sequence(H, [{v: a[v] for v in U} for a in stab])
        pieces.append(SplitPiece(H, stab, seq))
    base = degree_sequence(g, elems)
    for p in pieces:
        if compare(p.sequence, base) != "less":
            raise AssertionError(f"piece {p.graph.vertices} has sequence {p.sequence}, not below {base}")
    return pieces


def find_split_set(g: Graph, elems: list, max_size: int = 3):
    """First vertex set (by size, then vertex order) meeting the split conditions."""
    for k in range(1, max_size + 1):
        for S in combinations(g.vertices, k):
            if check_split_conditions(g, elems, S) is None:
                return S
    return None


def split_chains(g: Graph, group, max_size: int = 3, depth_cap: int = 64) -> list:
    """Degree-sequence chains produced by splitting recursively until no split applies."""
    elems = group.elements() if isinstance(group, AutomorphismGroup) else list(group)
    start = degree_sequence(g, elems)
    chains = []

    def go(h, els, chain):
        if len(chain) > depth_cap:
            raise RuntimeError("split recursion exceeded its depth cap")
        S = find_split_set(h, els, max_size)
        if S is None:
            chains.append(chain)
            return
        for p in split_along(h, els, S):
            go(p.graph, [{v: a[v] for v in p.graph.vertices} for a in p.stabilizer], chain + [p.sequence])

    go(g, elems, [start])
    return chains
