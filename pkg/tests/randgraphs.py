"""Seeded random planar graphs for the test suite."""

import random

import networkx as nx

from nestcycles.planar_map import Graph


def random_triangulation(n: int, rng: random.Random, flips: int = 30) -> Graph:
    """Stacked triangulation on n vertices followed by random edge flips."""
    faces = [(0, 1, 2), (0, 2, 1)]
    edges = {frozenset(e) for e in ((0, 1), (1, 2), (0, 2))}
    for v in range(3, n):
        a, b, c = faces.pop(rng.randrange(len(faces)))
        faces += [(a, b, v), (b, c, v), (c, a, v)]
        edges |= {frozenset((a, v)), frozenset((b, v)), frozenset((c, v))}
    for _ in range(flips):
        e = rng.choice(sorted(tuple(sorted(x)) for x in edges))
        a, b = e
        inc = [f for f in faces if a in f and b in f]
        if len(inc) != 2:
            continue
        c = next(x for x in inc[0] if x not in e)
        d = next(x for x in inc[1] if x not in e)
        if c == d or frozenset((c, d)) in edges:
            continue
        deg = lambda x: sum(1 for y in edges if x in y)
        if deg(a) <= 3 or deg(b) <= 3:
            continue
        # faces are kept as vertex triples; only their vertex sets matter here
        faces.remove(inc[0])
        faces.remove(inc[1])
        faces += [(a, c, d), (b, c, d)]
        edges.discard(frozenset(e))
        edges.add(frozenset((c, d)))
    return Graph(range(n), [tuple(x) for x in edges])


def random_biconnected_planar(n: int, rng: random.Random, drop: float = 0.35, subdivide: int = 2) -> Graph:
    """Delete random edges from a triangulation keeping 2-connectivity, then subdivide."""
    g = random_triangulation(max(n - subdivide, 4), rng).to_networkx()
    es = list(g.edges)
    rng.shuffle(es)
    for e in es:
        if rng.random() < drop:
            g.remove_edge(*e)
            if not nx.is_biconnected(g):
                g.add_edge(*e)
    nxt = max(g.nodes) + 1
    for _ in range(min(subdivide, n - len(g))):
        u, v = rng.choice(sorted(g.edges))
        g.remove_edge(u, v)
        g.add_edge(u, nxt)
        g.add_edge(nxt, v)
        nxt += 1
    return Graph.from_networkx(g)
