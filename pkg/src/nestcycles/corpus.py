"""Named graphs and maps used in examples, tests and the CLI."""

from __future__ import annotations

import networkx as nx

from .planar_map import Graph, PlanarMap, embed_or_raise


def k4() -> Graph:
    return Graph(range(1, 5), [(a, b) for a in range(1, 5) for b in range(a + 1, 5)])


def cube() -> Graph:
    return Graph.from_networkx(nx.convert_node_labels_to_integers(nx.hypercube_graph(3), 1))


def octahedron() -> Graph:
    return Graph.from_networkx(nx.convert_node_labels_to_integers(nx.octahedral_graph(), 1))


def dodecahedron() -> Graph:
    return Graph.from_networkx(nx.convert_node_labels_to_integers(nx.dodecahedral_graph(), 1))


def icosahedron() -> Graph:
    return Graph.from_networkx(nx.convert_node_labels_to_integers(nx.icosahedral_graph(), 1))


def cycle(n: int) -> Graph:
    return Graph(range(1, n + 1), [(i, i % n + 1) for i in range(1, n + 1)])


def wheel(n: int) -> Graph:
    """Hub 0 joined to the cycle 1..n."""
    return Graph(range(n + 1), [(i, i % n + 1) for i in range(1, n + 1)] + [(0, i) for i in range(1, n + 1)])


def prism(n: int) -> Graph:
    return Graph.from_networkx(nx.circular_ladder_graph(n))


def grid(r: int, c: int) -> Graph:
    g = nx.grid_2d_graph(r, c)
    return Graph.from_networkx(nx.relabel_nodes(g, {v: v[0] * c + v[1] for v in g}))


def theta(k: int = 4) -> Graph:
    """Two vertices u, w joined by k internally disjoint paths of length 2."""
    mids = "abcdefghijklmnopqrst"[:k]
    return Graph(["u", "w", *mids], [e for x in mids for e in (("u", x), (x, "w"))])


def theta4_map() -> PlanarMap:
    """theta_4 with spin (a, b, c, d) at u."""
    g = theta(4)
    spin = {"u": ("a", "b", "c", "d"), "w": ("d", "c", "b", "a")}
    for x in "abcd":
        spin[x] = ("u", "w")
    return PlanarMap(g, spin)


NAMED = {
    "K4": k4,
    "cube": cube,
    "octahedron": octahedron,
    "dodecahedron": dodecahedron,
    "icosahedron": icosahedron,
    "theta4": lambda: theta(4),
    "C6": lambda: cycle(6),
    "W5": lambda: wheel(5),
    "prism5": lambda: prism(5),
    "grid3x3": lambda: grid(3, 3),
    "grid3x4": lambda: grid(3, 4),
}


def named_map(name: str) -> PlanarMap:
    if name == "theta4":
        return theta4_map()
    return embed_or_raise(NAMED[name]())
