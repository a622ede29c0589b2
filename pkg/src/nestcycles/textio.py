"""Plain-text formats for graphs and maps.

A graph file has one line per vertex, ``v: n1 n2 ...``.  When the neighbour
lists are spin orders the file also describes a map; an optional
``outer: v1 v2 ... vk`` line fixes the outer face.  ``#`` starts a comment.
"""

from __future__ import annotations

import hashlib

from .planar_map import EmbeddingError, Graph, PlanarMap, embed_or_raise, vkey


class FormatError(ValueError):
    pass


def parse_label(tok: str):
    return int(tok) if tok.lstrip("-").isdigit() else tok


def parse_graph_text(text: str):
    """Return ``(graph, rotation, outer)``; rotation maps vertices to listed orders."""
    order, edges, outer = {}, set(), None
    for ln, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        head, sep, rest = line.partition(":")
        if not sep:
            raise FormatError(f"line {ln}: expected 'vertex: neighbours'")
        head = head.strip()
        toks = [parse_label(t) for t in rest.split()]
        if head == "outer":
            outer = tuple(toks)
            continue
        v = parse_label(head)
        if v in order:
            raise FormatError(f"line {ln}: vertex {v!r} listed twice")
        if v in toks or len(set(toks)) != len(toks):
            raise FormatError(f"line {ln}: loops and repeated neighbours are not allowed")
        order[v] = tuple(toks)
        for w in toks:
            edges.add(frozenset((v, w)))
    verts = set(order) | {x for e in edges for x in e}
    g = Graph(verts, [tuple(sorted(e, key=vkey)) for e in edges])
    return g, order, outer


def _rotation_is_spin(g: Graph, order: dict) -> bool:
    return all(set(order.get(v, ())) == set(g.adj[v]) for v in g.vertices)


def map_from_text(text: str, spin: str = "auto") -> PlanarMap:
    """Build a map; ``spin`` is ``given``, ``auto`` (given when valid) or ``compute``."""
    g, order, outer = parse_graph_text(text)
    m = None
    if spin in ("given", "auto") and _rotation_is_spin(g, order):
        try:
            m = PlanarMap(g, {v: order[v] for v in g.vertices})
        except (EmbeddingError, ValueError):
            if spin == "given":
                raise
    elif spin == "given":
        raise FormatError("neighbour lists do not form a rotation system")
    if m is None:
        m = embed_or_raise(g)
    if outer is not None:
        m = m.with_outer(find_face(m, outer))
    return m


def find_face(m: PlanarMap, cyc) -> int:
    cyc = tuple(cyc)
    n = len(cyc)
    for i, f in enumerate(m.faces):
        fv = f[:-1]
        if len(fv) != n:
            continue
        for seq in (fv, tuple(reversed(fv))):
            if any(seq[k:] + seq[:k] == cyc for k in range(n)):
                return i
    raise FormatError(f"outer {cyc} is not a face of the embedding")


def graph_to_text(g: Graph) -> str:
    return "".join(f"{v}: {' '.join(map(str, g.adj[v]))}\n" for v in g.vertices)


def map_to_text(m: PlanarMap) -> str:
    lines = [f"{v}: {' '.join(map(str, m.spin[v]))}" for v in m.graph.vertices]
    lines.append("outer: " + " ".join(map(str, m.faces[m.outer][:-1])))
    return "\n".join(lines) + "\n"


def graph_hash(g: Graph) -> str:
    return hashlib.sha256(graph_to_text(g).encode()).hexdigest()
