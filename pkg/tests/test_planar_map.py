import random

import networkx as nx
import pytest
from hypothesis import given, settings, strategies as st

from nestcycles.corpus import NAMED, cube, cycle, k4, named_map
from nestcycles.planar_map import (EmbeddingError, Graph, GraphError, NonPlanarWitness, PlanarMap,
                                   embed, spin_contains, trace_faces)
from randgraphs import random_biconnected_planar, random_triangulation


def euler_ok(m: PlanarMap) -> bool:
    g = m.graph
    return len(g.vertices) - len(g.edges) + len(m.faces) == 2


def face_sizes(m):
    return sorted(len(f) - 1 for f in m.faces)


def test_k4_has_four_triangles():
    m = embed(k4())
    assert isinstance(m, PlanarMap)
    assert face_sizes(m) == [3, 3, 3, 3]


def test_k5_witness_covers_all_edges():
    w = embed(Graph.from_networkx(nx.complete_graph(5)))
    assert isinstance(w, NonPlanarWitness)
    assert len(w.edges) == 10


def test_k33_is_rejected():
    w = embed(Graph.from_networkx(nx.complete_bipartite_graph(3, 3)))
    assert isinstance(w, NonPlanarWitness)
    # the witness itself must be non-planar
    assert not nx.check_planarity(nx.Graph(list(w.edges)))[0]


def test_cube_faces():
    assert face_sizes(embed(cube())) == [4] * 6


def test_theta_faces(theta):
    assert face_sizes(theta) == [4, 4, 4, 4]
    assert euler_ok(theta)


def test_c6_two_faces():
    assert face_sizes(embed(cycle(6))) == [6, 6]


def test_every_dart_on_one_face():
    m = named_map("dodecahedron")
    seen = [d for f in trace_faces(m) for d in zip(f, f[1:])]
    assert len(seen) == len(set(seen)) == 2 * len(m.graph.edges)


def test_malformed_spin_is_rejected():
    g = k4()
    spin = {1: (2, 3), 2: (1, 3, 4), 3: (1, 2, 4), 4: (1, 2, 3)}
    with pytest.raises((EmbeddingError, ValueError)):
        PlanarMap(g, spin)


def test_graph_rejects_loops():
    with pytest.raises(GraphError):
        Graph([1, 2], [(1, 1)])


def test_k4_regions_of_outer_triangle(k4map):
    outer = k4map.faces[k4map.outer][:-1]
    rp = k4map.cycle_regions(outer)
    inside = rp.side0_vertices
    (apex,) = set(k4map.graph.vertices) - set(outer)
    assert inside == {apex}
    assert rp.side0_edges == {frozenset((apex, x)) for x in outer}
    assert not rp.side1_vertices and not rp.side1_edges


def test_theta_regions(theta):
    rp = theta.cycle_regions(("u", "a", "w", "c"))
    sides = {rp.side0_vertices, rp.side1_vertices}
    assert sides == {frozenset("b"), frozenset("d")}
    assert theta.outer in rp.side1_faces


def test_bounded_face_region_is_itself():
    m = named_map("prism5")
    for i in range(len(m.faces)):
        if i == m.outer:
            continue
        rp = m.cycle_regions(m.faces[i][:-1])
        assert rp.side0_faces == {i}


def test_region_partition_covers_everything():
    m = named_map("grid3x4")
    g = m.graph
    for f in m.faces:
        rp = m.cycle_regions(f[:-1])
        vs = [rp.side0_vertices, rp.side1_vertices, rp.on_vertices]
        assert sum(map(len, vs)) == len(g.vertices) and frozenset().union(*vs) == set(g.vertices)
        es = [rp.side0_edges, rp.side1_edges, rp.on_edges]
        assert sum(map(len, es)) == len(g.edges)


def test_regions_reject_non_cycles(k4map):
    with pytest.raises(ValueError):
        k4map.cycle_regions((1, 2, 1, 3))


def test_spin_contains_theta(theta):
    ua, ub, uc, ud = (("u", x) for x in "abcd")
    assert spin_contains(theta, "u", ua, ub, uc)
    assert not spin_contains(theta, "u", ua, uc, ub)
    assert spin_contains(theta, "u", ub, uc, ua)
    assert spin_contains(theta, "u", ud, ua, ub)


def test_spin_contains_cyclic_invariance(k4map):
    for v in k4map.graph.vertices:
        e = [(v, x) for x in k4map.graph.adj[v]]
        for perm in ((0, 1, 2), (0, 2, 1)):
            a, b, c = (e[i] for i in perm)
            assert spin_contains(k4map, v, a, b, c) == spin_contains(k4map, v, b, c, a)


def test_spin_contains_bad_edge(theta):
    with pytest.raises(ValueError):
        spin_contains(theta, "u", ("u", "a"), ("u", "b"), ("w", "c"))


def test_mirror_keeps_sides():
    m = named_map("octahedron")
    mm = m.mirror()
    assert euler_ok(mm)
    outer_cycle = set(m.faces[m.outer][:-1])
    for f in m.faces:
        c = f[:-1]
        a, b = m.cycle_regions(c), mm.cycle_regions(c)
        assert set(mm.faces[mm.outer][:-1]) == outer_cycle
        assert (a.side0_vertices, a.side1_vertices) == (b.side0_vertices, b.side1_vertices)


def test_regions_deterministic():
    m = named_map("icosahedron")
    c = m.faces[3][:-1]
    assert m.cycle_regions(c) == m.cycle_regions(c)
    assert m.cycle_regions(c) == named_map("icosahedron").cycle_regions(c)


@pytest.mark.parametrize("name", sorted(NAMED))
def test_corpus_euler(name):
    m = named_map(name)
    assert euler_ok(m)
    assert sum(len(f) - 1 for f in m.faces) == 2 * len(m.graph.edges)


def test_embed_empty_graph():
    m = embed(Graph([], []))
    assert isinstance(m, PlanarMap)
    assert m.faces == []


def test_outer_face_is_longest_then_smallest():
    m = named_map("prism5")
    lens = [len(f) for f in m.faces]
    assert len(m.faces[m.outer]) == max(lens)


@settings(max_examples=40, deadline=None)
@given(n=st.integers(4, 14), seed=st.integers(0, 10**6))
def test_random_triangulations_embed(n, seed):
    g = random_triangulation(n, random.Random(seed))
    assert len(g.edges) == 3 * n - 6
    m = embed(g)
    assert isinstance(m, PlanarMap) and euler_ok(m)
    assert face_sizes(m) == [3] * (2 * n - 4)


@settings(max_examples=40, deadline=None)
@given(n=st.integers(5, 12), seed=st.integers(0, 10**6))
def test_random_sparse_maps_trace(n, seed):
    g = random_biconnected_planar(n, random.Random(seed))
    m = embed(g)
    assert euler_ok(m)
    darts = [d for f in m.faces for d in zip(f, f[1:])]
    assert len(darts) == len(set(darts)) == 2 * len(g.edges)
