import itertools

import pytest
from hypothesis import given, settings, strategies as st

from nestcycles.canonical import build_canonical
from nestcycles.corpus import named_map
from nestcycles.groups import (BoundaryError, Pi1Element, Presentation, RewritingSystem, automorphisms,
                               based_at_identity, cayley_ball, cyclic_reduce_pi, fs_act, genpi,
                               orbit_partition_pi, unit_squares, verify_genpi)
from nestcycles.homology import h1_rank
from nestcycles.walks import ClosedWalk, WalkClass, reduce

GRID = Presentation(("a", "b"), ("abAB",))
C5 = Presentation(("a",), ("aaaaa",))


def brute_aut_count(g) -> int:
    vs = list(g.vertices)
    es = {frozenset(e) for e in g.edges}
    n = 0
    for perm in itertools.permutations(vs):
        p = dict(zip(vs, perm))
        if all(frozenset((p[u], p[v])) in es for u, v in g.edges):
            n += 1
    return n


@pytest.mark.parametrize("name,order", [("K4", 24), ("theta4", 48), ("C6", 12), ("cube", 48)])
def test_automorphism_orders_bruteforce(name, order):
    g = named_map(name).graph
    grp = automorphisms(g)
    assert grp.order == order == brute_aut_count(g)
    assert grp.is_valid()
    assert len(grp.elements()) == order


@pytest.mark.parametrize("name,order", [("octahedron", 48), ("dodecahedron", 120), ("icosahedron", 120)])
def test_automorphism_orders_platonic(name, order):
    grp = automorphisms(named_map(name).graph)
    assert grp.order == order and grp.is_valid()


def test_orbits():
    grp = automorphisms(named_map("theta4").graph)
    assert sorted(sorted(o) for o in grp.orbits) == [["a", "b", "c", "d"], ["u", "w"]]


# ---- rewriting and balls ---------------------------------------------------------------

def exponent_sums(w: str) -> tuple:
    return (w.count("a") - w.count("A"), w.count("b") - w.count("B"))


@settings(max_examples=300)
@given(st.text(alphabet="aAbB", max_size=12), st.text(alphabet="aAbB", max_size=12))
def test_grid_normal_forms(u, v):
    rws = RewritingSystem(GRID)
    same = rws.normal_form(u) == rws.normal_form(v)
    assert same == (exponent_sums(u) == exponent_sums(v))


@settings(max_examples=200)
@given(st.text(alphabet="aA", max_size=15), st.text(alphabet="aA", max_size=15))
def test_cyclic_normal_forms(u, v):
    rws = RewritingSystem(C5)
    same = rws.normal_form(u) == rws.normal_form(v)
    assert same == ((u.count("a") - u.count("A") - v.count("a") + v.count("A")) % 5 == 0)


@pytest.mark.parametrize("r", [1, 2, 3, 4])
def test_grid_ball_counts(r):
    b = cayley_ball(GRID, r)
    assert len(b.graph.vertices) == 2 * r * r + 2 * r + 1
    assert len(b.graph.edges) == 4 * r * r
    assert len(b.interior) == 2 * (r - 1) ** 2 + 2 * (r - 1) + 1


def test_cyclic_ball_is_five_cycle():
    b = cayley_ball(C5, 3)
    g = b.graph
    assert len(g.vertices) == 5 and len(g.edges) == 5
    assert all(g.degree(v) == 2 for v in g.vertices)


def test_ball_vertex_cap():
    with pytest.raises(RuntimeError):
        cayley_ball(GRID, 10, vertex_cap=50)


def test_presentation_text_roundtrip():
    assert Presentation.parse(GRID.to_text()) == GRID
    with pytest.raises(ValueError):
        Presentation(("a",), ("aA",))


# ---- the F_S action ------------------------------------------------------------------

def square_at_identity(ball):
    return ClosedWalk(ball.path("abAB"))


def test_fs_act_identity_and_translation():
    b = cayley_ball(GRID, 3)
    sq = square_at_identity(b)
    assert fs_act(b, "", sq) == sq
    moved = fs_act(b, "a", sq)
    assert moved.seq[:2] == ("1", "a") and moved.seq[-2:] == ("a", "1")
    assert WalkClass.of(reduce(ClosedWalk(moved.seq[1:-1]))) == WalkClass.of(ClosedWalk(b.path("abAB", "a")))


@settings(max_examples=100, deadline=None)
@given(st.text(alphabet="aAbB", max_size=2), st.text(alphabet="aAbB", max_size=2))
def test_fs_action_law(w1, w2):
    b = cayley_ball(GRID, 4)
    sq = square_at_identity(b)
    try:
        inner = fs_act(b, w2, sq)
        lhs = fs_act(b, w1 + w2, sq)
        rhs = fs_act(b, w1, inner)
    except BoundaryError:
        return
    assert reduce(lhs) == reduce(rhs)


def test_fs_act_boundary():
    b = cayley_ball(GRID, 2)
    with pytest.raises(BoundaryError):
        fs_act(b, "aa", square_at_identity(b))


# ---- pi_1 generation --------------------------------------------------------------------

def test_genpi_k4():
    m = named_map("K4")
    gs = build_canonical(m)
    els = genpi(m, [c.rep for c in gs.elements], 1)
    rep = verify_genpi(m.graph, els, 1)
    assert rep.rank == rep.abelian_rank == 3
    assert rep.generates
    assert {cyclic_reduce_pi(e) for e in els} == set(gs.elements)


def test_genpi_c6_single_chord():
    m = named_map("C6")
    c = ClosedWalk(tuple(m.faces[0]))
    els = genpi(m, [c, c.inverse()], c.base)
    assert sorted(e.word for e in els) == [(-1,), (1,)]


def test_genpi_needs_inverses(k4map):
    with pytest.raises(ValueError):
        genpi(k4map, [ClosedWalk.of(1, 2, 3)], 1)


def test_cyclic_reduce_pi_examples():
    assert cyclic_reduce_pi(Pi1Element((), ClosedWalk.empty(1))) is None
    conj = ClosedWalk((4, 1, 2, 3, 1, 4))
    assert cyclic_reduce_pi(Pi1Element((1,), conj)) == WalkClass.of(ClosedWalk.of(1, 2, 3))


@pytest.mark.parametrize("r", [2, 3, 4])
def test_genpi_grid_balls(r):
    b = cayley_ball(GRID, r)
    sq = unit_squares(b, "abAB", interior_only=False)
    V = sq + [s.inverse() for s in sq]
    els = genpi(b.graph, V, "1")
    rep = verify_genpi(b.graph, els, "1")
    assert rep.abelian_rank == h1_rank(b.graph) == len(b.graph.edges) - len(b.graph.vertices) + 1
    assert rep.generates


def test_orbits_grid_r3():
    b = cayley_ball(GRID, 3)
    seeds = [based_at_identity(b, s) for s in unit_squares(b, "abAB")]
    rep = orbit_partition_pi(b, seeds)
    assert len(seeds) == 4 and rep.count == 1


def test_orbits_cyclic_group():
    b = cayley_ball(C5, 3)
    seed = ClosedWalk(b.path("aaaaa"))
    shifted = based_at_identity(b, ClosedWalk(b.path("aaaaa", "a")))
    assert orbit_partition_pi(b, [seed, shifted]).count == 1
    assert orbit_partition_pi(b, []).count == 0


def test_orbits_never_merge_distinct_relators():
    # squares and their reverses spell different relators and stay apart
    b = cayley_ball(GRID, 3)
    sq = ClosedWalk(b.path("abAB"))
    rev = ClosedWalk(b.path("baBA"))
    rep = orbit_partition_pi(b, [sq, rev], budget=2000)
    assert rep.count == 2


def test_genpi_words_are_reduced():
    m = named_map("cube")
    gs = build_canonical(m)
    base = m.graph.vertices[0]
    for e in genpi(m, [c.rep for c in gs.elements], base):
        assert all(x != -y for x, y in zip(e.word, e.word[1:]))
