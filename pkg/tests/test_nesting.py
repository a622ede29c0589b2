import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

from nestcycles.corpus import named_map
from nestcycles.groups import automorphisms, map_walk
from nestcycles.nesting import crossing, d_paths, mu, mu_set, n_paths, nested_cycles
from nestcycles.planar_map import embed
from nestcycles.walks import ClosedWalk, WalkClass, all_cycles, shortcut_free_cycles
from randgraphs import random_triangulation

W = ClosedWalk.of
C_ac, C_bd = W("u", "a", "w", "c"), W("u", "b", "w", "d")
C_ab, C_cd = W("u", "a", "w", "b"), W("u", "c", "w", "d")


def theta_cycles():
    return [W("u", x, "w", y) for x, y in itertools.combinations("abcd", 2)]


def test_theta_crossing_witness(theta):
    wit = crossing(theta, C_ac, C_bd)
    assert wit is not None and wit.check(theta)
    assert wit.case in ("i", "ii")
    assert crossing(theta, C_ab, C_cd) is None


def test_k4_faces_do_not_cross(k4map):
    faces = [ClosedWalk(tuple(f)) for f in k4map.faces]
    for a, b in itertools.combinations(faces, 2):
        assert crossing(k4map, a, b) is None
        assert nested_cycles(k4map, a, b)


def test_nested_examples(theta):
    assert not nested_cycles(theta, C_ac, C_bd)
    assert nested_cycles(theta, C_ab, C_cd)
    assert nested_cycles(theta, C_ac, C_ac)


def test_d_paths(theta):
    assert d_paths(C_ac, C_bd) == [("u", "a", "w"), ("w", "c", "u")]
    assert d_paths(C_ac, C_ac) == []
    assert d_paths(W(1, 2, 4), W(1, 3, 4)) in ([(4, 2, 1)], [(1, 2, 4)])
    assert d_paths(W(1, 2, 3), W(4, 5, 6)) == []


def test_mu_examples(theta):
    E = theta_cycles()
    assert mu(theta, E, C_ac) == 1
    assert mu(theta, E, C_ab) == 0
    assert mu(theta, [], C_ac) == 0
    assert mu_set(theta, E, E) == 0
    assert mu_set(theta, E, [C_ac, C_bd]) == 1
    assert mu_set(theta, E, []) is None


def test_mu_ignores_orientation_duplicates(theta):
    E = theta_cycles()
    assert mu(theta, E + [e.inverse() for e in E], C_ac) == 1


def crossing_pairs(m, cycles):
    for a, b in itertools.combinations(cycles, 2):
        yield a, b, crossing(m, a, b) is not None


@pytest.mark.parametrize("name", ["K4", "cube", "octahedron", "W5", "prism5", "grid3x3", "theta4"])
def test_symmetry_and_equivalence(name):
    m = named_map(name)
    cyc = [c.rep for c in {WalkClass.of(x) for x in all_cycles(m.graph)}]
    cyc.sort(key=lambda c: c.key())
    for a, b, cr in crossing_pairs(m, cyc):
        assert cr == (crossing(m, b, a) is not None)
        assert cr == (not nested_cycles(m, a, b))


@pytest.mark.parametrize("name", ["octahedron", "prism5", "W5"])
def test_n_symmetric_on_crossing_shortcut_free(name):
    m = named_map(name)
    cyc = [c for c in shortcut_free_cycles(m.graph)]
    for a, b, cr in crossing_pairs(m, cyc):
        if cr:
            assert n_paths(a, b) == n_paths(b, a)


def test_mu_invariant_under_mirror_and_outer_choice():
    m = named_map("octahedron")
    E = shortcut_free_cycles(m.graph, 4)
    base = [mu(m, E, c) for c in E]
    assert [mu(m.mirror(), E, c) for c in E] == base
    for f in range(len(m.faces)):
        assert [mu(m.with_outer(f), E, c) for c in E] == base


@pytest.mark.parametrize("name", ["octahedron", "cube", "prism5"])
def test_mu_automorphism_invariant(name):
    m = named_map(name)
    E = shortcut_free_cycles(m.graph)
    grp = automorphisms(m.graph)
    for p in grp.generators:
        Ea = [map_walk(p, e) for e in E]
        for c in E[:20]:
            assert mu(m, E, c) == mu(m, Ea, map_walk(p, c))


@settings(max_examples=25, deadline=None)
@given(n=st.integers(5, 9), seed=st.integers(0, 10**6))
def test_equivalence_on_random_triangulations(n, seed):
    m = embed(random_triangulation(n, random.Random(seed)))
    cyc = [c.rep for c in {WalkClass.of(x) for x in all_cycles(m.graph, 6)}]
    rng = random.Random(seed)
    pairs = list(itertools.combinations(cyc, 2))
    for a, b in rng.sample(pairs, min(200, len(pairs))):
        cr = crossing(m, a, b) is not None
        assert cr == (crossing(m, b, a) is not None) == (not nested_cycles(m, a, b))
