import math

import networkx as nx
import pytest
from hypothesis import given, settings, strategies as st
from sympy import Matrix, ZZ
from sympy.matrices.normalforms import invariant_factors as sympy_invariants

from nestcycles.corpus import NAMED, named_map
from nestcycles.homology import (boundary_torsion_free, cycle_space_rank_F2, det, h1_rank, is_generated_F2,
                                 is_generated_Z, matmul, rank_F2, snf, walk_to_chain)
from nestcycles.membership import generated_by
from nestcycles.planar_map import Graph
from nestcycles.walks import ClosedWalk

W = ClosedWalk.of


def lattice_contains(vectors, target) -> bool:
    """Oracle via sympy: t lies in L iff adding it keeps rank and the product of invariant factors."""
    if not vectors:
        return not any(target)
    base = Matrix(vectors)
    ext = Matrix(list(vectors) + [list(target)])
    if base.rank() != ext.rank():
        return False
    def prod(fs):
        return math.prod(int(x) for x in fs if x)
    return prod(sympy_invariants(base, domain=ZZ)) == prod(sympy_invariants(ext, domain=ZZ))


def test_snf_examples():
    d, u, v = snf([[2, 4], [6, 8]])
    assert d == [[2, 0], [0, 4]]
    assert matmul(matmul(u, [[2, 4], [6, 8]]), v) == d
    assert snf([[1, 0, 0], [0, 1, 0], [0, 0, 1]])[0] == [[1, 0, 0], [0, 1, 0], [0, 0, 1]]
    assert snf([[0, 0], [0, 0]])[0] == [[0, 0], [0, 0]]


matrices = st.integers(1, 4).flatmap(
    lambda r: st.integers(1, 4).flatmap(
        lambda c: st.lists(st.lists(st.integers(-6, 6), min_size=c, max_size=c), min_size=r, max_size=r)))


@settings(max_examples=200, deadline=None)
@given(matrices)
def test_snf_against_sympy(a):
    d, u, v = snf(a)
    assert matmul(matmul(u, a), v) == d
    assert abs(det(u)) == 1 and abs(det(v)) == 1
    diag = [d[i][i] for i in range(min(len(d), len(d[0])))]
    assert all(d[i][j] == 0 for i in range(len(d)) for j in range(len(d[0])) if i != j)
    nz = [x for x in diag if x]
    assert all(x > 0 for x in nz)
    assert all(nz[k + 1] % nz[k] == 0 for k in range(len(nz) - 1))
    assert nz == [int(x) for x in sympy_invariants(Matrix(a), domain=ZZ) if x]


@settings(max_examples=200, deadline=None)
@given(matrices, st.lists(st.integers(-6, 6), min_size=4, max_size=4), st.booleans())
def test_lattice_membership_against_sympy(vs, t, combine):
    n = len(vs[0])
    if combine:
        coeffs = t[: len(vs)] + [0] * max(0, len(vs) - len(t))
        target = [sum(c * v[k] for c, v in zip(coeffs, vs)) for k in range(n)]
    else:
        target = t[:n] + [0] * max(0, n - len(t))
    verdict = is_generated_Z(target, vs)
    assert verdict.member == lattice_contains(vs, target)
    assert verdict.check(target, vs)
    if combine:
        assert verdict.member


def test_theta_chain_sign_convention(theta):
    g = theta.graph
    z = walk_to_chain(g, W("u", "a", "w", "b"))
    coeff = dict(zip(g.edges, z))
    assert coeff[("a", "u")] == -1 and coeff[("a", "w")] == 1
    assert coeff[("b", "w")] == -1 and coeff[("b", "u")] == 1
    assert sum(map(abs, z)) == 4


def test_chain_spike_and_inverse(theta):
    g = theta.graph
    assert not any(walk_to_chain(g, W("u", "a")))
    w = W("u", "a", "w", "c")
    assert walk_to_chain(g, w.inverse()) == tuple(-x for x in walk_to_chain(g, w))


def test_k4_hamiltonian_in_face_lattice(k4map):
    g = k4map.graph
    faces = [walk_to_chain(g, ClosedWalk(tuple(f))) for i, f in enumerate(k4map.faces) if i != k4map.outer]
    v = is_generated_Z(walk_to_chain(g, W(1, 2, 4, 3)), faces)
    assert v.member and set(v.coefficients) <= {-1, 0, 1}


def test_theta_not_in_lattice(theta):
    g = theta.graph
    v = is_generated_Z(walk_to_chain(g, W("u", "a", "w", "b")), [walk_to_chain(g, W("u", "c", "w", "d"))])
    assert not v.member and v.check(walk_to_chain(g, W("u", "a", "w", "b")), [walk_to_chain(g, W("u", "c", "w", "d"))])


def test_zero_vector_generated_by_nothing():
    v = is_generated_Z([0, 0, 0], [])
    assert v.member and v.coefficients == ()


@pytest.mark.parametrize("name", sorted(NAMED))
def test_ranks_and_torsion(name):
    g = named_map(name).graph
    expect = len(g.edges) - len(g.vertices) + 1
    assert h1_rank(g) == cycle_space_rank_F2(g) == expect
    assert boundary_torsion_free(g)
    assert expect == len(nx.cycle_basis(g.to_networkx()))


def test_ranks_small():
    tree = Graph(range(5), [(0, 1), (1, 2), (1, 3), (3, 4)])
    assert h1_rank(tree) == 0
    assert h1_rank(named_map("K4").graph) == 3
    assert h1_rank(named_map("theta4").graph) == 3


@settings(max_examples=150, deadline=None)
@given(st.lists(st.lists(st.integers(0, 1), min_size=5, max_size=5), min_size=0, max_size=5),
       st.lists(st.integers(0, 1), min_size=5, max_size=5))
def test_f2_membership_bruteforce(vs, t):
    reachable = {tuple([0] * 5)}
    for v in vs:
        reachable |= {tuple((a + b) % 2 for a, b in zip(r, v)) for r in reachable}
    assert is_generated_F2(t, vs).member == (tuple(t) in reachable)
    assert rank_F2(vs) == (len(reachable).bit_length() - 1)


def test_homology_mode_wiring(k4map):
    g = k4map.graph
    V = [W(1, 2, 3), W(1, 3, 4)]
    for target in (W(1, 2, 3, 4), W(2, 3, 4), W(1, 2, 4)):
        direct = is_generated_Z(walk_to_chain(g, target), [walk_to_chain(g, v) for v in V]).member
        assert (generated_by(g, target, V, "homology-Z").answer == "yes") == direct
