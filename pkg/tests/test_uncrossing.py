import itertools
import logging
import random

import pytest

from nestcycles.membership import generated_by
from nestcycles.nesting import nested_cycles
from nestcycles.planar_map import embed
from nestcycles.uncrossing import (UncrossError, bridge_analysis, check_mu_decrease, pair_count_matches,
                                   uncross)
from nestcycles.walks import ClosedWalk, WalkClass, all_cycles, find_shortcut, shortcut_free_cycles
from randgraphs import random_biconnected_planar

W = ClosedWalk.of
C_ac, C_bd = W("u", "a", "w", "c"), W("u", "b", "w", "d")


def theta_cycles():
    return [W("u", x, "w", y) for x, y in itertools.combinations("abcd", 2)]


def test_bridge_theta(theta):
    b = bridge_analysis(theta, C_ac, C_bd)
    assert b.P1 == ("u", "a", "w")
    assert b.P2 in (("u", "b", "w"), ("u", "d", "w"))
    assert b.outcome == "i"


def test_bridge_k4_long_bridge(k4map):
    b = bridge_analysis(k4map, W(1, 2, 4), W(1, 3, 4))
    assert len(b.P1) - 1 == 2 and len(b.P2) - 1 == 1
    assert b.outcome in ("ii", "iii")


def test_bridge_rejects_identical(k4map):
    with pytest.raises(UncrossError):
        bridge_analysis(k4map, W(1, 2, 4), W(2, 4, 1))


def test_uncross_theta(theta):
    r = uncross(theta, C_ac, C_bd)
    sides = {WalkClass.of(x).undirected() for x in (r.C_tilde, r.D_tilde)}
    allowed = {WalkClass.of(W("u", x, "w", y)).undirected() for x, y in ("ab", "bc", "cd", "ad")}
    assert sides <= allowed and len(sides) == 2
    assert set(r.C_tilde.vertices) & set(r.D_tilde.vertices) == {"u", "w"}
    assert (len(r.C_tilde), len(r.D_tilde)) == (4, 4)
    assert nested_cycles(theta, r.C_tilde, r.D_tilde)
    assert pair_count_matches(r)


def test_theta_mu_strict(theta):
    r = uncross(theta, C_ac, C_bd)
    rep = check_mu_decrease(theta, theta_cycles(), C_ac, C_bd, r)
    assert (rep.mu_C + rep.mu_D, rep.mu_Ct + rep.mu_Dt) == (2, 0)
    assert rep.strict_required and rep.holds


def test_mu_empty_family(theta):
    r = uncross(theta, C_ac, C_bd)
    rep = check_mu_decrease(theta, [], C_ac, C_bd, r)
    assert rep.holds and rep.mu_C + rep.mu_D == 0


def test_theta_logs_exceptional_branch(theta, caplog):
    with caplog.at_level(logging.WARNING, logger="nestcycles.uncrossing"):
        uncross(theta, C_ac, C_bd)
    assert any("two-long-lens" in rec.message for rec in caplog.records)


def test_uncross_rejects_nested(theta):
    with pytest.raises(UncrossError):
        uncross(theta, W("u", "a", "w", "b"), W("u", "c", "w", "d"))
    with pytest.raises(UncrossError):
        uncross(theta, W("u", "a", "w", "a", "u", "b"), C_bd)


def pairing_in_matching_order(r) -> bool:
    def pos(walk, x):
        return walk.vertices.index(x)

    ps = [pos(r.C, p[0]) for p, _ in r.pairing]
    if ps != sorted(ps):
        return False
    qs = [pos(r.D, q[0]) for _, q in r.pairing]
    n = len(qs)
    # cyclically monotone in one direction or the other
    inc = sum(1 for i in range(n) if qs[i] < qs[(i + 1) % n])
    return n <= 2 or inc in (1, n - 1)


def indecomposable_cycles(m):
    """Shortcut-free cycles not homologous to any combination of shorter cycles."""
    g = m.graph
    out = []
    for c in shortcut_free_cycles(g):
        shorter = all_cycles(g, len(c) - 1)
        if generated_by(g, c, shorter, "homology-Z").answer == "no":
            out.append(c)
    return out


def indecomposable_crossing_pairs(seed: int, graphs: int):
    rng = random.Random(seed)
    for _ in range(graphs):
        n = rng.randint(6, 12)
        g = random_biconnected_planar(n, rng, drop=rng.choice([0.3, 0.5, 0.7]), subdivide=rng.randint(0, 3))
        m = embed(g)
        ind = indecomposable_cycles(m)
        for a, b in itertools.combinations(ind, 2):
            if not nested_cycles(m, a, b):
                yield m, a, b


def test_contract_on_indecomposable_pairs(corpus_seed):
    logging.getLogger("nestcycles.uncrossing").setLevel(logging.ERROR)
    count = 0
    for m, a, b in indecomposable_crossing_pairs(corpus_seed, 600):
        r = uncross(m, a, b)
        g = m.graph
        assert (len(r.C_tilde), len(r.D_tilde)) == (len(a), len(b))
        assert nested_cycles(m, r.C_tilde, r.D_tilde)
        assert find_shortcut(g, r.C_tilde) is None and find_shortcut(g, r.D_tilde) is None
        for t in (r.transfers[("C", "C~")], r.transfers[("D", "D~")]):
            assert t.derivation.is_valid(g)
        assert pair_count_matches(r)
        assert pairing_in_matching_order(r)
        E = [c for c in shortcut_free_cycles(g) if len(c) <= min(len(a), len(b))]
        assert check_mu_decrease(m, E, a, b, r).holds
        count += 1
    assert count >= 50
