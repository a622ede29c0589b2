"""The oracle "is W generated by V" in three modes.

``homology-Z`` and ``cyclespace-F2`` are exact.  ``walk`` answers yes only with
a derivation that replays, no only with a checkable obstruction, and unknown
when its budgets run out.
"""

from __future__ import annotations

import heapq
import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Any, Sequence

from .coset import PermRep, enumerate_cosets
from .derivation import (REDUCE, Derivation, empty, sum_with, transform_steps,
                         trivial_derivation)
from .homology import LatticeVerdict, is_generated_F2, is_generated_Z, walk_to_chain
from .pi1 import Pi1Basis, cyclic_free_reduce
from .planar_map import Graph, PlanarMap
from .walks import ClosedWalk, WalkClass, cyclic_reduce

MODES = ("homology-Z", "cyclespace-F2", "walk")


@dataclass(frozen=True)
class ConeObstruction:
    """Integer functional nonnegative on every generator chain, negative on the target."""

    functional: tuple

    def check(self, target, vectors) -> bool:
        f = self.functional
        dot = lambda x: sum(a * b for a, b in zip(f, x))  # noqa: E731
        return all(dot(v) >= 0 for v in vectors) and dot(target) < 0


@dataclass(frozen=True)
class QuotientObstruction:
    """Permutation representation of the chord presentation killing V but not W."""

    base: Any
    rep: PermRep


@dataclass(frozen=True)
class Verdict:
    answer: str  # "yes" | "no" | "unknown"
    mode: str
    certificate: Any = None

    def __bool__(self):
        return self.answer == "yes"


def _walks(V) -> list:
    return [v.rep if isinstance(v, WalkClass) else v for v in V]


def generated_by(g: Graph | PlanarMap, w: ClosedWalk, V: Sequence, mode: str = "homology-Z",
                 node_budget: int = 1_000_000, coset_cap: int = 100_000,
                 length_slack: int | None = None) -> Verdict:
    """Decide whether ``w`` is generated by ``V``; see the module docstring."""
    if isinstance(g, PlanarMap):
        g = g.graph
    if node_budget <= 0 or coset_cap <= 0:
        raise ValueError("budgets must be positive")
    if mode not in MODES:
        raise ValueError(f"unknown mode {mode!r}")
    V = _walks(V)
    target = walk_to_chain(g, w)
    chains = [walk_to_chain(g, v) for v in V]
    if mode == "cyclespace-F2":
        f2 = is_generated_F2(target, chains)
        return Verdict("yes" if f2.member else "no", mode, f2)
    lat = is_generated_Z(target, chains)
    if mode == "homology-Z":
        return Verdict("yes" if lat.member else "no", mode, lat)

    triv = trivial_derivation(w, V, g)
    if triv is not None:
        return Verdict("yes", mode, triv)
    if not lat.member:
        return Verdict("no", mode, lat)
    cone = cone_obstruction(target, chains)
    if cone is not None:
        return Verdict("no", mode, cone)
    found = peel_search(g, w, V, node_budget, length_slack)
    if isinstance(found, Derivation):
        return Verdict("yes", mode, found)
    quot = quotient_obstruction(g, w, V, coset_cap)
    if quot is not None:
        return Verdict("no", mode, quot)
    return Verdict("unknown", mode, {"expanded": found, "node_budget": node_budget, "coset_cap": coset_cap})


def cone_obstruction(target, chains) -> ConeObstruction | None:
    """Search a separating functional by linear programming, then certify exactly."""
    if not chains:
        return None
    from scipy.optimize import linprog

    n = len(target)
    res = linprog(c=list(target), A_ub=[[-x for x in v] for v in chains], b_ub=[0] * len(chains),
                  bounds=[(-1, 1)] * n, method="highs")
    if res.status != 0 or res.fun > -1e-7:
        return None
    fr = [Fraction(x).limit_denominator(64) for x in res.x]
    den = lcm(*(f.denominator for f in fr)) if fr else 1
    cert = ConeObstruction(tuple(int(f * den) for f in fr))
    return cert if cert.check(target, chains) else None


def quotient_obstruction(g: Graph, w: ClosedWalk, V, cap: int) -> QuotientObstruction | None:
    """Coset enumeration on the chord presentation with V as relators.

    When the quotient is finite and ``w`` acts nontrivially on it, ``w`` is not
    even in the normal closure of V.
    """
    basis = Pi1Basis(g, w.base)
    if basis.rank == 0:
        return None
    rels = [cyclic_free_reduce(basis.word(v)) for v in V]
    table = enumerate_cosets(basis.rank, rels, (), cap)
    if table is None:
        return None
    rep = table.permutations()
    if rep.certifies_nontrivial(rels, basis.word(w)):
        return QuotientObstruction(w.base, rep)
    return None


def validate_verdict(g: Graph | PlanarMap, w: ClosedWalk, V, verdict: Verdict) -> bool:
    """Independent check of a verdict's certificate."""
    if isinstance(g, PlanarMap):
        g = g.graph
    V = _walks(V)
    cert = verdict.certificate
    if verdict.answer == "unknown":
        return True
    target = walk_to_chain(g, w)
    chains = [walk_to_chain(g, v) for v in V]
    if isinstance(cert, Derivation):
        return (verdict.answer == "yes" and cert.target.seq == w.seq
                and [s.seq for s in cert.sources] == [v.seq for v in V] and cert.is_valid(g))
    if isinstance(cert, LatticeVerdict):
        return cert.member == (verdict.answer == "yes") and cert.check(target, chains)
    if isinstance(cert, ConeObstruction):
        return verdict.answer == "no" and cert.check(target, chains)
    if isinstance(cert, QuotientObstruction):
        basis = Pi1Basis(g, cert.base)
        rels = [basis.word(v) for v in V]
        return verdict.answer == "no" and cert.rep.certifies_nontrivial(rels, basis.word(w))
    if verdict.mode == "cyclespace-F2":
        if verdict.answer == "no":
            return not is_generated_F2(target, chains).member
        s = [0] * len(target)
        for i in cert.combination:
            s = [a + b for a, b in zip(s, chains[i])]
        return all((a - b) % 2 == 0 for a, b in zip(s, target))
    return False


# ---- derivation search --------------------------------------------------------

def _relator_index(V):
    idx = {}
    for i, v in enumerate(V):
        if v.is_empty:
            continue
        for k in range(len(v)):
            r = v.rotate(k).seq
            idx.setdefault((r[0], r[1]), []).append((i, k, r))
    return idx


def _moves(U: ClosedWalk, idx):
    core = U.vertices
    n = len(core)
    for a in range(n):
        for i, k, r in idx.get((core[a], core[(a + 1) % n]), ()):
            yield a, i, k, peel_once(U, a, r)


def peel_search(g: Graph, w: ClosedWalk, V, budget: int, length_slack: int | None = None):
    """Best-first search peeling relators off ``w``.

    Returns a :class:`Derivation` of ``w`` from ``V`` or the number of expanded
    states when the budget or the length cap stops the search.
    """
    idx = _relator_index(V)
    if not idx:
        return 0
    start_state = cyclic_reduce(w)
    cap = len(start_state) + (length_slack if length_slack is not None else max(len(v) for v in V))
    seen = {WalkClass.of(start_state).rep.seq: None}
    parents = {}
    tie = itertools.count()
    heap = [(len(start_state), next(tie), start_state)]
    expanded = 0
    goal = None
    while heap:
        _, _, U = heapq.heappop(heap)
        if U.is_empty:
            goal = U
            break
        if expanded >= budget:
            return expanded
        expanded += 1
        for a, i, k, lin in _moves(U, idx):
            nxt = cyclic_reduce(lin)
            if len(nxt) > cap:
                continue
            key = WalkClass.of(nxt).rep.seq if not nxt.is_empty else ("empty",)
            if key in seen:
                continue
            seen[key] = None
            parents[id(nxt)] = (U, a, i, k, lin)
            heapq.heappush(heap, (len(nxt), next(tie), nxt))
    if goal is None:
        return expanded
    chain = []
    node = goal
    while id(node) in parents:
        U, a, i, k, lin = parents[id(node)]
        chain.append((U, a, i, k, lin))
        node = U
    chain.reverse()
    return assemble_peel_derivation(g, w, V, chain, goal)


def peel_once(U: ClosedWalk, a: int, r: tuple) -> ClosedWalk:
    """Peel the relator rotation ``r`` off ``U`` rotated by ``a`` (maximal common prefix)."""
    core = U.vertices
    rot = core[a:] + core[:a]
    seq = rot + rot[:1]
    n, L = len(U), len(r) - 1
    ell = 1
    while ell < min(L, n) and r[ell + 1] == seq[ell + 1]:
        ell += 1
    return ClosedWalk(tuple(reversed(r[ell:])) + seq[ell + 1:])


def assemble_peel_derivation(g: Graph, w: ClosedWalk, V, chain, goal: ClosedWalk) -> Derivation:
    """Turn a peel sequence ending at an empty walk into a forward derivation of ``w``.

    ``chain`` lists ``(U, a, i, k, lin)``: state ``U`` rotated by ``a`` had
    rotation ``k`` of ``V[i]`` peeled off, leaving ``lin``.
    """
    steps = [empty(goal.base)]
    acc = goal
    for U, a, i, k, lin in reversed(chain):
        steps += transform_steps(g, acc, lin)
        steps.append(sum_with(i, k, "L"))
        steps.append(REDUCE)
        acc = U.rotate(a)
        steps += transform_steps(g, acc, U)
        acc = U
    steps += transform_steps(g, acc, w)
    d = Derivation(list(V), w, steps)
    ok, bad = d.replay(g)
    if not ok:
        raise AssertionError(f"internal: peel derivation failed at step {bad}")
    return d
