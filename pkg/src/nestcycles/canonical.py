"""Staged construction of a canonical nested generating set of closed walks.

For each length ``i`` the construction repeatedly collects the shortcut-free
cycles of length ``i`` that the current set does not generate, keeps those
nested with everything chosen so far, and inserts every one of them that is
crossed by the fewest others in that pool.  All choices are made by set
operations, so the result commutes with graph isomorphisms whenever the
embedding is unique.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Iterable

from .derivation import Derivation, trivial_derivation
from .groups import AutomorphismGroup, automorphisms, map_walk
from .homology import h1_rank, rank_F2, spans_cycle_lattice, walk_to_chain
from .membership import assemble_peel_derivation, generated_by, peel_once
from .nesting import mu, nested_cycles
from .planar_map import Graph, PlanarMap
from .textio import graph_hash
from .walks import ClosedWalk, WalkClass, candidate_indecomposables, cyclic_reduce, find_shortcut, parse_walk

log = logging.getLogger(__name__)

FORMAT_VERSION = 1


class CanonicalAbort(RuntimeError):
    """The walk-mode oracle could not decide a query the construction depends on."""

    def __init__(self, message: str, query: str):
        super().__init__(message)
        self.query = query


@dataclass(frozen=True)
class Provenance:
    stage: int
    step: int
    mu: int  # against the set before insertion
    mu_batch: int  # optimal value inside the nested pool


@dataclass
class GeneratingSet:
    stages: dict  # length -> frozenset of WalkClass added at that length
    mode: str
    provenance: dict = field(default_factory=dict)
    graph_digest: str = ""
    decided: int = 0
    undecided: int = 0

    @property
    def elements(self) -> list:
        return sorted((c for s in self.stages.values() for c in s), key=lambda c: (len(c), c.key()))

    def upto(self, i: int) -> set:
        return {c for n, s in self.stages.items() if n <= i for c in s}

    def cycles(self) -> list:
        """One orientation per underlying cycle."""
        seen, out = set(), []
        for c in self.elements:
            k = c.undirected()
            if k not in seen:
                seen.add(k)
                out.append(c)
        return out

    def to_text(self) -> str:
        lines = [f"generating-set {FORMAT_VERSION}", f"mode: {self.mode}", f"graph: {self.graph_digest}"]
        for c in self.elements:
            p = self.provenance[c]
            lines.append(f"element {p.stage} {p.step} {p.mu} {p.mu_batch} {c.rep}")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "GeneratingSet":
        lines = [ln for ln in text.splitlines() if ln.strip() and not ln.startswith("#")]
        if not lines or lines[0].split() != ["generating-set", str(FORMAT_VERSION)]:
            raise ValueError("not a generating-set file of a supported version")
        mode, digest = "homology-Z", ""
        stages, prov = {}, {}
        for ln in lines[1:]:
            if ln.startswith("mode:"):
                mode = ln.split(":", 1)[1].strip()
            elif ln.startswith("graph:"):
                digest = ln.split(":", 1)[1].strip()
            elif ln.startswith("element "):
                _, st, step, m, mb, walk = ln.split()
                c = WalkClass.of(parse_walk(walk))
                stages.setdefault(int(st), set()).add(c)
                prov[c] = Provenance(int(st), int(step), int(m), int(mb))
            else:
                raise ValueError(f"unexpected line {ln!r}")
        return cls({k: frozenset(v) for k, v in stages.items()}, mode, prov, digest)


def _spans(g: Graph, walks, mode: str) -> bool:
    chains = [walk_to_chain(g, w) for w in walks]
    if mode == "cyclespace-F2":
        return rank_F2(chains) == h1_rank(g)
    return spans_cycle_lattice(g, walks)


def build_canonical(m: PlanarMap, mode: str = "homology-Z", i_max: int | None = None,
                    node_budget: int = 200_000, coset_cap: int = 20_000,
                    early_stop: bool = True) -> GeneratingSet:
    """Run the staged construction on the map ``m``.

    In the homology modes the loop stops once the set spans the whole cycle
    space, since no later candidate can then fail to be generated.
    """
    g = m.graph
    if not g.is_biconnected():
        raise ValueError("the construction needs a 2-connected graph")
    top = len(g.vertices) if i_max is None else i_max
    current: list[WalkClass] = []
    stages: dict = {}
    prov: dict = {}
    decided = undecided = 0
    for i in range(3, top + 1):
        if early_stop and mode != "walk" and current and _spans(g, [c.rep for c in current], mode):
            break
        pool = sorted(candidate_indecomposables(g, i), key=lambda c: c.key())
        added_here: set = set()
        step = 0
        while True:
            reps = [c.rep for c in current]
            D = []
            for c in pool:
                if c in added_here:
                    continue
                v = generated_by(g, c.rep, reps, mode, node_budget=node_budget, coset_cap=coset_cap)
                if v.answer == "unknown":
                    undecided += 1
                    raise CanonicalAbort(
                        f"walk oracle undecided on a length-{i} candidate",
                        "query\n" + f"graph: {graph_hash(g)}\n" + f"target: {c.rep}\n"
                        + "".join(f"source: {r}\n" for r in reps))
                decided += 1
                if v.answer == "no":
                    D.append(c)
            if not D:
                break
            E = [c for c in D if all(nested_cycles(m, c.rep, x.rep) for x in current)]
            if not E:
                raise RuntimeError(f"no candidate of length {i} is nested with the current set")
            vals = {c: mu(m, [e.rep for e in E], c.rep) for c in E}
            best = min(vals.values())
            F = [c for c in E if vals[c] == best]
            step += 1
            for c in F:
                prov[c] = Provenance(i, step, mu(m, reps, c.rep), best)
            current += F
            added_here |= set(F)
            log.debug("length %d step %d: inserted %d walks (mu %d)", i, step, len(F), best)
        if added_here:
            stages[i] = frozenset(added_here)
    return GeneratingSet(stages, mode, prov, graph_hash(g), decided, undecided)


@dataclass
class CanonicalReport:
    invariant: bool
    nested: bool
    generates: bool
    stage_lengths: bool
    shortcut_free: bool
    broken_by: list = field(default_factory=list)  # generator indices that move the set
    crossing_pairs: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.invariant and self.nested and self.generates and self.stage_lengths and self.shortcut_free

    def failed_clauses(self) -> list:
        names = ("invariant", "nested", "generates", "stage_lengths", "shortcut_free")
        return [n for n in names if not getattr(self, n)]


def verify_canonical(gs: GeneratingSet, auts: AutomorphismGroup | Iterable | None, m: PlanarMap) -> CanonicalReport:
    """Check invariance, pairwise nestedness and generation clause by clause."""
    g = m.graph
    if auts is None:
        auts = automorphisms(g)
    gens = auts.generators if isinstance(auts, AutomorphismGroup) else list(auts)
    elems = set(gs.elements)
    broken = [k for k, p in enumerate(gens) if {WalkClass.of(map_walk(p, c.rep)) for c in elems} != elems]
    cyc = gs.cycles()
    crossing = [(a.rep, b.rep) for x, a in enumerate(cyc) for b in cyc[x + 1:] if not nested_cycles(m, a.rep, b.rep)]
    gen = _spans(g, [c.rep for c in elems], "cyclespace-F2" if gs.mode == "cyclespace-F2" else "homology-Z")
    lengths = all(len(c) == n for n, s in gs.stages.items() for c in s)
    sf = all(find_shortcut(g, c.rep) is None for c in elems)
    return CanonicalReport(not broken, not crossing, gen, lengths, sf, broken, crossing)


def stage_invariant(m: PlanarMap, gs: GeneratingSet, upto: int | None = None) -> list:
    """Shortcut-free cycles of length <= i not generated by the stage-i set.

    Returns the violating ``(i, cycle)`` pairs; empty when the invariant holds.
    """
    g = m.graph
    top = len(g.vertices) if upto is None else upto
    bad = []
    for i in range(3, top + 1):
        reps = [c.rep for c in gs.upto(i)]
        for c in sorted(candidate_indecomposables(g, i), key=lambda c: c.key()):
            if generated_by(g, c.rep, reps, gs.mode).answer != "yes":
                bad.append((i, c.rep))
    return bad


# ---- reduction to face boundaries -------------------------------------------------

class FaceReductionError(ValueError):
    pass


def face_sources(m: PlanarMap) -> list:
    """Bounded faces as closed walks, each followed by its inverse."""
    out = []
    for f in m.bounded_faces():
        w = ClosedWalk(tuple(f))
        out += [w, w.inverse()]
    return out


def face_boundary_reduction(m: PlanarMap, w: ClosedWalk) -> Derivation:
    """Derivation of the cycle ``w`` from bounded face boundaries.

    Faces inside ``w`` are peeled off one at a time: an edge of the current
    walk is replaced by the rest of the boundary of the inner face it bounds.
    """
    g = m.graph
    if not g.is_connected() or not g.is_biconnected():
        raise FaceReductionError("face reduction needs a 2-connected graph")
    if not w.is_cycle():
        raise FaceReductionError("input must be a cycle")
    w.validate(g)
    V = face_sources(m)
    triv = trivial_derivation(w, V, g)
    if triv is not None:
        return triv
    bounded = [i for i in range(len(m.faces)) if i != m.outer]
    src_of = {f: 2 * k for k, f in enumerate(bounded)}
    rp = m.cycle_regions(w.vertices)
    inner = set(rp.side0_faces)
    if m.outer in inner:
        inner = set(rp.side1_faces)
    fo = m.face_of
    x, y = w.seq[0], w.seq[1]
    forward = fo[(x, y)] in inner  # darts of w see the inner faces on their tracing side

    def face_for(a, b):
        return fo[(a, b)] if forward else fo[(b, a)]

    region = set(inner)
    U = cyclic_reduce(w)
    chain = []
    for _ in range(4 * len(m.faces) + 4):
        if U.is_empty:
            break
        best = None
        core = U.vertices
        n = len(core)
        for a in range(n):
            d = (core[a], core[(a + 1) % n])
            f = face_for(*d)
            if f not in region:
                continue
            i = src_of[f] + (0 if forward else 1)
            src = V[i]
            k = next(t for t in range(len(src)) if src.seq[t] == d[0] and src.seq[t + 1] == d[1])
            lin = peel_once(U, a, src.rotate(k).seq)
            nxt = cyclic_reduce(lin)
            key = (len(nxt), not nxt.is_cycle() and not nxt.is_empty, a)
            if best is None or key < best[0]:
                best = (key, a, i, k, lin, nxt, f)
        if best is None:
            raise FaceReductionError(f"no inner face left to peel from {U}")
        _, a, i, k, lin, nxt, f = best
        chain.append((U, a, i, k, lin))
        region.discard(f)
        U = nxt
    if not U.is_empty:
        raise FaceReductionError(f"face peeling did not terminate for {w}")
    return assemble_peel_derivation(g, w, V, chain, U)


def reduction_sum_count(d: Derivation) -> int:
    return sum(1 for st in d.steps if st.op == "sum")
