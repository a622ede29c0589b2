"""Bridge analysis of two shortcut-free cycles and the uncrossing operation."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

from .derivation import REDUCE, Derivation, rotate, start, sum_with, transform_steps
from .nesting import _as_walk, d_paths, mu, n_paths, nested_cycles
from .planar_map import PlanarMap, seq_key
from .walks import ClosedWalk, WalkClass, find_shortcut, reduce

log = logging.getLogger(__name__)


class UncrossError(ValueError):
    pass


@dataclass(frozen=True)
class BridgeAnalysis:
    P1: tuple
    P2: tuple
    outcome: str  # "i", "ii" or "iii"


def _arcs(w: ClosedWalk, x, y):
    """The two arcs of the cycle ``w`` from x to y (forward, backward)."""
    vs = w.vertices
    n = len(vs)
    i, j = vs.index(x), vs.index(y)
    fwd = tuple(vs[(i + t) % n] for t in range((j - i) % n + 1))
    bwd = tuple(vs[(i - t) % n] for t in range((i - j) % n + 1))
    return fwd, bwd


def _is_rotation(a: ClosedWalk, b: ClosedWalk) -> bool:
    return len(a) == len(b) and any(a.rotate(k).seq == b.seq for k in range(max(len(a), 1)))


def bridge_analysis(m: PlanarMap, W1, W2) -> BridgeAnalysis:
    """Shortest bridge of W1 over W2, the matching arc of W2, and the case that holds."""
    W1, W2 = _as_walk(W1), _as_walk(W2)
    if len(set(W1.vertices) & set(W2.vertices)) < 2 or WalkClass.of(W1).undirected() == WalkClass.of(W2).undirected():
        raise UncrossError("walks must be distinct and share at least two vertices")
    cands = [p for p in d_paths(W1, W2) if p[0] != p[-1]]
    if not cands:
        raise UncrossError("no subwalk of W1 meets W2 in exactly its ends")
    P1 = min(cands, key=lambda p: (len(p), seq_key(p)))
    v, w = P1[0], P1[-1]
    P2 = min(_arcs(W2, v, w), key=lambda p: (len(p), seq_key(p)))
    l1, l2 = len(P1) - 1, len(P2) - 1
    w1_vertices = set(W1.vertices)
    if l1 == l2 and not (set(P2[1:-1]) & w1_vertices):
        return BridgeAnalysis(P1, P2, "i")
    if l1 >= l2:
        loop = ClosedWalk(P1 + tuple(reversed(P2))[1:])
        if _is_rotation(loop, W1):
            return BridgeAnalysis(P1, P2, "ii")
        rest = _arcs(W1, w, v)[0] if _arcs(W1, v, w)[0] == P1 else _arcs(W1, w, v)[1]
        loop = ClosedWalk(rest + P2[1:])
        if _is_rotation(loop, W2) or _is_rotation(loop, W2.inverse()):
            return BridgeAnalysis(P1, P2, "iii")
    raise UncrossError(f"no bridge case applies to P1={P1}, P2={P2}")


def boundary_walks(m: PlanarMap, faces) -> list:
    """Boundary of a set of faces as closed walks, the faces on the tracing side."""
    faces = set(faces)
    fo = m.face_of
    bd = {d for d, f in fo.items() if f in faces and fo[(d[1], d[0])] not in faces}
    out = []
    while bd:
        first = min(bd, key=seq_key)
        seq = [first[0]]
        d = first
        while True:
            bd.discard(d)
            seq.append(d[1])
            nxt = m.next_dart(*d)
            for _ in range(len(m.spin[d[1]]) + 1):
                if nxt in bd or nxt == first:
                    break
                nxt = m.next_dart(nxt[1], nxt[0])
            else:
                raise UncrossError("boundary tracing failed")
            if nxt == first:
                break
            d = nxt
        out.append(ClosedWalk(tuple(seq)))
    return out


def _sides(m: PlanarMap, c: ClosedWalk):
    rp = m.cycle_regions(c.vertices)
    return rp.side0_faces, rp.side1_faces


@dataclass
class Transfer:
    """A derivation of ``target`` from ``source`` plus short closed walks (lenses)."""

    derivation: Derivation
    pairs: list  # (P, Q): P on the target, Q replaced on the source

    @property
    def lens_lengths(self) -> list:
        return [len(s) for s in self.derivation.sources[1:]]


def transfer(m: PlanarMap, source: ClosedWalk, target: ClosedWalk) -> Transfer | None:
    """Derive ``target`` from ``source`` by swapping its off-target pieces for target arcs."""
    g = m.graph
    tv = target.vertices
    succ = {tv[i]: tv[(i + 1) % len(tv)] for i in range(len(tv))}
    on = set(tv)
    best = None
    for src in (source, source.inverse()):
        res = _transfer_oriented(g, src, target, succ, on)
        if res is not None and (best is None or len(res.pairs) < len(best.pairs)):
            best = res
    return best


def _forward_arc(succ, x, y):
    arc = [x]
    while arc[-1] != y:
        arc.append(succ[arc[-1]])
        if len(arc) > len(succ) + 1:
            return None
    return tuple(arc)


def _transfer_oriented(g, src, target, succ, on):
    sources = [src]
    steps = [start(0)]
    pairs = []
    cur = src
    if src.base not in on:
        k = next((i for i, x in enumerate(src.vertices) if x in on), None)
        if k is None:
            return None
        steps.append(rotate(k))
        cur = src.rotate(k)
    for _ in range(4 * len(src) + 4):
        seq = cur.seq
        hits = [i for i, x in enumerate(seq) if x in on]
        if not hits:
            return None
        piece = None
        for s, t in zip(hits, hits[1:]):
            if t == s + 1 and succ[seq[s]] == seq[t]:
                continue
            if t == s + 1 and succ[seq[t]] == seq[s]:
                return None  # a target edge traversed backwards
            piece = (s, t)
            break
        if piece is None:
            if hits[0] != 0:
                return None
            break
        s, t = piece
        Q = seq[s:t + 1]
        P = _forward_arc(succ, Q[0], Q[-1])
        if P is None:
            return None
        lens = ClosedWalk(tuple(reversed(Q)) + P[1:])
        pairs.append((P, Q))
        sources.append(lens)
        steps += [rotate(t), sum_with(len(sources) - 1, 0, "R"), REDUCE]
        cur = reduce(ClosedWalk(cur.rotate(t).seq + lens.seq[1:]))
    else:
        return None
    try:
        steps += transform_steps(g, cur, target)
    except ValueError:
        return None
    d = Derivation(sources, target, steps)
    return Transfer(d, pairs) if d.is_valid(g) else None


@dataclass
class UncrossResult:
    C: ClosedWalk
    D: ClosedWalk
    C_tilde: ClosedWalk
    D_tilde: ClosedWalk
    face_choice: str  # "00/11" or "01/10"
    pairing: list  # (P_i, Q_i) in cyclic order along C
    transfers: dict = field(default_factory=dict)
    clause_ok: bool = True
    exceptional: bool = False

    def lens_lengths(self) -> list:
        return sorted(len(p) + len(q) - 2 for p, q in self.pairing)


def _transfer_set(m, C, D, Ct, Dt):
    """The four transfers between the new pair and the old pair."""
    return {
        ("C", "C~"): transfer(m, Ct, C),
        ("D", "D~"): transfer(m, Dt, D),
        ("D", "C~"): transfer(m, Ct, D),
        ("C", "D~"): transfer(m, Dt, C),
    }


def _short(t: Transfer | None, bound: int) -> bool:
    return t is not None and all(n < bound for n in t.lens_lengths)


def _candidate(m, C, D, choice):
    c0, c1 = _sides(m, C)
    d0, d1 = _sides(m, D)
    if choice == "00/11":
        A, B = c0 & d0, c1 & d1
    else:
        A, B = c0 & d1, c1 & d0
    bA, bB = boundary_walks(m, A), boundary_walks(m, B)
    if len(bA) != 1 or len(bB) != 1:
        return None
    x, y = bA[0], bB[0]
    if (len(x), len(y)) == (len(C), len(D)):
        Ct, Dt = x, y
    elif (len(y), len(x)) == (len(C), len(D)):
        Ct, Dt = y, x
    else:
        return None
    if not (Ct.is_cycle() and Dt.is_cycle()) or not nested_cycles(m, Ct, Dt):
        return None
    ts = _transfer_set(m, C, D, Ct, Dt)
    tc = ts[("C", "C~")]
    td = ts[("D", "D~")]
    if tc is None or td is None:
        return None
    Ct, Dt = tc.derivation.sources[0], td.derivation.sources[0]
    bound = len(C)
    clause = (_short(ts[("C", "C~")], bound) and _short(ts[("D", "D~")], bound)) or \
             (_short(ts[("D", "C~")], bound) and _short(ts[("C", "D~")], bound))
    pairs = list(tc.pairs)
    other = ts[("C", "D~")]
    if other is not None:
        pairs += other.pairs
    cpos = {v: i for i, v in enumerate(C.vertices)}
    pairs.sort(key=lambda pq: cpos[pq[0][0]])
    lens = [len(p) + len(q) - 2 for p, q in pairs]
    exceptional = sum(1 for n in lens if n >= min(len(C), len(D))) >= 2
    return UncrossResult(C, D, Ct, Dt, choice, pairs, ts, clause, exceptional)


def uncross(m: PlanarMap, C, D, E=None) -> UncrossResult:
    """Replace two crossing shortcut-free cycles by nested ones of the same lengths.

    ``E`` is accepted for bookkeeping symmetry with :func:`check_mu_decrease`
    and does not influence the result.
    """
    C, D = _as_walk(C), _as_walk(D)
    if not (C.is_cycle() and D.is_cycle()):
        raise UncrossError("uncross needs two cycles")
    if nested_cycles(m, C, D):
        raise UncrossError("cycles are already nested")
    cands = [r for r in (_candidate(m, C, D, ch) for ch in ("00/11", "01/10")) if r is not None]
    if not cands:
        raise UncrossError(f"no valid region pairing for C={C} D={D}")

    def pref(r):
        sf = find_shortcut(m.graph, r.C_tilde) is None and find_shortcut(m.graph, r.D_tilde) is None
        return (not sf, not r.clause_ok, WalkClass.of(r.C_tilde).key(), WalkClass.of(r.D_tilde).key())

    best = min(cands, key=pref)
    if best.exceptional or not best.clause_ok:
        log.warning("uncross reached the two-long-lens branch: C=%s D=%s choice=%s", C, D, best.face_choice)
    return best


@dataclass(frozen=True)
class MuReport:
    mu_C: int
    mu_D: int
    mu_Ct: int
    mu_Dt: int
    strict_required: bool

    @property
    def holds(self) -> bool:
        lhs, rhs = self.mu_C + self.mu_D, self.mu_Ct + self.mu_Dt
        return lhs > rhs if self.strict_required else lhs >= rhs


class MuViolation(AssertionError):
    pass


def check_mu_decrease(m: PlanarMap, E, C, D, result: UncrossResult) -> MuReport:
    """mu_E(C) + mu_E(D) >= mu_E(C~) + mu_E(D~), strictly when D lies in E."""
    E = list(E)
    C, D = _as_walk(C), _as_walk(D)
    keys = {WalkClass.of(_as_walk(e)).undirected() for e in E}
    rep = MuReport(mu(m, E, C), mu(m, E, D), mu(m, E, result.C_tilde), mu(m, E, result.D_tilde),
                   WalkClass.of(D).undirected() in keys)
    if not rep.holds:
        raise MuViolation(
            "mu inequality violated\n"
            f"graph edges: {list(m.graph.edges)}\nspin: {dict(m.spin)}\nouter: {m.outer}\n"
            f"C: {C}\nD: {D}\nC~: {result.C_tilde}\nD~: {result.D_tilde}\n"
            f"E: {[str(_as_walk(e)) for e in E]}\nvalues: {rep}")
    return rep


def pair_count_matches(result: UncrossResult) -> bool:
    return n_paths(result.C, result.D) == len(result.pairing)
