"""Crossing and nestedness of closed walks, D-paths and the counts mu."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from .planar_map import PlanarMap
from .walks import ClosedWalk, WalkClass


@dataclass(frozen=True)
class CrossingWitness:
    shared: tuple  # x1 ... x_{l-1}
    case: str  # "i" or "ii"
    start: tuple  # (x0, y0): where R and W enter the shared walk
    end: tuple  # (x_l, y_l): where they leave it
    w_reversed: bool  # the witness uses W^{-1}

    def check(self, m: PlanarMap) -> bool:
        return _is_crossing(m, self.start[0], self.shared, self.end[0], self.start[1], self.end[1]) == self.case


def _as_walk(w) -> ClosedWalk:
    if isinstance(w, WalkClass):
        return w.rep
    if isinstance(w, ClosedWalk):
        return w
    return ClosedWalk.of(*w)


def _is_crossing(m: PlanarMap, x0, shared, xl, y0, yl):
    """Case of the crossing of R = x0 shared xl against W = y0 shared yl, if any."""
    x1, xk = shared[0], shared[-1]
    x2 = shared[1] if len(shared) > 1 else xl
    xk_prev = shared[-2] if len(shared) > 1 else x0
    if len({x0, x2, y0}) < 3 or len({xk_prev, yl, xl}) < 3:
        return None
    pos = m._pos

    def s(v, a, b, c):  # clockwise order a, b, c at v
        p = pos[v]
        d = len(p)
        return (p[b] - p[a]) % d < (p[c] - p[a]) % d

    if s(x1, x0, x2, y0) and s(xk, xk_prev, yl, xl):
        return "i"
    if s(x1, y0, x2, x0) and s(xk, xk_prev, xl, yl):
        return "ii"
    return None


def crossing(m: PlanarMap, R, W) -> CrossingWitness | None:
    """A crossing of R with W (or with W^{-1}), or ``None`` if they are nested.

    Powers of the walks are handled by cyclic indexing, which covers every
    shared subwalk of spike-free closed walks.
    """
    R, W = _as_walk(R), _as_walk(W)
    if R.is_empty or W.is_empty:
        return None
    for rev, ww in ((False, W), (True, W.inverse())):
        wit = _crossing_oriented(m, R.vertices, ww.vertices, rev)
        if wit is not None:
            return wit
    return None


def _crossing_oriented(m, r, w, rev):
    nr, nw = len(r), len(w)
    pos_w = {}
    for j, y in enumerate(w):
        pos_w.setdefault(y, []).append(j)
    for i, x in enumerate(r):
        for j in pos_w.get(x, ()):
            if r[i - 1] == w[j - 1]:
                continue  # not the start of a maximal shared walk
            k = 1
            while k < min(nr, nw) and r[(i + k) % nr] == w[(j + k) % nw]:
                k += 1
            if k >= min(nr, nw):
                continue
            shared = tuple(r[(i + t) % nr] for t in range(k))
            x0, xl = r[i - 1], r[(i + k) % nr]
            y0, yl = w[j - 1], w[(j + k) % nw]
            case = _is_crossing(m, x0, shared, xl, y0, yl)
            if case:
                return CrossingWitness(shared, case, (x0, y0), (xl, yl), rev)
    return None


def _one_sided(m: PlanarMap, c: ClosedWalk, d: ClosedWalk) -> bool:
    """Whether d has no vertices or edges on both sides of the cycle c."""
    rp = m.cycle_regions(c.vertices)
    vs = set(d.vertices)
    es = d.edges()
    zero = not vs.isdisjoint(rp.side0_vertices) or not es.isdisjoint(rp.side0_edges)
    one = not vs.isdisjoint(rp.side1_vertices) or not es.isdisjoint(rp.side1_edges)
    return not (zero and one)


def nested_cycles(m: PlanarMap, C, D) -> bool:
    """Region form of nestedness for two cycles."""
    C, D = _as_walk(C), _as_walk(D)
    return _one_sided(m, C, D) and _one_sided(m, D, C)


def d_paths(C, D) -> list:
    """The D-paths in C, in cyclic order along C, as vertex tuples.

    A D-path is a maximal nontrivial subwalk of C whose ends lie on D and whose
    interior avoids D; single edges of D are not D-paths.
    """
    C, D = _as_walk(C), _as_walk(D)
    cv = C.vertices
    dv = set(D.vertices)
    d_edges = D.edges()
    n = len(cv)
    hits = [i for i, x in enumerate(cv) if x in dv]
    if not hits or n == 0:
        return []
    out = []
    for a, i in enumerate(hits):
        j = hits[(a + 1) % len(hits)]
        span = (j - i) % n or n
        seg = tuple(cv[(i + t) % n] for t in range(span + 1))
        if span == 1 and frozenset(seg) in d_edges:
            continue
        out.append(seg)
    return out


def n_paths(C, D) -> int:
    """n(C, D): the number of C-paths in D."""
    return len(d_paths(D, C))


def _distinct_cycles(E: Iterable) -> list:
    seen, out = set(), []
    for e in E:
        w = _as_walk(e)
        key = WalkClass.of(w).undirected()
        if key not in seen:
            seen.add(key)
            out.append(w)
    return out


def mu(m: PlanarMap, E: Iterable, C) -> int:
    """Number of cycles of E (orientation ignored) not nested with C."""
    C = _as_walk(C)
    return sum(1 for e in _distinct_cycles(E) if not nested_cycles(m, e, C))


def mu_set(m: PlanarMap, E: Iterable, F: Iterable) -> int | None:
    """Minimum of mu over F; ``None`` for empty F."""
    E = _distinct_cycles(E)
    vals = [mu(m, E, f) for f in F]
    return min(vals) if vals else None
