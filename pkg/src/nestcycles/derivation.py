"""Replayable derivations in the closed-walk calculus.

A derivation starts from one source walk (or an empty walk) and applies
rotations, spike removals and additions, full reductions and sums with
source walks.  ``sum`` may conjugate the source by a path first; that is an
abbreviation for adding spikes along the path and rotating, both of which are
moves of the calculus.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .planar_map import Graph
from .walks import ClosedWalk, WalkError, reduce, parse_walk


class DerivationError(ValueError):
    pass


@dataclass(frozen=True)
class Step:
    op: str
    args: tuple = ()

    def __str__(self):
        parts = [self.op]
        for a in self.args:
            if isinstance(a, tuple):
                if a:
                    parts.append("-".join(map(str, a)))
            else:
                parts.append(str(a))
        return " ".join(parts)


def start(i):
    return Step("start", (i,))


def empty(v):
    return Step("empty", (v,))


def rotate(k):
    return Step("rotate", (k,))


def remove_spike(i):
    return Step("remove-spike", (i,))


def add_spike(i, v):
    return Step("add-spike", (i, v))


def sum_with(i, rot=0, side="R", path=None):
    return Step("sum", (i, rot, side, tuple(path) if path else ()))


REDUCE = Step("reduce")


def apply_step(g: Graph | None, sources: Sequence[ClosedWalk], cur: ClosedWalk | None, st: Step) -> ClosedWalk:
    op, a = st.op, st.args
    if op == "start":
        return sources[a[0]]
    if op == "empty":
        if g is not None and a[0] not in g.adj:
            raise DerivationError(f"{a[0]!r} is not a vertex")
        return ClosedWalk.empty(a[0])
    if cur is None:
        raise DerivationError("derivation must begin with start or empty")
    L = cur.seq
    if op == "rotate":
        return cur.rotate(a[0])
    if op == "reduce":
        return reduce(cur)
    if op == "remove-spike":
        i = a[0]
        if not (1 <= i <= len(L) - 2 and L[i - 1] == L[i + 1]):
            raise DerivationError(f"no spike at {i}")
        return ClosedWalk(L[:i] + L[i + 2:])
    if op == "add-spike":
        i, v = a
        if not 0 <= i < len(L):
            raise DerivationError(f"spike position {i} out of range")
        if g is not None and not g.has_edge(L[i], v):
            raise DerivationError(f"{L[i]!r}{v!r} is not an edge")
        return ClosedWalk(L[:i + 1] + (v, L[i]) + L[i + 1:])
    if op == "sum":
        i, rot, side, path = a
        x = sources[i].rotate(rot)
        if path:
            if path[0] != cur.base or path[-1] != x.base:
                raise DerivationError("conjugating path has wrong ends")
            if g is not None:
                for p, q in zip(path, path[1:]):
                    if not g.has_edge(p, q):
                        raise DerivationError(f"{p!r}{q!r} is not an edge")
            x = ClosedWalk(tuple(path) + x.seq[1:] + tuple(reversed(path))[1:])
        if x.base != cur.base:
            raise DerivationError("sum of walks with different bases")
        return ClosedWalk(cur.seq + x.seq[1:]) if side == "R" else ClosedWalk(x.seq + cur.seq[1:])
    raise DerivationError(f"unknown step {op!r}")


@dataclass
class Derivation:
    sources: list
    target: ClosedWalk
    steps: list = field(default_factory=list)

    def replay(self, g: Graph | None = None) -> tuple:
        """Replay the steps; returns ``(ok, index)``.

        ``index`` is the first failing step, or ``len(steps)`` when every step
        applies but the result differs from the target.
        """
        cur = None
        for k, st in enumerate(self.steps):
            try:
                cur = apply_step(g, self.sources, cur, st)
            except (DerivationError, WalkError, IndexError, ValueError):
                return False, k
        if cur is None or cur.seq != self.target.seq:
            return False, len(self.steps)
        return True, None

    def is_valid(self, g: Graph | None = None) -> bool:
        return self.replay(g)[0]

    def to_text(self) -> str:
        lines = ["derivation 1", f"target: {self.target}"]
        lines += [f"source {i}: {w}" for i, w in enumerate(self.sources)]
        lines += [f"step: {st}" for st in self.steps]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "Derivation":
        target, sources, steps = None, [], []
        lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
        if not lines or lines[0] != "derivation 1":
            raise DerivationError("missing 'derivation 1' header")
        for ln in lines[1:]:
            head, _, rest = ln.partition(":")
            rest = rest.strip()
            if head == "target":
                target = parse_walk(rest)
            elif head.startswith("source"):
                idx = int(head.split()[1])
                if idx != len(sources):
                    raise DerivationError("sources out of order")
                sources.append(parse_walk(rest))
            elif head == "step":
                steps.append(_parse_step(rest))
            else:
                raise DerivationError(f"unrecognised line {ln!r}")
        if target is None:
            raise DerivationError("missing target")
        return cls(sources, target, steps)


def _atom(s):
    return int(s) if s.lstrip("-").isdigit() else s


def _parse_step(text: str) -> Step:
    p = text.split()
    op = p[0]
    if op in ("start", "rotate", "remove-spike"):
        return Step(op, (int(p[1]),))
    if op == "empty":
        return Step(op, (_atom(p[1]),))
    if op == "add-spike":
        return Step(op, (int(p[1]), _atom(p[2])))
    if op == "reduce":
        return REDUCE
    if op == "sum":
        path = tuple(_atom(x) for x in p[4].split("-")) if len(p) > 4 else ()
        return Step(op, (int(p[1]), int(p[2]), p[3], path))
    raise DerivationError(f"unknown step {op!r}")


# ---- building blocks -------------------------------------------------------

def core_steps(w: ClosedWalk) -> tuple:
    """Single-spike removals and rotations taking ``w`` to its cyclic reduction.

    Returns ``(steps, core)``; ``steps`` contain only remove-spike and rotate
    so that they can be inverted exactly.
    """
    steps = []
    L = w.seq
    while True:
        i = next((i for i in range(1, len(L) - 1) if L[i - 1] == L[i + 1]), None)
        if i is not None:
            steps.append(remove_spike(i))
            L = L[:i] + L[i + 2:]
            continue
        if len(L) >= 4 and L[1] == L[-2]:
            # a spike across the base: move the base one step and remove it
            steps.append(rotate(1))
            L = ClosedWalk(L).rotate(1).seq
            continue
        return steps, ClosedWalk(L)


def invert_steps(w: ClosedWalk, steps) -> list:
    """Steps taking the result of ``steps`` (applied to ``w``) back to ``w``."""
    trace = [w]
    for st in steps:
        trace.append(apply_step(None, (), trace[-1], st))
    inv = []
    for st, before in zip(reversed(steps), reversed(trace[:-1])):
        if st.op == "remove-spike":
            i = st.args[0]
            inv.append(add_spike(i - 1, before.seq[i]))
        elif st.op == "rotate":
            n = len(before)
            inv.append(rotate((n - st.args[0]) % n if n else 0))
        else:
            raise DerivationError(f"cannot invert {st}")
    return inv


def move_empty(path) -> list:
    """Steps moving an empty walk along a vertex path."""
    steps = []
    for q in path[1:]:
        steps += [add_spike(0, q), rotate(1), remove_spike(1)]
    return steps


def transform_steps(g: Graph, a: ClosedWalk, b: ClosedWalk) -> list:
    """Steps turning ``a`` into ``b`` when both have the same cyclic reduction."""
    sa, ca = core_steps(a)
    sb, cb = core_steps(b)
    mid = []
    if ca.is_empty and cb.is_empty:
        if ca.base != cb.base:
            p = g.shortest_path(ca.base, cb.base)
            if p is None:
                raise DerivationError("bases lie in different components")
            mid = move_empty(p)
    else:
        if len(ca) != len(cb):
            raise DerivationError("walks have different cyclic reductions")
        k = next((k for k in range(len(ca)) if ca.rotate(k).seq == cb.seq), None)
        if k is None:
            raise DerivationError("walks have different cyclic reductions")
        if k:
            mid = [rotate(k)]
    return sa + mid + invert_steps(b, sb)


def trivial_derivation(w: ClosedWalk, sources: Sequence[ClosedWalk], g: Graph) -> Derivation | None:
    """Derivation when ``w`` is a rotation of a source, or cyclically trivial."""
    for i, s in enumerate(sources):
        if len(s) == len(w):
            for k in range(max(len(s), 1)):
                if s.rotate(k).seq == w.seq:
                    return Derivation(list(sources), w, [start(i)] + ([rotate(k)] if k else []))
    c = reduce(w)
    if len(c) == 0 or core_steps(w)[1].is_empty:
        e = ClosedWalk.empty(w.base)
        return Derivation(list(sources), w, [empty(w.base)] + transform_steps(g, e, w))
    return None
