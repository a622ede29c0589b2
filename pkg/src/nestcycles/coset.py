"""Coset enumeration and Stallings folding over free groups.

Words use nonzero integers: ``k`` is the k-th generator (1-based), ``-k`` its
inverse.
"""

from __future__ import annotations

from dataclasses import dataclass


class CosetOverflow(RuntimeError):
    pass


def _col(x: int) -> int:
    return 2 * (abs(x) - 1) + (0 if x > 0 else 1)


class CosetTable:
    """Coset table built by the HLT strategy with coincidence processing."""

    def __init__(self, ngens: int, relators, subgroup=(), max_cosets: int = 100_000):
        self.n = ngens
        self.rels = [tuple(r) for r in relators if r]
        self.sub = [tuple(w) for w in subgroup if w]
        self.max = max_cosets
        self.table = [[None] * (2 * ngens)]
        self.p = [0]
        self.defined = 1

    def _inv(self, c: int) -> int:
        return c ^ 1

    def _new(self) -> int:
        if self.defined >= self.max:
            raise CosetOverflow(f"more than {self.max} cosets")
        self.defined += 1
        self.table.append([None] * (2 * self.n))
        self.p.append(len(self.p))
        return len(self.p) - 1

    def _define(self, c, col):
        d = self._new()
        self.table[c][col] = d
        self.table[d][self._inv(col)] = c

    def rep(self, c: int) -> int:
        r = c
        while self.p[r] != r:
            r = self.p[r]
        while self.p[c] != r:
            self.p[c], c = r, self.p[c]
        return r

    def _merge(self, a, b, q):
        a, b = self.rep(a), self.rep(b)
        if a == b:
            return
        lo, hi = min(a, b), max(a, b)
        self.p[hi] = lo
        q.append(hi)

    def _coincidence(self, a, b):
        q = []
        self._merge(a, b, q)
        i = 0
        while i < len(q):
            e = q[i]
            i += 1
            for x in range(2 * self.n):
                f = self.table[e][x]
                if f is None:
                    continue
                ix = self._inv(x)
                if self.table[f][ix] == e:
                    self.table[f][ix] = None
                e1, f1 = self.rep(e), self.rep(f)
                if self.table[e1][x] is not None:
                    self._merge(f1, self.table[e1][x], q)
                elif self.table[f1][ix] is not None:
                    self._merge(e1, self.table[f1][ix], q)
                else:
                    self.table[e1][x] = f1
                    self.table[f1][ix] = e1

    def _scan_and_fill(self, c, word):
        cols = [_col(x) for x in word]
        f, b = c, c
        i, j = 0, len(cols) - 1
        t = self.table
        while True:
            while i <= j and t[f][cols[i]] is not None:
                f = t[f][cols[i]]
                i += 1
            if i > j:
                if f != b:
                    self._coincidence(f, b)
                return
            while j >= i and t[b][self._inv(cols[j])] is not None:
                b = t[b][self._inv(cols[j])]
                j -= 1
            if j < i:
                self._coincidence(f, b)
                return
            if i == j:
                t[f][cols[i]] = b
                t[b][self._inv(cols[i])] = f
                return
            self._define(f, cols[i])

    def live(self, c):
        return self.p[c] == c

    def run(self) -> "CosetTable":
        for w in self.sub:
            self._scan_and_fill(0, w)
        c = 0
        while c < len(self.table):
            for r in self.rels:
                if not self.live(c):
                    break
                self._scan_and_fill(c, r)
            if self.live(c):
                for x in range(2 * self.n):
                    if self.table[c][x] is None:
                        self._define(c, x)
            c += 1
        return self

    def permutations(self) -> "PermRep":
        alive = [c for c in range(len(self.table)) if self.live(c)]
        idx = {c: k for k, c in enumerate(alive)}
        gens = []
        for g in range(self.n):
            gens.append(tuple(idx[self.rep(self.table[c][2 * g])] for c in alive))
        return PermRep(tuple(gens))


@dataclass(frozen=True)
class PermRep:
    """Images of the generators as permutations of ``range(degree)``."""

    gens: tuple

    @property
    def degree(self) -> int:
        return len(self.gens[0]) if self.gens else 1

    def act(self, point: int, word) -> int:
        for x in word:
            g = self.gens[abs(x) - 1]
            if x > 0:
                point = g[point]
            else:
                point = g.index(point)
        return point

    def is_trivial_on(self, word) -> bool:
        return all(self.act(p, word) == p for p in range(self.degree))

    def is_valid(self) -> bool:
        return all(sorted(g) == list(range(self.degree)) for g in self.gens)

    def certifies_nontrivial(self, relators, word) -> bool:
        """Every relator acts trivially while ``word`` does not."""
        return self.is_valid() and all(self.is_trivial_on(r) for r in relators) and not self.is_trivial_on(word)


def enumerate_cosets(ngens, relators, subgroup=(), max_cosets=100_000) -> CosetTable | None:
    try:
        return CosetTable(ngens, relators, subgroup, max_cosets).run()
    except CosetOverflow:
        return None


def coset_index(ngens, relators, subgroup=(), max_cosets=100_000) -> int | None:
    t = enumerate_cosets(ngens, relators, subgroup, max_cosets)
    if t is None:
        return None
    return sum(1 for c in range(len(t.table)) if t.live(c))


class StallingsGraph:
    """Folded graph of a finitely generated subgroup of a free group."""

    def __init__(self, words):
        self.out = {0: {}}
        nxt = 1
        for w in words:
            cur = 0
            for k, x in enumerate(w):
                if k == len(w) - 1:
                    tgt = 0
                else:
                    tgt = nxt
                    self.out[tgt] = {}
                    nxt += 1
                self._add(cur, x, tgt)
                cur = tgt
        self._fold()

    def _add(self, a, x, b):
        self.out[a].setdefault(x, set()).add(b)
        self.out[b].setdefault(-x, set()).add(a)

    def _fold(self):
        changed = True
        while changed:
            changed = False
            for v in list(self.out):
                if v not in self.out:
                    continue
                for x, ts in list(self.out[v].items()):
                    if len(ts) > 1:
                        a, b = sorted(ts)[:2]
                        self._identify(a, b)
                        changed = True
                        break
                if changed:
                    break

    def _identify(self, keep, drop):
        if keep == drop:
            return
        if drop == 0:
            keep, drop = drop, keep
        edges = self.out.pop(drop)
        for x, ts in edges.items():
            for t in ts:
                t2 = keep if t == drop else t
                self.out[t2][-x].discard(drop)
                self.out[t2][-x].add(keep)
                self.out[keep].setdefault(x, set()).add(t2)
        for v in self.out:
            for ts in self.out[v].values():
                if drop in ts:
                    ts.discard(drop)
                    ts.add(keep)

    def read(self, word):
        cur = 0
        for x in word:
            ts = self.out[cur].get(x)
            if not ts:
                return None
            cur = next(iter(ts))
        return cur

    def contains(self, word) -> bool:
        return self.read(word) == 0

    def is_whole_group(self, ngens: int) -> bool:
        return all(self.out[0].get(x) == {0} for k in range(1, ngens + 1) for x in (k, -k))
