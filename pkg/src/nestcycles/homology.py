"""Integer and mod-2 chain arithmetic for closed walks.

Everything is exact: Python integers throughout, no floating point.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .planar_map import Graph


def walk_to_chain(g: Graph, w) -> tuple:
    """Signed edge counts of ``w`` under the fixed edge orientation of ``g``."""
    seq = getattr(w, "seq", w)
    idx = g.edge_index
    c = [0] * len(g.edges)
    for a, b in zip(seq, seq[1:]):
        e = g.norm_edge(a, b)
        if e not in idx:
            raise ValueError(f"{a!r}{b!r} is not an edge")
        c[idx[e]] += 1 if e == (a, b) else -1
    return tuple(c)


def _identity(n):
    return [[int(i == j) for j in range(n)] for i in range(n)]


def snf(a: Sequence[Sequence[int]]):
    """Smith normal form.

    Returns ``(d, u, v)`` with ``u @ a @ v == d``, ``d`` diagonal with each entry
    dividing the next, and ``u``, ``v`` unimodular.
    """
    m = len(a)
    n = len(a[0]) if m else 0
    d = [list(map(int, row)) for row in a]
    u = _identity(m)
    v = _identity(n)

    def swap_rows(i, j):
        d[i], d[j] = d[j], d[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for row in d:
            row[i], row[j] = row[j], row[i]
        for row in v:
            row[i], row[j] = row[j], row[i]

    def add_row(src, dst, k):  # row dst += k * row src
        if k:
            d[dst] = [x + k * y for x, y in zip(d[dst], d[src])]
            u[dst] = [x + k * y for x, y in zip(u[dst], u[src])]

    def add_col(src, dst, k):
        if k:
            for row in d:
                row[dst] += k * row[src]
            for row in v:
                row[dst] += k * row[src]

    t = 0
    while t < min(m, n):
        # pivot: smallest nonzero absolute value in the remaining block
        piv = None
        for i in range(t, m):
            for j in range(t, n):
                x = d[i][j]
                if x and (piv is None or abs(x) < abs(d[piv[0]][piv[1]])):
                    piv = (i, j)
        if piv is None:
            break
        swap_rows(t, piv[0])
        swap_cols(t, piv[1])
        while True:
            done = True
            for i in range(t + 1, m):
                q = d[i][t] // d[t][t]
                add_row(t, i, -q)
                if d[i][t]:
                    done = False
            for j in range(t + 1, n):
                q = d[t][j] // d[t][t]
                add_col(t, j, -q)
                if d[t][j]:
                    done = False
            if done:
                # divisibility against the rest of the block
                bad = next(((i, j) for i in range(t + 1, m) for j in range(t + 1, n)
                            if d[i][j] % d[t][t]), None)
                if bad is None:
                    break
                add_row(bad[0], t, 1)
                continue
            # move the smallest remainder into the pivot position
            best = None
            for i in range(t, m):
                if d[i][t] and (best is None or abs(d[i][t]) < abs(d[best[0]][best[1]])):
                    best = (i, t)
            for j in range(t, n):
                if d[t][j] and (best is None or abs(d[t][j]) < abs(d[best[0]][best[1]])):
                    best = (t, j)
            swap_rows(t, best[0])
            swap_cols(t, best[1])
        if d[t][t] < 0:
            d[t] = [-x for x in d[t]]
            u[t] = [-x for x in u[t]]
        t += 1
    return d, u, v


def matmul(a, b):
    if not a:
        return []
    bt = list(zip(*b)) if b else []
    return [[sum(x * y for x, y in zip(row, col)) for col in bt] for row in a]


def det(a) -> int:
    """Exact determinant by fraction-free Bareiss elimination."""
    n = len(a)
    if n == 0:
        return 1
    m = [list(r) for r in a]
    sign, prev = 1, 1
    for k in range(n - 1):
        if m[k][k] == 0:
            sw = next((i for i in range(k + 1, n) if m[i][k]), None)
            if sw is None:
                return 0
            m[k], m[sw] = m[sw], m[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


def invariant_factors(a) -> list:
    d, _, _ = snf(a)
    return [d[i][i] for i in range(min(len(d), len(d[0]) if d else 0)) if d[i][i]]


def rank_Z(vectors) -> int:
    vs = [list(x) for x in vectors]
    if not vs:
        return 0
    return len(invariant_factors(vs))


@dataclass(frozen=True)
class LatticeVerdict:
    member: bool
    coefficients: tuple | None = None  # target == sum(c_i * V_i)
    functional: tuple | None = None  # integer functional f, and modulus
    modulus: int = 0  # f(V_i) == 0 mod modulus for all i, f(target) != 0 mod modulus (0 = exact)

    def check(self, target, vectors) -> bool:
        if self.member:
            s = [0] * len(target)
            for c, vec in zip(self.coefficients, vectors):
                for k, x in enumerate(vec):
                    s[k] += c * x
            return tuple(s) == tuple(target)
        f, q = self.functional, self.modulus

        def val(x):
            r = sum(a * b for a, b in zip(f, x))
            return r % q if q else r
        return all(val(vec) == 0 for vec in vectors) and val(target) != 0


def is_generated_Z(target, vectors) -> LatticeVerdict:
    """Integer lattice membership of ``target`` in the span of ``vectors``."""
    target = tuple(target)
    vecs = [tuple(x) for x in vectors]
    if not any(target):
        return LatticeVerdict(True, tuple(0 for _ in vecs))
    if not vecs:
        f = next(tuple(int(i == k) for i in range(len(target))) for k, x in enumerate(target) if x)
        return LatticeVerdict(False, functional=f)
    # columns are the generators: A (dim x k); solve A c = target via U A V = D.
    a = [list(col) for col in zip(*vecs)]
    d, u, v = snf(a)
    y = [sum(x * t for x, t in zip(row, target)) for row in u]
    r = sum(1 for i in range(min(len(d), len(d[0]))) if d[i][i])
    for i, yi in enumerate(y):
        di = d[i][i] if i < min(len(d), len(d[0])) else 0
        if (i >= r and yi != 0) or (i < r and yi % di):
            unit = _unit_functional(vecs, target)
            if unit is not None:
                return LatticeVerdict(False, functional=unit)
            return LatticeVerdict(False, functional=tuple(u[i]), modulus=0 if i >= r else di)
    z = [y[i] // d[i][i] for i in range(r)] + [0] * (len(vecs) - r)
    c = tuple(sum(row[j] * z[j] for j in range(len(z))) for row in v)
    return LatticeVerdict(True, c)


def _unit_functional(vecs, target):
    """A coordinate functional vanishing on every generator but not on the target."""
    for k, x in enumerate(target):
        if x and all(vec[k] == 0 for vec in vecs):
            return tuple(int(i == k) for i in range(len(target)))
    return None


def is_generated_Z_verdict(target, vectors) -> LatticeVerdict:
    v = is_generated_Z(target, vectors)
    if not v.member and not v.check(target, vectors):
        raise AssertionError("lattice obstruction failed to validate")
    return v


def rank_F2(vectors) -> int:
    rows = [_bits(x) for x in vectors]
    return len(_echelon(rows)[0])


def _bits(x) -> int:
    b = 0
    for i, c in enumerate(x):
        if c % 2:
            b |= 1 << i
    return b


def _echelon(rows):
    """Gaussian elimination over F2 on bitmasks, tracking combinations."""
    basis = []  # (pivot bit, row, combination mask over inputs)
    for idx, r in enumerate(rows):
        comb = 1 << idx
        for p, br, bc in basis:
            if r >> p & 1:
                r ^= br
                comb ^= bc
        if r:
            p = r.bit_length() - 1
            basis.append((p, r, comb))
    return basis, None


@dataclass(frozen=True)
class F2Verdict:
    member: bool
    combination: tuple | None = None  # indices of generators summing to target


def is_generated_F2(target, vectors) -> F2Verdict:
    t = _bits(target)
    basis, _ = _echelon([_bits(x) for x in vectors])
    comb = 0
    for p, br, bc in basis:
        if t >> p & 1:
            t ^= br
            comb ^= bc
    if t:
        return F2Verdict(False)
    return F2Verdict(True, tuple(i for i in range(len(vectors)) if comb >> i & 1))


def incidence_matrix(g: Graph) -> list:
    """Vertex-by-edge boundary matrix under the fixed orientation."""
    vi = g.vertex_index
    m = [[0] * len(g.edges) for _ in g.vertices]
    for j, (a, b) in enumerate(g.edges):
        m[vi[a]][j] -= 1
        m[vi[b]][j] += 1
    return m


def h1_rank(g: Graph) -> int:
    return len(g.edges) - len(g.vertices) + len(g.components())


def cycle_space_rank_F2(g: Graph) -> int:
    return h1_rank(g)


def boundary_torsion_free(g: Graph) -> bool:
    """The boundary map has only unit invariant factors, so H1 and its cokernel are free."""
    if not g.edges:
        return True
    return all(abs(x) == 1 for x in invariant_factors(incidence_matrix(g)))


def spans_cycle_lattice(g: Graph, walks) -> bool:
    """Whether the chains of ``walks`` generate all of H1(g; Z)."""
    chains = [walk_to_chain(g, w) for w in walks]
    if h1_rank(g) == 0:
        return True
    if not chains:
        return False
    f = invariant_factors(chains)
    if len(f) != h1_rank(g) or any(abs(x) != 1 for x in f):
        return False
    # rank and unit factors match the full cycle lattice only if every chain is a cycle
    return all(not any(row_dot(r, c) for r in incidence_matrix(g)) for c in chains)


def row_dot(r, c):
    return sum(a * b for a, b in zip(r, c))
