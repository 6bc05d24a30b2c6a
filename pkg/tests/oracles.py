"""Slow reference implementations used to freeze and cross-check values.

Nothing here imports the package's arithmetic: field elements are coefficient
lists multiplied schoolbook-style and reduced by long division, the trace is
the sum of Frobenius powers, and sums run over explicit point loops.
"""

from __future__ import annotations

import cmath
import itertools
import math


class NaiveField:
    def __init__(self, p: int, s: int):
        self.p, self.s, self.q = p, s, p**s
        self.modulus = self._find_modulus() if s > 1 else [0, 1]

    def _find_modulus(self):
        # irreducible = not a product of two monic polynomials of positive degree
        p, s = self.p, self.s
        products = set()
        for a in range(1, s):
            b = s - a
            for ca in itertools.product(range(p), repeat=a):
                for cb in itertools.product(range(p), repeat=b):
                    products.add(tuple(_mul(list(ca) + [1], list(cb) + [1], p)))
        for c in itertools.product(range(p), repeat=s):
            cand = tuple(list(c) + [1])
            if cand not in products:
                return list(cand)
        raise AssertionError("no irreducible found")

    def vec(self, a: int) -> list[int]:
        out = []
        for _ in range(self.s):
            a, r = divmod(a, self.p)
            out.append(r)
        return out

    def id(self, v) -> int:
        v = _reduce(list(v), self.modulus, self.p)
        out = 0
        for c in reversed(v + [0] * (self.s - len(v))):
            out = out * self.p + c
        return out

    def add(self, a: int, b: int) -> int:
        return self.id([x + y for x, y in zip(self.vec(a), self.vec(b))])

    def mul(self, a: int, b: int) -> int:
        return self.id(_mul(self.vec(a), self.vec(b), self.p))

    def pow(self, a: int, e: int) -> int:
        r = 1
        for _ in range(e):
            r = self.mul(r, a)
        return r

    def trace(self, a: int) -> int:
        acc, x = 0, a
        for _ in range(self.s):
            acc = self.add(acc, x)
            x = self.pow(x, self.p)
        v = self.vec(acc)
        assert all(c == 0 for c in v[1:])
        return v[0]


def _mul(a, b, p):
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] = (out[i + j] + x * y) % p
    return out


def _reduce(a, m, p):
    a = [x % p for x in a]
    d = len(m) - 1
    for k in range(len(a) - 1, d - 1, -1):
        c = a[k]
        if c:
            for i in range(d + 1):
                a[k - d + i] = (a[k - d + i] - c * m[i]) % p
    return (a[:d] + [0] * d)[:d]


def naive_eval(P, pt, F: NaiveField) -> int:
    acc = 0
    for m, c in P.terms.items():
        v = c
        for var, e in m:
            v = F.mul(v, F.pow(pt[var], e))
        acc = F.add(acc, v)
    return acc


def all_points(q: int, n: int):
    for rev in itertools.product(range(q), repeat=n):
        yield tuple(reversed(rev))


def naive_trace_counts(P, F: NaiveField) -> list[int]:
    out = [0] * F.p
    for pt in all_points(F.q, P.n):
        out[F.trace(naive_eval(P, pt, F))] += 1
    return out


def naive_bias(P, F: NaiveField) -> complex:
    tot = sum(cmath.exp(2j * math.pi * F.trace(naive_eval(P, pt, F)) / F.p) for pt in all_points(F.q, P.n))
    return tot / F.q**P.n


def naive_gowers_power(P, d: int, F: NaiveField) -> complex:
    """E_{x, v_1..v_d} prod_w C^{|w|} psi(P(x + w.v)), straight from the definition."""
    n, q = P.n, F.q
    pts = list(all_points(q, n))
    neg1 = F.id([F.p - 1])
    acc = 0
    for x in pts:
        for vs in itertools.product(pts, repeat=d):
            e = 0
            for w in itertools.product((0, 1), repeat=d):
                y = list(x)
                for i, wi in enumerate(w):
                    if wi:
                        y = [F.add(a, b) for a, b in zip(y, vs[i])]
                t = F.trace(naive_eval(P, y, F))
                e += -t if sum(w) % 2 else t
            acc += cmath.exp(2j * math.pi * (e % F.p) / F.p)
    del neg1
    return acc / q ** (n * (d + 1))


def naive_matrix_rank(M, p: int) -> int:
    """Rank over F_p by fraction-free elimination on Python ints."""
    A = [[x % p for x in row] for row in M]
    r = 0
    cols = len(A[0]) if A else 0
    for c in range(cols):
        piv = next((i for i in range(r, len(A)) if A[i][c]), None)
        if piv is None:
            continue
        A[r], A[piv] = A[piv], A[r]
        inv = pow(A[r][c], p - 2, p)
        A[r] = [x * inv % p for x in A[r]]
        for i in range(len(A)):
            if i != r and A[i][c]:
                f = A[i][c]
                A[i] = [(x - f * y) % p for x, y in zip(A[i], A[r])]
        r += 1
    return r


def naive_counts(polys, F: NaiveField) -> tuple[int, int]:
    """(|X|, |X_sing|) with the Jacobian rank computed pointwise over F_p (s = 1 only)."""
    n = polys[0].n
    c = len(polys)
    N = Ns = 0
    for pt in all_points(F.q, n):
        if any(naive_eval(P, pt, F) for P in polys):
            continue
        N += 1
        J = [[naive_eval(P.partial(j), pt, F) for j in range(n)] for P in polys]
        if naive_matrix_rank(J, F.p) < c:
            Ns += 1
    return N, Ns


def naive_partition_ranks(q: int, n: int, d: int = 3) -> dict[tuple[int, ...], int]:
    """Exact pr of every d-tensor in (F_q^n)^{otimes d}, by BFS over sums of split pieces.

    Tensors are flat tuples in C order; a piece is an outer product of a tensor on
    blocks J (J containing block 0) with one on the complement.
    """
    size = n**d
    shape = (n,) * d

    def flat_index(idx):
        k = 0
        for i in idx:
            k = k * n + i
        return k

    pieces = set()
    blocks = list(range(d))
    for r in range(1, d):
        for J in itertools.combinations(blocks, r):
            if 0 not in J:
                continue
            K = [b for b in blocks if b not in J]
            for a in itertools.product(range(q), repeat=n ** len(J)):
                if not any(a):
                    continue
                for b in itertools.product(range(q), repeat=n ** len(K)):
                    if not any(b):
                        continue
                    t = [0] * size
                    for idx in itertools.product(range(n), repeat=d):
                        ia = 0
                        for j in J:
                            ia = ia * n + idx[j]
                        ib = 0
                        for k in K:
                            ib = ib * n + idx[k]
                        t[flat_index(idx)] = a[ia] * b[ib] % q
                    pieces.add(tuple(t))
    del shape
    zero = (0,) * size
    rank = {zero: 0}
    frontier = [zero]
    level = 0
    while frontier and len(rank) < q**size:
        level += 1
        nxt = []
        for t in frontier:
            for pc in pieces:
                u = tuple((x + y) % q for x, y in zip(t, pc))
                if u not in rank:
                    rank[u] = level
                    nxt.append(u)
        frontier = nxt
    return rank
