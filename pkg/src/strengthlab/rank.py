"""Partition-rank certificates, bounds and strength decompositions.

A certificate writes a d-tensor as a sum of products Q_i * R_i where Q_i is
multilinear in the blocks J_i and R_i in the complementary blocks. Upper
bounds always come with a certificate that is checked symbolically; lower
bounds come from the exact bias, b(T) >= q^(-pr(T)).
"""

from __future__ import annotations

import itertools
import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Sequence

import numpy as np

from . import linalg
from .config import resolve_threads
from .errors import BlockMismatch, DegreeZero, ZeroBias
from .expsum import tensor_bias
from .gf import FieldParams
from .poly import Polynomial, Tensor, compose, format_poly, multilinearize, parse

# exhaustive stage: max remainder-rank evaluations per call
DEFAULT_SEARCH_BUDGET = 4000
DEFAULT_RESTARTS = 8


@dataclass(frozen=True)
class Summand:
    J: tuple[int, ...]  # 0-based blocks of Q
    Q: Polynomial
    R: Polynomial


@dataclass(frozen=True)
class PartitionCertificate:
    blocks: int
    n: int
    summands: tuple[Summand, ...]

    @property
    def size(self) -> int:
        return len(self.summands)

    def to_json(self) -> dict:
        return {
            "blocks": self.blocks,
            "n": self.n,
            "summands": [
                {"J": [b + 1 for b in s.J], "Q": format_poly(s.Q), "R": format_poly(s.R)}
                for s in self.summands
            ],
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True, separators=(",", ":"))

    @classmethod
    def from_json(cls, data: dict, field: FieldParams, n: int | None = None) -> PartitionCertificate:
        d = int(data["blocks"])
        n = int(data.get("n", n if n is not None else 0))
        if n <= 0:
            raise BlockMismatch("certificate does not state the block width n")
        N = d * n
        summands = tuple(
            Summand(tuple(sorted(b - 1 for b in s["J"])), parse(s["Q"], field, N), parse(s["R"], field, N))
            for s in data["summands"]
        )
        return cls(d, n, summands)

    def concat(self, other: PartitionCertificate) -> PartitionCertificate:
        if (self.blocks, self.n) != (other.blocks, other.n):
            raise BlockMismatch("certificates over different block structures")
        return PartitionCertificate(self.blocks, self.n, self.summands + other.summands)


def _blocks_of(P: Polynomial, n: int) -> set[int]:
    return {v // n for v in P.variables}


def _multilinear_in(P: Polynomial, blocks: Sequence[int], n: int) -> bool:
    want = sorted(blocks)
    for m in P.terms:
        if any(e != 1 for _, e in m) or [v // n for v, _ in m] != want:
            return False
    return True


def verify_certificate(T: Tensor, cert: PartitionCertificate) -> bool:
    """True iff the summands are well formed and sum to T exactly."""
    d, n = T.d, T.n
    if cert.blocks != d or cert.n != n:
        raise BlockMismatch(f"certificate is for {cert.blocks} blocks of width {cert.n}")
    acc = Polynomial.zero(T.field, d * n)
    for s in cert.summands:
        J = set(s.J)
        comp = sorted(set(range(d)) - J)
        if not J or not comp or not J <= set(range(d)):
            raise BlockMismatch(f"J = {sorted(J)} is not a proper nonempty subset of the blocks")
        if s.Q.n != d * n or s.R.n != d * n:
            raise BlockMismatch("factor lives on the wrong number of variables")
        if not _blocks_of(s.Q, n) <= J or not _blocks_of(s.R, n) <= set(comp):
            raise BlockMismatch("factor uses variables outside its declared blocks")
        if not (_multilinear_in(s.Q, sorted(J), n) and _multilinear_in(s.R, comp, n)):
            return False
        acc = acc + s.Q * s.R
    return acc == T.base


# --- dense tensor helpers ---

def to_dense(T: Tensor) -> np.ndarray:
    arr = np.zeros((T.n,) * T.d, dtype=np.int64)
    for m, c in T.base.terms.items():
        arr[tuple(v % T.n for v, _ in m)] = c
    return arr


def _dense_poly(arr: np.ndarray, blocks: Sequence[int], n: int, N: int, field: FieldParams) -> Polynomial:
    terms = {}
    for idx in zip(*np.nonzero(arr)):
        terms[tuple((b * n + int(i), 1) for b, i in zip(blocks, idx))] = int(arr[idx])
    return Polynomial(field, N, terms)


def splits(d: int) -> list[tuple[int, ...]]:
    """Proper block subsets containing block 0 (one per unordered split)."""
    rest = range(1, d)
    return [(0,) + c for k in range(d - 1) for c in itertools.combinations(rest, k)]


def _complement(J: Sequence[int], d: int) -> tuple[int, ...]:
    return tuple(b for b in range(d) if b not in J)


def flatten(arr: np.ndarray, J: Sequence[int]) -> np.ndarray:
    d, n = arr.ndim, arr.shape[0] if arr.ndim else 0
    comp = _complement(J, d)
    return arr.transpose(tuple(J) + comp).reshape(n ** len(J), n ** len(comp))


def unflatten(M: np.ndarray, J: Sequence[int], d: int, n: int) -> np.ndarray:
    order = tuple(J) + _complement(J, d)
    return M.reshape((n,) * d).transpose(np.argsort(order))


def flattening_rank(T: Tensor | np.ndarray, J: Sequence[int], field: FieldParams | None = None) -> int:
    if isinstance(T, Tensor):
        field, T = T.field, to_dense(T)
    return linalg.rank(flatten(T, J), field)


class _Ctx:
    def __init__(self, field: FieldParams, d: int, n: int):
        self.field, self.d, self.n = field, d, n
        self.add, self.mul = field.add_table, field.mul_table
        self.neg = np.array([field.neg(a) for a in range(field.q)], dtype=np.int64)

    def sub(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        return self.add[a, self.neg[b]]

    def outer(self, u: np.ndarray, v: np.ndarray) -> np.ndarray:
        return self.mul[u[:, None], v[None, :]]

    def summand(self, J, u: np.ndarray, v: np.ndarray) -> Summand:
        d, n, N = self.d, self.n, self.d * self.n
        comp = _complement(J, d)
        Q = _dense_poly(u.reshape((n,) * len(J)), J, n, N, self.field)
        R = _dense_poly(v.reshape((n,) * len(comp)), comp, n, N, self.field)
        return Summand(tuple(J), Q, R)

    def factor_pieces(self, arr: np.ndarray, J) -> list[Summand]:
        """Rank-factorisation summands of the J-flattening."""
        C, R = linalg.rank_factor(flatten(arr, J), self.field)
        return [self.summand(J, C[:, k], R[k]) for k in range(R.shape[0])]

    def best_flattening(self, arr: np.ndarray) -> tuple[int, tuple[int, ...]]:
        return min((linalg.rank(flatten(arr, J), self.field), J) for J in splits(self.d))


def _nonzero_vectors(q: int, length: int, projective: bool):
    for tup in itertools.product(range(q), repeat=length):
        if any(tup):
            if projective and tup[next(i for i, x in enumerate(tup) if x)] != 1:
                continue
            yield np.array(tup, dtype=np.int64)


def _rank_one_pieces(ctx: _Ctx, J, limit: int):
    d, n, q = ctx.d, ctx.n, ctx.field.q
    a, b = n ** len(J), n ** (d - len(J))
    if (q**a - 1) // (q - 1) * (q**b - 1) > limit:
        return None
    out = []
    for u in _nonzero_vectors(q, a, True):
        for v in _nonzero_vectors(q, b, False):
            out.append((J, u, v, unflatten(ctx.outer(u, v), J, d, n)))
    return out


def _exhaustive(ctx: _Ctx, arr: np.ndarray, best: int, budget: int) -> list[list[Summand]]:
    """Certificates of the form (k rank-one pieces) + (remainder flattening)."""
    found = []
    spent = 0
    all_splits = splits(ctx.d)
    if len(all_splits) < 2:
        return found
    for last in all_splits:
        pieces = []
        ok = True
        for J in all_splits:
            if J == last:
                continue
            got = _rank_one_pieces(ctx, J, budget)
            if got is None:
                ok = False
                break
            pieces.extend(got)
        if not ok:
            continue
        k = 1
        while k < best and spent < budget:
            for combo in itertools.combinations(pieces, k):
                if spent >= budget:
                    break
                spent += 1
                rem = arr
                for _, _, _, dense in combo:
                    rem = ctx.sub(rem, dense)
                r = linalg.rank(flatten(rem, last), ctx.field)
                if k + r < best:
                    best = k + r
                    cert = [ctx.summand(J, u, v) for J, u, v, _ in combo]
                    found.append(cert + ctx.factor_pieces(rem, last))
            k += 1
    return found


def _greedy(ctx: _Ctx, arr: np.ndarray) -> list[Summand]:
    """Slice peeling: remove the row or column of some flattening with most terms,
    stopping where the remainder's best flattening finishes cheapest."""
    d, n = ctx.d, ctx.n
    pieces: list[Summand] = []
    r0, J0 = ctx.best_flattening(arr)
    best, best_cert = r0, ctx.factor_pieces(arr, J0)
    rem = arr
    while rem.any() and len(pieces) + 1 < best:
        choice = None
        for J in splits(d):
            M = flatten(rem, J)
            rows = np.count_nonzero(M, axis=1)
            cols = np.count_nonzero(M, axis=0)
            i, j = int(np.argmax(rows)), int(np.argmax(cols))
            for gain, kind, idx in ((int(rows[i]), 0, i), (int(cols[j]), 1, j)):
                if choice is None or gain > choice[0]:
                    choice = (gain, J, kind, idx, M)
        _, J, kind, idx, M = choice
        if kind == 0:
            u = np.zeros(M.shape[0], dtype=np.int64)
            u[idx] = 1
            v = M[idx].copy()
        else:
            u = M[:, idx].copy()
            v = np.zeros(M.shape[1], dtype=np.int64)
            v[idx] = 1
        pieces.append(ctx.summand(J, u, v))
        rem = ctx.sub(rem, unflatten(ctx.outer(u, v), J, d, n))
        r, Jr = ctx.best_flattening(rem)
        if len(pieces) + r < best:
            best, best_cert = len(pieces) + r, pieces + ctx.factor_pieces(rem, Jr)
    return best_cert


def _random_gl(rng: np.random.Generator, field: FieldParams, n: int) -> np.ndarray:
    while True:
        g = rng.integers(0, field.q, size=(n, n))
        if linalg.rank(g, field) == n:
            return g


def _restart(T: Tensor, seed: int, restart: int) -> list[Summand]:
    fld, d, n = T.field, T.d, T.n
    ctx = _Ctx(fld, d, n)
    if restart == 0:
        return _greedy(ctx, to_dense(T))
    rng = np.random.Generator(np.random.Philox(key=(int(seed) << 64) | restart))
    N = d * n
    # T'(x) = T(g x) blockwise; pull the certificate back through g^-1
    fwd, back = [], []
    for b in range(d):
        g = _random_gl(rng, fld, n)
        gi = _inverse(g, fld)
        for i in range(n):
            fwd.append(Polynomial(fld, N, {((b * n + j, 1),): int(g[i, j]) for j in range(n) if g[i, j]}))
            back.append(Polynomial(fld, N, {((b * n + j, 1),): int(gi[i, j]) for j in range(n) if gi[i, j]}))
    Tp = Tensor(compose(T.base, fwd), d, n)
    cert = _greedy(ctx, to_dense(Tp))
    return [Summand(s.J, compose(s.Q, back), compose(s.R, back)) for s in cert]


def _inverse(g: np.ndarray, field: FieldParams) -> np.ndarray:
    n = g.shape[0]
    aug = np.concatenate([g, np.eye(n, dtype=np.int64)], axis=1)
    R, _ = linalg.rref(aug, field)
    return R[:, n:]


def _normalise(cert: PartitionCertificate) -> PartitionCertificate:
    return PartitionCertificate(cert.blocks, cert.n,
                                tuple(sorted(cert.summands, key=lambda s: json.dumps(
                                    [s.J, format_poly(s.Q), format_poly(s.R)]))))


def prank_upper_search(T: Tensor, budget: int = DEFAULT_SEARCH_BUDGET, seed: int = 0,
                       restarts: int = DEFAULT_RESTARTS, threads: int | None = None
                       ) -> PartitionCertificate | None:
    """Best verified certificate found; never a claim of minimality."""
    d, n = T.d, T.n
    if T.base.is_zero:
        return PartitionCertificate(d, n, ())
    if d < 2:
        return None
    with ThreadPoolExecutor(max_workers=resolve_threads(threads)) as ex:
        raw = list(ex.map(lambda r: _restart(T, seed, r), range(max(1, restarts))))
    best = min(len(c) for c in raw)
    ctx = _Ctx(T.field, d, n)
    raw.extend(_exhaustive(ctx, to_dense(T), best, budget))
    candidates = []
    for summands in raw:
        cert = _normalise(PartitionCertificate(d, n, tuple(summands)))
        if verify_certificate(T, cert):
            candidates.append(cert)
    if not candidates:
        return None
    size = min(c.size for c in candidates)
    return min((c for c in candidates if c.size == size), key=lambda c: c.dumps())


def prank_bilinear(T: Tensor) -> tuple[int, PartitionCertificate]:
    """Matrix rank of a bilinear form with an outer-product certificate."""
    if T.d != 2:
        raise BlockMismatch("bilinear tensor expected")
    ctx = _Ctx(T.field, 2, T.n)
    pieces = ctx.factor_pieces(to_dense(T), (0,))
    cert = PartitionCertificate(2, T.n, tuple(pieces))
    assert verify_certificate(T, cert)
    return len(pieces), cert


def ceil_neg_log(b: Fraction, q: int) -> int:
    """Exact ceil(-log_q b) for 0 < b <= 1."""
    k = 0
    while b * q**k < 1:
        k += 1
    return k


def prank_lower(T: Tensor, *, budget: int | None = None, threads: int | None = None) -> int:
    """ceil(-log_q b(T)), a lower bound for pr(T)."""
    if T.base.is_zero:
        return 0
    b = tensor_bias(T, budget=budget, threads=threads)
    if b == 0:
        raise ZeroBias("b(T) = 0; the analytic lower bound is unbounded")
    return ceil_neg_log(b, T.field.q)


def bias_margin(T: Tensor, r: int, *, budget: int | None = None, threads: int | None = None) -> Fraction:
    """b(T) * q^r; a size-r certificate forces this to be at least 1."""
    return tensor_bias(T, budget=budget, threads=threads) * T.field.q**r


@dataclass
class RankBounds:
    lower: int
    upper: int | None
    C_d: int
    pr_lower: int
    pr_upper: int | None
    certificate: PartitionCertificate | None = dc_field(default=None, repr=False)
    method: dict = dc_field(default_factory=dict)

    def __post_init__(self) -> None:
        assert self.upper is None or self.lower <= self.upper

    def to_json(self) -> dict:
        return {
            "lower": self.lower,
            "upper": self.upper,
            "C_d": self.C_d,
            "pr_lower": self.pr_lower,
            "pr_upper": self.pr_upper,
            "certificate": self.certificate.to_json() if self.certificate else None,
            "method": self.method,
        }


def default_C(d: int, p: int) -> int:
    return 1 if p > d else 4**d


def ncrank_bounds(P: Polynomial, *, C_d: int | None = None, budget: int | None = None,
                  search_budget: int = DEFAULT_SEARCH_BUDGET, seed: int = 0,
                  threads: int | None = None) -> RankBounds:
    """Sandwich r_nc(P) between ceil(pr_lower / C_d) and the best certificate for P~."""
    d = P.degree
    if P.is_zero or d == 0:
        return RankBounds(0, 0, 1, 0, 0, method={"reason": "constant"})
    if d == 1:
        raise DegreeZero("rank of a degree-1 polynomial is infinite")
    C = C_d if C_d is not None else default_C(d, P.field.p)
    T = multilinearize(P)
    lo = prank_lower(T, budget=budget, threads=threads)
    if d == 2:
        up, cert = prank_bilinear(T)
        how = "gaussian_elimination"
    else:
        cert = prank_upper_search(T, search_budget, seed, threads=threads)
        up = cert.size if cert is not None else None
        how = "certificate_search"
    lower = math.ceil(Fraction(lo, C))
    upper = up
    if upper is not None:
        lower = min(lower, upper)
    return RankBounds(lower, upper, C, lo, up, cert,
                      {"lower": "bias", "upper": how, "exact_pr": lo == up})


def strength_verify(P: Polynomial, summands: Sequence[tuple[Polynomial, Polynomial]]) -> bool:
    d = P.degree
    acc = Polynomial.zero(P.field, P.n)
    for Q, R in summands:
        if Q.degree >= d or R.degree >= d:
            return False
        acc = acc + Q * R
    return acc == P
