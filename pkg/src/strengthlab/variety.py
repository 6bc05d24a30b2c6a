"""Point counts of X = {P_1 = ... = P_c = 0} and of its singular locus over F_{p^s}."""

from __future__ import annotations

import csv
import io
import itertools
import math
import time
from dataclasses import dataclass, field as dc_field
from typing import Sequence

import numpy as np

from . import kernels
from .config import resolve_budget, resolve_threads
from .errors import BudgetExceeded, EmptyTable, MoreEquationsThanVariables, NonPrimeBase
from .gf import FieldParams, field_create
from .poly import Polynomial, formal_jacobian

EMPTY = "empty"
SMOOTH = "smooth"


def _members(family) -> list[Polynomial]:
    return list(getattr(family, "members", family))


def lift(family, s: int) -> list[Polynomial]:
    """Members over F_{p^s}; the base field must be prime when s > 1."""
    members = _members(family)
    fld = members[0].field
    if s == 1:
        return members
    if fld.s != 1:
        raise NonPrimeBase("extension counting needs a prime base field")
    big = field_create(fld.p, s)
    return [P.with_field(big) for P in members]


def _check(members: Sequence[Polynomial], budget: int | None) -> int:
    size = members[0].field.q ** members[0].n
    limit = resolve_budget(budget)
    if size > limit:
        raise BudgetExceeded(f"{size} points exceed the budget {limit}")
    return size


def _zero_count(members: Sequence[Polynomial], threads: int | None, backend: str | None) -> int:
    size = members[0].field.q ** members[0].n
    cf = kernels.compile_family(list(members))
    kern = kernels.get_backend(backend)
    parts = kernels.run_sharded(lambda a, b: kern.zero_count(cf, a, b),
                                kernels.shard_bounds(size, members[0].field.q), resolve_threads(threads))
    return int(sum(parts))


def count_points(family, s: int = 1, *, budget: int | None = None, threads: int | None = None,
                 backend: str | None = None) -> int:
    """#{v in F_{p^s}^n : P_i(v) = 0 for all i}."""
    members = lift(family, s)
    _check(members, budget)
    return _zero_count(members, threads, backend)


def _leibniz(rows: Sequence[Sequence[Polynomial]]) -> Polynomial:
    c = len(rows)
    fld, n = rows[0][0].field, rows[0][0].n
    acc = Polynomial.zero(fld, n)
    for perm in itertools.permutations(range(c)):
        inv = sum(1 for i in range(c) for j in range(i + 1, c) if perm[i] > perm[j])
        term = Polynomial.constant(fld, n, -1 if inv % 2 else 1)
        for i, j in enumerate(perm):
            term = term * rows[i][j]
        acc = acc + term
    return acc


def jacobian_minors(family) -> list[Polynomial]:
    """All c x c minors of the formal Jacobian, columns in lexicographic order."""
    J = formal_jacobian(family)
    c, n = len(J), len(J[0])
    return [_leibniz([[J[i][j] for j in cols] for i in range(c)])
            for cols in itertools.combinations(range(n), c)]


def _det_points(mats: np.ndarray, fld: FieldParams) -> np.ndarray:
    """Determinants of a stack (N, c, c) of matrices, Leibniz expansion on tables."""
    N, c, _ = mats.shape
    add, mul = fld.add_table, fld.mul_table
    minus = fld.from_int(-1)
    out = np.zeros(N, dtype=np.int64)
    for perm in itertools.permutations(range(c)):
        inv = sum(1 for i in range(c) for j in range(i + 1, c) if perm[i] > perm[j])
        term = np.full(N, minus if inv % 2 else 1, dtype=np.int64)
        for i, j in enumerate(perm):
            term = mul[term, mats[:, i, j]]
        out = add[out, term]
    return out


def _pairing_shard(members, partial_cf, cf, kern, n: int, c: int, a: int, b: int) -> tuple[int, int]:
    fld = members[0].field
    q = fld.q
    mask = kern.zero_mask(cf, a, b)
    idx = np.nonzero(mask)[0] + a
    if idx.size == 0:
        return 0, 0
    pts = np.empty((idx.size, n), dtype=np.int64)
    rest = idx.copy()
    for j in range(n):
        pts[:, j] = rest % q
        rest //= q
    # containment: every point kept satisfies all defining equations
    assert not kern.eval_points(cf, pts).any()
    jac = kern.eval_points(partial_cf, pts).astype(np.int64).reshape(c, n, idx.size)
    singular = np.ones(idx.size, dtype=bool)
    for cols in itertools.combinations(range(n), c):
        mats = np.transpose(jac[:, list(cols), :], (2, 0, 1))
        singular &= _det_points(mats, fld) == 0
        if not singular.any():
            break
    return int(idx.size), int(np.count_nonzero(singular))


def count_both(family, s: int = 1, method: str = "pairing", *, budget: int | None = None,
               threads: int | None = None, backend: str | None = None) -> tuple[int, int]:
    """(|X(F_{p^s})|, |X^sing(F_{p^s})|)."""
    members = lift(family, s)
    c, n = len(members), members[0].n
    if c > n:
        raise MoreEquationsThanVariables(f"{c} equations in {n} variables")
    size = _check(members, budget)
    threads = resolve_threads(threads)
    if method == "minors":
        minors = [M for M in jacobian_minors(members) if not M.is_zero]
        N = _zero_count(members, threads, backend)
        Ns = _zero_count(members + minors, threads, backend)
        return N, Ns
    if method != "pairing":
        raise ValueError(f"unknown method {method!r}")
    kern = kernels.get_backend(backend)
    cf = kernels.compile_family(members)
    partials = [P.partial(j) for P in members for j in range(n)]
    pcf = kernels.compile_family(partials)
    parts = kernels.run_sharded(
        lambda a, b: _pairing_shard(members, pcf, cf, kern, n, c, a, b),
        kernels.shard_bounds(size, members[0].field.q), threads)
    return sum(x for x, _ in parts), sum(y for _, y in parts)


def singular_points(family, s: int = 1, method: str = "pairing", **kw) -> int:
    return count_both(family, s, method, **kw)[1]


def char_degenerate(family) -> bool:
    """Some variable occurs in some P_i only with exponents divisible by p."""
    for P in _members(family):
        p = P.field.p
        exps: dict[int, list[int]] = {}
        for m in P.terms:
            for v, e in m:
                exps.setdefault(v, []).append(e)
        if any(all(e % p == 0 for e in es) for es in exps.values()):
            return True
    return False


@dataclass
class CountRow:
    s: int
    q_s: int
    N: int
    N_sing: int
    elapsed_ms: float


@dataclass
class PointCountTable:
    field: FieldParams
    n: int
    rows: list[CountRow] = dc_field(default_factory=list)

    def __post_init__(self) -> None:
        for r in self.rows:
            assert r.N_sing <= r.N <= r.q_s**self.n

    def to_csv(self, timing: bool = True) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["s", "q_s", "N_variety", "N_singular", "elapsed_ms"])
        for r in self.rows:
            w.writerow([r.s, r.q_s, r.N, r.N_sing, f"{r.elapsed_ms:.3f}" if timing else ""])
        return buf.getvalue()

    def to_json(self, timing: bool = True) -> list[dict]:
        return [
            {"s": r.s, "q_s": r.q_s, "N_variety": r.N, "N_singular": r.N_sing,
             "elapsed_ms": round(r.elapsed_ms, 3) if timing else None}
            for r in self.rows
        ]


def point_count_table(family, s_max: int, method: str = "pairing", *, budget: int | None = None,
                      threads: int | None = None, backend: str | None = None) -> PointCountTable:
    members = _members(family)
    fld, n = members[0].field, members[0].n
    table = PointCountTable(fld, n)
    for s in range(1, s_max + 1):
        t0 = time.perf_counter()
        N, Ns = count_both(members, s, method, budget=budget, threads=threads, backend=backend)
        table.rows.append(CountRow(s, fld.q**s, N, Ns, (time.perf_counter() - t0) * 1e3))
    return table


@dataclass
class DimEstimate:
    value: int | None
    ratio: float | None
    low_confidence: bool
    per_row: list[float | None]

    @property
    def empty(self) -> bool:
        return self.value is None

    def to_json(self):
        return {
            "estimate": EMPTY if self.empty else self.value,
            "ratio": self.ratio,
            "low_confidence": self.low_confidence,
            "per_row": self.per_row,
        }


def dim_estimate(table: PointCountTable, which: str = "variety") -> DimEstimate:
    """round(log_q N_s / s) at the largest s with a nonzero count."""
    if not table.rows:
        raise EmptyTable("no rows to estimate from")
    q = table.field.q
    counts = [(r.s, r.N if which == "variety" else r.N_sing) for r in table.rows]
    per = [math.log(N, q) / s if N else None for s, N in counts]
    live = [(s, N) for s, N in counts if N]
    if not live:
        return DimEstimate(None, None, False, per)
    s_star, N_star = live[-1]
    ratio = math.log(N_star, q) / s_star
    est = round(ratio)
    rounded = [round(x) for x in per if x is not None]
    monotone = rounded == sorted(rounded) or rounded == sorted(rounded, reverse=True)
    flag = abs(ratio - est) > 0.2 or (len(set(rounded)) > 1 and not monotone)
    return DimEstimate(est, ratio, flag, per)


@dataclass
class VarietyReport:
    dim_X: DimEstimate
    dim_sing: DimEstimate
    kappa: int | str | None
    table: PointCountTable
    warnings: list[str] = dc_field(default_factory=list)

    def to_json(self, timing: bool = True) -> dict:
        return {
            "dim_X": self.dim_X.to_json(),
            "dim_sing": self.dim_sing.to_json(),
            "kappa": self.kappa,
            "warnings": self.warnings,
            "rows": self.table.to_json(timing),
        }


def codim_singular(family, s_max: int = 2, method: str = "pairing", *, budget: int | None = None,
                   threads: int | None = None, backend: str | None = None) -> VarietyReport:
    table = point_count_table(family, s_max, method, budget=budget, threads=threads, backend=backend)
    dx = dim_estimate(table, "variety")
    ds = dim_estimate(table, "singular")
    warnings = []
    if char_degenerate(family):
        warnings.append("char-degenerate")
    if dx.low_confidence or ds.low_confidence:
        warnings.append("low-confidence")
    if dx.empty:
        kappa: int | str | None = EMPTY
    elif ds.empty:
        kappa = SMOOTH
    else:
        kappa = dx.value - ds.value
    return VarietyReport(dx, ds, kappa, table, warnings)
