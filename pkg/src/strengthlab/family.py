"""Families of polynomials: spans, graded bases, fibers and shift searches."""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Iterator, Sequence

import numpy as np

from . import linalg
from .config import MAX_FIBERS, resolve_budget, resolve_threads
from .errors import (
    BudgetExceeded,
    ConstantInSpan,
    DimensionMismatch,
    FieldMismatch,
    LinearlyDependent,
    NonpositiveConstant,
)
from .expsum import (
    INF,
    CyclotomicSum,
    FiberDistribution,
    analytic_rank,
    joint_distribution,
    json_number,
)
from .gf import FieldParams, format_element
from .poly import Monomial, Polynomial, delta, difference_form, grlex_key


def coefficient_matrix(polys: Sequence[Polynomial]) -> tuple[np.ndarray, list[Monomial]]:
    """Rows are coefficient vectors over the union of monomials, grlex descending."""
    monos = sorted({m for P in polys for m in P.terms}, key=grlex_key, reverse=True)
    col = {m: i for i, m in enumerate(monos)}
    M = np.zeros((len(polys), len(monos)), dtype=np.int64)
    for r, P in enumerate(polys):
        for m, c in P.terms.items():
            M[r, col[m]] = c
    return M, monos


class PolyFamily:
    """An ordered family (P_1, ..., P_c) on a common space."""

    def __init__(self, members: Sequence[Polynomial], allow_dependent: bool = False):
        members = list(members)
        if not members:
            raise ValueError("a family needs at least one member")
        fld, n = members[0].field, members[0].n
        for P in members:
            if P.field != fld:
                raise FieldMismatch("family members over different fields")
            if P.n != n:
                raise DimensionMismatch("family members on different spaces")
        self.members = tuple(members)
        self.field: FieldParams = fld
        self.n = n
        self.degrees = tuple(P.degree for P in members)
        if not allow_dependent and self.dimension() != len(members):
            raise LinearlyDependent("family members are linearly dependent")

    @property
    def c(self) -> int:
        return len(self.members)

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self):
        return iter(self.members)

    def dimension(self) -> int:
        M, _ = coefficient_matrix(self.members)
        return linalg.rank(M, self.field) if M.size else 0

    def combo(self, l: Sequence[int]) -> Polynomial:
        f = self.field
        acc = Polynomial.zero(f, self.n)
        for c, P in zip(l, self.members):
            if c:
                acc = acc + P.scale(c)
        return acc


def independent(polys: Sequence[Polynomial]) -> list[Polynomial]:
    """Greedy sub-list of linearly independent members (zero ones dropped)."""
    kept: list[Polynomial] = []
    for P in polys:
        if P.is_zero:
            continue
        M, _ = coefficient_matrix(kept + [P])
        if linalg.rank(M, P.field) == len(kept) + 1:
            kept.append(P)
    return kept


def projective_vectors(q: int, c: int) -> Iterator[tuple[int, ...]]:
    """Nonzero l in F_q^c with first nonzero coordinate 1, in rank order."""
    for idx in range(1, q**c):
        l = []
        for _ in range(c):
            idx, r = divmod(idx, q)
            l.append(r)
        if l[next(i for i, x in enumerate(l) if x)] == 1:
            yield tuple(l)


def span_representatives(F: PolyFamily) -> Iterator[tuple[tuple[int, ...], Polynomial]]:
    """(l, sum l_i P_i), one per projective class of nonzero coefficient vectors."""
    q = F.field.q
    if q**F.c > MAX_FIBERS:
        raise BudgetExceeded(f"q^c = {q**F.c} exceeds {MAX_FIBERS}")
    for l in projective_vectors(q, F.c):
        yield l, F.combo(l)


# --- Fourier side ---

def _dual_classes(dist: FiberDistribution, l: Sequence[int]) -> CyclotomicSum:
    fld = dist.field
    q, p, c = fld.q, fld.p, dist.c
    lam = np.arange(q**c, dtype=np.int64)
    add, mul = fld.add_table, fld.mul_table
    dot = np.zeros(q**c, dtype=np.int64)
    rest = lam.copy()
    for k in range(c):
        digit = rest % q
        rest //= q
        dot = add[dot, mul[digit, int(l[k])]]
    counts = np.bincount(fld.trace_array[dot], weights=np.asarray(dist.counts, dtype=np.float64),
                         minlength=p)
    exact = [0] * p
    # float weights are exact up to 2^53; redo in ints when totals are huge
    if dist.total >= 1 << 52:
        cl = np.asarray(fld.trace_array[dot])
        for i, cnt in enumerate(dist.counts):
            exact[int(cl[i])] += cnt
    else:
        exact = [int(round(x)) for x in counts]
    return CyclotomicSum(p, tuple(exact), dist.total)


def fiber_fourier(dist: FiberDistribution, ls: Sequence[Sequence[int]] | None = None
                  ) -> dict[tuple[int, ...], CyclotomicSum]:
    """f^(l) = sum_lambda psi(<lambda, l>) f(lambda), as exact sums over q^n."""
    q, c = dist.field.q, dist.c
    if ls is None:
        ls = [tuple(dist.key(i)) for i in range(q**c)]
    return {tuple(int(x) for x in l): _dual_classes(dist, l) for l in ls}


def fourier_values(dist: FiberDistribution) -> dict[tuple[int, ...], complex]:
    return {l: s.value for l, s in fiber_fourier(dist).items()}


# --- span analytic rank ---

@dataclass
class SpanRank:
    value: float | tuple[float, float]
    representative: Polynomial
    coefficients: tuple[int, ...]
    per_combo: list[tuple[tuple[int, ...], object]] = dc_field(default_factory=list, repr=False)
    mode: str = "exact"

    def to_json(self) -> dict:
        from .poly import format_poly

        return {
            "mode": self.mode,
            "min_analytic_rank": json_number(self.value),
            "argmin": format_poly(self.representative),
            "coefficients": list(self.coefficients),
            "combos": [{"l": list(l), "analytic_rank": json_number(v)} for l, v in self.per_combo],
        }


def _sort_key(v):
    return v[0] if isinstance(v, tuple) else v


def family_min_arank(F: PolyFamily, mode: str = "exact", *, budget: int | None = None,
                     threads: int | None = None, samples: int = 100_000, seed: int = 0) -> SpanRank:
    """min over L(F) - {0} of the analytic rank; +inf sorts last, ties keep rank order."""
    reps = list(span_representatives(F))
    q, n = F.field.q, F.n
    per: list[tuple[tuple[int, ...], object]] = []
    if mode == "exact":
        by_degree: dict[int, list[tuple[int, ...]]] = {}
        for l, P in reps:
            by_degree.setdefault(P.degree, []).append(l)
        values: dict[tuple[int, ...], float] = {}
        limit = resolve_budget(budget)
        for D, ls in sorted(by_degree.items()):
            if D == 0:
                # a nonzero constant has bias 1
                for l in ls:
                    values[l] = 0.0
                continue
            if q ** (n * D) > limit:
                raise BudgetExceeded(f"difference forms need {q ** (n * D)} evaluations")
            forms = [difference_form(P, D) for P in F.members]
            dist = joint_distribution(forms, budget=budget, threads=threads)
            for l, s in fiber_fourier(dist, ls).items():
                b = s.rational_value()
                assert b is not None and b >= 0
                values[l] = INF if b == 0 else _neg_log(b, q)
        per = [(l, values[l]) for l, _ in reps]
    else:
        for i, (l, P) in enumerate(reps):
            if P.degree == 0:
                per.append((l, (0.0, 0.0)))
            else:
                per.append((l, analytic_rank(P, "mc", samples=samples, seed=seed + i, threads=threads)))
    best = min(range(len(per)), key=lambda i: (_sort_key(per[i][1]), i))
    l, v = per[best]
    return SpanRank(v, reps[best][1], l, per, mode)


def _neg_log(b: Fraction, q: int) -> float:
    v = -(math.log(b.numerator) - math.log(b.denominator)) / math.log(q)
    r = round(v)
    # exact powers of q come out as integers
    if r >= 0 and Fraction(1, q**r) == b:
        return float(r)
    return v + 0.0


# --- graded basis ---

def graded_basis(F: PolyFamily) -> dict[int, list[Polynomial]]:
    """Basis of L(F) whose elements have exactly their declared degree (keys)."""
    M, monos = coefficient_matrix(F.members)
    R, piv = linalg.rref(M, F.field)
    out: dict[int, list[Polynomial]] = {}
    for row, c in zip(R, piv):
        P = Polynomial(F.field, F.n, {monos[j]: int(v) for j, v in enumerate(row) if v})
        if not monos[c]:
            raise ConstantInSpan("the span contains a nonzero constant")
        assert P.degree == sum(e for _, e in monos[c])
        out.setdefault(P.degree, []).append(P)
    return dict(sorted(out.items(), reverse=True))


def same_span(A: Sequence[Polynomial], B: Sequence[Polynomial]) -> bool:
    fld = (list(A) + list(B))[0].field
    M, _ = coefficient_matrix(list(A) + list(B))
    r = linalg.rank(M, fld)
    Ma, _ = coefficient_matrix(list(A))
    Mb, _ = coefficient_matrix(list(B))
    return linalg.rank(Ma, fld) == r == linalg.rank(Mb, fld)


# --- equidistribution ---

@dataclass
class EquidistributionReport:
    deviation: Fraction | float
    satisfied: bool
    dim: int
    hypothesis_rank: float
    span_arank: float | None
    distribution: FiberDistribution = dc_field(repr=False)

    @property
    def hypothesis_holds(self) -> bool:
        return self.hypothesis_rank > self.dim

    def to_json(self) -> dict:
        dev = self.deviation
        return {
            "deviation": "inf" if dev == INF else str(dev),
            "deviation_float": json_number(float(dev)),
            "satisfied": self.satisfied,
            "dim_L": self.dim,
            "hypothesis_rank": json_number(self.hypothesis_rank),
            "hypothesis_holds": self.hypothesis_holds,
            "span_analytic_rank": json_number(self.span_arank),
        }


def equidistribution_check(F: PolyFamily, *, budget: int | None = None, threads: int | None = None,
                           with_span_arank: bool = True) -> EquidistributionReport:
    """max over fibers of |f(lambda)/f(mu) - 1| and whether it is at most 1/2.

    ``hypothesis_rank`` is min over l != 0 of -log_q |f^(l)|, the bias of each
    combination read as a rank.
    """
    dist = joint_distribution(F, budget=budget, threads=threads)
    lo, hi = min(dist.counts), max(dist.counts)
    dev: Fraction | float = INF if lo == 0 else Fraction(hi, lo) - 1
    q = F.field.q
    ranks = []
    for l, s in fiber_fourier(dist, list(projective_vectors(q, F.c))).items():
        mag = s.magnitude
        ranks.append(INF if mag < 1e-12 else max(0.0, round(-math.log(mag, q), 12)))
    span = None
    if with_span_arank:
        try:
            span = family_min_arank(F, budget=budget, threads=threads).value
        except BudgetExceeded:
            span = None
    return EquidistributionReport(dev, dev <= Fraction(1, 2), F.c, min(ranks), span, dist)


# --- shifts ---

def derivative_span(P: Polynomial, W: Sequence[Sequence[int]], full_span: bool = False) -> PolyFamily:
    """{P} together with Delta_w P for the listed w, dependent members dropped.

    With ``full_span`` every vector of span(W) is used instead of the list.
    """
    pts = [tuple(int(x) for x in w) for w in W]
    if full_span and pts:
        pts = _span_points(P.field, pts)
    members = independent([P] + [delta(P, w) for w in pts])
    return PolyFamily(members)


def _span_points(fld: FieldParams, W: list[tuple[int, ...]]) -> list[tuple[int, ...]]:
    out = {tuple(0 for _ in W[0])}
    for w in W:
        out |= {tuple(fld.add(a, fld.mul(c, b)) for a, b in zip(v, w)) for v in out for c in range(1, fld.q)}
    return sorted(out)


def shift_family(P: Polynomial, shifts: Sequence[Sequence[int]]) -> PolyFamily:
    return PolyFamily(independent([P] + [delta(P, h) for h in shifts]))


@dataclass
class ShiftSearchResult:
    shifts: list[tuple[int, ...]]
    score: float | tuple[float, float]
    scorer: str
    trials: int
    seed: int
    baseline: float | tuple[float, float]
    field: FieldParams = dc_field(repr=False)

    def to_json(self) -> dict:
        fld = self.field
        enc = (lambda x: x) if fld.s == 1 else (lambda x: format_element(x, fld))
        return {
            "shifts": [[enc(x) for x in h] for h in self.shifts],
            "score": json_number(self.score),
            "baseline_score": json_number(self.baseline),
            "scorer": self.scorer,
            "trials": self.trials,
            "seed": self.seed,
        }


def _trial_shifts(q: int, n: int, m: int, seed: int, trial: int) -> list[tuple[int, ...]]:
    if trial == 0:
        return [tuple([0] * n) for _ in range(m)]
    rng = np.random.Generator(np.random.Philox(key=(int(seed) << 64) | trial))
    draw = rng.integers(0, q, size=(m, n))
    return [tuple(int(x) for x in row) for row in draw]


def search_shifts(P: Polynomial, m: int, trials: int, seed: int = 0, scorer: str = "exact", *,
                  budget: int | None = None, threads: int | None = None,
                  samples: int = 20_000) -> ShiftSearchResult:
    """Best of the zero shift and ``trials`` uniform shift tuples by min span analytic rank."""
    if m < 1 or trials < 1:
        raise ValueError("m and trials must be >= 1")
    q, n = P.field.q, P.n
    cands = [_trial_shifts(q, n, m, seed, t) for t in range(trials + 1)]

    def score(t: int):
        fam = shift_family(P, cands[t])
        if scorer == "exact":
            return family_min_arank(fam, budget=budget, threads=1).value
        return family_min_arank(fam, "mc", samples=samples, seed=seed + t, threads=1).value

    with ThreadPoolExecutor(max_workers=resolve_threads(threads)) as ex:
        scores = list(ex.map(score, range(trials + 1)))
    best = max(range(trials + 1), key=lambda t: (_sort_key(scores[t]), -t))
    if scorer == "exact":
        again = family_min_arank(shift_family(P, cands[best]), budget=budget, threads=threads).value
        assert again == scores[best]
    return ShiftSearchResult(cands[best], scores[best], scorer, trials, seed, scores[0], P.field)


def _exact_root(x: Fraction, k) -> Fraction | None:
    if not float(k).is_integer() or k <= 0:
        return None
    k = int(k)
    out = []
    for v in (x.numerator, x.denominator):
        r = round(v ** (1.0 / k))
        hit = next((c for c in (r - 1, r, r + 1) if c >= 0 and c**k == v), None)
        if hit is None:
            return None
        out.append(hit)
    return Fraction(out[0], out[1])


def threshold_T(r, m, d, A, B, C) -> tuple[Fraction | float, bool]:
    """[(r/A)^(1/B) - m] / (2C); returns (value, degenerate) with degenerate = value <= 0.

    ``d`` only labels which constants were supplied.
    """
    for name, v in (("A_d", A), ("B_d", B), ("C_d", C)):
        if v <= 0:
            raise NonpositiveConstant(f"{name} must be positive, got {v}")
    ratio = Fraction(r) / Fraction(A)
    root = _exact_root(ratio, B)
    if root is None:
        value: Fraction | float = (float(ratio) ** (1.0 / float(B)) - m) / (2 * float(C))
    else:
        value = (root - Fraction(m)) / (2 * Fraction(C))
    return value, value <= 0
