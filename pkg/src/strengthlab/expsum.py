"""Character sums over F_q^n: bias, analytic rank, Gowers norms, fibers.

Exact sums are integer histograms over trace classes,
``counts[j] = #{v : Tr P(v) = j}``, standing for ``sum_j counts[j] zeta_p^j``.
Floats only appear when a value is reported.
"""

from __future__ import annotations

import cmath
import math
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from . import kernels
from .config import DEFAULT_DELTA, MAX_FIBERS, resolve_budget, resolve_threads
from .errors import BudgetExceeded, DegreeZero, ZeroSamples
from .gf import FieldParams
from .poly import Polynomial, Tensor, multilinearize

INF = math.inf
MC_SHARD = 1 << 16


@dataclass(frozen=True, eq=False)
class CyclotomicSum:
    """An element sum_j counts[j] * zeta_p^j of Z[zeta_p] with its domain size."""

    p: int
    counts: tuple[int, ...]
    total: int

    def canonical(self) -> tuple[int, ...]:
        # the all-ones vector is the only relation: 1 + zeta + ... + zeta^(p-1) = 0
        m = min(self.counts)
        return tuple(c - m for c in self.counts)

    def __eq__(self, other) -> bool:
        if not isinstance(other, CyclotomicSum):
            return NotImplemented
        return self.p == other.p and self.canonical() == other.canonical()

    def __hash__(self) -> int:
        return hash((self.p, self.canonical()))

    def same_average(self, other: CyclotomicSum) -> bool:
        """Exact equality of the normalised values sum / total."""
        a = [c * other.total for c in self.canonical()]
        b = [c * self.total for c in other.canonical()]
        return self.p == other.p and _canon(a) == _canon(b)

    @property
    def raw_value(self) -> complex:
        p = self.p
        return sum(c * cmath.exp(2j * math.pi * k / p) for k, c in enumerate(self.canonical()))

    @property
    def value(self) -> complex:
        v = self.raw_value / self.total
        return complex(round(v.real, 15) + 0.0, round(v.imag, 15) + 0.0)

    @property
    def magnitude(self) -> float:
        return abs(self.value)

    def conj(self) -> CyclotomicSum:
        p = self.p
        return CyclotomicSum(p, tuple(self.counts[-k % p] for k in range(p)), self.total)

    def galois(self, a: int) -> CyclotomicSum:
        """Image under zeta -> zeta^a: the same sum taken with the character psi(a x)."""
        p = self.p
        out = [0] * p
        for k, c in enumerate(self.counts):
            out[a * k % p] += c
        return CyclotomicSum(p, tuple(out), self.total)

    def __mul__(self, other: CyclotomicSum) -> CyclotomicSum:
        p = self.p
        out = [0] * p
        for i, a in enumerate(self.counts):
            if a:
                for j, b in enumerate(other.counts):
                    out[(i + j) % p] += a * b
        return CyclotomicSum(p, tuple(out), self.total * other.total)

    def __pow__(self, e: int) -> CyclotomicSum:
        result = CyclotomicSum(self.p, (1,) + (0,) * (self.p - 1), 1)
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def abs2(self) -> CyclotomicSum:
        return self * self.conj()

    def is_real(self) -> bool:
        return self.canonical() == self.conj().canonical()

    def rational_value(self) -> Fraction | None:
        """The normalised value when it is rational, else None."""
        c = self.counts
        if any(x != c[1] for x in c[1:]) if self.p > 1 else False:
            return None
        rest = c[1] if self.p > 1 else 0
        return Fraction(c[0] - rest, self.total)

    def sign(self) -> int:
        """Exact sign of a real element (raises for non-real input)."""
        if not self.is_real():
            raise ValueError("sign of a non-real cyclotomic integer")
        r = self.rational_value()
        if r is not None:
            return (r > 0) - (r < 0)
        return _real_sign(self.canonical(), self.p)

    def to_dict(self) -> dict:
        return {"p": self.p, "counts": list(self.counts), "total": self.total}


def _canon(v: Sequence[int]) -> tuple[int, ...]:
    m = min(v)
    return tuple(x - m for x in v)


def _real_sign(coeffs: Sequence[int], p: int) -> int:
    """Sign of a nonzero real element of Z[zeta_p], certified by a norm bound.

    A nonzero algebraic integer has |norm| >= 1, so its absolute value is at
    least B^-(p-2) with B the l1 norm of the coefficients.
    """
    import mpmath

    if not any(coeffs):
        return 0
    B = max(2, sum(abs(c) for c in coeffs))
    digits = int((p - 2) * math.log10(B)) + 30
    with mpmath.workdps(digits):
        val = mpmath.fsum(c * mpmath.cos(2 * mpmath.pi * k / p) for k, c in enumerate(coeffs))
        bound = mpmath.mpf(B) ** (-(p - 2)) / 2
        assert abs(val) > bound, "precision insufficient for sign certificate"
        return 1 if val > 0 else -1


def add_rational(x: CyclotomicSum, a: int) -> CyclotomicSum:
    """x + a for an integer a (totals are carried along unchanged)."""
    c = list(x.counts)
    c[0] += a
    return CyclotomicSum(x.p, tuple(c), x.total)


def scale_int(x: CyclotomicSum, a: int) -> CyclotomicSum:
    return CyclotomicSum(x.p, tuple(a * c for c in x.counts), x.total)


# --- exhaustive sums ---

def _check_budget(size: int, budget: int | None, what: str) -> None:
    limit = resolve_budget(budget)
    if size > limit:
        raise BudgetExceeded(f"{what} needs {size} evaluations, budget is {limit}")


def char_sum_exact(P: Polynomial, *, budget: int | None = None, threads: int | None = None,
                   backend: str | None = None) -> CyclotomicSum:
    """Exact histogram of Tr P(v) over all v in F_q^n."""
    q, n = P.field.q, P.n
    size = q**n
    _check_budget(size, budget, "char_sum_exact")
    cf = kernels.compile_family([P])
    kern = kernels.get_backend(backend)
    parts = kernels.run_sharded(lambda a, b: kern.trace_hist(cf, a, b),
                                kernels.shard_bounds(size, q), resolve_threads(threads))
    counts = kernels.sum_arrays(parts)
    return CyclotomicSum(P.field.p, tuple(int(c) for c in counts), size)


def values_table(P: Polynomial, *, threads: int | None = None, backend: str | None = None) -> np.ndarray:
    """P evaluated at every point of F_q^n, in rank order."""
    size = P.field.q**P.n
    cf = kernels.compile_family([P])
    kern = kernels.get_backend(backend)
    parts = kernels.run_sharded(lambda a, b: kern.values_range(cf, a, b)[0],
                                kernels.shard_bounds(size, P.field.q), resolve_threads(threads))
    return np.concatenate(parts)


@dataclass
class BiasReport:
    value: complex
    magnitude: float
    mode: str
    q: int
    n: int
    exact: CyclotomicSum | None = None
    ci_radius: float = 0.0
    samples: int | None = None
    seed: int | None = None
    delta: float | None = None
    threads: int = 1
    elapsed_ms: float = 0.0
    sample_counts: tuple[int, ...] | None = field(default=None, repr=False)

    def to_json(self, analytic_rank=None) -> dict:
        counts = self.exact.counts if self.exact is not None else self.sample_counts
        return {
            "mode": self.mode,
            "q": self.q,
            "n": self.n,
            "counts": list(counts) if counts is not None else [],
            "value_re": self.value.real,
            "value_im": self.value.imag,
            "magnitude": self.magnitude,
            "analytic_rank": json_number(analytic_rank),
            "ci_radius": self.ci_radius,
            "samples": self.samples,
            "seed": self.seed,
            "threads": self.threads,
            "elapsed_ms": round(self.elapsed_ms, 3),
        }


def json_number(x):
    """Floats with the +inf sentinel serialised as the string "inf"."""
    if x is None:
        return None
    if isinstance(x, (tuple, list)):
        return [json_number(v) for v in x]
    if isinstance(x, float) and math.isinf(x):
        return "inf"
    return x


def hoeffding_radius(samples: int, delta: float = DEFAULT_DELTA) -> float:
    """Per-component CI radius for a mean of values in [-1, 1].

    Real and imaginary parts each get failure probability delta/2.
    """
    return math.sqrt(2.0 * math.log(4.0 / delta) / samples)


def _mc_counts(P: Polynomial, samples: int, seed: int, threads: int, backend: str | None) -> np.ndarray:
    if samples < 1:
        raise ZeroSamples("Monte Carlo needs at least one sample")
    q, n = P.field.q, P.n
    cf = kernels.compile_family([P])
    kern = kernels.get_backend(backend)
    trace = cf.trace
    bounds = [(a, min(samples, a + MC_SHARD)) for a in range(0, samples, MC_SHARD)]

    def shard(a: int, b: int) -> np.ndarray:
        # counter-based stream keyed by (seed, shard index)
        rng = np.random.Generator(np.random.Philox(key=(int(seed) << 64) | (a // MC_SHARD)))
        pts = rng.integers(0, q, size=(b - a, n), dtype=np.int64)
        vals = kern.eval_points(cf, pts)[0]
        return np.bincount(trace[vals], minlength=P.field.p).astype(np.int64)

    return kernels.sum_arrays(kernels.run_sharded(shard, bounds, threads))


def bias(P: Polynomial, mode: str = "exact", *, samples: int = 100_000, seed: int = 0,
         delta: float = DEFAULT_DELTA, budget: int | None = None, threads: int | None = None,
         backend: str | None = None) -> BiasReport:
    """b(P) = E_v psi(P(v)) with psi(x) = exp(2 pi i Tr(x) / p)."""
    threads = resolve_threads(threads)
    t0 = time.perf_counter()
    q, n = P.field.q, P.n
    if mode == "exact":
        s = char_sum_exact(P, budget=budget, threads=threads, backend=backend)
        return BiasReport(s.value, s.magnitude, "exact", q, n, exact=s, threads=threads,
                          elapsed_ms=(time.perf_counter() - t0) * 1e3)
    if mode not in ("mc", "monte_carlo"):
        raise ValueError(f"unknown mode {mode!r}")
    counts = _mc_counts(P, samples, seed, threads, backend)
    est = CyclotomicSum(P.field.p, tuple(int(c) for c in counts), samples)
    return BiasReport(est.value, est.magnitude, "monte_carlo", q, n,
                      ci_radius=hoeffding_radius(samples, delta), samples=samples, seed=seed,
                      delta=delta, threads=threads, elapsed_ms=(time.perf_counter() - t0) * 1e3,
                      sample_counts=tuple(int(c) for c in counts))


def tensor_bias(T: Tensor | Polynomial, *, budget: int | None = None, threads: int | None = None,
                backend: str | None = None, method: str = "slice") -> Fraction:
    """Exact b(T) for a multilinear form; always a nonnegative rational.

    ``slice`` averages over the last block first: E psi(l(h_d)) is 1 when the
    linear form l = T(h_1, ..., h_{d-1}, .) vanishes and 0 otherwise, so b(T)
    is the fraction of (h_1, ..., h_{d-1}) killing every last-block slice.
    ``full`` sums psi over all of (F_q^n)^d.
    """
    if method == "full" or not isinstance(T, Tensor):
        base = T.base if isinstance(T, Tensor) else T
        s = char_sum_exact(base, budget=budget, threads=threads, backend=backend)
        r = s.rational_value()
        assert r is not None and r >= 0, "multilinear bias must be a nonnegative rational"
        return r
    d, n, fld = T.d, T.n, T.field
    if T.base.is_zero:
        return Fraction(1)
    if d == 1:
        return Fraction(0)
    N = (d - 1) * n
    coefs = [Polynomial(fld, N, T.base.partial(N + j).terms) for j in range(n)]
    coefs = [c for c in coefs if not c.is_zero]
    size = fld.q**N
    _check_budget(size, budget, "tensor_bias")
    cf = kernels.compile_family(coefs)
    kern = kernels.get_backend(backend)
    parts = kernels.run_sharded(lambda a, b: kern.zero_count(cf, a, b),
                                kernels.shard_bounds(size, fld.q), resolve_threads(threads))
    return Fraction(int(sum(parts)), size)


def log_q(x: Fraction | float, q: int) -> float:
    if isinstance(x, Fraction):
        return (math.log(x.numerator) - math.log(x.denominator)) / math.log(q)
    return math.log(x) / math.log(q)


def analytic_rank(P: Polynomial, mode: str = "exact", *, samples: int = 100_000, seed: int = 0,
                  delta: float = DEFAULT_DELTA, budget: int | None = None,
                  threads: int | None = None, backend: str | None = None):
    """-log_q b(P~) for the multilinear form P~ of P.

    Exact mode returns a float (``inf`` when b(P~) = 0); Monte Carlo mode
    returns a ``(low, high)`` interval.
    """
    if P.is_zero or P.degree < 1:
        raise DegreeZero("analytic rank needs degree >= 1")
    q, n, d = P.field.q, P.n, P.degree
    if mode == "exact":
        _check_budget(q ** (n * d), budget, "analytic_rank")
        b = tensor_bias(multilinearize(P), budget=budget, threads=threads, backend=backend)
        return INF if b == 0 else -log_q(b, q) + 0.0
    T = multilinearize(P)
    rep = bias(T.base, "mc", samples=samples, seed=seed, delta=delta, threads=threads, backend=backend)
    est, r = rep.value.real, rep.ci_radius
    floor = float(q) ** (-n * d)
    lo = -math.log(min(1.0, est + r), q) if est + r > 0 else INF
    hi = -math.log(max(est - r, floor), q)
    return (max(lo, 0.0), hi)


def gowers_power_sum(P: Polynomial, d: int, path: str = "definition", *, budget: int | None = None,
                     threads: int | None = None, backend: str | None = None) -> CyclotomicSum:
    """The exact sum whose average is ||psi o P||_{U_d}^(2^d)."""
    q, n = P.field.q, P.n
    if path == "tensor":
        if P.degree != d or P.is_zero:
            raise ValueError(f"tensor path needs deg(P) = {d}")
        _check_budget(q ** (n * d), budget, "gowers_norm")
        return char_sum_exact(multilinearize(P).base, budget=budget, threads=threads, backend=backend)
    if path != "definition":
        raise ValueError(f"unknown path {path!r}")
    if d < 1:
        raise ValueError("d must be >= 1")
    _check_budget(q ** (n * (d + 1)), budget, "gowers_norm")
    tr = P.field.trace_array[values_table(P, threads=threads, backend=backend)]
    kern = kernels.get_backend(backend)
    add = P.field.add_table
    p = P.field.p
    bounds = kernels.shard_bounds(q ** (n * d), q)
    bounds = _coarsen(bounds, q**n)
    parts = kernels.run_sharded(lambda a, b: kern.gowers_hist(tr, add, q, n, d, p, a, b),
                                bounds, resolve_threads(threads))
    counts = kernels.sum_arrays(parts)
    return CyclotomicSum(p, tuple(int(c) for c in counts), q ** (n * (d + 1)))


def _coarsen(bounds, inner: int):
    # every v-tuple already costs a full pass over x, so use fewer, larger shards
    target = max(1, kernels.SHARD_TARGET // inner)
    if len(bounds) <= 1 or bounds[0][1] - bounds[0][0] <= target:
        return bounds
    out = []
    for a, b in bounds:
        step = max(1, target)
        out.extend((x, min(b, x + step)) for x in range(a, b, step))
    return out


def gowers_norm(P: Polynomial, d: int, path: str = "definition", **kw) -> float:
    s = gowers_power_sum(P, d, path, **kw)
    v = max(s.value.real, 0.0)
    return v ** (1.0 / 2**d)


# --- joint value distribution ---

@dataclass(frozen=True, eq=False)
class FiberDistribution:
    """Fiber sizes of v -> (P_1(v), ..., P_c(v)); ``counts`` is indexed by
    sum_k lambda_k q^k (first coordinate least significant)."""

    field: FieldParams
    c: int
    counts: tuple[int, ...]
    total: int

    def index(self, lam: Sequence[int]) -> int:
        idx = 0
        for x in reversed(lam):
            idx = idx * self.field.q + int(x)
        return idx

    def key(self, idx: int) -> tuple[int, ...]:
        q = self.field.q
        out = []
        for _ in range(self.c):
            idx, r = divmod(idx, q)
            out.append(r)
        return tuple(out)

    def count(self, lam: Sequence[int]) -> int:
        return self.counts[self.index(lam)]

    def f(self, lam: Sequence[int]) -> Fraction:
        return Fraction(self.count(lam), self.total)

    @property
    def fibers(self) -> dict[tuple[int, ...], int]:
        return {self.key(i): c for i, c in enumerate(self.counts)}

    def to_json(self) -> dict:
        from .gf import format_element

        return {
            "q": self.field.q,
            "c": self.c,
            "total": self.total,
            "fibers": [
                {"lambda": [format_element(x, self.field) for x in self.key(i)], "count": cnt}
                for i, cnt in enumerate(self.counts)
            ],
        }


def joint_distribution(family, *, budget: int | None = None, threads: int | None = None,
                       backend: str | None = None) -> FiberDistribution:
    members = list(getattr(family, "members", family))
    if not members:
        raise ValueError("empty family")
    fld, n = members[0].field, members[0].n
    q, c = fld.q, len(members)
    if q**c > MAX_FIBERS:
        raise BudgetExceeded(f"q^c = {q**c} fibers exceeds {MAX_FIBERS}")
    size = q**n
    _check_budget(size, budget, "joint_distribution")
    cf = kernels.compile_family(members)
    kern = kernels.get_backend(backend)
    parts = kernels.run_sharded(lambda a, b: kern.joint_hist(cf, a, b),
                                kernels.shard_bounds(size, q), resolve_threads(threads))
    counts = kernels.sum_arrays(parts)
    return FiberDistribution(fld, c, tuple(int(x) for x in counts), size)
