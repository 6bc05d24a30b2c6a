"""Sparse multivariate polynomials over a finite field.

A monomial is a tuple of ``(variable, exponent)`` pairs sorted by variable,
with 0-based variable indices; the text grammar is 1-based (``x1`` is
variable 0). Coefficients are field element ids (see :mod:`strengthlab.gf`).
"""

from __future__ import annotations

import itertools
import random
import re
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Mapping, Sequence

from .errors import (
    ArityMismatch,
    DegreeZero,
    DimensionMismatch,
    FieldMismatch,
    PolySyntaxError,
    UnknownVariable,
)
from .gf import FieldElement, FieldParams, format_element

Monomial = tuple[tuple[int, int], ...]
ONE: Monomial = ()


def mono_degree(m: Monomial) -> int:
    return sum(e for _, e in m)


def mono_mul(a: Monomial, b: Monomial) -> Monomial:
    if not a:
        return b
    if not b:
        return a
    out = []
    i = j = 0
    while i < len(a) and j < len(b):
        va, ea = a[i]
        vb, eb = b[j]
        if va == vb:
            out.append((va, ea + eb))
            i += 1
            j += 1
        elif va < vb:
            out.append(a[i])
            i += 1
        else:
            out.append(b[j])
            j += 1
    out.extend(a[i:])
    out.extend(b[j:])
    return tuple(out)


def grlex_key(m: Monomial):
    """Sort key for graded lexicographic order with x1 > x2 > ..."""
    return (mono_degree(m), tuple((-v, e) for v, e in m))


class Polynomial:
    """Immutable canonical polynomial: no zero coefficients are stored."""

    def __init__(self, field: FieldParams, n: int, terms: Mapping[Monomial, int] | None = None):
        self.field = field
        self.n = n
        clean = {}
        if terms:
            for m, c in terms.items():
                if c:
                    if m and m[-1][0] >= n:
                        raise UnknownVariable(f"x{m[-1][0] + 1} exceeds n = {n}")
                    clean[m] = c
        self.terms: dict[Monomial, int] = clean

    # --- constructors ---

    @classmethod
    def zero(cls, field: FieldParams, n: int) -> Polynomial:
        return cls(field, n)

    @classmethod
    def constant(cls, field: FieldParams, n: int, c: int | FieldElement) -> Polynomial:
        if isinstance(c, FieldElement):
            field.check(c)
            c = c.value
        else:
            c = field.from_int(c)
        return cls(field, n, {ONE: c})

    @classmethod
    def var(cls, field: FieldParams, n: int, i: int) -> Polynomial:
        """The coordinate function x_{i+1} (0-based ``i``)."""
        if not 0 <= i < n:
            raise UnknownVariable(f"variable index {i} out of range for n = {n}")
        return cls(field, n, {((i, 1),): 1})

    @classmethod
    def linear(cls, field: FieldParams, n: int, coeffs: Sequence[int], offset: int = 0) -> Polynomial:
        """sum_j coeffs[j] * x_{offset+j+1}, coefficients given as element ids."""
        return cls(field, n, {((offset + j, 1),): c for j, c in enumerate(coeffs) if c})

    # --- basic properties ---

    @cached_property
    def degree(self) -> int:
        return max((mono_degree(m) for m in self.terms), default=0)

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def is_homogeneous(self) -> bool:
        return len({mono_degree(m) for m in self.terms}) <= 1

    @cached_property
    def variables(self) -> frozenset[int]:
        return frozenset(v for m in self.terms for v, _ in m)

    def sorted_terms(self) -> list[tuple[Monomial, int]]:
        return sorted(self.terms.items(), key=lambda kv: grlex_key(kv[0]), reverse=True)

    def homogeneous_part(self, k: int) -> Polynomial:
        return Polynomial(self.field, self.n, {m: c for m, c in self.terms.items() if mono_degree(m) == k})

    def coefficient(self, m: Monomial) -> int:
        return self.terms.get(m, 0)

    # --- equality ---

    def __eq__(self, other) -> bool:
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.field == other.field and self.n == other.n and self.terms == other.terms

    def __hash__(self) -> int:
        return hash((self.field, self.n, frozenset(self.terms.items())))

    def __repr__(self) -> str:
        return f"Polynomial({self}, n={self.n}, field={self.field!r})"

    def __str__(self) -> str:
        return format_poly(self)

    # --- arithmetic ---

    def _coerce(self, other) -> Polynomial:
        if isinstance(other, Polynomial):
            if other.field != self.field:
                raise FieldMismatch(f"{other.field!r} vs {self.field!r}")
            if other.n != self.n:
                raise DimensionMismatch(f"n = {other.n} vs n = {self.n}")
            return other
        if isinstance(other, (int, FieldElement)):
            return Polynomial.constant(self.field, self.n, other)
        return NotImplemented

    def __add__(self, other) -> Polynomial:
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        add = self.field.add
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = add(out.get(m, 0), c)
        return Polynomial(self.field, self.n, out)

    __radd__ = __add__

    def __neg__(self) -> Polynomial:
        neg = self.field.neg
        return Polynomial(self.field, self.n, {m: neg(c) for m, c in self.terms.items()})

    def __sub__(self, other) -> Polynomial:
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> Polynomial:
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other - self

    def scale(self, c: int) -> Polynomial:
        """Multiply by the field element with id ``c``."""
        if c == 0:
            return Polynomial.zero(self.field, self.n)
        mul = self.field.mul
        return Polynomial(self.field, self.n, {m: mul(v, c) for m, v in self.terms.items()})

    def __mul__(self, other) -> Polynomial:
        if isinstance(other, FieldElement):
            self.field.check(other)
            return self.scale(other.value)
        if isinstance(other, int):
            return self.scale(self.field.from_int(other))
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        add, mul = self.field.add, self.field.mul
        out: dict[Monomial, int] = {}
        for ma, ca in self.terms.items():
            for mb, cb in other.terms.items():
                m = mono_mul(ma, mb)
                out[m] = add(out.get(m, 0), mul(ca, cb))
        return Polynomial(self.field, self.n, out)

    __rmul__ = __mul__

    def __pow__(self, e: int) -> Polynomial:
        if e < 0:
            raise ValueError("negative exponent")
        result = Polynomial.constant(self.field, self.n, 1)
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    # --- evaluation ---

    def eval_ids(self, point: Sequence[int]) -> int:
        """Evaluate at a point given as element ids."""
        if len(point) != self.n:
            raise DimensionMismatch(f"point of length {len(point)} for n = {self.n}")
        f = self.field
        add, mul, pw = f.add, f.mul, f.pow
        acc = 0
        for m, c in self.terms.items():
            v = c
            for var, e in m:
                v = mul(v, pw(point[var], e))
                if not v:
                    break
            acc = add(acc, v)
        return acc

    def evaluate(self, point: Sequence[int | FieldElement]) -> FieldElement:
        ids = [x.value if isinstance(x, FieldElement) else int(x) for x in point]
        return FieldElement(self.field, self.eval_ids(ids))

    __call__ = evaluate

    # --- structural maps ---

    def remap(self, mapping: Mapping[int, int] | Sequence[int], n: int) -> Polynomial:
        """Rename variable ``v`` to ``mapping[v]`` in an ``n``-variable space."""
        out: dict[Monomial, int] = {}
        add = self.field.add
        for m, c in self.terms.items():
            nm: Monomial = ()
            for v, e in m:
                nm = mono_mul(nm, ((mapping[v], e),))
            out[nm] = add(out.get(nm, 0), c)
        return Polynomial(self.field, n, out)

    def with_field(self, field: FieldParams) -> Polynomial:
        """Lift prime-subfield coefficients into ``field`` (same characteristic)."""
        if field.p != self.field.p:
            raise FieldMismatch("characteristics differ")
        if self.field.s != 1 and field != self.field:
            raise FieldMismatch("only prime-field coefficients can be lifted")
        return Polynomial(field, self.n, self.terms)

    def partial(self, j: int) -> Polynomial:
        """Formal partial derivative with respect to x_{j+1}."""
        f = self.field
        out: dict[Monomial, int] = {}
        for m, c in self.terms.items():
            for k, (v, e) in enumerate(m):
                if v == j:
                    coef = f.mul(c, f.from_int(e))
                    if coef:
                        nm = m[:k] + (((v, e - 1),) if e > 1 else ()) + m[k + 1:]
                        out[nm] = f.add(out.get(nm, 0), coef)
                    break
        return Polynomial(f, self.n, out)

    def substitute(self, values: Mapping[int, int]) -> Polynomial:
        """Fix some variables to field element ids; the variable count is kept."""
        f = self.field
        out: dict[Monomial, int] = {}
        for m, c in self.terms.items():
            v = c
            rest = []
            for var, e in m:
                if var in values:
                    v = f.mul(v, f.pow(values[var], e))
                else:
                    rest.append((var, e))
            if v:
                nm = tuple(rest)
                out[nm] = f.add(out.get(nm, 0), v)
        return Polynomial(f, self.n, out)


# --- printing and parsing ---

def _format_coeff(c: int, field: FieldParams) -> str:
    s = format_element(c, field)
    if "+" in s:
        return f"({s})"
    return s


def format_monomial(m: Monomial) -> str:
    return "*".join(f"x{v + 1}" if e == 1 else f"x{v + 1}^{e}" for v, e in m)


def format_poly(P: Polynomial) -> str:
    if P.is_zero:
        return "0"
    parts = []
    for m, c in P.sorted_terms():
        if not m:
            parts.append(_format_coeff(c, P.field))
        elif c == 1:
            parts.append(format_monomial(m))
        else:
            parts.append(f"{_format_coeff(c, P.field)}*{format_monomial(m)}")
    return " + ".join(parts)


_TOKEN = re.compile(r"\s*(?:(x)(\d+)|(t)|(\d+)|([-+*^()]))")


def _tokenize(text: str) -> list[tuple[str, object, int]]:
    toks = []
    pos = 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m:
            raise PolySyntaxError(f"unexpected character {text[pos:].lstrip()[:1]!r}", pos)
        start = m.start() + (len(m.group(0)) - len(m.group(0).lstrip()))
        if m.group(1):
            idx = int(m.group(2))
            if idx < 1:
                raise PolySyntaxError("variables are 1-based", start)
            toks.append(("var", idx - 1, start))
        elif m.group(3):
            toks.append(("t", None, start))
        elif m.group(4):
            toks.append(("int", int(m.group(4)), start))
        else:
            toks.append((m.group(5), None, start))
        pos = m.end()
    toks.append(("eof", None, len(text)))
    return toks


class _Parser:
    def __init__(self, text: str, field: FieldParams, n: int):
        self.toks = _tokenize(text)
        self.i = 0
        self.field = field
        self.n = n

    def peek(self):
        return self.toks[self.i]

    def take(self, kind: str | None = None):
        tok = self.toks[self.i]
        if kind is not None and tok[0] != kind:
            raise PolySyntaxError(f"expected {kind!r}, found {tok[0]!r}", tok[2])
        self.i += 1
        return tok

    def expr(self) -> Polynomial:
        sign = 1
        if self.peek()[0] in ("+", "-"):
            sign = -1 if self.take()[0] == "-" else 1
        acc = self.term()
        if sign < 0:
            acc = -acc
        while self.peek()[0] in ("+", "-"):
            op = self.take()[0]
            rhs = self.term()
            acc = acc + rhs if op == "+" else acc - rhs
        return acc

    def term(self) -> Polynomial:
        acc = self.factor()
        while self.peek()[0] == "*":
            self.take()
            acc = acc * self.factor()
        return acc

    def factor(self) -> Polynomial:
        tok = self.take()
        kind, val, pos = tok
        if kind == "int":
            base = Polynomial.constant(self.field, self.n, val)
        elif kind == "var":
            if val >= self.n:
                raise UnknownVariable(f"x{val + 1} exceeds declared n = {self.n}")
            base = Polynomial.var(self.field, self.n, val)
        elif kind == "t":
            if self.field.s == 1:
                raise FieldMismatch("symbol 't' used with a prime field")
            base = Polynomial(self.field, self.n, {ONE: self.field.from_coeffs([0, 1])})
        elif kind == "(":
            base = self.expr()
            self.take(")")
        elif kind == "-":
            return -self.factor()
        else:
            raise PolySyntaxError(f"unexpected {kind!r}", pos)
        while self.peek()[0] == "^":
            self.take()
            e = self.take("int")[1]
            base = base**e
        return base


def parse(text: str, field: FieldParams, n: int | None = None) -> Polynomial:
    """Parse polynomial text; ``n`` defaults to the largest variable index used."""
    if n is None:
        toks = _tokenize(text)
        n = max((v + 1 for k, v, _ in toks if k == "var"), default=0)
    parser = _Parser(text, field, n)
    if parser.peek()[0] == "eof":
        raise PolySyntaxError("empty polynomial", 0)
    P = parser.expr()
    tok = parser.peek()
    if tok[0] != "eof":
        raise PolySyntaxError(f"trailing input {tok[0]!r}", tok[2])
    return P


def parse_lines(text: str, field: FieldParams, n: int | None = None) -> list[Polynomial]:
    """One polynomial per non-empty line; ``#`` starts a comment line."""
    lines = [ln.strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln and not ln.startswith("#")]
    if n is None:
        n = 0
        for ln in lines:
            n = max([n] + [v + 1 for k, v, _ in _tokenize(ln) if k == "var"])
    return [parse(ln, field, n) for ln in lines]


# --- algebraic operations ---

def compose(outer: Polynomial, inners: Sequence[Polynomial]) -> Polynomial:
    """Expand outer(inner_1, ..., inner_m) canonically."""
    if len(inners) != outer.n:
        raise ArityMismatch(f"outer has {outer.n} variables, {len(inners)} inners given")
    if not inners:
        return outer
    field, n = inners[0].field, inners[0].n
    for P in inners:
        if P.field != field or outer.field != field:
            raise FieldMismatch("compose across fields")
        if P.n != n:
            raise ArityMismatch("inners live on different spaces")
    powers: dict[tuple[int, int], Polynomial] = {}

    def power(v: int, e: int) -> Polynomial:
        key = (v, e)
        if key not in powers:
            powers[key] = inners[v] if e == 1 else power(v, e - 1) * inners[v]
        return powers[key]

    acc: dict[Monomial, int] = {}
    add, mul = field.add, field.mul
    for m, c in outer.terms.items():
        prod = Polynomial.constant(field, n, FieldElement(field, c))
        for v, e in m:
            prod = prod * power(v, e)
            if prod.is_zero:
                break
        for mm, cc in prod.terms.items():
            acc[mm] = add(acc.get(mm, 0), cc)
    return Polynomial(field, n, acc)


def _as_ids(P: Polynomial, h: Sequence[int | FieldElement]) -> list[int]:
    if len(h) != P.n:
        raise DimensionMismatch(f"shift of length {len(h)} for n = {P.n}")
    return [x.value if isinstance(x, FieldElement) else int(x) for x in h]


def delta(P: Polynomial, h: Sequence[int | FieldElement]) -> Polynomial:
    """The finite difference P(x + h) - P(x)."""
    h = _as_ids(P, h)
    if not any(h):
        return Polynomial.zero(P.field, P.n)
    f = P.field
    shifted = [
        Polynomial(f, P.n, {((j, 1),): 1, ONE: hj}) for j, hj in enumerate(h)
    ]
    out = compose(P, shifted) - P
    if P.degree >= 1:
        assert out.degree <= P.degree - 1 or out.is_zero
    return out


@dataclass(frozen=True, eq=False)
class Tensor:
    """A d-linear form on (F_q^n)^d stored as a polynomial in d*n variables.

    Variable ``j`` of block ``i`` (both 0-based) is base variable ``i*n + j``.
    Every monomial takes exactly one degree-1 variable from each block.
    """

    base: Polynomial
    d: int
    n: int

    def __post_init__(self) -> None:
        if self.base.n != self.d * self.n:
            raise DimensionMismatch(f"base has {self.base.n} variables, expected {self.d * self.n}")
        for m in self.base.terms:
            blocks = [v // self.n for v, e in m if e == 1]
            if len(blocks) != len(m) or sorted(blocks) != list(range(self.d)):
                raise ValueError(f"monomial {format_monomial(m)} is not multilinear across blocks")

    @property
    def field(self) -> FieldParams:
        return self.base.field

    def __eq__(self, other) -> bool:
        return isinstance(other, Tensor) and (self.base, self.d, self.n) == (other.base, other.d, other.n)

    def __hash__(self) -> int:
        return hash((self.base, self.d, self.n))

    def __str__(self) -> str:
        return str(self.base)

    def evaluate(self, *blocks: Sequence[int]) -> int:
        if len(blocks) != self.d:
            raise ArityMismatch(f"{self.d} blocks expected")
        pt = [x for b in blocks for x in _as_ids(Polynomial.zero(self.field, self.n), b)]
        return self.base.eval_ids(pt)

    def permute_blocks(self, perm: Sequence[int]) -> Tensor:
        """Block ``i`` of the result is block ``perm[i]`` of ``self``."""
        inverse = {b: i for i, b in enumerate(perm)}
        mapping = [inverse[v // self.n] * self.n + v % self.n for v in range(self.d * self.n)]
        return Tensor(self.base.remap(mapping, self.d * self.n), self.d, self.n)

    def is_symmetric(self) -> bool:
        return all(
            self.permute_blocks(perm).base == self.base
            for perm in itertools.permutations(range(self.d))
        )

    @classmethod
    def from_matrix(cls, field: FieldParams, matrix: Sequence[Sequence[int]]) -> Tensor:
        """Bilinear form sum_{i,j} M[i][j] x_i y_j."""
        n = len(matrix)
        terms = {((i, 1), (n + j, 1)): c for i, row in enumerate(matrix) for j, c in enumerate(row) if c}
        return cls(Polynomial(field, 2 * n, terms), 2, n)


def multilinearize(P: Polynomial) -> Tensor:
    """The symmetric multilinear form of P, via the d-fold difference expansion.

    Computes sum over S of (-1)^(d-|S|) P(sum_{i in S} h_i) with d = deg P.
    """
    d = P.degree
    if d < 1 or P.is_zero:
        raise DegreeZero("multilinearization needs degree >= 1")
    return Tensor(difference_form(P, d), d, P.n)


def difference_form(P: Polynomial, d: int) -> Polynomial:
    """The polynomial (h_1, ..., h_d) -> Delta_{h_1} ... Delta_{h_d} P(0) in d*n variables."""
    f, n = P.field, P.n
    N = d * n
    acc = Polynomial.zero(f, N)
    for size in range(d + 1):
        sign = f.from_int(-1 if (d - size) % 2 else 1)
        for S in itertools.combinations(range(d), size):
            inners = [
                Polynomial(f, N, {((i * n + j, 1),): 1 for i in S}) for j in range(n)
            ]
            acc = acc + compose(P, inners).scale(sign)
    return acc


def formal_jacobian(family) -> list[list[Polynomial]]:
    """c x n matrix of formal partials; accepts a PolyFamily or a sequence."""
    members = list(getattr(family, "members", family))
    if members:
        f, n = members[0].field, members[0].n
        for P in members:
            if P.field != f or P.n != n:
                raise DimensionMismatch("family members live on different spaces")
    return [[P.partial(j) for j in range(P.n)] for P in members]


def homogenize(P: Polynomial) -> Polynomial:
    """Homogenize with a new last variable x_{n+1}; setting it to 1 recovers P."""
    d = P.degree
    if d < 1 or P.is_zero:
        raise DegreeZero("homogenization needs degree >= 1")
    n = P.n
    out = {}
    for m, c in P.terms.items():
        k = d - mono_degree(m)
        out[m + (((n, k),) if k else ())] = c
    return Polynomial(P.field, n + 1, out)


def dehomogenize(Q: Polynomial) -> Polynomial:
    """Set the last variable to 1 and drop it."""
    fixed = Q.substitute({Q.n - 1: 1})
    return Polynomial(Q.field, Q.n - 1, fixed.terms)


def random_poly(field: FieldParams, n: int, d: int, terms: int, seed: int) -> Polynomial:
    """Deterministic random polynomial of degree exactly ``d`` with up to ``terms`` terms."""
    if terms < 1:
        raise ValueError("terms must be >= 1")
    rng = random.Random(seed)

    def monomial(deg: int) -> Monomial:
        m: Monomial = ()
        for _ in range(deg):
            m = mono_mul(m, ((rng.randrange(n), 1),))
        return m

    chosen: dict[Monomial, int] = {}
    lead = monomial(d)
    chosen[lead] = rng.randrange(1, field.q)
    attempts = 0
    while len(chosen) < terms and attempts < 50 * terms:
        attempts += 1
        m = monomial(rng.randint(0, d))
        if m not in chosen:
            chosen[m] = rng.randrange(1, field.q)
    P = Polynomial(field, n, chosen)
    assert P.degree == d
    return P


def points(field: FieldParams, n: int) -> Iterable[tuple[int, ...]]:
    """All points of F_q^n in mixed-radix order (first coordinate fastest)."""
    for rev in itertools.product(range(field.q), repeat=n):
        yield tuple(reversed(rev))
