"""Arithmetic in finite fields F_q, q = p^s, with the trace character.

Elements are identified with integers in ``range(q)``: the coefficient vector
``(c_0, ..., c_{s-1})`` of ``c_0 + c_1 t + ... + c_{s-1} t^{s-1}`` in the power
basis of the modulus root ``t`` maps to ``c_0 + c_1 p + ... + c_{s-1} p^{s-1}``.
The prime subfield is therefore ``range(p)`` and integer constants embed as
themselves modulo ``p``.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from functools import cached_property, lru_cache

import numpy as np

from .errors import (
    DegreeZero,
    DivisionByZero,
    FieldMismatch,
    FieldTooLarge,
    NotPrime,
    PolySyntaxError,
)

MAX_Q = 1 << 20
# full q x q lookup tables are only materialised up to this size
TABLE_Q = 1024
_LIST_TABLE_Q = 256


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def _prime_factors(n: int) -> list[int]:
    out = []
    f = 2
    while f * f <= n:
        if n % f == 0:
            out.append(f)
            while n % f == 0:
                n //= f
        f += 1
    if n > 1:
        out.append(n)
    return out


# --- dense polynomials over F_p, coefficient lists with constant term first ---

def _trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _poly_mod(a: list[int], m: list[int], p: int) -> list[int]:
    """Remainder of ``a`` modulo the monic polynomial ``m``."""
    a = _trim([x % p for x in a])
    dm = len(m) - 1
    while len(a) - 1 >= dm:
        lead = a[-1]
        shift = len(a) - 1 - dm
        for i, c in enumerate(m):
            a[shift + i] = (a[shift + i] - lead * c) % p
        _trim(a)
    return a


def _poly_mulmod(a: list[int], b: list[int], m: list[int], p: int) -> list[int]:
    prod = [0] * (len(a) + len(b) - 1) if a and b else []
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                prod[i + j] += x * y
    return _poly_mod(prod, m, p)


def _is_irreducible(m: tuple[int, ...], p: int) -> bool:
    """Trial division by every monic polynomial of degree <= deg(m)/2."""
    s = len(m) - 1
    if s == 1:
        return True
    if m[0] == 0:
        return False
    for deg in range(1, s // 2 + 1):
        for low in itertools.product(range(p), repeat=deg):
            if not _poly_mod(list(m), list(low) + [1], p):
                return False
    return True


def _canonical_modulus(p: int, s: int) -> tuple[int, ...]:
    if s == 1:
        return (0, 1)
    for low in itertools.product(range(p), repeat=s):
        m = tuple(low) + (1,)
        if _is_irreducible(m, p):
            return m
    raise AssertionError("no irreducible polynomial found")  # pragma: no cover


@dataclass(frozen=True)
class FieldParams:
    """The finite field F_q with q = p**s, fixed by its canonical modulus."""

    p: int
    s: int
    modulus: tuple[int, ...]
    q: int = field(init=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "q", self.p**self.s)

    def __repr__(self) -> str:
        if self.s == 1:
            return f"GF({self.p})"
        return f"GF({self.p}^{self.s}, modulus={format_coeffs(self.modulus, self.p)})"

    # --- element encodings ---

    def digits(self, a: int) -> tuple[int, ...]:
        p = self.p
        out = []
        for _ in range(self.s):
            a, r = divmod(a, p)
            out.append(r)
        return tuple(out)

    def from_coeffs(self, coeffs) -> int:
        coeffs = list(coeffs)
        if len(coeffs) > self.s:
            coeffs = _poly_mod(coeffs, list(self.modulus), self.p)
        v = 0
        for c in reversed(coeffs):
            v = v * self.p + c % self.p
        return v

    def from_int(self, c: int) -> int:
        """Image of the integer ``c`` in the prime subfield."""
        return c % self.p

    def element(self, value: int | str | FieldElement) -> FieldElement:
        if isinstance(value, FieldElement):
            self.check(value)
            return value
        if isinstance(value, str):
            return FieldElement(self, parse_element(value, self))
        if not 0 <= value < self.q:
            raise ValueError(f"element id {value} out of range for {self!r}")
        return FieldElement(self, value)

    def elements(self):
        return (FieldElement(self, a) for a in range(self.q))

    def check(self, x: FieldElement) -> None:
        if x.field != self:
            raise FieldMismatch(f"{x.field!r} vs {self!r}")

    # --- arithmetic on integer ids ---

    def add(self, a: int, b: int) -> int:
        if self.s == 1:
            return (a + b) % self.p
        t = self._add_list
        if t is not None:
            return t[a][b]
        da, db = self._digit_list[a], self._digit_list[b]
        return self.from_coeffs([(x + y) for x, y in zip(da, db)])

    def neg(self, a: int) -> int:
        if self.s == 1:
            return -a % self.p
        return self._neg_list[a]

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if self.s == 1:
            return a * b % self.p
        if a == 0 or b == 0:
            return 0
        lg = self._log_list
        return self._exp_list[(lg[a] + lg[b]) % (self.q - 1)]

    def inv(self, a: int) -> int:
        if a == 0:
            raise DivisionByZero("inverse of zero")
        if self.s == 1:
            return pow(a, -1, self.p)
        return self._exp_list[-self._log_list[a] % (self.q - 1)]

    def pow(self, a: int, e: int) -> int:
        if e < 0:
            return self.pow(self.inv(a), -e)
        if e == 0:
            return 1
        if a == 0:
            return 0
        if self.s == 1:
            return pow(a, e, self.p)
        return self._exp_list[self._log_list[a] * e % (self.q - 1)]

    def trace(self, a: int) -> int:
        """Absolute trace Tr(a) = sum_i a^(p^i), read as an integer in [0, p)."""
        if self.s == 1:
            return a
        tb = self._trace_basis
        return sum(c * t for c, t in zip(self._digit_list[a], tb)) % self.p

    def char_exponent(self, a: int) -> int:
        """j with psi(a) = exp(2 pi i j / p)."""
        return self.trace(a)

    def scalar_mul_naive(self, a: int, b: int) -> int:
        """Multiplication by polynomial reduction, independent of the log tables."""
        r = _poly_mulmod(list(self.digits(a)), list(self.digits(b)), list(self.modulus), self.p)
        return self.from_coeffs(r) if r else 0

    # --- construction-time tables ---

    @cached_property
    def _digit_list(self) -> list[tuple[int, ...]]:
        return [self.digits(a) for a in range(self.q)]

    @cached_property
    def _neg_list(self) -> list[int]:
        return [self.from_coeffs([-c for c in d]) for d in self._digit_list]

    @cached_property
    def _add_list(self) -> list[list[int]] | None:
        if self.q > _LIST_TABLE_Q:
            return None
        return self.add_table.tolist()

    @cached_property
    def generator(self) -> int:
        """Smallest primitive element (by id)."""
        if self.q == 2:
            return 1
        order = self.q - 1
        factors = _prime_factors(order)
        m = list(self.modulus)
        for g in range(2, self.q):
            dg = list(self.digits(g))
            if all(self._slow_pow(dg, order // r, m) != [1] for r in factors):
                return g
        raise AssertionError("no generator")  # pragma: no cover

    def _slow_pow(self, a: list[int], e: int, m: list[int]) -> list[int]:
        result = [1]
        base = _trim(list(a))
        while e:
            if e & 1:
                result = _poly_mulmod(result, base, m, self.p)
            base = _poly_mulmod(base, base, m, self.p)
            e >>= 1
        return result

    @cached_property
    def _exp_log(self) -> tuple[list[int], list[int]]:
        q = self.q
        exp = [0] * (q - 1)
        log = [0] * q
        g = list(self.digits(self.generator))
        m = list(self.modulus)
        cur = [1]
        for k in range(q - 1):
            v = self.from_coeffs(cur)
            exp[k] = v
            log[v] = k
            cur = _poly_mulmod(cur, g, m, self.p)
        return exp, log

    @property
    def _exp_list(self) -> list[int]:
        return self._exp_log[0]

    @property
    def _log_list(self) -> list[int]:
        return self._exp_log[1]

    @cached_property
    def _trace_basis(self) -> list[int]:
        # Tr(t^i) computed from the definition; Tr is F_p-linear
        m = list(self.modulus)
        out = []
        for i in range(self.s):
            x = [0] * i + [1]
            acc = [0] * self.s
            for k in range(self.s):
                y = self._slow_pow(x, self.p**k, m)
                for j, c in enumerate(y):
                    acc[j] += c
            acc = [c % self.p for c in acc]
            assert all(c == 0 for c in acc[1:]), "trace left the prime subfield"
            out.append(acc[0])
        return out

    # --- numpy tables for the enumeration kernels ---

    @cached_property
    def digit_array(self) -> np.ndarray:
        ids = np.arange(self.q, dtype=np.int64)
        return np.stack([(ids // self.p**i) % self.p for i in range(self.s)], axis=1)

    @cached_property
    def add_table(self) -> np.ndarray:
        if self.q > TABLE_Q:
            raise FieldTooLarge(f"q = {self.q} exceeds the lookup-table limit {TABLE_Q}")
        d = self.digit_array
        summed = (d[:, None, :] + d[None, :, :]) % self.p
        weights = self.p ** np.arange(self.s, dtype=np.int64)
        return (summed @ weights).astype(np.int32)

    @cached_property
    def mul_table(self) -> np.ndarray:
        if self.q > TABLE_Q:
            raise FieldTooLarge(f"q = {self.q} exceeds the lookup-table limit {TABLE_Q}")
        q = self.q
        if self.s == 1:
            a = np.arange(q, dtype=np.int64)
            return (np.outer(a, a) % q).astype(np.int32)
        exp = np.array(self._exp_list, dtype=np.int64)
        log = np.array(self._log_list, dtype=np.int64)
        t = exp[(log[:, None] + log[None, :]) % (q - 1)]
        t[0, :] = 0
        t[:, 0] = 0
        return t.astype(np.int32)

    @cached_property
    def trace_array(self) -> np.ndarray:
        return np.array([self.trace(a) for a in range(self.q)], dtype=np.int32)

    def pow_table(self, max_exp: int) -> np.ndarray:
        """``table[a, e] = a**e`` for ``0 <= e <= max_exp``."""
        out = np.empty((self.q, max_exp + 1), dtype=np.int32)
        for a in range(self.q):
            for e in range(max_exp + 1):
                out[a, e] = self.pow(a, e)
        return out


@lru_cache(maxsize=None)
def field_create(p: int, s: int = 1) -> FieldParams:
    """Return the canonical field F_{p^s}.

    The modulus is the lexicographically smallest monic irreducible of degree
    ``s`` (coefficient tuples ``(c_0, ..., c_{s-1})`` compared in order).
    """
    if not is_prime(p):
        raise NotPrime(f"{p} is not prime")
    if s < 1:
        raise DegreeZero("extension degree must be at least 1")
    if p**s > MAX_Q:
        raise FieldTooLarge(f"q = {p}^{s} exceeds the maximum {MAX_Q}")
    return FieldParams(p, s, _canonical_modulus(p, s))


@dataclass(frozen=True)
class FieldElement:
    field: FieldParams
    value: int

    @property
    def coeffs(self) -> tuple[int, ...]:
        return self.field.digits(self.value)

    def _other(self, other) -> int:
        if isinstance(other, FieldElement):
            self.field.check(other)
            return other.value
        if isinstance(other, int):
            return self.field.from_int(other)
        return NotImplemented

    def _wrap(self, v: int) -> FieldElement:
        return FieldElement(self.field, v)

    def __add__(self, other):
        b = self._other(other)
        return NotImplemented if b is NotImplemented else self._wrap(self.field.add(self.value, b))

    __radd__ = __add__

    def __sub__(self, other):
        b = self._other(other)
        return NotImplemented if b is NotImplemented else self._wrap(self.field.sub(self.value, b))

    def __rsub__(self, other):
        b = self._other(other)
        return NotImplemented if b is NotImplemented else self._wrap(self.field.sub(b, self.value))

    def __mul__(self, other):
        b = self._other(other)
        return NotImplemented if b is NotImplemented else self._wrap(self.field.mul(self.value, b))

    __rmul__ = __mul__

    def __truediv__(self, other):
        b = self._other(other)
        if b is NotImplemented:
            return NotImplemented
        return self._wrap(self.field.mul(self.value, self.field.inv(b)))

    def __neg__(self) -> FieldElement:
        return self._wrap(self.field.neg(self.value))

    def __pow__(self, e: int) -> FieldElement:
        return self._wrap(self.field.pow(self.value, e))

    def inv(self) -> FieldElement:
        return self._wrap(self.field.inv(self.value))

    def trace(self) -> int:
        return self.field.trace(self.value)

    def char_exponent(self) -> int:
        return self.field.char_exponent(self.value)

    def is_zero(self) -> bool:
        return self.value == 0

    def __str__(self) -> str:
        return format_element(self.value, self.field)


def format_coeffs(coeffs, p: int, symbol: str = "t") -> str:
    parts = []
    for i in range(len(coeffs) - 1, -1, -1):
        c = coeffs[i] % p
        if c == 0:
            continue
        if i == 0:
            parts.append(str(c))
        else:
            mono = symbol if i == 1 else f"{symbol}^{i}"
            parts.append(mono if c == 1 else f"{c}*{mono}")
    return "+".join(parts) if parts else "0"


def format_element(a: int, fld: FieldParams) -> str:
    """Decimal for prime fields, a polynomial in ``t`` otherwise."""
    if fld.s == 1:
        return str(a)
    return format_coeffs(fld.digits(a), fld.p)


_ELEM_TERM = re.compile(r"\s*([+-]?)\s*(?:(\d+)\s*\*?\s*)?(t(?:\s*\^\s*(\d+))?)?\s*")


def parse_element(text: str, fld: FieldParams) -> int:
    """Parse ``2*t^2+t+1`` style text; prime fields accept integers only."""
    src = text.strip()
    if not src:
        raise PolySyntaxError("empty field element", 0)
    pos = 0
    acc = 0
    while pos < len(src):
        m = _ELEM_TERM.match(src, pos)
        if not m or m.end() == pos or not (m.group(2) or m.group(3)):
            raise PolySyntaxError(f"bad field element {text!r}", pos)
        sign, coef, tpart, exp = m.groups()
        if pos > 0 and not sign:
            raise PolySyntaxError(f"missing operator in {text!r}", pos)
        c = int(coef) if coef else 1
        if sign == "-":
            c = -c
        if tpart:
            if fld.s == 1:
                raise FieldMismatch("symbol 't' used with a prime field")
            k = int(exp) if exp else 1
            coeffs = [0] * k + [c]
            term = fld.from_coeffs(coeffs)
        else:
            term = fld.from_int(c)
        acc = fld.add(acc, term)
        pos = m.end()
    return acc
