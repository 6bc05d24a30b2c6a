"""Determinant-sum generators F^n_s, their block copies, G^n_s and shift composites.

Flattening conventions (1-based names, 0-based flat indices):

* F(n, s): y^t_i  ->  (t-1)*n + (i-1)
* F_block(n, s, m, i): y^t_{k,j}  ->  (k-1)*s*n + (t-1)*n + (j-1)
* G(t, s, d): w^{i,x}_r  ->  lexicographic in (label i, set x in lex order, coordinate r)
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field as dc_field
from typing import Sequence

from .errors import ArityMismatch, BadParameters, DegreeTooLow
from .gf import FieldParams
from .poly import Polynomial, compose, delta


@dataclass(frozen=True)
class GeneratorSpec:
    kind: str
    params: dict
    names: tuple[str, ...] = dc_field(default=())

    @property
    def num_vars(self) -> int:
        return len(self.names)

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "params": self.params,
            "variables": {f"x{k + 1}": name for k, name in enumerate(self.names)},
        }


def _det_terms(s: int):
    """(sign, permutation) pairs of the s x s Leibniz expansion."""
    for perm in itertools.permutations(range(s)):
        inv = sum(1 for a in range(s) for b in range(a + 1, s) if perm[a] > perm[b])
        yield (-1 if inv % 2 else 1), perm


def F_summands(n: int, s: int) -> list[tuple[int, ...]]:
    """The s-subsets i_1 < ... < i_s of [n] (0-based), one determinant each."""
    return list(itertools.combinations(range(n), s))


def gen_F(n: int, s: int, field: FieldParams) -> Polynomial:
    """sum over s-subsets I of det[y^t_{i_u}]_{t,u}, in s*n variables."""
    if not 1 <= s <= n:
        raise BadParameters(f"need 1 <= s <= n, got n = {n}, s = {s}")
    terms: dict = {}
    for I in F_summands(n, s):
        for sign, perm in _det_terms(s):
            m = tuple(sorted((t * n + I[perm[t]], 1) for t in range(s)))
            terms[m] = field.add(terms.get(m, 0), field.from_int(sign))
    return Polynomial(field, s * n, terms)


def spec_F(n: int, s: int) -> GeneratorSpec:
    names = tuple(f"y{t}_{i}" for t in range(1, s + 1) for i in range(1, n + 1))
    return GeneratorSpec("F", {"n": n, "s": s}, names)


def gen_F_block(n: int, s: int, m: int, i: int, field: FieldParams) -> Polynomial:
    """F^n_s on the i-th of m blocks (1-based i), in s*n*m variables."""
    if not 1 <= i <= m:
        raise BadParameters(f"need 1 <= i <= m, got i = {i}, m = {m}")
    base = gen_F(n, s, field)
    off = (i - 1) * s * n
    return base.remap([off + v for v in range(s * n)], s * n * m)


def spec_F_block(n: int, s: int, m: int, i: int) -> GeneratorSpec:
    names = tuple(f"y{t}_{k}_{j}" for k in range(1, m + 1) for t in range(1, s + 1)
                  for j in range(1, n + 1))
    return GeneratorSpec("F_block", {"n": n, "s": s, "m": m, "i": i}, names)


@dataclass(frozen=True)
class GLayout:
    t: int
    s: int
    degrees: tuple[int, ...]
    sets: tuple[tuple[tuple[int, ...], ...], ...]  # X_i, 1-based elements

    @property
    def e(self) -> int:
        return sum(d - 1 for d in self.degrees)

    def index(self, label: int, x: tuple[int, ...], r: int) -> int:
        """Flat index of w^{label,x}_r (label 0-based, r 0-based)."""
        off = sum(len(self.sets[j]) for j in range(label)) * self.t
        return off + self.sets[label].index(x) * self.t + r

    @property
    def num_vars(self) -> int:
        return self.t * sum(len(X) for X in self.sets)

    def covers(self) -> list[tuple[tuple[int, ...], ...]]:
        """Ordered tuples (x_1, ..., x_s) with x_i in X_i covering [e]."""
        full = set(range(1, self.e + 1))
        return [xs for xs in itertools.product(*self.sets) if set().union(*map(set, xs)) == full]

    def names(self) -> tuple[str, ...]:
        return tuple(
            f"w{i + 1}[{','.join(map(str, x))}]_{r + 1}"
            for i, X in enumerate(self.sets) for x in X for r in range(self.t)
        )

    def collapse_map(self) -> list[int]:
        """w^{i,x}_r -> y^i_r in the s*t variables of F^t_s."""
        out = [0] * self.num_vars
        for i, X in enumerate(self.sets):
            for x in X:
                for r in range(self.t):
                    out[self.index(i, x, r)] = i * self.t + r
        return out


def g_layout(t: int, s: int, degrees: Sequence[int]) -> GLayout:
    degrees = tuple(int(d) for d in degrees)
    if len(degrees) != s:
        raise BadParameters(f"{len(degrees)} degrees given for s = {s}")
    if any(d < 2 for d in degrees):
        raise BadParameters("every degree must be >= 2")
    if t < s:
        raise BadParameters(f"need t >= s, got t = {t}, s = {s}")
    e = sum(d - 1 for d in degrees)
    sets = tuple(tuple(itertools.combinations(range(1, e + 1), d - 1)) for d in degrees)
    return GLayout(t, s, degrees, sets)


def gen_G(t: int, s: int, degrees: Sequence[int], field: FieldParams) -> Polynomial:
    """Sum over ordered covers (x_1..x_s) of F^t_s on rows w^{1,x_1}, ..., w^{s,x_s}."""
    lay = g_layout(t, s, degrees)
    base = gen_F(t, s, field)
    acc = Polynomial.zero(field, lay.num_vars)
    for xs in lay.covers():
        mapping = [lay.index(u, xs[u], r) for u in range(s) for r in range(t)]
        acc = acc + base.remap(mapping, lay.num_vars)
    return acc


def spec_G(t: int, s: int, degrees: Sequence[int]) -> GeneratorSpec:
    lay = g_layout(t, s, degrees)
    return GeneratorSpec("G", {"t": t, "s": s, "degrees": list(lay.degrees)}, lay.names())


def collapse_G(G: Polynomial, t: int, s: int, degrees: Sequence[int]) -> Polynomial:
    lay = g_layout(t, s, degrees)
    return G.remap(lay.collapse_map(), s * t)


def cover_count(degrees: Sequence[int]) -> int:
    """multinomial(e; d_1 - 1, ..., d_s - 1)."""
    parts = [d - 1 for d in degrees]
    out = math.factorial(sum(parts))
    for k in parts:
        out //= math.factorial(k)
    return out


def build_theorem_m_family(polys: Sequence[Polynomial], shifts: Sequence[Sequence[int]], t: int, m: int):
    """{P^1, ..., P^s} together with F^t_s(Delta_{w}P^j rows) for each of the m shift blocks."""
    from .family import PolyFamily

    polys = list(getattr(polys, "members", polys))
    s = len(polys)
    if len(shifts) != t * m:
        raise ArityMismatch(f"{len(shifts)} shifts given, t*m = {t * m} needed")
    if any(P.degree < 2 for P in polys):
        raise DegreeTooLow("every P^j must have degree >= 2")
    if t < s:
        raise BadParameters(f"need t >= s, got t = {t}, s = {s}")
    fld = polys[0].field
    outer = gen_F(t, s, fld)
    e = sum(P.degree - 1 for P in polys)
    members = list(polys)
    for i in range(m):
        block = shifts[i * t:(i + 1) * t]
        inners = [delta(P, w) for P in polys for w in block]
        Q = compose(outer, inners)
        assert Q.degree <= e
        members.append(Q)
    return PolyFamily(members, allow_dependent=True)
