"""Flat array form of a polynomial family, shared by both kernel backends."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from ..errors import BudgetExceeded, DimensionMismatch, FieldMismatch, FieldTooLarge
from ..gf import FieldParams
from ..poly import Polynomial


@dataclass(frozen=True, eq=False)
class CompiledFamily:
    """K polynomials on F_q^n as flat int arrays.

    Terms are sorted by (poly, level) where a term's level is its smallest
    variable index (``n`` for constants). ``level_ptr[k, j]`` is the offset of
    the first term of poly ``k`` with level ``>= j``; ``level_ptr[k, n + 1]``
    ends poly ``k``.
    """

    field: FieldParams
    n: int
    K: int
    term_coef: np.ndarray
    term_ptr: np.ndarray
    fac_var: np.ndarray
    fac_exp: np.ndarray
    level_ptr: np.ndarray
    add: np.ndarray
    mul: np.ndarray
    powt: np.ndarray
    trace: np.ndarray

    @property
    def q(self) -> int:
        return self.field.q

    @property
    def p(self) -> int:
        return self.field.p

    @property
    def size(self) -> int:
        return self.field.q**self.n

    def poly_terms(self, k: int):
        """Yield ``(coef, [(var, exp), ...])`` for poly ``k``."""
        for t in range(self.level_ptr[k, 0], self.level_ptr[k, self.n + 1]):
            facs = [
                (int(self.fac_var[f]), int(self.fac_exp[f]))
                for f in range(self.term_ptr[t], self.term_ptr[t + 1])
            ]
            yield int(self.term_coef[t]), facs


def compile_family(polys: Sequence[Polynomial]) -> CompiledFamily:
    if not polys:
        raise ValueError("empty family")
    field, n = polys[0].field, polys[0].n
    for P in polys:
        if P.field != field:
            raise FieldMismatch("family members over different fields")
        if P.n != n:
            raise DimensionMismatch("family members on different spaces")
    try:
        add, mul = field.add_table, field.mul_table
    except FieldTooLarge as exc:
        raise BudgetExceeded(str(exc)) from exc
    K = len(polys)
    coefs, ptr, fvar, fexp = [], [0], [], []
    level_ptr = np.zeros((K, n + 2), dtype=np.int64)
    max_exp = 1
    for k, P in enumerate(polys):
        rows = sorted(P.terms.items(), key=lambda kv: (kv[0][0][0] if kv[0] else n, kv[0]))
        levels = [m[0][0] if m else n for m, _ in rows]
        base = len(coefs)
        for j in range(n + 2):
            level_ptr[k, j] = base + sum(1 for lv in levels if lv < j)
        for m, c in rows:
            coefs.append(c)
            for v, e in m:
                fvar.append(v)
                fexp.append(e)
                max_exp = max(max_exp, e)
            ptr.append(len(fvar))
    return CompiledFamily(
        field=field,
        n=n,
        K=K,
        term_coef=np.array(coefs, dtype=np.int32),
        term_ptr=np.array(ptr, dtype=np.int64),
        fac_var=np.array(fvar, dtype=np.int32),
        fac_exp=np.array(fexp, dtype=np.int32),
        level_ptr=level_ptr,
        add=np.ascontiguousarray(add, dtype=np.int32),
        mul=np.ascontiguousarray(mul, dtype=np.int32),
        powt=np.ascontiguousarray(field.pow_table(max_exp), dtype=np.int32),
        trace=np.ascontiguousarray(field.trace_array, dtype=np.int32),
    )
