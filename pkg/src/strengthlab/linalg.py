"""Dense linear algebra over F_q on numpy arrays of element ids."""

from __future__ import annotations

import numpy as np

from .gf import FieldParams


def _tables(field: FieldParams):
    return field.add_table, field.mul_table


def rref(M, field: FieldParams) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form and pivot columns."""
    A = np.array(M, dtype=np.int64, copy=True)
    if A.ndim != 2:
        raise ValueError("matrix expected")
    add, mul = _tables(field)
    neg = np.array([field.neg(a) for a in range(field.q)], dtype=np.int64)
    rows, cols = A.shape
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(A[r:, c])[0]
        if nz.size == 0:
            continue
        k = r + int(nz[0])
        if k != r:
            A[[r, k]] = A[[k, r]]
        A[r] = mul[field.inv(int(A[r, c])), A[r]]
        factors = neg[A[:, c]]
        factors[r] = 0
        hit = np.nonzero(factors)[0]
        if hit.size:
            A[hit] = add[A[hit], mul[factors[hit][:, None], A[r][None, :]]]
        pivots.append(c)
        r += 1
    return A[:r], pivots


def rank(M, field: FieldParams) -> int:
    return len(rref(M, field)[1])


def rank_factor(M, field: FieldParams) -> tuple[np.ndarray, np.ndarray]:
    """(C, R) with M = C R, C = pivot columns of M, R = nonzero rows of rref(M)."""
    A = np.asarray(M, dtype=np.int64)
    R, piv = rref(A, field)
    return A[:, piv], R


def matmul(A, B, field: FieldParams) -> np.ndarray:
    A = np.asarray(A, dtype=np.int64)
    B = np.asarray(B, dtype=np.int64)
    add, mul = _tables(field)
    out = np.zeros((A.shape[0], B.shape[1]), dtype=np.int64)
    for k in range(A.shape[1]):
        out = add[out, mul[A[:, k][:, None], B[k][None, :]]]
    return out


def det(M, field: FieldParams) -> int:
    """Determinant by elimination (element id)."""
    A = np.array(M, dtype=np.int64, copy=True)
    n = A.shape[0]
    add, mul = _tables(field)
    result = 1
    for c in range(n):
        nz = np.nonzero(A[c:, c])[0]
        if nz.size == 0:
            return 0
        k = c + int(nz[0])
        if k != c:
            A[[c, k]] = A[[k, c]]
            result = field.neg(result)
        piv = int(A[c, c])
        result = field.mul(result, piv)
        inv = field.inv(piv)
        for r in range(c + 1, n):
            if A[r, c]:
                f = field.neg(field.mul(int(A[r, c]), inv))
                A[r] = add[A[r], mul[f, A[c]]]
    return result


def in_row_space(v, R: np.ndarray, pivots: list[int], field: FieldParams) -> bool:
    """Whether v lies in the span of the rref rows ``R``."""
    w = np.array(v, dtype=np.int64, copy=True)
    add, mul = _tables(field)
    for i, c in enumerate(pivots):
        if w[c]:
            w = add[w, mul[field.neg(int(w[c])), R[i]]]
    return not w.any()
