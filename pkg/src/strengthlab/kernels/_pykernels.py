"""Pure numpy implementation of the enumeration kernels.

Points of F_q^n are ranked mixed-radix with the first coordinate fastest.
A range of ranks is evaluated by splitting the coordinates into a low block
(every assignment, materialised once) and a high block (chunked); each
polynomial becomes ``sum_m coef_m(high) * mono_m(low)``, which for prime
fields is a single matrix product.
"""

from __future__ import annotations

import numpy as np

from .compiled import CompiledFamily

NAME = "python"
_LOW_MAX = 1 << 12
_CHUNK = 1 << 21


def _digits(idx: np.ndarray, q: int, n: int) -> np.ndarray:
    """(len(idx), n) coordinates of ranked points."""
    out = np.empty((idx.shape[0], n), dtype=np.int64)
    rest = idx.astype(np.int64, copy=True)
    for j in range(n):
        out[:, j] = rest % q
        rest //= q
    return out


def eval_points(cf: CompiledFamily, pts: np.ndarray) -> np.ndarray:
    """Values (K, N) at the rows of ``pts`` (N, n)."""
    pts = np.asarray(pts, dtype=np.int64)
    N = pts.shape[0]
    q = cf.q
    add = cf.add.ravel()
    mul = cf.mul.ravel()
    powt = cf.powt
    out = np.zeros((cf.K, N), dtype=np.int32)
    for k in range(cf.K):
        acc = np.zeros(N, dtype=np.int64)
        for c, facs in cf.poly_terms(k):
            val = np.full(N, c, dtype=np.int64)
            for v, e in facs:
                val = mul[val * q + powt[pts[:, v], e]]
            acc = add[acc * q + val]
        out[k] = acc
    return out


def _low_width(cf: CompiledFamily, start: int, stop: int) -> int:
    q, n = cf.q, cf.n
    L = 0
    while L < n and q ** (L + 1) <= _LOW_MAX and start % q ** (L + 1) == 0 and stop % q ** (L + 1) == 0:
        L += 1
    return L


def values_range(cf: CompiledFamily, start: int, stop: int) -> np.ndarray:
    """Values (K, stop - start) at the points ranked ``start .. stop - 1``."""
    q, n, K = cf.q, cf.n, cf.K
    L = _low_width(cf, start, stop)
    if L == 0:
        return eval_points(cf, _digits(np.arange(start, stop), q, n))
    low = q**L
    add = cf.add
    mul = cf.mul
    powt = cf.powt
    low_digits = _digits(np.arange(low), q, L)

    # split every term into its low monomial and its high factors
    mono_index: dict[tuple, int] = {}
    split = []
    for k in range(K):
        for c, facs in cf.poly_terms(k):
            lo = tuple(f for f in facs if f[0] < L)
            hi = [f for f in facs if f[0] >= L]
            m = mono_index.setdefault(lo, len(mono_index))
            split.append((k, m, c, hi))
    M = len(mono_index)
    mono_vals = np.empty((M, low), dtype=np.int64)
    for lo, m in mono_index.items():
        val = np.ones(low, dtype=np.int64)
        for v, e in lo:
            val = mul[val, powt[low_digits[:, v], e]]
        mono_vals[m] = val

    out = np.empty((K, stop - start), dtype=np.int32)
    h0, h1 = start // low, stop // low
    chunk = max(1, _CHUNK // low)
    prime = cf.field.s == 1
    p = cf.p
    use_float = M * (p - 1) ** 2 < 2**52
    mono_mat = mono_vals.astype(np.float64 if use_float else np.int64)
    for a in range(h0, h1, chunk):
        b = min(h1, a + chunk)
        hd = _digits(np.arange(a, b) * low, q, n)
        coef = np.zeros((K, M, b - a), dtype=np.int64)
        for k, m, c, hi in split:
            val = np.full(b - a, c, dtype=np.int64)
            for v, e in hi:
                val = mul[val, powt[hd[:, v], e]]
            coef[k, m] = add[coef[k, m], val]
        for k in range(K):
            if prime:
                cm = coef[k].T.astype(mono_mat.dtype)
                vals = np.mod(cm @ mono_mat, p).astype(np.int64)
            else:
                vals = np.zeros((b - a, low), dtype=np.int64)
                for m in range(M):
                    vals = add[vals, mul[coef[k, m][:, None], mono_vals[m][None, :]]]
            out[k, (a - h0) * low:(b - h0) * low] = vals.reshape(-1)
    return out


def trace_hist(cf: CompiledFamily, start: int, stop: int) -> np.ndarray:
    vals = values_range(cf, start, stop)[0]
    return np.bincount(cf.trace[vals], minlength=cf.p).astype(np.int64)


def joint_hist(cf: CompiledFamily, start: int, stop: int) -> np.ndarray:
    vals = values_range(cf, start, stop).astype(np.int64)
    idx = np.zeros(vals.shape[1], dtype=np.int64)
    for k in range(cf.K - 1, -1, -1):
        idx = idx * cf.q + vals[k]
    return np.bincount(idx, minlength=cf.q**cf.K).astype(np.int64)


def zero_mask(cf: CompiledFamily, start: int, stop: int) -> np.ndarray:
    vals = values_range(cf, start, stop)
    return ~np.any(vals, axis=0)


def zero_count(cf: CompiledFamily, start: int, stop: int) -> int:
    return int(np.count_nonzero(zero_mask(cf, start, stop)))


def gowers_hist(trace_vals: np.ndarray, add: np.ndarray, q: int, n: int, d: int, p: int,
                vstart: int, vstop: int) -> np.ndarray:
    """Histogram of sum_w (-1)^|w| Tr P(x + w.v) mod p over x and v-tuples in range."""
    N = q**n
    xd = _digits(np.arange(N), q, n)
    weights = q ** np.arange(n, dtype=np.int64)
    tr = np.asarray(trace_vals, dtype=np.int64)
    hist = np.zeros(p, dtype=np.int64)
    chunk = max(1, _CHUNK // (N * (1 << d)))
    for a in range(vstart, vstop, chunk):
        b = min(vstop, a + chunk)
        V = np.arange(a, b, dtype=np.int64)
        vd = [_digits((V // N**i) % N, q, n) for i in range(d)]
        offsets = [np.zeros((b - a, n), dtype=np.int64)]
        for w in range(1, 1 << d):
            low = (w & -w).bit_length() - 1
            offsets.append(add[offsets[w & (w - 1)], vd[low]].astype(np.int64))
        expo = np.zeros((b - a, N), dtype=np.int64)
        for w in range(1 << d):
            idx = np.zeros((b - a, N), dtype=np.int64)
            for j in range(n):
                idx += add[offsets[w][:, j][:, None], xd[:, j][None, :]] * weights[j]
            t = tr[idx]
            expo += -t if bin(w).count("1") % 2 else t
        hist += np.bincount(np.mod(expo, p).ravel(), minlength=p)
    return hist
