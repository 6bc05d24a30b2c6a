# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled enumeration kernels.

Odometer enumeration of F_q^n (first coordinate fastest). Each term is
filed under its smallest variable ("level"); when coordinates 0..k change,
only terms of level <= k are recomputed and the cached suffix sums over
higher levels are reused. Level 0 is folded into a univariate polynomial
in the first coordinate once per run of q points.
"""

import numpy as np
cimport numpy as cnp
from libc.stdint cimport int32_t, int64_t, uint8_t
from libc.stdlib cimport malloc, calloc, free

ctypedef int32_t i32
ctypedef int64_t i64

NAME = "cython"

cdef struct Fam:
    int K
    int n
    int q
    int E1
    const i32* coef
    const i64* tptr
    const i32* fvar
    const i32* fexp
    const i64* lptr
    const i32* add
    const i32* mul
    const i32* powt
    const i32* trace


cdef class _Holder:
    """Keeps the numpy buffers alive while a Fam points into them."""
    cdef Fam f
    cdef object refs

    def __init__(self, cf):
        cdef const i32[::1] coef = _nonempty(cf.term_coef, np.int32)
        cdef const i64[::1] tptr = np.ascontiguousarray(cf.term_ptr, dtype=np.int64)
        cdef const i32[::1] fvar = _nonempty(cf.fac_var, np.int32)
        cdef const i32[::1] fexp = _nonempty(cf.fac_exp, np.int32)
        cdef const i64[::1] lptr = np.ascontiguousarray(cf.level_ptr, dtype=np.int64).ravel()
        cdef const i32[::1] add = np.ascontiguousarray(cf.add, dtype=np.int32).ravel()
        cdef const i32[::1] mul = np.ascontiguousarray(cf.mul, dtype=np.int32).ravel()
        cdef const i32[::1] powt = np.ascontiguousarray(cf.powt, dtype=np.int32).ravel()
        cdef const i32[::1] trace = np.ascontiguousarray(cf.trace, dtype=np.int32)
        self.refs = (coef, tptr, fvar, fexp, lptr, add, mul, powt, trace)
        self.f.K = cf.K
        self.f.n = cf.n
        self.f.q = cf.field.q
        self.f.E1 = cf.powt.shape[1]
        self.f.coef = &coef[0]
        self.f.tptr = &tptr[0]
        self.f.fvar = &fvar[0]
        self.f.fexp = &fexp[0]
        self.f.lptr = &lptr[0]
        self.f.add = &add[0]
        self.f.mul = &mul[0]
        self.f.powt = &powt[0]
        self.f.trace = &trace[0]


def _nonempty(a, dtype):
    a = np.ascontiguousarray(a, dtype=dtype)
    if a.shape[0] == 0:
        a = np.zeros(1, dtype=dtype)
    return a


cdef inline i32 _term(const Fam* f, i64 t, const i32* x) noexcept nogil:
    cdef i32 v = f.coef[t]
    cdef i64 a
    for a in range(f.tptr[t], f.tptr[t + 1]):
        v = f.mul[v * f.q + f.powt[x[f.fvar[a]] * f.E1 + f.fexp[a]]]
    return v


cdef inline void _refresh(const Fam* f, const i32* x, i32* high, int kmax, int lo) noexcept nogil:
    """Recompute the suffix sums of levels kmax down to lo."""
    cdef int k, j
    cdef int w = f.n + 2
    cdef i64 t
    cdef i32 acc
    for k in range(f.K):
        for j in range(kmax, lo - 1, -1):
            acc = high[k * w + j + 1]
            for t in range(f.lptr[k * w + j], f.lptr[k * w + j + 1]):
                acc = f.add[acc * f.q + _term(f, t, x)]
            high[k * w + j] = acc


cdef inline void _record(const Fam* f, int mode, const i32* vals, i64* out, uint8_t* mask,
                         i64 pos) noexcept nogil:
    cdef int k
    cdef i64 idx
    cdef bint allzero
    if mode == 0:
        out[f.trace[vals[0]]] += 1
    elif mode == 1:
        idx = 0
        for k in range(f.K - 1, -1, -1):
            idx = idx * f.q + vals[k]
        out[idx] += 1
    else:
        allzero = True
        for k in range(f.K):
            if vals[k] != 0:
                allzero = False
                break
        if mode == 2:
            if allzero:
                out[0] += 1
        else:
            mask[pos] = allzero


# modes: 0 trace histogram of poly 0, 1 joint histogram, 2 zero count, 3 zero mask
cdef void _scan(const Fam* f, i64 start, i64 stop, int mode, i64* out, uint8_t* mask) noexcept nogil:
    # Points come in runs of q sharing x[1:]. Per run, the level-0 terms collapse
    # to a univariate polynomial sum_e g_e x0^e, so each point costs O(deg) lookups.
    cdef int n = f.n
    cdef int q = f.q
    cdef int K = f.K
    cdef int E1 = f.E1
    cdef int w = n + 2
    cdef int j, k, e, e0, x0, kmax
    cdef i64 i, rest, t, a
    cdef i32 v, acc
    if stop <= start:
        return
    cdef i32* x = <i32*> calloc(n + 1, sizeof(i32))
    cdef i32* high = <i32*> calloc(K * w, sizeof(i32))
    cdef i32* vals = <i32*> calloc(K, sizeof(i32))
    cdef i32* g = <i32*> calloc(K * E1, sizeof(i32))
    if n == 0:
        _refresh(f, x, high, 0, 0)
        for k in range(K):
            vals[k] = high[k * w]
        _record(f, mode, vals, out, mask, 0)
        free(x); free(high); free(vals); free(g)
        return
    rest = start
    for j in range(n):
        x[j] = <i32> (rest % q)
        rest //= q
    kmax = n
    i = start
    while True:
        _refresh(f, x, high, kmax, 1)
        for k in range(K):
            for e in range(E1):
                g[k * E1 + e] = 0
            for t in range(f.lptr[k * w], f.lptr[k * w + 1]):
                v = f.coef[t]
                e0 = 0
                for a in range(f.tptr[t], f.tptr[t + 1]):
                    if f.fvar[a] == 0:
                        e0 = f.fexp[a]
                    else:
                        v = f.mul[v * q + f.powt[x[f.fvar[a]] * E1 + f.fexp[a]]]
                g[k * E1 + e0] = f.add[g[k * E1 + e0] * q + v]
        x0 = x[0]
        while x0 < q and i < stop:
            for k in range(K):
                acc = high[k * w + 1]
                for e in range(E1):
                    if g[k * E1 + e]:
                        acc = f.add[acc * q + f.mul[g[k * E1 + e] * q + f.powt[x0 * E1 + e]]]
                vals[k] = acc
            _record(f, mode, vals, out, mask, i - start)
            i += 1
            x0 += 1
        if i >= stop:
            break
        x[0] = 0
        j = 1
        while x[j] == q - 1:
            x[j] = 0
            j += 1
        x[j] += 1
        kmax = j
    free(x)
    free(high)
    free(vals)
    free(g)


def trace_hist(cf, i64 start, i64 stop):
    cdef _Holder h = _Holder(cf)
    out = np.zeros(cf.field.p, dtype=np.int64)
    cdef i64[::1] o = out
    with nogil:
        _scan(&h.f, start, stop, 0, &o[0], NULL)
    return out


def joint_hist(cf, i64 start, i64 stop):
    cdef _Holder h = _Holder(cf)
    out = np.zeros(cf.field.q ** cf.K, dtype=np.int64)
    cdef i64[::1] o = out
    with nogil:
        _scan(&h.f, start, stop, 1, &o[0], NULL)
    return out


def zero_count(cf, i64 start, i64 stop):
    cdef _Holder h = _Holder(cf)
    out = np.zeros(1, dtype=np.int64)
    cdef i64[::1] o = out
    with nogil:
        _scan(&h.f, start, stop, 2, &o[0], NULL)
    return int(out[0])


def zero_mask(cf, i64 start, i64 stop):
    cdef _Holder h = _Holder(cf)
    mask = np.zeros(max(stop - start, 1), dtype=np.uint8)
    cdef uint8_t[::1] m = mask
    out = np.zeros(1, dtype=np.int64)
    cdef i64[::1] o = out
    with nogil:
        _scan(&h.f, start, stop, 3, &o[0], &m[0])
    return mask[:stop - start].astype(bool)


def values_range(cf, i64 start, i64 stop):
    pts = np.empty((stop - start, cf.n), dtype=np.int64)
    idx = np.arange(start, stop, dtype=np.int64)
    for j in range(cf.n):
        pts[:, j] = idx % cf.field.q
        idx //= cf.field.q
    return eval_points(cf, pts)


def eval_points(cf, pts_in):
    cdef _Holder h = _Holder(cf)
    cdef const Fam* f = &h.f
    pts_arr = np.ascontiguousarray(pts_in, dtype=np.int32)
    cdef Py_ssize_t N = pts_arr.shape[0]
    out = np.zeros((cf.K, N), dtype=np.int32)
    if N == 0 or cf.n == 0:
        if cf.n == 0 and N > 0:
            pts_arr = np.zeros((N, 1), dtype=np.int32)
        else:
            return out
    cdef const i32[:, ::1] pts = pts_arr
    cdef i32[:, ::1] o = out
    cdef Py_ssize_t r
    cdef int k
    cdef i64 t
    cdef i32 acc
    cdef int w = f.n + 2
    with nogil:
        for r in range(N):
            for k in range(f.K):
                acc = 0
                for t in range(f.lptr[k * w], f.lptr[k * w + f.n + 1]):
                    acc = f.add[acc * f.q + _term(f, t, &pts[r, 0])]
                o[k, r] = acc
    return out


def gowers_hist(trace_vals, add_table, int q, int n, int d, int p, i64 vstart, i64 vstop):
    """Histogram of sum_w (-1)^|w| Tr P(x + w.v) mod p over all x and v-tuples in range."""
    cdef const i32[::1] tr = np.ascontiguousarray(trace_vals, dtype=np.int32)
    cdef const i32[::1] add = np.ascontiguousarray(add_table, dtype=np.int32).ravel()
    out = np.zeros(p, dtype=np.int64)
    cdef i64[::1] o = out
    cdef int W = 1 << d
    cdef i64 N = 1
    cdef int j, i, w, low, e
    for j in range(n):
        N *= q
    cdef i32* vdig = <i32*> calloc(d * n + 1, sizeof(i32))
    cdef i32* udig = <i32*> calloc(W * n + 1, sizeof(i32))
    cdef i32* xdig = <i32*> calloc(n + 1, sizeof(i32))
    cdef i64* qpow = <i64*> calloc(n + 1, sizeof(i64))
    cdef int* sgn = <int*> calloc(W, sizeof(int))
    cdef i64 V, rest, x, idx
    qpow[0] = 1
    for j in range(1, n + 1):
        qpow[j] = qpow[j - 1] * q
    for w in range(W):
        e = 0
        i = w
        while i:
            e ^= i & 1
            i >>= 1
        sgn[w] = e
    with nogil:
        for V in range(vstart, vstop):
            rest = V
            for i in range(d):
                for j in range(n):
                    vdig[i * n + j] = <i32> (rest % q)
                    rest //= q
            for j in range(n):
                udig[j] = 0
            for w in range(1, W):
                low = 0
                while not ((w >> low) & 1):
                    low += 1
                for j in range(n):
                    udig[w * n + j] = add[udig[(w & (w - 1)) * n + j] * q + vdig[low * n + j]]
            for j in range(n):
                xdig[j] = 0
            for x in range(N):
                e = 0
                for w in range(W):
                    idx = 0
                    for j in range(n):
                        idx += add[xdig[j] * q + udig[w * n + j]] * qpow[j]
                    if sgn[w]:
                        e -= tr[idx]
                    else:
                        e += tr[idx]
                e %= p
                if e < 0:
                    e += p
                o[e] += 1
                j = 0
                while j < n and xdig[j] == q - 1:
                    xdig[j] = 0
                    j += 1
                if j < n:
                    xdig[j] += 1
    free(vdig)
    free(udig)
    free(xdig)
    free(qpow)
    free(sgn)
    return out
