# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled hot loops. Signatures mirror ``_kernels_py`` exactly.

Field elements are int64 codes; ``exp`` has length 2(q-1) so that
exp[log a + log b] never needs a modulo.
"""
import numpy as np
cimport numpy as cnp
from libc.stdint cimport int64_t, uint8_t

ctypedef int64_t i64

cdef extern from *:
    int __builtin_popcountll(unsigned long long) nogil

BACKEND = "cython"


cdef inline i64 _add(i64 a, i64 b, i64 p, i64 k) noexcept nogil:
    cdef i64 r = 0, pw = 1, j
    if p == 2:
        return a ^ b
    if k == 1:
        r = a + b
        return r - p if r >= p else r
    for j in range(k):
        r += (((a % p) + (b % p)) % p) * pw
        a //= p
        b //= p
        pw *= p
    return r


cdef inline i64 _neg(i64 a, i64 p, i64 k) noexcept nogil:
    cdef i64 r = 0, pw = 1, j, d
    if p == 2 or a == 0:
        return a
    if k == 1:
        return p - a
    for j in range(k):
        d = a % p
        if d:
            r += (p - d) * pw
        a //= p
        pw *= p
    return r


cdef inline i64 _mul(i64 a, i64 b, const i64* exp, const i64* log) noexcept nogil:
    if a == 0 or b == 0:
        return 0
    return exp[log[a] + log[b]]


cdef inline i64 _inv(i64 a, i64 q, const i64* exp, const i64* log) noexcept nogil:
    return exp[(q - 1 - log[a]) % (q - 1)]


def rref(i64[:, ::1] a, i64 p, i64 k, i64 q, const i64[::1] exp, const i64[::1] log):
    """Reduce ``a`` in place to reduced row echelon form; return pivot columns."""
    cdef Py_ssize_t rows = a.shape[0], cols = a.shape[1]
    cdef Py_ssize_t r = 0, c, i, j, piv
    cdef i64 t, f, s
    cdef const i64* ep = &exp[0]
    cdef const i64* lp = &log[0]
    pivots = []
    for c in range(cols):
        if r == rows:
            break
        piv = -1
        for i in range(r, rows):
            if a[i, c] != 0:
                piv = i
                break
        if piv < 0:
            continue
        if piv != r:
            for j in range(cols):
                t = a[r, j]
                a[r, j] = a[piv, j]
                a[piv, j] = t
        s = _inv(a[r, c], q, ep, lp)
        if s != 1:
            for j in range(c, cols):
                a[r, j] = _mul(a[r, j], s, ep, lp)
        for i in range(rows):
            if i == r or a[i, c] == 0:
                continue
            f = _neg(a[i, c], p, k)
            for j in range(c, cols):
                if a[r, j] != 0:
                    a[i, j] = _add(a[i, j], _mul(f, a[r, j], ep, lp), p, k)
        pivots.append(c)
        r += 1
    return pivots


def matmul(const i64[:, ::1] a, const i64[:, ::1] b, i64 p, i64 k, i64 q,
           const i64[::1] exp, const i64[::1] log):
    cdef Py_ssize_t m = a.shape[0], n = a.shape[1], c = b.shape[1]
    cdef Py_ssize_t i, j, t
    cdef i64 x
    cdef const i64* ep = &exp[0]
    cdef const i64* lp = &log[0]
    out = np.zeros((m, c), dtype=np.int64)
    cdef i64[:, ::1] o = out
    for i in range(m):
        for t in range(n):
            x = a[i, t]
            if x == 0:
                continue
            for j in range(c):
                if b[t, j] != 0:
                    o[i, j] = _add(o[i, j], _mul(x, b[t, j], ep, lp), p, k)
    return out


def first_zero_product(const i64[:, ::1] z, const i64[:, ::1] L, i64 p, i64 k, i64 q,
                       const i64[::1] exp, const i64[::1] log):
    """Index of the first row of ``z`` with zL = 0, or -1."""
    cdef Py_ssize_t rows = z.shape[0], n = z.shape[1], N = L.shape[1]
    cdef Py_ssize_t i, j, t
    cdef i64 acc
    cdef bint zero
    cdef const i64* ep = &exp[0]
    cdef const i64* lp = &log[0]
    for i in range(rows):
        zero = True
        for j in range(N):
            acc = 0
            for t in range(n):
                if z[i, t] != 0 and L[t, j] != 0:
                    acc = _add(acc, _mul(z[i, t], L[t, j], ep, lp), p, k)
            if acc != 0:
                zero = False
                break
        if zero:
            return i
    return -1


def span_extend(const i64[::1] span, const i64[::1] v, i64 p, i64 k, i64 q,
                const i64[::1] exp, const i64[::1] log, const uint8_t[::1] allowed):
    """Codes of span + <v>, or None if some new vector is not allowed.

    Vectors are base-q codes with the first coordinate most significant.
    The result lists the old span first, then a*v + w for a = 1..q-1.
    """
    cdef Py_ssize_t s = span.shape[0], n = v.shape[0]
    cdef Py_ssize_t a, w, j
    cdef i64 old, pw, acc
    cdef const i64* ep = &exp[0]
    cdef const i64* lp = &log[0]
    out = np.empty(s * q, dtype=np.int64)
    cdef i64[::1] o = out
    cdef i64[::1] scaled = np.empty(n, dtype=np.int64)
    for w in range(s):
        o[w] = span[w]
    for a in range(1, q):
        for j in range(n):
            scaled[j] = _mul(a, v[j], ep, lp)
        for w in range(s):
            old = span[w]
            acc = 0
            pw = 1
            for j in range(n - 1, -1, -1):
                acc += _add(old % q, scaled[j], p, k) * pw
                old //= q
                pw *= q
            if not allowed[acc]:
                return None
            o[a * s + w] = acc
    return out


cdef inline i64 _peel(const i64* masks, Py_ssize_t m, i64 P, int two_delta) noexcept nogil:
    cdef Py_ssize_t i
    cdef int deg
    cdef bint found
    while P:
        found = False
        for i in range(m):
            deg = __builtin_popcountll(<unsigned long long>(masks[i] & P))
            if 1 <= deg <= two_delta:
                P &= ~masks[i]
                found = True
                break
        if not found:
            return P
    return 0


def phi_peel(const i64[::1] masks, i64 P, int two_delta):
    """Largest Phi element inside packet mask P (0 when none)."""
    cdef i64 dummy = 0
    if masks.shape[0] == 0:
        return _peel(&dummy, 0, P, two_delta)
    return _peel(&masks[0], masks.shape[0], P, two_delta)


def bmax_search(const i64[::1] masks, int n, int two_delta):
    """Largest mask B (lexicographically least index tuple) with empty Phi."""
    cdef Py_ssize_t m = masks.shape[0]
    cdef int size, i, j
    cdef i64 B
    cdef i64 dummy = 0
    cdef const i64* mp = &dummy
    cdef int idx[64]
    if m > 0:
        mp = &masks[0]
    for size in range(n, -1, -1):
        for i in range(size):
            idx[i] = i
        while True:
            B = 0
            for i in range(size):
                B |= (<i64>1) << idx[i]
            if _peel(mp, m, B, two_delta) == 0:
                return B
            # next combination in lexicographic order
            i = size - 1
            while i >= 0 and idx[i] == n - size + i:
                i -= 1
            if i < 0:
                break
            idx[i] += 1
            for j in range(i + 1, size):
                idx[j] = idx[j - 1] + 1
    return 0


def best_partition(const i64[::1] values, int s):
    """Lexicographically first restricted growth string maximizing the sum
    of ``values[block mask]`` over blocks. Returns (best, rgs)."""
    cdef int a[32]
    cdef int mx[32]
    cdef i64 blocks[32]
    cdef int best_rgs[32]
    cdef int i, j, nb
    cdef i64 total, best = -1
    if s == 0:
        return 0, []
    for i in range(s):
        a[i] = 0
        mx[i] = 0
    while True:
        nb = mx[s - 1] + 1
        for j in range(nb):
            blocks[j] = 0
        for i in range(s):
            blocks[a[i]] |= (<i64>1) << i
        total = 0
        for j in range(nb):
            total += values[blocks[j]]
        if total > best:
            best = total
            for i in range(s):
                best_rgs[i] = a[i]
        i = s - 1
        while i >= 1 and a[i] == mx[i - 1] + 1:
            i -= 1
        if i == 0:
            break
        a[i] += 1
        mx[i] = mx[i - 1] if mx[i - 1] > a[i] else a[i]
        for j in range(i + 1, s):
            a[j] = 0
            mx[j] = mx[i]
    return best, [best_rgs[i] for i in range(s)]
