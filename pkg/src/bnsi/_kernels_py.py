"""Pure numpy implementations of the compiled kernels.

Every function has the same signature and results as its counterpart in
``_kernels.pyx``; the test suite checks the two against each other.
"""
from __future__ import annotations

from itertools import combinations

import numpy as np

BACKEND = "python"


def _add(a, b, p, k):
    if p == 2:
        return np.bitwise_xor(a, b)
    if k == 1:
        return (a + b) % p
    a = np.asarray(a, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64)
    out = np.zeros(np.broadcast(a, b).shape, dtype=np.int64)
    pw = 1
    for _ in range(k):
        out += ((a % p + b % p) % p) * pw
        a = a // p
        b = b // p
        pw *= p
    return out


def _neg(a, p, k):
    if p == 2:
        return a
    if k == 1:
        return (p - a) % p
    a = np.asarray(a, dtype=np.int64)
    out = np.zeros_like(a)
    pw = 1
    for _ in range(k):
        out += ((p - a % p) % p) * pw
        a = a // p
        pw *= p
    return out


def _mul(a, b, exp, log):
    a = np.asarray(a, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64)
    prod = exp[log[a] + log[b]]
    return np.where((a == 0) | (b == 0), 0, prod)


def rref(a, p, k, q, exp, log):
    rows, cols = a.shape
    r = 0
    pivots = []
    for c in range(cols):
        if r == rows:
            break
        nz = np.flatnonzero(a[r:, c])
        if nz.size == 0:
            continue
        piv = r + int(nz[0])
        if piv != r:
            a[[r, piv]] = a[[piv, r]]
        lead = int(a[r, c])
        if lead != 1:
            s = int(exp[(q - 1 - log[lead]) % (q - 1)])
            a[r] = _mul(a[r], s, exp, log)
        others = np.flatnonzero(a[:, c])
        others = others[others != r]
        if others.size:
            f = _neg(a[others, c], p, k)
            a[others] = _add(a[others], _mul(f[:, None], a[r][None, :], exp, log), p, k)
        pivots.append(c)
        r += 1
    return pivots


def matmul(a, b, p, k, q, exp, log):
    m, n = a.shape
    out = np.zeros((m, b.shape[1]), dtype=np.int64)
    for t in range(n):
        col = a[:, t]
        if not col.any():
            continue
        out = _add(out, _mul(col[:, None], b[t][None, :], exp, log), p, k)
    return out


def first_zero_product(z, L, p, k, q, exp, log):
    if z.shape[0] == 0:
        return -1
    prod = matmul(z, L, p, k, q, exp, log)
    hits = np.flatnonzero(~prod.any(axis=1))
    return int(hits[0]) if hits.size else -1


def span_extend(span, v, p, k, q, exp, log, allowed):
    n = v.shape[0]
    s = span.shape[0]
    weights = q ** np.arange(n - 1, -1, -1, dtype=np.int64)
    digits = (span[:, None] // weights[None, :]) % q
    out = np.empty(s * q, dtype=np.int64)
    out[:s] = span
    for a in range(1, q):
        scaled = _mul(np.int64(a), v, exp, log)
        new = _add(digits, scaled[None, :], p, k) @ weights
        if not allowed[new].all():
            return None
        out[a * s:(a + 1) * s] = new
    return out


def phi_peel(masks, P, two_delta):
    P = int(P)
    masks = [int(x) for x in masks]
    while P:
        for m in masks:
            deg = (m & P).bit_count()
            if 1 <= deg <= two_delta:
                P &= ~m
                break
        else:
            return P
    return 0


def bmax_search(masks, n, two_delta):
    for size in range(n, -1, -1):
        for idx in combinations(range(n), size):
            B = 0
            for i in idx:
                B |= 1 << i
            if phi_peel(masks, B, two_delta) == 0:
                return B
    return 0


def _all_rgs(s):
    """Every restricted growth string of length s, in lexicographic order."""
    rgs = np.zeros((1, 1), dtype=np.int8)
    top = np.zeros(1, dtype=np.int8)
    for _ in range(1, s):
        counts = top.astype(np.int64) + 2
        parent = np.repeat(np.arange(rgs.shape[0]), counts)
        starts = np.repeat(np.cumsum(counts) - counts, counts)
        label = (np.arange(parent.shape[0]) - starts).astype(np.int8)
        rgs = np.hstack([rgs[parent], label[:, None]])
        top = np.maximum(top[parent], label)
    return rgs


def best_partition(values, s):
    if s == 0:
        return 0, []
    rgs = _all_rgs(s)
    weights = (np.int64(1) << np.arange(s, dtype=np.int64))
    total = np.zeros(rgs.shape[0], dtype=np.int64)
    for label in range(s):
        masks = (rgs == label).astype(np.int64) @ weights
        total += np.asarray(values)[masks]
    best = int(np.argmax(total))
    return int(total[best]), [int(x) for x in rgs[best]]
