"""Regenerate ``src/bnsi/_conway.py`` by direct search.

A Conway polynomial C(p, n) is the least monic primitive polynomial of
degree n over GF(p), under the alternating-sign lexicographic order, such
that C(p, m)(x^((p^n - 1)/(p^m - 1))) vanishes mod C(p, n) for every proper
divisor m of n.

    python tools/gen_conway.py [max_q]
"""

import sys
import time
from pathlib import Path

MAX_Q = 65536


def primes_upto(n):
    sieve = bytearray([1]) * (n + 1)
    sieve[:2] = b"\x00\x00"
    for i in range(2, int(n**0.5) + 1):
        if sieve[i]:
            sieve[i * i :: i] = bytearray(len(sieve[i * i :: i]))
    return [i for i, v in enumerate(sieve) if v]


def prime_factors(n):
    out, d = [], 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def least_primitive_root(p):
    if p == 2:
        return 1
    fs = prime_factors(p - 1)
    for g in range(2, p):
        if all(pow(g, (p - 1) // r, p) != 1 for r in fs):
            return g
    raise AssertionError(p)


def mulmod(a, b, f, p):
    """Product of coefficient lists (low first) reduced by monic f."""
    n = len(f) - 1
    prod = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                prod[i + j] += ai * bj
    for d in range(len(prod) - 1, n - 1, -1):
        c = prod[d] % p
        if c:
            for j in range(n):
                prod[d - n + j] -= c * f[j]
        prod[d] = 0
    return [c % p for c in prod[:n]] + [0] * max(0, n - len(prod))


def powmod_x(e, f, p):
    n = len(f) - 1
    result = [1] + [0] * (n - 1)
    base = [0, 1] + [0] * (n - 2) if n > 1 else [(-f[0]) % p]
    while e:
        if e & 1:
            result = mulmod(result, base, f, p)
        e >>= 1
        if e:
            base = mulmod(base, base, f, p)
    return result


def eval_poly_at(g, elem, f, p):
    """g(elem) mod f, Horner; g is a coefficient list (low first)."""
    n = len(f) - 1
    acc = [0] * n
    for c in reversed(g):
        acc = mulmod(acc, elem, f, p)
        acc[0] = (acc[0] + c) % p
    return acc


# GF(2) fast path: polynomials as ints
def mulmod2(a, b, f, n):
    r = 0
    while b:
        if b & 1:
            r ^= a
        b >>= 1
        a <<= 1
        if a >> n & 1:
            a ^= f
    return r


def powmod2(e, f, n):
    r, b = 1, 2
    if n == 1:
        b = 1
    while e:
        if e & 1:
            r = mulmod2(r, b, f, n)
        e >>= 1
        if e:
            b = mulmod2(b, b, f, n)
    return r


def conway(p, n, table):
    q = p**n
    fs = prime_factors(q - 1)
    divisors = [m for m in range(1, n) if n % m == 0]
    g = least_primitive_root(p)
    if n == 1:
        return [(-g) % p, 1]
    # alpha_0 is pinned to the least primitive root by compatibility with C(p, 1)
    for t in range(p ** (n - 1)):
        alpha = [0] * n  # alpha[i] pairs with x^i
        alpha[0] = g
        v = t
        for i in range(1, n):
            alpha[i] = v % p
            v //= p
        # t counts with alpha_1 least significant: walk so alpha_{n-1} is most significant
        f = [((-1) ** (n - i) * alpha[i]) % p for i in range(n)] + [1]
        if p == 2:
            fi = sum(c << i for i, c in enumerate(f))
            if powmod2(q - 1, fi, n) != 1:
                continue
            if any(powmod2((q - 1) // r, fi, n) == 1 for r in fs):
                continue
        else:
            one = [1] + [0] * (n - 1)
            if powmod_x(q - 1, f, p) != one:
                continue
            if any(powmod_x((q - 1) // r, f, p) == one for r in fs):
                continue
        ok = True
        for m in divisors:
            cm = table[(p, m)]
            elem = powmod_x((q - 1) // (p**m - 1), f, p)
            if any(eval_poly_at(cm, elem, f, p)):
                ok = False
                break
        if ok:
            return f
    raise AssertionError((p, n))


def main():
    max_q = int(sys.argv[1]) if len(sys.argv) > 1 else MAX_Q
    table = {}
    for p in primes_upto(max_q):
        n = 1
        while p**n <= max_q:
            if n == 1 and p > 13 and p * p > max_q:
                break
            t0 = time.time()
            table[(p, n)] = conway(p, n, table)
            dt = time.time() - t0
            if dt > 1:
                print(f"C({p},{n}) {dt:.1f}s", file=sys.stderr)
            n += 1
    out = Path(__file__).resolve().parents[1] / "src" / "bnsi" / "_conway.py"
    lines = [
        '"""Conway polynomials, coefficients listed constant term first.',
        "",
        "Generated by tools/gen_conway.py; do not edit by hand.",
        '"""',
        "",
        "CONWAY = {",
    ]
    for (p, n), f in sorted(table.items()):
        if n == 1:
            continue
        lines.append(f"    ({p}, {n}): {tuple(f)},")
    lines.append("}")
    out.write_text("\n".join(lines) + "\n")
    print(f"wrote {sum(1 for k in table if k[1] > 1)} polynomials to {out}")


if __name__ == "__main__":
    main()
