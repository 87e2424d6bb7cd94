"""Exact integer and integer-polynomial primitives.

Integers are plain Python ints (arbitrary precision).  Integer polynomials
are dense tuples of ints in ascending degree order with trailing zeros
trimmed; the zero polynomial is the empty tuple.  No floating point is used
anywhere in this package.
"""

from __future__ import annotations

import math

IntPoly = tuple

# ---------------------------------------------------------------------------
# integers


def ord_n(a: int, N: int) -> tuple[int, int]:
    """Split a = N^k * b with N not dividing b; return (k, b).

    a must be nonzero and N > 1.
    """
    if a == 0:
        raise ValueError("ord_n of zero")
    if N <= 1:
        raise ValueError("modulus must exceed 1")
    k = 0
    while a % N == 0:
        a //= N
        k += 1
    return k, a


def iroot(n: int, k: int) -> int:
    """Floor of the k-th root of n >= 0, by integer Newton iteration."""
    if n < 0 or k < 1:
        raise ValueError("iroot needs n >= 0, k >= 1")
    if n < 2 or k == 1:
        return n
    x = 1 << (-(-n.bit_length() // k))  # upper estimate: 2^ceil(bits/k)
    while True:
        y = ((k - 1) * x + n // x ** (k - 1)) // k
        if y >= x:
            return x
        x = y


def perfect_power(n: int) -> tuple[int, int]:
    """Return (b, k) with n = b^k and k maximal (k = 1 when n is no power)."""
    if n < 2:
        raise ValueError("perfect_power needs n >= 2")
    for k in range(n.bit_length(), 1, -1):
        b = iroot(n, k)
        if b ** k == n:
            return b, k
    return n, 1


def factor_refinement(nums: list[int]) -> list[tuple[int, int]]:
    """Gcd-free basis: pairwise coprime bases with prod b^e = prod(nums).

    Only gcd splitting is performed; no factoring is attempted.
    """
    stack = [(n, 1) for n in nums if n > 1]
    basis: list[tuple[int, int]] = []
    while stack:
        n, e = stack.pop()
        if n == 1:
            continue
        for i, (b, be) in enumerate(basis):
            g = math.gcd(n, b)
            if g == 1:
                continue
            # split both entries along g and retry the pieces
            basis.pop(i)
            stack.extend([(g, e + be), (n // g, e), (b // g, be)])
            break
        else:
            basis.append((n, e))
    merged: dict[int, int] = {}
    for b, e in basis:
        merged[b] = merged.get(b, 0) + e
    return sorted(merged.items())


def coprime_splitting(d: int, N: int) -> list[int]:
    """Refine a proper divisor d of N into pairwise coprime non-powers.

    Every prime of N divides exactly one output entry, each entry divides N,
    and N is a product of powers of the entries.
    """
    if not (1 < d < N) or N % d != 0:
        raise ValueError("need a proper divisor 1 < d < N")
    bases = [b for b, _ in factor_refinement([d, N])]
    out = []
    for b in bases:
        root, _ = perfect_power(b)
        out.append(root)
    return sorted(set(out))


def _small_primes(bound: int) -> list[int]:
    sieve = bytearray([1]) * (bound + 1)
    sieve[0:2] = b"\x00\x00"
    for p in range(2, math.isqrt(bound) + 1):
        if sieve[p]:
            sieve[p * p :: p] = bytearray(len(sieve[p * p :: p]))
    return [p for p in range(2, bound + 1) if sieve[p]]


def int_sfd(N: int, scan_bound: int = 1000) -> list[tuple[int, int]]:
    """Squarefree decomposition N = prod d_i^l_i with l_1 < l_2 < ...

    Runs a small trial-division scan, perfect-power extraction and gcd-free
    refinement only; it never attempts to factor a hard composite.  A square
    factor whose primes are not exposed by a gcd stays undetected, so a hard
    squarefree-looking N comes back as [(N, 1)].
    """
    if N <= 1:
        raise ValueError("need N > 1")
    pieces: list[tuple[int, int]] = []
    rest = N
    for p in _small_primes(scan_bound):
        if p * p > rest:
            break
        if rest % p == 0:
            k, rest2 = 0, rest
            while rest2 % p == 0:
                rest2 //= p
                k += 1
            pieces.append((p, k))
            rest = rest2
    if rest > 1:
        b, k = perfect_power(rest)
        pieces.append((b, k))
    refined = factor_refinement([b for b, e in pieces for _ in range(e)])
    by_exp: dict[int, int] = {}
    for b, e in refined:
        by_exp[e] = by_exp.get(e, 0) * b if e in by_exp else b
    out = sorted(by_exp.items(), key=lambda t: t[0])
    result = [(d, e) for e, d in out]
    check = 1
    for d, e in result:
        check *= d ** e
    if check != N:
        raise RuntimeError("squarefree decomposition failed to recombine")
    return result


# ---------------------------------------------------------------------------
# integer polynomials (dense ascending tuples)


def ptrim(coeffs) -> IntPoly:
    c = list(coeffs)
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


def pdeg(f: IntPoly) -> int:
    """Degree; -1 for the zero polynomial."""
    return len(f) - 1


def pconst(c: int) -> IntPoly:
    return (c,) if c else ()


def padd(f: IntPoly, g: IntPoly) -> IntPoly:
    if len(f) < len(g):
        f, g = g, f
    out = list(f)
    for i, c in enumerate(g):
        out[i] += c
    return ptrim(out)


def pneg(f: IntPoly) -> IntPoly:
    return tuple(-c for c in f)


def psub(f: IntPoly, g: IntPoly) -> IntPoly:
    return padd(f, pneg(g))


def pmul(f: IntPoly, g: IntPoly) -> IntPoly:
    if not f or not g:
        return ()
    out = [0] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        if a:
            for j, b in enumerate(g):
                out[i + j] += a * b
    return ptrim(out)


def pscale(f: IntPoly, c: int) -> IntPoly:
    if c == 0:
        return ()
    return tuple(a * c for a in f)


def pshift(f: IntPoly, k: int) -> IntPoly:
    """Multiply by x^k."""
    if not f:
        return ()
    return (0,) * k + tuple(f)


def ppow(f: IntPoly, k: int) -> IntPoly:
    out: IntPoly = (1,)
    base = f
    while k:
        if k & 1:
            out = pmul(out, base)
        k >>= 1
        if k:
            base = pmul(base, base)
    return out


def pderiv(f: IntPoly) -> IntPoly:
    return ptrim([i * c for i, c in enumerate(f)][1:])


def peval(f: IntPoly, x: int) -> int:
    out = 0
    for c in reversed(f):
        out = out * x + c
    return out


def pdivmod_monic(f: IntPoly, g: IntPoly) -> tuple[IntPoly, IntPoly]:
    """Division with remainder by a monic g; exact over the integers."""
    if not g or g[-1] != 1:
        raise ValueError("divisor must be monic")
    dg = pdeg(g)
    rem = list(f)
    quo = [0] * max(len(f) - dg, 0)
    for i in range(len(rem) - 1 - dg, -1, -1):
        c = rem[i + dg]
        if c:
            quo[i] = c
            for j, b in enumerate(g):
                rem[i + j] -= c * b
    return ptrim(quo), ptrim(rem[:dg])


def _prem(f: IntPoly, g: IntPoly) -> IntPoly:
    """Pseudo-remainder: lc(g)^(deg f - deg g + 1) * f modulo g."""
    df, dg = pdeg(f), pdeg(g)
    lc_g = g[-1]
    r, dr = f, df
    n = df - dg + 1
    while dr >= dg and r:
        j = dr - dg
        n -= 1
        r = psub(pscale(r, lc_g), pshift(pscale(g, r[-1]), j))
        dr = pdeg(r)
    return pscale(r, lc_g ** n)


def resultant(f: IntPoly, g: IntPoly) -> int:
    """Exact resultant via the subresultant polynomial remainder sequence."""
    if not f or not g:
        return 0
    s = 1
    if pdeg(f) < pdeg(g):
        if pdeg(f) & 1 and pdeg(g) & 1:
            s = -s
        f, g = g, f
    if pdeg(g) == 0:
        return s * g[0] ** pdeg(f)
    A, B = f, g
    gg, h = 1, 1
    while True:
        dA, dB = pdeg(A), pdeg(B)
        delta = dA - dB
        if dA & 1 and dB & 1:
            s = -s
        R = _prem(A, B)
        A = B
        if not R:
            return 0
        den = gg * h ** delta
        if any(c % den for c in R):
            raise RuntimeError("subresultant divisions not exact")
        B = tuple(c // den for c in R)
        gg = A[-1]
        if delta > 0:
            num = gg ** delta
            if num % h ** (delta - 1):
                raise RuntimeError("subresultant divisions not exact")
            h = num // h ** (delta - 1)
        if pdeg(B) == 0:
            dA = pdeg(A)
            num = B[0] ** dA
            if num % h ** (dA - 1):
                raise RuntimeError("subresultant divisions not exact")
            return s * (num // h ** (dA - 1))


def discriminant(f: IntPoly) -> int:
    """disc(f) = (-1)^(n(n-1)/2) resultant(f, f') / lc(f)."""
    n = pdeg(f)
    if n < 1:
        raise ValueError("discriminant needs degree >= 1")
    r = resultant(f, pderiv(f))
    sign = -1 if (n * (n - 1) // 2) % 2 else 1
    q, rem = divmod(sign * r, f[-1])
    if rem:
        raise RuntimeError("discriminant division not exact")
    return q
