"""Prime specialization: the classical tree at a single prime p.

Over a prime modulus the tower levels are finite fields, division never
crashes, and the residual polynomials get factored completely instead of
squarefree-decomposed.  This version handles any prime, including p <= deg f,
via characteristic-aware squarefree decomposition, distinct-degree splitting,
and randomized equal-degree splitting (odd characteristic uses the usual
half-order exponent, characteristic 2 the trace map).
"""

from __future__ import annotations

import random

from . import intarith as ia
from .sfom import SFOMRep, _drive
from .artinalg import AlgebraTower, FactorEvent, PolyA
from .intarith import IntPoly


def om_prime(f: IntPoly, p: int, seed: int = 0) -> SFOMRep:
    """Tree for f at the prime p; leaves carry irreducible moduli everywhere."""
    rng = random.Random(seed)
    try:
        out = _drive(f, p, _prime_decompose, rng=rng, prime=p)
    except FactorEvent as ev:  # pragma: no cover - impossible over a field
        raise AssertionError(f"field arithmetic raised a factor event: {ev}")
    if out.rep is None:  # pragma: no cover
        raise AssertionError("prime run reported a factor of a prime")
    return out.rep


def _prime_decompose(tower: AlgebraTower, R: PolyA, rng) -> list[tuple[PolyA, int]]:
    return ff_factor(tower, R, rng)


# ---------------------------------------------------------------------------
# factorization over a tower level that is a finite field


def _char(tower: AlgebraTower) -> int:
    return tower.N


def _field_size(tower: AlgebraTower, L: int) -> int:
    q = tower.N
    for d in tower.dims[:L]:
        q **= d
    return q


def ff_factor(tower: AlgebraTower, f: PolyA, rng=None) -> list[tuple[PolyA, int]]:
    """Complete factorization over the finite field at f's level.

    Returns (irreducible monic factor, multiplicity) pairs, sorted by degree
    then coefficient data so the output does not depend on the random choices
    of the equal-degree stage.
    """
    if rng is None:
        rng = random.Random(0)
    if not f.coeffs:
        raise ValueError("factoring zero")
    f = tower.p_make_monic(f)
    out: list[tuple[PolyA, int]] = []
    for sqf, mult in ff_sfd(tower, f):
        for irr in _factor_squarefree(tower, sqf, rng):
            out.append((irr, mult))
    out.sort(key=lambda t: (t[0].degree(), _poly_sort_key(tower, t[0])))
    return out


def _poly_sort_key(tower: AlgebraTower, p: PolyA) -> tuple:
    def flat(e):
        return (e.coords,) if e.level == 0 else tuple(flat(c) for c in e.coords)

    return tuple(flat(c) for c in p.coeffs)


def ff_sfd(tower: AlgebraTower, f: PolyA) -> list[tuple[PolyA, int]]:
    """Squarefree decomposition over a finite field, any characteristic."""
    p = _char(tower)
    L = f.level
    out: dict[int, PolyA] = {}

    def accumulate(g: PolyA, mult: int) -> None:
        if g.degree() >= 1:
            out[mult] = tower.p_mul(out[mult], g) if mult in out else g

    def rec(g: PolyA, scale: int) -> None:
        if g.degree() < 1:
            return
        deriv = tower.p_deriv(g)
        if not deriv.coeffs:
            rec(_pth_root(tower, g), scale * p)
            return
        c = tower.p_gcd(g, deriv)
        w = tower.p_exact_divide(g, c)
        i = 1
        while not tower.p_is_one(w):
            y = tower.p_gcd(w, c)
            accumulate(tower.p_exact_divide(w, y), i * scale)
            w = y
            c = tower.p_exact_divide(c, y)
            i += 1
        rec(_pth_root(tower, c), scale * p)

    rec(tower.p_make_monic(f), 1)
    return [(g, m) for m, g in sorted(out.items())]


def _pth_root(tower: AlgebraTower, f: PolyA) -> PolyA:
    """Inverse Frobenius: f = g(y^p) gives g with coefficients c^(q/p)."""
    p = _char(tower)
    L = f.level
    q = _field_size(tower, L)
    coeffs = []
    for i in range(0, len(f.coeffs), p):
        coeffs.append(tower.e_pow(f.coeffs[i], q // p))
    return tower.p_trim(L, coeffs)


def _poly_powmod(tower: AlgebraTower, base: PolyA, exp: int, mod: PolyA) -> PolyA:
    out = tower.p_one(base.level)
    _, base = tower.p_divmod_monic(base, mod)
    while exp:
        if exp & 1:
            _, out = tower.p_divmod_monic(tower.p_mul(out, base), mod)
        exp >>= 1
        if exp:
            _, base = tower.p_divmod_monic(tower.p_mul(base, base), mod)
    return out


def _factor_squarefree(tower: AlgebraTower, f: PolyA, rng) -> list[PolyA]:
    """Distinct-degree then equal-degree splitting of a squarefree monic f."""
    L = f.level
    q = _field_size(tower, L)
    out: list[PolyA] = []
    h = tower.p_y(L)
    d = 0
    rest = f
    while rest.degree() > 0:
        d += 1
        if 2 * d > rest.degree():
            out.append(rest)
            break
        h = _poly_powmod(tower, h, q, rest)
        g = tower.p_gcd(tower.p_sub(h, tower.p_y(L)), rest)
        if g.degree() > 0:
            out.extend(_equal_degree(tower, g, d, rng))
            rest = tower.p_exact_divide(rest, g)
            _, h = tower.p_divmod_monic(h, rest)
    return out


def _random_poly(tower: AlgebraTower, L: int, deg: int, rng) -> PolyA:
    p = _char(tower)

    def rand_elem(lv: int):
        if lv == 0:
            return tower.embed_int(rng.randrange(p), 0)
        return tower.poly_to_elem(
            tower.p_trim(lv - 1,
                         [rand_elem(lv - 1) for _ in range(tower.dims[lv - 1])]),
            lv)

    return tower.p_trim(L, [rand_elem(L) for _ in range(deg + 1)])


def _equal_degree(tower: AlgebraTower, g: PolyA, d: int, rng) -> list[PolyA]:
    """Split a product of distinct irreducibles of the same degree d."""
    L = g.level
    if g.degree() == d:
        return [g]
    q = _field_size(tower, L)
    p = _char(tower)
    while True:
        r = _random_poly(tower, L, g.degree() - 1, rng)
        if not r.coeffs:
            continue
        if p == 2:
            m = (q.bit_length() - 1) * d  # q = 2^k: trace over GF(2) of GF(q^d)
            s = r
            acc = r
            for _ in range(m - 1):
                _, s = tower.p_divmod_monic(tower.p_mul(s, s), g)
                acc = tower.p_add(acc, s)
            if not acc.coeffs:
                continue
            split = tower.p_gcd(acc, g)
        else:
            s = _poly_powmod(tower, r, (q ** d - 1) // 2, g)
            split = tower.p_gcd(tower.p_sub(s, tower.p_one(L)), g)
        if 0 < split.degree() < g.degree():
            rest = tower.p_exact_divide(g, split)
            return _equal_degree(tower, split, d, rng) + _equal_degree(
                tower, rest, d, rng)
