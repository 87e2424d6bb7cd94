"""Towers of quotient rings over Z/NZ and polynomial arithmetic over them.

A tower is a chain A_0 = Z/NZ, A_1 = A_0[y]/(t_0), A_2 = A_1[y]/(t_1), ...
where each modulus t_i is monic, squarefree and strongly unitary (all nonzero
coefficients are units), and t_i(0) != 0 for i >= 1.

Because N is composite, Euclidean steps can hit zero divisors.  Whenever that
happens the arithmetic raises a FactorEvent carrying a proper factor of N or
of one of the moduli; callers treat these events as progress, never as
failures.  Every event is verified at raise time.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .intarith import IntPoly


class FactorEvent(Exception):
    """A proper factor of a modulus was detected.

    level -1: ``factor`` is an int with 1 < factor < N and factor | N.
    level i >= 0: ``factor`` is a monic PolyA properly dividing modulus t_i.
    """

    def __init__(self, level: int, factor):
        super().__init__(f"factor of modulus {level}")
        self.level = level
        self.factor = factor


class NonExactDivision(Exception):
    """A division expected to be exact left a remainder (internal bug)."""


@dataclass(frozen=True)
class AlgElem:
    """Element of a tower level: int residue at level 0, coordinate tuple above."""

    level: int
    coords: object  # int at level 0, tuple[AlgElem, ...] above


@dataclass(frozen=True)
class PolyA:
    """Dense polynomial over a tower level, trailing zeros trimmed."""

    level: int
    coeffs: tuple

    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __bool__(self) -> bool:
        return bool(self.coeffs)


class AlgebraTower:
    """Immutable chain of quotient rings with moduli [t_0, ..., t_{r-1}]."""

    __slots__ = ("N", "moduli", "dims", "_zeros", "_ones")

    def __init__(self, N: int, moduli: tuple = ()):
        if N <= 1:
            raise ValueError("need N > 1")
        self.N = N
        self.moduli = tuple(moduli)
        self.dims = tuple(t.degree() for t in self.moduli)
        zeros = [AlgElem(0, 0)]
        ones = [AlgElem(0, 1 % N)]
        for L, d in enumerate(self.dims):
            pad = (zeros[L],) * d
            zeros.append(AlgElem(L + 1, pad))
            ones.append(AlgElem(L + 1, (ones[L],) + pad[1:]))
        self._zeros = zeros
        self._ones = ones

    # -- element layer ------------------------------------------------------

    def levels(self) -> int:
        return len(self.moduli)

    def zero(self, L: int) -> AlgElem:
        return self._zeros[L]

    def one(self, L: int) -> AlgElem:
        return self._ones[L]

    def embed_int(self, k: int, L: int) -> AlgElem:
        e: AlgElem = AlgElem(0, k % self.N)
        for i in range(L):
            e = AlgElem(i + 1, (e,) + (self._zeros[i],) * (self.dims[i] - 1))
        return e

    def lift_elem(self, a: AlgElem, L: int) -> AlgElem:
        """Embed an element into a higher level by constant coordinates."""
        e = a
        for i in range(a.level, L):
            e = AlgElem(i + 1, (e,) + (self._zeros[i],) * (self.dims[i] - 1))
        return e

    def is_zero(self, a: AlgElem) -> bool:
        return a == self._zeros[a.level]

    def is_one(self, a: AlgElem) -> bool:
        return a == self._ones[a.level]

    def e_add(self, a: AlgElem, b: AlgElem) -> AlgElem:
        L = a.level
        if L == 0:
            return AlgElem(0, (a.coords + b.coords) % self.N)
        return AlgElem(L, tuple(self.e_add(x, y) for x, y in zip(a.coords, b.coords)))

    def e_neg(self, a: AlgElem) -> AlgElem:
        L = a.level
        if L == 0:
            return AlgElem(0, (-a.coords) % self.N)
        return AlgElem(L, tuple(self.e_neg(x) for x in a.coords))

    def e_sub(self, a: AlgElem, b: AlgElem) -> AlgElem:
        return self.e_add(a, self.e_neg(b))

    def e_mul(self, a: AlgElem, b: AlgElem) -> AlgElem:
        L = a.level
        if L == 0:
            return AlgElem(0, (a.coords * b.coords) % self.N)
        prod = self.p_mul(self.elem_to_poly(a), self.elem_to_poly(b))
        _, rem = self.p_divmod_monic(prod, self.moduli[L - 1])
        return self.poly_to_elem(rem, L)

    def e_pow(self, a: AlgElem, k: int) -> AlgElem:
        if k < 0:
            return self.e_pow(self.e_invert(a), -k)
        out = self.one(a.level)
        base = a
        while k:
            if k & 1:
                out = self.e_mul(out, base)
            k >>= 1
            if k:
                base = self.e_mul(base, base)
        return out

    def e_invert(self, a: AlgElem) -> AlgElem:
        """Inverse certified by a recursive Bezout chain; FactorEvent on failure."""
        L = a.level
        if self.is_zero(a):
            raise ZeroDivisionError("inverting zero")
        if L == 0:
            g = math.gcd(a.coords, self.N)
            if g != 1:
                raise self.factor_event(-1, g)
            return AlgElem(0, pow(a.coords, -1, self.N))
        d, u, _ = self.p_xgcd(self.elem_to_poly(a), self.moduli[L - 1])
        if not self.p_is_one(d):
            raise self.factor_event(L - 1, d)
        return self.poly_to_elem(u, L)

    def e_is_unit(self, a: AlgElem) -> bool:
        """True if invertible; may raise FactorEvent instead of returning False."""
        if self.is_zero(a):
            return False
        try:
            self.e_invert(a)
        except FactorEvent:
            raise
        return True

    def z(self, L: int) -> AlgElem:
        """Generator of A_L over A_{L-1} (class of y)."""
        if L < 1:
            raise ValueError("no generator at level 0")
        d = self.dims[L - 1]
        coords = [self._zeros[L - 1]] * d
        if d >= 2:
            coords[1] = self._ones[L - 1]
            return AlgElem(L, tuple(coords))
        t = self.moduli[L - 1]  # y reduces to -t(0)
        return self.lift_to_level(self.e_neg(t.coeffs[0]), L)

    def lift_to_level(self, a: AlgElem, L: int) -> AlgElem:
        return self.lift_elem(a, L)

    def zpow(self, L: int, k: int) -> AlgElem:
        """z_{L-1}^k for any sign of k; t_{L-1}(0) must be a unit for k < 0."""
        zl = self.z(L)
        if k >= 0:
            return self.e_pow(zl, k)
        t = self.moduli[L - 1]
        t0 = t.coeffs[0]
        # z^-1 = -t(0)^-1 * ((t(y) - t(0)) / y) evaluated at z
        inv0 = self.e_invert(t0)
        shifted = PolyA(L - 1, t.coeffs[1:])
        zinv = self.e_mul(
            self.e_neg(self.lift_elem(inv0, L)), self.p_eval_up(shifted, zl)
        )
        return self.e_pow(zinv, -k)

    def elem_to_poly(self, a: AlgElem) -> PolyA:
        """Coordinates of a level-L element as a polynomial over level L-1."""
        if a.level == 0:
            raise ValueError("level-0 elements have no coordinate polynomial")
        coords = list(a.coords)
        while coords and self.is_zero(coords[-1]):
            coords.pop()
        return PolyA(a.level - 1, tuple(coords))

    def poly_to_elem(self, p: PolyA, L: int) -> AlgElem:
        """Reduced polynomial over level L-1, padded into a level-L element."""
        d = self.dims[L - 1]
        if p.degree() >= d:
            raise ValueError("coordinates not reduced")
        coords = list(p.coeffs) + [self._zeros[L - 1]] * (d - len(p.coeffs))
        return AlgElem(L, tuple(coords))

    # -- polynomial layer ----------------------------------------------------

    def p_zero(self, L: int) -> PolyA:
        return PolyA(L, ())

    def p_one(self, L: int) -> PolyA:
        return PolyA(L, (self.one(L),))

    def p_y(self, L: int) -> PolyA:
        return PolyA(L, (self.zero(L), self.one(L)))

    def p_const(self, a: AlgElem) -> PolyA:
        if self.is_zero(a):
            return PolyA(a.level, ())
        return PolyA(a.level, (a,))

    def p_trim(self, L: int, coeffs) -> PolyA:
        c = list(coeffs)
        while c and self.is_zero(c[-1]):
            c.pop()
        return PolyA(L, tuple(c))

    def p_is_one(self, p: PolyA) -> bool:
        return len(p.coeffs) == 1 and self.is_one(p.coeffs[0])

    def p_is_monic(self, p: PolyA) -> bool:
        return bool(p.coeffs) and self.is_one(p.coeffs[-1])

    def p_from_int_poly(self, f: IntPoly, L: int = 0) -> PolyA:
        return self.p_trim(L, [self.embed_int(c, L) for c in f])

    def p_add(self, p: PolyA, q: PolyA) -> PolyA:
        L = p.level
        a, b = p.coeffs, q.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] = self.e_add(out[i], c)
        return self.p_trim(L, out)

    def p_neg(self, p: PolyA) -> PolyA:
        return PolyA(p.level, tuple(self.e_neg(c) for c in p.coeffs))

    def p_sub(self, p: PolyA, q: PolyA) -> PolyA:
        return self.p_add(p, self.p_neg(q))

    def p_scale(self, p: PolyA, a: AlgElem) -> PolyA:
        return self.p_trim(p.level, [self.e_mul(a, c) for c in p.coeffs])

    def p_mul(self, p: PolyA, q: PolyA) -> PolyA:
        L = p.level
        if not p.coeffs or not q.coeffs:
            return PolyA(L, ())
        out = [self.zero(L)] * (len(p.coeffs) + len(q.coeffs) - 1)
        for i, a in enumerate(p.coeffs):
            if self.is_zero(a):
                continue
            for j, b in enumerate(q.coeffs):
                out[i + j] = self.e_add(out[i + j], self.e_mul(a, b))
        return self.p_trim(L, out)

    def p_pow(self, p: PolyA, k: int) -> PolyA:
        out = self.p_one(p.level)
        base = p
        while k:
            if k & 1:
                out = self.p_mul(out, base)
            k >>= 1
            if k:
                base = self.p_mul(base, base)
        return out

    def p_deriv(self, p: PolyA) -> PolyA:
        L = p.level
        out = [
            self.e_mul(self.embed_int(i, L), c) for i, c in enumerate(p.coeffs)
        ][1:]
        return self.p_trim(L, out)

    def p_eval(self, p: PolyA, x: AlgElem) -> AlgElem:
        out = self.zero(p.level)
        for c in reversed(p.coeffs):
            out = self.e_add(self.e_mul(out, x), c)
        return out

    def p_eval_up(self, p: PolyA, x: AlgElem) -> AlgElem:
        """Evaluate a level-L polynomial at a level-(L+1) point."""
        L1 = x.level
        out = self.zero(L1)
        for c in reversed(p.coeffs):
            out = self.e_add(self.e_mul(out, x), self.lift_elem(c, L1))
        return out

    def p_divmod_monic(self, s: PolyA, t: PolyA) -> tuple[PolyA, PolyA]:
        """Division with remainder by a monic t; never raises FactorEvent."""
        L = s.level
        if not self.p_is_monic(t):
            raise ValueError("divisor must be monic")
        dt = t.degree()
        rem = list(s.coeffs)
        quo = [self.zero(L)] * max(len(rem) - dt, 0)
        for i in range(len(rem) - 1 - dt, -1, -1):
            c = rem[i + dt]
            if self.is_zero(c):
                continue
            quo[i] = c
            for j, b in enumerate(t.coeffs):
                rem[i + j] = self.e_sub(rem[i + j], self.e_mul(c, b))
        return self.p_trim(L, quo), self.p_trim(L, rem[:dt])

    def p_make_monic(self, t: PolyA) -> PolyA:
        """Scale by lc^-1 (FactorEvent when the leading coefficient splits)."""
        if not t.coeffs:
            raise ValueError("zero polynomial")
        if self.is_one(t.coeffs[-1]):
            return t
        return self.p_scale(t, self.e_invert(t.coeffs[-1]))

    def p_quotrem(self, s: PolyA, t: PolyA) -> tuple[PolyA, PolyA]:
        """Division by a unitary t; monicizes t first (FactorEvent hook)."""
        if not t.coeffs:
            raise ZeroDivisionError("division by zero polynomial")
        if self.p_is_monic(t):
            return self.p_divmod_monic(s, t)
        inv = self.e_invert(t.coeffs[-1])
        q, r = self.p_divmod_monic(s, self.p_scale(t, inv))
        return self.p_scale(q, inv), r

    def p_gcd(self, s: PolyA, t: PolyA) -> PolyA:
        """Monic d with sA[y] + tA[y] = dA[y], or a FactorEvent."""
        if not t.coeffs:
            if not s.coeffs:
                raise ValueError("gcd(0, 0)")
            return self.p_make_monic(s)
        while t.coeffs:
            t = self.p_make_monic(t)
            _, r = self.p_divmod_monic(s, t)
            s, t = t, r
        return s

    def p_xgcd(self, s: PolyA, t: PolyA) -> tuple[PolyA, PolyA, PolyA]:
        """(d, u, v) with s*u + t*v = d, d as in p_gcd."""
        L = s.level
        r0, r1 = s, t
        s0, s1 = self.p_one(L), self.p_zero(L)
        t0, t1 = self.p_zero(L), self.p_one(L)
        while r1.coeffs:
            lc = r1.coeffs[-1]
            if not self.is_one(lc):
                inv = self.e_invert(lc)
                r1 = self.p_scale(r1, inv)
                s1 = self.p_scale(s1, inv)
                t1 = self.p_scale(t1, inv)
            q, r2 = self.p_divmod_monic(r0, r1)
            r0, r1 = r1, r2
            s0, s1 = s1, self.p_sub(s0, self.p_mul(q, s1))
            t0, t1 = t1, self.p_sub(t0, self.p_mul(q, t1))
        if not r0.coeffs:
            raise ValueError("gcd(0, 0)")
        lc = r0.coeffs[-1]
        if not self.is_one(lc):
            inv = self.e_invert(lc)
            r0, s0, t0 = (self.p_scale(x, inv) for x in (r0, s0, t0))
        return r0, s0, t0

    def p_exact_divide(self, t: PolyA, d: PolyA) -> PolyA:
        """Quotient t/d for monic d; NonExactDivision when remainder is nonzero."""
        q, r = self.p_divmod_monic(t, d)
        if r.coeffs:
            raise NonExactDivision(f"remainder of degree {r.degree()}")
        return q

    def p_assert_strongly_unitary(self, t: PolyA) -> None:
        """Certify every nonzero coefficient is a unit (FactorEvent hook)."""
        for c in t.coeffs:
            if not self.is_zero(c):
                self.e_invert(c)

    def p_sfd(self, f: PolyA) -> list[tuple[PolyA, int]]:
        """Squarefree decomposition f = lc * prod s_i^l_i, l_1 < l_2 < ...

        Output factors are monic, squarefree, pairwise coprime and certified
        strongly unitary.  Requires deg f < p for every prime p | N (enforced
        upstream by the driver, which keeps every prime of N above deg f).
        """
        if not f.coeffs:
            raise ValueError("squarefree decomposition of zero")
        f = self.p_make_monic(f)
        if f.degree() == 0:
            return []
        d = self.p_gcd(f, self.p_deriv(f))
        g = self.p_exact_divide(f, d)
        out: list[tuple[PolyA, int]] = []
        level = 1
        cap = f.degree() + 2
        while not self.p_is_one(f):
            cap -= 1
            if cap < 0:
                raise RuntimeError("squarefree decomposition did not terminate")
            f = self.p_exact_divide(f, g)
            h = self.p_gcd(f, g)
            s = self.p_exact_divide(g, h)
            if not self.p_is_one(s):
                out.append((s, level))
            g = h
            level += 1
        for s, _ in out:
            self.p_assert_strongly_unitary(s)
        return out

    # -- tower construction --------------------------------------------------

    def extend(self, t: PolyA, certify: bool = True) -> AlgebraTower:
        """New tower with modulus t appended at the top level.

        Certification checks t is monic and strongly unitary (FactorEvent
        hook) and that t(0) != 0 above level 0.
        """
        L = self.levels()
        if t.level != L:
            raise ValueError("modulus must live at the top level")
        if t.degree() < 1:
            raise ValueError("modulus must have positive degree")
        if certify:
            self.p_assert_strongly_unitary(t)
            if L >= 1 and self.is_zero(t.coeffs[0]):
                raise ValueError("modulus must have nonzero constant term")
        if not self.p_is_monic(t):
            raise ValueError("modulus must be monic")
        return AlgebraTower(self.N, self.moduli + (t,))

    # -- events ---------------------------------------------------------------

    def factor_event(self, level: int, factor) -> FactorEvent:
        """Build a FactorEvent, verifying the factor genuinely splits a modulus."""
        if level == -1:
            if not (1 < factor < self.N) or self.N % factor:
                raise AssertionError("bogus integer factor event")
            return FactorEvent(-1, factor)
        t = self.moduli[level]
        if not (0 < factor.degree() < t.degree()) or not self.p_is_monic(factor):
            raise AssertionError("bogus polynomial factor event")
        _, r = self.p_divmod_monic(t, factor)
        if r.coeffs:
            raise AssertionError("claimed factor does not divide its modulus")
        return FactorEvent(level, factor)

    # -- serialization ---------------------------------------------------------

    def elem_to_obj(self, a: AlgElem):
        if a.level == 0:
            return str(a.coords)
        return [self.elem_to_obj(c) for c in a.coords]

    def poly_to_obj(self, p: PolyA):
        return [self.elem_to_obj(c) for c in p.coeffs]
