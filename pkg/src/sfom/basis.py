"""Integral bases from tree leaves, HNF lattices, and the global driver.

A basis element is num(theta) / N^k with num reduced modulo the defining
polynomial.  All basis equalities are lattice equalities: lattices are n x n
integer matrices over a common denominator, normalized to upper-triangular
Hermite form (positive diagonal, entries above each pivot reduced), which is
the canonical representative used for every comparison.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from . import intarith as ia
from . import omprime as op
from .sfom import SFOMRep, sfom as run_tree
from . import sftypes as st
from .artinalg import PolyA
from .intarith import IntPoly


class NeedsSquarefree(Exception):
    """The tree is ramified and N is not known squarefree; split N first."""


@dataclass(frozen=True)
class BasisElement:
    """num(theta) / N^den_exp with deg num < n."""

    num: IntPoly
    den_exp: int
    provenance: tuple


# ---------------------------------------------------------------------------
# Hermite normal form lattices


def hnf_rows(rows, n: int, modulus: int | None = None) -> list[list[int]]:
    """Row HNF of the lattice spanned by `rows`: upper triangular, positive
    diagonal, entries above each pivot reduced into [0, pivot).

    `modulus` may be given when the lattice is known to contain modulus * Z^n
    (the generators for that sublattice are added implicitly); entries are
    then kept reduced, which avoids coefficient blowup on large inputs.
    """
    work = [list(r) for r in rows if any(r)]
    if modulus is not None:
        work = [[x % modulus for x in row] for row in work]
        for i in range(n):
            work.append([modulus * (i == j) for j in range(n)])
    basis: list[list[int] | None] = [None] * n
    for row in work:
        for j in range(n):
            if row[j] == 0:
                continue
            piv = basis[j]
            if piv is None:
                basis[j] = row
                break
            # remainder-swap steps keep the entries from blowing up
            while row[j]:
                q = piv[j] // row[j]
                if q:
                    piv = [x - q * y for x, y in zip(piv, row)]
                    if modulus is not None:
                        # wrap the tail only; column j must keep its exact value
                        piv = piv[:j + 1] + [x % modulus for x in piv[j + 1:]]
                piv, row = row, piv
            basis[j] = piv
        # a fully reduced row is dropped
    out = []
    for j in range(n):
        if basis[j] is None:
            raise ValueError("lattice does not have full rank")
        row = basis[j]
        if row[j] < 0:
            row = [-x for x in row]
        out.append(row)
    for j in range(n):
        for i in range(j):
            q = out[i][j] // out[j][j]
            if q:
                out[i] = [x - q * y for x, y in zip(out[i], out[j])]
    return out


@dataclass(frozen=True)
class IntegerLattice:
    """Full-rank lattice in Q^n: rows/den are the basis vectors; rows in HNF."""

    den: int
    rows: tuple
    n: int

    @classmethod
    def from_rows(cls, rows, den: int, n: int) -> "IntegerLattice":
        red = hnf_rows(rows, n)
        g = den
        for row in red:
            for x in row:
                g = ia.math.gcd(g, x)
        return cls(den // g, tuple(tuple(x // g for x in row) for row in red), n)

    @classmethod
    def from_elements(cls, elements, f: IntPoly, N: int) -> "IntegerLattice":
        n = ia.pdeg(f)
        k = max((el.den_exp for el in elements), default=0)
        den = N ** k
        rows = []
        for el in elements:
            scale = N ** (k - el.den_exp)
            rows.append([scale * (el.num[i] if i < len(el.num) else 0)
                         for i in range(n)])
        return cls.from_rows(rows, den, n)

    @classmethod
    def power_basis(cls, n: int) -> "IntegerLattice":
        return cls(1, tuple(tuple(1 if i == j else 0 for j in range(n))
                            for i in range(n)), n)

    def det(self) -> int:
        out = 1
        for i in range(self.n):
            out *= self.rows[i][i]
        return out

    def index_over_power_basis(self) -> int:
        num = self.den ** self.n
        d = self.det()
        if num % d:
            raise ValueError("lattice does not contain the power basis")
        return num // d

    def contains(self, vec, den: int = 1) -> bool:
        """Membership of vec/den, by forward elimination against the HNF rows."""
        scaled = [x * self.den for x in vec]
        for j in range(self.n):
            c = scaled[j]
            piv = self.rows[j][j] * den
            if c % piv:
                return False
            q = c // piv
            if q:
                for i in range(j, self.n):
                    scaled[i] -= q * den * self.rows[j][i]
        return True

    def basis_vectors(self) -> list[list[Fraction]]:
        return [[Fraction(x, self.den) for x in row] for row in self.rows]


def hnf_merge(lattices, include_power_basis: bool, f: IntPoly) -> IntegerLattice:
    """HNF of the module sum of the given lattices (plus Z[theta] if asked).

    With the power basis included the sum contains den * Z^n, so the
    reduction can run with entries wrapped modulo den.
    """
    n = ia.pdeg(f)
    return _merge_row_groups([(lat.rows, lat.den) for lat in lattices],
                             include_power_basis, n)


def _merge_row_groups(groups, include_power_basis: bool, n: int
                      ) -> IntegerLattice:
    den = 1
    for _, d in groups:
        den = den * d // ia.math.gcd(den, d)
    rows = []
    for group_rows, d in groups:
        scale = den // d
        for row in group_rows:
            rows.append([scale * x for x in row])
    modulus = den if include_power_basis else None
    red = hnf_rows(rows, n, modulus=modulus)
    g = den
    for row in red:
        for x in row:
            g = ia.math.gcd(g, x)
    return IntegerLattice(den // g,
                          tuple(tuple(x // g for x in row) for row in red), n)


# ---------------------------------------------------------------------------
# bases attached to leaves


def order_zero_basis(t: PolyA, f: IntPoly, N: int) -> list[BasisElement]:
    """Elements theta^j * q(theta) for the multiplicity-one part t of f mod N,
    where f = q * lift(t) + remainder."""
    g = st.lift_order_zero(t)
    q, _ = ia.pdivmod_monic(f, g)
    out = []
    for j in range(t.degree()):
        _, num = ia.pdivmod_monic(ia.pshift(q, j), f)
        out.append(BasisElement(num, 0, ("order0", j)))
    return out


def terminal_basis(leaves, f: IntPoly) -> list[BasisElement]:
    """The block of elements attached to one terminal side of order r >= 1.

    `leaves` holds the multiplicity-one leaves sharing that side (several can
    share it when residual factors were kept separate or a modulus split);
    the block width at the top level is e_r times their total residue degree.
    For level i the element factors are the division-chain quotients ending
    at the right endpoint of the side, with denominators floor of the
    accumulated scaled values.
    """
    if isinstance(leaves, st.SFType):
        leaves = [leaves]
    leaf = leaves[0]
    if leaf.order < 1:
        raise ValueError("order-zero leaves use order_zero_basis")
    fdim_top = sum(l.fdim for l in leaves)
    levels = []
    eprod = 1
    for i in range(1, leaf.order + 1):
        node = leaf.trunc(i)
        eprod *= node.e
        an = st.analyze(node, f)
        s_right = an.s1
        exp = st.expand(f, node.g)
        width = node.e * (fdim_top if i == leaf.order else node.fdim)
        entries = []
        for j in range(width):
            q = exp.quotients[s_right - j - 1]
            entries.append((q, Fraction(st.analyze(node, q).v, eprod)))
        levels.append(entries)
    f0 = leaf.trunc(0).fdim
    out = []

    def rec(i, num, H, tags):
        if i == len(levels):
            _, red = ia.pdivmod_monic(num, f)
            out.append(BasisElement(red, H.numerator // H.denominator,
                                    ("leaf", tuple(tags))))
            return
        for j, (q, Hq) in enumerate(levels[i]):
            rec(i + 1, ia.pmul(num, q), H + Hq, tags + [j])

    for j0 in range(f0):
        rec(0, ia.pshift((1,), j0), Fraction(0), [j0])
    return out


def n_integral_basis(rep: SFOMRep, f: IntPoly, N: int,
                     assume_squarefree: bool = False) -> list[BasisElement]:
    """Full local basis at N from a tree; n elements in total.

    Raises NeedsSquarefree when the tree is ramified and N is not known to be
    squarefree (the construction is only valid under one of the two).
    """
    if rep.ramified and not assume_squarefree:
        raise NeedsSquarefree(str(N))
    out = []
    t0 = rep.order_zero_t()
    if t0 is not None:
        out.extend(order_zero_basis(t0, f, N))
    sides: dict = {}
    for leaf in rep.leaves:
        if leaf.order >= 1:
            key = leaf.chain_key()[:-1] + ((leaf.g, leaf.h, leaf.e),)
            sides.setdefault(key, []).append(leaf)
    for group in sides.values():
        out.extend(terminal_basis(group, f))
    if len(out) != ia.pdeg(f):
        raise RuntimeError("basis size mismatch")
    return out


# ---------------------------------------------------------------------------
# global driver


def _primes_upto(n: int) -> list[int]:
    return ia._small_primes(n) if n >= 2 else []


@dataclass
class GlobalBasisResult:
    f: IntPoly
    D: int
    moduli: list  # (N, list[BasisElement])
    merged: IntegerLattice

    def to_obj(self) -> dict:
        return {
            "f": [str(c) for c in self.f],
            "D": str(self.D),
            "moduli": [
                {
                    "N": str(N),
                    "basis": [
                        {"num": [str(c) for c in el.num], "den_exp": el.den_exp}
                        for el in basis
                    ],
                }
                for N, basis in self.moduli
            ],
            "global": {
                "den": str(self.merged.den),
                "hnf": [[str(x) for x in row] for row in self.merged.rows],
            },
        }


def global_basis(f: IntPoly, D: int | None = None, seed: int = 0
                 ) -> GlobalBasisResult:
    """Local bases for a coprime splitting of D plus their merged lattice.

    D defaults to disc(f); a user-supplied D stands in for a partial
    factorization of the discriminant.  All primes up to deg f are stripped
    off D and handled by the prime engine; the remaining moduli are processed
    by the composite engine, with detected factors splitting the worklist and
    ramified trees routed through integer squarefree decomposition.
    """
    f = ia.ptrim(f)
    n = ia.pdeg(f)
    if n < 2 or f[-1] != 1:
        raise ValueError("need a monic polynomial of degree > 1")
    D_in = ia.discriminant(f) if D is None else D
    if D_in == 0:
        raise ValueError("discriminant is zero: polynomial is not squarefree")
    D_work = abs(D_in)
    results = []
    for p in _primes_upto(n):
        k = 0
        while D_work % p == 0:
            D_work //= p
            k += 1
        if k > 1:
            rep = op.om_prime(f, p, seed)
            results.append((p, n_integral_basis(rep, f, p,
                                                assume_squarefree=True)))
    moduli = [(D_work, False)] if D_work > 1 else []
    while moduli:
        N, sf_known = moduli.pop()
        out = run_tree(f, N)
        if out.n_factor is not None:
            moduli.extend((d, sf_known) for d in
                          ia.coprime_splitting(out.n_factor, N))
            continue
        rep = out.rep
        if rep.ramified and not sf_known:
            parts = ia.int_sfd(N)
            if parts != [(N, 1)]:
                moduli.extend((d, True) for d, _ in parts)
                continue
            # squarefree as far as gcd refinement can tell
        results.append((N, n_integral_basis(rep, f, N, assume_squarefree=True)))
    results.sort(key=lambda t: t[0])
    groups = []
    for N, basis in results:
        k = max((el.den_exp for el in basis), default=0)
        rows = []
        for el in basis:
            scale = N ** (k - el.den_exp)
            rows.append([scale * (el.num[i] if i < len(el.num) else 0)
                         for i in range(n)])
        groups.append((rows, N ** k))
    merged = _merge_row_groups(groups, True, n)
    return GlobalBasisResult(f, D_in, results, merged)
