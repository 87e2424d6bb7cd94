"""Independent oracles: per-prime projection, valuation identities, maximality.

These routines are the artifact's ground truth at test scale.  They are
library code (not test-only) so the command line can expose a `verify`
subcommand; they may factor nothing themselves, but accept externally known
primes as inputs.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction


from . import basis as bs
from . import intarith as ia
from . import omprime as op
from .sfom import SFOMRep, sfom as run_tree
from . import sftypes as st
from .intarith import IntPoly


# ---------------------------------------------------------------------------
# per-prime projection of a composite tree


def project_check(rep: SFOMRep, f: IntPoly, p: int, seed: int = 0) -> dict:
    """Compare a composite tree with the prime tree at p | N.

    Checks slope scaling (prime slopes are ord_p(N) times composite slopes),
    ramification bookkeeping e_P = e_1...e_r, and that the prime leaves
    partition into groups of total residue degree f_0...f_r, one group per
    composite leaf.  Returns a report dict with an "ok" flag.
    """
    N = rep.N
    rho = ia.ord_n(N, p)[0] if N % p == 0 else 0
    if rho == 0:
        raise ValueError("p does not divide N")
    prep = op.om_prime(f, p, seed)
    report = {"p": p, "rho": rho, "ok": True, "details": []}

    comp = []
    for leaf in rep.leaves:
        if st.ord_ty(leaf, f) != 1:
            report["ok"] = False
            report["details"].append("composite leaf without multiplicity one")
        chain = leaf.chain()
        slopes = tuple((lvl.h, lvl.e) for lvl in chain[1:])
        comp.append({
            "order": leaf.order,
            "slopes": slopes,
            "root_lift": st.lift_order_zero(chain[0].t),
            "f_target": leaf.f_prod(),
            "e_target": leaf.e_prod(),
        })
    prime_leaves = []
    for leaf in prep.leaves:
        if st.ord_ty(leaf, f) != 1:
            report["ok"] = False
            report["details"].append("prime leaf without multiplicity one")
        chain = leaf.chain()
        prime_leaves.append({
            "order": leaf.order,
            "slopes": tuple((lvl.h, lvl.e) for lvl in chain[1:]),
            "root_lift": st.lift_order_zero(chain[0].t),
            "e": leaf.e_prod(),
            "f": leaf.f_prod(),
        })

    def matches(group_leaf, pleaf) -> bool:
        if pleaf["order"] != group_leaf["order"]:
            return False
        want = tuple(
            (rho * h // ia.math.gcd(rho * h, e), e // ia.math.gcd(rho * h, e))
            for h, e in group_leaf["slopes"])
        if pleaf["slopes"] != want:
            return False
        # the prime root modulus must divide the reduction of the composite one
        lift = group_leaf["root_lift"]
        tower = op.AlgebraTower(p)
        red = tower.p_from_int_poly(lift)
        proot = tower.p_from_int_poly(pleaf["root_lift"])
        if not red.coeffs:
            return False
        _, rem = tower.p_divmod_monic(red, proot)
        return not rem.coeffs

    assignment: list[list[int]] = [[] for _ in comp]
    unassigned = []
    for k, pleaf in enumerate(prime_leaves):
        cands = [i for i, g in enumerate(comp) if matches(g, pleaf)]
        if len(cands) == 1:
            assignment[cands[0]].append(k)
        else:
            unassigned.append((k, cands))
    ok = _complete_assignment(comp, prime_leaves, assignment, unassigned)
    if not ok:
        report["ok"] = False
        report["details"].append("no consistent grouping of prime leaves")
        return report
    for i, g in enumerate(comp):
        got_f = sum(prime_leaves[k]["f"] for k in assignment[i])
        es = {prime_leaves[k]["e"] for k in assignment[i]}
        expect_e = g["e_target"]
        if rho > 1:
            expect_e = expect_e // ia.math.gcd(rho, expect_e)
        if got_f != g["f_target"] or es != {expect_e}:
            report["ok"] = False
            report["details"].append(
                f"leaf {i}: residue mass {got_f} vs {g['f_target']}, e {es}")
    report["groups"] = [len(a) for a in assignment]
    return report


def _complete_assignment(comp, prime_leaves, assignment, unassigned) -> bool:
    if not unassigned:
        return True
    ks = [k for k, _ in unassigned]
    cand_sets = [c for _, c in unassigned]
    # small search: place ambiguous leaves so the residue masses work out
    def rec(idx, current):
        if idx == len(ks):
            for i, g in enumerate(comp):
                got = sum(prime_leaves[k]["f"] for k in assignment[i])
                got += sum(prime_leaves[ks[j]]["f"]
                           for j in range(len(ks)) if current[j] == i)
                if got != g["f_target"]:
                    return False
            for j, k in enumerate(ks):
                assignment[current[j]].append(k)
            return True
        for c in cand_sets[idx]:
            if rec(idx + 1, current + [c]):
                return True
        return False

    return rec(0, [])


# ---------------------------------------------------------------------------
# valuation identities through resultants


def resultant_valuation_check(f: IntPoly, g: IntPoly, p: int,
                              contributions) -> bool:
    """Exact identity sum(e_P f_P * w_P(g(theta))) = ord_p(Res(f, g)).

    `contributions` is a list of (e_P * f_P, w_P) pairs with w_P a Fraction;
    the per-prime values come from prime-tree data.
    """
    res = ia.resultant(f, g)
    if res == 0:
        raise ValueError("resultant vanishes: g shares a factor with f")
    lhs = sum(Fraction(m) * w for m, w in contributions)
    return Fraction(ia.ord_n(res, p)[0]) == lhs


def quotient_value_bound(f: IntPoly, leaf: st.SFType, p: int, rho: int) -> list:
    """For every level quotient of a leaf: (H, ord_p(Res(f, q)), n * rho * H).

    The reported resultant valuation is >= n * rho * H exactly when the
    quotient bound holds; callers assert that.
    """
    n = ia.pdeg(f)
    out = []
    eprod = 1
    for i in range(1, leaf.order + 1):
        node = leaf.trunc(i)
        eprod *= node.e
        an = st.analyze(node, f)
        exp = st.expand(f, node.g)
        for j in range(node.e * node.fdim):
            q = exp.quotients[an.s1 - j - 1]
            H = Fraction(st.analyze(node, q).v, eprod)
            if H == 0:
                continue
            val = ia.ord_n(ia.resultant(f, q), p)[0]
            out.append((i, j, H, val, Fraction(n * rho) * H))
    return out


# ---------------------------------------------------------------------------
# ring structure, traces, maximality


def power_sums(f: IntPoly) -> list[int]:
    """Traces of theta^k for 0 <= k <= 2n-2, by Newton's identities."""
    n = ia.pdeg(f)
    a = list(f)
    s = [n]
    for k in range(1, 2 * n - 1):
        total = 0
        for i in range(1, min(k - 1, n) + 1):
            total += a[n - i] * s[k - i]
        if k <= n:
            total += k * a[n - k]
        s.append(-total)
    return s


def trace_of(num: IntPoly, f: IntPoly, sums: list[int]) -> int:
    return sum(c * sums[k] for k, c in enumerate(num))


def mul_mod(a: IntPoly, b: IntPoly, f: IntPoly) -> IntPoly:
    _, r = ia.pdivmod_monic(ia.pmul(a, b), f)
    return r


def ring_closed(lat: bs.IntegerLattice, f: IntPoly) -> bool:
    """Every product of two basis vectors stays inside the lattice."""
    n = lat.n
    rows = [ia.ptrim(row) for row in lat.rows]
    for i in range(n):
        for j in range(i, n):
            prod = mul_mod(rows[i], rows[j], f)
            vec = [prod[k] if k < len(prod) else 0 for k in range(n)]
            if not lat.contains(vec, lat.den * lat.den):
                return False
    return True


def order_discriminant(lat: bs.IntegerLattice, f: IntPoly) -> int:
    """disc of the order spanned by the lattice, via the exact trace form."""
    n = lat.n
    sums = power_sums(f)
    rows = [ia.ptrim(row) for row in lat.rows]
    T = [[Fraction(trace_of(mul_mod(rows[i], rows[j], f), f, sums),
                   lat.den * lat.den) for j in range(n)] for i in range(n)]
    det = _fraction_det(T)
    if det.denominator != 1:
        raise RuntimeError("trace form of an order must have integer determinant")
    return int(det)


def _fraction_det(M) -> Fraction:
    n = len(M)
    M = [row[:] for row in M]
    det = Fraction(1)
    for c in range(n):
        piv = next((r for r in range(c, n) if M[r][c]), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            M[c], M[piv] = M[piv], M[c]
            det = -det
        det *= M[c][c]
        inv = 1 / M[c][c]
        for r in range(c + 1, n):
            if M[r][c]:
                factor = M[r][c] * inv
                M[r] = [x - factor * y for x, y in zip(M[r], M[c])]
    return det


def index_disc_identity(lat: bs.IntegerLattice, f: IntPoly) -> bool:
    """disc(f) == [O : Z[theta]]^2 * disc(O), all sides exact."""
    idx = lat.index_over_power_basis()
    return ia.discriminant(f) == idx * idx * order_discriminant(lat, f)


def charpoly_is_integral(num: IntPoly, den: int, f: IntPoly) -> bool:
    """Whether num(theta)/den is an algebraic integer (exact char poly test)."""
    n = ia.pdeg(f)
    rows = []
    cur = ia.pdivmod_monic(num, f)[1]
    base = cur
    for i in range(n):
        shifted = mul_mod(base, ia.pshift((1,), i), f) if i else base
        rows.append([Fraction(shifted[k] if k < len(shifted) else 0, den)
                     for k in range(n)])
    coeffs = _charpoly(rows)
    return all(c.denominator == 1 for c in coeffs)


def _charpoly(M) -> list[Fraction]:
    """Faddeev-LeVerrier characteristic polynomial coefficients (monic first)."""
    n = len(M)
    I = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    coeffs = [Fraction(1)]
    Mk = [row[:] for row in I]
    for k in range(1, n + 1):
        Mk = _matmul(M, Mk)
        c = -_trace(Mk) / k
        coeffs.append(c)
        for i in range(n):
            Mk[i][i] += c
    return coeffs


def _matmul(A, B):
    n = len(A)
    return [[sum(A[i][k] * B[k][j] for k in range(n)) for j in range(n)]
            for i in range(n)]


def _trace(A) -> Fraction:
    return sum(A[i][i] for i in range(len(A)))


# ---------------------------------------------------------------------------
# maximality at a prime (radical and multiplier-ring enlargement)


def _left_kernel_mod_p(M, p: int) -> list[list[int]]:
    """Vectors a with sum(a_i * M[i]) = 0 over Z/pZ."""
    if not M:
        return []
    cols = len(M[0])
    transposed = [[M[i][j] for i in range(len(M))] for j in range(cols)]
    return _kernel_mod_p(transposed, p)


def _kernel_mod_p(M, p: int) -> list[list[int]]:
    """Basis of {x : M x = 0} over Z/pZ."""
    if not M:
        return []
    rows = len(M)
    cols = len(M[0])
    A = [[x % p for x in row] for row in M]
    pivots = {}
    r = 0
    for c in range(cols):
        piv = next((i for i in range(r, rows) if A[i][c] % p), None)
        if piv is None:
            continue
        A[r], A[piv] = A[piv], A[r]
        inv = pow(A[r][c], -1, p)
        A[r] = [x * inv % p for x in A[r]]
        for i in range(rows):
            if i != r and A[i][c]:
                f = A[i][c]
                A[i] = [(x - f * y) % p for x, y in zip(A[i], A[r])]
        pivots[c] = r
        r += 1
    kernel = []
    for c in range(cols):
        if c in pivots:
            continue
        vec = [0] * cols
        vec[c] = 1
        for pc, pr in pivots.items():
            vec[pc] = (-A[pr][c]) % p
        kernel.append(vec)
    return kernel


def _mult_table(lat: bs.IntegerLattice, f: IntPoly) -> list:
    """table[i][j] = integer coordinates of w_i * w_j in the lattice basis."""
    n = lat.n
    rows = [ia.ptrim(row) for row in lat.rows]
    table = []
    for i in range(n):
        row_t = []
        for j in range(n):
            prod = mul_mod(rows[i], rows[j], f)
            vec = [prod[k] if k < len(prod) else 0 for k in range(n)]
            row_t.append(_solve_hnf(lat, vec))
        table.append(row_t)
    return table


def _solve_hnf(lat: bs.IntegerLattice, vec) -> list[int]:
    """Coordinates of vec (in den^2-scaled power basis) over the HNF rows."""
    out = [0] * lat.n
    v = list(vec)
    for j in range(lat.n):
        piv = lat.rows[j][j] * lat.den
        if v[j] % piv:
            raise ValueError("vector outside the lattice")
        q = v[j] // piv
        out[j] = q
        if q:
            for i in range(j, lat.n):
                v[i] -= q * lat.den * lat.rows[j][i]
    if any(v):
        raise ValueError("vector outside the lattice")
    return out


def pz_enlarge(lat: bs.IntegerLattice, f: IntPoly, p: int) -> bs.IntegerLattice:
    """One radical/multiplier-ring enlargement step of the order at p."""
    n = lat.n
    table = _mult_table(lat, f)

    def mul_coords(a, b):
        out = [0] * n
        for i, ai in enumerate(a):
            if ai % p == 0:
                continue
            for j, bj in enumerate(b):
                if bj % p == 0:
                    continue
                for k in range(n):
                    out[k] = (out[k] + ai * bj * table[i][j][k]) % p
        return out

    # radical of pO: kernel of x -> x^(p^m) on O/pO, p^m >= n
    m = 1
    while p ** m < n:
        m += 1
    frob_rows = []
    for i in range(n):
        v = [0] * n
        v[i] = 1
        acc = v
        for _ in range(m):
            # acc^p by repeated squaring on the exponent p
            base = acc
            out = None
            e = p
            while e:
                if e & 1:
                    out = base if out is None else mul_coords(out, base)
                e >>= 1
                if e:
                    base = mul_coords(base, base)
            acc = out
        frob_rows.append(acc)
    rad = _left_kernel_mod_p(frob_rows, p)
    # ideal I = <radical lifts> + pO, as lattice coordinates over lat
    ideal_rows = [list(v) for v in rad]
    for i in range(n):
        row = [0] * n
        row[i] = p
        ideal_rows.append(row)
    ideal = bs.hnf_rows(ideal_rows, n)
    # multiplier ring: y with y * I inside p * I gives y/p in the enlargement
    big = []
    for i in range(n):
        vimg = []
        for j in range(n):
            prod = [0] * n
            for k, c in enumerate(ideal[j]):
                if c:
                    for l in range(n):
                        prod[l] += c * table[i][k][l]
            vimg.extend(_solve_rows(ideal, prod, p))
        big.append(vimg)
    kern = _left_kernel_mod_p(big, p)
    rows = []
    for row in lat.rows:
        rows.append([p * x for x in row])
    for v in kern:
        vec = [0] * n
        for i, c in enumerate(v):
            if c:
                for k in range(n):
                    vec[k] += c * lat.rows[i][k]
        rows.append(vec)
    return bs.IntegerLattice.from_rows(rows, lat.den * p, n)


def _solve_rows(hnf, vec, p: int) -> list[int]:
    """Coordinates of vec over upper-triangular hnf rows, reduced mod p."""
    v = list(vec)
    out = [0] * len(hnf)
    for j in range(len(hnf)):
        piv = hnf[j][j]
        if v[j] % piv:
            raise ValueError("vector outside the ideal lattice")
        q = v[j] // piv
        out[j] = q % p
        if q:
            for i in range(j, len(hnf)):
                v[i] -= q * hnf[j][i]
    return out


def p_maximal(lat: bs.IntegerLattice, f: IntPoly, p: int) -> bool:
    """True when the multiplier ring of the p-radical adds nothing."""
    return pz_enlarge(lat, f, p) == lat


# ---------------------------------------------------------------------------
# aggregated report


def verify_report(f: IntPoly, D: int | None = None,
                  known_primes: list[int] | None = None, seed: int = 0) -> list:
    """Run the oracle suite on a global-basis computation; list of checks."""
    checks = []
    result = bs.global_basis(f, D, seed)
    lat = result.merged

    def add(name, ok, details=""):
        checks.append({"check": name, "status": "pass" if ok else "fail",
                       "details": details})

    add("basis-count", all(len(b) == ia.pdeg(f) for _, b in result.moduli))
    add("ring-closed", ring_closed(lat, f))
    try:
        add("index-discriminant", index_disc_identity(lat, f))
    except (ValueError, RuntimeError) as exc:
        add("index-discriminant", False, str(exc))
    add("elements-integral", all(
        charpoly_is_integral(el.num, N ** el.den_exp, f)
        for N, b in result.moduli for el in b))
    for p in known_primes or []:
        add(f"p-maximal-{p}", p_maximal(lat, f, p))
        for N, _ in result.moduli:
            if N % p == 0 and N != p:
                out = run_tree(f, N)
                if out.rep is not None:
                    rp = project_check(out.rep, f, p, seed)
                    add(f"project-{N}-{p}", rp["ok"], "; ".join(rp["details"]))
    return checks
