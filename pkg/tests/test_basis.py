import json
import random
from itertools import product

import pytest

from conftest import example1, example2, pollard_factor, refine_fixture
from sfom import intarith as ia
from sfom.basis import (BasisElement, IntegerLattice, NeedsSquarefree,
                        global_basis, hnf_merge, hnf_rows, n_integral_basis,
                        order_zero_basis, terminal_basis)
from sfom.sfom import sfom
from sfom.validate import (charpoly_is_integral, index_disc_identity,
                           p_maximal, ring_closed)


def test_hnf_rows_canonical():
    assert hnf_rows([[2, 1], [0, 3]], 2) == [[2, 1], [0, 3]]
    assert hnf_rows([[1, 5], [0, 3]], 2) == [[1, 2], [0, 3]]
    # order of generators never matters
    rows = [[4, 1, 0], [6, 0, 1], [0, 2, 2]]
    a = hnf_rows([r[:] for r in rows], 3)
    b = hnf_rows([r[:] for r in reversed(rows)], 3)
    assert a == b
    with pytest.raises(ValueError):
        hnf_rows([[1, 0, 0], [0, 1, 0]], 3)


def test_lattice_membership(rng):
    for _ in range(30):
        rows = [[rng.randrange(-9, 10) for _ in range(3)] for _ in range(4)]
        try:
            lat = IntegerLattice.from_rows(rows, 2, 3)
        except ValueError:
            continue
        for _ in range(10):
            coeffs = [rng.randrange(-3, 4) for _ in range(3)]
            vec = [sum(c * row[k] for c, row in zip(coeffs, lat.rows))
                   for k in range(3)]
            assert lat.contains(vec, lat.den)


def test_hnf_merge_examples():
    f = (1, 0, 1)
    L1 = IntegerLattice.from_elements(
        [BasisElement((1,), 0, ()), BasisElement((0, 1), 0, ())], f, 35)
    assert hnf_merge([L1, L1], False, f) == L1
    fe = example1(35)
    rep = sfom(fe, 35).rep
    lat = IntegerLattice.from_elements(
        n_integral_basis(rep, fe, 35, assume_squarefree=True), fe, 35)
    assert hnf_merge([lat, IntegerLattice.power_basis(4)], False, fe) == lat


def test_hnf_merge_coprime_denominators_bruteforce():
    # lattice sum with coprime denominators matches residue patching
    a = IntegerLattice.from_rows([[3, 1], [0, 3]], 3, 2)    # (1, 1/3), (0, 1)
    b = IntegerLattice.from_rows([[5, 0], [2, 5]], 5, 2)    # (1, 0), (2/5, 1)
    merged = hnf_merge([a, b], False, (1, 0, 1))
    assert merged.den == 15
    # brute force: all sums x + y with small coordinates, check membership
    for ca in product(range(-2, 3), repeat=2):
        for cb in product(range(-2, 3), repeat=2):
            vec = [15 * sum(c * r[k] for c, r in zip(ca, a.basis_vectors()))
                   + 15 * sum(c * r[k] for c, r in zip(cb, b.basis_vectors()))
                   for k in range(2)]
            vec = [int(x) for x in vec]
            assert merged.contains(vec, 15)


def test_order_zero_basis_examples():
    f = (1, 0, 1)
    rep = sfom(f, 35).rep
    basis = n_integral_basis(rep, f, 35)
    assert sorted(el.num for el in basis) == [(0, 1), (1,)]
    # t = y with f(0) = 0 mod N: the zero-order block is the single q(theta)
    f2 = ia.padd(ia.pmul((0, 1), ia.pmul((1, 1), (1, 1))), (35,))
    rep2 = sfom(f2, 35).rep
    t0 = rep2.order_zero_t()
    assert t0 is not None and t0.degree() == 1
    block = order_zero_basis(t0, f2, 35)
    q, _ = ia.pdivmod_monic(f2, (0, 1))
    assert [el.num for el in block] == [q]


def test_terminal_basis_example1():
    N = 35
    f = example1(N)
    rep = sfom(f, N).rep
    lat = IntegerLattice.from_elements(
        n_integral_basis(rep, f, N, assume_squarefree=True), f, N)
    want = IntegerLattice.from_elements([
        BasisElement((1,), 0, ()), BasisElement((0, 1), 0, ()),
        BasisElement((0, 0, 1), 1, ()), BasisElement((0, N, 0, 1), 2, ()),
    ], f, N)
    assert lat == want


def test_terminal_basis_example2():
    p, r, m = 11, 3, 5
    f = example2(p, r, m)
    rep = sfom(f, p).rep
    lat = IntegerLattice.from_elements(
        n_integral_basis(rep, f, p, assume_squarefree=True), f, p)
    coef = list(f)
    want_els = []
    for k in range(r):
        num = tuple(coef[2 * r - 2 * k:])
        want_els.append(BasisElement(num, k, ()))
        want_els.append(BasisElement(ia.pshift(num, 1), k, ()))
    assert lat == IntegerLattice.from_elements(want_els, f, p)


def test_needs_squarefree_gate():
    # ramified tree over a modulus with a hidden square
    N, f = 175, (350, 0, 1)
    rep = sfom(f, N).rep
    assert rep.ramified
    with pytest.raises(NeedsSquarefree):
        n_integral_basis(rep, f, N)
    # resolvable either by asserting squarefreeness or by splitting N
    basis = n_integral_basis(rep, f, N, assume_squarefree=True)
    assert len(basis) == 2


def test_global_basis_strips_small_primes_and_splits():
    f = (350, 0, 1)  # disc = -1400 = -2^3 * 5^2 * 7
    result = global_basis(f)
    moduli = [N for N, _ in result.moduli]
    assert 2 in moduli          # small-prime engine
    assert set(moduli) >= {2, 5}
    lat = result.merged
    assert ring_closed(lat, f)
    assert index_disc_identity(lat, f)
    for p in (2, 5, 7):
        assert p_maximal(lat, f, p)


def test_global_basis_example1():
    N = 35
    f = example1(N)
    result = global_basis(f)
    moduli = [n for n, _ in result.moduli]
    assert 35 in moduli or {5, 7} <= set(moduli)
    lat = result.merged
    assert ring_closed(lat, f)
    assert index_disc_identity(lat, f)
    for p in sorted(pollard_factor(ia.discriminant(f))):
        assert p_maximal(lat, f, p), p


def test_global_basis_power_basis_field():
    # squarefree discriminant after the small primes: merged order is Z[theta]
    f = (1, 1, 0, 1)  # disc(x^3 + x + 1) = -31
    result = global_basis(f)
    assert result.merged == IntegerLattice.power_basis(3)


def test_global_basis_idempotent_serialization():
    f = example1(35)
    a = json.dumps(global_basis(f).to_obj())
    b = json.dumps(global_basis(f).to_obj())
    assert a == b


def test_basis_after_refine_is_maximal():
    f = refine_fixture(35)
    result = global_basis(f)
    lat = result.merged
    assert ring_closed(lat, f)
    assert index_disc_identity(lat, f)
    for p in sorted(pollard_factor(ia.discriminant(f))):
        assert p_maximal(lat, f, p), p


def test_elements_integral_with_values_below_one():
    # every local basis element is integral, and scaling by 1/p breaks
    # integrality for each prime of the modulus (the value sits in [0, 1))
    N = 35
    f = example1(N)
    rep = sfom(f, N).rep
    basis = n_integral_basis(rep, f, N, assume_squarefree=True)
    assert len(basis) == ia.pdeg(f)
    for el in basis:
        den = N ** el.den_exp
        assert charpoly_is_integral(el.num, den, f)
        for p in (5, 7):
            assert not charpoly_is_integral(el.num, den * p, f)


def test_user_supplied_partial_discriminant():
    # a user D standing in for a partial factorization still works
    f = example1(35)
    result = global_basis(f, D=35 ** 9)
    lat = result.merged
    for p in (5, 7):
        assert p_maximal(lat, f, p)


def test_global_basis_example2_maximal():
    f = example2(11, 3, 5)
    result = global_basis(f)
    lat = result.merged
    assert ring_closed(lat, f)
    assert index_disc_identity(lat, f)
    for p in sorted(pollard_factor(ia.discriminant(f))):
        assert p_maximal(lat, f, p), p


def test_example3_basis_maximal():
    # 36 elements from the two-level slope data, maximal at both primes
    from conftest import example3
    N = 37 * 41
    f, _ = example3(3, N)
    rep = sfom(f, N).rep
    basis = n_integral_basis(rep, f, N, assume_squarefree=True)
    assert len(basis) == 36
    merged = hnf_merge([IntegerLattice.from_elements(basis, f, N)], True, f)
    for p in (37, 41):
        assert p_maximal(merged, f, p)


def test_unramified_tree_over_nonsquarefree_modulus():
    # the basis hypothesis also holds with every type unramified, even when
    # the modulus hides a square; and prime slopes scale by ord_p(N)
    from sfom.validate import project_check
    N = 175  # 5^2 * 7
    g = (2, 0, 1)
    f = ia.padd(ia.padd(ia.pmul(g, g), ia.pscale(g, N)), (3 * N * N,))
    rep = sfom(f, N).rep
    assert not rep.ramified
    basis = n_integral_basis(rep, f, N)  # gate passes without assuming squarefree
    assert len(basis) == 4
    merged = hnf_merge([IntegerLattice.from_elements(basis, f, N)], True, f)
    for p in (5, 7):
        assert p_maximal(merged, f, p)
    assert project_check(rep, f, 5)["rho"] == 2
    assert project_check(rep, f, 5)["ok"]
