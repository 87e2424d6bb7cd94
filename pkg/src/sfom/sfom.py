"""Tree driver: grow the tree of types for (f, N) modulo a composite N.

The driver maintains a worklist of pending levels.  Every computation that
can hit a zero divisor raises a FactorEvent; events at level -1 abort the run
and report the integer factor, events at level i >= 0 split a modulus t_i and
replace all affected tree nodes by two truncated stubs (one per piece), which
re-enter the worklist with their multiplicity and representative recomputed.

The same driver runs the prime specialization: with a prime modulus and a
complete-factorization hook instead of squarefree decomposition, no event can
fire and every modulus is irreducible.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from . import intarith as ia
from . import sftypes as st
from .artinalg import AlgebraTower, FactorEvent, PolyA
from .intarith import IntPoly


class _NFactor(Exception):
    def __init__(self, factor: int):
        super().__init__(str(factor))
        self.factor = factor


@dataclass
class _Item:
    """A pending level: a type-to-be of order (parent.order + 1 if parent else 0).

    omega None marks a refine stub whose modulus still needs certification
    and whose multiplicity must be recomputed from residual_src.
    """

    parent: st.SFType | None
    g: IntPoly | None
    h: int
    e: int
    t: PolyA
    residual_src: PolyA
    omega: int | None

    def chain_key(self) -> tuple:
        prefix = self.parent.chain_key() if self.parent is not None else ()
        return prefix + ((self.g, self.h, self.e, self.t.coeffs),)


@dataclass
class SFOMRep:
    """Tree output: multiplicity-one leaves covering the reduction of f."""

    f: IntPoly
    N: int
    leaves: list
    prime: int | None = None

    @property
    def roots(self) -> list:
        seen = []
        for leaf in self.leaves:
            r = leaf.trunc(0)
            if all(r is not other for other in seen):
                seen.append(r)
        return seen

    @property
    def ramified(self) -> bool:
        return any(leaf.e_prod() > 1 for leaf in self.leaves)

    def order_zero_leaves(self) -> list:
        return [leaf for leaf in self.leaves if leaf.order == 0]

    def order_zero_t(self) -> PolyA | None:
        """Product of the order-zero leaf moduli (the multiplicity-one part)."""
        parts = self.order_zero_leaves()
        if not parts:
            return None
        tower = parts[0].tower
        out = tower.p_one(0)
        for leaf in parts:
            out = tower.p_mul(out, leaf.t)
        return out

    def to_obj(self) -> dict:
        leaves = []
        for leaf in self.leaves:
            chain = []
            for node in leaf.chain():
                tower = node.tower
                chain.append({
                    "level": node.order,
                    "t": tower.poly_to_obj(node.t),
                    "g": None if node.g is None else [str(c) for c in node.g],
                    "lambda": [node.h, node.e],
                    "omega": node.omega,
                    "V": node.V,
                })
            leaves.append(chain)
        return {
            "f": [str(c) for c in self.f],
            "N": str(self.N),
            "prime": self.prime,
            "leaves": leaves,
        }


@dataclass
class SplitOutcome:
    """Either a tree for (f, N) or a proper factor of N found on the way."""

    rep: SFOMRep | None = None
    n_factor: int | None = None


@dataclass
class _State:
    tower0: AlgebraTower
    worklist: list = field(default_factory=list)
    leaves: list = field(default_factory=list)


def sfom(f: IntPoly, N: int, shuffle_seed: int | None = None) -> SplitOutcome:
    """Run the tree construction for f modulo the composite N.

    f must be monic of degree > 1 and is expected to be irreducible over the
    rationals; correctness of squarefree decompositions additionally needs
    every prime of N to exceed deg f, which the global driver arranges by
    stripping small primes first.
    """
    return _drive(f, N, _sf_decompose, shuffle_seed=shuffle_seed)


def _sf_decompose(tower: AlgebraTower, R: PolyA, rng) -> list[tuple[PolyA, int]]:
    return tower.p_sfd(R)


def _drive(f: IntPoly, N: int, decompose, rng=None, prime: int | None = None,
           shuffle_seed: int | None = None) -> SplitOutcome:
    f = ia.ptrim(f)
    n = ia.pdeg(f)
    if n < 2 or f[-1] != 1:
        raise ValueError("need a monic polynomial of degree > 1")
    if N <= 1:
        raise ValueError("need N > 1")
    if rng is None:
        rng = random.Random(0)
    state = _State(AlgebraTower(N))
    shuffler = random.Random(shuffle_seed) if shuffle_seed is not None else None
    try:
        red = st.reduce_mod_n(state.tower0, f)
        try:
            parts = decompose(state.tower0, red, rng)
        except FactorEvent as ev:
            # no moduli exist yet, so the event can only split N itself
            if ev.level != -1:
                raise AssertionError("polynomial factor event before any modulus")
            raise _NFactor(ev.factor)
        for t0, mult in reversed(parts):
            state.worklist.append(_Item(None, None, 0, 1, t0, red, mult))
        steps = 0
        while state.worklist:
            steps += 1
            if steps > 1000 + 200 * n:
                raise RuntimeError("tree construction exceeded its step budget")
            if shuffler is not None and len(state.worklist) > 1:
                i = shuffler.randrange(len(state.worklist))
                state.worklist[i], state.worklist[-1] = (
                    state.worklist[-1], state.worklist[i])
            item = state.worklist.pop()
            try:
                _process(state, item, f, decompose, rng)
            except FactorEvent as ev:
                state.worklist.append(item)
                _handle_event(state, ev, item)
    except _NFactor as s:
        return SplitOutcome(n_factor=s.factor)
    rep = SFOMRep(f, N, state.leaves, prime=prime)
    _check_masses(rep)
    return SplitOutcome(rep=rep)


def _process(state: _State, item: _Item, f: IntPoly, decompose, rng) -> None:
    base = state.tower0 if item.parent is None else item.parent.tower
    omega = item.omega
    if omega is None:
        # refine stub: re-certify the piece and recompute its multiplicity
        base.p_assert_strongly_unitary(item.t)
        if item.parent is not None and base.is_zero(item.t.coeffs[0]):
            raise ValueError("refined modulus lost its constant term")
        omega = st.ord_in_residual(base, item.residual_src, item.t)
        if omega < 1:
            raise RuntimeError("refined modulus does not divide its residual")
    if item.parent is None:
        node = st.make_root(base, item.t, omega, item.residual_src)
    else:
        node = st.make_child(item.parent, item.g, item.h, item.e, item.t,
                             omega, item.residual_src)
    if omega == 1:
        state.leaves.append(node)
        return
    g = st.representative(node)
    polygon = st.newton(node, g, omega, f)
    if polygon.principal_length != omega:
        raise RuntimeError("principal polygon length disagrees with multiplicity")
    for side in polygon.sides:
        R = st.residual_of(node, g, side.h, side.e, f)
        for t2, mult in reversed(decompose(node.tower, R, rng)):
            state.worklist.append(_Item(node, g, side.h, side.e, t2, R, mult))


def _handle_event(state: _State, ev: FactorEvent, ctx: _Item) -> None:
    """Split a modulus: replace every matching node by two truncated stubs."""
    if ev.level == -1:
        raise _NFactor(ev.factor)
    ctx_key = ctx.chain_key()
    if ev.level >= len(ctx_key):
        raise AssertionError("event above the active chain")
    target_key = ctx_key[:ev.level + 1]
    if ev.level < len(ctx_key) - 1:
        anc = ctx.parent.trunc(ev.level)
        parent = anc.parent
        g, h, e, t, src = anc.g, anc.h, anc.e, anc.t, anc.residual_src
    else:
        parent = ctx.parent
        g, h, e, t, src = ctx.g, ctx.h, ctx.e, ctx.t, ctx.residual_src
    div_tower = parent.tower if parent is not None else state.tower0
    psi = div_tower.p_exact_divide(t, ev.factor)
    kept_work = [it for it in state.worklist
                 if not _prefix_match(it.chain_key(), target_key)]
    kept_leaves = [lf for lf in state.leaves
                   if not _prefix_match(lf.chain_key(), target_key)]
    if len(kept_work) == len(state.worklist) and len(kept_leaves) == len(state.leaves):
        # stale split: the chain it refers to is gone; later recomputation
        # will resurface any factor that still matters
        return
    state.worklist = kept_work
    state.leaves = kept_leaves
    for piece in (ev.factor, psi):
        state.worklist.append(_Item(parent, g, h, e, piece, src, None))


def _prefix_match(key: tuple, prefix: tuple) -> bool:
    return len(key) >= len(prefix) and key[:len(prefix)] == prefix


def _check_masses(rep: SFOMRep) -> None:
    per_root: dict[int, int] = {}
    roots = rep.roots
    for leaf in rep.leaves:
        root = leaf.trunc(0)
        i = next(j for j, r in enumerate(roots) if r is root)
        per_root[i] = per_root.get(i, 0) + leaf.e_prod() * leaf.f_prod()
    total = 0
    for i, r in enumerate(roots):
        expected = r.omega * r.fdim
        if per_root.get(i, 0) != expected:
            raise RuntimeError("leaf degree mass does not match its root")
        total += expected
    if total != ia.pdeg(rep.f):
        raise RuntimeError("tree does not account for the full degree")
