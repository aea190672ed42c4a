"""
Incremental cylindrical decomposition of complex space.

:func:`cylindrical_decompose` builds an ``F``-invariant complete cylindrical
tree by refining a single shared :class:`~inccad.tree.CylindricalTree` one
polynomial at a time; :func:`solve_system` does the same for a system of
equations and inequations and keeps only the branches where the system can
hold (a *partial* tree whose zero set is that of the system).

All routines write their results into the nodes' attribute tables instead
of returning values:

* ``signs[p]``       0 (zero modulo the path) or 1 (invertible modulo the path)
* ``invert_lc[p]``   a polynomial equal to ``p`` modulo the path with invertible
                     initial, or the constants 0 / 1
* ``squarefree[p]``  same, additionally with invertible discriminant
* ``gcd[(p, f)]``    a GCD of ``p`` and ``f`` modulo the path

Table keys are normalized polynomials (see :func:`~inccad.poly.normalize`).
The routines take a path and the level ``n`` of the projected tree they work
on; nodes deeper than ``n`` are carried along by :meth:`split`.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Optional, Sequence

from .poly import (
    Polynomial,
    VarOrder,
    is_one,
    normalize,
    pquo,
    prem_chain,
    primitive_part,
    squarefree_part_univariate,
    subresultant_chain,
)
from .tree import CylindricalTree, Kind, NodeConstraint, Path

log = logging.getLogger(__name__)

PLAIN = "plain"
EQUATION = "equation"
INEQUATION = "inequation"
ROLES = (PLAIN, EQUATION, INEQUATION)


@dataclass
class InputSystem:
    """Polynomials over a variable order, each with a role."""

    order: VarOrder
    items: list = field(default_factory=list)  # list of (Polynomial, role)

    def __post_init__(self):
        for p, role in self.items:
            if role not in ROLES:
                raise ValueError(f"unknown role {role!r}")
            if p.order != self.order:
                raise ValueError("polynomial over a different variable order")

    @property
    def polys(self) -> list[Polynomial]:
        return [p for p, _ in self.items]

    @property
    def is_plain(self) -> bool:
        return all(r == PLAIN for _, r in self.items)


def key(p: Polynomial) -> Polynomial:
    """Canonical table key of a non-constant polynomial."""
    return normalize(p)


def constant_sign(p: Polynomial) -> int:
    return 0 if p.is_zero else 1


class Stats:
    def __init__(self):
        self.intersect_main = 0
        self.regular_gcd = 0
        self.squarefree = 0
        self.prem_zero = 0
        self.pruned = 0
        self.reduced = 0

    def as_dict(self):
        return dict(vars(self))


class Decomposer:
    """Runs the incremental algorithms against one universe.

    ``eqs`` enables the equational-constraint behavior: an input polynomial
    passed with role ``equation`` (``inequation``) removes every branch on
    which it is invertible (zero) instead of recording the sign.
    """

    def __init__(self, tree: CylindricalTree, eqs: bool = False):
        self.tree = tree
        self.eqs = eqs
        self.stats = Stats()

    # ---- sign bookkeeping ----------------------------------------------------------
    def sign_on(self, node_key: int, q: Polynomial) -> int:
        if q.is_constant:
            return constant_sign(q)
        return self.tree[node_key].signs[key(q)]

    def _keep(self, sign: int, role: str) -> bool:
        if role == EQUATION:
            return sign == 0
        if role == INEQUATION:
            return sign == 1
        return True

    def _record(self, leaf: int, kp: Polynomial, sign: int, role: str):
        if self._keep(sign, role):
            self.tree[leaf].signs[kp] = sign
        else:
            self.stats.pruned += 1
            self.tree.delete(leaf)

    def _reduce(self, q: Polynomial, path: Sequence[int]) -> Polynomial:
        """``q`` reduced by the equations below its level on ``path``.

        The multipliers are initials of a regular chain, so the result
        equals ``q`` times a unit on the path's zero set.
        """
        if q.is_constant:
            return q
        eqs = self.tree.equations(path, q.level - 1)
        if not eqs:
            return q
        r = prem_chain(q, eqs)
        if r.is_zero or r.level != q.level or r.mdeg != q.mdeg:
            return q
        self.stats.reduced += 1
        return primitive_part(r)

    def _split(self, leaf: int, parts: Sequence[tuple[NodeConstraint, int]], kp: Polynomial, role: str):
        path = self.tree.path_to(leaf)
        parts = [(NodeConstraint(c.kind, c.level, key(self._reduce(c.poly, path))) if c.poly is not None else c, s)
                 for c, s in parts]
        kept = [(c, {kp: s}) for c, s in parts if self._keep(s, role)]
        if len(kept) < len(parts):
            self.stats.pruned += len(parts) - len(kept)
        self.tree.split(leaf, kept)

    def _prem_zero(self, p: Polynomial, path: Sequence[int]) -> bool:
        eqs = self.tree.equations(path, p.level)
        if not eqs:
            return False
        if prem_chain(p, eqs).is_zero:
            self.stats.prem_zero += 1
            return True
        return False

    # ---- Intersect ---------------------------------------------------------------
    def intersect(self, p: Polynomial, role: str = PLAIN):
        """Refine the whole tree so that ``p`` is zero or invertible on every path."""
        tree = self.tree
        if p.is_constant:
            if not self._keep(constant_sign(p), role):
                for c in list(tree[tree.root].children):
                    tree.delete(c)
            return
        kp = key(p)
        root = Path((tree.root,))
        for gamma in tree.todo(root, lambda node: kp in node.signs, tree.n):
            self.intersect_path(p, gamma, tree.n, role)
        if role != PLAIN:
            # signs cached before this call were recorded without the role
            for path in tree.paths():
                if not self._keep(tree[path.leaf].signs[kp], role):
                    self.stats.pruned += 1
                    tree.delete(path.leaf)

    def intersect_path(self, p: Polynomial, gamma: Path, n: int, role: str = PLAIN):
        """Make ``p`` sign invariant above every path derived from ``gamma``.

        ``gamma`` is a path of the tree projected to level ``n``.
        """
        if p.is_constant:
            return
        k = p.level
        if k > n:
            raise ValueError(f"polynomial of level {k} above a level-{n} tree")
        if k == n:
            self.intersect_main(p, gamma, n, role)
            return
        self.intersect_main(p, gamma.project(k), k, role)
        kp = key(p)
        for c in self.tree.update(gamma):
            leaf = self.tree[c.leaf]
            leaf.signs[kp] = self.tree[c[k]].signs[kp]

    def intersect_main(self, p: Polynomial, gamma: Path, n: int, role: str = PLAIN):
        """Refine paths derived from ``gamma`` (level ``n``) for a level-``n`` ``p``."""
        tree = self.tree
        kp = key(p)
        done = lambda node: kp in node.signs  # noqa: E731
        derived = tree.update(gamma)
        if all(done(tree[c.leaf]) for c in derived):
            return
        self.stats.intersect_main += 1
        for c in derived:
            if not done(tree[c.leaf]) and self._prem_zero(p, c):
                self._record(c.leaf, kp, 0, role)
        derived = tree.update(gamma)
        todo = [c for c in derived if not done(tree[c.leaf])]
        if not todo:
            return
        # under an equation leaf only the initial needs regularizing
        eq_mode = self.eqs and role == EQUATION
        proj = gamma.project(n - 1)
        if eq_mode:
            self.regularize_initial(p, p, proj, n - 1)
        if not eq_mode or any(tree[c.leaf].kind is not Kind.EQ for c in todo):
            self.squarefree(p, proj, n - 1)
        for c in tree.todo(gamma, done):
            v = tree[c.leaf]
            lower = tree[c[n - 1]]
            if eq_mode and v.kind is Kind.EQ:
                sp = lower.invert_lc[kp]
            else:
                sp = lower.squarefree[kp]
            if sp.is_zero:
                self._record(c.leaf, kp, 0, role)
            elif sp.is_constant:
                self._record(c.leaf, kp, 1, role)
            elif v.kind is Kind.ANY:
                self._split(c.leaf, [(NodeConstraint.eq(sp), 0), (NodeConstraint.neq(sp), 1)], kp, role)
            else:
                f = v.poly
                eq_hint = self.eqs and role == EQUATION and v.kind is Kind.EQ
                self.regular_gcd(sp, f, c.project(n - 1), n - 1, eq_hint=eq_hint)
                gkey = (key(sp), key(f))
                for c2 in tree.update(c):
                    w = tree[c2.leaf]
                    cp, g, cf = cofactor(sp, tree[c2[n - 1]].gcd[gkey], f)
                    if w.kind is Kind.EQ:
                        if is_one(g):
                            self._record(c2.leaf, kp, 1, role)
                        elif is_one(cf):
                            self._record(c2.leaf, kp, 0, role)
                        else:
                            self._split(c2.leaf, [(NodeConstraint.eq(g), 0), (NodeConstraint.eq(cf), 1)], kp, role)
                    else:
                        if is_one(cp):
                            self._record(c2.leaf, kp, 1, role)
                        else:
                            self._split(
                                c2.leaf,
                                [(NodeConstraint.eq(cp), 0), (NodeConstraint.neq(primitive_part(f * cp)), 1)],
                                kp, role,
                            )

    # ---- Squarefree / RegularizeInitial ----------------------------------------------------
    def squarefree(self, p: Polynomial, gamma: Path, n: int):
        """Record ``squarefree[p]`` on every leaf derived from ``gamma`` (``p`` of level n+1)."""
        tree = self.tree
        kp = key(p)
        done = lambda node: kp in node.squarefree  # noqa: E731
        if all(done(tree[c.leaf]) for c in tree.update(gamma)):
            return
        self.stats.squarefree += 1
        if n == 0:
            tree[tree.root].squarefree[kp] = squarefree_part_univariate(p)
            return
        self.regularize_initial(p, p, gamma, n)
        top = n + 1
        for c in tree.todo(gamma, done):
            leaf = tree[c.leaf]
            f = leaf.invert_lc[kp]
            if f.level < top or f.deg(top) == 1:
                leaf.squarefree[kp] = f
                continue
            df = f.der
            self.regular_gcd(f, df, c, n)
            gkey = (key(f), key(df))
            for c2 in tree.update(c):
                l2 = tree[c2.leaf]
                g = l2.gcd[gkey]
                l2.squarefree[kp] = f if is_one(g) else self._reduce(primitive_part(pquo(f, g, top)), c2)

    def regularize_initial(self, p: Polynomial, pbar: Polynomial, gamma: Path, n: int):
        """Record ``invert_lc[p]`` on every leaf derived from ``gamma``."""
        tree = self.tree
        kp = key(p)
        top = n + 1
        lc = pbar.lc(top) if pbar.level == top else pbar
        self.intersect_path(lc, gamma, n)
        for c in tree.todo(gamma, lambda node: kp in node.invert_lc):
            leaf = tree[c.leaf]
            if self.sign_on(c.leaf, lc) == 1:
                if pbar.level < top:
                    leaf.invert_lc[kp] = tree.order.one()
                else:
                    leaf.invert_lc[kp] = self._reduce(primitive_part(pbar), c)
            else:
                if pbar.level < top:
                    leaf.invert_lc[kp] = tree.order.zero()
                else:
                    self.regularize_initial(p, pbar.tail, c, n)

    # ---- RegularGcd ----------------------------------------------------------------
    def regular_gcd(self, p: Polynomial, f: Polynomial, gamma: Path, n: int, eq_hint: bool = False):
        """Record ``gcd[(p, f)]`` on every leaf derived from ``gamma``.

        ``p`` and ``f`` have level ``n+1`` and ``init(f)`` must be invertible
        modulo ``gamma``.  With ``eq_hint`` the resultant is imposed as an
        equation whenever that cannot discard solutions of other branches.
        """
        tree = self.tree
        gkey = (key(p), key(f))
        if all(gkey in tree[c.leaf].gcd for c in tree.update(gamma)):
            return
        self.stats.regular_gcd += 1
        chain = subresultant_chain(p, f, n + 1)
        d = f.mdeg if p.mdeg >= f.mdeg else p.mdeg + 1
        self._regular_gcd(chain, gkey, d, 0, gamma, n, eq_hint)

    def _regular_gcd(self, chain, gkey, d: int, i: int, gamma: Path, n: int, eq_hint: bool):
        tree = self.tree
        done = lambda node: gkey in node.gcd  # noqa: E731
        if i == d:
            g = primitive_part(chain.items[i])
            for c in tree.update(gamma):
                tree[c.leaf].gcd[gkey] = self._reduce(g, c)
            return
        s = chain.principals[i]
        role = PLAIN
        if eq_hint and i == 0 and not s.is_constant and self._single_leaf_below(gamma, s.level):
            role = EQUATION
        self.intersect_path(s, gamma, n, role)
        for c in tree.todo(gamma, done):
            if self.sign_on(c.leaf, s) == 1:
                tree[c.leaf].gcd[gkey] = tree.order.one() if i == 0 else self._reduce(primitive_part(chain.items[i]), c)
            else:
                self._regular_gcd(chain, gkey, d, i + 1, c, n, eq_hint)

    def _single_leaf_below(self, gamma: Path, level: int) -> bool:
        # Imposing res = 0 at `level` is sound only if the node there
        # carries no full-depth leaf other than the one being processed.
        tree = self.tree
        for c in tree.update(gamma):
            if len(tree.update(c.project(level), tree.n)) != 1:
                return False
        return True


def cofactor(p: Polynomial, g: Polynomial, f: Polynomial):
    """Co-factors of ``p`` and ``f`` with respect to their GCD ``g``.

    Returns ``(cp, gg, cf)`` where ``gg`` is the GCD to use (``g`` itself, or
    ``p`` / ``f`` when ``g`` has the same main degree).
    """
    one = p.order.one()
    if is_one(g):
        return p, one, f
    top = p.level
    if g.mdeg == f.mdeg:
        if g.mdeg == p.mdeg:
            return one, f, one
        return primitive_part(pquo(p, f, top)), f, one
    if g.mdeg == p.mdeg:
        return one, p, primitive_part(pquo(f, p, top))
    return primitive_part(pquo(p, g, top)), g, primitive_part(pquo(f, g, top))


def cylindrical_decompose(system, order: Optional[VarOrder] = None) -> CylindricalTree:
    """``F``-invariant complete cylindrical tree of complex ``n``-space.

    ``system`` is an :class:`InputSystem` with plain roles or a sequence of
    polynomials.
    """
    polys, order = _unpack(system, order)
    for p in polys:
        if p.is_constant:
            raise ValueError("input polynomials must be non-constant")
    tree = CylindricalTree.initial(order)
    engine = Decomposer(tree)
    for p in polys:
        engine.intersect(p)
    tree.stats = engine.stats
    return tree


def solve_system(system: InputSystem) -> CylindricalTree:
    """Partial cylindrical tree whose paths' zero sets partition ``Z(system)``."""
    tree = CylindricalTree.initial(system.order)
    engine = Decomposer(tree, eqs=True)
    for p, role in system.items:
        if role == PLAIN:
            raise ValueError("solve_system expects equation/inequation roles")
        engine.intersect(p, role)
        if tree.is_empty():
            break
    tree.stats = engine.stats
    return tree


def _unpack(system, order):
    if isinstance(system, InputSystem):
        if not system.is_plain:
            raise ValueError("cylindrical_decompose expects plain roles")
        return system.polys, system.order
    polys = list(system)
    if order is None:
        if not polys:
            raise ValueError("empty input needs an explicit variable order")
        order = polys[0].order
    return polys, order
