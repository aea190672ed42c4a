"""
Real cylindrical algebraic decomposition from a complete complex tree.

Each real cell of level ``k-1`` refines one node ``N`` of the complex tree.
Over its sample point ``alpha`` the equation children of ``N`` separate, so
the real roots of their polynomials at ``alpha`` can be isolated and merged
into one sorted list: the roots are the sections of the stack and the gaps
are the sectors, which refine the single inequation (or ``any``) child.

Sample points are vectors whose coordinates are rationals or
:class:`IsolatingInterval` objects.  All arithmetic is exact: signs at
algebraic points come from rational interval arithmetic with a symbolic
zero test, never from floating point.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Optional, Sequence, Union

import gmpy2
from gmpy2 import mpq

from .ccd import key as table_key
from .poly import (
    Polynomial,
    VarOrder,
    format_polynomial,
    prem_chain,
    subresultant_chain,
    to_mpq,
)
from .tree import CylindricalTree, Kind

log = logging.getLogger(__name__)

MIN_WIDTH = mpq(1, 2**256)
_EAGER_ROUNDS = 8


class RealCADError(RuntimeError):
    """Internal inconsistency, e.g. two sections sharing a root."""


# ---- exact interval arithmetic -------------------------------------------------------------

class Box:
    """Closed rational interval."""

    __slots__ = ("lo", "hi")

    def __init__(self, lo, hi=None):
        self.lo = lo
        self.hi = lo if hi is None else hi

    def __add__(self, o):
        return Box(self.lo + o.lo, self.hi + o.hi)

    def __mul__(self, o):
        ps = (self.lo * o.lo, self.lo * o.hi, self.hi * o.lo, self.hi * o.hi)
        return Box(min(ps), max(ps))

    def scale(self, c):
        a, b = self.lo * c, self.hi * c
        return Box(a, b) if a <= b else Box(b, a)

    def __pow__(self, e: int):
        if e == 0:
            return Box(mpq(1))
        a, b = self.lo**e, self.hi**e
        if e % 2:
            return Box(a, b)
        if self.lo >= 0:
            return Box(a, b)
        if self.hi <= 0:
            return Box(b, a)
        return Box(mpq(0), max(a, b))

    def sign(self) -> Optional[int]:
        """Sign of every point of the box, or ``None`` if it contains 0 and is wider than a point."""
        if self.lo > 0:
            return 1
        if self.hi < 0:
            return -1
        if self.lo == self.hi == 0:
            return 0
        return None


def _box_eval(q: Polynomial, boxes: Sequence[Box]) -> Box:
    total = Box(mpq(0))
    for mon, c in q.terms():
        t = Box(mpq(1))
        for i, e in enumerate(mon):
            if e:
                t = t * boxes[i] ** e
        total = total + t.scale(to_mpq(c))
    return total


# ---- points -------------------------------------------------------------------------------

class IsolatingInterval:
    """One real root of ``defining`` over a base point.

    ``defining`` has level ``level``; its lower variables are algebraic
    coordinates of ``base`` (rational ones are already substituted).  The
    root is the only one in the open interval ``(lo, hi)`` and neither end
    is a root.  ``lo == hi`` marks an exact rational root.
    """

    __slots__ = ("defining", "level", "base", "lo", "hi", "_slo")

    def __init__(self, defining: Polynomial, level: int, base: "RealAlgebraicPoint", lo, hi, slo=None):
        self.defining = defining
        self.level = level
        self.base = base
        self.lo = mpq(lo)
        self.hi = mpq(hi)
        self._slo = slo

    @property
    def is_exact(self) -> bool:
        return self.lo == self.hi

    @property
    def width(self):
        return self.hi - self.lo

    def box(self) -> Box:
        return Box(self.lo, self.hi)

    def _sign_at(self, t) -> int:
        return sign_at(self.defining.subs({self.level: t}), self.base)

    def bisect(self) -> "IsolatingInterval":
        """Halve the interval in place (or pin an exact rational root)."""
        if self.is_exact:
            return self
        if self._slo is None:
            self._slo = self._sign_at(self.lo)
        m = (self.lo + self.hi) / 2
        sm = self._sign_at(m)
        if sm == 0:
            self.lo = self.hi = m
        elif sm == self._slo:
            self.lo = m
        else:
            self.hi = m
        return self

    def refine(self, width) -> "IsolatingInterval":
        """Bisect until ``hi - lo <= width``; returns ``self``."""
        width = mpq(width)
        while self.hi - self.lo > width:
            self.bisect()
        return self

    def to_json(self, order: VarOrder) -> dict:
        if self.is_exact:
            return {"rational": _fmt_rat(self.lo)}
        return {"poly": format_polynomial(self.defining), "lo": _fmt_rat(self.lo), "hi": _fmt_rat(self.hi)}

    def approx(self, digits: int = 20) -> float:
        return float((self.lo + self.hi) / 2)

    def __repr__(self):
        if self.is_exact:
            return f"IsolatingInterval({_fmt_rat(self.lo)})"
        return f"IsolatingInterval({format_polynomial(self.defining)}, {_fmt_rat(self.lo)}, {_fmt_rat(self.hi)})"


Coord = Union["gmpy2.mpq", IsolatingInterval]


class RealAlgebraicPoint:
    """Point of ``R^k`` with rational or isolated-root coordinates."""

    __slots__ = ("order", "coords")

    def __init__(self, order: VarOrder, coords: Sequence = ()):
        self.order = order
        self.coords = tuple(
            c.lo if isinstance(c, IsolatingInterval) and c.is_exact else (c if isinstance(c, IsolatingInterval) else to_mpq(c))
            for c in coords
        )

    def __len__(self):
        return len(self.coords)

    def prefix(self, k: int) -> "RealAlgebraicPoint":
        return RealAlgebraicPoint(self.order, self.coords[:k])

    def extend(self, c: Coord) -> "RealAlgebraicPoint":
        return RealAlgebraicPoint(self.order, self.coords + (c,))

    @property
    def is_rational(self) -> bool:
        return all(not isinstance(c, IsolatingInterval) for c in self._pinned())

    def _pinned(self):
        return [c.lo if isinstance(c, IsolatingInterval) and c.is_exact else c for c in self.coords]

    def rational_values(self) -> dict:
        return {i + 1: c for i, c in enumerate(self._pinned()) if not isinstance(c, IsolatingInterval)}

    def algebraic(self) -> list[IsolatingInterval]:
        return [c for c in self._pinned() if isinstance(c, IsolatingInterval)]

    def boxes(self) -> list[Box]:
        out = [Box(c) if not isinstance(c, IsolatingInterval) else c.box() for c in self._pinned()]
        out += [Box(mpq(0))] * (self.order.n - len(out))
        return out

    def refine(self):
        for c in self.algebraic():
            c.bisect()

    def max_width(self):
        return max((c.width for c in self.algebraic()), default=mpq(0))

    def approx(self) -> list[float]:
        return [float(c) if not isinstance(c, IsolatingInterval) else c.approx() for c in self._pinned()]

    def to_json(self) -> list:
        return [
            {"rational": _fmt_rat(c)} if not isinstance(c, IsolatingInterval) else c.to_json(self.order)
            for c in self._pinned()
        ]

    def __repr__(self):
        return f"RealAlgebraicPoint({list(self._pinned())!r})"


def _fmt_rat(q) -> str:
    q = mpq(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


# ---- signs -------------------------------------------------------------------------------

def sign_at(p: Polynomial, alpha: RealAlgebraicPoint, nonzero: bool = False) -> int:
    """Exact sign of ``p`` at ``alpha``.

    Parameters
    ----------
    p : Polynomial
        Polynomial of level at most ``len(alpha)``.
    alpha : RealAlgebraicPoint
        Sample point; its interval coordinates may be refined in place.
    nonzero : bool
        Caller guarantees ``p(alpha) != 0`` (skips the zero tests).

    Returns
    -------
    int
        -1, 0 or +1.
    """
    if p.level > len(alpha):
        raise ValueError("point has too few coordinates")
    q = p.subs(alpha.rational_values()) if p.level else p
    if q.is_constant:
        v = q.constant_value
        return (v > 0) - (v < 0)
    alg = alpha.algebraic()
    if not nonzero:
        if prem_chain(q, [c.defining for c in alg if c.level <= q.level]).is_zero:
            return 0
    rounds = 0
    while True:
        s = _box_eval(q, alpha.boxes()).sign()
        if s is not None:
            return s
        rounds += 1
        if rounds == _EAGER_ROUNDS and not nonzero:
            if _is_zero_at(q, alpha):
                return 0
            nonzero = True
        if alpha.max_width() < MIN_WIDTH:
            raise RealCADError(f"sign of {format_polynomial(p)} undecided at maximum precision")
        alpha.refine()


def _is_zero_at(q: Polynomial, alpha: RealAlgebraicPoint) -> bool:
    """Exact zero test for ``q`` (rational coordinates already substituted).

    The defining polynomial of the top coordinate may be reducible, so a
    nonzero pseudo-remainder does not prove ``q(alpha) != 0``.  Instead the
    gcd of ``q`` and the defining polynomial at the lower coordinates is
    obtained from their subresultant chain, and the root is tested against
    it by the signs at the isolating interval's ends.
    """
    if q.is_constant:
        return q.is_zero
    j = q.level
    coord = alpha.coords[j - 1]
    assert isinstance(coord, IsolatingInterval) and not coord.is_exact
    lower = alpha.prefix(j - 1)
    while q.level == j and sign_at(q.lc(j), lower) == 0:
        q = q - q.lc(j) * q.order.var(j) ** q.deg(j)
    if q.level < j:
        return sign_at(q, lower) == 0
    d = coord.defining
    chain = subresultant_chain(q, d, j)
    for i in range(chain.lam + 1):
        if sign_at(chain.principals[i], lower) != 0:
            break
    else:  # pragma: no cover - s_lam is an initial, nonzero here
        raise RealCADError("degenerate subresultant chain in zero test")
    if i == 0:
        return False
    g = chain.items[i]
    s_lo = sign_at(g.subs({j: coord.lo}), lower)
    s_hi = sign_at(g.subs({j: coord.hi}), lower)
    return s_lo != s_hi


# ---- root isolation ------------------------------------------------------------------------

def _taylor_shift(cs: list[Polynomial], a, b, order: VarOrder, k: int) -> list[Polynomial]:
    """Coefficients of ``(x+1)^d q((a x + b)/(x + 1))`` for ``q = sum cs[i] x^i``."""
    x = order.var(k)
    d = len(cs) - 1
    num = x * a + b
    den = x + 1
    total = order.zero()
    for i, c in enumerate(cs):
        if not c.is_zero:
            total = total + c * num**i * den ** (d - i)
    return total.coefficients(k) if total.level == k else [total]


def _variations(signs) -> int:
    s = [v for v in signs if v]
    return sum(1 for u, v in zip(s, s[1:]) if u != v)


def isolate_at(p: Polynomial, alpha: RealAlgebraicPoint) -> list[IsolatingInterval]:
    """Isolate the real roots of ``p(alpha, x_k)`` with ``k = len(alpha) + 1``.

    ``p`` must have level ``k``, a nonzero initial at ``alpha`` and a
    squarefree specialization.  Returns intervals in increasing order.
    """
    order = p.order
    k = len(alpha) + 1
    if p.level != k:
        raise ValueError("polynomial level must be one above the base point")
    q = p.subs(alpha.rational_values())
    cs = q.coefficients(k)
    d = len(cs) - 1
    if sign_at(cs[-1], alpha) == 0:
        raise RealCADError("initial vanishes at the base point")
    if d == 1 and q.level == k and cs[0].is_constant and cs[1].is_constant:
        r = -cs[0].constant_value / cs[1].constant_value
        return [IsolatingInterval(q, k, alpha, r, r)]
    # root bound from enclosures of the coefficients
    while True:
        boxes = alpha.boxes()
        lead = _box_eval(cs[-1], boxes)
        if lead.sign() is not None and lead.sign() != 0:
            break
        alpha.refine()
    low = min(abs(lead.lo), abs(lead.hi))
    big = max((max(abs(b.lo), abs(b.hi)) for b in (_box_eval(c, boxes) for c in cs[:-1])), default=mpq(0))
    bound = mpq(int(gmpy2.floor(big / low)) + 2)

    def value_sign(t):
        return sign_at(q.subs({k: t}), alpha)

    out: list[IsolatingInterval] = []

    def count(a, b):
        return _variations(sign_at(c, alpha) for c in _taylor_shift(cs, a, b, order, k))

    def solve(a, b, s_a):
        v = count(a, b)
        if v == 0:
            return
        if v == 1:
            out.append(IsolatingInterval(q, k, alpha, a, b, s_a))
            return
        m = (a + b) / 2
        s_m = value_sign(m)
        if s_m:
            solve(a, m, s_a)
            solve(m, b, s_m)
            return
        # exact root at m: fence it off with non-root ends holding no other root
        out.append(IsolatingInterval(q, k, alpha, m, m))
        eps = (b - a) / 4
        while value_sign(m - eps) == 0 or value_sign(m + eps) == 0 or count(m - eps, m + eps) != 1:
            eps /= 2
        solve(a, m - eps, s_a)
        solve(m + eps, b, value_sign(m + eps))

    s_lo = value_sign(-bound)
    solve(-bound, bound, s_lo)
    out.sort(key=lambda iv: (iv.lo, iv.hi))
    return out


def isolate_real_roots(p: Polynomial) -> list[IsolatingInterval]:
    """Isolating intervals of the real roots of a univariate squarefree ``p``.

    Exact rational roots are returned as degenerate intervals ``[r, r]``.
    """
    if p.is_constant:
        raise ValueError("constant polynomial has no roots to isolate")
    k = p.level
    if any(p.deg(j) for j in range(1, k)):
        raise ValueError("polynomial is not univariate")
    names = (p.order.names[k - 1],)
    sub = VarOrder(names)
    q = sub.from_terms({(m[k - 1],): c for m, c in p.terms()})
    return [IsolatingInterval(p, k, RealAlgebraicPoint(p.order, [0] * (k - 1)), iv.lo, iv.hi) for iv in isolate_at(q, RealAlgebraicPoint(sub, ()))]


def refine(iv: IsolatingInterval, width) -> IsolatingInterval:
    """Narrow ``iv`` to width at most ``width`` (in place)."""
    return iv.refine(width)


def _upper(c) -> "gmpy2.mpq":
    return c.hi if isinstance(c, IsolatingInterval) else c


def _lower(c) -> "gmpy2.mpq":
    return c.lo if isinstance(c, IsolatingInterval) else c


def _separate(a: IsolatingInterval, b: IsolatingInterval):
    """Refine two roots of different polynomials until their intervals are disjoint."""
    while not (_apart(a, b) or _apart(b, a)):
        if a.is_exact and b.is_exact:
            raise RealCADError("two sections share a root")
        if max(a.width, b.width) < MIN_WIDTH:
            raise RealCADError("sections could not be separated")
        for c in (a, b):
            if not c.is_exact:
                other = b if c is a else a
                if other.is_exact and c.lo < other.lo < c.hi and c._sign_at(other.lo) == 0:
                    raise RealCADError("two sections share a root")
                c.bisect()


def merge_roots(groups: Sequence[Sequence[IsolatingInterval]]) -> list[tuple[int, int, IsolatingInterval]]:
    """Merge per-polynomial root lists into one strictly ordered list.

    Returns ``(group, index_in_group, interval)`` triples sorted by root,
    with pairwise disjoint intervals.
    """
    items = [(g, i, iv) for g, ivs in enumerate(groups) for i, iv in enumerate(ivs)]
    changed = True
    while changed:
        changed = False
        items.sort(key=lambda t: (t[2].lo, t[2].hi))
        for (_, _, a), (_, _, b) in zip(items, items[1:]):
            if not _apart(a, b):
                _separate(a, b)
                changed = True
    return items


def _apart(a: IsolatingInterval, b: IsolatingInterval) -> bool:
    # a shared end is allowed: it is a root of neither polynomial
    return a.hi < b.lo or (a.hi == b.lo and not a.is_exact and not b.is_exact)


# ---- cells ---------------------------------------------------------------------------------

def _rational_root(iv: IsolatingInterval):
    """The root of ``iv`` if it is rational (univariate ``defining`` only)."""
    if iv.is_exact:
        return iv.lo
    gi = iv.defining.order._gi(iv.level)
    _, factors = iv.defining._p.factor_list()
    for f, _ in factors:
        if f.degree(gi) == 1:
            a = f.coeff_wrt(gi, 1)
            b = f.coeff_wrt(gi, 0)
            r = -mpq(b.LC if b else 0) / mpq(a.LC)
            if iv.lo < r < iv.hi:
                return r
    return None


@dataclass(frozen=True)
class SectionBound:
    """The ``root``-th real root (1-based) of ``poly`` in its main variable."""

    poly: Polynomial
    root: int

    def render(self, order: VarOrder) -> str:
        k = self.poly.level
        if self.poly.deg(k) == 1 and self.poly.lc(k).is_constant:
            sol = -self.poly.coeff(k, 0) * order.const(1 / self.poly.lc(k).constant_value)
            return format_polynomial(sol)
        if not any(self.poly.deg(j) for j in range(1, k)):
            rs = isolate_real_roots(self.poly)
            if len(rs) >= self.root:
                r = _rational_root(rs[self.root - 1])
                if r is not None:
                    return _fmt_rat(r)
        return f"root({format_polynomial(self.poly)}, {self.root})"

    def to_json(self) -> dict:
        return {"poly": format_polynomial(self.poly), "root": self.root}


@dataclass
class Condition:
    level: int
    kind: str  # lt | gt | eq | between | any
    bounds: tuple = ()

    def render(self, order: VarOrder) -> str:
        v = order.names[self.level - 1]
        b = [x.render(order) for x in self.bounds]
        if self.kind == "any":
            return f"any {v}"
        if self.kind == "eq":
            return f"{v} = {b[0]}"
        if self.kind == "lt":
            return f"{v} < {b[0]}"
        if self.kind == "gt":
            return f"{v} > {b[0]}"
        return f"{b[0]} < {v} < {b[1]}"

    def to_json(self) -> dict:
        return {"level": self.level, "kind": self.kind, "bounds": [x.to_json() for x in self.bounds]}


@dataclass
class CADCell:
    """A cell of a stack; leaves of the cell tree have level ``n``."""

    index: tuple
    condition: Optional[Condition]
    sample: RealAlgebraicPoint
    node: int  # key of the complex-tree node the cell refines
    parent: Optional["CADCell"] = None
    children: list = field(default_factory=list)
    signs: dict = field(default_factory=dict)

    @property
    def level(self) -> int:
        return len(self.index)

    @property
    def is_section(self) -> bool:
        return bool(self.index) and self.index[-1] % 2 == 0

    @property
    def conditions(self) -> list[Condition]:
        out = []
        c = self
        while c is not None and c.condition is not None:
            out.append(c.condition)
            c = c.parent
        return out[::-1]

    def to_json(self, order: VarOrder) -> dict:
        return {
            "index": list(self.index),
            "conditions": [c.to_json() for c in self.conditions],
            "signs": {format_polynomial(p): s for p, s in self.signs.items()},
            "sample": self.sample.to_json(),
        }


class CAD:
    """Cell tree of an ``F``-invariant CAD of ``R^n``."""

    def __init__(self, order: VarOrder, polys: Sequence[Polynomial], root: CADCell):
        self.order = order
        self.polys = list(polys)
        self.root = root

    @property
    def cells(self) -> list[CADCell]:
        """Full-dimensional-index leaf cells in stack order."""
        out = []

        def walk(c):
            if not c.children:
                out.append(c)
            for ch in c.children:
                walk(ch)

        walk(self.root)
        return out

    def all_cells(self) -> list[CADCell]:
        out = []

        def walk(c):
            out.append(c)
            for ch in c.children:
                walk(ch)

        walk(self.root)
        return out

    def to_json(self) -> dict:
        return {"vars": list(self.order.names), "cells": [c.to_json(self.order) for c in self.cells]}

    def render(self) -> str:
        return render_cad(self)


def _node_children(tree: CylindricalTree, key: int):
    kids = [tree[c] for c in tree[key].children]
    eqs = [c for c in kids if c.kind is Kind.EQ]
    rest = [c for c in kids if c.kind is not Kind.EQ]
    if len(rest) != 1:
        raise RealCADError("complex node lacks a unique non-equation child; tree is not complete")
    return eqs, rest[0]


def _stack(tree: CylindricalTree, cell: CADCell):
    """Children cells of ``cell`` (roots, section owners) in stack order."""
    k = cell.level + 1
    alpha = cell.sample
    eqs, other = _node_children(tree, cell.node)
    groups = [isolate_at(c.poly, alpha) for c in eqs]
    merged = merge_roots(groups)
    out = []
    for j in range(len(merged) + 1):
        lower = merged[j - 1] if j > 0 else None
        upper = merged[j] if j < len(merged) else None
        lb = SectionBound(eqs[lower[0]].poly, lower[1] + 1) if lower else None
        ub = SectionBound(eqs[upper[0]].poly, upper[1] + 1) if upper else None
        if lower and upper:
            cond = Condition(k, "between", (lb, ub))
            t = (_upper(lower[2]) + _lower(upper[2])) / 2
        elif upper:
            cond = Condition(k, "lt", (ub,))
            t = mpq(int(gmpy2.floor(_lower(upper[2])))) - 1
        elif lower:
            cond = Condition(k, "gt", (lb,))
            t = mpq(int(gmpy2.ceil(_upper(lower[2])))) + 1
        else:
            cond = Condition(k, "any")
            t = mpq(0)
        out.append(CADCell(cell.index + (2 * j + 1,), cond, alpha.extend(t), other.key, cell))
        if upper:
            g, i, iv = upper
            out.append(CADCell(cell.index + (2 * j + 2,), Condition(k, "eq", (ub,)), alpha.extend(iv), eqs[g].key, cell))
    return out


def make_semi_algebraic(tree: CylindricalTree, polys: Sequence[Polynomial]) -> CAD:
    """Lift a complete ``F``-invariant complex tree to an ``F``-invariant CAD.

    Parameters
    ----------
    tree : CylindricalTree
        Complete tree from :func:`~inccad.ccd.cylindrical_decompose`.
    polys : sequence of Polynomial
        The set ``F``; each leaf cell records the sign of every member.

    Returns
    -------
    CAD
        Tree of cells; :attr:`CAD.cells` lists the level-``n`` cells.
    """
    order = tree.order
    root = CADCell((), None, RealAlgebraicPoint(order, ()), tree.root)
    todo = [root]
    while todo:
        cell = todo.pop()
        if cell.level == order.n:
            leaf = tree[cell.node]
            for f in polys:
                s = leaf.signs.get(table_key(f))
                if s == 0:
                    cell.signs[f] = 0
                else:
                    cell.signs[f] = sign_at(f, cell.sample, nonzero=s == 1)
            continue
        cell.children = _stack(tree, cell)
        todo.extend(reversed(cell.children))
    return CAD(order, polys, root)


def cad(system, order: Optional[VarOrder] = None) -> CAD:
    """``F``-invariant CAD of ``R^n`` for a plain system or polynomial list."""
    from .ccd import _unpack, cylindrical_decompose

    polys, order = _unpack(system, order)
    return make_semi_algebraic(cylindrical_decompose(polys, order), polys)


# ---- point location ------------------------------------------------------------------------

class _RootCache:
    def __init__(self, order):
        self.order = order
        self.data = {}

    def roots(self, poly: Polynomial, prefix: tuple):
        k = (poly, prefix)
        if k not in self.data:
            self.data[k] = isolate_at(poly, RealAlgebraicPoint(self.order, prefix))
        return self.data[k]


def _compare(t, iv: IsolatingInterval) -> int:
    """Sign of ``t - root`` for a rational ``t``."""
    while True:
        if t < iv.lo:
            return -1
        if t > iv.hi:
            return 1
        if iv.is_exact:
            return 0
        if t == iv.lo or t == iv.hi:
            return -1 if t == iv.lo else 1  # ends are not roots
        if iv._sign_at(t) == 0:
            return 0
        iv.bisect()


def condition_holds(cond: Condition, u: Sequence, cache: _RootCache) -> bool:
    """Whether ``u`` (a rational point of length >= level) satisfies ``cond``."""
    k = cond.level
    prefix = tuple(to_mpq(c) for c in u[: k - 1])
    t = to_mpq(u[k - 1])

    def cmp(b: SectionBound):
        rs = cache.roots(b.poly, prefix)
        if len(rs) < b.root:
            return None
        return _compare(t, rs[b.root - 1])

    if cond.kind == "any":
        return True
    cs = [cmp(b) for b in cond.bounds]
    if None in cs:
        return False
    if cond.kind == "eq":
        return cs[0] == 0
    if cond.kind == "lt":
        return cs[0] < 0
    if cond.kind == "gt":
        return cs[0] > 0
    return cs[0] > 0 and cs[1] < 0


def classify_point(cad_: CAD, u: Sequence, strict: bool = True) -> CADCell:
    """Leaf cell containing the rational point ``u``.

    With ``strict`` every sibling condition is evaluated and exactly one
    must hold at each level; otherwise :class:`RealCADError` is raised.
    """
    cache = _RootCache(cad_.order)
    cell = cad_.root
    while cell.children:
        hits = []
        for ch in cell.children:
            if condition_holds(ch.condition, u, cache):
                hits.append(ch)
                if not strict:
                    break
        if len(hits) != 1:
            raise RealCADError(f"point {list(map(str, u))} lies in {len(hits)} cells at level {cell.level + 1}")
        cell = hits[0]
    return cell


# ---- rendering -------------------------------------------------------------------------------

def _sign_text(p: Polynomial, s: int) -> str:
    return f"{format_polynomial(p)} {'<' if s < 0 else '=' if s == 0 else '>'} 0"


def render_cad(cad_: CAD) -> str:
    """Nested-brace text: one line per cell, leaf signs after ``:``."""
    order = cad_.order
    lines = ["{"]

    def walk(c: CADCell, indent: int):
        pad = "  " * indent
        head = c.condition.render(order)
        if c.children:
            lines.append(f"{pad}{head} {{")
            for ch in c.children:
                walk(ch, indent + 1)
            lines.append(f"{pad}}}")
        else:
            signs = " & ".join(_sign_text(p, s) for p, s in c.signs.items())
            lines.append(f"{pad}{head} : {signs}" if signs else f"{pad}{head}")

    for ch in cad_.root.children:
        walk(ch, 1)
    lines.append("}")
    return "\n".join(lines)
