"""
Exact multivariate polynomials over the rationals with a fixed variable order.

Every polynomial lives in ``Q[x_1 < ... < x_n]`` for some :class:`VarOrder`
and is viewed recursively in its greatest variable (the *main variable*).
Arithmetic is delegated to sympy's sparse ``PolyElement`` (gmpy2-backed), so
this module only adds the recursive accessors, canonical normalization and
the pseudo-division / subresultant machinery used by the decomposition code.

Levels are 1-based: ``x_1`` has level 1 and constants have level 0.

>>> order = VarOrder(["x", "y"])
>>> x, y = order.gens()
>>> p = y**2 + x
>>> p.mvar, p.level, p.mdeg, str(p.tail)
('y', 2, 2, 'x')
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence, Union

import gmpy2
from sympy.polys.domains import QQ
from sympy.polys.orderings import lex
from sympy.polys.rings import PolyRing

mpq = gmpy2.mpq

Number = Union[int, "gmpy2.mpq", "fractions.Fraction"]  # noqa: F821

__all__ = [
    "VarOrder",
    "Polynomial",
    "SubresultantChain",
    "pseudo_divide",
    "prem_chain",
    "normalize",
    "primitive_part",
    "squarefree_part_univariate",
    "subresultant_chain",
    "to_mpq",
]


def to_mpq(c) -> "gmpy2.mpq":
    """Convert an int / Fraction / mpq / sympy rational to ``gmpy2.mpq``."""
    if isinstance(c, type(mpq(0))):
        return c
    if hasattr(c, "numerator") and hasattr(c, "denominator"):
        return mpq(int(c.numerator), int(c.denominator))
    if hasattr(c, "p") and hasattr(c, "q"):  # sympy Rational
        return mpq(int(c.p), int(c.q))
    return mpq(c)


@lru_cache(maxsize=None)
def _ring_for(names: tuple[str, ...]) -> PolyRing:
    # Generators reversed so that sympy's lex order is "x_n most significant",
    # which is the recursive order used everywhere here.
    if not names:
        return PolyRing("_c", QQ, lex)
    return PolyRing(list(reversed(names)), QQ, lex)


class VarOrder:
    """An ordered list of variable names ``x_1 < ... < x_n``."""

    __slots__ = ("names", "_index", "ring")

    def __init__(self, names: Iterable[str]):
        names = tuple(names)
        if not names:
            raise ValueError("a variable order needs at least one variable")
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate variable names in {names!r}")
        for v in names:
            if not v or not (v[0].isalpha() and v.replace("_", "a").isalnum()):
                raise ValueError(f"invalid variable name {v!r}")
        self.names = names
        self._index = {v: i for i, v in enumerate(names)}
        self.ring = _ring_for(names)

    @property
    def n(self) -> int:
        return len(self.names)

    def level_of(self, var: Union[str, int]) -> int:
        """1-based level of a variable given by name or by level."""
        if isinstance(var, str):
            try:
                return self._index[var] + 1
            except KeyError:
                raise ValueError(f"unknown variable {var!r}") from None
        if not 1 <= var <= self.n:
            raise ValueError(f"level {var} out of range 1..{self.n}")
        return var

    def _gi(self, var: Union[str, int]) -> int:
        # generator index inside the (reversed) sympy ring
        return self.n - self.level_of(var)

    def gens(self) -> list["Polynomial"]:
        return [Polynomial(self, g) for g in reversed(self.ring.gens)] if self.n else []

    def var(self, name: Union[str, int]) -> "Polynomial":
        return Polynomial(self, self.ring.gens[self._gi(name)])

    def const(self, c) -> "Polynomial":
        return Polynomial(self, self.ring(to_mpq(c)))

    def zero(self) -> "Polynomial":
        return Polynomial(self, self.ring.zero)

    def one(self) -> "Polynomial":
        return Polynomial(self, self.ring.one)

    def from_terms(self, terms: dict) -> "Polynomial":
        """Build from ``{exponent tuple in x_1..x_n order: coefficient}``."""
        data = {}
        for mon, c in terms.items():
            if len(mon) != self.n:
                raise ValueError("exponent tuple has wrong length")
            c = to_mpq(c)
            if c:
                key = tuple(reversed(mon))
                data[key] = data.get(key, mpq(0)) + c
        return Polynomial(self, self.ring.from_dict({k: v for k, v in data.items() if v}))

    def __eq__(self, other):
        return isinstance(other, VarOrder) and other.names == self.names

    def __hash__(self):
        return hash(self.names)

    def __repr__(self):
        return f"VarOrder({list(self.names)!r})"


class Polynomial:
    """Immutable polynomial of ``Q[x_1 < ... < x_n]``.

    Equality is structural (same order, same terms); hashing is consistent
    with equality so polynomials can key attribute tables.
    """

    __slots__ = ("order", "_p", "_hash", "_level")

    def __init__(self, order: VarOrder, elem):
        self.order = order
        self._p = elem
        self._hash = None
        self._level = None

    # ---- construction helpers -------------------------------------------------
    def _wrap(self, elem) -> "Polynomial":
        return Polynomial(self.order, elem)

    def _coerce(self, other):
        if isinstance(other, Polynomial):
            if other.order != self.order:
                raise ValueError("polynomials over different variable orders")
            return other._p
        return self.order.ring(to_mpq(other))

    # ---- arithmetic ----------------------------------------------------------
    def __add__(self, other):
        return self._wrap(self._p + self._coerce(other))

    __radd__ = __add__

    def __sub__(self, other):
        return self._wrap(self._p - self._coerce(other))

    def __rsub__(self, other):
        return self._wrap(self._coerce(other) - self._p)

    def __mul__(self, other):
        return self._wrap(self._p * self._coerce(other))

    __rmul__ = __mul__

    def __neg__(self):
        return self._wrap(-self._p)

    def __pow__(self, e: int):
        if e < 0:
            raise ValueError("negative exponent")
        return self._wrap(self._p**e)

    def exquo(self, other) -> "Polynomial":
        """Exact quotient; raises if ``other`` does not divide ``self``."""
        return self._wrap(self._p.exquo(self._coerce(other)))

    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return self.order == other.order and self._p == other._p
        if isinstance(other, (int,)) or hasattr(other, "denominator"):
            return self._p == self.order.ring(to_mpq(other))
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.order.names, frozenset(self._p.items())))
        return self._hash

    def __bool__(self):
        return bool(self._p)

    # ---- predicates ------------------------------------------------------------
    @property
    def is_zero(self) -> bool:
        return not self._p

    @property
    def is_constant(self) -> bool:
        return self.level == 0

    @property
    def constant_value(self) -> "gmpy2.mpq":
        if not self.is_constant:
            raise ValueError("not a constant")
        return to_mpq(self._p.coeff(1)) if self._p else mpq(0)

    # ---- recursive view ------------------------------------------------------
    @property
    def level(self) -> int:
        if self._level is None:
            lvl = 0
            if self._p:
                degs = self._p.degrees()
                for i, d in enumerate(degs):
                    if d > 0:
                        lvl = self.order.n - i
                        break
            self._level = lvl
        return self._level

    @property
    def mvar(self) -> str:
        if self.level == 0:
            raise ValueError("constant polynomial has no main variable")
        return self.order.names[self.level - 1]

    def deg(self, var: Union[str, int, None] = None) -> int:
        """Degree in ``var`` (main variable when omitted); ``-1`` for zero."""
        if var is None:
            return self.mdeg
        if not self._p:
            return -1
        return self._p.degree(self.order._gi(var))

    def coeff(self, var: Union[str, int], i: int) -> "Polynomial":
        """Coefficient of ``var**i`` as a polynomial in the other variables."""
        return self._wrap(self._p.coeff_wrt(self.order._gi(var), i))

    def coefficients(self, var: Union[str, int, None] = None) -> list["Polynomial"]:
        """Coefficients ``[c_0, ..., c_d]`` with respect to ``var``."""
        if var is None:
            var = self.level
        d = self.deg(var)
        return [self.coeff(var, i) for i in range(d + 1)]

    def lc(self, var: Union[str, int]) -> "Polynomial":
        d = self.deg(var)
        if d < 0:
            return self
        return self.coeff(var, d)

    @property
    def mdeg(self) -> int:
        if self.level == 0:
            raise ValueError("constant polynomial has no main variable")
        return self.deg(self.level)

    @property
    def init(self) -> "Polynomial":
        if self.level == 0:
            raise ValueError("constant polynomial has no main variable")
        return self.lc(self.level)

    @property
    def tail(self) -> "Polynomial":
        if self.level == 0:
            raise ValueError("constant polynomial has no main variable")
        k = self.level
        return self - self.init * self.order.var(k) ** self.mdeg

    @property
    def der(self) -> "Polynomial":
        if self.level == 0:
            raise ValueError("constant polynomial has no main variable")
        return self.diff(self.level)

    def diff(self, var: Union[str, int]) -> "Polynomial":
        return self._wrap(self._p.diff(self.order.ring.gens[self.order._gi(var)]))

    # ---- evaluation ------------------------------------------------------------
    def subs(self, values: dict) -> "Polynomial":
        """Substitute rationals for variables (keys: names or levels)."""
        p = self._p
        for var, val in values.items():
            p = p.subs(self.order.ring.gens[self.order._gi(var)], to_mpq(val))
        return self._wrap(p)

    def evaluate(self, point: Sequence) -> "gmpy2.mpq":
        """Evaluate at ``point = (u_1, ..., u_k)`` with ``k >= level``."""
        lvl = self.level
        if len(point) < lvl:
            raise ValueError("point has too few coordinates")
        vals = {i + 1: point[i] for i in range(lvl)}
        return self.subs(vals).constant_value

    def terms(self) -> list[tuple[tuple[int, ...], "gmpy2.mpq"]]:
        """Terms as ``(exponents in x_1..x_n order, coeff)``, canonical order."""
        out = [(tuple(reversed(m)), c) for m, c in self._p.terms()]
        return out  # sympy lex on reversed gens == descending canonical order

    def __str__(self):
        return format_polynomial(self)

    def __repr__(self):
        return f"Polynomial({format_polynomial(self)!r})"


def format_polynomial(p: Polynomial) -> str:
    """Canonical text: terms by descending lex exponent with ``x_n`` major."""
    if p.is_zero:
        return "0"
    names = p.order.names
    pieces = []
    for mon, c in p.terms():
        factors = []
        for name, e in zip(names, mon):
            if e == 1:
                factors.append(name)
            elif e > 1:
                factors.append(f"{name}^{e}")
        neg = c < 0
        a = -c if neg else c
        if factors:
            coef = "" if a == 1 else f"{_fmt_q(a)}*"
            body = coef + "*".join(factors)
        else:
            body = _fmt_q(a)
        pieces.append((neg, body))
    out = ("-" if pieces[0][0] else "") + pieces[0][1]
    for neg, body in pieces[1:]:
        out += (" - " if neg else " + ") + body
    return out


def _fmt_q(a) -> str:
    a = to_mpq(a)
    if a.denominator == 1:
        return str(a.numerator)
    return f"{a.numerator}/{a.denominator}"


# ---------------------------------------------------------------------------
# normalization


def normalize(p: Polynomial) -> Polynomial:
    """Integer-primitive associate of ``p`` with positive leading coefficient.

    Nonzero constants normalize to ``1``; zero is rejected.
    """
    if p.is_zero:
        raise ValueError("cannot normalize the zero polynomial")
    _, q = p._p.clear_denoms()
    _, q = q.primitive()
    if q.LC < 0:
        q = -q
    return p._wrap(q)


def primitive_part(p: Polynomial) -> Polynomial:
    """Primitive part with respect to the main variable, normalized.

    The content (gcd of the coefficients in the lower variables) divides the
    initial, so dividing it out does not change the zero set wherever the
    initial is invertible.
    """
    if p.level == 0:
        return normalize(p)
    coeffs = [c for c in p.coefficients() if not c.is_zero]
    g = coeffs[0]._p
    for c in coeffs[1:]:
        if g.is_ground:
            break
        g = g.gcd(c._p)
    if not g.is_ground:
        p = p._wrap(p._p.exquo(g))
    return normalize(p)


def is_one(p: Polynomial) -> bool:
    return p.is_constant and not p.is_zero


# ---------------------------------------------------------------------------
# pseudo division


def pseudo_divide(p: Polynomial, d: Polynomial, var: Union[str, int, None] = None):
    """Classic pseudo-division ``lc(d)^e * p = q*d + r`` with ``e = deg p - deg d + 1``.

    Returns ``(q, r)`` with ``deg(r, var) < deg(d, var)``.  When
    ``deg p < deg d`` the result is ``(0, p)``.
    """
    if d.is_zero:
        raise ZeroDivisionError("pseudo-division by zero")
    if var is None:
        var = d.level
    gi = p.order._gi(var)
    if d.deg(var) < 1:
        raise ValueError("divisor must have positive degree in the division variable")
    if p.deg(var) < d.deg(var):
        return p.order.zero(), p
    q, r = _pdiv(p._p, d._p, gi)
    return p._wrap(q), p._wrap(r)


def _pdiv(f, g, gi):
    # sympy's PolyElement.pdiv returns a wrong quotient for non-first generators
    ring = f.ring
    xg = ring.gens[gi]
    dg = g.degree(gi)
    lcg = g.coeff_wrt(gi, dg)
    e = f.degree(gi) - dg + 1
    q, r = ring.zero, f
    while r and r.degree(gi) >= dg:
        dr = r.degree(gi)
        t = r.coeff_wrt(gi, dr) * xg ** (dr - dg)
        q = q * lcg + t
        r = r * lcg - t * g
        e -= 1
    if e:
        m = lcg**e
        q, r = q * m, r * m
    return q, r


def pquo(p: Polynomial, d: Polynomial, var=None) -> Polynomial:
    return pseudo_divide(p, d, var)[0]


def prem(p: Polynomial, d: Polynomial, var=None) -> Polynomial:
    return pseudo_divide(p, d, var)[1]


def prem_chain(p: Polynomial, chain: Sequence[Polynomial]) -> Polynomial:
    """Iterated pseudo-remainder of ``p`` by a triangular set.

    ``chain`` may be given in any order; it is reduced from the highest
    main variable downward.  A zero result certifies that ``p`` vanishes on
    the quasi-component of the chain.
    """
    r = p
    for t in sorted(chain, key=lambda q: q.level, reverse=True):
        if r.is_zero:
            break
        if t.level == 0:
            continue
        if r.deg(t.level) >= t.mdeg:
            r = prem(r, t, t.level)
    return r


# ---------------------------------------------------------------------------
# squarefree part


def squarefree_part_univariate(p: Polynomial) -> Polynomial:
    """``p / gcd(p, p')`` normalized, for a non-constant univariate ``p``."""
    if p.level == 0:
        raise ValueError("constant polynomial has no squarefree part")
    k = p.level
    for i in range(p.order.n):
        if i + 1 != k and p.deg(i + 1) > 0:
            raise ValueError("squarefree_part_univariate expects a univariate polynomial")
    g = p._p.gcd(p.der._p)
    return normalize(p._wrap(p._p.exquo(g)))


# ---------------------------------------------------------------------------
# subresultants


@dataclass(frozen=True)
class SubresultantChain:
    """Subresultant chain of ``p`` and ``f`` with respect to ``var``.

    ``items[i]`` is ``S_i`` and ``principals[i]`` is ``s_i`` for
    ``0 <= i <= lam + 1`` where ``lam = min(deg p, deg f)``.  ``S_lam`` is the
    operand of smaller degree (``f`` on ties) and ``S_{lam+1}`` the other one;
    their principal coefficients are the corresponding initials.
    """

    var: int
    items: tuple
    principals: tuple

    @property
    def lam(self) -> int:
        return len(self.items) - 2

    def resultant(self) -> Polynomial:
        return self.items[0]


def _lazard(c, lc_b, s, n):
    # lc_b^n * c / s^n with exact divisions
    if n == 0:
        return c
    return (lc_b**n * c).exquo(s**n)


def _subresultants_core(a, b, gi):
    """Ducos/Lazard subresultant chain on raw ring elements, deg a >= deg b >= 1.

    Returns ``{j: S_j}`` for the nonzero ``S_j`` with ``j < deg b``.
    """
    out = {}
    da, db = a.degree(gi), b.degree(gi)

    def lcx(q):
        return q.coeff_wrt(gi, q.degree(gi))

    s = lcx(b) ** (da - db)
    A = b
    B = a.prem(-b, gi)
    while True:
        if not B:
            return out
        d = A.degree(gi)
        e = B.degree(gi)
        out[d - 1] = B
        delta = d - e
        if delta > 1:
            C = _lazard(B, lcx(B), s, delta - 1)
            out[e] = C
        else:
            C = B
        if e == 0:
            return out
        B = A.prem(-B, gi).exquo(s**delta * lcx(A))
        A = C
        s = lcx(A)


def subresultant_chain(p: Polynomial, f: Polynomial, var: Union[str, int, None] = None) -> SubresultantChain:
    """Full subresultant chain ``S_0..S_{lam+1}`` of ``p`` and ``f`` in ``var``.

    ``var`` defaults to the common main variable and must be the main
    variable of both operands.
    """
    if var is None:
        var = f.level
    k = p.order.level_of(var)
    if p.level != k or f.level != k:
        raise ValueError("variable is not the main variable of both polynomials")
    return _chain_cached(p, f, k)


@lru_cache(maxsize=4096)
def _chain_cached(p: Polynomial, f: Polynomial, k: int) -> SubresultantChain:
    order = p.order
    gi = order._gi(k)
    dp, df = p.deg(k), f.deg(k)
    lam = min(dp, df)
    big, small = (p, f) if dp >= df else (f, p)
    core = _subresultants_core(big._p, small._p, gi)
    items = []
    for j in range(lam):
        items.append(Polynomial(order, core[j]) if j in core else order.zero())
    items.append(small)
    items.append(big)
    principals = [items[j].coeff(k, j) for j in range(lam)]
    principals.append(small.init)
    principals.append(big.init)
    return SubresultantChain(k, tuple(items), tuple(principals))
