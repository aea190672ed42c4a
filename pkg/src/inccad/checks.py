"""
Sampling checks of the structural properties of trees and CADs.

Every check returns a :class:`CheckResult`.  Points of a path's complex zero
set are produced level by level: free coordinates are random rationals,
equation coordinates are numerical roots of the section
polynomial at the coordinates below, computed with enough digits for the
largest coefficient in the tree.  When a point has only rational
coordinates the comparisons are exact.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Optional, Sequence

import mpmath
from gmpy2 import mpq

from . import ccd
from .ccd import key as table_key
from .poly import Polynomial, format_polynomial, prem_chain
from .realcad import CAD, RealCADError, classify_point
from .tree import CylindricalTree, Kind, Path

DPS = 60


def _tol():
    # half the working digits: 1e-30 at the default precision
    return mpmath.mpf(10) ** -(mpmath.mp.dps // 2)


@dataclass
class CheckResult:
    name: str
    passed: int = 0
    failed: int = 0
    notes: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.failed == 0

    def record(self, good: bool, note: Optional[str] = None):
        if good:
            self.passed += 1
        else:
            self.failed += 1
            if note and len(self.notes) < 5:
                self.notes.append(note)

    def line(self) -> str:
        tail = f" ({'; '.join(self.notes)})" if self.notes else ""
        return f"{'PASS' if self.ok else 'FAIL'} {self.name}: {self.passed}/{self.passed + self.failed}{tail}"


# ---- numerics -----------------------------------------------------------------------------

def random_rational(rng: random.Random, radius: int = 4, max_den: int = 64) -> "mpq":
    den = rng.randint(1, max_den)
    return mpq(rng.randint(-radius * den, radius * den), den)


def _num(c):
    if isinstance(c, type(mpq(0))):
        return mpmath.mpf(int(c.numerator)) / int(c.denominator)
    return c


def num_eval(p: Polynomial, u: Sequence):
    """Value of ``p`` at a point with rational or mpmath coordinates."""
    if all(isinstance(c, type(mpq(0))) for c in u[: p.level]):
        return _num(p.subs({i + 1: u[i] for i in range(p.level)}).constant_value)
    return _eval_bound(p, u)[0]


def _eval_bound(p: Polynomial, u: Sequence):
    # value and sum |c| |u|^m, the scale of rounding errors in the value
    total, bound = mpmath.mpc(0), mpmath.mpf(0)
    vals = [_num(c) for c in u]
    for mon, c in p.terms():
        t = _num(mpq(c))
        for i, e in enumerate(mon):
            if e:
                t *= vals[i] ** e
        total += t
        bound += abs(t)
    return total, bound


def _value(p: Polynomial, u: Sequence):
    # p(u), or exactly 0 when it vanishes (relative to the rounding scale)
    if p.is_constant:
        return _num(mpq(p.constant_value)) if not p.is_zero else mpmath.mpf(0)
    if all(isinstance(c, type(mpq(0))) for c in u[: p.level]):
        return num_eval(p, u)
    v, bound = _eval_bound(p, u)
    return mpmath.mpf(0) if abs(v) <= _tol() * max(bound, 1) else v


def num_is_zero(p: Polynomial, u: Sequence) -> bool:
    """Whether ``p(u)`` vanishes: exactly for rational ``u``, else relative to the size of its terms."""
    return _value(p, u) == 0


def num_coeffs(p: Polynomial, k: int, u: Sequence) -> list:
    """Coefficients of ``p`` in ``x_k`` (low to high) evaluated at ``u``; vanishing ones are exactly 0."""
    cs = p.coefficients(k) if p.level == k else [p]
    return [_value(c, u) for c in cs]


def precision_for(tree: CylindricalTree, polys: Sequence[Polynomial] = ()) -> int:
    """Working digits for sampling ``tree``: 60 plus twice the longest coefficient."""
    digits = 0
    stack = [tree.root]
    while stack:
        node = tree[stack.pop()]
        stack.extend(node.children)
        qs = list(polys) + ([node.poly] if node.poly is not None else []) + list(node.gcd.values())
        for q in qs:
            for _, c in q.terms():
                c = mpq(c)
                digits = max(digits, len(str(abs(c.numerator))), len(str(c.denominator)))
    return DPS + 2 * digits


def _trim(cs: list) -> list:
    scale = max((abs(c) for c in cs), default=0) or 1
    cs = list(cs)
    while cs and abs(cs[-1]) <= _tol() * scale:
        cs.pop()
    return cs


def num_gcd_degree(a: list, b: list) -> int:
    """Degree of the gcd of two numeric polynomials (coefficients low to high)."""
    a, b = _trim(a), _trim(b)
    if not a:
        return len(b) - 1 if b else -1
    if not b:
        return len(a) - 1
    m, n = len(a) - 1, len(b) - 1
    if m == 0 or n == 0:
        return 0
    size = m + n
    rows = []
    for i in range(n):
        rows.append([0] * i + a[::-1] + [0] * (size - m - 1 - i))
    for i in range(m):
        rows.append([0] * i + b[::-1] + [0] * (size - n - 1 - i))
    sv = mpmath.svd_c(mpmath.matrix(rows), compute_uv=False)
    top = max(abs(s) for s in sv)
    rank = sum(1 for s in sv if abs(s) > top * mpmath.mpf(10) ** -25)
    return size - rank


def num_divides(g: list, a: list) -> bool:
    """Whether ``g`` divides ``a`` numerically (remainder tiny relative to ``a``)."""
    g, a = _trim(g), _trim(a)
    if not a:
        return True
    if not g:
        return False
    r = list(a)
    dg = len(g) - 1
    while len(r) - 1 >= dg and r:
        c = r[-1] / g[-1]
        shift = len(r) - 1 - dg
        for i, gc in enumerate(g):
            r[shift + i] -= c * gc
        r.pop()
    scale = max(abs(c) for c in a)
    return all(abs(c) <= scale * mpmath.mpf(10) ** -25 for c in r)


# ---- sampling the complex zero set of a path -------------------------------------------------

class SampleFailure(RuntimeError):
    pass


_ROOTS: dict = {}


def _roots(poly: Polynomial, cs: list, u: Sequence) -> list:
    # chains of equations revisit the same lower coordinates on every sample
    k = (poly, tuple(u), mpmath.mp.dps)
    if k not in _ROOTS:
        if len(_ROOTS) > 4096:
            _ROOTS.clear()
        _ROOTS[k] = mpmath.polyroots(cs[::-1], maxsteps=400, extraprec=200)
    return _ROOTS[k]


def sample_path(tree: CylindricalTree, path: Sequence[int], rng: random.Random, tries: int = 20) -> list:
    """A point of ``Z(path)``; coordinates are ``mpq`` or ``mpmath.mpc``."""
    for _ in range(tries):
        u = []
        ok = True
        for key in path[1:]:
            node = tree[key]
            k = node.level
            if node.kind is Kind.EQ:
                cs = _trim(num_coeffs(node.poly, k, u))
                if len(cs) - 1 != node.poly.deg(k):
                    ok = False  # initial vanishes here; path constraint violated
                    break
                if len(cs) == 2 and all(isinstance(c, type(mpq(0))) for c in u):
                    c0, c1 = node.poly.subs({i + 1: u[i] for i in range(k - 1)}).coefficients(k)
                    u.append(-c0.constant_value / c1.constant_value)
                    continue
                roots = _roots(node.poly, cs, u)
                u.append(mpmath.mpc(roots[rng.randrange(len(roots))]))
            else:
                t = random_rational(rng)
                u.append(t)
                if node.kind is Kind.NEQ and num_is_zero(node.poly, u):
                    ok = False
                    break
        if ok:
            return u
    raise SampleFailure("could not sample the path")


def locate_leaf(tree: CylindricalTree, u: Sequence) -> list:
    """All PRESENT full-depth leaves whose constraints hold at ``u`` (numerically)."""
    hits = []

    def holds(node):
        if node.kind is Kind.ANY:
            return True
        z = num_is_zero(node.poly, u)
        return z if node.kind is Kind.EQ else not z

    def walk(key):
        node = tree[key]
        if node.level and not holds(node):
            return
        if not node.children:
            if node.level == tree.n:
                hits.append(key)
            return
        for c in node.children:
            walk(c)

    walk(tree.root)
    return hits


# ---- checks ---------------------------------------------------------------------------------

def check_f_invariance(tree: CylindricalTree, polys: Sequence[Polynomial], rng, samples: int = 200) -> CheckResult:
    """Recorded complex signs: 0 certified by pseudo-remainder, 1 by sampling."""
    res = CheckResult("f-invariance")
    with mpmath.workdps(precision_for(tree, polys)):
        for path in tree.paths():
            leaf = tree[path.leaf]
            eqs = tree.equations(path)
            for f in polys:
                s = leaf.signs.get(table_key(f))
                if s is None:
                    res.record(False, f"missing sign of {format_polynomial(f)}")
                elif s == 0:
                    res.record(prem_chain(f, eqs).is_zero, f"{format_polynomial(f)} not reduced to 0")
                else:
                    for _ in range(samples):
                        u = sample_path(tree, path, rng)
                        res.record(not num_is_zero(f, u), f"{format_polynomial(f)} vanishes at a sample")
    return res


def check_gcds(tree: CylindricalTree, rng, samples: int = 100, max_nodes: Optional[int] = None) -> CheckResult:
    """Stored ``Gcd[p, f]`` tables against gcds of specializations."""
    res = CheckResult("gcd")
    nodes = [k for k in _present_nodes(tree) if tree[k].gcd]
    if max_nodes is not None:
        nodes = nodes[:max_nodes]
    with mpmath.workdps(precision_for(tree)):
        for k in nodes:
            path = tree.path_to(k)
            for (p, f), g in tree[k].gcd.items():
                for _ in range(samples):
                    u = sample_path(tree, path, rng)
                    res.record(*gcd_agrees(p, f, g, u))
    return res


def gcd_agrees(p: Polynomial, f: Polynomial, g: Polynomial, u: Sequence):
    """``(ok, note)``: ``g(u)`` is a gcd of ``p(u)`` and ``f(u)`` with nonzero leading coefficient."""
    k = p.level
    if all(isinstance(c, type(mpq(0))) for c in u):
        vals = {i + 1: u[i] for i in range(k - 1)}
        pu, fu, gu = p.subs(vals), f.subs(vals), g.subs(vals)
        if gu.is_zero or gu.deg(k) != (g.deg(k) if g.level == k else 0):
            return False, "gcd initial vanishes"
        true = Polynomial(p.order, pu._p.gcd(fu._p))
        dg = gu.deg(k) if gu.level == k else 0
        dt = true.deg(k) if true.level == k else 0
        ok = dg == dt and (pu._p % gu._p) == 0 and (fu._p % gu._p) == 0 if dg else dt == 0
        return ok, f"degree {dg} vs {dt}"
    pc, fc, gc = num_coeffs(p, k, u), num_coeffs(f, k, u), num_coeffs(g, k, u)
    dg = g.deg(k) if g.level == k else 0
    if len(_trim(gc)) - 1 != dg:
        return False, "gcd initial vanishes"
    dt = num_gcd_degree(pc, fc)
    ok = dt == dg and num_divides(gc, pc) and num_divides(gc, fc)
    return ok, f"degree {dg} vs {dt}"


def check_separation(tree: CylindricalTree, rng, samples: int = 20) -> CheckResult:
    """Sibling section polynomials: nonzero initial, squarefree, pairwise coprime."""
    res = CheckResult("separation")
    with mpmath.workdps(precision_for(tree)):
        for k in _present_nodes(tree):
            node = tree[k]
            eqs = [tree[c].poly for c in node.children if tree[c].kind is Kind.EQ]
            if not eqs:
                continue
            path = tree.path_to(k)
            lvl = node.level + 1
            for _ in range(samples):
                u = sample_path(tree, path, rng)
                cs = [num_coeffs(p, lvl, u) for p in eqs]
                for p, c in zip(eqs, cs):
                    res.record(len(_trim(c)) - 1 == p.deg(lvl), "initial vanishes")
                    res.record(num_gcd_degree(c, num_coeffs(p.diff(lvl), lvl, u)) == 0, "not squarefree")
                for i in range(len(cs)):
                    for j in range(i + 1, len(cs)):
                        res.record(num_gcd_degree(cs[i], cs[j]) == 0, "siblings share a root")
    return res


def check_simple_system(tree: CylindricalTree, rng, samples: int = 20) -> CheckResult:
    """Each path's equations form a regular chain."""
    res = CheckResult("simple-system")
    with mpmath.workdps(precision_for(tree)):
        for path in tree.paths():
            eqs = tree.equations(path)
            for i, e in enumerate(eqs):
                lower = [q for q in eqs if q.level < e.level]
                init = e.init
                res.record(init.is_constant or not prem_chain(init, lower).is_zero, "initial reduces to 0")
            for _ in range(samples):
                u = sample_path(tree, path, rng)
                for e in eqs:
                    res.record(not num_is_zero(e.init, u), "initial vanishes at a sample")
    return res


def check_partition(tree: CylindricalTree, rng, samples: int = 200) -> CheckResult:
    """Sampled points lie on exactly one PRESENT path."""
    res = CheckResult("tree-partition")
    with mpmath.workdps(precision_for(tree)):
        pts = [[random_rational(rng) for _ in range(tree.n)] for _ in range(samples)]
        paths = tree.paths()
        for path in paths:
            for _ in range(max(1, samples // max(1, len(paths)))):
                pts.append(sample_path(tree, path, rng))
        for u in pts:
            hits = locate_leaf(tree, u)
            res.record(len(hits) == 1, f"{len(hits)} paths")
    return res


def check_commutation(order, p1: Polynomial, p2: Polynomial, rng, samples: int = 500) -> CheckResult:
    """Both insertion orders classify sampled points to the same sign vector."""
    res = CheckResult("commutation")
    t12 = ccd.cylindrical_decompose([p1, p2], order)
    t21 = ccd.cylindrical_decompose([p2, p1], order)
    keys = [table_key(p1), table_key(p2)]
    with mpmath.workdps(max(precision_for(t12), precision_for(t21))):
        pts = [[random_rational(rng) for _ in range(order.n)] for _ in range(samples // 2)]
        paths = [(t12, p) for p in t12.paths()] + [(t21, p) for p in t21.paths()]
        while len(pts) < samples:
            t, p = paths[len(pts) % len(paths)]
            pts.append(sample_path(t, p, rng))
        for u in pts:
            a, b = locate_leaf(t12, u), locate_leaf(t21, u)
            if len(a) != 1 or len(b) != 1:
                res.record(False, f"point on {len(a)}/{len(b)} paths")
                continue
            va = [t12[a[0]].signs[k] for k in keys]
            vb = [t21[b[0]].signs[k] for k in keys]
            truth = [0 if num_is_zero(k, u) else 1 for k in keys]
            res.record(va == vb == truth, f"{va} {vb} {truth}")
    return res


def check_cad_partition(cad_: CAD, rng, samples: int = 1000) -> CheckResult:
    """Random rational points (plus rational cell samples) fall in exactly one cell with matching signs."""
    res = CheckResult("cad-partition")
    n = cad_.order.n
    pts = [([random_rational(rng) for _ in range(n)], None) for _ in range(samples)]
    for cell in cad_.cells:
        if cell.sample.is_rational:
            pts.append((list(cell.sample.rational_values().values()), cell))
    for u, expect in pts:
        try:
            cell = classify_point(cad_, u)
        except RealCADError as e:
            res.record(False, str(e))
            continue
        if expect is not None and cell is not expect:
            res.record(False, f"sample of {expect.index} classified to {cell.index}")
            continue
        good = True
        for f, s in cell.signs.items():
            v = f.subs({i + 1: u[i] for i in range(n)}).constant_value
            good &= ((v > 0) - (v < 0)) == s
        res.record(good, f"sign mismatch at {[str(c) for c in u]}")
    return res


def check_stacks(cad_: CAD) -> CheckResult:
    """Samples within each stack strictly increase; counts are odd (2r + 1)."""
    res = CheckResult("stacks")
    for cell in cad_.all_cells():
        kids = cell.children
        if not kids:
            continue
        res.record(len(kids) % 2 == 1, "even stack size")
        k = cell.level + 1
        approx = [_coord_key(c.sample.coords[k - 1]) for c in kids]
        for a, b in zip(approx, approx[1:]):
            both_exact = a[0] == a[1] and b[0] == b[1]
            res.record(a[1] < b[0] or (a[1] == b[0] and not both_exact), "samples out of order")
    return res


def _coord_key(c):
    from .realcad import IsolatingInterval

    if isinstance(c, IsolatingInterval):
        return (c.lo, c.hi)
    return (c, c)


def check_delineability(cad_: CAD, rng, samples: int = 50) -> CheckResult:
    """Section-polynomial root counts are constant over sampled base-cell points."""
    from .realcad import _RootCache, condition_holds

    res = CheckResult("delineability")
    for cell in cad_.all_cells():
        if not cell.children or cell.level == 0:
            continue
        bounds = {b.poly for ch in cell.children for b in (ch.condition.bounds if ch.condition else ())}
        if not bounds:
            continue
        # base cells of positive dimension only: sectors at every level
        if any(c % 2 == 0 for c in cell.index):
            continue
        ref = {p: len(_RootCache(cad_.order).roots(p, tuple(cell.sample.rational_values().values()))) for p in bounds} \
            if cell.sample.is_rational else None
        if ref is None:
            continue
        found = 0
        cache = _RootCache(cad_.order)
        for _ in range(samples * 20):
            if found >= samples:
                break
            u = [random_rational(rng) for _ in range(cell.level)]
            if not all(condition_holds(c, u, cache) for c in cell.conditions):
                continue
            found += 1
            res.record(all(len(cache.roots(p, tuple(u))) == ref[p] for p in bounds), "root count changes")
    return res


def enumerate_solutions(tree: CylindricalTree, rng) -> Optional[list]:
    """Numerical points of a zero-dimensional partial tree, or ``None`` if some path is not."""
    pts = []
    with mpmath.workdps(precision_for(tree)):
        for path in tree.paths():
            nodes = [tree[k] for k in path[1:]]
            if any(nd.kind is not Kind.EQ for nd in nodes) or len(nodes) != tree.n:
                return None
            layer = [[]]
            for nd in nodes:
                k = nd.level
                nxt = []
                for u in layer:
                    cs = _trim(num_coeffs(nd.poly, k, u))
                    for r in _roots(nd.poly, cs, u):
                        nxt.append(u + [mpmath.mpc(r)])
                layer = nxt
            pts.extend(layer)
    return pts


def oracle_solutions(system) -> Optional[list]:
    """Complex solutions of a zero-dimensional system by Groebner bases, or ``None``.

    Each inequation ``h <> 0`` enters as ``t*h - 1 = 0`` with a fresh ``t``
    that is then eliminated.  The ideal is made radical by adding the
    squarefree part of every univariate eliminant, and a random linear form
    ``s`` puts it in shape position: ``m(s) = 0`` with ``m`` squarefree and
    every variable a polynomial in ``s``.  Only ``m`` is solved numerically.
    """
    import sympy

    names = system.order.names
    syms = sympy.symbols(names)
    env = dict(zip(names, syms))

    def conv(p):
        return sympy.sympify(format_polynomial(p).replace("^", "**"), locals=env)

    eqs, aux = [], []
    for p, r in system.items:
        if p.is_constant:
            if (r == ccd.EQUATION) != p.is_zero:
                return []
            continue
        if r == ccd.EQUATION:
            eqs.append(conv(p))
        else:
            t = sympy.Dummy()
            aux.append(t)
            eqs.append(t * conv(p) - 1)
    if not eqs:
        return None
    if aux:
        eqs = [g for g in sympy.groebner(eqs, *aux, *syms, order="lex").exprs if not g.free_symbols & set(aux)]
        if not eqs:
            return None
    g = sympy.groebner(eqs, *syms, order="grevlex")
    if g.exprs == [1]:
        return []
    if not g.is_zero_dimensional:
        return None
    radical = list(g.exprs)
    for v in syms:
        others = [w for w in syms if w != v]
        elim = sympy.groebner(radical, *others, v, order="lex").exprs[-1]
        radical.append(sympy.Poly(elim, v).sqf_part().as_expr())

    s = sympy.Dummy("s")
    rng = random.Random(0)
    for _ in range(20):
        form = syms[-1] + sum(rng.randint(-9, 9) * v for v in syms[:-1])
        basis = sympy.groebner(radical + [s - form], *syms, s, order="lex").exprs
        shape = _shape(basis, syms, s)
        if shape is not None:
            break
    else:
        return None
    m, params = shape
    with mpmath.workdps(DPS):
        coeffs = [mpmath.mpf(int(c.p)) / int(c.q) for c in m.all_coeffs()]
        if len(coeffs) == 1:
            return []
        roots = mpmath.polyroots(coeffs, maxsteps=500, extraprec=4 * DPS) if len(coeffs) > 2 else [-coeffs[1] / coeffs[0]]
        roots = roots if isinstance(roots, list) else [roots]
        return [[_eval_rational_poly(q, r) for q in params] for r in roots]


def _shape(basis, syms, s):
    """``(m, [x_1(s), ...])`` if ``basis`` is ``{x_i - v_i(s)} + {m(s)}``, else ``None``."""
    import sympy

    if len(basis) != len(syms) + 1:
        return None
    m = sympy.Poly(basis[-1], *syms, s)
    if any(m.degree(v) > 0 for v in syms):
        return None
    params = []
    for v, g in zip(syms, basis):
        q = sympy.Poly(g, *syms, s)
        if q.degree(v) != 1 or any(q.degree(w) > 0 for w in syms if w != v):
            return None
        lead = q.coeff_monomial(v)
        if lead == 0:
            return None
        params.append(sympy.Poly(-(g - lead * v) / lead, s))
    return sympy.Poly(m.as_expr(), s), params


def _eval_rational_poly(q, r):
    v = mpmath.mpf(0)
    for c in q.all_coeffs():
        v = v * r + mpmath.mpf(int(c.p)) / int(c.q)
    return v


def same_point_sets(a: list, b: list, tol=mpmath.mpf(10) ** -20) -> bool:
    if len(a) != len(b):
        return False
    left = list(b)
    for p in a:
        for i, q in enumerate(left):
            if all(abs(x - y) < tol for x, y in zip(p, q)):
                del left[i]
                break
        else:
            return False
    return True


def _present_nodes(tree: CylindricalTree) -> list[int]:
    out = []

    def walk(k):
        out.append(k)
        for c in tree[k].children:
            walk(c)

    walk(tree.root)
    return out


def run_all(system, rng: random.Random, samples: int = 200) -> list[CheckResult]:
    """Every applicable check for a parsed system."""
    from .realcad import make_semi_algebraic

    out = []
    if system.is_plain:
        tree = ccd.cylindrical_decompose(system)
        polys = system.polys
        out.append(check_f_invariance(tree, polys, rng, samples=max(1, samples // 10)))
        out.append(check_gcds(tree, rng, samples=max(1, samples // 20)))
        out.append(check_separation(tree, rng, samples=max(1, samples // 20)))
        out.append(check_simple_system(tree, rng, samples=max(1, samples // 20)))
        out.append(check_partition(tree, rng, samples=samples))
        c = make_semi_algebraic(tree, polys)
        out.append(check_cad_partition(c, rng, samples=samples))
        out.append(check_stacks(c))
        out.append(check_delineability(c, rng, samples=max(1, samples // 20)))
        if len(polys) >= 2:
            out.append(check_commutation(system.order, polys[0], polys[1], rng, samples=samples))
    else:
        tree = ccd.solve_system(system)
        out.append(check_simple_system(tree, rng, samples=max(1, samples // 20)))
        res = CheckResult("system-zero-set")
        with mpmath.workdps(precision_for(tree, system.polys)):
            for path in tree.paths():
                for _ in range(max(1, samples // max(1, len(tree.paths())))):
                    u = sample_path(tree, path, rng)
                    for p, r in system.items:
                        z = num_is_zero(p, u)
                        res.record(z if r == ccd.EQUATION else not z, f"{format_polynomial(p)} violated")
        out.append(res)
        pts = enumerate_solutions(tree, rng)
        expect = oracle_solutions(system) if pts is not None else None
        if expect is not None:
            res = CheckResult("solutions")
            res.record(same_point_sets(pts, expect), "solution sets differ")
            out.append(res)
    return out
