"""Randomized properties against independent oracles (sympy, exact evaluation)."""
import random

import sympy
from gmpy2 import mpq
from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from inccad import checks
from inccad.ccd import EQUATION, InputSystem, cylindrical_decompose, solve_system
from inccad.poly import VarOrder
from inccad.realcad import RealAlgebraicPoint, cad, classify_point, isolate_real_roots, sign_at

X = VarOrder(["x"])
XY = VarOrder(["x", "y"])

slow = settings(max_examples=25, deadline=None, suppress_health_check=[HealthCheck.too_slow])


@st.composite
def univariate(draw):
    cs = draw(st.lists(st.integers(-6, 6), min_size=2, max_size=6))
    terms = {(i,): c for i, c in enumerate(cs) if c}
    return X.from_terms(terms) if terms else X.zero()


@st.composite
def bivariate(draw, max_deg=2):
    terms = draw(st.dictionaries(
        st.tuples(st.integers(0, max_deg), st.integers(0, max_deg)), st.integers(-5, 5).filter(bool),
        min_size=1, max_size=4,
    ))
    return XY.from_terms(terms)


@slow
@given(univariate())
def test_root_count_matches_sympy(p):
    if p.is_constant:
        return
    sq = sympy.Poly(sympy.sympify(str(p).replace("^", "**")), sympy.Symbol("x")).sqf_part()
    q = X.from_terms({(m[0],): int(c) for m, c in zip(sq.monoms(), sq.coeffs())})
    ivs = isolate_real_roots(q)
    assert len(ivs) == sq.count_roots()
    for a, b in zip(ivs, ivs[1:]):
        assert a.hi <= b.lo


@slow
@given(bivariate(), st.integers(-4, 4), st.integers(-4, 4))
def test_sign_at_rational_points_is_exact(p, a, b):
    v = p.subs({1: a, 2: b}).constant_value if not p.is_zero else 0
    expect = (v > 0) - (v < 0)
    assert sign_at(p, RealAlgebraicPoint(XY, [a, b])) == expect


@slow
@given(st.lists(bivariate(), min_size=1, max_size=2))
def test_decomposition_is_sign_invariant(ps):
    ps = [p for p in ps if not p.is_constant]
    if not ps:
        return
    rng = random.Random(0)
    tree = cylindrical_decompose(ps, XY)
    assert checks.check_f_invariance(tree, ps, rng, samples=3).ok
    assert checks.check_partition(tree, rng, samples=40).ok


@slow
@given(st.lists(bivariate(), min_size=1, max_size=2), st.lists(st.tuples(st.integers(-5, 5), st.integers(-5, 5)), min_size=5, max_size=10))
def test_cad_classifies_rational_points(ps, pts):
    ps = [p for p in ps if not p.is_constant]
    if not ps:
        return
    c = cad(ps, XY)
    for u in pts:
        cell = classify_point(c, [mpq(v) for v in u])
        for f, s in cell.signs.items():
            v = f.subs({1: u[0], 2: u[1]}).constant_value
            assert s == (v > 0) - (v < 0)


@slow
@given(bivariate(), bivariate())
def test_eqs_mode_matches_sympy_solutions(p, q):
    if p.is_constant or q.is_constant:
        return
    system = InputSystem(XY, [(p, EQUATION), (q, EQUATION)])
    tree = solve_system(system)
    pts = checks.enumerate_solutions(tree, random.Random(0))
    expect = checks.oracle_solutions(system) if pts is not None else None
    if expect is not None:
        assert checks.same_point_sets(pts, expect)
