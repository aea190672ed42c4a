"""
Brute-force reference computations used by the test-suite and the
``check`` harness.  Nothing here is used by the decomposition algorithms.
"""
from __future__ import annotations

from .poly import Polynomial, VarOrder


def _det(rows):
    """Fraction-free (Bareiss) determinant over a polynomial ring."""
    m = [list(r) for r in rows]
    n = len(m)
    if n == 0:
        return None
    ring_one = m[0][0].ring.one
    sign = 1
    prev = ring_one
    for k in range(n - 1):
        if not m[k][k]:
            for r in range(k + 1, n):
                if m[r][k]:
                    m[k], m[r] = m[r], m[k]
                    sign = -sign
                    break
            else:
                return m[0][0].ring.zero
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]).exquo(prev)
        prev = m[k][k]
    return m[n - 1][n - 1] * sign


def sylvester_subresultant(p: Polynomial, f: Polynomial, j: int, var=None) -> Polynomial:
    """``S_j`` of ``p`` and ``f`` from its defining determinants.

    Rows are ``x^{b-j-1} A, ..., A, x^{a-j-1} B, ..., B`` with ``A`` the
    operand of larger degree; the first ``a+b-2j-1`` columns hold the
    coefficients of ``x^{a+b-j-1} .. x^{j+1}`` and the last column the
    coefficient of ``x^i``; ``S_j = sum_i det_i x^i``.
    """
    order = p.order
    k = order.level_of(var if var is not None else f.level)
    a_poly, b_poly = (p, f) if p.deg(k) >= f.deg(k) else (f, p)
    a, b = a_poly.deg(k), b_poly.deg(k)
    if not 0 <= j < b:
        raise ValueError("index out of range")
    ca = [c._p for c in a_poly.coefficients(k)]
    cb = [c._p for c in b_poly.coefficients(k)]
    zero = order.ring.zero

    def row(coeffs, shift):
        # polynomial x^shift * q as dict degree -> coeff
        return {i + shift: c for i, c in enumerate(coeffs)}

    rows = [row(ca, s) for s in range(b - j - 1, -1, -1)]
    rows += [row(cb, s) for s in range(a - j - 1, -1, -1)]
    top = a + b - j - 1
    lead_cols = list(range(top, j, -1))
    x = order.var(k)._p
    total = zero
    for i in range(j + 1):
        mat = [[r.get(c, zero) for c in lead_cols] + [r.get(i, zero)] for r in rows]
        total += _det(mat) * x**i
    return Polynomial(order, total)


def sylvester_resultant(p: Polynomial, f: Polynomial, var=None) -> Polynomial:
    return sylvester_subresultant(p, f, 0, var)


def univariate_gcd(p: Polynomial, f: Polynomial) -> Polynomial:
    """Monic-normalized gcd of two polynomials with rational coefficients."""
    return Polynomial(p.order, p._p.gcd(f._p))


def random_polynomial(order: VarOrder, rng, level: int, degree: int, terms: int, coeff: int = 9) -> Polynomial:
    """Random polynomial of the given level with total degree <= ``degree``.

    The result always involves ``x_level`` with positive degree.
    """
    n = order.n
    while True:
        data = {}
        for _ in range(terms):
            mon = [0] * n
            budget = rng.randint(0, degree)
            for _ in range(budget):
                mon[rng.randrange(level)] += 1
            c = rng.randint(-coeff, coeff)
            if c:
                data[tuple(mon)] = data.get(tuple(mon), 0) + c
        p = order.from_terms(data)
        if p.level == level:
            return p
