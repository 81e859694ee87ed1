"""Dense univariate polynomials (coefficient lists, low degree first) and rational roots."""
from __future__ import annotations

from gmpy2 import mpq


def ptrim(a):
    a = list(a)
    while a and not a[-1]:
        a.pop()
    return a


def padd(a, b):
    n = max(len(a), len(b))
    return ptrim([(a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n)])


def pscale(a, c):
    return [x * c for x in a]


def pmul(a, b):
    if not a or not b:
        return []
    out = [0 * a[0]] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = out[i + j] + x * y
    return out


def peval(a, x):
    acc = 0 * x
    for c in reversed(a):
        acc = acc * x + c
    return acc


def rational_roots(coeffs) -> list:
    """Distinct rational roots of a polynomial with rational coefficients (low degree first)."""
    from sympy import Poly, Rational, symbols

    coeffs = ptrim([mpq(c) for c in coeffs])
    if len(coeffs) <= 1:
        return []
    X = symbols("X")
    poly = Poly([Rational(int(c.numerator), int(c.denominator)) for c in reversed(coeffs)], X, domain="QQ")
    roots = []
    for fac, _ in poly.factor_list()[1]:
        if fac.degree() == 1:
            a, b = fac.all_coeffs()
            r = -b / a
            roots.append(mpq(int(r.p), int(r.q)))
    return sorted(set(roots))
