"""Elliptic curves with a rational 5-torsion point: models, group law, reduction data.

Points are ``None`` (the point at infinity) or ``(x, y)`` tuples whose
coordinates are ``gmpy2.mpq`` (over Q) or ``CycloElement`` (over K).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

from gmpy2 import mpq

from .arith import factorize, valuation

INFINITY = None


@dataclass(frozen=True)
class WeierstrassModel:
    """y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6 over Q or K."""

    a1: object
    a2: object
    a3: object
    a4: object
    a6: object
    base: str = "Q"

    @classmethod
    def over_q(cls, a1, a2, a3, a4, a6) -> "WeierstrassModel":
        return cls(*(mpq(a) for a in (a1, a2, a3, a4, a6)), base="Q")

    @property
    def ainvs(self):
        return (self.a1, self.a2, self.a3, self.a4, self.a6)

    @property
    def b2(self):
        return self.a1 * self.a1 + 4 * self.a2

    @property
    def b4(self):
        return 2 * self.a4 + self.a1 * self.a3

    @property
    def b6(self):
        return self.a3 * self.a3 + 4 * self.a6

    @property
    def b8(self):
        a1, a2, a3, a4, a6 = self.ainvs
        return a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4

    @property
    def c4(self):
        return self.b2 * self.b2 - 24 * self.b4

    @property
    def c6(self):
        return -self.b2 ** 3 + 36 * self.b2 * self.b4 - 216 * self.b6

    @property
    def discriminant(self):
        b2, b4, b6, b8 = self.b2, self.b4, self.b6, self.b8
        return -b2 * b2 * b8 - 8 * b4 ** 3 - 27 * b6 * b6 + 9 * b2 * b4 * b6

    def j_invariant(self):
        return self.c4 ** 3 / self.discriminant

    # -- points -----------------------------------------------------------
    def contains(self, P) -> bool:
        if P is INFINITY:
            return True
        x, y = P
        a1, a2, a3, a4, a6 = self.ainvs
        return y * y + a1 * x * y + a3 * y - (x * x * x + a2 * x * x + a4 * x + a6) == 0

    def neg(self, P):
        if P is INFINITY:
            return P
        x, y = P
        return (x, -y - self.a1 * x - self.a3)

    def add(self, P, Q):
        if P is INFINITY:
            return Q
        if Q is INFINITY:
            return P
        a1, a2, a3, a4, a6 = self.ainvs
        x1, y1 = P
        x2, y2 = Q
        if x1 == x2:
            if y1 + y2 + a1 * x2 + a3 == 0:
                return INFINITY
            lam = (3 * x1 * x1 + 2 * a2 * x1 + a4 - a1 * y1) / (2 * y1 + a1 * x1 + a3)
            nu = (-x1 * x1 * x1 + a4 * x1 + 2 * a6 - a3 * y1) / (2 * y1 + a1 * x1 + a3)
        else:
            lam = (y2 - y1) / (x2 - x1)
            nu = (y1 * x2 - y2 * x1) / (x2 - x1)
        x3 = lam * lam + a1 * lam - a2 - x1 - x2
        y3 = -(lam + a1) * x3 - nu - a3
        return (x3, y3)

    def sub(self, P, Q):
        return self.add(P, self.neg(Q))

    def mul(self, n: int, P):
        if n < 0:
            return self.mul(-n, self.neg(P))
        result, base = INFINITY, P
        while n:
            if n & 1:
                result = self.add(result, base)
            base = self.add(base, base)
            n >>= 1
        return result

    def order(self, P, bound: int = 12) -> Optional[int]:
        """Order of P if at most ``bound``, else None."""
        Q = P
        for k in range(1, bound + 1):
            if Q is INFINITY:
                return k
            Q = self.add(Q, P)
        return None

    def lift_x(self, x):
        """Rational points with the given x-coordinate (over Q only)."""
        from .arith import mpq as _q
        import gmpy2

        a1, a2, a3, a4, a6 = self.ainvs
        b = a1 * x + a3
        c = x * x * x + a2 * x * x + a4 * x + a6
        disc = b * b + 4 * c
        if disc < 0:
            return []
        n, ok1 = gmpy2.iroot(disc.numerator, 2)
        d, ok2 = gmpy2.iroot(disc.denominator, 2)
        if not (ok1 and ok2):
            return []
        r = _q(n, d)
        pts = [(x, (-b + r) / 2)]
        if r:
            pts.append((x, (-b - r) / 2))
        return pts

    def change_coords(self, u, r, s, t) -> "WeierstrassModel":
        """Model for x = u^2 x' + r, y = u^3 y' + s u^2 x' + t."""
        a1, a2, a3, a4, a6 = self.ainvs
        na1 = (a1 + 2 * s) / u
        na2 = (a2 - s * a1 + 3 * r - s * s) / u ** 2
        na3 = (a3 + r * a1 + 2 * t) / u ** 3
        na4 = (a4 - s * a3 + 2 * r * a2 - (t + r * s) * a1 + 3 * r * r - 2 * s * t) / u ** 4
        na6 = (a6 + r * a4 + r * r * a2 + r ** 3 - t * a3 - t * t - r * t * a1) / u ** 6
        return WeierstrassModel(na1, na2, na3, na4, na6, self.base)


@dataclass(frozen=True)
class Isomorphism:
    """Coordinate change x = u^2 x' + r, y = u^3 y' + s u^2 x' + t from ``target`` to ``source``."""

    source: WeierstrassModel
    target: WeierstrassModel
    u: object
    r: object
    s: object
    t: object

    def __call__(self, P):
        """Map a point on ``source`` to ``target``."""
        if P is INFINITY:
            return P
        x, y = P
        xp = (x - self.r) / self.u ** 2
        yp = (y - self.s * (x - self.r) - self.t) / self.u ** 3
        return (xp, yp)

    def inverse(self, P):
        if P is INFINITY:
            return P
        xp, yp = P
        x = self.u ** 2 * xp + self.r
        y = self.u ** 3 * yp + self.s * self.u ** 2 * xp + self.t
        return (x, y)


def isomorphism(E: WeierstrassModel, F: WeierstrassModel, sign: int = 1) -> Isomorphism:
    """A Q-isomorphism E -> F between rational models (raises if none exists)."""
    import gmpy2

    if E.j_invariant() != F.j_invariant():
        raise ValueError("models are not isomorphic (different j)")
    c4e, c6e, c4f, c6f = E.c4, E.c6, F.c4, F.c6
    # u^4 = c4e/c4f, u^6 = c6e/c6f  (u relates F = E^(u,r,s,t))
    if c4e != 0 and c6e != 0:
        u2 = (c6e / c6f) / (c4e / c4f)
    elif c6e == 0:
        u4 = c4e / c4f
        n, ok1 = gmpy2.iroot(abs(u4.numerator), 2)
        d, ok2 = gmpy2.iroot(u4.denominator, 2)
        if not (ok1 and ok2 and u4 > 0):
            raise ValueError("not isomorphic over Q")
        u2 = mpq(n, d)
    else:
        u6 = c6e / c6f
        n, ok1 = gmpy2.iroot(abs(u6.numerator), 3)
        d, ok2 = gmpy2.iroot(u6.denominator, 3)
        if not (ok1 and ok2):
            raise ValueError("not isomorphic over Q")
        u2 = mpq(n, d) * (1 if u6 > 0 else -1)
    n, ok1 = gmpy2.iroot(abs(u2.numerator), 2)
    d, ok2 = gmpy2.iroot(u2.denominator, 2)
    if not (ok1 and ok2 and u2 > 0):
        raise ValueError("not isomorphic over Q (twist)")
    u = mpq(n, d) * sign
    s = (u * F.a1 - E.a1) / 2
    r = (u * u * F.a2 - E.a2 + s * E.a1 + s * s) / 3
    t = (u ** 3 * F.a3 - E.a3 - r * E.a1) / 2
    G = E.change_coords(u, r, s, t)
    if G.ainvs != F.ainvs:
        raise ValueError("isomorphism reconstruction failed")
    return Isomorphism(E, F, u, r, s, t)


# ---------------------------------------------------------------------------
# the family E_d : y^2 + (d+1)xy + dy = x^3 + dx^2
# ---------------------------------------------------------------------------
def tate_normal_model(d) -> WeierstrassModel:
    base = "Q"
    if not isinstance(d, (int, type(mpq(0)))):
        base = "K"
    else:
        d = mpq(d)
    return WeierstrassModel(d + 1, d, d, 0 * d, 0 * d, base)


def integral_model(u: int, v: int) -> WeierstrassModel:
    """Y^2 + (u+v)XY + uv^2 Y = X^3 + uvX^2 (E_{u/v} scaled by x = X/v^2, y = Y/v^3)."""
    return WeierstrassModel.over_q(u + v, u * v, u * v * v, 0, 0)


def to_tate_coords(P, v: int):
    """Integral-model point -> point on the d-model."""
    if P is INFINITY:
        return P
    return (P[0] / v ** 2, P[1] / v ** 3)


def from_tate_coords(P, v: int):
    if P is INFINITY:
        return P
    return (P[0] * v ** 2, P[1] * v ** 3)


def quadratic_form(u: int, v: int) -> int:
    """u^2 + 11uv - v^2, the non-uv factor of the discriminant."""
    return u * u + 11 * u * v - v * v


@dataclass(frozen=True)
class ReductionData:
    tags: dict  # prime -> "good" | "split_mult" | "nonsplit_mult" | "additive"
    identity_component: dict  # prime -> does (0,0) reduce into the identity component
    conductor: int
    S: tuple
    T: tuple
    U: tuple

    def tag(self, p: int) -> str:
        return self.tags.get(p, "good")


def reduction_data(u: int, v: int) -> ReductionData:
    """Reduction types, conductor and the prime sets S, T, U of E_{u/v}."""
    if math.gcd(u, v) != 1 or u < 1 or v < 1:
        raise ValueError(f"need coprime positive u, v (got {u}, {v})")
    D = quadratic_form(u, v)
    T = sorted(set(factorize(u * v).primes()) if u * v > 1 else set())
    Dp = factorize(D).primes()
    tags, comp = {}, {}
    for p in T:
        tags[p] = "split_mult"
        comp[p] = False
    U = []
    v5 = valuation(D, 5)
    for p in Dp:
        comp[p] = True
        if p == 5:
            tags[p] = "additive"
            if v5 == 3:
                U.append(5)
        elif p % 5 == 1:
            tags[p] = "split_mult"
            U.append(p)
        elif p % 5 == 4:
            tags[p] = "nonsplit_mult"
        else:
            raise ArithmeticError(f"prime {p} | u^2+11uv-v^2 with p = {p % 5} mod 5")
    conductor = 1
    for p, t in tags.items():
        conductor *= p ** (2 if t == "additive" else 1)
    S = sorted(set(T) | set(Dp) | {5})
    return ReductionData(tags, comp, conductor, tuple(S), tuple(T), tuple(sorted(U)))


def curve_from_uv(u: int, v: int) -> tuple[WeierstrassModel, ReductionData]:
    return integral_model(u, v), reduction_data(u, v)


def conductor(u: int, v: int) -> int:
    return reduction_data(u, v).conductor


# ---------------------------------------------------------------------------
# torsion
# ---------------------------------------------------------------------------
def two_torsion(E: WeierstrassModel) -> list:
    """Rational points of order 2 (roots of 4x^3 + b2 x^2 + 2 b4 x + b6)."""
    from .polys import rational_roots

    roots = rational_roots([E.b6, 2 * E.b4, E.b2, 4])
    return [(x, -(E.a1 * x + E.a3) / 2) for x in roots]


def division_polynomial_5(E: WeierstrassModel) -> list:
    """Coefficients (low to high) of the 5-division polynomial in x."""
    from .polys import padd, pmul, pscale

    b2, b4, b6, b8 = E.b2, E.b4, E.b6, E.b8
    psi3 = [b8, 3 * b6, 3 * b4, b2, 3]
    psi4_over_psi2 = [b4 * b8 - b6 * b6, b2 * b8 - b4 * b6, 10 * b8, 10 * b6, 5 * b4, b2, 2]
    # psi2^2 = 4x^3 + b2 x^2 + 2b4 x + b6
    psi2sq = [b6, 2 * b4, b2, 4]
    # psi5 = psi4 psi2^3 - psi1 psi3^3 = psi4/psi2 * psi2^4 - psi3^3
    a = pmul(psi4_over_psi2, pmul(psi2sq, psi2sq))
    b = pmul(psi3, pmul(psi3, psi3))
    return padd(a, pscale(b, -1))


def rational_five_torsion(E: WeierstrassModel) -> list:
    """All rational points of exact order 5."""
    from .polys import rational_roots

    pts = []
    for x in rational_roots(division_polynomial_5(E)):
        for P in E.lift_x(x):
            if E.order(P, 5) == 5:
                pts.append(P)
    return pts


@dataclass(frozen=True)
class TorsionData:
    order: int
    generators: tuple
    points: tuple


def torsion_subgroup(E: WeierstrassModel) -> TorsionData:
    """Torsion of a curve isogenous to a member of the family: Z/n with n | 10."""
    t2 = two_torsion(E)
    t5 = rational_five_torsion(E)
    if len(t2) > 1:
        raise ArithmeticError("full rational 2-torsion cannot occur in this family")
    gens = []
    P5 = t5[0] if t5 else INFINITY
    P2 = t2[0] if t2 else INFINITY
    gen = E.add(P5, P2)
    order = (5 if t5 else 1) * (2 if t2 else 1)
    pts = []
    Q = INFINITY
    for _ in range(order):
        pts.append(Q)
        Q = E.add(Q, gen)
    if order > 1:
        gens.append(gen)
    return TorsionData(order, tuple(gens), tuple(pts))
