"""The 5-isogeny E -> E' = E/<(0,0)>, its dual, and the K-isomorphism E' -> E_dtilde."""
from __future__ import annotations

import math
import random
from dataclasses import dataclass

from gmpy2 import mpq

from .arith import valuation
from .curve import (
    INFINITY,
    Isomorphism,
    WeierstrassModel,
    integral_model,
    isomorphism,
    quadratic_form,
)
from .cyclo import CycloElement, cyclo_sqrt, real_quadratic_parts
from .polys import padd, pmul, pscale, ptrim, rational_roots


@dataclass(frozen=True)
class VeluIsogeny:
    """Isogeny with odd-order kernel given by one point from each {Q, -Q} pair."""

    source: WeierstrassModel
    target: WeierstrassModel
    kernel_half: tuple
    data: tuple  # per kernel point: (xQ, yQ, gx, gy, vQ, uQ)

    def __call__(self, P):
        if P is INFINITY:
            return P
        x, y = P
        E = self.source
        a1, a3 = E.a1, E.a3
        X, Y = x, y
        for xQ, yQ, gx, gy, vQ, uQ in self.data:
            if x == xQ:
                return INFINITY
            dx = x - xQ
            inv = 1 / dx
            inv2 = inv * inv
            X = X + vQ * inv + uQ * inv2
            Y = Y - (uQ * (2 * y + a1 * x + a3) * inv2 * inv + vQ * (a1 * dx + y - yQ) * inv2 + (a1 * uQ - gx * gy) * inv2)
        return (X, Y)

    def x_map_polys(self):
        """(numerator, denominator) of the x-coordinate map, coefficient lists."""
        den = [1]
        for xQ, *_ in self.data:
            den = pmul(den, pmul([-xQ, 1], [-xQ, 1]))
        num = pmul([0, 1], den)
        for xQ, _, _, _, vQ, uQ in self.data:
            rest = [1]
            for xR, *_ in self.data:
                if xR != xQ:
                    rest = pmul(rest, pmul([-xR, 1], [-xR, 1]))
            num = padd(num, padd(pmul(pscale([-xQ, 1], vQ), rest), pscale(rest, uQ)))
        return num, den


def velu(E: WeierstrassModel, kernel_half) -> VeluIsogeny:
    """Velu's formulas for a kernel of odd order (no 2-torsion)."""
    a1, a2, a3, a4, a6 = E.ainvs
    v = w = 0 * a1
    data = []
    for xQ, yQ in kernel_half:
        gx = 3 * xQ * xQ + 2 * a2 * xQ + a4 - a1 * yQ
        gy = -2 * yQ - a1 * xQ - a3
        vQ = 2 * gx - a1 * gy
        uQ = gy * gy
        v = v + vQ
        w = w + uQ + xQ * vQ
        data.append((xQ, yQ, gx, gy, vQ, uQ))
    target = WeierstrassModel(a1, a2, a3, a4 - 5 * v, a6 - E.b2 * v - 7 * w, E.base)
    return VeluIsogeny(E, target, tuple(kernel_half), tuple(data))


def five_kernel_half(E: WeierstrassModel, P):
    """{P, 2P} for a point of exact order 5."""
    if E.order(P, 5) != 5:
        raise ValueError("kernel generator must have exact order 5")
    return (P, E.mul(2, P))


# ---------------------------------------------------------------------------
# coordinate changes over K
# ---------------------------------------------------------------------------
@dataclass(frozen=True)
class CoordChange:
    """x = u^2 x' + r, y = u^3 y' + s u^2 x' + t, from a model to its transform."""

    u: object
    r: object
    s: object
    t: object

    def then(self, other: "CoordChange") -> "CoordChange":
        u1, r1, s1, t1 = self.u, self.r, self.s, self.t
        u2, r2, s2, t2 = other.u, other.r, other.s, other.t
        return CoordChange(u1 * u2, r1 + u1 * u1 * r2, s1 + u1 * s2, t1 + u1 * u1 * r2 * s1 + u1 ** 3 * t2)

    def apply_model(self, E: WeierstrassModel) -> WeierstrassModel:
        return E.change_coords(self.u, self.r, self.s, self.t)

    def __call__(self, P):
        if P is INFINITY:
            return P
        x, y = P
        xp = (x - self.r) / self.u ** 2
        yp = (y - self.s * (x - self.r) - self.t) / self.u ** 3
        return (xp, yp)


def tate_normal_form(E: WeierstrassModel, R):
    """Bring (E, R), R of order 5, to y^2 + (d+1)xy + dy = x^3 + dx^2 with R -> (0,0).

    Returns (d, CoordChange, model).
    """
    if E.order(R, 5) != 5:
        raise ValueError("point does not have exact order 5")
    xR, yR = R
    one = 1 + 0 * xR
    step = CoordChange(one, xR, 0 * xR, yR)
    F = step.apply_model(E)
    if not F.a3:
        raise ValueError("tangent at R is vertical (R of order 2)")
    s2 = CoordChange(one, 0 * xR, F.a4 / F.a3, 0 * xR)
    step = step.then(s2)
    F = s2.apply_model(F)
    if not F.a2:
        raise ValueError("R is a flex (order 3)")
    s3 = CoordChange(F.a3 / F.a2, 0 * xR, 0 * xR, 0 * xR)
    step = step.then(s3)
    F = s3.apply_model(F)
    d = F.a2
    if F.a3 != d or F.a1 != d + 1 or F.a4 or F.a6:
        raise ArithmeticError("normal form reduction failed")
    return d, step, F


def f_value(P, d=None):
    """f = -x^2 + y + xy on a Tate normal model (the function with divisor 5(0,0) - 5O)."""
    x, y = P
    return -x * x + y + x * y


# ---------------------------------------------------------------------------
# isogeny data for E_{u/v}
# ---------------------------------------------------------------------------
@dataclass(frozen=True)
class IsogenyData:
    u: int
    v: int
    source: WeierstrassModel
    eta: VeluIsogeny
    target: WeierstrassModel
    kernel_poly: tuple  # monic h(X) = X^2 + h1 X + h0 for ker(eta dual), rational
    dual: VeluIsogeny  # over K, kernel <R>
    back: Isomorphism  # dual.target -> source (rational)
    R: tuple  # generator of ker(eta dual) over K
    dtilde: CycloElement
    tau: CoordChange  # target (as model over K) -> E_dtilde

    def eta_dual(self, Q):
        """Dual isogeny E'(Q) -> E(Q) (K arithmetic, rational result)."""
        if Q is INFINITY:
            return Q
        Qk = (_to_k(Q[0]), _to_k(Q[1]))
        img = self.dual(Qk)
        if img is INFINITY:
            return img
        x, y = img[0].rational(), img[1].rational()
        return self.back((x, y))

    def tau_point(self, Q):
        if Q is INFINITY:
            return Q
        return self.tau((_to_k(Q[0]), _to_k(Q[1])))

    def dual_x_equation(self, x_target):
        """Polynomial in X' whose rational roots are x-coordinates of eta_dual-preimages."""
        num, den = self.dual.x_map_polys()
        b = self.back
        # x_E = (x'' - r)/u^2 with x'' = num/den   =>   num - (r + u^2 x_E) den = 0
        poly = padd(num, pscale(den, -_to_k(b.r + b.u ** 2 * x_target)))
        return [c.rational() for c in ptrim(poly)]

    def eta_x_equation(self, x_target):
        num, den = self.eta.x_map_polys()
        return padd(num, pscale(den, -mpq(x_target)))


def _to_k(a) -> CycloElement:
    return a if isinstance(a, CycloElement) else CycloElement((a,))


def _model_over_k(E: WeierstrassModel) -> WeierstrassModel:
    return WeierstrassModel(*(_to_k(a) for a in E.ainvs), base="K")


def dual_kernel_candidates(Ep: WeierstrassModel) -> list:
    """Monic rational quadratic factors of the 5-division polynomial of E'."""
    from sympy import Poly, Rational, symbols

    from .curve import division_polynomial_5

    X = symbols("X")
    psi = division_polynomial_5(Ep)
    poly = Poly([Rational(int(c.numerator), int(c.denominator)) for c in reversed(psi)], X, domain="QQ")
    out = []
    for fac, _ in poly.factor_list()[1]:
        if fac.degree() == 2:
            c2, c1, c0 = fac.all_coeffs()
            out.append((mpq(int((c0 / c2).p), int((c0 / c2).q)), mpq(int((c1 / c2).p), int((c1 / c2).q))))
    return out


def _point_from_kernel_poly(Ep_k: WeierstrassModel, h0, h1):
    """A point R over K with x(R) a root of X^2 + h1 X + h0."""
    disc = h1 * h1 - 4 * h0
    sq = cyclo_sqrt(CycloElement((disc,)))
    if sq is None:
        return None
    x = (-h1 + sq) / 2
    a1, a2, a3, a4, a6 = Ep_k.ainvs
    b = a1 * x + a3
    delta = b * b + 4 * (x * x * x + a2 * x * x + a4 * x + a6)
    if real_quadratic_parts(delta) is None:
        return None
    r = cyclo_sqrt(delta)
    if r is None:
        return None
    return (x, (-b + r) / 2)


def _fingerprint(c: CycloElement):
    from .cyclo import auxiliary_primes

    return tuple(c.reduce_mod(l.prime, l.root) for l in auxiliary_primes())


def isogeny_data(u: int, v: int, root_choice: int = 0) -> IsogenyData:
    """Velu quotient of the integral model of E_{u/v} and the dual / normal-form data.

    ``root_choice`` selects between the two y-coordinates of the kernel
    generator of the dual (0: smaller character fingerprint).
    """
    E = integral_model(u, v)
    P = (mpq(0), mpq(0))
    eta = velu(E, five_kernel_half(E, P))
    Ep = eta.target
    Ep_k = _model_over_k(Ep)
    E_k = _model_over_k(E)
    for h0, h1 in dual_kernel_candidates(Ep):
        R = _point_from_kernel_poly(Ep_k, h0, h1)
        if R is None:
            continue
        R_alt = Ep_k.neg(R)
        choices = sorted([R, R_alt], key=lambda pt: _fingerprint(pt[1]))
        R = choices[root_choice]
        if Ep_k.order(R, 5) != 5:
            continue
        dual = velu(Ep_k, five_kernel_half(Ep_k, R))
        F = dual.target
        if not all(a.is_rational() for a in F.ainvs):
            continue
        Fq = WeierstrassModel.over_q(*(a.rational() for a in F.ainvs))
        if Fq.j_invariant() != E.j_invariant():
            continue
        for sign in (1, -1):
            try:
                back = isomorphism(Fq, E, sign)
            except ValueError:
                break
            data = _assemble(u, v, E, eta, Ep, (h0, h1), dual, back, R)
            if _check_composite(data):
                return data
    raise ArithmeticError(f"no dual isogeny found for (u, v) = ({u}, {v})")


def _assemble(u, v, E, eta, Ep, h, dual, back, R):
    dt, tau, _ = tate_normal_form(_model_over_k(Ep), R)
    return IsogenyData(u, v, E, eta, Ep, (h[0], h[1]), dual, back, R, dt, tau)


def _check_composite(data: IsogenyData, trials: int = 3) -> bool:
    """eta_dual(eta(P)) == 5P for random points over a finite field."""
    from .fq import check_composite_mod_q

    return check_composite_mod_q(data, trials)


# ---------------------------------------------------------------------------
# the local factor at 5
# ---------------------------------------------------------------------------
def eta_prime_5val(u: int, v: int) -> tuple[mpq, int]:
    """(|eta'(0)|_5, dim coker eta over Q_5) from the reduction type at 5."""
    if math.gcd(u, v) != 1:
        raise ValueError("u, v must be coprime")
    if (u * v) % 5 == 0:
        return mpq(1), 0
    D = quadratic_form(u, v)
    v5 = valuation(D, 5) if D % 5 == 0 else 0
    if v5 == 0 or v5 == 2:
        return mpq(1), 1
    if v5 == 3:
        return mpq(1, 5), 2
    raise ArithmeticError(f"unexpected v_5(u^2+11uv-v^2) = {v5}")
