"""Reduction of curves and isogenies modulo a prime q = 1 mod 5 for spot checks."""
from __future__ import annotations

import random

from .curve import INFINITY, WeierstrassModel
from .cyclo import CycloElement, _sqrt_mod, auxiliary_primes


class ModQ:
    __slots__ = ("v", "q")

    def __init__(self, v, q):
        self.v = v % q
        self.q = q

    def _c(self, o):
        return o.v if isinstance(o, ModQ) else int(o) % self.q

    def __add__(self, o):
        return ModQ(self.v + self._c(o), self.q)

    __radd__ = __add__

    def __sub__(self, o):
        return ModQ(self.v - self._c(o), self.q)

    def __rsub__(self, o):
        return ModQ(self._c(o) - self.v, self.q)

    def __mul__(self, o):
        return ModQ(self.v * self._c(o), self.q)

    __rmul__ = __mul__

    def __neg__(self):
        return ModQ(-self.v, self.q)

    def __truediv__(self, o):
        return ModQ(self.v * pow(self._c(o), -1, self.q), self.q)

    def __rtruediv__(self, o):
        return ModQ(self._c(o) * pow(self.v, -1, self.q), self.q)

    def __pow__(self, n):
        return ModQ(pow(self.v, n, self.q), self.q)

    def __eq__(self, o):
        return self.v == self._c(o)

    def __hash__(self):
        return hash(self.v)

    def __bool__(self):
        return self.v != 0

    def __repr__(self):
        return f"{self.v} mod {self.q}"


def reduce(a, q: int, root: int) -> ModQ:
    if isinstance(a, CycloElement):
        r = a.reduce_mod(q, root)
        if r is None:
            raise ZeroDivisionError
        return ModQ(r, q)
    num, den = int(a.numerator), int(a.denominator)
    if den % q == 0:
        raise ZeroDivisionError
    return ModQ(num * pow(den, -1, q), q)


def reduce_model(E: WeierstrassModel, q, root) -> WeierstrassModel:
    return WeierstrassModel(*(reduce(a, q, root) for a in E.ainvs), base="Fq")


def random_point(E: WeierstrassModel, rng: random.Random):
    q = E.a1.q
    while True:
        x = ModQ(rng.randrange(q), q)
        a1, a2, a3, a4, a6 = E.ainvs
        b = a1 * x + a3
        disc = b * b + 4 * (x * x * x + a2 * x * x + a4 * x + a6)
        if disc.v == 0 or pow(disc.v, (q - 1) // 2, q) == 1:
            r = ModQ(_sqrt_mod(disc.v, q), q)
            return (x, (r - b) / 2)


def _reduce_velu(iso, q, root):
    from .isogeny import VeluIsogeny

    src = reduce_model(iso.source, q, root)
    tgt = reduce_model(iso.target, q, root)
    data = tuple(tuple(reduce(a, q, root) for a in row) for row in iso.data)
    half = tuple((reduce(x, q, root), reduce(y, q, root)) for x, y in iso.kernel_half)
    return VeluIsogeny(src, tgt, half, data)


def check_composite_mod_q(data, trials: int = 3, seed: int = 0) -> bool:
    """eta_dual o eta == [5] on random points of E over F_q for a few q = 1 mod 5."""
    from .curve import Isomorphism

    rng = random.Random(seed)
    checked = 0
    for lam in auxiliary_primes():
        q, root = lam.prime, lam.root
        try:
            E = reduce_model(data.source, q, root)
            if not E.discriminant:
                continue
            eta = _reduce_velu(data.eta, q, root)
            dual = _reduce_velu(data.dual, q, root)
            b = data.back
            back = Isomorphism(dual.target, E, *(reduce(c, q, root) for c in (b.u, b.r, b.s, b.t)))
        except ZeroDivisionError:
            continue
        for _ in range(trials):
            P = random_point(E, rng)
            lhs = back(dual(eta(P)))
            if lhs != E.mul(5, P):
                return False
        checked += 1
        if checked >= 2:
            return True
    return checked > 0
