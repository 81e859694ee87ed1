"""Arithmetic in K = Q(zeta_5): elements, prime ideal generators, K(S,5) classes.

Elements are stored in the power basis 1, z, z^2, z^3 (z = zeta_5) with
rational coefficients.  Classes modulo fifth powers are computed without
factoring norms: valuations come from exact division by fixed prime
generators and the unit part from quintic residue characters.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence

from gmpy2 import mpq, mpz

from .arith import is_probable_prime

_ZERO = mpq(0)


class CycloElement:
    """c0 + c1 z + c2 z^2 + c3 z^3 with z a primitive 5th root of unity."""

    __slots__ = ("c",)

    def __init__(self, coeffs=(0, 0, 0, 0)):
        c = [mpq(a) for a in coeffs]
        if len(c) > 4:
            c = _reduce5(c)
        c += [_ZERO] * (4 - len(c))
        self.c = tuple(c)

    @classmethod
    def _raw(cls, c):
        obj = cls.__new__(cls)
        obj.c = c
        return obj

    # -- ring operations -------------------------------------------------
    def __add__(self, other):
        o = _coerce(other)
        if o is NotImplemented:
            return o
        return CycloElement._raw(tuple(a + b for a, b in zip(self.c, o.c)))

    __radd__ = __add__

    def __neg__(self):
        return CycloElement._raw(tuple(-a for a in self.c))

    def __sub__(self, other):
        o = _coerce(other)
        if o is NotImplemented:
            return o
        return CycloElement._raw(tuple(a - b for a, b in zip(self.c, o.c)))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, CycloElement):
            try:
                s = mpq(other)
            except TypeError:
                return NotImplemented
            return CycloElement._raw(tuple(a * s for a in self.c))
        a, b = self.c, other.c
        e = [_ZERO] * 5
        for i in range(4):
            ai = a[i]
            if ai:
                for j in range(4):
                    if b[j]:
                        e[(i + j) % 5] += ai * b[j]
        e4 = e[4]
        return CycloElement._raw((e[0] - e4, e[1] - e4, e[2] - e4, e[3] - e4))

    __rmul__ = __mul__

    def __truediv__(self, other):
        if not isinstance(other, CycloElement):
            s = mpq(other)
            return CycloElement._raw(tuple(a / s for a in self.c))
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        result, base = ONE, self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other):
        o = _coerce(other)
        if o is NotImplemented:
            return False
        return self.c == o.c

    def __hash__(self):
        return hash(self.c)

    def __bool__(self):
        return any(self.c)

    def __repr__(self):
        return f"CycloElement({[str(a) for a in self.c]})"

    # -- field structure --------------------------------------------------
    def conj(self, k: int) -> CycloElement:
        """Galois automorphism z -> z^k (k in 1..4)."""
        e = [_ZERO] * 5
        for i, a in enumerate(self.c):
            e[(i * k) % 5] += a
        e4 = e[4]
        return CycloElement._raw((e[0] - e4, e[1] - e4, e[2] - e4, e[3] - e4))

    def norm(self) -> mpq:
        n = self * self.conj(2) * self.conj(3) * self.conj(4)
        return n.c[0]

    def inverse(self) -> CycloElement:
        if not self:
            raise ZeroDivisionError("inverse of 0 in Q(zeta_5)")
        partial = self.conj(2) * self.conj(3) * self.conj(4)
        n = (self * partial).c[0]
        return CycloElement._raw(tuple(a / n for a in partial.c))

    def is_rational(self) -> bool:
        return not (self.c[1] or self.c[2] or self.c[3])

    def rational(self) -> mpq:
        if not self.is_rational():
            raise ValueError(f"{self} is not rational")
        return self.c[0]

    def denominator(self) -> int:
        d = mpz(1)
        for a in self.c:
            d = d * a.denominator // _gcd(d, a.denominator)
        return int(d)

    def integral_coeffs(self) -> tuple[int, ...]:
        return tuple(int(a) for a in self.c)

    def is_integral(self) -> bool:
        return all(a.denominator == 1 for a in self.c)

    def reduce_mod(self, prime: int, root: int) -> int | None:
        """Image under z -> root in F_prime, or None if a denominator vanishes."""
        acc, pw = 0, 1
        for a in self.c:
            den = int(a.denominator) % prime
            if den == 0:
                return None
            acc += int(a.numerator) % prime * pow(den, -1, prime) * pw
            pw = pw * root % prime
        return acc % prime


def _gcd(a, b):
    import gmpy2

    return gmpy2.gcd(a, b)


def _reduce5(e):
    e = list(e) + [_ZERO] * (8 - len(e))
    f = [_ZERO] * 5
    for i, a in enumerate(e):
        f[i % 5] += a
    return [f[i] - f[4] for i in range(4)]


def _coerce(x):
    if isinstance(x, CycloElement):
        return x
    try:
        return CycloElement._raw((mpq(x), _ZERO, _ZERO, _ZERO))
    except TypeError:
        return NotImplemented


ONE = CycloElement((1,))
ZETA = CycloElement((0, 1))
SQRT5 = 1 + 2 * (ZETA + ZETA.conj(4))


# ---------------------------------------------------------------------------
# square roots (used for points of order 5 on the isogenous curve)
# ---------------------------------------------------------------------------
def _rational_sqrt(q) -> mpq | None:
    import gmpy2

    q = mpq(q)
    if q < 0:
        return None
    n, ok1 = gmpy2.iroot(q.numerator, 2)
    d, ok2 = gmpy2.iroot(q.denominator, 2)
    return mpq(n, d) if ok1 and ok2 else None


def _sqrt_real_quadratic(a, b) -> tuple[mpq, mpq] | None:
    """Square root of a + b*sqrt5 inside Q(sqrt5), as (x, y) with (x + y sqrt5)^2 = a + b sqrt5."""
    a, b = mpq(a), mpq(b)
    if b == 0:
        r = _rational_sqrt(a)
        if r is not None:
            return r, _ZERO
        r = _rational_sqrt(a / 5)
        return (_ZERO, r) if r is not None else None
    n = _rational_sqrt(a * a - 5 * b * b)
    if n is None:
        return None
    for s in (n, -n):
        x = _rational_sqrt((a + s) / 2)
        if x:
            y = b / (2 * x)
            if x * x + 5 * y * y == a:
                return x, y
    return None


def real_quadratic_parts(x: CycloElement) -> tuple[mpq, mpq] | None:
    """Write x = a + b*sqrt5 if x lies in Q(sqrt5), else None."""
    # sqrt5 = -1 - 2 z^2 - 2 z^3 in the reduced basis
    c0, c1, c2, c3 = x.c
    if c1 or c2 != c3:
        return None
    b = -c2 / 2
    return c0 + b, b


def cyclo_sqrt(x: CycloElement) -> CycloElement | None:
    """A square root of x in K when x lies in Q(sqrt5); None if there is none.

    K = Q(sqrt5)(sqrt(alpha)) with alpha = (z - z^4)^2 = (-5 - sqrt5)/2, so
    x has a root in K iff x or x/alpha is a square in Q(sqrt5).
    """
    parts = real_quadratic_parts(x)
    if parts is None:
        raise ValueError("cyclo_sqrt only handles elements of Q(sqrt5)")
    r = _sqrt_real_quadratic(*parts)
    if r is not None:
        return r[0] + r[1] * SQRT5
    beta = ZETA - ZETA.conj(4)
    alpha = beta * beta
    q = real_quadratic_parts(x / alpha)
    r = _sqrt_real_quadratic(*q)
    if r is not None:
        return (r[0] + r[1] * SQRT5) * beta
    return None


# ---------------------------------------------------------------------------
# primes of K
# ---------------------------------------------------------------------------
def splitting_type(p: int) -> tuple[int, int, bool]:
    """(residue degree f, number of primes g, ramified) for a rational prime p."""
    if p == 5:
        return 1, 1, True
    f = 1
    while pow(p, f, 5) != 1:
        f += 1
    return f, 4 // f, False


@dataclass(frozen=True)
class PrimeIdealGen:
    rational_prime: int
    generator: CycloElement
    residue_degree: int
    index: int
    label: int  # the root r (f=1) or trace s (f=2) identifying the prime; 0 otherwise

    @property
    def key(self) -> tuple[int, int]:
        return (self.rational_prime, self.index)

    @property
    def ramification(self) -> int:
        return 4 if self.rational_prime == 5 else 1

    @property
    def cofactor(self) -> CycloElement:
        """Norm(t) / t, an element of Z[z]."""
        t = self.generator
        return t.conj(2) * t.conj(3) * t.conj(4)

    @property
    def norm(self) -> int:
        return int(self.generator.norm())


# Gram matrix of the trace form sum |sigma(x)|^2 in the basis 1, z, z^2, z^3
_GRAM = [[4 if i == j else -1 for j in range(4)] for i in range(4)]


def _form(a, b):
    return sum(a[i] * _GRAM[i][j] * b[j] for i in range(4) for j in range(4))


def _lll(basis: list[list[int]], delta=mpq(3, 4)) -> list[list[int]]:
    """LLL reduction of integer vectors with respect to the trace form."""
    b = [list(v) for v in basis]
    n = len(b)

    def gso():
        bstar, mu = [], [[mpq(0)] * n for _ in range(n)]
        norms = []
        for i in range(n):
            v = [mpq(x) for x in b[i]]
            for j in range(i):
                mu[i][j] = _form(b[i], bstar[j]) / norms[j]
                v = [x - mu[i][j] * y for x, y in zip(v, bstar[j])]
            bstar.append(v)
            norms.append(_form(v, v))
        return mu, norms

    k = 1
    mu, norms = gso()
    while k < n:
        for j in range(k - 1, -1, -1):
            q = round(mu[k][j])
            if q:
                b[k] = [x - q * y for x, y in zip(b[k], b[j])]
                mu, norms = gso()
        if norms[k] >= (delta - mu[k][k - 1] ** 2) * norms[k - 1]:
            k += 1
        else:
            b[k], b[k - 1] = b[k - 1], b[k]
            mu, norms = gso()
            k = max(k - 1, 1)
    return b


def _roots_of_unity_order5(p: int) -> list[int]:
    if p % 5 != 1:
        return []
    g = 2
    while True:
        r = pow(g, (p - 1) // 5, p)
        if r != 1:
            return sorted(pow(r, k, p) for k in range(1, 5))
        g += 1


def _sqrt_mod(a: int, p: int) -> int:
    """Tonelli-Shanks square root of a quadratic residue a mod an odd prime p."""
    a %= p
    if a == 0:
        return 0
    q, s = p - 1, 0
    while q % 2 == 0:
        q //= 2
        s += 1
    z = 2
    while pow(z, (p - 1) // 2, p) != p - 1:
        z += 1
    m, c, t, r = s, pow(z, q, p), pow(a, q, p), pow(a, (q + 1) // 2, p)
    while t != 1:
        i, t2 = 0, t
        while t2 != 1:
            t2 = t2 * t2 % p
            i += 1
        bb = pow(c, 1 << (m - i - 1), p)
        m, c, t, r = i, bb * bb % p, t * bb * bb % p, r * bb % p
    return r


def _search_generator(basis: list[list[int]], target: int, max_radius: int = 12) -> CycloElement:
    red = _lll(basis)
    for radius in range(1, max_radius + 1):
        for coeffs in itertools.product(range(-radius, radius + 1), repeat=4):
            if max(abs(c) for c in coeffs) != radius:
                continue
            v = [sum(c * red[i][j] for i, c in enumerate(coeffs)) for j in range(4)]
            x = CycloElement(v)
            if abs(x.norm()) == target:
                return x
    raise RuntimeError(f"no generator of norm {target} found")


@lru_cache(maxsize=None)
def prime_generators(p: int) -> tuple[PrimeIdealGen, ...]:
    """Generators of the primes of K above p, in a fixed deterministic order.

    Split primes (p = 1 mod 5) are ordered by the root r of unity mod p with
    z = r modulo the prime; primes with f = 2 by the root s of s^2 + s - 1
    with z^2 - s z + 1 in the prime.
    """
    if not is_probable_prime(p):
        raise ValueError(f"{p} is not prime")
    f, g, _ = splitting_type(p)
    if p == 5:
        return (PrimeIdealGen(5, CycloElement((1, -1)), 1, 0, 0),)
    if f == 4:
        return (PrimeIdealGen(p, CycloElement((p,)), 4, 0, 0),)
    out = []
    if f == 1:
        for idx, r in enumerate(_roots_of_unity_order5(p)):
            basis = [[p, 0, 0, 0], [-r, 1, 0, 0], [-r * r % p, 0, 1, 0], [-pow(r, 3, p), 0, 0, 1]]
            t = _search_generator(basis, p)
            out.append(PrimeIdealGen(p, t, 1, idx, r))
    else:
        # s^2 + s - 1 = 0 mod p has two roots since 5 is a square mod p
        sq = _sqrt_mod(5, p)
        inv2 = pow(2, -1, p)
        roots = sorted({(-1 + sq) * inv2 % p, (-1 - sq) * inv2 % p})
        for idx, s in enumerate(roots):
            # ideal (p, z^2 - s z + 1): basis p, p z, z^2 - s z + 1, z^3 - s z^2 + z
            basis = [[p, 0, 0, 0], [0, p, 0, 0], [1, -s, 1, 0], [0, 1, -s, 1]]
            t = _search_generator(basis, p * p)
            out.append(PrimeIdealGen(p, t, 2, idx, s))
    return _normalise_product(p, out)


def _normalise_product(p: int, gens: list[PrimeIdealGen]) -> tuple[PrimeIdealGen, ...]:
    """Rescale the last generator by a unit so that the generators multiply to p."""
    prod = ONE
    for t in gens:
        prod = prod * t.generator
    eps = CycloElement((p,)) / prod
    if not eps.is_integral() or abs(eps.norm()) != 1:
        raise RuntimeError(f"generators above {p} do not multiply to p up to a unit")
    last = gens[-1]
    gens[-1] = PrimeIdealGen(p, last.generator * eps, last.residue_degree, last.index, last.label)
    return tuple(gens)


def primes_above(S: Iterable[int]) -> list[PrimeIdealGen]:
    """All prime generators above the rational primes in S, ordered by (p, index)."""
    return [t for p in sorted(set(S)) for t in prime_generators(p)]


def valuation_at(x: CycloElement, t: PrimeIdealGen) -> int:
    """Valuation of the fractional ideal (x) at the prime generated by t."""
    if not x:
        raise ValueError("valuation of 0")
    p = t.rational_prime
    den = x.denominator()
    v_den = 0
    while den % p == 0:
        den //= p
        v_den += 1
    y = x * x.denominator()
    cof, n = t.cofactor, abs(t.norm)
    v = 0
    while True:
        # quick necessary condition: Norm(t) | Norm(y) is too costly; test divisibility directly
        z = y * cof
        if all(int(a.numerator) % n == 0 for a in z.c):
            y = CycloElement._raw(tuple(a / n for a in z.c))
            v += 1
        else:
            break
    return v - t.ramification * v_den


# ---------------------------------------------------------------------------
# unit classes mod fifth powers via quintic residue characters
# ---------------------------------------------------------------------------
UNIT_BASIS = (ZETA, 1 + ZETA)


@dataclass(frozen=True)
class CharacterPrime:
    prime: int
    root: int  # image of z modulo a fixed prime above `prime`
    unit_chars: tuple[int, int]


def _dlog5(w: int, base: int, p: int) -> int:
    acc = 1
    for k in range(5):
        if acc == w:
            return k
        acc = acc * base % p
    raise ArithmeticError("not a 5th root of unity")


def quintic_character(x: CycloElement, lam: CharacterPrime) -> int | None:
    """Discrete log (base the image of z) of x^((l-1)/5) modulo the fixed prime over l."""
    p = lam.prime
    red = x.reduce_mod(p, lam.root)
    if red is None or red == 0:
        return None
    return _dlog5(pow(red, (p - 1) // 5, p), lam.root, p)


@lru_cache(maxsize=None)
def auxiliary_primes(count: int = 8, start: int = 10**6) -> tuple[CharacterPrime, ...]:
    """First ``count`` primes l = 1 mod 5 above ``start``, with unit character values."""
    out = []
    q = start + 1
    while len(out) < count:
        if q % 5 == 1 and is_probable_prime(q):
            r = _roots_of_unity_order5(q)[0]
            cp = CharacterPrime(q, r, (0, 0))
            chars = tuple(quintic_character(u, cp) for u in UNIT_BASIS)
            out.append(CharacterPrime(q, r, chars))
        q += 1
    return tuple(out)


def _solve_units(rows: list[tuple[int, int, int]]) -> tuple[int, int]:
    """Solve a0*c0 + a1*c1 = target over GF(5) from rows (c0, c1, target)."""
    for (c0, c1, t0), (d0, d1, t1) in itertools.combinations(rows, 2):
        det = (c0 * d1 - c1 * d0) % 5
        if det:
            inv = pow(det, -1, 5)
            a0 = (t0 * d1 - c1 * t1) * inv % 5
            a1 = (c0 * t1 - t0 * d0) * inv % 5
            for e0, e1, tt in rows:
                if (a0 * e0 + a1 * e1 - tt) % 5:
                    raise ArithmeticError("element is not a unit times a fifth power (inconsistent characters)")
            return a0, a1
    raise RuntimeError("auxiliary character primes do not separate the unit group; enlarge the pool")


def unit_class(u: CycloElement, pool: Sequence[CharacterPrime] | None = None) -> tuple[int, int]:
    """Exponents (a0, a1) with u = z^a0 (1+z)^a1 modulo fifth powers."""
    return _unit_class_from(u, [], pool)


def _unit_class_from(x: CycloElement, corrections, pool) -> tuple[int, int]:
    pool = auxiliary_primes() if pool is None else pool
    rows = []
    for lam in pool:
        chi = quintic_character(x, lam)
        if chi is None:
            continue
        bad = False
        for t, e in corrections:
            ct = quintic_character(t.generator, lam)
            if ct is None:
                bad = True
                break
            chi -= e * ct
        if bad:
            continue
        rows.append((lam.unit_chars[0], lam.unit_chars[1], chi % 5))
    return _solve_units(rows)


@dataclass(frozen=True)
class KS5Vector:
    """Class in K(S,5): unit exponents for (z, 1+z) and exponents at the primes of S."""

    unit_exponents: tuple[int, int]
    support: tuple[tuple[int, int], ...]  # keys (p, index)
    exponents: tuple[int, ...]

    def is_zero(self) -> bool:
        return not any(self.unit_exponents) and not any(self.exponents)

    def as_dict(self) -> dict[tuple[int, int], int]:
        return {k: e for k, e in zip(self.support, self.exponents) if e}

    def on(self, support: Sequence[tuple[int, int]]) -> list[int]:
        """Row (a0, a1, exponents over ``support``)."""
        d = self.as_dict()
        extra = set(d) - set(support)
        if extra:
            raise ValueError(f"primes {sorted(extra)} not in target support")
        return list(self.unit_exponents) + [d.get(k, 0) for k in support]

    def __add__(self, other: KS5Vector) -> KS5Vector:
        if self.support != other.support:
            raise ValueError("different supports")
        return KS5Vector(
            tuple((a + b) % 5 for a, b in zip(self.unit_exponents, other.unit_exponents)),
            self.support,
            tuple((a + b) % 5 for a, b in zip(self.exponents, other.exponents)),
        )


def ks5_class(x: CycloElement, S: Sequence[PrimeIdealGen], pool=None) -> KS5Vector:
    """Class of x in K(S,5); never factors Norm(x)."""
    if not x:
        raise ValueError("zero has no class")
    exps = [valuation_at(x, t) % 5 for t in S]
    units = _unit_class_from(x, [(t, e) for t, e in zip(S, exps) if e], pool)
    return KS5Vector(units, tuple(t.key for t in S), tuple(exps))
