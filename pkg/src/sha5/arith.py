"""Exact integer arithmetic helpers: factorization, Q(S,5) classes, ranks over GF(5)."""
from __future__ import annotations

import bisect
import math
import random
from dataclasses import dataclass
from typing import Iterable, Sequence

from gmpy2 import mpq, mpz

BigRational = mpq

TRIAL_LIMIT = 10**6
_MR_ROUNDS = 40


def _small_primes(limit: int) -> list[int]:
    sieve = bytearray([1]) * (limit + 1)
    sieve[0:2] = b"\x00\x00"
    for i in range(2, math.isqrt(limit) + 1):
        if sieve[i]:
            sieve[i * i :: i] = bytearray(len(range(i * i, limit + 1, i)))
    return [i for i in range(limit + 1) if sieve[i]]


_PRIMES_CACHE: list[int] = []
_SIEVED = 0


def small_primes(limit: int = TRIAL_LIMIT) -> list[int]:
    """Primes up to ``limit`` (cached sieve of Eratosthenes)."""
    global _PRIMES_CACHE, _SIEVED
    if limit > _SIEVED:
        _SIEVED = max(limit, TRIAL_LIMIT)
        _PRIMES_CACHE = _small_primes(_SIEVED)
    if limit == _SIEVED:
        return _PRIMES_CACHE
    return _PRIMES_CACHE[: bisect.bisect_right(_PRIMES_CACHE, limit)]


def is_probable_prime(n: int, rounds: int = _MR_ROUNDS) -> bool:
    """Miller-Rabin with ``rounds`` random bases (deterministic seed)."""
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    rng = random.Random(n)
    for _ in range(rounds):
        a = rng.randrange(2, n - 1)
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _brent(n: int, seed: int) -> int:
    """One run of Pollard rho with Brent's cycle detection; returns a factor or n."""
    rng = random.Random(seed)
    y, c, m = rng.randrange(1, n), rng.randrange(1, n), 128
    g = r = q = 1
    x = ys = y
    while g == 1:
        x = y
        for _ in range(r):
            y = (y * y + c) % n
        k = 0
        while k < r and g == 1:
            ys = y
            for _ in range(min(m, r - k)):
                y = (y * y + c) % n
                q = q * abs(x - y) % n
            g = math.gcd(q, n)
            k += m
        r *= 2
    if g == n:
        g = 1
        while g == 1:
            ys = (ys * ys + c) % n
            g = math.gcd(abs(x - ys), n)
    return g


def _split(n: int) -> int:
    seed = 0
    while True:
        g = _brent(n, seed)
        if 1 < g < n:
            return g
        seed += 1


@dataclass(frozen=True)
class PrimeFactorization:
    factors: tuple[tuple[int, int], ...]

    def primes(self) -> list[int]:
        return [p for p, _ in self.factors]

    def as_dict(self) -> dict[int, int]:
        return dict(self.factors)

    def value(self) -> int:
        out = 1
        for p, e in self.factors:
            out *= p**e
        return out


def factorize(n: int) -> PrimeFactorization:
    """Factor a nonzero integer (sign ignored).

    Trial division by primes below ``TRIAL_LIMIT`` (stopping once p^2 exceeds
    the cofactor), then Pollard-Brent splitting of whatever is left.
    """
    n = abs(int(n))
    if n == 0:
        raise ValueError("cannot factor 0")
    found: dict[int, int] = {}
    for p in small_primes():
        if p * p > n:
            break
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            found[p] = e
    stack = [n] if n > 1 else []
    while stack:
        m = stack.pop()
        if m < TRIAL_LIMIT**2 or is_probable_prime(m):
            found[m] = found.get(m, 0) + 1
            continue
        r = math.isqrt(m)
        if r * r == m:
            stack += [r, r]
            continue
        g = _split(m)
        stack += [g, m // g]
    return PrimeFactorization(tuple(sorted(found.items())))


def prime_divisors(n: int) -> list[int]:
    return factorize(n).primes()


def valuation(n, p: int) -> int:
    """p-adic valuation of a nonzero integer or rational."""
    q = mpq(n)
    if q == 0:
        raise ValueError("valuation of 0")
    num, den = int(q.numerator), int(q.denominator)
    v = 0
    while num % p == 0:
        num //= p
        v += 1
    while den % p == 0:
        den //= p
        v -= 1
    return v


@dataclass(frozen=True)
class QS5Vector:
    """Class in Q*/Q*^5 with support in ``support``: exponents mod 5 per prime."""

    support: tuple[int, ...]
    exponents: tuple[int, ...]

    def __post_init__(self):
        if list(self.support) != sorted(set(self.support)):
            raise ValueError("support must be strictly increasing")
        if len(self.support) != len(self.exponents):
            raise ValueError("support/exponent length mismatch")

    def __add__(self, other: QS5Vector) -> QS5Vector:
        if self.support != other.support:
            raise ValueError("different supports")
        return QS5Vector(self.support, tuple((a + b) % 5 for a, b in zip(self.exponents, other.exponents)))

    def is_zero(self) -> bool:
        return not any(self.exponents)

    def as_dict(self) -> dict[int, int]:
        return {p: e for p, e in zip(self.support, self.exponents) if e}

    def on(self, support: Sequence[int]) -> list[int]:
        """Exponent row over a (larger) ordered support."""
        d = self.as_dict()
        extra = set(d) - set(support)
        if extra:
            raise ValueError(f"primes {sorted(extra)} not in target support")
        return [d.get(p, 0) for p in support]


def qs5_class(x, S: Iterable[int]) -> QS5Vector:
    """Exponent vector of x in Q(S,5).

    Raises ``ArithmeticError`` if x has a prime outside S with valuation
    not divisible by 5.
    """
    q = mpq(x)
    if q == 0:
        raise ValueError("zero has no class")
    support = tuple(sorted(set(int(p) for p in S)))
    num, den = abs(int(q.numerator)), int(q.denominator)
    exps = []
    for p in support:
        e = 0
        while num % p == 0:
            num //= p
            e += 1
        while den % p == 0:
            den //= p
            e -= 1
        exps.append(e % 5)
    for rest in (num, den):
        if rest != 1:
            if not _is_fifth_power(rest):
                raise ArithmeticError(f"{x} has support outside S={list(support)}")
    return QS5Vector(support, tuple(exps))


def _is_fifth_power(n: int) -> bool:
    import gmpy2

    r, exact = gmpy2.iroot(mpz(n), 5)
    return bool(exact)


def f5_rank(rows: Sequence[Sequence[int]]) -> int:
    """Row rank over GF(5) by Gaussian elimination."""
    mat = [[int(a) % 5 for a in row] for row in rows]
    mat = [row for row in mat if any(row)]
    if not mat:
        return 0
    ncols = len(mat[0])
    if any(len(row) != ncols for row in mat):
        raise ValueError("matrix is not rectangular")
    rank = 0
    for col in range(ncols):
        pivot = next((i for i in range(rank, len(mat)) if mat[i][col]), None)
        if pivot is None:
            continue
        mat[rank], mat[pivot] = mat[pivot], mat[rank]
        inv = pow(mat[rank][col], -1, 5)
        prow = [a * inv % 5 for a in mat[rank]]
        mat[rank] = prow
        for i in range(len(mat)):
            if i != rank and mat[i][col]:
                f = mat[i][col]
                mat[i] = [(a - f * b) % 5 for a, b in zip(mat[i], prow)]
        rank += 1
        if rank == len(mat):
            break
    return rank


def f5_kernel(rows: Sequence[Sequence[int]]) -> list[list[int]]:
    """Basis of the left kernel {c : sum c_i rows_i = 0} over GF(5)."""
    n = len(rows)
    if n == 0:
        return []
    ncols = len(rows[0])
    # augment with identity and row reduce
    aug = [[int(a) % 5 for a in row] + [1 if j == i else 0 for j in range(n)] for i, row in enumerate(rows)]
    rank = 0
    for col in range(ncols):
        pivot = next((i for i in range(rank, n) if aug[i][col]), None)
        if pivot is None:
            continue
        aug[rank], aug[pivot] = aug[pivot], aug[rank]
        inv = pow(aug[rank][col], -1, 5)
        aug[rank] = [a * inv % 5 for a in aug[rank]]
        for i in range(n):
            if i != rank and aug[i][col]:
                f = aug[i][col]
                aug[i] = [(a - f * b) % 5 for a, b in zip(aug[i], aug[rank])]
        rank += 1
    return [row[ncols:] for row in aug[rank:]]
