"""Analytic rank of E_{u/v} from the L-series at s = 1.

Fourier coefficients come from brute-force point counts over F_p (numpy),
the root number from the theta-function functional equation, and the
derivatives from the usual rapidly converging series in G_r(2 pi n / sqrt N).
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import exp1

from .arith import small_primes
from .curve import ReductionData, WeierstrassModel

ZERO_THRESHOLD = 1e-3
TERMS_PER_SQRT_N = 8


@dataclass(frozen=True)
class AnalyticRank:
    rank: int | None
    tag: str  # "certain_0_or_1" | "heuristic" | "unknown"
    root_number: int
    value: float  # first derivative judged nonzero (or the last one computed)


def ap_good(ainvs, p: int) -> int:
    """a_p = p + 1 - #E(F_p) for a prime of good reduction (integral model)."""
    a1, a2, a3, a4, a6 = (int(a) % p for a in ainvs)
    if p == 2:
        count = 1
        for x in range(2):
            for y in range(2):
                if (y * y + a1 * x * y + a3 * y - x ** 3 - a2 * x * x - a4 * x - a6) % 2 == 0:
                    count += 1
        return p + 1 - count
    x = np.arange(p, dtype=np.int64)
    b = (a1 * x + a3) % p
    c = (((x * x) % p + a2 * x) % p * x + a4 * x + a6) % p
    disc = (b * b + 4 * c) % p
    sq = np.full(p, -1, dtype=np.int64)
    sq[(x * x) % p] = 1
    sq[0] = 0
    return -int(sq[disc].sum())


def bad_ap(tag: str) -> int:
    return {"split_mult": 1, "nonsplit_mult": -1, "additive": 0}[tag]


def an_coefficients(E: WeierstrassModel, red: ReductionData, nmax: int) -> np.ndarray:
    """a_1..a_nmax (index 0 unused) as float64."""
    ainvs = [int(a) for a in E.ainvs]
    a = np.zeros(nmax + 1, dtype=np.float64)
    a[1] = 1.0
    primes = small_primes(max(nmax, 2))
    # multiplicative build: for each prime power, fill multiples coprime to p
    done = np.zeros(nmax + 1, dtype=bool)
    done[1] = True
    # iterate over n in increasing order using smallest prime factor
    spf = np.zeros(nmax + 1, dtype=np.int64)
    for p in primes:
        if p > nmax:
            break
        sl = spf[p::p]
        sl[sl == 0] = p
    for p in primes:
        if p > nmax:
            break
        tag = red.tag(p)
        ap = ap_good(ainvs, p) if tag == "good" else bad_ap(tag)
        # prime powers
        pk, prev, cur = p, 1.0, float(ap)
        powers = []
        while pk <= nmax:
            powers.append((pk, cur))
            if tag == "good":
                prev, cur = cur, ap * cur - p * prev
            else:
                prev, cur = cur, ap * cur
            pk *= p
        for pk, val in powers:
            a[pk] = val
    # fill composite n = p^k * m with gcd(p, m) = 1, m > 1
    for n in range(2, nmax + 1):
        p = int(spf[n])
        m, pk = n, 1
        while m % p == 0:
            m //= p
            pk *= p
        if m > 1:
            a[n] = a[pk] * a[m]
    return a


def _theta(a: np.ndarray, N: int, t: float) -> float:
    n = np.arange(len(a), dtype=np.float64)
    return float(np.sum(a[1:] * np.exp(-2 * math.pi * n[1:] * t / math.sqrt(N))))


def root_number(a: np.ndarray, N: int) -> int:
    """w with F(1/t) = w t^2 F(t) for F(t) = sum a_n exp(-2 pi n t / sqrt N)."""
    for t in (1.1, 1.2, 1.05, 1.3, 1.15):
        f1, f2 = _theta(a, N, t), _theta(a, N, 1 / t)
        if abs(f1) < 1e-6:
            continue
        w = f2 / (t * t * f1)
        if abs(abs(w) - 1) < 1e-6:
            return 1 if w > 0 else -1
    raise ArithmeticError("could not determine the root number")


def g_function(r: int, x: np.ndarray) -> np.ndarray:
    """G_r(x) = int_1^oo e^{-xy} (log y)^{r-1}/(r-1)! dy/y  (G_0 = e^{-x})."""
    x = np.asarray(x, dtype=np.float64)
    if r == 0:
        return np.exp(-x)
    if r == 1:
        return exp1(x)
    nodes, weights = np.polynomial.legendre.leggauss(200)
    out = np.zeros_like(x)
    upper = np.log(np.maximum(70.0 / x, 1.0 + 1e-12)) + 0.5
    for i, (xi, T) in enumerate(zip(x, upper)):
        if xi > 70:
            continue
        t = 0.5 * T * (nodes + 1)
        vals = np.exp(-xi * np.exp(t)) * t ** (r - 1)
        out[i] = 0.5 * T * np.dot(weights, vals) / math.factorial(r - 1)
    return out


def l_derivative(a: np.ndarray, N: int, r: int) -> float:
    """L^(r)(E, 1) assuming the root number is (-1)^r."""
    n = np.arange(1, len(a), dtype=np.float64)
    x = 2 * math.pi * n / math.sqrt(N)
    mask = x < 70
    return 2 * math.factorial(r) * float(np.sum(a[1:][mask] / n[mask] * g_function(r, x[mask])))


def analytic_rank(E: WeierstrassModel, red: ReductionData, threshold: float = ZERO_THRESHOLD, max_rank: int = 4) -> AnalyticRank:
    N = red.conductor
    nmax = int(math.ceil(TERMS_PER_SQRT_N * math.sqrt(N))) + 10
    a = an_coefficients(E, red, nmax)
    try:
        w = root_number(a, N)
    except ArithmeticError:
        return AnalyticRank(None, "unknown", 0, 0.0)
    r = 0 if w == 1 else 1
    val = 0.0
    while r <= max_rank:
        val = l_derivative(a, N, r)
        if abs(val) >= threshold:
            return AnalyticRank(r, "certain_0_or_1" if r <= 1 else "heuristic", w, val)
        r += 2
    return AnalyticRank(None, "unknown", w, val)
