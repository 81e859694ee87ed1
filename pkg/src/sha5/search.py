"""Naive-height rational point search by modular sieving (ratpoints style).

A point of an integral model has x = a/b^2 with gcd(a, b) = 1, and then
G(a, b) = 4a^3 + b2 a^2 b^2 + 2 b4 a b^4 + b6 b^6 is a perfect square.
For each b the admissible a are sieved with bit-packed residue patterns
modulo a handful of composite moduli; survivors are checked exactly.
"""
from __future__ import annotations

import math

import gmpy2
import numpy as np
from gmpy2 import mpq

from .curve import WeierstrassModel

MODULI = (5040, 2431, 12673, 1147, 1763, 2491, 3599, 4757, 5767, 7387, 9797)
CHUNK = 1 << 23


def _square_tables():
    out = {}
    for m in MODULI:
        t = np.zeros(m, dtype=bool)
        r = np.arange(m, dtype=np.int64)
        t[(r * r) % m] = True
        out[m] = t
    return out


_SQ = _square_tables()


def _real_intervals(b2: int, b4: int, b6: int):
    """Intervals of x where 4x^3 + b2 x^2 + 2 b4 x + b6 >= 0 (padded outward)."""
    roots = np.roots([4.0, float(b2), 2.0 * float(b4), float(b6)])
    real = sorted(r.real for r in roots if abs(r.imag) < 1e-9 * max(1.0, abs(r.real)))
    pad = lambda z: 1e-6 * max(1.0, abs(z)) + 1.0
    if len(real) >= 3:
        e3, e2, e1 = real[0], real[1], real[2]
        return [(e3 - pad(e3), e2 + pad(e2)), (e1 - pad(e1), math.inf)]
    e1 = real[-1]
    return [(e1 - pad(e1), math.inf)]


def _pattern_bytes(table: np.ndarray, offset: int) -> np.ndarray:
    m = len(table)
    pat = np.roll(table, -(offset % m))
    return np.packbits(np.tile(pat, 8))


def search_points(E: WeierstrassModel, height: int, max_points: int | None = None):
    """Rational affine points with naive height max(|a|, b^2) <= height (one of each +-pair)."""
    b2, b4, b6 = (int(c) for c in (E.b2, E.b4, E.b6))
    if any(mpq(c).denominator != 1 for c in (E.b2, E.b4, E.b6)):
        raise ValueError("search needs an integral model")
    intervals = _real_intervals(b2, b4, b6)
    found = []
    bmax = math.isqrt(height)
    for b in range(1, bmax + 1):
        bb = b * b
        # residue tables of G(., b) for each modulus
        tables = []
        for m in MODULI:
            r = np.arange(m, dtype=np.int64)
            B2 = bb % m
            B4 = B2 * B2 % m
            B6 = B4 * B2 % m
            val = (4 * (r * r % m) * r + (b2 % m) * (r * r % m) % m * B2 + 2 * (b4 % m) * r % m * B4 + (b6 % m) * B6) % m
            tables.append((m, _SQ[m][val]))
        for lo, hi in intervals:
            a_lo = max(-height, math.floor(lo * bb))
            a_hi = height if hi == math.inf else min(height, math.ceil(hi * bb))
            start = a_lo
            while start <= a_hi:
                length = min(CHUNK, a_hi - start + 1)
                nbytes = (length + 7) // 8
                mask = None
                for m, table in tables:
                    pat = _pattern_bytes(table, start)
                    tiled = np.resize(pat, nbytes)
                    mask = tiled if mask is None else (mask & tiled)
                bits = np.unpackbits(mask)[:length]
                for off in np.nonzero(bits)[0]:
                    a = start + int(off)
                    if math.gcd(a, b) != 1:
                        continue
                    G = 4 * a ** 3 + b2 * a * a * bb + 2 * b4 * a * bb * bb + b6 * bb ** 3
                    if G < 0 or not gmpy2.is_square(G):
                        continue
                    x = mpq(a, bb)
                    pts = E.lift_x(x)
                    if pts:
                        found.append(pts[0])
                        if max_points and len(found) >= max_points:
                            return found
                start += length
    return found
