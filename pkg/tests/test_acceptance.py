"""Acceptance criteria 1-6.

Each test carries ``acceptance(n)``; the terminal summary prints one
PASS/FAIL line per criterion (see conftest.py).
"""
import itertools
import random
from collections import Counter

import pytest
from gmpy2 import mpq

from sha5 import cli
from sha5 import pipeline as pl
from sha5.arith import f5_rank, qs5_class
from sha5.curve import INFINITY, integral_model
from sha5.cyclo import ZETA, ks5_class, primes_above, unit_class
from sha5.descent import NO_PREIMAGE, divide_by_5, qs5_image, saturate_at_5
from sha5.isogeny import isogeny_data

T0 = (mpq(0), mpq(0))
acceptance = pytest.mark.acceptance


# -- 1. curve census ---------------------------------------------------------
@acceptance("1")
@pytest.mark.parametrize("N, count", [(10, 63), (20, 255), (30, 555), (40, 979), (50, 1547)])
def test_curve_census(N, count, capsys):
    assert cli.main(["build-db", "--max-height", str(N), "--census-only"]) == 0
    assert capsys.readouterr().out.split()[0] == str(count)
    assert len(pl.curve_parameters(N)) == count


# -- 2. local-only cross-tab ---------------------------------------------------
@acceptance("2")
def test_local_only_crosstab_n100():
    tab = pl.local_only(100)
    assert tab.pairs == 18_522_741
    expected = {(0, 0): 46.71, (0, 1): 1.80, (1, 0): 49.55, (1, 1): 1.95}
    got = {k: 100 * c / tab.pairs for k, c in tab.counts.items()}
    for cell, pct in expected.items():
        assert abs(got[cell] - pct) <= 0.01, (cell, got[cell], pct)


# -- 3. conductor filter -------------------------------------------------------
@acceptance("3")
def test_conductor_filter_n100(capsys):
    assert cli.main(["build-db", "--max-height", "100", "--max-conductor", "1000000", "--census-only"]) == 0
    assert capsys.readouterr().out.split()[0] == "1391"


# -- 4. N = 10 -----------------------------------------------------------------
def _rank_census(db):
    c = Counter(r.rank for r in db.records if r.complete)
    return [c.get(k, 0) for k in range(4)]


@acceptance("4")
def test_n10_records_complete(db10):
    assert all(r.complete for r in db10.records)
    assert _rank_census(db10) == [40, 22, 1, 0]


@acceptance("4")
def test_n10_square_percentage(db10):
    n, sq, _ = db10.report.pair_summary()
    assert n == 1953
    assert pl.percent(sq, n) == "67.179"


@acceptance("4")
def test_n10_regulator_parity_percentage(db10):
    n, _, re = db10.report.pair_summary()
    assert pl.percent(re, n, 2) == "74.04", f"{re} of {n} pairs agree"


# -- 5. N = 20 -----------------------------------------------------------------
@acceptance("5")
def test_n20_records_complete(db20):
    assert all(r.complete for r in db20.records)
    assert _rank_census(db20) == [130, 115, 10, 0]


@acceptance("5")
def test_n20_square_percentage(db20):
    n, sq, _ = db20.report.pair_summary()
    assert n == 32_385
    assert pl.percent(sq, n) == "56.384"


# -- 6. property suites --------------------------------------------------------
def _twenty_points(E, gen):
    return [E.add(E.mul(k, gen), E.mul(j, T0)) for k in range(1, 5) for j in range(5)]


@acceptance("6")
def test_dual_after_eta_on_100_curves(db20):
    rng = random.Random(100)
    recs = rng.sample([r for r in db20.records if r.rank >= 1], 100)
    for rec in recs:
        iso = isogeny_data(rec.u, rec.v)
        E = iso.source
        for P in _twenty_points(E, rec.generators[-1]):
            assert iso.eta_dual(iso.eta(P)) == E.mul(5, P), (rec.u, rec.v, P)


@acceptance("6")
def test_n_independence_on_100_pairs(db20):
    rng = random.Random(101)
    for _ in range(100):
        a, b = rng.sample(db20.records, 2)
        S = sorted(set(a.S) | set(b.S))
        keys = pl._k_support(S)
        psi = {pl._psi_rank(a.Q_basis, b.Q_basis, keys, n) for n in (1, 2, 3, 4)}
        rows = lambda n: [[n * x for x in p.on(S)] for p in a.P_basis] + [[-x for x in p.on(S)] for p in b.P_basis]
        dual = {f5_rank(rows(n)) for n in (1, 2, 3, 4)}
        assert len(psi) == 1 and len(dual) == 1


@acceptance("6")
def test_f_image_on_100_points(db20):
    rng = random.Random(102)
    recs = [r for r in db20.records if r.rank >= 1]
    for _ in range(100):
        rec = rng.choice(recs)
        E = integral_model(rec.u, rec.v)
        g = rec.generators
        P = E.add(E.mul(rng.randint(1, 3), g[0]), E.mul(rng.randint(0, 4), T0))
        Q = E.add(E.mul(rng.randint(-3, 3), g[-1]), E.mul(rng.randint(0, 4), T0))
        img = lambda X: qs5_image(X, rec.u, rec.v, rec.S)
        assert img(E.add(P, Q)) == img(P) + img(Q)
        assert img(E.mul(5, P)).is_zero()


@acceptance("6")
def test_class_homomorphisms_and_unit_roundtrip():
    rng = random.Random(103)
    S = (2, 3, 5, 11, 31)
    for _ in range(100):
        x = mpq(1)
        y = mpq(1)
        for p in S:
            x *= mpq(p) ** rng.randint(-7, 7)
            y *= mpq(p) ** rng.randint(-7, 7)
        assert qs5_class(x * y, S) == qs5_class(x, S) + qs5_class(y, S)
        assert qs5_class(x**5, S).is_zero()
    SK = primes_above([5, 11, 19])
    for _ in range(40):
        xs = []
        for _ in range(2):
            z = ZETA ** rng.randint(0, 4) * (1 + ZETA) ** rng.randint(-5, 5)
            for t in SK:
                z = z * t.generator ** rng.randint(0, 4)
            xs.append(z)
        assert ks5_class(xs[0] * xs[1], SK) == ks5_class(xs[0], SK) + ks5_class(xs[1], SK)
    for _ in range(40):
        a, b = rng.randint(-9, 9), rng.randint(-9, 9)
        y = ZETA * rng.randint(1, 9) + rng.randint(-9, 9)
        assert unit_class(ZETA ** (a % 5) * (1 + ZETA) ** b * y**5) == (a % 5, b % 5)


@acceptance("6")
def test_saturation_postcondition(db10):
    (rec,) = [r for r in db10.records if r.rank == 2]
    iso = isogeny_data(rec.u, rec.v)
    E = iso.source
    P, Q = rec.generators
    inputs = [
        [E.add(E.mul(5, P), T0)],
        [P, E.mul(5, Q)],
        [E.add(P, Q), E.sub(P, E.mul(4, Q))],
    ]
    for pts in inputs:
        out = saturate_at_5(rec.u, rec.v, pts, iso=iso)
        assert len(out) == len(pts)
        for coeffs in itertools.product(range(5), repeat=len(out)):
            if not any(coeffs):
                continue
            X = INFINITY
            for c, g in zip(coeffs, out):
                X = E.add(X, E.mul(c, g))
            for k in range(5):
                assert divide_by_5(iso, E.add(X, E.mul(k, T0))) is NO_PREIMAGE


@acceptance("6")
def test_regulator_parity_on_rank_01_pairs(db10):
    bad = total = 0
    for r in db10.results:
        a, b = db10.by_uv[(r.u1, r.v1)], db10.by_uv[(r.u2, r.v2)]
        if sorted((a.rank, b.rank)) != [0, 1]:
            continue
        one = a if a.rank == 1 else b
        trivial_mod_torsion = one.dim_coker_eta - len(one.torsion_Q) == 0
        total += 1
        bad += (r.re_exponent_parity == 1) != trivial_mod_torsion
    assert total == 880
    assert bad == 0, f"{bad} of {total} rank-(0,1) pairs disagree"
