import math
import random

import pytest
from gmpy2 import mpq

from sha5.curve import INFINITY, integral_model, tate_normal_model, torsion_subgroup
from sha5.cyclo import CycloElement
from sha5.descent import build_curve_record, start_state
from sha5.fq import check_composite_mod_q
from sha5.isogeny import (
    dual_kernel_candidates,
    eta_prime_5val,
    isogeny_data,
    tate_normal_form,
)
from sha5.search import search_points

ORIGIN = (mpq(0), mpq(0))


def _sample_points(E, count, height=2000):
    """Rational points: small multiples of searched points, shifted by torsion."""
    base = [P for P in search_points(E, height, max_points=6)]
    pts = []
    for P in base:
        for k in range(1, 5):
            for j in range(5):
                pts.append(E.add(E.mul(k, P), E.mul(j, ORIGIN)))
    return pts[:count]


def test_kernel_maps_to_infinity():
    iso = isogeny_data(3, 2)
    E = iso.source
    for k in range(5):
        assert iso.eta(E.mul(k, ORIGIN)) is INFINITY
    assert iso.eta(E.mul(2, ORIGIN)) is INFINITY


def test_eta_degree_five():
    iso = isogeny_data(2, 7)
    num, den = iso.eta.x_map_polys()
    assert len(num) - 1 == 5 and len(den) - 1 == 4


@pytest.mark.parametrize("u, v", [(2, 5), (7, 4), (7, 9), (9, 10), (13, 3)])
def test_dual_after_eta_is_multiplication_by_5(u, v):
    iso = isogeny_data(u, v)
    E = iso.source
    pts = _sample_points(E, 20)
    assert len(pts) == 20
    for P in pts:
        assert iso.eta_dual(iso.eta(P)) == E.mul(5, P)


def test_eta_is_a_homomorphism():
    iso = isogeny_data(7, 9)
    E, Ep = iso.source, iso.target
    rng = random.Random(1)
    pts = _sample_points(E, 40)
    for _ in range(50):
        P, Q = rng.choice(pts), rng.choice(pts)
        assert iso.eta(E.add(P, Q)) == Ep.add(iso.eta(P), iso.eta(Q))


def test_composite_over_finite_fields():
    rng = random.Random(9)
    for _ in range(10):
        u, v = rng.randint(1, 500), rng.randint(1, 500)
        if math.gcd(u, v) == 1:
            assert check_composite_mod_q(isogeny_data(u, v), trials=5, seed=rng.randint(0, 99))


def test_e1_quotient():
    iso = isogeny_data(1, 1)
    tors = torsion_subgroup(iso.target)
    assert tors.order == 5
    # E(Q) = Z/5 is the kernel, so eta(E(Q)) is trivial and coker eta is Z/5
    assert all(iso.eta(P) is INFINITY for P in torsion_subgroup(iso.source).points)
    rec = build_curve_record(1, 1)
    assert rec.dim_coker_eta == 1
    assert len(rec.Q_basis) == 1 and not rec.Q_basis[0].is_zero()


def test_e1_dual_kernel_and_codomain():
    iso = isogeny_data(1, 1)
    cands = dual_kernel_candidates(iso.target)
    assert iso.kernel_poly in cands
    assert iso.dual.target.j_invariant() == CycloElement((integral_model(1, 1).j_invariant(),))


@pytest.mark.parametrize("u, v", [(1, 1), (2, 1), (7, 1), (1, 5), (9, 7), (31, 4)])
def test_dual_kernel_splits_over_real_subfield(u, v):
    h0, h1 = isogeny_data(u, v).kernel_poly
    disc = h1 * h1 - 4 * h0
    # the roots (-h1 +- sqrt(disc))/2 lie in Q(sqrt5): disc is a square or 5 times a square
    assert _is_square(disc) or _is_square(disc / 5)


def _is_square(q):
    from gmpy2 import is_square

    q = mpq(q)
    return q >= 0 and is_square(q.numerator) and is_square(q.denominator)


def test_normal_form_fixed_points():
    d = mpq(3, 11)
    E = tate_normal_model(d)
    dt, _, F = tate_normal_form(E, ORIGIN)
    assert dt == d and F == E
    dt, _, _ = tate_normal_form(E, (mpq(0), -d))
    assert dt == d
    dt, _, _ = tate_normal_form(E, (-d, d * d))
    assert dt == -1 / d


def test_normal_form_rejects_non_five_torsion():
    E = integral_model(7, 9)
    P = [Q for Q in search_points(E, 1000) if Q[0] not in (0, -63)][0]
    with pytest.raises(ValueError):
        tate_normal_form(E, P)


@pytest.mark.parametrize("u, v", [(1, 1), (3, 7), (10, 9)])
def test_dtilde_model_has_five_torsion_at_origin(u, v):
    iso = isogeny_data(u, v)
    F = iso.tau.apply_model(iso.dual.source)
    zero = CycloElement((0,))
    assert F.order((zero, zero), 5) == 5
    assert F.a2 == iso.dtilde and F.a3 == iso.dtilde


def _k_dimension(u, v, iso, gens):
    st = start_state(u, v, iso=iso)
    for P in gens:
        st.add(P)
    return len(st.krows)


def test_root_choice_does_not_change_dimensions(db10):
    recs = [r for r in db10.records][:20]
    for rec in recs:
        a = isogeny_data(rec.u, rec.v, root_choice=0)
        b = isogeny_data(rec.u, rec.v, root_choice=1)
        assert a.R != b.R
        assert _k_dimension(rec.u, rec.v, a, rec.generators) == _k_dimension(rec.u, rec.v, b, rec.generators)


def test_eta_prime_at_five():
    assert eta_prime_5val(2, 1) == (1, 1)
    assert eta_prime_5val(7, 1) == (mpq(1, 5), 2)
    assert eta_prime_5val(1, 5) == (1, 0)
    assert eta_prime_5val(1, 2) == (1, 1)  # good reduction at 5
    with pytest.raises(ValueError):
        eta_prime_5val(5, 10)
