import itertools
import random

import pytest
from gmpy2 import mpq

from sha5.arith import f5_rank
from sha5.curve import INFINITY, integral_model
from sha5.descent import (
    NO_PREIMAGE,
    DescentError,
    SearchPolicy,
    build_curve_record,
    coker_eta_dual_basis,
    divide_by_5,
    eta_dual_preimage,
    eta_preimage,
    ks5_image,
    qs5_image,
    saturate_at_5,
    start_state,
)
from sha5.isogeny import isogeny_data

T0 = (mpq(0), mpq(0))
# generators of the rank-2 curve (u, v) = (7, 9) on its integral model
P79 = (mpq(-84), mpq(441))
Q79 = (mpq(-81), mpq(486))


@pytest.fixture(scope="module")
def iso79():
    return isogeny_data(7, 9)


def _points_of(db, count, rng):
    """(u, v, point) triples: small combinations of stored generators plus torsion."""
    out = []
    recs = [r for r in db.records if r.generators]
    while len(out) < count:
        rec = rng.choice(recs)
        E = integral_model(rec.u, rec.v)
        P = INFINITY
        for g in rec.generators:
            P = E.add(P, E.mul(rng.randint(-2, 2), g))
        P = E.add(P, E.mul(rng.randint(0, 4), T0))
        if P is not INFINITY:
            out.append((rec, E, P))
    return out


def test_coker_eta_dual_examples():
    assert coker_eta_dual_basis(1, 1, [], [5, 11])[0].is_zero()
    img = coker_eta_dual_basis(7, 1, [], [5, 7])[0]
    assert img.as_dict() == {7: 4}
    assert qs5_image(INFINITY, 3, 4, [2, 3, 5]).is_zero()


def test_f_image_is_a_homomorphism(db20):
    rng = random.Random(17)
    for rec, E, P in _points_of(db20, 100, rng):
        Q = E.add(E.mul(rng.randint(1, 3), rec.generators[0]), E.mul(rng.randint(0, 4), T0))
        S = rec.S
        lhs = qs5_image(E.add(P, Q), rec.u, rec.v, S)
        assert lhs == qs5_image(P, rec.u, rec.v, S) + qs5_image(Q, rec.u, rec.v, S)
        assert qs5_image(E.mul(5, P), rec.u, rec.v, S).is_zero()


def test_k_image_is_a_homomorphism(iso79):
    E, Ep = iso79.source, iso79.target
    SK = start_state(7, 9, iso=iso79).SK
    pts = [E.add(E.mul(a, P79), E.mul(b, Q79)) for a, b in [(1, 0), (0, 1), (1, 1), (2, -1), (1, 2)]]
    images = [iso79.eta(P) for P in pts]
    for A, B in itertools.combinations(images, 2):
        C = Ep.add(A, B)
        assert ks5_image(C, iso79, SK) == ks5_image(A, iso79, SK) + ks5_image(B, iso79, SK)
    assert ks5_image(Ep.mul(5, images[0]), iso79, SK).is_zero()
    assert ks5_image(INFINITY, iso79, SK).is_zero()


def test_images_are_injective_on_small_combinations(db20):
    # points with independent Q(S,5) images: all 5^k combinations map to distinct vectors
    for rec in [r for r in db20.records if r.rank >= 1][:15]:
        E = integral_model(rec.u, rec.v)
        pts = [T0] + list(rec.generators)
        rows = []
        chosen = []
        for P in pts:
            row = qs5_image(P, rec.u, rec.v, rec.S).on(rec.S)
            if f5_rank(rows + [row]) > len(rows):
                rows.append(row)
                chosen.append(P)
        chosen = chosen[:3]
        seen = set()
        for coeffs in itertools.product(range(5), repeat=len(chosen)):
            X = INFINITY
            for c, P in zip(coeffs, chosen):
                X = E.add(X, E.mul(c, P))
            seen.add(tuple(qs5_image(X, rec.u, rec.v, rec.S).on(rec.S)))
        assert len(seen) == 5 ** len(chosen)


def test_division_by_eta_and_dual(iso79):
    E = iso79.source
    X = E.add(P79, Q79)
    Q = eta_dual_preimage(iso79, E.mul(5, X))
    assert Q is not NO_PREIMAGE and iso79.eta_dual(Q) == E.mul(5, X)
    Y = eta_preimage(iso79, iso79.eta(X))
    assert Y is not NO_PREIMAGE and iso79.eta(Y) == iso79.eta(X)
    assert divide_by_5(iso79, E.mul(5, X)) in [E.add(X, E.mul(k, T0)) for k in range(5)]
    assert divide_by_5(iso79, P79) is NO_PREIMAGE


def _assert_saturated(iso, gens):
    """No nontrivial combination of gens plus torsion is divisible by 5."""
    E = iso.source
    for coeffs in itertools.product(range(5), repeat=len(gens)):
        if not any(coeffs):
            continue
        X = INFINITY
        for c, g in zip(coeffs, gens):
            X = E.add(X, E.mul(c, g))
        for k in range(5):
            assert divide_by_5(iso, E.add(X, E.mul(k, T0))) is NO_PREIMAGE


def test_saturate_single_multiple(iso79):
    E = iso79.source
    out = saturate_at_5(7, 9, [E.add(E.mul(5, P79), T0)], iso=iso79)
    assert len(out) == 1
    diff = [E.sub(out[0], P79), E.add(out[0], P79)]
    assert any(D is INFINITY or E.order(D, 10) for D in diff)
    _assert_saturated(iso79, out)


def test_saturate_recovers_second_generator(iso79):
    E = iso79.source
    out = saturate_at_5(7, 9, [P79, E.mul(5, Q79)], iso=iso79)
    assert len(out) == 2
    assert out[0] == P79
    # Q up to sign and torsion
    assert out[1] in [E.add(s, E.mul(k, T0)) for s in (Q79, E.neg(Q79)) for k in range(5)]
    _assert_saturated(iso79, out)


def test_saturate_index_five_sublattice(iso79):
    E = iso79.source
    # <P+Q, P-4Q> has index 5 in <P, Q>; no single generator is divisible
    gens = [E.add(P79, Q79), E.sub(P79, E.mul(4, Q79))]
    out = saturate_at_5(7, 9, gens, iso=iso79)
    assert len(out) == 2
    _assert_saturated(iso79, out)


def test_saturate_rank_zero():
    assert saturate_at_5(1, 1, []) == []
    assert saturate_at_5(1, 1, [T0]) == []


def test_record_examples():
    rec = build_curve_record(1, 1)
    assert rec.S == (5, 11) and rec.T == () and rec.U == (11,)
    assert rec.rank == 0 and rec.rank_tag == "unconditional"
    assert rec.dim_coker_eta_dual == 0 and rec.dim_coker_eta == 1
    assert rec.torsion_P == () and len(rec.torsion_Q) == 1
    assert rec.torsion_Q[0].unit_exponents != (0, 0)
    rec = build_curve_record(7, 1)
    assert rec.S == (5, 7) and rec.T == (7,) and rec.U == (5,)
    assert [p.as_dict() for p in rec.torsion_P] == [{7: 4}]
    rec = build_curve_record(1, 5)
    assert 5 in rec.T and 5 not in rec.U


def test_record_needs_coprime_input():
    with pytest.raises(ValueError):
        build_curve_record(2, 6)


def test_ingested_generators_are_saturated(iso79):
    E = iso79.source
    rec = build_curve_record(7, 9, ingested=(2, [E.mul(5, P79), Q79]))
    assert rec.rank_tag == "ingested" and rec.complete
    assert len(rec.generators) == 2
    _assert_saturated(iso79, list(rec.generators))
    with pytest.raises(ValueError):
        build_curve_record(7, 9, ingested=(2, [(mpq(1), mpq(1))]))


def test_ingested_surplus_points_rejected():
    with pytest.raises(DescentError):
        build_curve_record(7, 9, ingested=(1, [P79, Q79]))


def test_search_failure_marks_record_incomplete():
    rec = build_curve_record(7, 9, policy=SearchPolicy(start_height=1, factor=2, max_height=2))
    assert not rec.complete and rec.rank == 2


def _free_dims(rec):
    t_dual = f5_rank([p.on(rec.S) for p in rec.torsion_P])
    return rec.dim_coker_eta_dual - t_dual, rec.dim_coker_eta - len(rec.torsion_Q), t_dual + len(rec.torsion_Q)


def test_free_dimensions_add_up_to_rank(db20):
    for rec in db20.records:
        free_dual, free_eta, tors = _free_dims(rec)
        assert tors == 1
        assert free_dual + free_eta == rec.rank
        assert rec.dim_coker_eta == f5_rank([q.on(rec.K_support) for q in rec.Q_basis])
        assert set(rec.S) >= set(rec.T) | set(rec.U) | {5}
