import random

import pytest
from gmpy2 import mpq
from hypothesis import given, settings
from hypothesis import strategies as st

from sha5.arith import (
    QS5Vector,
    f5_kernel,
    f5_rank,
    factorize,
    is_probable_prime,
    qs5_class,
    valuation,
)

S_PRIMES = (2, 3, 5, 7, 11, 31)


def test_factorize_examples():
    assert factorize(125).as_dict() == {5: 3}
    assert factorize(7**2 + 11 * 7 * 1 - 1).as_dict() == {5: 3}
    assert factorize(-11).as_dict() == {11: 1}
    assert factorize(1).factors == ()


def test_factorize_zero_rejected():
    with pytest.raises(ValueError):
        factorize(0)


def test_factorize_beyond_trial_division():
    # two primes above the trial-division limit force the Pollard-Brent path
    p, q = 1_000_003, 1_000_033
    assert factorize(p * q * 4).as_dict() == {2: 2, p: 1, q: 1}
    assert factorize(p**3).as_dict() == {p: 3}


def test_factorize_reconstructs_random_inputs():
    rng = random.Random(7)
    for _ in range(10_000):
        n = rng.randint(1, 10**12)
        fac = factorize(n)
        assert fac.value() == n
        primes = fac.primes()
        assert primes == sorted(set(primes))
        assert all(is_probable_prime(p) for p in primes)


def test_qs5_class_examples():
    assert qs5_class(1, [5, 11]).exponents == (0, 0)
    assert qs5_class(32, [2]).exponents == (0,)
    assert qs5_class(mpq(1, 7), [5, 7]).exponents == (0, 4)
    # the sign carries no information
    assert qs5_class(-7, [7]) == qs5_class(7, [7])


def test_qs5_class_outside_support():
    with pytest.raises(ArithmeticError):
        qs5_class(13, [2, 3])
    # a fifth power outside S is fine
    assert qs5_class(13**5 * 2, [2]).exponents == (1,)


def test_qs5_vector_validation():
    with pytest.raises(ValueError):
        QS5Vector((3, 2), (0, 0))
    with pytest.raises(ValueError):
        QS5Vector((2, 3), (0,))
    v = QS5Vector((2, 7), (1, 0))
    assert v.on([2, 5, 7]) == [1, 0, 0]
    with pytest.raises(ValueError):
        QS5Vector((2, 7), (1, 1)).on([2, 5])


S_rationals = st.builds(
    lambda exps, sign: mpq(sign) * _from_exps(exps),
    st.lists(st.integers(-12, 12), min_size=len(S_PRIMES), max_size=len(S_PRIMES)),
    st.sampled_from([1, -1]),
)


def _from_exps(exps):
    q = mpq(1)
    for p, e in zip(S_PRIMES, exps):
        q *= mpq(p) ** e
    return q


@given(S_rationals, S_rationals)
def test_qs5_class_is_a_homomorphism(x, y):
    assert qs5_class(x * y, S_PRIMES) == qs5_class(x, S_PRIMES) + qs5_class(y, S_PRIMES)


@given(S_rationals)
def test_fifth_powers_have_trivial_class(x):
    assert qs5_class(x**5, S_PRIMES).is_zero()


def test_valuation():
    assert valuation(mpq(50, 7), 5) == 2
    assert valuation(mpq(50, 7), 7) == -1
    with pytest.raises(ValueError):
        valuation(0, 3)


def test_f5_rank_examples():
    assert f5_rank([]) == 0
    assert f5_rank([[1, 2], [2, 4]]) == 1
    assert f5_rank([[1, 0], [0, 4]]) == 2
    assert f5_rank([[0, 0, 0]]) == 0


def _gf5_rank_oracle(rows):
    from sympy import GF, Matrix
    from sympy.polys.matrices import DomainMatrix

    return DomainMatrix.from_Matrix(Matrix(rows)).convert_to(GF(5)).rank()


def test_f5_rank_agrees_with_oracle():
    rng = random.Random(11)
    for _ in range(1000):
        m, n = rng.randint(1, 8), rng.randint(1, 8)
        # sparse entries make rank deficiency common
        rows = [[rng.choice([0, 0, 0, 1, 2, 3, 4]) for _ in range(n)] for _ in range(m)]
        assert f5_rank(rows) == _gf5_rank_oracle(rows)


@settings(max_examples=200)
@given(st.integers(1, 6).flatmap(lambda n: st.lists(
    st.lists(st.integers(0, 4), min_size=n, max_size=n), min_size=1, max_size=7)))
def test_f5_kernel_is_the_left_kernel(rows):
    ker = f5_kernel(rows)
    assert len(ker) == len(rows) - f5_rank(rows)
    for c in ker:
        assert any(c)
        combo = [sum(ci * r[j] for ci, r in zip(c, rows)) % 5 for j in range(len(rows[0]))]
        assert not any(combo)
    assert f5_rank(ker) == len(ker)
