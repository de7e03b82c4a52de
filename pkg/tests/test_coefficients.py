import random
from fractions import Fraction

import pytest

from hopfsmith.coefficients import (
    Fp,
    PolyPRing,
    TruncatedPolyP,
    TruncatedSeries,
    check_odd_prime,
    specialize_t,
)
from hopfsmith.errors import DivisionByNonUnit, NotARoot, RingMismatch, UnsupportedPrime


def test_geometric_series_truncates():
    a = TruncatedSeries([1, -1], 2)
    b = TruncatedSeries([1, 1, 1], 2)
    assert a * b == TruncatedSeries.const(1, 2)


def test_polyp_reduction():
    t = TruncatedPolyP.t_power(1, 3, 1)
    assert t * t * t == t
    assert TruncatedPolyP.t_power(3, 3, 0) == TruncatedPolyP([0], 3, 0)


def test_fp_inverse():
    assert Fp(2, 5).inverse() == Fp(3, 5)
    with pytest.raises(DivisionByNonUnit):
        Fp(0, 5).inverse()


def test_series_inverse_needs_unit():
    with pytest.raises(DivisionByNonUnit):
        TruncatedSeries([0, 1], 3).inverse()


def test_ring_mismatch():
    with pytest.raises(RingMismatch):
        TruncatedPolyP([1], 3, 0) + TruncatedPolyP([1], 5, 0)


def test_specialize_examples():
    assert specialize_t(TruncatedPolyP([1, 1], 3, 1), 1) == Fp(2, 3)
    assert specialize_t(TruncatedPolyP([0, 0, 1], 3, 1), 0) == Fp(0, 3)
    assert specialize_t(TruncatedPolyP([4, 3, 2, 1], 5, 0), 0) == Fp(4, 5)
    with pytest.raises(NotARoot):
        specialize_t(TruncatedPolyP([1], 5, 0), 2)


def test_p2_rejected():
    with pytest.raises(UnsupportedPrime, match="p=2 unsupported"):
        check_odd_prime(2)
    with pytest.raises(UnsupportedPrime):
        PolyPRing(2, 0)


def _rand_polyp(rng, p, q):
    return TruncatedPolyP([rng.randrange(p) for _ in range(p)], p, q)


@pytest.mark.parametrize("p,q", [(3, 0), (3, 1), (5, 0), (5, 2)])
def test_polyp_ring_axioms(p, q):
    rng = random.Random(p * 10 + q)
    for _ in range(50):
        a, b, c = (_rand_polyp(rng, p, q) for _ in range(3))
        assert (a * b) * c == a * (b * c)
        assert a * (b + c) == a * b + a * c
        assert a * b == b * a


@pytest.mark.parametrize("p,q", [(3, 0), (5, 0), (7, 0)])
def test_polyp_unit_inverse(p, q):
    # 1 + t*(...) is a unit when t is nilpotent (q = 0)
    rng = random.Random(p)
    one = TruncatedPolyP.const(1, p, q)
    for _ in range(30):
        a = _rand_polyp(rng, p, q)
        if a.c[0] == 0:
            continue
        assert a * a.inverse() == one


@pytest.mark.parametrize("p,q", [(3, 1), (5, 1), (5, 4)])
def test_specialize_is_homomorphism(p, q):
    rng = random.Random(q)
    roots = [r for r in range(p) if (pow(r, p, p) - q * r) % p == 0]
    for _ in range(30):
        a, b = _rand_polyp(rng, p, q), _rand_polyp(rng, p, q)
        for r in roots:
            assert specialize_t(a * b, r) == specialize_t(a, r) * specialize_t(b, r)
            assert specialize_t(a + b, r) == specialize_t(a, r) + specialize_t(b, r)


def test_series_ring_axioms():
    rng = random.Random(1)
    N = 5
    for _ in range(30):
        a, b, c = (TruncatedSeries([Fraction(rng.randint(-5, 5), rng.randint(1, 4))
                                    for _ in range(N + 1)], N) for _ in range(3))
        assert (a * b) * c == a * (b * c)
        assert a * (b + c) == a * b + a * c
        if a.c[0]:
            assert a * a.inverse() == TruncatedSeries.const(1, N)


def test_polyp_units_when_q_nonzero():
    # t is a zero divisor once t^p = q t with q != 0, so a nonzero constant term is not enough
    with pytest.raises(DivisionByNonUnit):
        TruncatedPolyP([1, 1], 3, 1).inverse()
    a = TruncatedPolyP([1, 0, 1], 3, 1)
    assert a * a.inverse() == TruncatedPolyP.const(1, 3, 1)
