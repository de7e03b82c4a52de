import random

import pytest

from hopfsmith import cartan_algebras as ca
from hopfsmith.coefficients import QQ, PolyPRing, PrimeField
from hopfsmith.combinatorics import rising_poly
from hopfsmith.pbw import (
    EnvelopingAlgebra,
    apply_legs,
    counit_value,
    eval_shifted_factorial,
    identity_hom,
    standard_antipode,
    standard_coproduct,
    standard_counit,
    well_definedness_check,
)


@pytest.fixture
def carrier():
    alg = EnvelopingAlgebra(ca.CarrierAlgebra(), QQ)
    return alg, alg.gen(0), alg.gen(1)


@pytest.fixture
def carrier3():
    alg = EnvelopingAlgebra(ca.CarrierAlgebra(3), PrimeField(3), restricted=True)
    return alg, alg.gen(0), alg.gen(1)


def test_straightening(carrier):
    _, h, e = carrier
    assert e * h == h * e - e


def test_restricted_powers(carrier3):
    alg, h, e = carrier3
    assert h * h * h == h
    assert e ** 3 == alg.zero()


def test_shifted_factorial_substitution(carrier, carrier3):
    alg, h, _ = carrier
    assert eval_shifted_factorial(h, rising_poly(0, 2)) == h * h + h
    assert eval_shifted_factorial(h, rising_poly(4, 0)) == alg.one()
    _, h3, _ = carrier3
    assert not eval_shifted_factorial(h3, rising_poly(0, 3))


def test_extend_hom_examples(carrier):
    alg, h, e = carrier
    d0 = standard_coproduct(alg)
    s0 = standard_antipode(alg)
    eps = standard_counit(alg)
    one = alg.one()
    assert d0(h * h) == (h * h).tensor(one) + h.tensor(h).scale(2) + one.tensor(h * h)
    assert s0(h * e) == e * h
    assert eps(one + h * e) == counit_value(one)
    assert not eps(h * e)


def _random_element(alg, gens, rng, length=3, terms=3):
    out = alg.zero()
    for _ in range(terms):
        m = alg.one()
        for _ in range(rng.randint(0, length)):
            m = m * alg.gen(rng.choice(gens))
        out = out + m.scale(rng.randint(1, 2))
    return out


def test_associativity_and_caps():
    lie = ca.special_algebra(3, 2)
    alg = EnvelopingAlgebra(lie, PolyPRing(3, 1), restricted=True)
    gens = list(lie.generators())
    rng = random.Random(0)
    for _ in range(15):
        a, b, c = (_random_element(alg, gens, rng) for _ in range(3))
        prod = (a * b) * c
        assert prod == a * (b * c)
        for key in prod.terms:
            mono = key[0]
            assert all(mono.count(g) < 3 for g in set(mono))


def test_standard_structure_is_hopf():
    lie = ca.special_algebra(3, 2)
    alg = EnvelopingAlgebra(lie, PrimeField(3), restricted=True)
    gens = list(lie.generators())
    d0 = standard_coproduct(alg, gens)
    ident = identity_hom(alg, gens)
    for g in gens:
        D = d0.image_gen(g)
        assert apply_legs(D, [d0, ident]) == apply_legs(D, [ident, d0])
    assert well_definedness_check(d0, gens)["pass"]
    assert well_definedness_check(standard_antipode(alg, gens), gens)["pass"]
