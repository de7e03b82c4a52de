import itertools

import pytest

from hopfsmith.combinatorics import (
    check_identity_suite,
    falling_poly,
    gen_binom,
    grunspan_integral,
    mixed_falling_lhs,
    mixed_falling_rhs,
    rising_poly,
    stirling_by_cycle_types,
    stirling_by_enumeration,
    stirling_c,
    stirling_s,
)


def test_gen_binom_examples():
    assert gen_binom(5, 2) == 10
    assert gen_binom(-1, 3) == -1
    assert all(gen_binom(a, 0) == 1 for a in range(-4, 5))


def test_gen_binom_pascal():
    for a, r in itertools.product(range(-10, 11), range(1, 11)):
        assert gen_binom(a, r) == gen_binom(a - 1, r) + gen_binom(a - 1, r - 1)


def test_stirling_examples():
    assert stirling_c(3, 2) == 3
    assert stirling_c(4, 1) == 6
    assert all(stirling_c(n, n) == 1 for n in range(8))


@pytest.mark.parametrize("n", range(8))
def test_stirling_against_permutations(n):
    row = [stirling_c(n, k) for k in range(n + 1)]
    assert stirling_by_cycle_types(n) == row
    if n <= 6:
        assert stirling_by_enumeration(n) == row
    assert list(rising_poly(0, n).coeffs) == row
    assert list(falling_poly(0, n).coeffs) == [stirling_s(n, k) for k in range(n + 1)]


def test_shifted_factorial_examples():
    assert rising_poly(0, 2).coeffs == (0, 1, 1)
    assert falling_poly(0, 3).coeffs == (0, 2, -3, 1)
    assert rising_poly(5, 0).coeffs == (1,)
    assert falling_poly(2, 3).coeffs == rising_poly(0, 3).coeffs


def test_mixed_falling_value():
    # a=3, b=1, r=2: the sum collapses to binom(a-b+r-1, r) = binom(3, 2)
    assert mixed_falling_lhs(3, 1, 2) == (mixed_falling_rhs(3, 1, 2),) == (3,)


def test_identity_suite_exhaustive():
    rep = check_identity_suite(bound=5, max_len=8)
    assert set(rep) == {"rising_split", "falling_split", "falling_as_rising",
                        "mixed_rising_sum", "mixed_falling_sum"}
    assert all(v["pass"] for v in rep.values()), rep


def test_identity_suite_sampled_is_deterministic():
    assert check_identity_suite(seed=7, samples=40) == check_identity_suite(seed=7, samples=40)


def test_grunspan_examples():
    assert grunspan_integral(1, 0, 3) == 0
    assert grunspan_integral(2, 1, 2) == 6
    assert grunspan_integral(1, 1, 4) == 1
