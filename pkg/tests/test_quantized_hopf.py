import pytest

from hopfsmith import cartan_algebras as ca
from hopfsmith import quantized_hopf as qh
from hopfsmith.pbw import one_minus_power
from hopfsmith.twist_engine import TwistSpec, zeta_chain

V12 = TwistSpec.vertical(1, 2)
H123 = TwistSpec.horizontal(1, 2, 3)


def test_coefficient_edges():
    # l = 0 gives (binom(a_k, 0) * 1, 0); the variants agree for l <= 1
    assert qh.vertical_coefficients((1, 1), 2, 1, 0, 1, 2) == (1, 0)
    for v in qh.VARIANTS:
        assert (qh.vertical_coefficients((0, 2), 2, 1, 1, 1, 2, v)
                == qh.vertical_coefficients((0, 2), 2, 1, 1, 1, 2))
    with pytest.raises(ValueError):
        qh.vertical_coefficients((0, 0), 2, 1, 1, 1, 2, "other")


def test_d_ell_examples():
    lie = ca.special_algebra(3, 2)
    h, e = (lie.coords(x) for x in ca.vertical_pair(1, 2, 2, 3))
    assert qh.d_ell(lie, e, h, 0) == h
    # d^(1)(D_12(x^(e1+e2))) = -(delta_11 - delta_21) e = -e
    assert qh.d_ell(lie, e, h, 1) == {k: (-v) % 3 for k, v in e.items()}


@pytest.mark.parametrize("p,n,spec,variant", [
    (3, 2, V12, "displayed"),
    (5, 2, V12, "displayed"),
    (3, 3, H123, "displayed"),
    (3, 3, V12, "corrected"),
    (3, 3, TwistSpec.product(V12, TwistSpec.vertical(3, 2)), "corrected"),
])
def test_closed_d_matches_brackets(p, n, spec, variant):
    rep = qh.d_closed_vs_bracket(qh.modular_setup(p, n), spec, variant=variant)
    assert rep["pass"], rep


def test_displayed_vertical_coefficient_finding():
    # at n = 3 the displayed factor l! in B differs from the iterated bracket
    rep = qh.d_closed_vs_bracket(qh.modular_setup(3, 3), V12, variant="displayed")
    assert not rep["pass"]
    assert qh.transport_report(3, 3, 1, 2, variant="displayed")["mismatches"] == 4
    assert qh.transport_report(3, 3, 1, 2, variant="corrected")["pass"]


@pytest.mark.parametrize("p,n", [(3, 2), (5, 2)])
def test_transport_from_char0(p, n):
    assert qh.transport_report(p, n, 1, 2)["pass"]


def test_remark_examples_p3():
    setup = qh.modular_setup(3, 2)
    ctx = setup.ctx
    alg = ctx.alg
    H = qh.ClosedForm(ctx, V12).structure()
    h, e = ctx.carrier(V12)
    one = alg.one()
    f = one_minus_power(e, -1)
    assert H.delta(h) == h.tensor(f) + one.tensor(h)
    assert H.antipode(h) == -(h * (one - e.scale(1, 1)))
    assert all(not H.counit.image_gen(g) for g in ctx.gens)


def test_oracle_modular_vertical():
    assert qh.oracle_report(qh.modular_setup(3, 2, 1), V12)["pass"]


def test_oracle_prime_variant_extras():
    setup = qh.modular_setup(3, 2, 0, restricted=False, prime_variant=True)
    assert qh.oracle_report(setup, V12)["pass"]


def test_oracle_char0_horizontal():
    setup = qh.char0_setup(3, 2)
    gens = qh.char0_generators(setup.lie, 1)
    assert qh.oracle_report(setup, TwistSpec.horizontal(1, 2, 3), gens)["pass"]


def test_sl3_rows():
    tab = qh.sl3_table(5)
    assert tab["closed_vs_oracle_all_generators"]["pass"]
    rows = tab["rows"]
    for name in ("h", "h'", "e", "E12", "E21", "E23", "E32"):
        assert rows[name]["displayed_matches_oracle"], name
    assert not rows["E31"]["displayed_matches_oracle"]
    assert rows["E31"]["h<2>_term_matches_oracle"]


def test_hopf_axioms_vertical_p3():
    setup = qh.modular_setup(3, 2, 1)
    assert qh.hopf_axiom_suite(qh.ClosedForm(setup.ctx, V12).structure())["pass"]
    std = qh.standard_structure(setup.alg, setup.ctx.gens)
    assert qh.hopf_axiom_suite(std)["pass"]


def test_ideal_check_p3_n2():
    rep = qh.hopf_ideal_check(3, 2, V12, 0)
    assert rep["pass"]
    # only alpha = e_i + e_j (the h direction) has a non-primitive p-th power
    assert rep["non_primitive_p_powers"] == ["D21(x^(1,1))"]


def test_radford_and_truncations():
    assert qh.radford_report(3)["pass"]
    for p, q in ((3, 0), (3, 1), (5, 1)):
        assert qh.truncation_identities(p, q)["pass"]


def test_integrality():
    assert qh.coefficient_integrality(3, 2, 1, 2)["pass"]
    assert qh.coefficient_integrality(5, 3, 1, 2)["pass"]


def test_p_power_d():
    assert qh.p_power_d_report(3, 2, V12)["pass"]


def test_power_coproducts_char0():
    assert qh.power_coproduct_report(3, smax=2)["pass"]


def test_distinct_and_specialization():
    rep = qh.distinct_structures(3)
    assert rep["pass"]
    setup = qh.modular_setup(3, 3)
    assert qh.specialization_report(qh.conjugation_structure(setup.ctx, zeta_chain(1)))["pass"]


def test_product_admissibility():
    lie = ca.special_algebra(3, 3)
    ok = qh.product_admissible(TwistSpec.product(V12, TwistSpec.vertical(3, 2)), lie)
    assert ok["index_condition"] and ok["commuting"]
    bad = qh.product_admissible(TwistSpec.product(V12, TwistSpec.vertical(3, 1)), lie)
    assert not bad["index_condition"]
