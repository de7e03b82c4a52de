from fractions import Fraction

import pytest

from hopfsmith import quantized_hopf as qh
from hopfsmith.coefficients import PolyPRing, SeriesRing
from hopfsmith.errors import ConfigError
from hopfsmith.twist_engine import (
    TwistSpec,
    build_F,
    build_Finv,
    carrier_context,
    carrier_pair,
    carrier_twist_report,
    catalogue,
    check_twist_axiom,
    commutation_identities,
    compatible_twist_report,
    conjugate_coproduct,
    cybe_report,
    jordanian_equivalence,
    zeta_chain,
)
from hopfsmith.twist_engine import _twist_series


def test_F_expansion_N2():
    ctx, H, E = carrier_context(SeriesRing(2))
    one = ctx.alg.one()
    want = (one.tensor(one) - H.tensor(E).scale(1, 1)
            + (H * (H - one)).tensor(E * E).scale(Fraction(1, 2), 2))
    assert _twist_series(ctx, H, E, 0, False) == want


@pytest.mark.parametrize("ring", [SeriesRing(4), PolyPRing(3, 0), PolyPRing(5, 0)])
def test_carrier_twist_identities(ring):
    assert carrier_twist_report(ring)["pass"]
    assert commutation_identities(ring)["pass"]


def test_carrier_series_need_nilpotent_t():
    # e is not nilpotent on the bare carrier, so with t^p = t the cut series stop inverting
    assert not carrier_twist_report(PolyPRing(3, 1))["pass"]
    assert commutation_identities(PolyPRing(3, 1))["pass"]


def test_jordanian_equivalence():
    rep = jordanian_equivalence(6)
    assert rep["pass"]
    assert rep["t0"] == "1⊗1" and rep["t1"] == "H⊗E"


def test_cybe():
    assert cybe_report()["pass"]


def test_catalogue_counts():
    c3 = catalogue(3)
    assert len(c3["vertical"]) == 6
    assert len(c3["horizontal"]) == 6
    assert len(c3["chains"]) == 2
    assert catalogue(2)["horizontal"] == []


def test_catalogue_carriers_at_p3():
    setup = qh.modular_setup(3, 3)
    cat = catalogue(3)
    for spec in cat["vertical"] + cat["horizontal"]:
        carrier_pair(spec, setup.lie)  # raises unless [h, e] = e


@pytest.mark.parametrize("text", ["vertical:1,2", "horizontal:1,2,3", "zeta:2",
                                  "vertical:1,2*vertical:3,2"])
def test_spec_parse_round_trip(text):
    spec = TwistSpec.parse(text)
    assert TwistSpec.parse(spec.label()) == spec


def test_spec_errors():
    with pytest.raises(ConfigError):
        TwistSpec.parse("vertical:1")
    with pytest.raises(ConfigError, match="n >= 3"):
        TwistSpec.horizontal(1, 2, 3).check_indices(2)


@pytest.mark.parametrize("n,spec", [(2, TwistSpec.vertical(1, 2)), (3, TwistSpec.horizontal(2, 3, 1)),
                                    (3, zeta_chain(2))])
def test_twist_axiom_modular(n, spec):
    setup = qh.modular_setup(3, n, 1)
    ctx = setup.ctx
    rep = check_twist_axiom(ctx, build_F(ctx, spec), build_Finv(ctx, spec))
    assert rep["pass"], rep


def test_twist_axiom_char0():
    setup = qh.char0_setup(2, 4)
    ctx = setup.ctx
    spec = TwistSpec.vertical(1, 2)
    assert check_twist_axiom(ctx, build_F(ctx, spec), build_Finv(ctx, spec))["pass"]


def test_non_admissible_product_fails_cocycle():
    setup = qh.modular_setup(3, 3)
    ctx = setup.ctx
    spec = TwistSpec.product(TwistSpec.vertical(1, 2), TwistSpec.vertical(3, 1))
    assert not qh.product_admissible(spec, setup.lie)["index_condition"]
    assert not check_twist_axiom(ctx, build_F(ctx, spec), build_Finv(ctx, spec))["cocycle"]["pass"]


def test_conjugation_basics():
    setup = qh.modular_setup(3, 2)
    ctx = setup.ctx
    alg = ctx.alg
    spec = TwistSpec.vertical(1, 2)
    F, Finv = build_F(ctx, spec), build_Finv(ctx, spec)
    assert conjugate_coproduct(ctx, F, Finv, alg.one()) == alg.one(2)
    h, _ = ctx.carrier(spec)
    d = conjugate_coproduct(ctx, F, Finv, h)
    assert d.specialize(0) == h.tensor(alg.one()) + alg.one().tensor(h)
    assert compatible_twist_report(ctx)["pass"]
