"""Jordanian Drinfel'd twists: construction, axioms and conjugation.

A :class:`TwistSpec` names a carrier pair (h, e) with [h, e] = e.  Given an
enveloping algebra over a ring with a variable t, :func:`build_F` expands

    F_a  = sum_r (-1)^r / r!  h_a^[r] ⊗ e^r t^r
    F'_a = sum_r  1/r!        h_a^<r> ⊗ e^r t^r      (the inverse of F_a)

and products of commuting twists are handled as ordered products.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from . import cartan_algebras as ca
from .coefficients import SeriesRing, TruncatedSeries, series_exp, series_log1p
from .combinatorics import falling_poly, rising_poly, stirling_s
from .errors import ConfigError, TrivialTwist
from .pbw import (
    Element,
    EnvelopingAlgebra,
    Hom,
    apply_legs,
    eval_shifted_factorial,
    identity_hom,
    multiply_legs,
    one_minus_power,
    standard_antipode,
    standard_coproduct,
    standard_counit,
    _mono_str,
)


@dataclass(frozen=True)
class TwistSpec:
    """Catalogue entry: vertical (k, k'), horizontal (k, k', m) or a product chain."""

    kind: str
    indices: tuple = ()
    factors: tuple = field(default_factory=tuple)

    @classmethod
    def vertical(cls, k: int, kp: int) -> "TwistSpec":
        if k == kp:
            raise ConfigError("vertical twist needs k != k'")
        return cls("vertical", (k, kp))

    @classmethod
    def horizontal(cls, k: int, kp: int, m: int) -> "TwistSpec":
        if len({k, kp, m}) != 3:
            raise ConfigError("horizontal twist needs k, k', m pairwise distinct")
        return cls("horizontal", (k, kp, m))

    @classmethod
    def product(cls, *specs: "TwistSpec") -> "TwistSpec":
        flat = []
        for s in specs:
            flat.extend(s.factors if s.kind == "product" else [s])
        return cls("product", (), tuple(flat))

    def chain(self) -> tuple:
        return self.factors if self.kind == "product" else (self,)

    def label(self) -> str:
        if self.kind == "product":
            return "*".join(f.label() for f in self.factors)
        return f"{self.kind}:{','.join(map(str, self.indices))}"

    @classmethod
    def parse(cls, text: str) -> "TwistSpec":
        """'vertical:1,2', 'horizontal:1,2,3', 'zeta:2' or 'a*b' products."""
        parts = text.split("*")
        if len(parts) > 1:
            return cls.product(*(cls.parse(x) for x in parts))
        kind, _, args = text.partition(":")
        try:
            nums = tuple(int(x) for x in args.split(",") if x)
        except ValueError as exc:
            raise ConfigError(f"bad twist selector {text!r}") from exc
        if kind == "vertical" and len(nums) == 2:
            return cls.vertical(*nums)
        if kind == "horizontal" and len(nums) == 3:
            return cls.horizontal(*nums)
        if kind == "zeta" and len(nums) == 1:
            return zeta_chain(nums[0])
        raise ConfigError(f"bad twist selector {text!r}")

    def check_indices(self, n: int):
        for f in self.chain():
            if f.kind == "horizontal" and n < 3:
                raise ConfigError("horizontal twists need n >= 3")
            if any(not 1 <= i <= n for i in f.indices):
                raise ConfigError(f"{f.label()} needs indices in 1..{n}")


def zeta_chain(i: int) -> TwistSpec:
    """F(2,1) F(3,1) ... F(i+1,1)."""
    if i < 1:
        raise ConfigError("zeta chains start at i = 1")
    return TwistSpec.product(*(TwistSpec.vertical(j, 1) for j in range(2, i + 2)))


def catalogue(n: int) -> dict:
    """All basic vertical and horizontal twists plus the zeta chains for dimension n."""
    vertical = [TwistSpec.vertical(k, kp) for k in range(1, n + 1) for kp in range(1, n + 1) if k != kp]
    horizontal = []
    if n >= 3:
        horizontal = [
            TwistSpec.horizontal(k, kp, m)
            for k in range(1, n + 1)
            for kp in range(1, n + 1)
            for m in range(1, n + 1)
            if len({k, kp, m}) == 3
        ]
    chains = [zeta_chain(i) for i in range(1, n)]
    assert len(vertical) == n * (n - 1)
    assert len(horizontal) == (n * (n - 1) * (n - 2) if n >= 3 else 0)
    return {"vertical": vertical, "horizontal": horizontal, "chains": chains}


# --------------------------------------------------------------------------
# carrier pairs inside a concrete Lie algebra


def carrier_pair(spec: TwistSpec, lie) -> tuple:
    """(h, e) as coordinate dicts in ``lie``; verifies [h, e] = e."""
    if spec.kind == "product":
        raise ValueError("products have one carrier pair per factor")
    if isinstance(lie, ca.DerivationLieAlgebra):
        p, n = lie.p, lie.n
        if spec.kind == "vertical":
            h, e = ca.vertical_pair(*spec.indices, n, p)
        else:
            h, e = ca.horizontal_pair(*spec.indices, n, p)
    elif isinstance(lie, ca.ShiftedSpecialAlgebra):
        n = lie.n
        if spec.kind == "vertical":
            h, e = ca.char0_vertical_pair(*spec.indices, n)
        else:
            h, e = ca.char0_horizontal_pair(*spec.indices, n)
    elif isinstance(lie, ca.MatrixLieAlgebra):
        if spec.kind != "horizontal":
            raise ConfigError("sl_n carries only horizontal twists")
        k, kp, m = spec.indices
        h = {(k, k): 1, (kp, kp): -1}
        e = {(k, m): 1}
    else:
        raise TypeError(f"no carrier pairs for {lie!r}")
    spec.check_indices(lie.n)
    hc, ec = lie.coords(h), lie.coords(e)
    if not ec:
        raise TrivialTwist(f"{spec.label()}: e reduces to 0")
    if _clean_combo(lie.bracket_elements(hc, ec), lie.p) != _clean_combo(ec, lie.p):
        raise ValueError(f"{spec.label()}: [h, e] != e")
    return hc, ec


def _clean_combo(d: dict, p: int) -> dict:
    if p:
        return {k: v % p for k, v in d.items() if v % p}
    return {k: Fraction(v) for k, v in d.items() if v}


def commutation_report(spec: TwistSpec, lie) -> dict:
    """Check that distinct factors of a product have commuting carriers."""
    pairs = [carrier_pair(f, lie) for f in spec.chain()]
    bad = []
    for a, (ha, ea) in enumerate(pairs):
        for b, (hb, eb) in enumerate(pairs):
            if a >= b:
                continue
            for name, u, v in (("[h_a,e_b]", ha, eb), ("[e_a,h_b]", ea, hb), ("[e_a,e_b]", ea, eb)):
                if _clean_combo(lie.bracket_elements(u, v), lie.p):
                    bad.append({"factors": [spec.chain()[a].label(), spec.chain()[b].label()],
                                "bracket": name})
    return {"pass": not bad, "witness": bad[:1]}


# --------------------------------------------------------------------------
# twist elements


class TwistContext:
    """An enveloping algebra together with the standard Hopf maps on its generators."""

    def __init__(self, alg: EnvelopingAlgebra, gens):
        self.alg = alg
        self.gens = list(gens)
        self.delta0 = standard_coproduct(alg, self.gens)
        self.s0 = standard_antipode(alg, self.gens)
        self.eps0 = standard_counit(alg, self.gens)
        self.ident = identity_hom(alg, self.gens)

    def rmax(self) -> int:
        """Largest r for which t^r survives in the coefficient ring."""
        ring = self.alg.ring
        if isinstance(ring, SeriesRing):
            return ring.N
        if self.alg.char:
            return self.alg.char - 1
        raise ConfigError("twists need a coefficient ring with a variable t")

    def carrier(self, spec: TwistSpec):
        hc, ec = carrier_pair(spec, self.alg.lie)
        return self.alg.lie_element(hc), self.alg.lie_element(ec)

    def delta0_of(self, x: Element) -> Element:
        return self.delta0(x)

    def s0_of(self, x: Element) -> Element:
        return self.s0(x)


def _twist_series(ctx: TwistContext, H: Element, E: Element, a: int, inverse: bool) -> Element:
    alg = ctx.alg
    out = alg.zero(2)
    epow = alg.one()
    for r in range(ctx.rmax() + 1):
        if r:
            epow = epow * E
        if not epow:
            break
        poly = rising_poly(a, r) if inverse else falling_poly(a, r)
        c = Fraction(1 if inverse else (-1) ** r, math.factorial(r))
        out = out + eval_shifted_factorial(H, poly).tensor(epow).scale(c, r)
    return out


def build_F(ctx: TwistContext, spec: TwistSpec, a: int = 0) -> Element:
    """F_a (ordered product over the chain for product specs)."""
    out = ctx.alg.one(2)
    for f in spec.chain():
        H, E = ctx.carrier(f)
        out = out * _twist_series(ctx, H, E, a, inverse=False)
    return out


def build_Finv(ctx: TwistContext, spec: TwistSpec, a: int = 0) -> Element:
    """The closed-form inverse of build_F: reversed product of the F'_a factors."""
    out = ctx.alg.one(2)
    for f in reversed(spec.chain()):
        H, E = ctx.carrier(f)
        out = out * _twist_series(ctx, H, E, a, inverse=True)
    return out


def build_u(ctx: TwistContext, spec: TwistSpec, a: int = 0) -> Element:
    """u_a = m(S₀ ⊗ Id)(F'_a)."""
    return multiply_legs(apply_legs(build_Finv(ctx, spec, a), [ctx.s0, ctx.ident]))


def build_v(ctx: TwistContext, spec: TwistSpec, a: int = 0) -> Element:
    """v_a = m(Id ⊗ S₀)(F_a)."""
    return multiply_legs(apply_legs(build_F(ctx, spec, a), [ctx.ident, ctx.s0]))


def check_twist_axiom(ctx: TwistContext, F: Element, Finv: Element | None = None) -> dict:
    """Cocycle, counit and invertibility checks for a twist element."""
    alg = ctx.alg
    one = alg.one()
    lhs = F.tensor(one) * apply_legs(F, [ctx.delta0, ctx.ident])
    rhs = one.tensor(F) * apply_legs(F, [ctx.ident, ctx.delta0])
    cocycle = lhs == rhs
    counit_l = apply_legs(F, [ctx.eps0, ctx.ident]) == alg.one(1)
    counit_r = apply_legs(F, [ctx.ident, ctx.eps0]) == alg.one(1)
    report = {
        "cocycle": {"pass": cocycle, "witness": None if cocycle else _first_diff(lhs, rhs)},
        "counit": {"pass": counit_l and counit_r},
    }
    if Finv is not None:
        inv = F * Finv == alg.one(2) and Finv * F == alg.one(2)
        report["inverse"] = {"pass": inv}
    report["pass"] = all(v["pass"] for v in report.values())
    return report


def _first_diff(a: Element, b: Element, label=None):
    """Lowest (t-degree, length) term of a - b, with monomials spelled out when possible."""
    d = a - b
    if not d:
        return None
    k = min(d.terms, key=lambda k: (k[-1], sum(len(m) for m in k[:-1]), repr(k)))
    label = label or getattr(a.alg.lie, "label", str)
    legs = [_mono_str(m, label) if m else "1" for m in k[:-1]]
    return {"t_degree": k[-1], "term": "⊗".join(legs), "coeff": str(d.terms[k])}


def conjugate_coproduct(ctx: TwistContext, F: Element, Finv: Element, x: Element) -> Element:
    """F Δ₀(x) F⁻¹."""
    return F * ctx.delta0(x) * Finv


class ConjugatedAntipode:
    """S(x) = w S₀(x) w⁻¹ with w = m(Id⊗S₀)(F) and w⁻¹ = m(S₀⊗Id)(F⁻¹)."""

    def __init__(self, ctx: TwistContext, F: Element, Finv: Element):
        self.ctx = ctx
        self.w = multiply_legs(apply_legs(F, [ctx.ident, ctx.s0]))
        self.winv = multiply_legs(apply_legs(Finv, [ctx.s0, ctx.ident]))
        one = ctx.alg.one()
        self.inverse_ok = self.w * self.winv == one and self.winv * self.w == one

    def __call__(self, x: Element) -> Element:
        return self.w * self.ctx.s0(x) * self.winv


def twist_antipode(ctx: TwistContext, F: Element, Finv: Element, x: Element) -> Element:
    return ConjugatedAntipode(ctx, F, Finv)(x)


def twisted_structure(ctx: TwistContext, spec: TwistSpec):
    """(Δ, S) homomorphisms obtained by conjugation, defined on all generators."""
    F = build_F(ctx, spec)
    Finv = build_Finv(ctx, spec)
    anti = ConjugatedAntipode(ctx, F, Finv)
    alg = ctx.alg
    delta = Hom(alg, alg, {}, 2, fn=lambda g: conjugate_coproduct(ctx, F, Finv, alg.gen(g)))
    s = Hom(alg, alg, {}, 1, anti=True, fn=lambda g: anti(alg.gen(g)))
    return delta, s, F, Finv, anti


# --------------------------------------------------------------------------
# identities on the two-dimensional carrier


def carrier_context(ring) -> tuple:
    lie = ca.CarrierAlgebra(getattr(ring, "characteristic", 0))
    alg = EnvelopingAlgebra(lie, ring)
    ctx = TwistContext(alg, [0, 1])
    return ctx, alg.gen(0), alg.gen(1)


def carrier_twist_report(ring, a_range=range(-2, 3)) -> dict:
    """F_a F'_b = 1⊗(1-et)^(a-b) and v_a u_b = (1-et)^(-(a+b)) on the carrier."""
    ctx, H, E = carrier_context(ring)
    alg = ctx.alg
    bad_f, bad_vu = [], []
    one = alg.one()
    for a in a_range:
        for b in a_range:
            Fa = _twist_series(ctx, H, E, a, False)
            Fb = _twist_series(ctx, H, E, b, True)
            if Fa * Fb != one.tensor(one_minus_power(E, a - b, ctx.rmax())):
                bad_f.append((a, b))
            v = multiply_legs(apply_legs(Fa, [ctx.ident, ctx.s0]))
            u = multiply_legs(apply_legs(Fb, [ctx.s0, ctx.ident]))
            if v * u != one_minus_power(E, -(a + b), ctx.rmax()):
                bad_vu.append((a, b))
    return {
        "FaFb": {"pass": not bad_f, "witness": bad_f[:1]},
        "vaub": {"pass": not bad_vu, "witness": bad_vu[:1]},
        "pass": not bad_f and not bad_vu,
    }


def commutation_identities(ring, smax: int = 4, mmax: int = 4, a_range=range(-3, 4)) -> dict:
    """e^s h_a^[m] = h_(a-s)^[m] e^s and the rising analogue h_a^<m> shifted the other way."""
    _, H, E = carrier_context(ring)
    bad = []
    for s in range(smax + 1):
        es = E ** s
        for m in range(mmax + 1):
            for a in a_range:
                lhs = es * eval_shifted_factorial(H, falling_poly(a, m))
                rhs = eval_shifted_factorial(H, falling_poly(a - s, m)) * es
                if lhs != rhs:
                    bad.append(("falling", s, m, a))
                lhs = es * eval_shifted_factorial(H, rising_poly(a, m))
                rhs = eval_shifted_factorial(H, rising_poly(a - s, m)) * es
                if lhs != rhs:
                    bad.append(("rising", s, m, a))
    return {"pass": not bad, "witness": bad[:1]}


def cybe_report(ring=None) -> dict:
    """[r12, r13] + [r12, r23] + [r13, r23] = 0 for r = h⊗e - e⊗h."""
    from .coefficients import QQ

    ring = ring or QQ
    lie = ca.CarrierAlgebra(getattr(ring, "characteristic", 0))
    alg = EnvelopingAlgebra(lie, ring)
    h, e, one = alg.gen(0), alg.gen(1), alg.one()

    def leg(x, y, pos):
        parts = [one, one, one]
        parts[pos[0]], parts[pos[1]] = x, y
        return parts[0].tensor(parts[1]).tensor(parts[2])

    def r(pos):
        return leg(h, e, pos) - leg(e, h, pos)

    r12, r13, r23 = r((0, 1)), r((0, 2)), r((1, 2))
    total = r12.commutator(r13) + r12.commutator(r23) + r13.commutator(r23)
    return {"pass": total.is_zero(), "value": total.format()}


def compatible_twist_report(ctx: TwistContext) -> dict:
    """Twisting by the trivial (compatible) twist 1⊗1 leaves Δ₀ unchanged."""
    alg = ctx.alg
    one2 = alg.one(2)
    bad = [g for g in ctx.gens
           if conjugate_coproduct(ctx, one2, one2, alg.gen(g)) != ctx.delta0(alg.gen(g))]
    return {"pass": not bad, "witness": bad[:1]}


def jordanian_equivalence(N: int = 6) -> dict:
    """exp(H ⊗ ln(1 + E t)) = sum_n H^[n] ⊗ E^n t^n / n! through t^N.

    H and E commute across the tensor legs, so the identity reduces to one
    power-series identity per power H^k: sigma^k / k! = sum_n s(n,k)/n! t^n
    with sigma = ln(1 + t) (E absorbed into t).  As a second, independent
    path the exponential itself is expanded at integer H = c and compared to
    sum_n c^[n] t^n / n!.
    """
    sigma = series_log1p(TruncatedSeries.t_power(1, N))
    bad = []
    power = TruncatedSeries.const(1, N)
    for k in range(N + 1):
        if k:
            power = power * sigma
        lhs = power * Fraction(1, math.factorial(k))
        rhs = TruncatedSeries([Fraction(stirling_s(n, k), math.factorial(n)) for n in range(N + 1)], N)
        if lhs != rhs:
            bad.append(("H^k", k))
    for c in range(-3, 4):
        lhs = series_exp(sigma * c)
        rhs = TruncatedSeries([Fraction(falling_poly(0, n)(c), math.factorial(n)) for n in range(N + 1)], N)
        if lhs != rhs:
            bad.append(("H=c", c))
    return {
        "pass": not bad,
        "witness": bad[:1],
        "t0": "1⊗1",
        "t1": "H⊗E",
        "N": N,
    }
