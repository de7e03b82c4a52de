"""PBW normal forms in (restricted) enveloping algebras and their tensor powers.

An :class:`Element` of rank r is a sparse map from keys
``(m_1, ..., m_r, d)`` to base scalars, where each ``m_i`` is a PBW monomial
(a nondecreasing tuple of generator keys, repeated for exponents) and ``d`` is
the power of ``t``.  Rank 1 elements live in the enveloping algebra, rank 2
and 3 in its tensor powers, and rank 0 elements are plain ring scalars.

Base scalars are ints reduced mod p in characteristic p and ``Fraction`` in
characteristic 0.  The variable ``t`` is carried in the key rather than in the
scalar so that all arithmetic stays on machine ints; the coefficient ring
decides how t-degrees combine (truncation for power series, ``t^p = q t`` for
the p-truncated polynomial ring, no ``t`` at all for plain fields).
"""

from __future__ import annotations

from fractions import Fraction

from .coefficients import (
    Fp,
    PolyPRing,
    PrimeField,
    Rationals,
    SeriesRing,
    TruncatedPolyP,
    TruncatedSeries,
    format_poly,
)
from .combinatorics import ShiftedFactorialPoly
from .errors import DegreeCapExceeded, RingMismatch, UnknownGenerator

DEGREE_CAP = 64


class EnvelopingAlgebra:
    """U(L) or, with ``restricted``, u(L) = U(L)/(g^p - g^[p]) over a coefficient ring.

    ``lie`` must provide ``bracket(a, b)`` and (restricted mode) ``p_power(a)``
    returning sparse dicts ``{generator: scalar}``; generator keys must be
    mutually comparable, and their natural order is the PBW order.
    """

    def __init__(self, lie, ring, restricted: bool = False):
        self.lie = lie
        self.ring = ring
        self.restricted = restricted
        self.char = getattr(ring, "characteristic", 0)
        if restricted and not self.char:
            raise ValueError("restricted enveloping algebras need characteristic p")
        lie_p = getattr(lie, "p", 0)
        if lie_p and self.char and lie_p != self.char:
            raise RingMismatch(f"Lie algebra over F_{lie_p}, ring of characteristic {self.char}")
        self.p = self.char
        if isinstance(ring, SeriesRing):
            self._tmode, self._tN = "series", ring.N
        elif isinstance(ring, PolyPRing):
            self._tmode, self._tN = "polyp", ring.p - 1
            self._q = ring.q
        else:
            self._tmode, self._tN = "none", 0
        self._mg = {}
        self._mm = {}
        self._br = {}
        self._pp = {}

    # scalars -----------------------------------------------------------

    def scalar(self, c):
        """Base scalar from int / Fraction / Fp."""
        if isinstance(c, Fp):
            c = c.v
        if self.char:
            if isinstance(c, Fraction):
                return c.numerator * pow(c.denominator, -1, self.char) % self.char
            return int(c) % self.char
        return Fraction(c)

    def tmul(self, d1: int, d2: int):
        """(degree, factor) for t^d1 * t^d2, or None when the product vanishes."""
        d = d1 + d2
        if self._tmode == "series":
            return None if d > self._tN else (d, 1)
        if self._tmode == "polyp":
            f = 1
            p = self.char
            while d >= p:
                f *= self._q
                d -= p - 1
            return (d, f % p) if f % p else None
        return (0, 1) if d == 0 else None

    def _norm(self, terms: dict) -> dict:
        if self.char:
            p = self.char
            return {k: v % p for k, v in terms.items() if v % p}
        return {k: v for k, v in terms.items() if v}

    # structure constants ---------------------------------------------------

    def bracket(self, a, b) -> dict:
        key = (a, b)
        r = self._br.get(key)
        if r is None:
            r = {g: self.scalar(c) for g, c in self.lie.bracket(a, b).items()}
            r = {g: c for g, c in r.items() if c}
            self._br[key] = r
        return r

    def p_power(self, a) -> dict:
        r = self._pp.get(a)
        if r is None:
            r = {g: self.scalar(c) for g, c in self.lie.p_power(a).items()}
            r = {g: c for g, c in r.items() if c}
            self._pp[a] = r
        return r

    # straightening -------------------------------------------------------

    def mul_mono_gen(self, m: tuple, g) -> dict:
        """Normal form of the word m*g for a sorted monomial m and a generator g."""
        key = (m, g)
        r = self._mg.get(key)
        if r is not None:
            return r
        if not m or not g < m[-1]:
            new = m + (g,)
            if len(new) > DEGREE_CAP:
                raise DegreeCapExceeded(f"monomial length {len(new)} exceeds {DEGREE_CAP}")
            if self.restricted:
                p = self.char
                k = len(new)
                if k >= p and all(x == g for x in new[k - p:]):
                    prefix = new[: k - p]
                    acc = {}
                    for g2, c in self.p_power(g).items():
                        for mono, c2 in self.mul_mono_gen(prefix, g2).items():
                            acc[mono] = acc.get(mono, 0) + c * c2
                    r = self._norm(acc)
                    self._mg[key] = r
                    return r
            r = {new: 1}
            self._mg[key] = r
            return r
        # m = m1 x with x > g:  m1 x g = (m1 g) x + m1 [x, g]
        x = m[-1]
        m1 = m[:-1]
        acc = {}
        for n1, c1 in self.mul_mono_gen(m1, g).items():
            for n2, c2 in self.mul_mono_gen(n1, x).items():
                acc[n2] = acc.get(n2, 0) + c1 * c2
        for g2, c in self.bracket(x, g).items():
            for n2, c2 in self.mul_mono_gen(m1, g2).items():
                acc[n2] = acc.get(n2, 0) + c * c2
        r = self._norm(acc)
        self._mg[key] = r
        return r

    def mul_mono(self, a: tuple, b: tuple) -> dict:
        if not b:
            return {a: 1}
        if not a:
            return {b: 1}
        key = (a, b)
        r = self._mm.get(key)
        if r is not None:
            return r
        cur = {a: 1}
        for g in b:
            nxt = {}
            for mono, c in cur.items():
                for m2, c2 in self.mul_mono_gen(mono, g).items():
                    nxt[m2] = nxt.get(m2, 0) + c * c2
            cur = self._norm(nxt)
        self._mm[key] = cur
        return cur

    def _word(self, word) -> dict:
        cur = {(): 1}
        for g in word:
            nxt = {}
            for mono, c in cur.items():
                for m2, c2 in self.mul_mono_gen(mono, g).items():
                    nxt[m2] = nxt.get(m2, 0) + c * c2
            cur = self._norm(nxt)
        return cur

    # constructors ----------------------------------------------------------

    def zero(self, rank: int = 1) -> "Element":
        return Element(self, rank, {})

    def one(self, rank: int = 1) -> "Element":
        return Element(self, rank, {((),) * rank + (0,): self.scalar(1)})

    def gen(self, g) -> "Element":
        return Element(self, 1, {((g,), 0): self.scalar(1)})

    def lie_element(self, combo: dict) -> "Element":
        """Embed a Lie element {generator: scalar}."""
        return Element(self, 1, self._norm({((g,), 0): self.scalar(c) for g, c in combo.items()}))

    def normal_form(self, word) -> "Element":
        """Normal form of a product of generators given as a sequence."""
        return Element(self, 1, {(m, 0): c for m, c in self._word(word).items()})

    def t(self, k: int = 1, rank: int = 1) -> "Element":
        r = self.tmul(0, k) if k else (0, 1)
        if r is None:
            return self.zero(rank)
        return Element(self, rank, {((),) * rank + (r[0],): self.scalar(r[1])})

    def from_ring(self, x, rank: int = 1) -> "Element":
        """Embed a coefficient ring element as a scalar multiple of 1."""
        pre = ((),) * rank
        if isinstance(x, TruncatedPolyP):
            return Element(self, rank, self._norm({pre + (d,): c for d, c in enumerate(x.c)}))
        if isinstance(x, TruncatedSeries):
            return Element(self, rank, self._norm({pre + (d,): c for d, c in enumerate(x.c)}))
        return Element(self, rank, self._norm({pre + (0,): self.scalar(x)}))


class Element:
    """Sparse rank-r tensor over an :class:`EnvelopingAlgebra` with t-graded scalars."""

    __slots__ = ("alg", "rank", "terms")

    def __init__(self, alg: EnvelopingAlgebra, rank: int, terms: dict):
        self.alg = alg
        self.rank = rank
        self.terms = terms

    # linear structure ------------------------------------------------------

    def _check(self, o):
        if not isinstance(o, Element):
            return self.alg.from_ring(o, self.rank)
        if o.alg is not self.alg or o.rank != self.rank:
            raise RingMismatch("elements from different algebras or ranks")
        return o

    def __add__(self, o):
        o = self._check(o)
        out = dict(self.terms)
        for k, v in o.terms.items():
            out[k] = out.get(k, 0) + v
        return Element(self.alg, self.rank, self.alg._norm(out))

    __radd__ = __add__

    def __neg__(self):
        return Element(self.alg, self.rank, self.alg._norm({k: -v for k, v in self.terms.items()}))

    def __sub__(self, o):
        return self + (-self._check(o))

    def __rsub__(self, o):
        return (-self) + o

    def scale(self, c, d: int = 0) -> "Element":
        """Multiply by c * t^d with c a base scalar."""
        c = self.alg.scalar(c)
        out = {}
        for k, v in self.terms.items():
            r = self.alg.tmul(k[-1], d)
            if r is None:
                continue
            nk = k[:-1] + (r[0],)
            out[nk] = out.get(nk, 0) + v * c * r[1]
        return Element(self.alg, self.rank, self.alg._norm(out))

    # multiplication --------------------------------------------------------

    def __mul__(self, o):
        if isinstance(o, (int, Fraction, Fp)):
            return self.scale(o)
        if isinstance(o, (TruncatedPolyP, TruncatedSeries)):
            o = self.alg.from_ring(o, self.rank)
        if not isinstance(o, Element):
            return NotImplemented
        if o.alg is not self.alg:
            raise RingMismatch("elements from different algebras")
        if o.rank == 0 and self.rank:
            return self.tensor(o)
        if self.rank == 0 and o.rank:
            return o.tensor(self)
        if o.rank != self.rank:
            raise RingMismatch("rank mismatch")
        alg = self.alg
        r = self.rank
        if r == 2:
            return self._mul_rank2(o)
        out = {}
        for ka, ca in self.terms.items():
            for kb, cb in o.terms.items():
                td = alg.tmul(ka[-1], kb[-1])
                if td is None:
                    continue
                d, f = td
                c = ca * cb * f
                if r == 1:
                    for m, c2 in alg.mul_mono(ka[0], kb[0]).items():
                        key = (m, d)
                        out[key] = out.get(key, 0) + c * c2
                else:
                    legs = [alg.mul_mono(ka[i], kb[i]) for i in range(r)]
                    _outer(out, legs, d, c)
        return Element(alg, r, alg._norm(out))

    def _mul_rank2(self, o: "Element") -> "Element":
        # group by the first leg so that second-leg products are summed
        # before being spread over the (few) first-leg monomials
        alg = self.alg
        ga, gb = _group_first_leg(self), _group_first_leg(o)
        out = {}
        for a1, ta in ga.items():
            for b1, tb in gb.items():
                right = {}
                for (a2, da), ca in ta.items():
                    for (b2, db), cb in tb.items():
                        td = alg.tmul(da, db)
                        if td is None:
                            continue
                        d, f = td
                        c = ca * cb * f
                        for m, c2 in alg.mul_mono(a2, b2).items():
                            key = (m, d)
                            right[key] = right.get(key, 0) + c * c2
                right = alg._norm(right)
                if not right:
                    continue
                for m1, c1 in alg.mul_mono(a1, b1).items():
                    for (m2, d), c2 in right.items():
                        key = (m1, m2, d)
                        out[key] = out.get(key, 0) + c1 * c2
        return Element(alg, 2, alg._norm(out))

    def __rmul__(self, o):
        if isinstance(o, (int, Fraction, Fp)):
            return self.scale(o)
        if isinstance(o, (TruncatedPolyP, TruncatedSeries)):
            return self.alg.from_ring(o, self.rank) * self
        return NotImplemented

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative powers need an explicit inverse")
        out = self.alg.one(self.rank)
        base = self
        while k:
            if k & 1:
                out = out * base
            k >>= 1
            if k:
                base = base * base
        return out

    def commutator(self, o) -> "Element":
        return self * o - o * self

    def tensor(self, o: "Element") -> "Element":
        """self ⊗ o with t-degrees multiplied in the shared ring."""
        alg = self.alg
        out = {}
        for ka, ca in self.terms.items():
            for kb, cb in o.terms.items():
                td = alg.tmul(ka[-1], kb[-1])
                if td is None:
                    continue
                key = ka[:-1] + kb[:-1] + (td[0],)
                out[key] = out.get(key, 0) + ca * cb * td[1]
        return Element(alg, self.rank + o.rank, alg._norm(out))

    # comparison / inspection -------------------------------------------------

    def __eq__(self, o):
        if isinstance(o, Element):
            return self.rank == o.rank and self.terms == o.terms
        if isinstance(o, (int, Fraction)):
            return self == self.alg.from_ring(o, self.rank)
        return NotImplemented

    def __hash__(self):
        return hash((self.rank, frozenset(self.terms.items())))

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def max_length(self) -> int:
        return max((sum(len(m) for m in k[:-1]) for k in self.terms), default=0)

    def t_degrees(self) -> set:
        return {k[-1] for k in self.terms}

    def t_slice(self, d: int) -> "Element":
        return Element(self.alg, self.rank, {k[:-1] + (0,): v for k, v in self.terms.items() if k[-1] == d})

    def truncate(self, N: int) -> "Element":
        return Element(self.alg, self.rank, {k: v for k, v in self.terms.items() if k[-1] <= N})

    def coefficients(self) -> dict:
        """Map (m_1, ..., m_r) -> coefficient ring element."""
        by = {}
        for k, v in self.terms.items():
            by.setdefault(k[:-1], {})[k[-1]] = v
        ring = self.alg.ring
        out = {}
        for legs, poly in by.items():
            top = max(poly)
            coeffs = [poly.get(d, 0) for d in range(top + 1)]
            if isinstance(ring, PolyPRing):
                out[legs] = TruncatedPolyP(coeffs, ring.p, ring.q)
            elif isinstance(ring, SeriesRing):
                out[legs] = TruncatedSeries(coeffs, ring.N)
            elif isinstance(ring, PrimeField):
                out[legs] = Fp(coeffs[0], ring.p)
            else:
                out[legs] = coeffs[0]
        return out

    def specialize(self, t0) -> "Element":
        """Substitute t = t0 (an element of the prime field) in every coefficient."""
        alg = self.alg
        t0 = alg.scalar(t0)
        out = {}
        for k, v in self.terms.items():
            key = k[:-1] + (0,)
            out[key] = out.get(key, 0) + v * t0 ** k[-1]
        return Element(alg, self.rank, alg._norm(out))

    def format(self, label=str) -> str:
        if not self.terms:
            return "0"
        parts = []
        for legs, c in sorted(self.coefficients().items(), key=lambda kv: _legs_key(kv[0])):
            cs = _coeff_str(c)
            mono = "⊗".join(_mono_str(m, label) for m in legs)
            parts.append(f"({cs})*{mono}" if mono else f"({cs})")
        return " + ".join(parts)

    def __repr__(self):
        return self.format()


def _legs_key(legs):
    return tuple((len(m), tuple(repr(x) for x in m)) for m in legs)


def _coeff_str(c) -> str:
    if isinstance(c, TruncatedPolyP):
        return format_poly([str(x) for x in c.c])
    if isinstance(c, TruncatedSeries):
        return format_poly([str(x) for x in c.c])
    return str(c)


def _mono_str(m, label) -> str:
    if not m:
        return "1"
    out = []
    i = 0
    while i < len(m):
        j = i
        while j < len(m) and m[j] == m[i]:
            j += 1
        k = j - i
        out.append(label(m[i]) + (f"^{k}" if k > 1 else ""))
        i = j
    return "·".join(out)


def _group_first_leg(x: "Element") -> dict:
    groups = {}
    for (m1, m2, d), c in x.terms.items():
        groups.setdefault(m1, {})[(m2, d)] = c
    return groups


def _outer(out: dict, legs: list, d: int, c):
    if len(legs) == 2:
        for m1, c1 in legs[0].items():
            cc = c * c1
            for m2, c2 in legs[1].items():
                key = (m1, m2, d)
                out[key] = out.get(key, 0) + cc * c2
        return
    for m1, c1 in legs[0].items():
        for m2, c2 in legs[1].items():
            cc = c * c1 * c2
            for m3, c3 in legs[2].items():
                key = (m1, m2, m3, d)
                out[key] = out.get(key, 0) + cc * c3


# --------------------------------------------------------------------------
# substitution into polynomials


def eval_shifted_factorial(x: Element, poly: ShiftedFactorialPoly) -> Element:
    """Substitute the rank-1 element x for the symbol of a shifted factorial."""
    return eval_int_poly(x, poly.coeffs)


def eval_int_poly(x: Element, coeffs) -> Element:
    alg = x.alg
    acc = alg.zero(x.rank)
    one = alg.one(x.rank)
    for c in reversed(coeffs):
        acc = acc * x + one.scale(c)
    return acc


def one_minus_power(e: Element, b: int, N: int | None = None) -> Element:
    """(1 - e t)^b for an integer b.

    For b >= 0 the binomial expansion is exact.  For b < 0 the geometric series
    is summed until e^r t^r vanishes, or up to t^N when ``N`` is given.
    """
    alg = e.alg
    one = alg.one(e.rank)
    et = e.scale(1, 1)
    if b >= 0:
        return (one - et) ** b
    inv = one
    term = one
    r = 0
    while True:
        r += 1
        if N is not None and r > N:
            break
        term = term * et
        if not term:
            break
        inv = inv + term
    return inv ** (-b)


# --------------------------------------------------------------------------
# homomorphisms


class Hom:
    """Multiplicative (or anti-multiplicative) extension of generator images.

    ``images`` maps each generator of the source algebra to an Element of the
    target (any rank, possibly rank 0 for scalar-valued maps such as a counit).
    Scalars and t-degrees of the source are carried over unchanged, so source
    and target must share the coefficient ring.
    """

    def __init__(self, source: EnvelopingAlgebra, target: EnvelopingAlgebra, images: dict,
                 rank: int, anti: bool = False, fn=None):
        self.source = source
        self.target = target
        self.images = dict(images)
        self.rank = rank
        self.anti = anti
        self.fn = fn
        self._cache = {(): target.one(rank)}

    def image_mono(self, m: tuple) -> Element:
        r = self._cache.get(m)
        if r is None:
            if self.anti:
                r = self.image_gen(m[-1]) * self.image_mono(m[:-1])
            else:
                r = self.image_mono(m[:-1]) * self.image_gen(m[-1])
            self._cache[m] = r
        return r

    def image_gen(self, g) -> Element:
        r = self.images.get(g)
        if r is None:
            if self.fn is None:
                raise UnknownGenerator(g)
            r = self.images[g] = self.fn(g)
        return r

    def __call__(self, x: Element) -> Element:
        if x.rank != 1:
            raise ValueError("Hom applies to rank-1 elements; use apply_legs for tensors")
        tgt = self.target
        out = {}
        for (m, d), c in x.terms.items():
            img = self.image_mono(m)
            for k, v in img.terms.items():
                td = tgt.tmul(k[-1], d)
                if td is None:
                    continue
                key = k[:-1] + (td[0],)
                out[key] = out.get(key, 0) + v * c * td[1]
        return Element(tgt, self.rank, tgt._norm(out))


def identity_hom(alg: EnvelopingAlgebra, gens=()) -> Hom:
    return Hom(alg, alg, {}, 1, fn=alg.gen)


def apply_legs(x: Element, homs: list) -> Element:
    """(f_1 ⊗ ... ⊗ f_r)(x) for a rank-r element x."""
    if len(homs) != x.rank:
        raise ValueError("one map per leg")
    tgt = homs[0].target
    rank = sum(h.rank for h in homs)
    out = {}
    for k, c in x.terms.items():
        acc = None
        for h, m in zip(homs, k[:-1]):
            img = h.image_mono(m)
            acc = img if acc is None else acc.tensor(img)
            if not acc:
                break
        if not acc:
            continue
        for kk, v in acc.terms.items():
            td = tgt.tmul(kk[-1], k[-1])
            if td is None:
                continue
            key = kk[:-1] + (td[0],)
            out[key] = out.get(key, 0) + v * c * td[1]
    return Element(tgt, rank, tgt._norm(out))


def multiply_legs(x: Element) -> Element:
    """m: a ⊗ b -> ab on a rank-2 element."""
    alg = x.alg
    out = {}
    for (a, b, d), c in x.terms.items():
        for m, c2 in alg.mul_mono(a, b).items():
            out[(m, d)] = out.get((m, d), 0) + c * c2
    return Element(alg, 1, alg._norm(out))


def standard_coproduct(alg: EnvelopingAlgebra, gens=()) -> Hom:
    """Δ₀(g) = g⊗1 + 1⊗g."""
    one = alg.one()
    return Hom(alg, alg, {}, 2, fn=lambda g: alg.gen(g).tensor(one) + one.tensor(alg.gen(g)))


def standard_antipode(alg: EnvelopingAlgebra, gens=()) -> Hom:
    return Hom(alg, alg, {}, 1, anti=True, fn=lambda g: -alg.gen(g))


def standard_counit(alg: EnvelopingAlgebra, gens=()) -> Hom:
    return Hom(alg, alg, {}, 0, fn=lambda g: alg.zero(0))


def counit_value(x: Element) -> Element:
    """ε₀ on a rank-1 element: the coefficient of the empty monomial, as rank 0."""
    return Element(x.alg, 0, {(d,): c for (m, d), c in x.terms.items() if not m})


# --------------------------------------------------------------------------
# well-definedness


def well_definedness_check(hom: Hom, gens, bracket=None, p_power=None, pairs=None) -> dict:
    """Check hom([a,b]) = [hom a, hom b] and hom(g)^p = hom(g^[p]) on generators.

    For anti-homomorphisms the bracket side becomes [hom b, hom a].
    ``bracket`` and ``p_power`` default to the source algebra's structure
    constants.  Failures are reported with the first offending generator(s).
    """
    src = hom.source
    bracket = bracket or src.bracket
    gens = list(gens)
    if pairs is None:
        pairs = [(a, b) for i, a in enumerate(gens) for b in gens[i + 1:]]
    bad_br = []
    for a, b in pairs:
        lhs = hom(src.lie_element(bracket(a, b)))
        rhs = hom.image_gen(a).commutator(hom.image_gen(b))
        if hom.anti:
            rhs = -rhs
        if lhs != rhs:
            bad_br.append((a, b))
            break
    bad_pp = []
    if p_power is not None or src.restricted:
        p_power = p_power or src.p_power
        p = src.char
        for g in gens:
            lhs = hom.image_gen(g) ** p
            rhs = hom(src.lie_element(p_power(g)))
            if lhs != rhs:
                bad_pp.append(g)
                break
    return {
        "bracket": {"pass": not bad_br, "witness": bad_br, "pairs": len(pairs)},
        "p_power": {"pass": not bad_pp, "witness": bad_pp},
        "pass": not bad_br and not bad_pp,
    }
