"""Cartan type W and S Lie algebras.

Modular side (characteristic p): the divided power algebra O(n;1), the
Jacobson-Witt algebra W(n;1) of its derivations, and the special algebras
S'(n;1) = Ker(Div) and S(n;1) = S'(n;1)^(1).  A derivation is a dict
``{(alpha, i): c}`` standing for sum c x^(alpha) D_i with residues c mod p.

Characteristic 0 side: Laurent vector fields ``{(beta, i): c}`` standing for
sum c x^beta d_i with d_i = x_i D_i and rational c, the shifted algebras x^eta S
and the positive part S+ = Ker(Div) in the polynomial vector fields W+.

Direction indices i, j, k are 1-based throughout; multi-indices are tuples.
"""

from __future__ import annotations

import itertools
import math
from fractions import Fraction
from functools import lru_cache

from sympy import Matrix
from sympy.matrices.normalforms import hermite_normal_form

from .coefficients import check_odd_prime
from .errors import DegenerateDegree, NotInAlgebra


def eps(i: int, n: int) -> tuple:
    return tuple(1 if j == i - 1 else 0 for j in range(n))


def vadd(a, b):
    return tuple(x + y for x, y in zip(a, b))


def vsub(a, b):
    return tuple(x - y for x, y in zip(a, b))


def vscale(a, c):
    return tuple(x * c for x in a)


def multi_binom(a, b) -> int:
    out = 1
    for x, y in zip(a, b):
        out *= math.comb(x + y, x)
    return out


def multi_factorial(a) -> int:
    out = 1
    for x in a:
        out *= math.factorial(x)
    return out


def all_alphas(n: int, p: int):
    return itertools.product(range(p), repeat=n)


def deg_key(alpha) -> tuple:
    return (sum(alpha), tuple(alpha))


def _clean(d: dict, p: int | None = None) -> dict:
    if p:
        return {k: v % p for k, v in d.items() if v % p}
    return {k: v for k, v in d.items() if v}


def _acc(d: dict, k, v):
    d[k] = d.get(k, 0) + v


# --------------------------------------------------------------------------
# O(n;1)


def divided_mul(a, b, p: int):
    """x^(a) x^(b) = binom(a+b, a) x^(a+b); returns (coeff, a+b) or None if zero."""
    g = vadd(a, b)
    if any(x >= p for x in g):
        return None
    c = multi_binom(a, b) % p
    if not c:
        return None
    return c, g


def o_mul(f: dict, g: dict, p: int) -> dict:
    out = {}
    for a, x in f.items():
        for b, y in g.items():
            r = divided_mul(a, b, p)
            if r:
                _acc(out, r[1], x * y * r[0])
    return _clean(out, p)


def o_partial(f: dict, i: int, p: int) -> dict:
    """D_i x^(a) = x^(a - e_i)."""
    out = {}
    for a, c in f.items():
        if a[i - 1] > 0:
            b = list(a)
            b[i - 1] -= 1
            _acc(out, tuple(b), c)
    return _clean(out, p)


def monomial(alpha, c=1) -> dict:
    return {tuple(alpha): c}


# --------------------------------------------------------------------------
# W(n;1)


def apply_derivation(u: dict, f: dict, p: int) -> dict:
    """u(f) for u = sum f_i D_i acting on f in O(n;1)."""
    out = {}
    for (a, i), c in u.items():
        df = o_partial(f, i, p)
        if df:
            for g, y in o_mul({a: c}, df, p).items():
                _acc(out, g, y)
    return _clean(out, p)


def w_bracket(u: dict, v: dict, p: int) -> dict:
    """[f D_i, g D_j] = f D_i(g) D_j - g D_j(f) D_i, extended bilinearly."""
    out = {}
    for (a, i), x in u.items():
        for (b, j), y in v.items():
            if b[i - 1] > 0:
                db = list(b)
                db[i - 1] -= 1
                r = divided_mul(a, tuple(db), p)
                if r:
                    _acc(out, (r[1], j), x * y * r[0])
            if a[j - 1] > 0:
                da = list(a)
                da[j - 1] -= 1
                r = divided_mul(b, tuple(da), p)
                if r:
                    _acc(out, (r[1], i), -x * y * r[0])
    return _clean(out, p)


def w_add(u: dict, v: dict, p: int, c: int = 1) -> dict:
    out = dict(u)
    for k, y in v.items():
        _acc(out, k, c * y)
    return _clean(out, p)


def w_scale(u: dict, c: int, p: int) -> dict:
    return _clean({k: v * c for k, v in u.items()}, p)


def divergence(u: dict, p: int) -> dict:
    """Div(sum f_i D_i) = sum D_i(f_i), an element of O(n;1)."""
    out = {}
    for (a, i), c in u.items():
        for g, y in o_partial({a: c}, i, p).items():
            _acc(out, g, y)
    return _clean(out, p)


def d_ij(f: dict, i: int, j: int, p: int) -> dict:
    """D_ij(f) = D_j(f) D_i - D_i(f) D_j."""
    out = {}
    for a, c in o_partial(f, j, p).items():
        _acc(out, (a, i), c)
    for a, c in o_partial(f, i, p).items():
        _acc(out, (a, j), -c)
    return _clean(out, p)


def p_power_derivation(u: dict, n: int, p: int) -> dict:
    """D^p as a derivation: sum_j D^p(x_j) D_j."""
    out = {}
    for j in range(1, n + 1):
        f = monomial(eps(j, n))
        for _ in range(p):
            f = apply_derivation(u, f, p)
            if not f:
                break
        for a, c in f.items():
            _acc(out, (a, j), c)
    return _clean(out, p)


def derivation_power_on(u: dict, f: dict, k: int, p: int) -> dict:
    for _ in range(k):
        f = apply_derivation(u, f, p)
    return f


# --------------------------------------------------------------------------
# linear algebra mod p


class ModpSolver:
    """Reduced echelon form of a list of sparse vectors, with coordinate recovery."""

    def __init__(self, vectors, p: int):
        self.p = p
        self.rows = []  # (pivot, vector dict, transform dict)
        self.rank = 0
        self.independent = []
        for idx, v in enumerate(vectors):
            red, tr = self._reduce(dict(v), {idx: 1})
            if red:
                piv = min(red, key=_sort_key)
                inv = pow(red[piv], -1, p)
                red = _clean({k: x * inv for k, x in red.items()}, p)
                tr = _clean({k: x * inv for k, x in tr.items()}, p)
                # keep rows fully reduced against the new pivot
                new_rows = []
                for piv2, r2, t2 in self.rows:
                    c = r2.get(piv, 0)
                    if c:
                        r2 = w_add(r2, red, p, -c)
                        t2 = w_add(t2, tr, p, -c)
                    new_rows.append((piv2, r2, t2))
                self.rows = new_rows + [(piv, red, tr)]
                self.independent.append(idx)
        self.pivots = {piv: (r, t) for piv, r, t in self.rows}

    def _reduce(self, v: dict, tr: dict):
        p = self.p
        for piv, r, t in self.rows:
            c = v.get(piv, 0) % p
            if c:
                v = w_add(v, r, p, -c)
                tr = w_add(tr, t, p, -c)
        return _clean(v, p), tr

    def coords(self, v: dict):
        """Coefficients c with v = sum c_idx vectors[idx], or None if v is outside the span."""
        p = self.p
        v = _clean(dict(v), p)
        out = {}
        for piv, (r, t) in self.pivots.items():
            c = v.get(piv, 0)
            if c:
                v = w_add(v, r, p, -c)
                for k, x in t.items():
                    _acc(out, k, c * x)
        if v:
            return None
        return _clean(out, p)


def _sort_key(k):
    # (alpha, i) keys sorted by degree then lexicographically
    a, i = k
    return (sum(a), a, i)


# --------------------------------------------------------------------------
# finite-dimensional derivation algebras


class DerivationLieAlgebra:
    """A p-subalgebra of W(n;1) with an explicit ordered basis.

    Generators of the enveloping algebra are the integers 0..dim-1 in basis
    order.  Brackets and p-th powers are computed on O(n;1) and re-expressed in
    the basis; failure to do so raises NotInAlgebra.
    """

    def __init__(self, n: int, p: int, elements, tags, name: str):
        self.n = n
        self.p = p
        self.name = name
        self.elements = [dict(e) for e in elements]
        self.tags = list(tags)
        self.dim = len(self.elements)
        self.solver = ModpSolver(self.elements, p)
        if len(self.solver.independent) != self.dim:
            raise ValueError(f"{name}: basis is linearly dependent")
        self._br = {}
        self._pp = {}
        self.index_of_tag = {t: i for i, t in enumerate(self.tags)}

    # generators of the enveloping algebra
    def generators(self):
        return range(self.dim)

    def coords(self, u: dict) -> dict:
        c = self.solver.coords(u)
        if c is None:
            raise NotInAlgebra(f"element leaves {self.name}: {u}")
        return c

    def element(self, idx: int) -> dict:
        return self.elements[idx]

    def vector(self, lie: dict) -> dict:
        """Derivation for a Lie element {idx: c}."""
        out = {}
        for idx, c in lie.items():
            for k, x in self.elements[idx].items():
                _acc(out, k, c * x)
        return _clean(out, self.p)

    def bracket(self, a: int, b: int) -> dict:
        key = (a, b)
        r = self._br.get(key)
        if r is None:
            r = self.coords(w_bracket(self.elements[a], self.elements[b], self.p))
            self._br[key] = r
        return r

    def bracket_elements(self, u: dict, v: dict) -> dict:
        out = {}
        for a, x in u.items():
            for b, y in v.items():
                for c, z in self.bracket(a, b).items():
                    _acc(out, c, x * y * z)
        return _clean(out, self.p)

    def p_power(self, a: int) -> dict:
        r = self._pp.get(a)
        if r is None:
            r = self.coords(p_power_derivation(self.elements[a], self.n, self.p))
            self._pp[a] = r
        return r

    def p_power_element(self, u: dict) -> dict:
        return self.coords(p_power_derivation(self.vector(u), self.n, self.p))

    def lie(self, u: dict) -> dict:
        """Coordinates of a derivation (alias of coords)."""
        return self.coords(u)

    def label(self, idx: int) -> str:
        return tag_label(self.tags[idx])

    def gen_id(self, idx: int) -> dict:
        return tag_gen_id(self.tags[idx])

    def sort_key(self, idx: int):
        return idx


def tag_label(tag) -> str:
    kind = tag[0]
    if kind == "Dij":
        _, alpha, i, j = tag
        return f"D{i}{j}(x^({','.join(map(str, alpha))}))"
    if kind == "xD":
        _, alpha, j = tag
        return f"x^({','.join(map(str, alpha))})D{j}"
    if kind == "W":
        _, alpha, j = tag
        return f"x^({','.join(map(str, alpha))})D{j}"
    if kind == "E":
        _, i, j = tag
        return f"E{i}{j}"
    if kind == "H":
        _, i = tag
        return f"E{i}{i}-E{i + 1}{i + 1}"
    if kind == "SPlus":
        _, beta, r = tag
        return f"S+[{','.join(map(str, beta))}]#{r}"
    return str(tag)


def tag_gen_id(tag) -> dict:
    kind = tag[0]
    if kind == "Dij":
        return {"kind": "Dij", "i": tag[2], "j": tag[3], "alpha": list(tag[1])}
    if kind in ("xD", "W"):
        return {"kind": kind, "j": tag[2], "alpha": list(tag[1])}
    if kind == "E":
        return {"kind": "E", "i": tag[1], "j": tag[2]}
    if kind == "H":
        return {"kind": "H", "i": tag[1]}
    if kind == "SPlus":
        return {"kind": "SPlus", "alpha": list(tag[1]), "i": tag[2]}
    raise ValueError(tag)


def gen_id_tag(gid: dict):
    kind = gid["kind"]
    if kind == "Dij":
        return ("Dij", tuple(gid["alpha"]), gid["i"], gid["j"])
    if kind in ("xD", "W"):
        return (kind, tuple(gid["alpha"]), gid["j"])
    if kind == "E":
        return ("E", gid["i"], gid["j"])
    if kind == "H":
        return ("H", gid["i"])
    if kind == "SPlus":
        return ("SPlus", tuple(gid["alpha"]), gid["i"])
    raise ValueError(gid)


def s_candidates(n: int, p: int):
    """Tags D_ij(x^(alpha)), j < i, in the global order (|alpha|, alpha, (i, j))."""
    out = []
    for alpha in sorted(all_alphas(n, p), key=deg_key):
        for i in range(1, n + 1):
            for j in range(1, i):
                out.append(("Dij", tuple(alpha), i, j))
    return out


def tag_element(tag, n: int, p: int) -> dict:
    kind = tag[0]
    if kind == "Dij":
        _, alpha, i, j = tag
        return d_ij(monomial(alpha), i, j, p)
    if kind in ("xD", "W"):
        _, alpha, j = tag
        return {(tuple(alpha), j): 1}
    raise ValueError(tag)


@lru_cache(maxsize=None)
def _enumerate(p: int, n: int, prime_variant: bool):
    check_odd_prime(p)
    if n < 2:
        raise ValueError("n must be >= 2")
    chosen, elems = [], []
    solver_rows = ModpSolver([], p)
    for tag in s_candidates(n, p):
        el = tag_element(tag, n, p)
        if not el:
            continue
        red, _ = solver_rows._reduce(dict(el), {})
        if red:
            chosen.append(tag)
            elems.append(el)
            solver_rows = _extend(solver_rows, el, p)
    if prime_variant:
        tau = (p - 1,) * n
        for j in range(1, n + 1):
            alpha = vsub(tau, vscale(eps(j, n), p - 1))
            chosen.append(("xD", alpha, j))
            elems.append({(alpha, j): 1})
    return tuple(chosen), tuple(tuple(sorted(e.items())) for e in elems)


def _extend(solver: ModpSolver, v: dict, p: int) -> ModpSolver:
    vecs = [r for _, r, _ in solver.rows] + [v]
    return ModpSolver(vecs, p)


def enumerate_S_basis(p: int, n: int, prime_variant: bool = False) -> list:
    """Ordered basis tags of S(n;1) (or S'(n;1) with ``prime_variant``)."""
    tags, _ = _enumerate(p, n, prime_variant)
    return list(tags)


def s_dimension(p: int, n: int) -> int:
    return (n - 1) * (p**n - 1)


def s_prime_dimension(p: int, n: int) -> int:
    return (n - 1) * p**n + 1


_ALG_CACHE = {}


def special_algebra(p: int, n: int, prime_variant: bool = False) -> DerivationLieAlgebra:
    key = ("S", p, n, prime_variant)
    if key not in _ALG_CACHE:
        tags, elems = _enumerate(p, n, prime_variant)
        name = f"S'({n};1)" if prime_variant else f"S({n};1)"
        _ALG_CACHE[key] = DerivationLieAlgebra(
            n, p, [dict(e) for e in elems], tags, f"{name} p={p}"
        )
    return _ALG_CACHE[key]


def witt_algebra(p: int, n: int) -> DerivationLieAlgebra:
    key = ("W", p, n)
    if key not in _ALG_CACHE:
        check_odd_prime(p)
        tags, elems = [], []
        for alpha in sorted(all_alphas(n, p), key=deg_key):
            for j in range(1, n + 1):
                tags.append(("W", tuple(alpha), j))
                elems.append({(tuple(alpha), j): 1})
        _ALG_CACHE[key] = DerivationLieAlgebra(n, p, elems, tags, f"W({n};1) p={p}")
    return _ALG_CACHE[key]


def divergence_kernel_dimension(p: int, n: int) -> int:
    """dim Ker(Div) in W(n;1), computed by linear algebra over F_p."""
    w = witt_algebra(p, n)
    images = [divergence(e, p) for e in w.elements]
    rank = len(ModpSolver([{(a, 0): c for a, c in img.items()} for img in images], p).independent)
    return w.dim - rank


def derived_dimension(alg: DerivationLieAlgebra) -> int:
    """dim of the span of all brackets of basis elements."""
    p = alg.p
    vecs = []
    for a in range(alg.dim):
        for b in range(a + 1, alg.dim):
            v = w_bracket(alg.elements[a], alg.elements[b], p)
            if v:
                vecs.append(v)
    return len(ModpSolver(vecs, p).independent)


def din_span_report(p: int, n: int) -> dict:
    """Compare Span{D_in(f) : f in O(n;1), i < n} with the enumerated S(n;1).

    Returns both dimensions, whether the spans coincide, and the first basis
    element outside the D_in span (if any).
    """
    alg = special_algebra(p, n)
    vecs = []
    for alpha in all_alphas(n, p):
        for i in range(1, n):
            v = d_ij(monomial(alpha), i, n, p)
            if v:
                vecs.append(v)
    span = ModpSolver(vecs, p)
    outside = [alg.tags[k] for k, e in enumerate(alg.elements) if span.coords(e) is None]
    return {
        "p": p,
        "n": n,
        "din_span_dim": len(span.independent),
        "s_dim": alg.dim,
        "equal": not outside and len(span.independent) == alg.dim,
        "outside": [tag_label(t) for t in outside[:1]],
        "outside_count": len(outside),
    }


# --------------------------------------------------------------------------
# modular twist carriers


def vertical_pair(k: int, kp: int, n: int, p: int):
    """h = D_kk'(x^(e_k+e_k')), e = 2 D_kk'(x^(2e_k+e_k')) as derivations."""
    h = d_ij(monomial(vadd(eps(k, n), eps(kp, n))), k, kp, p)
    e = w_scale(d_ij(monomial(vadd(vscale(eps(k, n), 2), eps(kp, n))), k, kp, p), 2, p)
    return h, e


def horizontal_pair(k: int, kp: int, m: int, n: int, p: int):
    """h = D_kk'(x^(e_k+e_k')), e = D_mk(x^(2e_k)) = x_k D_m."""
    h = d_ij(monomial(vadd(eps(k, n), eps(kp, n))), k, kp, p)
    e = d_ij(monomial(vscale(eps(k, n), 2)), m, k, p)
    return h, e


# --------------------------------------------------------------------------
# characteristic 0: Laurent vector fields x^beta d_i


def laurent_bracket(u: dict, v: dict) -> dict:
    """[x^a d, x^b d'] = x^{a+b}(d(b) d' - d'(a) d) on basis fields d = d_i."""
    out = {}
    for (a, i), x in u.items():
        for (b, j), y in v.items():
            g = vadd(a, b)
            c1 = b[i - 1]  # d_i(b)
            c2 = a[j - 1]  # d_j(a)
            if c1:
                _acc(out, (g, j), x * y * c1)
            if c2:
                _acc(out, (g, i), -x * y * c2)
    return _clean(out)


def laurent_div(u: dict) -> dict:
    """div(x^b d_i) = b_i x^b."""
    out = {}
    for (b, i), c in u.items():
        if b[i - 1]:
            _acc(out, b, c * b[i - 1])
    return _clean(out)


def laurent_add(u: dict, v: dict, c=1) -> dict:
    out = dict(u)
    for k, y in v.items():
        _acc(out, k, c * y)
    return _clean(out)


def laurent_scale(u: dict, c) -> dict:
    return _clean({k: v * c for k, v in u.items()})


def field_from_T(beta, vec) -> dict:
    """x^beta d with d = sum vec_i d_i."""
    return _clean({(tuple(beta), i + 1): Fraction(c) for i, c in enumerate(vec) if c})


def wplus_to_laurent(w: dict) -> dict:
    """x^a D_i = x^{a - e_i} d_i."""
    n = len(next(iter(w))[0]) if w else 0
    return _clean({(vsub(a, eps(i, n)), i): Fraction(c) for (a, i), c in w.items()})


def laurent_to_wplus(u: dict) -> dict:
    n = len(next(iter(u))[0]) if u else 0
    return _clean({(vadd(b, eps(i, n)), i): c for (b, i), c in u.items()})


def Div_wplus(w: dict) -> dict:
    """Div(sum f_i D_i) = sum D_i(f_i) for ordinary polynomial coefficients."""
    out = {}
    for (a, i), c in w.items():
        if a[i - 1]:
            b = list(a)
            b[i - 1] -= 1
            _acc(out, tuple(b), c * a[i - 1])
    return _clean(out)


def integer_kernel(row, n: int) -> list:
    """A Z-basis of {v in Z^n : row . v = 0} via unimodular column reduction."""
    cols = [[row[c]] + [1 if r == c else 0 for r in range(n)] for c in range(n)]
    nz = [c for c in range(n) if cols[c][0] != 0]
    while len(nz) > 1:
        cmin = min(nz, key=lambda c: abs(cols[c][0]))
        for c in nz:
            if c != cmin:
                q = cols[c][0] // cols[cmin][0]
                cols[c] = [x - q * y for x, y in zip(cols[c], cols[cmin])]
        nz = [c for c in range(n) if cols[c][0] != 0]
    return [cols[c][1:] for c in range(n) if not nz or c != nz[0]]


def canonical_lattice_basis(vectors, n: int) -> list:
    """Hermite normal form of the lattice spanned by ``vectors``, sign-normalized and sorted."""
    if not vectors:
        return []
    m = Matrix(n, len(vectors), lambda r, c: vectors[c][r])
    w = hermite_normal_form(m)
    out = []
    for c in range(w.shape[1]):
        v = [int(w[r, c]) for r in range(n)]
        if not any(v):
            continue
        first = next(x for x in v if x)
        if first < 0:
            v = [-x for x in v]
        out.append(tuple(v))
    return sorted(out)


def eta_component_basis(eta, alpha, allowed=None) -> list:
    """Canonical Z-basis of {d in T : d(alpha - eta) = 0}, optionally supported on ``allowed``."""
    eta, alpha = tuple(eta), tuple(alpha)
    if alpha == eta:
        raise DegenerateDegree(f"the component of degree eta={eta} is zero")
    n = len(alpha)
    w = vsub(alpha, eta)
    idx = list(range(n)) if allowed is None else sorted(i - 1 for i in allowed)
    if not idx:
        return []
    sub = [w[i] for i in idx]
    kern = integer_kernel(sub, len(idx))
    full = []
    for v in kern:
        f = [0] * n
        for pos, x in zip(idx, v):
            f[pos] = x
        full.append(f)
    return canonical_lattice_basis(full, n)


class ShiftedSpecialAlgebra:
    """x^eta S (optionally intersected with W+), with a lazily materialized basis.

    Basis keys are (|beta|, beta, r): the r-th canonical kernel vector of the
    homogeneous component x^beta T_{beta - eta}.  With ``positive`` only
    fields x^beta d_i with beta + e_i >= 0 are allowed, which for eta = -1
    gives S+ under x^a D_i <-> x^{a - e_i} d_i.
    """

    def __init__(self, n: int, eta=None, positive: bool = True):
        self.n = n
        self.eta = tuple(eta) if eta is not None else (-1,) * n
        self.positive = positive
        self.p = 0
        self._comp = {}
        self._br = {}
        self.name = "S+" if positive and self.eta == (-1,) * n else f"x^{self.eta}S"

    def allowed(self, beta) -> list:
        if not self.positive:
            return list(range(1, self.n + 1))
        out = []
        for i in range(1, self.n + 1):
            if all(b + (1 if j == i - 1 else 0) >= 0 for j, b in enumerate(beta)):
                out.append(i)
        return out

    def component(self, beta) -> list:
        beta = tuple(beta)
        c = self._comp.get(beta)
        if c is None:
            if beta == self.eta:
                c = []
            else:
                c = eta_component_basis(self.eta, beta, self.allowed(beta))
            self._comp[beta] = c
        return c

    def key(self, beta, r: int) -> tuple:
        return (sum(beta), tuple(beta), r)

    def element(self, key) -> dict:
        _, beta, r = key
        return field_from_T(beta, self.component(beta)[r])

    def vector(self, lie: dict) -> dict:
        out = {}
        for key, c in lie.items():
            for k, x in self.element(key).items():
                _acc(out, k, c * x)
        return _clean(out)

    def coords(self, u: dict) -> dict:
        """Decompose a Laurent field into basis keys; NotInAlgebra if impossible."""
        by_beta = {}
        for (b, i), c in u.items():
            by_beta.setdefault(b, {})[i] = Fraction(c)
        out = {}
        for beta, comp in by_beta.items():
            basis = self.component(beta)
            sol = _solve_rational([list(v) for v in basis],
                                  [comp.get(i, 0) for i in range(1, self.n + 1)])
            if sol is None:
                raise NotInAlgebra(f"x^{beta} component not in {self.name}: {comp}")
            for r, c in enumerate(sol):
                if c:
                    out[self.key(beta, r)] = c
        return out

    def generators(self):
        raise TypeError("infinite-dimensional algebra: generators are materialized lazily")

    def bracket(self, a, b) -> dict:
        key = (a, b)
        r = self._br.get(key)
        if r is None:
            r = self.coords(laurent_bracket(self.element(a), self.element(b)))
            self._br[key] = r
        return r

    def bracket_elements(self, u: dict, v: dict) -> dict:
        out = {}
        for a, x in u.items():
            for b, y in v.items():
                for c, z in self.bracket(a, b).items():
                    _acc(out, c, x * y * z)
        return _clean(out)

    def p_power(self, a):
        raise TypeError("characteristic 0 algebra has no p-map")

    def label(self, key) -> str:
        _, beta, r = key
        vec = self.component(beta)[r]
        terms = "+".join(f"{c}d{i + 1}" for i, c in enumerate(vec) if c).replace("+-", "-")
        return f"x^({','.join(map(str, beta))})({terms})"

    def gen_id(self, key) -> dict:
        _, beta, r = key
        return {"kind": "SPlus" if self.name == "S+" else "xetaS", "alpha": list(beta), "i": r}

    def sort_key(self, key):
        return key


def _solve_rational(basis, target):
    """Solve sum c_r basis[r] = target over Q; None if inconsistent."""
    n = len(target)
    m = len(basis)
    rows = [[Fraction(basis[r][i]) for r in range(m)] + [Fraction(target[i])] for i in range(n)]
    piv_cols = []
    row = 0
    for col in range(m):
        piv = next((r for r in range(row, n) if rows[r][col] != 0), None)
        if piv is None:
            continue
        rows[row], rows[piv] = rows[piv], rows[row]
        inv = 1 / rows[row][col]
        rows[row] = [x * inv for x in rows[row]]
        for r in range(n):
            if r != row and rows[r][col] != 0:
                f = rows[r][col]
                rows[r] = [x - f * y for x, y in zip(rows[r], rows[row])]
        piv_cols.append(col)
        row += 1
    for r in range(row, n):
        if rows[r][m] != 0:
            return None
    sol = [Fraction(0)] * m
    for r, col in enumerate(piv_cols):
        sol[col] = rows[r][m]
    return sol


def splus_element(alpha, i: int, n: int) -> dict:
    """alpha_n x^{alpha - e_n} D_i - alpha_i x^{alpha - e_i} D_n as a Laurent field."""
    alpha = tuple(alpha)
    w = {}
    if alpha[n - 1]:
        _acc(w, (vsub(alpha, eps(n, n)), i), alpha[n - 1])
    if alpha[i - 1]:
        _acc(w, (vsub(alpha, eps(i, n)), n), -alpha[i - 1])
    return wplus_to_laurent(_clean(w))


def splus_tags(n: int, max_degree: int) -> list:
    """(alpha, i) with |alpha| <= max_degree, i < n and a nonzero S+ element, in order."""
    out = []
    for d in range(max_degree + 1):
        alphas = [a for a in itertools.product(range(d + 1), repeat=n) if sum(a) == d]
        for a in sorted(alphas):
            for i in range(1, n):
                if a[n - 1] or a[i - 1]:
                    out.append((a, i))
    return out


def char0_vertical_pair(k: int, kp: int, n: int):
    """h = d_k - d_k', e = x^{e_k}(d_k - 2 d_k') as Laurent fields."""
    zero = (0,) * n
    h = _clean({(zero, k): Fraction(1), (zero, kp): Fraction(-1)})
    e = _clean({(eps(k, n), k): Fraction(1), (eps(k, n), kp): Fraction(-2)})
    return h, e


def char0_horizontal_pair(k: int, kp: int, m: int, n: int):
    """h = d_k - d_k', e = x^{e_k - e_m} d_m."""
    zero = (0,) * n
    h = _clean({(zero, k): Fraction(1), (zero, kp): Fraction(-1)})
    e = {(vsub(eps(k, n), eps(m, n)), m): Fraction(1)}
    return h, e


def reduce_mod_p(u: dict, p: int) -> dict:
    """Image of a char-0 S+ field in W(n;1): x^a D_i -> a! x^(a) D_i, zero if some a_j >= p."""
    out = {}
    for (a, i), c in laurent_to_wplus(u).items():
        if any(x < 0 for x in a):
            raise ValueError("not a polynomial vector field")
        if any(x >= p for x in a):
            continue
        c = Fraction(c) * multi_factorial(a)
        if c.denominator % p == 0:
            raise ZeroDivisionError(f"coefficient {c} not p-integral")
        _acc(out, (a, i), c.numerator * pow(c.denominator, -1, p))
    return _clean(out, p)


def lift_divided(w: dict) -> dict:
    """Char-0 lift of sum c x^(a) D_i: sum c/a! x^a D_i as a Laurent field."""
    return wplus_to_laurent({k: Fraction(c, multi_factorial(k[0])) for k, c in w.items()})


# --------------------------------------------------------------------------
# sl_n and the two-dimensional carrier


class MatrixLieAlgebra:
    """sl_n over F_p (or Q with p=0), basis E_ij (i != j) and E_ii - E_i+1,i+1.

    The p-map is the matrix p-th power.
    """

    def __init__(self, n: int, p: int = 0):
        if p:
            check_odd_prime(p)
        self.n = n
        self.p = p
        self.tags = [("E", i, j) for i in range(1, n + 1) for j in range(1, n + 1) if i != j]
        self.tags += [("H", i) for i in range(1, n)]
        self.dim = len(self.tags)
        self.index_of_tag = {t: k for k, t in enumerate(self.tags)}
        self.name = f"sl_{n}"
        self._br = {}
        self._pp = {}

    def generators(self):
        return range(self.dim)

    def matrix(self, idx: int) -> dict:
        tag = self.tags[idx]
        if tag[0] == "E":
            return {(tag[1], tag[2]): 1}
        i = tag[1]
        return {(i, i): 1, (i + 1, i + 1): -1}

    def _red(self, c):
        if self.p:
            if isinstance(c, Fraction):
                return c.numerator * pow(c.denominator, -1, self.p) % self.p
            return c % self.p
        return c

    def coords(self, mat: dict) -> dict:
        out = {}
        for (i, j), c in mat.items():
            if i != j and self._red(c):
                out[self.index_of_tag[("E", i, j)]] = self._red(c)
        acc = 0
        for i in range(1, self.n + 1):
            acc += mat.get((i, i), 0)
            if i < self.n:
                if self._red(acc):
                    out[self.index_of_tag[("H", i)]] = self._red(acc)
        if self._red(acc):
            raise NotInAlgebra("matrix has nonzero trace")
        return out

    def element(self, combo: dict) -> dict:
        out = {}
        for idx, c in combo.items():
            for k, x in self.matrix(idx).items():
                _acc(out, k, c * x)
        return _clean(out, self.p or None)

    def bracket(self, a: int, b: int) -> dict:
        key = (a, b)
        r = self._br.get(key)
        if r is None:
            x, y = self.matrix(a), self.matrix(b)
            r = self.coords(_mat_sub(_mat_mul(x, y), _mat_mul(y, x)))
            self._br[key] = r
        return r

    def bracket_elements(self, u: dict, v: dict) -> dict:
        out = {}
        for a, x in u.items():
            for b, y in v.items():
                for c, z in self.bracket(a, b).items():
                    _acc(out, c, x * y * z)
        return _clean(out, self.p or None)

    def p_power(self, a: int) -> dict:
        r = self._pp.get(a)
        if r is None:
            x = self.matrix(a)
            m = x
            for _ in range(self.p - 1):
                m = _mat_mul(m, x)
            r = self.coords(m)
            self._pp[a] = r
        return r

    def label(self, idx: int) -> str:
        return tag_label(self.tags[idx])

    def gen_id(self, idx: int) -> dict:
        return tag_gen_id(self.tags[idx])


def _mat_mul(x: dict, y: dict) -> dict:
    out = {}
    for (i, j), a in x.items():
        for (k, l), b in y.items():
            if j == k:
                _acc(out, (i, l), a * b)
    return _clean(out)


def _mat_sub(x: dict, y: dict) -> dict:
    out = dict(x)
    for k, v in y.items():
        _acc(out, k, -v)
    return _clean(out)


class CarrierAlgebra:
    """The two-dimensional Lie algebra span{h, e} with [h, e] = e (generators 0, 1)."""

    def __init__(self, p: int = 0):
        self.p = p
        self.dim = 2
        self.tags = [("h",), ("e",)]
        self.name = "b(2)"

    def generators(self):
        return range(2)

    def bracket(self, a: int, b: int) -> dict:
        if (a, b) == (0, 1):
            return {1: 1}
        if (a, b) == (1, 0):
            return {1: -1}
        return {}

    def bracket_elements(self, u: dict, v: dict) -> dict:
        out = {}
        for a, x in u.items():
            for b, y in v.items():
                for c, z in self.bracket(a, b).items():
                    _acc(out, c, x * y * z)
        return _clean(out, self.p or None)

    def p_power(self, a: int) -> dict:
        return {0: 1} if a == 0 else {}

    def label(self, idx: int) -> str:
        return "he"[idx]
