"""Shifted factorials, Stirling numbers and generalized binomials.

Shifted factorials are kept as integer polynomials in an abstract symbol ``x``
so that they can later be evaluated at a Lie algebra element inside an
enveloping algebra (see :meth:`ShiftedFactorialPoly.evaluate`).
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .errors import NonIntegral

# integer polynomials are tuples of coefficients, lowest degree first


def poly_mul(a, b):
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return tuple(out)


def poly_add(a, b):
    n = max(len(a), len(b))
    a = tuple(a) + (0,) * (n - len(a))
    b = tuple(b) + (0,) * (n - len(b))
    return tuple(x + y for x, y in zip(a, b))


def poly_scale(a, c):
    return tuple(x * c for x in a)


def poly_trim(a):
    a = list(a)
    while len(a) > 1 and a[-1] == 0:
        a.pop()
    return tuple(a)


@dataclass(frozen=True)
class ShiftedFactorialPoly:
    """x_a^<n> (rising) or x_a^[n] (falling) expanded in powers of x."""

    kind: str
    shift: int
    length: int
    coeffs: tuple

    def evaluate(self, x, one):
        """Horner evaluation at x; ``one`` is the unit of x's algebra."""
        acc = one * 0
        for c in reversed(self.coeffs):
            acc = acc * x + one * c
        return acc

    def __call__(self, x):
        return sum(c * x**k for k, c in enumerate(self.coeffs))


@lru_cache(maxsize=None)
def _shifted(kind: str, a: int, n: int) -> tuple:
    step = 1 if kind == "rising" else -1
    out = (1,)
    for i in range(n):
        out = poly_mul(out, (a + step * i, 1))
    return out


def rising_poly(a: int, n: int) -> ShiftedFactorialPoly:
    """(x+a)(x+a+1)...(x+a+n-1)."""
    if n < 0:
        raise ValueError("length must be nonnegative")
    return ShiftedFactorialPoly("rising", a, n, _shifted("rising", a, n))


def falling_poly(a: int, n: int) -> ShiftedFactorialPoly:
    """(x+a)(x+a-1)...(x+a-n+1)."""
    if n < 0:
        raise ValueError("length must be nonnegative")
    return ShiftedFactorialPoly("falling", a, n, _shifted("falling", a, n))


def gen_binom(a: int, r: int) -> int:
    """a(a-1)...(a-r+1)/r!, valid for any integer a."""
    if r < 0:
        raise ValueError("r must be nonnegative")
    num = 1
    for i in range(r):
        num *= a - i
    return num // math.factorial(r)


@lru_cache(maxsize=None)
def stirling_c(n: int, k: int) -> int:
    """Unsigned Stirling number of the first kind (permutations of n with k cycles)."""
    if n == 0 and k == 0:
        return 1
    if n <= 0 or k <= 0 or k > n:
        return 0
    return (n - 1) * stirling_c(n - 1, k) + stirling_c(n - 1, k - 1)


def stirling_s(n: int, k: int) -> int:
    """Signed Stirling number of the first kind: x^[n] = sum s(n,k) x^k."""
    if k > n:
        return 0
    return (-1) ** (n - k) * stirling_c(n, k)


def count_cycles(perm) -> int:
    seen = [False] * len(perm)
    cycles = 0
    for i in range(len(perm)):
        if not seen[i]:
            cycles += 1
            j = i
            while not seen[j]:
                seen[j] = True
                j = perm[j]
    return cycles


def cycle_type(perm) -> tuple:
    """(c_1, ..., c_n): number of cycles of each length."""
    n = len(perm)
    counts = [0] * n
    seen = [False] * n
    for i in range(n):
        if not seen[i]:
            length = 0
            j = i
            while not seen[j]:
                seen[j] = True
                j = perm[j]
                length += 1
            counts[length - 1] += 1
    return tuple(counts)


def stirling_by_enumeration(n: int) -> list:
    """[c(n,0), ..., c(n,n)] by brute force over all permutations."""
    out = [0] * (n + 1)
    for perm in itertools.permutations(range(n)):
        out[count_cycles(perm)] += 1
    return out


def class_size(ctype) -> int:
    """n! / prod i^{c_i} c_i!, the number of permutations of a given cycle type."""
    n = sum((i + 1) * c for i, c in enumerate(ctype))
    denom = 1
    for i, c in enumerate(ctype):
        denom *= (i + 1) ** c * math.factorial(c)
    return math.factorial(n) // denom


def stirling_by_cycle_types(n: int) -> list:
    """[c(n,k)] by summing class sizes over all cycle types of n."""
    out = [0] * (n + 1)

    def partitions(rem, largest):
        if rem == 0:
            yield []
            return
        for part in range(min(rem, largest), 0, -1):
            for rest in partitions(rem - part, part):
                yield [part] + rest

    for parts in partitions(n, n):
        ctype = [0] * n
        for part in parts:
            ctype[part - 1] += 1
        out[len(parts)] += class_size(ctype)
    return out


def grunspan_integral(a: int, k: int, l: int) -> int:
    """a^l prod_{j<l}(k + j a) / l!, which is always an integer."""
    if l < 0:
        raise ValueError("l must be nonnegative")
    num = a**l
    for j in range(l):
        num *= k + j * a
    val = Fraction(num, math.factorial(l))
    if val.denominator != 1:
        raise NonIntegral(f"a={a}, k={k}, l={l} gives {val}")
    return val.numerator


# --------------------------------------------------------------------------
# identity suite


def _fpoly_scale(a, c):
    return tuple(Fraction(x) * c for x in a)


def _fpoly_add(a, b):
    return poly_add(a, b)


def rising_split(a, s, t) -> bool:
    lhs = rising_poly(a, s + t).coeffs
    rhs = poly_mul(rising_poly(a, s).coeffs, rising_poly(a + s, t).coeffs)
    return lhs == rhs


def falling_split(a, s, t) -> bool:
    lhs = falling_poly(a, s + t).coeffs
    rhs = poly_mul(falling_poly(a, s).coeffs, falling_poly(a - s, t).coeffs)
    return lhs == rhs


def falling_as_rising(a, s) -> bool:
    return falling_poly(a, s).coeffs == rising_poly(a - s + 1, s).coeffs


def mixed_rising_lhs(a, b, r):
    acc = (Fraction(0),)
    for s in range(r + 1):
        t = r - s
        c = Fraction((-1) ** t, math.factorial(s) * math.factorial(t))
        term = poly_mul(falling_poly(a, s).coeffs, rising_poly(b, t).coeffs)
        acc = poly_add(acc, _fpoly_scale(term, c))
    return poly_trim(acc)


def mixed_falling_lhs(a, b, r):
    acc = (Fraction(0),)
    for s in range(r + 1):
        t = r - s
        c = Fraction((-1) ** t, math.factorial(s) * math.factorial(t))
        term = poly_mul(falling_poly(a, s).coeffs, falling_poly(b - s, t).coeffs)
        acc = poly_add(acc, _fpoly_scale(term, c))
    return poly_trim(acc)


def mixed_rising_sum(a, b, r) -> bool:
    return mixed_rising_lhs(a, b, r) == (gen_binom(a - b, r),)


def mixed_falling_rhs(a, b, r) -> int:
    """(a-b)(a-b+1)...(a-b+r-1)/r!, i.e. binom(a-b+r-1, r)."""
    return gen_binom(a - b + r - 1, r)


def mixed_falling_sum(a, b, r) -> bool:
    return mixed_falling_lhs(a, b, r) == (mixed_falling_rhs(a, b, r),)


def check_identity_suite(seed: int = 0, bound: int = 5, max_len: int = 8,
                         samples: int | None = None) -> dict:
    """Check the five shifted-factorial identities.

    With ``samples=None`` the check is exhaustive over |a|,|b| <= bound and
    s,t,r <= max_len; otherwise ``samples`` random parameter tuples drawn
    with ``seed`` are checked per identity.
    """
    rng = random.Random(seed)
    shifts = range(-bound, bound + 1)
    lens = range(0, max_len + 1)

    def params(arity_shift, arity_len):
        if samples is None:
            return itertools.product(*([shifts] * arity_shift + [lens] * arity_len))
        return [
            tuple(rng.choice(shifts) for _ in range(arity_shift))
            + tuple(rng.choice(lens) for _ in range(arity_len))
            for _ in range(samples)
        ]

    report = {}
    checks = {
        "rising_split": (rising_split, 1, 2),
        "falling_split": (falling_split, 1, 2),
        "falling_as_rising": (falling_as_rising, 1, 1),
        "mixed_rising_sum": (mixed_rising_sum, 2, 1),
        "mixed_falling_sum": (mixed_falling_sum, 2, 1),
    }
    for name, (fn, ns, nl) in checks.items():
        failures = [args for args in params(ns, nl) if not fn(*args)]
        report[name] = {"pass": not failures, "witness": failures[:1]}
    return report
