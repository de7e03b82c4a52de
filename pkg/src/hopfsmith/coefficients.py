"""Exact coefficient rings.

Five rings are provided: the integers and rationals (plain ``int`` and
``fractions.Fraction``), prime fields ``F_p``, rational power series in ``t``
truncated above degree ``N``, and the p-truncated polynomial rings
``F_p[t]/(t^p - q t)``.

Every element is an immutable value.  Mixed-ring arithmetic raises
:class:`RingMismatch`; plain ``int`` (and ``Fraction`` for the series ring)
operands are coerced into the ring of the other operand.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

from .errors import DivisionByNonUnit, NotARoot, RingMismatch, UnsupportedPrime


@lru_cache(maxsize=None)
def is_prime(p: int) -> bool:
    if p < 2:
        return False
    d = 2
    while d * d <= p:
        if p % d == 0:
            return False
        d += 1
    return True


def check_odd_prime(p: int) -> int:
    if p == 2:
        raise UnsupportedPrime("p=2 unsupported")
    if not isinstance(p, int) or not is_prime(p):
        raise UnsupportedPrime(f"p={p} is not an odd prime")
    return p


# --------------------------------------------------------------------------
# F_p


class Fp:
    __slots__ = ("v", "p")

    def __init__(self, v: int, p: int):
        self.v = v % p
        self.p = p

    def _other(self, o):
        if isinstance(o, Fp):
            if o.p != self.p:
                raise RingMismatch(f"F_{self.p} vs F_{o.p}")
            return o.v
        if isinstance(o, int):
            return o
        if isinstance(o, Fraction):
            return o.numerator * pow(o.denominator, -1, self.p)
        return NotImplemented

    def __add__(self, o):
        v = self._other(o)
        if v is NotImplemented:
            return v
        return Fp(self.v + v, self.p)

    __radd__ = __add__

    def __sub__(self, o):
        v = self._other(o)
        if v is NotImplemented:
            return v
        return Fp(self.v - v, self.p)

    def __rsub__(self, o):
        v = self._other(o)
        if v is NotImplemented:
            return v
        return Fp(v - self.v, self.p)

    def __mul__(self, o):
        v = self._other(o)
        if v is NotImplemented:
            return v
        return Fp(self.v * v, self.p)

    __rmul__ = __mul__

    def __neg__(self):
        return Fp(-self.v, self.p)

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        return Fp(pow(self.v, k, self.p), self.p)

    def inverse(self) -> "Fp":
        if self.v == 0:
            raise DivisionByNonUnit(f"0 has no inverse in F_{self.p}")
        return Fp(pow(self.v, -1, self.p), self.p)

    def __truediv__(self, o):
        v = self._other(o)
        if v is NotImplemented:
            return v
        return self * Fp(v, self.p).inverse()

    def __bool__(self):
        return self.v != 0

    def __eq__(self, o):
        if isinstance(o, Fp):
            return self.p == o.p and self.v == o.v
        if isinstance(o, int):
            return (self.v - o) % self.p == 0
        return NotImplemented

    def __hash__(self):
        return hash((self.v, self.p))

    def __repr__(self):
        return f"Fp({self.v}, {self.p})"

    def __str__(self):
        return str(self.v)


# --------------------------------------------------------------------------
# Truncated rational power series


class TruncatedSeries:
    """sum_{d<=N} c_d t^d with rational c_d; products drop degrees above N."""

    __slots__ = ("c", "N")

    def __init__(self, coeffs, N: int):
        c = [Fraction(x) for x in coeffs][: N + 1]
        c += [Fraction(0)] * (N + 1 - len(c))
        self.c = tuple(c)
        self.N = N

    @classmethod
    def const(cls, x, N: int) -> "TruncatedSeries":
        return cls([x], N)

    @classmethod
    def t_power(cls, k: int, N: int) -> "TruncatedSeries":
        if k > N:
            return cls([], N)
        return cls([0] * k + [1], N)

    def _other(self, o):
        if isinstance(o, TruncatedSeries):
            if o.N != self.N:
                raise RingMismatch(f"series N={self.N} vs N={o.N}")
            return o
        if isinstance(o, (int, Fraction)):
            return TruncatedSeries.const(o, self.N)
        return NotImplemented

    def __add__(self, o):
        o = self._other(o)
        if o is NotImplemented:
            return o
        return TruncatedSeries([a + b for a, b in zip(self.c, o.c)], self.N)

    __radd__ = __add__

    def __sub__(self, o):
        o = self._other(o)
        if o is NotImplemented:
            return o
        return TruncatedSeries([a - b for a, b in zip(self.c, o.c)], self.N)

    def __rsub__(self, o):
        return (-self) + o

    def __neg__(self):
        return TruncatedSeries([-a for a in self.c], self.N)

    def __mul__(self, o):
        if isinstance(o, (int, Fraction)):
            if o == 0:
                return TruncatedSeries([], self.N)
            return TruncatedSeries([a * o for a in self.c], self.N)
        o = self._other(o)
        if o is NotImplemented:
            return o
        N = self.N
        out = [Fraction(0)] * (N + 1)
        for i, a in enumerate(self.c):
            if a:
                for j in range(N + 1 - i):
                    b = o.c[j]
                    if b:
                        out[i + j] += a * b
        return TruncatedSeries(out, N)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        out = TruncatedSeries.const(1, self.N)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def inverse(self) -> "TruncatedSeries":
        a0 = self.c[0]
        if a0 == 0:
            raise DivisionByNonUnit("series with zero constant term is not a unit")
        inv = [Fraction(0)] * (self.N + 1)
        inv[0] = 1 / a0
        for d in range(1, self.N + 1):
            s = sum((self.c[i] * inv[d - i] for i in range(1, d + 1)), Fraction(0))
            inv[d] = -s / a0
        return TruncatedSeries(inv, self.N)

    def __truediv__(self, o):
        if isinstance(o, (int, Fraction)):
            return self * (Fraction(1) / o)
        o = self._other(o)
        return self * o.inverse()

    def low_degree(self) -> int | None:
        for i, a in enumerate(self.c):
            if a:
                return i
        return None

    def __bool__(self):
        return any(self.c)

    def __eq__(self, o):
        if isinstance(o, (int, Fraction)):
            o = TruncatedSeries.const(o, self.N)
        if isinstance(o, TruncatedSeries):
            return self.N == o.N and self.c == o.c
        return NotImplemented

    def __hash__(self):
        return hash((self.c, self.N))

    def __repr__(self):
        return f"TruncatedSeries({[str(x) for x in self.c]}, N={self.N})"

    def __str__(self):
        return format_poly([str(x) for x in self.c])


def series_exp(s: TruncatedSeries) -> TruncatedSeries:
    """exp(s) for s with zero constant term."""
    if s.c[0] != 0:
        raise ValueError("exp needs a series without constant term")
    out = TruncatedSeries.const(1, s.N)
    term = TruncatedSeries.const(1, s.N)
    for m in range(1, s.N + 1):
        term = term * s * Fraction(1, m)
        out = out + term
    return out


def series_log1p(s: TruncatedSeries) -> TruncatedSeries:
    """log(1 + s) for s with zero constant term."""
    if s.c[0] != 0:
        raise ValueError("log1p needs a series without constant term")
    out = TruncatedSeries([], s.N)
    power = TruncatedSeries.const(1, s.N)
    for m in range(1, s.N + 1):
        power = power * s
        out = out + power * Fraction((-1) ** (m + 1), m)
    return out


# --------------------------------------------------------------------------
# F_p[t]/(t^p - q t)


class TruncatedPolyP:
    """Element of F_p[t]/(t^p - q t), stored as p residues (degrees 0..p-1)."""

    __slots__ = ("c", "p", "q")

    def __init__(self, coeffs, p: int, q: int):
        q %= p
        c = [0] * p
        for d, x in enumerate(coeffs):
            x = int(x.v if isinstance(x, Fp) else x)
            while d >= p:
                # t^d = q t^(d-p+1)
                x *= q
                d -= p - 1
            c[d] = (c[d] + x) % p
        self.c = tuple(c)
        self.p = p
        self.q = q

    @classmethod
    def const(cls, x, p: int, q: int) -> "TruncatedPolyP":
        return cls([x], p, q)

    @classmethod
    def t_power(cls, k: int, p: int, q: int) -> "TruncatedPolyP":
        return cls([0] * k + [1], p, q)

    def _other(self, o):
        if isinstance(o, TruncatedPolyP):
            if o.p != self.p or o.q != self.q:
                raise RingMismatch(
                    f"K[t]/(t^{self.p}-{self.q}t) vs K[t]/(t^{o.p}-{o.q}t)"
                )
            return o
        if isinstance(o, int):
            return TruncatedPolyP.const(o, self.p, self.q)
        if isinstance(o, Fp):
            if o.p != self.p:
                raise RingMismatch(f"F_{o.p} scalar in characteristic {self.p}")
            return TruncatedPolyP.const(o.v, self.p, self.q)
        return NotImplemented

    def _new(self, c):
        out = object.__new__(TruncatedPolyP)
        out.c = c
        out.p = self.p
        out.q = self.q
        return out

    def __add__(self, o):
        o = self._other(o)
        if o is NotImplemented:
            return o
        p = self.p
        return self._new(tuple((a + b) % p for a, b in zip(self.c, o.c)))

    __radd__ = __add__

    def __sub__(self, o):
        o = self._other(o)
        if o is NotImplemented:
            return o
        p = self.p
        return self._new(tuple((a - b) % p for a, b in zip(self.c, o.c)))

    def __rsub__(self, o):
        return (-self) + o

    def __neg__(self):
        p = self.p
        return self._new(tuple((-a) % p for a in self.c))

    def __mul__(self, o):
        p = self.p
        if isinstance(o, int):
            o %= p
            return self._new(tuple(a * o % p for a in self.c))
        o = self._other(o)
        if o is NotImplemented:
            return o
        raw = [0] * (2 * p - 1)
        for i, a in enumerate(self.c):
            if a:
                for j, b in enumerate(o.c):
                    if b:
                        raw[i + j] += a * b
        for d in range(2 * p - 2, p - 1, -1):
            if raw[d]:
                raw[d - p + 1] += self.q * raw[d]
                raw[d] = 0
        return self._new(tuple(x % p for x in raw[:p]))

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        out = TruncatedPolyP.const(1, self.p, self.q)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def inverse(self) -> "TruncatedPolyP":
        """Solve a*x = 1 over F_p; raises DivisionByNonUnit if a is a zero divisor."""
        p = self.p
        cols = []
        for k in range(p):
            cols.append((self * TruncatedPolyP.t_power(k, p, self.q)).c)
        # augmented rows of the p x p multiplication matrix
        rows = [[cols[k][d] for k in range(p)] + [1 if d == 0 else 0] for d in range(p)]
        for col in range(p):
            piv = next((r for r in range(col, p) if rows[r][col] % p), None)
            if piv is None:
                raise DivisionByNonUnit(f"{self} is not a unit")
            rows[col], rows[piv] = rows[piv], rows[col]
            inv = pow(rows[col][col], -1, p)
            rows[col] = [x * inv % p for x in rows[col]]
            for r in range(p):
                if r != col and rows[r][col]:
                    f = rows[r][col]
                    rows[r] = [(x - f * y) % p for x, y in zip(rows[r], rows[col])]
        return TruncatedPolyP([rows[d][p] for d in range(p)], p, self.q)

    def __truediv__(self, o):
        o = self._other(o)
        return self * o.inverse()

    def __bool__(self):
        return any(self.c)

    def __eq__(self, o):
        if isinstance(o, int):
            o = TruncatedPolyP.const(o, self.p, self.q)
        if isinstance(o, TruncatedPolyP):
            return (self.p, self.q, self.c) == (o.p, o.q, o.c)
        return NotImplemented

    def __hash__(self):
        return hash((self.c, self.p, self.q))

    def __repr__(self):
        return f"TruncatedPolyP({list(self.c)}, p={self.p}, q={self.q})"

    def __str__(self):
        return format_poly([str(x) for x in self.c])


def specialize_t(x: TruncatedPolyP, t0) -> Fp:
    """Evaluate x at t = t0; t0 must be a root of t^p - q t."""
    p, q = x.p, x.q
    t0v = t0.v if isinstance(t0, Fp) else int(t0) % p
    if (pow(t0v, p, p) - q * t0v) % p:
        raise NotARoot(f"t0={t0v} does not satisfy t^{p} = {q} t in F_{p}")
    acc = 0
    for a in reversed(x.c):
        acc = (acc * t0v + a) % p
    return Fp(acc, p)


def format_poly(coeffs) -> str:
    """Render coefficient strings as 'a+b*t+c*t^2' with zero terms dropped."""
    parts = []
    for d, s in enumerate(coeffs):
        if s in ("0", "0/1"):
            continue
        if d == 0:
            parts.append(s)
        elif d == 1:
            parts.append(f"{s}*t")
        else:
            parts.append(f"{s}*t^{d}")
    return "+".join(parts).replace("+-", "-") if parts else "0"


# --------------------------------------------------------------------------
# ring descriptors


class Ring:
    """Common interface: zero, one, coerce(base scalar), t_power(k)."""

    zero = None
    one = None
    characteristic = 0

    def coerce(self, x):
        raise NotImplementedError

    def t_power(self, k: int):
        raise TypeError(f"{self} has no variable t")

    def has_t(self) -> bool:
        return False


class Integers(Ring):
    zero = 0
    one = 1

    def coerce(self, x):
        return int(x)

    def __repr__(self):
        return "ZZ"


class Rationals(Ring):
    zero = Fraction(0)
    one = Fraction(1)

    def coerce(self, x):
        return Fraction(x)

    def __repr__(self):
        return "QQ"

    def __eq__(self, o):
        return isinstance(o, Rationals)

    def __hash__(self):
        return hash("QQ")


class PrimeField(Ring):
    def __init__(self, p: int):
        self.p = check_odd_prime(p)
        self.characteristic = p
        self.zero = Fp(0, p)
        self.one = Fp(1, p)

    def coerce(self, x):
        if isinstance(x, Fp):
            return x
        if isinstance(x, Fraction):
            return Fp(x.numerator, self.p) / x.denominator
        return Fp(int(x), self.p)

    def __repr__(self):
        return f"GF({self.p})"

    def __eq__(self, o):
        return isinstance(o, PrimeField) and o.p == self.p

    def __hash__(self):
        return hash(("GF", self.p))


class SeriesRing(Ring):
    def __init__(self, N: int = 6):
        if N < 0:
            raise ValueError("truncation order must be >= 0")
        self.N = N
        self.zero = TruncatedSeries([], N)
        self.one = TruncatedSeries.const(1, N)

    def coerce(self, x):
        if isinstance(x, TruncatedSeries):
            return x
        return TruncatedSeries.const(x, self.N)

    def t_power(self, k: int):
        return TruncatedSeries.t_power(k, self.N)

    def has_t(self):
        return True

    def __repr__(self):
        return f"QQ[[t]]/t^{self.N + 1}"

    def __eq__(self, o):
        return isinstance(o, SeriesRing) and o.N == self.N

    def __hash__(self):
        return hash(("series", self.N))


class PolyPRing(Ring):
    def __init__(self, p: int, q: int = 0):
        self.p = check_odd_prime(p)
        self.q = q % p
        self.characteristic = p
        self.zero = TruncatedPolyP([], p, self.q)
        self.one = TruncatedPolyP.const(1, p, self.q)

    def coerce(self, x):
        if isinstance(x, TruncatedPolyP):
            return x
        if isinstance(x, Fraction):
            x = x.numerator * pow(x.denominator, -1, self.p)
        return TruncatedPolyP.const(x, self.p, self.q)

    def t_power(self, k: int):
        return TruncatedPolyP.t_power(k, self.p, self.q)

    def has_t(self):
        return True

    def __repr__(self):
        return f"GF({self.p})[t]/(t^{self.p}-{self.q}t)"

    def __eq__(self, o):
        return isinstance(o, PolyPRing) and (o.p, o.q) == (self.p, self.q)

    def __hash__(self):
        return hash(("polyp", self.p, self.q))


ZZ = Integers()
QQ = Rationals()
