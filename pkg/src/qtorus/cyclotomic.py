"""Exact arithmetic in Q(zeta), zeta = exp(i*pi/(2r)), for a fixed level r >= 3.

The deformation parameter t is the primitive 4r-th root of unity zeta, and
every quantity of the theory lives in the cyclotomic field Q(zeta) or in a
rank-one extension of it by the irrational normalization X, where

    X**2 = [1]**2 + [2]**2 + ... + [r-1]**2

is itself a (nonzero, totally positive) field element.  Field elements are
stored as the canonical remainder modulo the 4r-th cyclotomic polynomial,
as an integer coefficient vector over one positive denominator, so equality
of canonical forms is plain tuple comparison.  X is carried as an integer
grading on top of a field element (see Scalar); even powers fold into the
field, odd powers stay.

Float evaluation at zeta is available everywhere as a debugging shadow; the
integer arithmetic is authoritative.
"""

from __future__ import annotations

import cmath
import math
from fractions import Fraction
from functools import lru_cache, reduce


class XParityError(ArithmeticError):
    """Sum of nonzero quantities of different X-parity (a bookkeeping bug)."""


# ----------------------------------------------------------------------
# dense integer polynomials, constant term first

def _poly_mul(a, b):
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                if bj:
                    out[i + j] += ai * bj
    return out


def _poly_divexact(a, b):
    """Quotient a / b of integer polynomials, which must divide exactly."""
    a = list(a)
    db, lb = len(b) - 1, b[-1]
    out = [0] * (len(a) - db)
    for i in range(len(out) - 1, -1, -1):
        c, rem = divmod(a[i + db], lb)
        if rem:
            raise ArithmeticError("non-exact polynomial division")
        out[i] = c
        if c:
            for j, bj in enumerate(b):
                a[i + j] -= c * bj
    if any(a[: db]):
        raise ArithmeticError("non-exact polynomial division")
    return out


@lru_cache(maxsize=None)
def cyclotomic_polynomial(n: int) -> tuple[int, ...]:
    """Coefficients of the n-th cyclotomic polynomial, constant term first.

    Computed as (x**n - 1) divided by the product of all lower cyclotomic
    polynomials at divisors of n; monic and integral by construction.
    """
    if n < 1:
        raise ValueError("n must be a positive integer")
    if n == 1:
        return (-1, 1)
    num = [-1] + [0] * (n - 1) + [1]
    den = [1]
    for d in range(1, n):
        if n % d == 0:
            den = _poly_mul(den, cyclotomic_polynomial(d))
    return tuple(_poly_divexact(num, den))


def _euler_phi(n):
    out, m, p = 1, n, 2
    while p * p <= m:
        if m % p == 0:
            out *= p - 1
            m //= p
            while m % p == 0:
                out *= p
                m //= p
        p += 1
    if m > 1:
        out *= m - 1
    return out


def _gcd_all(values):
    return reduce(math.gcd, values, 0)


class CycloContext:
    """Arithmetic context for one level r: tables and caches for Q(zeta_{4r}).

    Contexts are immutable apart from internal caches; every operation on
    elements is a pure function, so a context can be shared freely.
    """

    def __init__(self, r: int):
        if r < 3:
            raise ValueError("level r must be at least 3")
        self.r = r
        self.order = 4 * r
        self.modulus = cyclotomic_polynomial(self.order)
        self.degree = len(self.modulus) - 1
        assert self.degree == _euler_phi(self.order)

        # x**m mod Phi for m = degree .. order-1 (x**order == 1 mod Phi,
        # so products never need exponents beyond order-1 after folding)
        rows = []
        cur = [-c for c in self.modulus[:-1]]
        rows.append(tuple(cur))
        for _ in range(self.degree + 1, self.order):
            lead = cur[-1]
            cur = [0] + cur[:-1]
            if lead:
                first = rows[0]
                for i in range(self.degree):
                    cur[i] += lead * first[i]
            rows.append(tuple(cur))
        self._red_rows = rows

        zero_vec = (0,) * self.degree
        self.zero = CycloElement(self, zero_vec, 1)
        self.one = CycloElement(self, (1,) + zero_vec[1:], 1)
        self._t_powers = [self._from_intvec(self._monomial_vec(e), 1)
                          for e in range(self.order)]
        self._qint_cache: dict[int, CycloElement] = {}
        self._inv_cache: dict[tuple, CycloElement] = {}
        self._x_squared: CycloElement | None = None
        self._zeta = cmath.exp(1j * math.pi / (2 * r))
        self._x_float = math.sqrt(r / 2.0) / math.sin(math.pi / r)

    def __repr__(self):
        return f"CycloContext(r={self.r})"

    # -- construction -------------------------------------------------

    def _monomial_vec(self, e):
        e %= self.order
        if e < self.degree:
            v = [0] * self.degree
            v[e] = 1
            return v
        return list(self._red_rows[e - self.degree])

    def _reduce_vec(self, vec):
        """Reduce an integer vector of length <= order in place, mod Phi."""
        deg = self.degree
        rows = self._red_rows
        for m in range(len(vec) - 1, deg - 1, -1):
            c = vec[m]
            if c:
                row = rows[m - deg]
                for i in range(deg):
                    ri = row[i]
                    if ri:
                        vec[i] += c * ri
        del vec[deg:]
        if len(vec) < deg:
            vec.extend([0] * (deg - len(vec)))
        return vec

    def _from_intvec(self, vec, den):
        vec = self._reduce_vec(list(vec))
        if den < 0:
            den = -den
            vec = [-c for c in vec]
        g = math.gcd(_gcd_all(vec), den)
        if g > 1:
            vec = [c // g for c in vec]
            den //= g
        return CycloElement(self, tuple(vec), den)

    def from_integer(self, n: int) -> CycloElement:
        v = [0] * self.degree
        v[0] = n
        return self._from_intvec(v, 1)

    def from_rational(self, q) -> CycloElement:
        q = Fraction(q)
        v = [0] * self.degree
        v[0] = q.numerator
        return self._from_intvec(v, q.denominator)

    def from_tpowers(self, coeffs: dict) -> CycloElement:
        """Element sum(c_e * t**e) from an exponent -> coefficient map."""
        vec = [Fraction(0)] * self.order
        for e, c in coeffs.items():
            vec[e % self.order] += Fraction(c)
        den = math.lcm(*(f.denominator for f in vec)) if vec else 1
        ints = [int(f * den) for f in vec]
        return self._from_intvec(ints, den)

    # -- the generators of the theory ----------------------------------

    def t_power(self, e: int) -> CycloElement:
        """t**e, reduced to canonical form (t has order 4r)."""
        return self._t_powers[e % self.order]

    def qint(self, n: int) -> CycloElement:
        """Quantum integer [n] = (t**2n - t**-2n) / (t**2 - t**-2).

        Implemented division-free as the balanced power sum
        [n] = t**(2(n-1)) + t**(2(n-3)) + ... + t**(-2(n-1)) for n > 0,
        with [0] = 0 and [-n] = -[n]; has period 2r in n.
        """
        key = n % (2 * self.r)
        cached = self._qint_cache.get(key)
        if cached is None:
            if key == 0:
                cached = self.zero
            else:
                vec = [0] * self.order
                for j in range(key):
                    vec[(2 * (key - 1 - 2 * j)) % self.order] += 1
                cached = self._from_intvec(vec, 1)
            self._qint_cache[key] = cached
        return cached

    def qint_inverse(self, n: int) -> CycloElement:
        """1/[n]; raises ZeroDivisionError when [n] = 0 (n divisible by r)."""
        return self.qint(n).inverse()

    def x_squared(self) -> CycloElement:
        """X**2 = sum of [j]**2 over the colors j = 1..r-1; nonzero."""
        if self._x_squared is None:
            acc = self.zero
            for j in range(1, self.r):
                q = self.qint(j)
                acc = acc + q * q
            self._x_squared = acc
        return self._x_squared

    def scalar(self, value, xpow: int = 0) -> "Scalar":
        if isinstance(value, int):
            value = self.from_integer(value)
        return Scalar(value, xpow)

    def x_scalar(self) -> "Scalar":
        return Scalar(self.one, 1)


@lru_cache(maxsize=None)
def get_context(r: int) -> CycloContext:
    return CycloContext(r)


class CycloElement:
    """Element of Q(zeta_{4r}): canonical remainder mod Phi_{4r}.

    Stored as an integer numerator vector of length phi(4r) over a single
    positive denominator, with gcd(numerators, denominator) = 1.
    """

    __slots__ = ("ctx", "_num", "_den")

    def __init__(self, ctx, num, den):
        self.ctx = ctx
        self._num = num
        self._den = den

    # -- views ----------------------------------------------------------

    @property
    def coeffs(self) -> tuple[Fraction, ...]:
        d = self._den
        return tuple(Fraction(n, d) for n in self._num)

    @property
    def is_zero(self) -> bool:
        return not any(self._num)

    def __bool__(self):
        return any(self._num)

    # -- ring operations -------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, CycloElement):
            if other.ctx.order != self.ctx.order:
                raise ValueError("mixed cyclotomic orders")
            return other
        if isinstance(other, int):
            return self.ctx.from_integer(other)
        if isinstance(other, Fraction):
            return self.ctx.from_rational(other)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        d1, d2 = self._den, o._den
        if d1 == d2 == 1:
            vec = [a + b for a, b in zip(self._num, o._num)]
            if d1 == 1:
                return CycloElement(self.ctx, tuple(vec), 1)
        g = math.gcd(d1, d2)
        m1, m2 = d2 // g, d1 // g
        vec = [a * m1 + b * m2 for a, b in zip(self._num, o._num)]
        den = d1 * m1
        gg = math.gcd(_gcd_all(vec), den)
        if gg > 1:
            vec = [c // gg for c in vec]
            den //= gg
        return CycloElement(self.ctx, tuple(vec), den)

    __radd__ = __add__

    def __neg__(self):
        return CycloElement(self.ctx, tuple(-c for c in self._num), self._den)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        a, b = self._num, o._num
        out = [0] * (len(a) + len(b) - 1)
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    if bj:
                        out[i + j] += ai * bj
        return self.ctx._from_intvec(out, self._den * o._den)

    __rmul__ = __mul__

    def inverse(self) -> "CycloElement":
        """Field inverse, by the extended Euclidean algorithm mod Phi."""
        if self.is_zero:
            raise ZeroDivisionError("inverse of zero cyclotomic element")
        ctx = self.ctx
        cached = ctx._inv_cache.get(self._num) if self._den == 1 else None
        if cached is not None:
            return cached
        # invariant: r_i == t_i * self  (mod Phi); stop at constant r
        r0 = [Fraction(c) for c in ctx.modulus]
        r1 = _trim([Fraction(n, self._den) for n in self._num])
        t0, t1 = [Fraction(0)], [Fraction(1)]
        while len(r1) > 1:
            q, rem = _poly_divmod_frac(r0, r1)
            t0, t1 = t1, _trim(_poly_sub_frac(t0, _poly_mul_frac(q, t1)))
            r0, r1 = r1, rem
            if not r1:
                raise ZeroDivisionError("element not invertible mod Phi")
        inv_lead = 1 / r1[0]
        coeffs = [c * inv_lead for c in t1]
        den = math.lcm(*(f.denominator for f in coeffs)) if coeffs else 1
        vec = [int(f * den) for f in coeffs]
        result = ctx._from_intvec(vec, den)
        if self._den == 1:
            ctx._inv_cache[self._num] = result
        return result

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        acc, base = self.ctx.one, self
        while e:
            if e & 1:
                acc = acc * base
            base = base * base
            e >>= 1
        return acc

    # -- comparison and encoding -----------------------------------------

    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self._num == o._num and self._den == o._den

    def __hash__(self):
        return hash((self.ctx.order, self._num, self._den))

    def to_complex(self) -> complex:
        z = self.ctx._zeta
        acc = 0j
        for c in reversed(self._num):
            acc = acc * z + c
        return acc / self._den

    def to_json(self) -> dict:
        approx = self.to_complex()
        return {
            "order": self.ctx.order,
            "coeffs": [[f.numerator, f.denominator] for f in self.coeffs],
            "approx": [approx.real, approx.imag],
        }

    def __repr__(self):
        return f"CycloElement(r={self.ctx.r}, {self._pretty()})"

    def _pretty(self):
        if self.is_zero:
            return "0"
        parts = []
        for e, c in enumerate(self.coeffs):
            if not c:
                continue
            mag = "" if (abs(c) == 1 and e) else str(abs(c))
            var = "" if e == 0 else ("t" if e == 1 else f"t^{e}")
            sep = "*" if (mag and var) else ""
            parts.append(("- " if c < 0 else "+ ") + mag + sep + var)
        s = " ".join(parts)
        return s[2:] if s.startswith("+ ") else ("-" + s[2:])


def _trim(p):
    while p and not p[-1]:
        p.pop()
    return p


def _poly_mul_frac(a, b):
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] += ai * bj
    return out


def _poly_sub_frac(a, b):
    n = max(len(a), len(b))
    a = a + [Fraction(0)] * (n - len(a))
    b = b + [Fraction(0)] * (n - len(b))
    return [x - y for x, y in zip(a, b)]


def _poly_divmod_frac(a, b):
    rem = list(a)
    db = len(b) - 1
    if len(rem) < len(b):
        return [Fraction(0)], _trim(rem)
    q = [Fraction(0)] * (len(rem) - db)
    lead = b[-1]
    for i in range(len(q) - 1, -1, -1):
        f = rem[i + db] / lead
        q[i] = f
        if f:
            for j, bj in enumerate(b):
                rem[i + j] -= f * bj
    return q, _trim(rem)


class Scalar:
    """A cyclotomic value times an integer power of the grading symbol X.

    X is irrational while X**2 lies in the field, so the canonical exponent
    is 0 or 1: even powers fold into the field value (negative even powers
    through the inverse of X**2).  Instances may carry any integer exponent
    internally; folding happens on canonical(), equality and encoding.
    Sums require equal X-parity unless one operand is zero, since a genuine
    mixed-parity sum cannot arise in any computation of the theory.
    """

    __slots__ = ("value", "xpow")

    def __init__(self, value: CycloElement, xpow: int = 0):
        self.value = value
        self.xpow = 0 if value.is_zero else xpow

    @property
    def ctx(self):
        return self.value.ctx

    @property
    def is_zero(self) -> bool:
        return self.value.is_zero

    def canonical(self) -> "Scalar":
        """Equivalent Scalar with exponent folded into {0, 1}."""
        x = self.xpow
        if x in (0, 1) or self.is_zero:
            return self
        x2 = self.ctx.x_squared()
        k, parity = divmod(x, 2)
        v = self.value
        if k > 0:
            v = v * x2 ** k
        else:
            v = v * x2.inverse() ** (-k)
        return Scalar(v, parity)

    def _coerce(self, other):
        if isinstance(other, Scalar):
            return other
        if isinstance(other, CycloElement):
            return Scalar(other, 0)
        if isinstance(other, (int, Fraction)):
            return Scalar(self.ctx.from_rational(other), 0)
        return None

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return Scalar(self.value * o.value, self.xpow + o.xpow)

    __rmul__ = __mul__

    def __neg__(self):
        return Scalar(-self.value, self.xpow)

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if self.is_zero:
            return o
        if o.is_zero:
            return self
        if (self.xpow - o.xpow) % 2:
            raise XParityError(
                f"cannot add X^{self.xpow} and X^{o.xpow} quantities")
        lo, hi = (self, o) if self.xpow <= o.xpow else (o, self)
        v = hi.value
        if hi.xpow != lo.xpow:
            v = v * self.ctx.x_squared() ** ((hi.xpow - lo.xpow) // 2)
        return Scalar(lo.value + v, lo.xpow)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def inverse(self) -> "Scalar":
        return Scalar(self.value.inverse(), -self.xpow)

    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if self.is_zero or o.is_zero:
            return self.is_zero and o.is_zero
        if (self.xpow - o.xpow) % 2:
            return False
        lo, hi = (self, o) if self.xpow <= o.xpow else (o, self)
        v = hi.value * self.ctx.x_squared() ** ((hi.xpow - lo.xpow) // 2)
        return v == lo.value

    def __hash__(self):
        c = self.canonical()
        return hash((c.value, c.xpow))

    def to_complex(self) -> complex:
        return self.value.to_complex() * self.ctx._x_float ** self.xpow

    def to_json(self) -> dict:
        c = self.canonical()
        return {"xpow": c.xpow, "value": c.value.to_json()}

    def __repr__(self):
        c = self.canonical()
        tail = "" if c.xpow == 0 else " * X"
        return f"Scalar({c.value._pretty()}{tail})"
