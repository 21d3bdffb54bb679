"""Star-product symbols and the noncommutative torus.

Two formal algebras over a configurable scalar ring (exact cyclotomic at a
fixed level, or Laurent polynomials in a formal t):

  * NCWord, spanned by normalized Weyl monomials e(p,q) = t^(-pq) U^p V^q
    with U V = t^2 V U, multiplying by the cocycle rule
    e(m,n) e(p,q) = t^(mq-np) e(m+p, n+q);
  * SymbolElement, spanned by cosine symbols indexed by the orbits
    {(p,q), (-p,-q)}, multiplying by the two-term product-to-sum rule.

The cosine symbol (p,q) maps to e(p,q) + e(-p,-q) inside NCWord, and, over
the cyclotomic ring, to the operator matrix of the quantized cosine on the
torus space; the latter assignment being multiplicative is exactly the
product-to-sum identity of the observables module.  A concrete matrix
model of the Weyl relation (clock and shift of size 2r) is provided for
cross-checking, and kernel_compare measures both representation maps by
exact linear algebra.
"""

from __future__ import annotations

from fractions import Fraction

from .cyclotomic import CycloContext, CycloElement, Scalar
from .linalg import nullspace
from .observables import c_matrix
from .torus_space import OperatorMatrix


class ScalarRingError(TypeError):
    """Operands live over different scalar rings."""


class LaurentPoly:
    """Laurent polynomial in the formal variable t with Fraction coefficients."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs=None):
        self.coeffs: dict[int, Fraction] = {}
        if coeffs:
            for e, c in coeffs.items():
                c = Fraction(c)
                if c:
                    self.coeffs[e] = c

    @classmethod
    def t_pow(cls, e, coeff=1):
        return cls({e: Fraction(coeff)})

    @property
    def is_zero(self):
        return not self.coeffs

    def _coerce(self, other):
        if isinstance(other, LaurentPoly):
            return other
        if isinstance(other, (int, Fraction)):
            return LaurentPoly({0: Fraction(other)})
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        out = dict(self.coeffs)
        for e, c in o.coeffs.items():
            s = out.get(e, Fraction(0)) + c
            if s:
                out[e] = s
            else:
                out.pop(e, None)
        return LaurentPoly(out)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly({e: -c for e, c in self.coeffs.items()})

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        out: dict[int, Fraction] = {}
        for e1, c1 in self.coeffs.items():
            for e2, c2 in o.coeffs.items():
                e = e1 + e2
                s = out.get(e, Fraction(0)) + c1 * c2
                if s:
                    out[e] = s
                else:
                    out.pop(e, None)
        return LaurentPoly(out)

    __rmul__ = __mul__

    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self.coeffs == o.coeffs

    def __hash__(self):
        return hash(frozenset(self.coeffs.items()))

    def to_json(self):
        return {"terms": [[e, [c.numerator, c.denominator]]
                          for e, c in sorted(self.coeffs.items())]}

    def __repr__(self):
        if self.is_zero:
            return "LaurentPoly(0)"
        parts = [f"{c}*t^{e}" for e, c in sorted(self.coeffs.items())]
        return "LaurentPoly(" + " + ".join(parts) + ")"


class CycloRing:
    """Scalar ring tag: exact cyclotomic numbers at one level."""

    def __init__(self, ctx: CycloContext):
        self.ctx = ctx
        self.tag = ("cyclo", ctx.r)

    def one(self):
        return self.ctx.one

    def t_pow(self, e):
        return self.ctx.t_power(e)

    def coerce(self, value):
        if isinstance(value, CycloElement):
            return value
        return self.ctx.from_rational(Fraction(value))


class LaurentRing:
    """Scalar ring tag: Laurent polynomials in a formal t (no level)."""

    tag = ("laurent",)

    def one(self):
        return LaurentPoly({0: 1})

    def t_pow(self, e):
        return LaurentPoly.t_pow(e)

    def coerce(self, value):
        if isinstance(value, LaurentPoly):
            return value
        return LaurentPoly({0: Fraction(value)})


def _merge(support, key, val):
    cur = support.get(key)
    new = val if cur is None else cur + val
    if new.is_zero:
        support.pop(key, None)
    else:
        support[key] = new


class NCWord:
    """Finite combination of Weyl monomials e(p,q) over a scalar ring."""

    __slots__ = ("ring", "support")

    def __init__(self, ring, support=None):
        self.ring = ring
        self.support: dict[tuple[int, int], object] = {}
        if support:
            for key, val in support.items():
                if not val.is_zero:
                    _merge(self.support, tuple(key), val)

    @classmethod
    def monomial(cls, ring, p, q, coeff=None):
        return cls(ring, {(p, q): coeff if coeff is not None else ring.one()})

    def _check(self, other):
        if self.ring.tag != other.ring.tag:
            raise ScalarRingError(
                f"mixed scalar rings {self.ring.tag} and {other.ring.tag}")

    def __add__(self, other):
        self._check(other)
        out = NCWord(self.ring, dict(self.support))
        for key, val in other.support.items():
            _merge(out.support, key, val)
        return out

    def __neg__(self):
        return NCWord(self.ring,
                      {k: -v for k, v in self.support.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if not isinstance(other, NCWord):
            return NotImplemented
        return weyl_multiply(self, other)

    def scale(self, coeff):
        coeff = self.ring.coerce(coeff)
        return NCWord(self.ring,
                      {k: coeff * v for k, v in self.support.items()})

    def __eq__(self, other):
        if not isinstance(other, NCWord):
            return NotImplemented
        self._check(other)
        for k in set(self.support) | set(other.support):
            a, b = self.support.get(k), other.support.get(k)
            if a is None:
                if not b.is_zero:
                    return False
            elif b is None:
                if not a.is_zero:
                    return False
            elif a != b:
                return False
        return True

    @property
    def is_zero(self):
        return not self.support

    def to_json(self):
        return {"terms": [
            {"p": p, "q": q, "coeff": _coeff_json(v)}
            for (p, q), v in sorted(self.support.items())]}

    def __repr__(self):
        if self.is_zero:
            return "NCWord(0)"
        parts = [f"({v!r})*e({p},{q})"
                 for (p, q), v in sorted(self.support.items())]
        return "NCWord(" + " + ".join(parts) + ")"


def _coeff_json(v):
    return v.to_json() if hasattr(v, "to_json") else v


def weyl_multiply(a: NCWord, b: NCWord) -> NCWord:
    """Bilinear extension of e(m,n) e(p,q) = t^(mq-np) e(m+p, n+q)."""
    a._check(b)
    ring = a.ring
    out = NCWord(ring)
    for (m, n), va in a.support.items():
        for (p, q), vb in b.support.items():
            val = ring.t_pow(m * q - n * p) * va * vb
            if not val.is_zero:
                _merge(out.support, (m + p, n + q), val)
    return out


def nc_cosine(ring, p: int, q: int) -> NCWord:
    """The noncommutative cosine e(p,q) + e(-p,-q) (doubled at the origin)."""
    if p == 0 and q == 0:
        return NCWord(ring, {(0, 0): ring.one() + ring.one()})
    return NCWord(ring, {(p, q): ring.one(), (-p, -q): ring.one()})


def orbit_key(p: int, q: int) -> tuple[int, int]:
    """Canonical representative of the orbit {(p,q), (-p,-q)}:
    the lexicographically positive member."""
    if p > 0 or (p == 0 and q >= 0):
        return (p, q)
    return (-p, -q)


class SymbolElement:
    """Finite combination of cosine symbols over a scalar ring.

    Keys are orbit representatives; the symbols at (p,q) and (-p,-q) are
    the same symbol.
    """

    __slots__ = ("ring", "support")

    def __init__(self, ring, support=None):
        self.ring = ring
        self.support: dict[tuple[int, int], object] = {}
        if support:
            for (p, q), val in support.items():
                if not val.is_zero:
                    _merge(self.support, orbit_key(p, q), val)

    @classmethod
    def cosine(cls, ring, p, q, coeff=None):
        return cls(ring, {(p, q): coeff if coeff is not None else ring.one()})

    def _check(self, other):
        if self.ring.tag != other.ring.tag:
            raise ScalarRingError(
                f"mixed scalar rings {self.ring.tag} and {other.ring.tag}")

    def __add__(self, other):
        self._check(other)
        out = SymbolElement(self.ring, dict(self.support))
        for key, val in other.support.items():
            _merge(out.support, key, val)
        return out

    def __neg__(self):
        return SymbolElement(self.ring,
                             {k: -v for k, v in self.support.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if not isinstance(other, SymbolElement):
            return NotImplemented
        return star_multiply(self, other)

    def scale(self, coeff):
        coeff = self.ring.coerce(coeff)
        return SymbolElement(self.ring,
                             {k: coeff * v for k, v in self.support.items()})

    def __eq__(self, other):
        if not isinstance(other, SymbolElement):
            return NotImplemented
        self._check(other)
        keys = set(self.support) | set(other.support)
        for k in keys:
            a, b = self.support.get(k), other.support.get(k)
            if a is None:
                if not b.is_zero:
                    return False
            elif b is None:
                if not a.is_zero:
                    return False
            elif a != b:
                return False
        return True

    @property
    def is_zero(self):
        return not self.support

    def to_nc_word(self) -> NCWord:
        """The image under cosine symbol (p,q) -> e(p,q) + e(-p,-q)."""
        out = NCWord(self.ring)
        for (p, q), val in self.support.items():
            for key, v in nc_cosine(self.ring, p, q).support.items():
                _merge(out.support, key, v * val)
        return out

    def __repr__(self):
        if self.is_zero:
            return "SymbolElement(0)"
        parts = [f"({v!r})*C({p},{q})"
                 for (p, q), v in sorted(self.support.items())]
        return "SymbolElement(" + " + ".join(parts) + ")"


def star_multiply(a: SymbolElement, b: SymbolElement) -> SymbolElement:
    """Bilinear extension of the two-term star product

    C(m,n) * C(p,q) = t^(mq-np) C(m+p, n+q) + t^(np-mq) C(m-p, n-q),

    with the results folded onto canonical orbit keys.
    """
    a._check(b)
    ring = a.ring
    out = SymbolElement(ring)
    for (m, n), va in a.support.items():
        for (p, q), vb in b.support.items():
            d = m * q - n * p
            coeff = va * vb
            for tpow, key in ((d, (m + p, n + q)), (-d, (m - p, n - q))):
                val = ring.t_pow(tpow) * coeff
                if not val.is_zero:
                    _merge(out.support, orbit_key(*key), val)
    return out


# ----------------------------------------------------------------------
# representations

class ClockShiftModel:
    """Concrete 2r x 2r model of the Weyl relation: U the clock diag(t^2j),
    V the cyclic shift; U V = t^2 V U holds exactly and t^2 has order 2r."""

    def __init__(self, ctx: CycloContext):
        self.ctx = ctx
        self.size = 2 * ctx.r
        z = ctx.scalar(0)
        n = self.size
        urows = [[z] * n for _ in range(n)]
        vrows = [[z] * n for _ in range(n)]
        for j in range(n):
            urows[j][j] = Scalar(ctx.t_power(2 * j), 0)
            vrows[(j + 1) % n][j] = ctx.scalar(1)
        self.u = OperatorMatrix(ctx, urows)
        self.v = OperatorMatrix(ctx, vrows)

    def monomial(self, p: int, q: int) -> OperatorMatrix:
        """Matrix of e(p,q) = t^(-pq) U^p V^q (cached)."""
        cache = getattr(self, "_mon_cache", None)
        if cache is None:
            cache = {}
            self._mon_cache = cache
        key = (p % self.size, q % self.size, (p * q) % self.ctx.order)
        m = cache.get(key)
        if m is None:
            ctx, n = self.ctx, self.size
            z = ctx.scalar(0)
            rows = [[z] * n for _ in range(n)]
            for j in range(n):
                rows[(j + q) % n][j] = Scalar(
                    ctx.t_power(-p * q + 2 * p * (j + q)), 0)
            m = OperatorMatrix(ctx, rows)
            cache[key] = m
        return m

    def evaluate(self, word: NCWord) -> OperatorMatrix:
        if word.ring.tag != ("cyclo", self.ctx.r):
            raise ScalarRingError("clock-shift evaluation needs the "
                                  "cyclotomic ring at the model's level")
        acc = OperatorMatrix.zero(self.ctx, self.size)
        for (p, q), val in word.support.items():
            acc = acc + self.monomial(p, q).scale(Scalar(val, 0))
        return acc


def clock_shift_model(ctx: CycloContext) -> ClockShiftModel:
    return ClockShiftModel(ctx)


def rep_operator(ctx: CycloContext, sym: SymbolElement) -> OperatorMatrix:
    """Linear extension of cosine symbol (p,q) -> operator matrix C(p,q).

    Multiplicativity of this map is the product-to-sum identity.
    """
    if sym.ring.tag != ("cyclo", ctx.r):
        raise ScalarRingError(
            f"symbol ring {sym.ring.tag} does not match level {ctx.r}")
    acc = OperatorMatrix.zero(ctx)
    for (p, q), val in sym.support.items():
        acc = acc + c_matrix(ctx, p, q).scale(Scalar(val, 0))
    return acc


def kernel_compare(ctx: CycloContext, bound: int) -> dict:
    """Exact kernels of the two linear maps out of the symbol span
    {C(p,q) : 0 <= p <= bound, |q| <= bound, orbit-canonical}:
    symbol -> operator matrix, and symbol -> Weyl word.

    Reports both kernel dimensions and whether the Weyl-side kernel is
    contained in the operator-side kernel.  Dimensions are outputs of the
    elimination, not assumptions.
    """
    if bound < 0:
        raise ValueError("bound must be nonnegative")
    symbols = sorted({orbit_key(p, q)
                      for p in range(0, bound + 1)
                      for q in range(-bound, bound + 1)})
    ring = CycloRing(ctx)
    ncols = len(symbols)
    span = ctx.r - 1
    op_rows = [[ctx.zero] * ncols for _ in range(span * span)]
    lattice: dict[tuple[int, int], int] = {}
    nc_cols = []
    for col, (p, q) in enumerate(symbols):
        mat = c_matrix(ctx, p, q)
        for i in range(span):
            for j in range(span):
                op_rows[i * span + j][col] = mat.rows[i][j].canonical().value
        word = nc_cosine(ring, p, q)
        nc_cols.append(word)
        for key in word.support:
            lattice.setdefault(key, len(lattice))
    nc_rows = [[ctx.zero] * ncols for _ in range(len(lattice))]
    for col in range(ncols):
        for key, val in nc_cols[col].support.items():
            nc_rows[lattice[key]][col] = val
    rank_op, ker_op = nullspace(ctx, op_rows, ncols)
    rank_nc, ker_nc = nullspace(ctx, nc_rows, ncols)
    contained = True
    for vec in ker_nc:
        img = OperatorMatrix.zero(ctx)
        for col, coeff in enumerate(vec):
            if not coeff.is_zero:
                img = img + c_matrix(ctx, *symbols[col]).scale(coeff)
        if img != OperatorMatrix.zero(ctx):
            contained = False
            break
    return {
        "level": ctx.r,
        "N": bound,
        "symbols": ncols,
        "dim_ker_op": ncols - rank_op,
        "dim_ker_nc": ncols - rank_nc,
        "nc_subset_op": contained,
    }
