"""The level-r vector space of the torus and its move matrices.

The space V(T^2) has the colors 1..r-1 as basis; colorings by arbitrary
integers reduce back into that range (or to zero) through the convention
that the color r vanishes together with the two-term recursion driven by
multiplication with the two-dimensional color.  The pairing of colors k and
m obtained by gluing two solid tori into the 3-sphere is the quantum
integer [k*m].

Move matrices for the two mapping-class-group generators: S has entries
[m*n] and carries one factor X^-1 of grading, T is diagonal with entries
t^(j^2 - 1).
"""

from __future__ import annotations

from .cyclotomic import CycloContext, CycloElement, Scalar


def reduce_color(ctx: CycloContext, k: int) -> tuple[int, int | None]:
    """Reduce an arbitrary integer color to (sign, basis index).

    Colors have period 2r; multiples of r vanish (sign 0, index None);
    colors in (r, 2r) fold back with a sign flip.
    """
    k %= 2 * ctx.r
    if k % ctx.r == 0:
        return 0, None
    if k < ctx.r:
        return 1, k
    return -1, 2 * ctx.r - k


class TorusVector:
    """Finitely supported combination of the basis colors 1..r-1."""

    __slots__ = ("ctx", "coeffs")

    def __init__(self, ctx, coeffs=None):
        self.ctx = ctx
        self.coeffs: dict[int, Scalar] = {}
        if coeffs:
            for idx, c in coeffs.items():
                if not (1 <= idx <= ctx.r - 1):
                    raise ValueError(f"basis index {idx} out of range")
                if not c.is_zero:
                    self.coeffs[idx] = c

    @classmethod
    def basis(cls, ctx, k):
        return cls(ctx, {k: ctx.scalar(1)})

    @classmethod
    def from_color(cls, ctx, k):
        """The extended color k as a vector: sign * basis, or zero."""
        sign, idx = reduce_color(ctx, k)
        if sign == 0:
            return cls(ctx)
        return cls(ctx, {idx: ctx.scalar(sign)})

    @property
    def is_zero(self):
        return not self.coeffs

    def add_term(self, idx, c):
        cur = self.coeffs.get(idx)
        new = c if cur is None else cur + c
        if new.is_zero:
            self.coeffs.pop(idx, None)
        else:
            self.coeffs[idx] = new

    def __add__(self, other):
        out = TorusVector(self.ctx, dict(self.coeffs))
        for idx, c in other.coeffs.items():
            out.add_term(idx, c)
        return out

    def __sub__(self, other):
        out = TorusVector(self.ctx, dict(self.coeffs))
        for idx, c in other.coeffs.items():
            out.add_term(idx, -c)
        return out

    def __neg__(self):
        return TorusVector(self.ctx, {i: -c for i, c in self.coeffs.items()})

    def scale(self, s):
        if not isinstance(s, Scalar):
            s = self.ctx.scalar(s) if isinstance(s, int) else Scalar(s, 0)
        if s.is_zero:
            return TorusVector(self.ctx)
        return TorusVector(self.ctx, {i: s * c for i, c in self.coeffs.items()})

    def pair(self, other: "TorusVector") -> Scalar:
        """Bilinear extension of the torus pairing <k, m> = [k*m]."""
        acc = self.ctx.scalar(0)
        for i, a in self.coeffs.items():
            for j, b in other.coeffs.items():
                acc = acc + a * b * self.ctx.qint(i * j)
        return acc

    def __eq__(self, other):
        if not isinstance(other, TorusVector):
            return NotImplemented
        keys = set(self.coeffs) | set(other.coeffs)
        zero = self.ctx.scalar(0)
        return all(self.coeffs.get(k, zero) == other.coeffs.get(k, zero)
                   for k in keys)

    def __repr__(self):
        if self.is_zero:
            return "TorusVector(0)"
        terms = ", ".join(f"V^{i}: {c!r}" for i, c in sorted(self.coeffs.items()))
        return f"TorusVector({terms})"


def recursion_oracle(ctx: CycloContext, n: int) -> TorusVector:
    """The extended color n computed from the two-term recursion alone.

    Runs x_{n+1} = M x_n - x_{n-1} up and down from the basis window
    x_1 .. x_{r-1}, x_r = 0, where M is multiplication by the color 2.
    Independent of reduce_color; used as its oracle.
    """
    r = ctx.r
    if 1 <= n <= r - 1:
        return TorusVector.basis(ctx, n)

    def apply_m(vec: TorusVector) -> TorusVector:
        out = TorusVector(ctx)
        for idx, c in vec.coeffs.items():
            if idx - 1 >= 1:
                out.add_term(idx - 1, c)
            if idx + 1 <= r - 1:
                out.add_term(idx + 1, c)
        return out

    if n >= r:
        prev = TorusVector.basis(ctx, r - 1)   # x_{r-1}
        cur = TorusVector(ctx)                 # x_r = 0
        i = r
        while i < n:
            prev, cur = cur, apply_m(cur) - prev
            i += 1
        return cur
    # n <= 0: descend from (x_1, x_2)
    cur = TorusVector.basis(ctx, 1)
    above = (TorusVector.basis(ctx, 2) if r >= 3 else TorusVector(ctx))
    i = 1
    while i > n:
        cur, above = apply_m(cur) - above, cur
        i -= 1
    return cur


def pairing(ctx: CycloContext, k: int, m: int) -> CycloElement:
    """<V^k, V^m> = [k*m] for arbitrary integer colors, via reduction."""
    sk, ik = reduce_color(ctx, k)
    sm, im = reduce_color(ctx, m)
    if sk == 0 or sm == 0:
        return ctx.zero
    v = ctx.qint(ik * im)
    return v if sk * sm == 1 else -v


class OperatorMatrix:
    """Square matrix of Scalars; rows/entries are 0-based internally,
    standing for the 1-based basis colors."""

    __slots__ = ("ctx", "rows")

    def __init__(self, ctx, rows):
        self.ctx = ctx
        self.rows = tuple(tuple(row) for row in rows)

    @property
    def size(self):
        return len(self.rows)

    @classmethod
    def identity(cls, ctx, size=None):
        n = size if size is not None else ctx.r - 1
        one, zero = ctx.scalar(1), ctx.scalar(0)
        return cls(ctx, [[one if i == j else zero for j in range(n)]
                         for i in range(n)])

    @classmethod
    def zero(cls, ctx, size=None):
        n = size if size is not None else ctx.r - 1
        z = ctx.scalar(0)
        return cls(ctx, [[z] * n for _ in range(n)])

    @classmethod
    def from_columns(cls, ctx, columns: list[TorusVector]):
        n = len(columns)
        z = ctx.scalar(0)
        rows = [[z] * n for _ in range(n)]
        for j, col in enumerate(columns):
            for idx, c in col.coeffs.items():
                rows[idx - 1][j] = c
        return cls(ctx, rows)

    def column(self, j) -> TorusVector:
        return TorusVector(self.ctx, {i + 1: row[j]
                                      for i, row in enumerate(self.rows)
                                      if not row[j].is_zero})

    def __mul__(self, other):
        if isinstance(other, OperatorMatrix):
            if other.size != self.size:
                raise ValueError("size mismatch")
            n = self.size
            brows = other.rows
            out = []
            for i in range(n):
                arow = self.rows[i]
                nz = [(j, a) for j, a in enumerate(arow) if not a.is_zero]
                orow = []
                for k in range(n):
                    acc = None
                    for j, a in nz:
                        b = brows[j][k]
                        if not b.is_zero:
                            p = a * b
                            acc = p if acc is None else acc + p
                    orow.append(acc if acc is not None else self.ctx.scalar(0))
                out.append(orow)
            return OperatorMatrix(self.ctx, out)
        if isinstance(other, TorusVector):
            return self.apply(other)
        return NotImplemented

    def apply(self, vec: TorusVector) -> TorusVector:
        out = TorusVector(self.ctx)
        for j, c in vec.coeffs.items():
            for i, row in enumerate(self.rows):
                e = row[j - 1]
                if not e.is_zero:
                    out.add_term(i + 1, e * c)
        return out

    def scale(self, s) -> "OperatorMatrix":
        if isinstance(s, CycloElement):
            s = Scalar(s, 0)
        elif isinstance(s, int):
            s = self.ctx.scalar(s)
        return OperatorMatrix(
            self.ctx, [[s * e for e in row] for row in self.rows])

    def __add__(self, other):
        if not isinstance(other, OperatorMatrix):
            return NotImplemented
        return OperatorMatrix(
            self.ctx,
            [[a + b for a, b in zip(ra, rb)]
             for ra, rb in zip(self.rows, other.rows)])

    def __sub__(self, other):
        if not isinstance(other, OperatorMatrix):
            return NotImplemented
        return OperatorMatrix(
            self.ctx,
            [[a - b for a, b in zip(ra, rb)]
             for ra, rb in zip(self.rows, other.rows)])

    def __neg__(self):
        return OperatorMatrix(self.ctx,
                              [[-e for e in row] for row in self.rows])

    def __eq__(self, other):
        if not isinstance(other, OperatorMatrix):
            return NotImplemented
        if self.size != other.size:
            return False
        return all(a == b for ra, rb in zip(self.rows, other.rows)
                   for a, b in zip(ra, rb))

    def first_difference(self, other):
        """(row, col, this, that) of the first differing entry, or None."""
        for i, (ra, rb) in enumerate(zip(self.rows, other.rows)):
            for j, (a, b) in enumerate(zip(ra, rb)):
                if a != b:
                    return (i + 1, j + 1, a, b)
        return None

    def to_json(self) -> dict:
        return {
            "level": self.ctx.r,
            "rows": self.size,
            "entries": [[e.to_json() for e in row] for row in self.rows],
        }

    def __repr__(self):
        body = "; ".join(" ".join(repr(e) for e in row) for row in self.rows)
        return f"OperatorMatrix[{self.size}]({body})"


def smove_matrix(ctx: CycloContext) -> OperatorMatrix:
    """The S move: entries [m*n], each graded by one X^-1."""
    n = ctx.r - 1
    return OperatorMatrix(
        ctx,
        [[Scalar(ctx.qint((i + 1) * (j + 1)), -1) for j in range(n)]
         for i in range(n)])


def tmove_matrix(ctx: CycloContext, power: int = 1) -> OperatorMatrix:
    """The T move (or its integer power): diagonal t^(power*(j^2-1))."""
    n = ctx.r - 1
    z = ctx.scalar(0)
    rows = [[z] * n for _ in range(n)]
    for j in range(1, n + 1):
        rows[j - 1][j - 1] = Scalar(ctx.t_power(power * (j * j - 1)), 0)
    return OperatorMatrix(ctx, rows)


def annulus_pairing(ctx: CycloContext, j: int, k: int) -> Scalar:
    """Pairing of the annulus basis: delta_{jk} X / [j]."""
    if not (1 <= j <= ctx.r - 1 and 1 <= k <= ctx.r - 1):
        raise ValueError("annulus indices must be basis colors")
    if j != k:
        return ctx.scalar(0)
    return Scalar(ctx.qint_inverse(j), 1)
