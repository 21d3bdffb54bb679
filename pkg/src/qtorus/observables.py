"""The quantized observables C(p,q) and S(p,q) on the torus space.

C(p,q) quantizes 2*cos(2*pi*(p*x + q*y)); its action on a basis color k is
the closed two-term form

    C(p,q) V^k = t^(-p*q) * (t^(2*q*k) V^(k-p) + t^(-2*q*k) V^(k+p)),

with both shifted colors reduced back into the basis.  S(p,q) quantizes the
ratio sin(2*pi*n*(p'x+q'y)) / sin(2*pi*(p'x+q'y)) for n = gcd(p, q) and is
recovered from the C operators by inverting the difference relation
C(n p', n q') = S((n+1)p', (n+1)q') - S((n-1)p', (n-1)q'), the quantum
counterpart of 2*cos(n*u) = sin((n+1)u)/sin(u) - sin((n-1)u)/sin(u).

The product of any two C operators is again a two-term combination: with
d = m*q - n*p,

    C(m,n) C(p,q) = t^d C(m+p, n+q) + t^-d C(m-p, n-q),

verified entrywise in exact arithmetic by product_to_sum.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .cyclotomic import CycloContext, CycloElement, Scalar
from .torus_space import OperatorMatrix, TorusVector, reduce_color


class ProductToSumError(ArithmeticError):
    """The two-term product expansion failed (signals an implementation bug)."""


@dataclass(frozen=True)
class SlopeData:
    """gcd decomposition of a pair (p, q): p = d*pp, q = d*qq."""
    p: int
    q: int
    d: int
    pp: int | None
    qq: int | None


def slope_data(p: int, q: int) -> SlopeData:
    d = math.gcd(abs(p), abs(q))
    if d == 0:
        return SlopeData(p, q, 0, None, None)
    return SlopeData(p, q, d, p // d, q // d)


def c_action(ctx: CycloContext, p: int, q: int, k: int) -> TorusVector:
    """C(p,q) applied to the (extended) color k, both output colors reduced."""
    out = TorusVector(ctx)
    pref = -p * q
    for shift, expo in ((-p, 2 * q * k), (p, -2 * q * k)):
        sign, idx = reduce_color(ctx, k + shift)
        if sign:
            val = ctx.t_power(pref + expo)
            out.add_term(idx, Scalar(val if sign == 1 else -val, 0))
    return out


def c_matrix(ctx: CycloContext, p: int, q: int) -> OperatorMatrix:
    """Matrix of C(p,q) in the basis of colors 1..r-1 (cached per context)."""
    cache = getattr(ctx, "_c_matrix_cache", None)
    if cache is None:
        cache = {}
        ctx._c_matrix_cache = cache
    key = (p, q)
    m = cache.get(key)
    if m is None:
        m = OperatorMatrix.from_columns(
            ctx, [c_action(ctx, p, q, k) for k in range(1, ctx.r)])
        cache[key] = m
    return m


def s_matrix_op(ctx: CycloContext, p: int, q: int) -> OperatorMatrix:
    """Matrix of S(p,q), by Chebyshev inversion of the difference relation.

    With n = gcd: S(n p', n q') = sum of C(m p', m q') over m = n-1, n-3, ...
    down to 1 (n even) plus the identity when n is odd; S(0,0) = 0.
    """
    data = slope_data(p, q)
    if data.d == 0:
        return OperatorMatrix.zero(ctx)
    acc = (OperatorMatrix.identity(ctx) if data.d % 2
           else OperatorMatrix.zero(ctx))
    m = data.d - 1
    while m > 0:
        acc = acc + c_matrix(ctx, m * data.pp, m * data.qq)
        m -= 2
    return acc


def pairing_form(ctx: CycloContext, p: int, q: int, k: int, m: int) -> CycloElement:
    """Closed form of <C(p,q) V^k, V^m>:

    t^(-p*q) * ([k*(m+q)] t^(-2*m*p) + [k*(m-q)] t^(2*m*p)).
    """
    a = ctx.qint(k * (m + q)) * ctx.t_power(-2 * m * p)
    b = ctx.qint(k * (m - q)) * ctx.t_power(2 * m * p)
    return ctx.t_power(-p * q) * (a + b)


def pairing_form_expanded(ctx: CycloContext, p: int, q: int, k: int, m: int) -> CycloElement:
    """The same pairing written as four pure powers of t over t^2 - t^-2."""
    num = (ctx.t_power(2 * (q * k - p * m + k * m))
           - ctx.t_power(2 * (q * k + p * m - k * m))
           + ctx.t_power(2 * (-q * k + p * m + k * m))
           - ctx.t_power(2 * (-q * k - p * m - k * m)))
    den = ctx.t_power(2) - ctx.t_power(-2)
    return ctx.t_power(-p * q) * num * den.inverse()


def product_to_sum(ctx: CycloContext, m: int, n: int, p: int, q: int):
    """Expand C(m,n)*C(p,q) as t^d C(m+p,n+q) + t^-d C(m-p,n-q), d = m*q - n*p.

    The expansion is verified entrywise in exact arithmetic; a mismatch
    raises ProductToSumError carrying the first differing entry.  Returns
    (d, lhs, rhs) with lhs the matrix product and rhs the two-term sum.
    """
    d = m * q - n * p
    lhs = c_matrix(ctx, m, n) * c_matrix(ctx, p, q)
    rhs = (c_matrix(ctx, m + p, n + q).scale(ctx.t_power(d))
           + c_matrix(ctx, m - p, n - q).scale(ctx.t_power(-d)))
    diff = lhs.first_difference(rhs)
    if diff is not None:
        row, col, a, b = diff
        raise ProductToSumError(
            f"C({m},{n})*C({p},{q}) != t^{d} C({m+p},{n+q}) + t^{-d} "
            f"C({m-p},{n-q}) at entry ({row},{col}): {a!r} vs {b!r}")
    return d, lhs, rhs
