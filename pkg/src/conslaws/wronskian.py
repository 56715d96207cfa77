"""Wronskians in total derivatives and Darboux transformations."""

from __future__ import annotations

from .expr import Expression
from .calculus import TotalOperator, apply_operator, formal_adjoint
from .context import MultiIndex


class ZeroWronskian(ValueError):
    """The functions are totally linearly dependent."""


def _ctx_of(fs, fallback=None):
    for f in fs:
        if isinstance(f, Expression):
            return f.ctx
    if fallback is not None:
        return fallback
    raise ValueError("cannot infer a context from constants alone")


def _coerce(fs, ctx):
    return [f if isinstance(f, Expression) else Expression.const(ctx, f) for f in fs]


def derivative_rows(f: Expression, var, k: int) -> list:
    """[f, D f, ..., D^(k-1) f]."""
    rows = [f]
    for _ in range(k - 1):
        rows.append(rows[-1].total_derivative(var))
    return rows


def determinant(matrix) -> Expression:
    """Determinant by fraction-free Bareiss elimination with row pivoting."""
    m = [list(r) for r in matrix]
    n = len(m)
    if n == 0:
        raise ValueError("empty matrix")
    ctx = m[0][0].ctx
    sign = 1
    prev = Expression.const(ctx, 1)
    for k in range(n - 1):
        if m[k][k].is_zero():
            swap = next((r for r in range(k + 1, n) if not m[r][k].is_zero()), None)
            if swap is None:
                return Expression.const(ctx, 0)
            m[k], m[swap] = m[swap], m[k]
            sign = -sign
        piv = m[k][k]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (piv * m[i][j] - m[i][k] * m[k][j]) / prev
            m[i][k] = Expression.const(ctx, 0)
        prev = piv
    det = m[n - 1][n - 1]
    return -det if sign < 0 else det


def wronskian(fs, var=0, ctx=None) -> Expression:
    """det(D^(row) f^col); W() = 1."""
    fs = list(fs)
    if not fs:
        if ctx is None:
            raise ValueError("the empty Wronskian needs an explicit context")
        return Expression.const(ctx, 1)
    ctx = _ctx_of(fs, ctx)
    fs = _coerce(fs, ctx)
    k = len(fs)
    cols = [derivative_rows(f, var, k) for f in fs]
    matrix = [[cols[c][r] for c in range(k)] for r in range(k)]
    return determinant(matrix)


def darboux_apply(fs, G: Expression, var=0) -> Expression:
    """W(fs, G) / W(fs)."""
    fs = _coerce(list(fs), G.ctx)
    w = wronskian(fs, var, ctx=G.ctx)
    if w.is_zero():
        raise ZeroWronskian("Wronskian of the given functions vanishes identically")
    return wronskian(fs + [G], var) / w


def darboux_operator(fs, var=0, ctx=None) -> TotalOperator:
    """Monic operator of order k with apply(op, G) = DT[fs] G.

    Coefficients come from expanding W(fs, G) along the G column.
    """
    fs = list(fs)
    ctx = _ctx_of(fs, ctx)
    fs = _coerce(fs, ctx)
    i = ctx.resolve_var(var)
    k = len(fs)
    if k == 0:
        return TotalOperator.identity(ctx)
    cols = [derivative_rows(f, i, k + 1) for f in fs]
    w = determinant([[cols[c][r] for c in range(k)] for r in range(k)])
    if w.is_zero():
        raise ZeroWronskian("Wronskian of the given functions vanishes identically")
    coeffs = {}
    for j in range(k + 1):
        rows = [r for r in range(k + 1) if r != j]
        if j == k:
            minor = w
        else:
            minor = determinant([[cols[c][r] for c in range(k)] for r in rows])
        if minor.is_zero():
            continue
        sgn = 1 if (j + k) % 2 == 0 else -1
        coeffs[MultiIndex.unit(ctx.n, i, j)] = minor / w * sgn
    return TotalOperator(ctx, coeffs)


def darboux_adjoint(fs, var=0, ctx=None) -> TotalOperator:
    return formal_adjoint(darboux_operator(fs, var, ctx))


def adjoint_functions(lams, var=0) -> list:
    """phi^s = (-1)^(p-s) W(lams without s) / W(lams), s = 1..p."""
    lams = list(lams)
    ctx = _ctx_of(lams)
    lams = _coerce(lams, ctx)
    p = len(lams)
    w = wronskian(lams, var)
    if w.is_zero():
        raise ZeroWronskian("Wronskian of the integrating factors vanishes identically")
    out = []
    for s in range(1, p + 1):
        rest = lams[:s - 1] + lams[s:]
        ws = wronskian(rest, var, ctx=ctx)
        out.append(ws / w * (1 if (p - s) % 2 == 0 else -1))
    return out


def lagrange_split(P: TotalOperator, f: Expression, g: Expression, var=0) -> Expression:
    """F with D F = f P(g) - g P^dagger(f), for an operator in D_var only."""
    ctx = f.ctx
    i = ctx.resolve_var(var)
    for alpha in P.coefficients:
        if any(k for j, k in enumerate(alpha) if j != i):
            raise ValueError("lagrange_split needs an operator in a single total derivative")
    F = Expression.const(ctx, 0)
    for alpha, psi in P.coefficients.items():
        k = alpha[i]
        a = [psi * f]
        for _ in range(k - 1):
            a.append(a[-1].total_derivative(i))
        b = [g]
        for _ in range(k - 1):
            b.append(b[-1].total_derivative(i))
        for j in range(k):
            term = a[j] * b[k - 1 - j]
            F = F + (term if j % 2 == 0 else -term)
    lhs = f * apply_operator(P, g) - g * apply_operator(formal_adjoint(P), f)
    if not (F.total_derivative(i) - lhs).is_zero():
        raise AssertionError("Lagrange split failed verification")
    return F
