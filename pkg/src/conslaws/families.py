"""Equations admitting infinite families of zero-order characteristics."""

from __future__ import annotations

from .context import FUNC, JetContext
from .expr import Expression, compose, var
from .calculus import euler, restricted_euler, split_by_arbitrary_functions


def _fresh(ctx: JetContext, base: str, taken=()) -> str:
    used = set(ctx.independent) | set(ctx.dependent) | {f for f, _ in ctx.arbitrary_functions} | set(taken)
    name = base
    k = 0
    while name in used:
        k += 1
        name = f"{base}{k}"
    return name


def _single_unknown(L: Expression):
    if len(L.ctx.dependent) != 1:
        raise ValueError("family checks need a single unknown")


def _var_indices(ctx, vs):
    if isinstance(vs, (str, int)):
        vs = (vs,)
    return tuple(ctx.resolve_var(v) for v in vs)


# -- {h(x_1, ..., x_l)} ----------------------------------------------------------------

def verify_family_h(L: Expression, args) -> bool:
    """True iff every smooth h(args) is a characteristic of L = 0."""
    _single_unknown(L)
    ctx = L.ctx
    idx = _var_indices(ctx, args)
    if not idx:
        raise ValueError("need at least one argument variable")
    if len(set(idx)) == ctx.n:
        raise ValueError("arguments cover every independent variable (du Bois-Reymond case)")
    from .context import jet_alpha
    keys = {tuple(jet_alpha(g)[i] for i in idx) for g in L.jet_generators()}
    # a jet-free L is always a divergence in the remaining variables
    return all(restricted_euler(L, idx, k, 0).is_zero() for k in keys)


def family_h_split(L: Expression, args) -> dict:
    """Split E(h(args) L) by derivatives of a symbolic h."""
    _single_unknown(L)
    ctx = L.ctx
    idx = _var_indices(ctx, args)
    name = _fresh(ctx, "h")
    ext = ctx.with_functions((name, tuple(ctx.independent[i] for i in idx)))
    h = Expression.from_gen(ext, (FUNC, name, 0, (0,) * len(idx)))
    return split_by_arbitrary_functions(euler(h * L.lift(ext)), [name])


def construct_family_h(Fs, args, ctx=None) -> Expression:
    """Sum of D_i F^i over the variables not in args, in declared order."""
    Fs = list(Fs)
    ctx = ctx or next(F.ctx for F in Fs if isinstance(F, Expression))
    idx = _var_indices(ctx, args)
    rest = [i for i in range(ctx.n) if i not in idx]
    if len(Fs) != len(rest):
        raise ValueError(f"expected {len(rest)} components, got {len(Fs)}")
    out = Expression.const(ctx, 0)
    for i, F in zip(rest, Fs):
        if not isinstance(F, Expression):
            F = Expression.const(ctx, F)
        out = out + F.total_derivative(i)
    return out


# -- {h(x_1) + sum f^i(x_1) x_i} --------------------------------------------------------------

def family_affine_split(L: Expression, base) -> dict:
    """Split E((h + sum_i f^i x_i) L) by derivatives of symbolic h, f^i of ``base``."""
    _single_unknown(L)
    ctx = L.ctx
    b = ctx.resolve_var(base)
    bname = ctx.independent[b]
    names = [_fresh(ctx, "h")]
    for i in range(ctx.n):
        if i != b:
            names.append(_fresh(ctx, "f" + ctx.independent[i], names))
    ext = ctx.with_functions(*[(nm, (bname,)) for nm in names])
    chi = Expression.from_gen(ext, (FUNC, names[0], 0, (0,)))
    k = 1
    for i in range(ctx.n):
        if i != b:
            chi = chi + Expression.from_gen(ext, (FUNC, names[k], 0, (0,))) * var(ext, i)
            k += 1
    return split_by_arbitrary_functions(euler(chi * L.lift(ext)), names)


def verify_family_affine(L: Expression, base) -> bool:
    return not family_affine_split(L, base)


def construct_family_affine(Ks, base, ctx=None) -> Expression:
    """Sum over i, j of D_i D_j K^{ij} for a symmetric matrix over the non-base variables.

    ``Ks`` is a square nested list; entry [a][b] belongs to the a-th and
    b-th non-base variables in declared order.
    """
    Ks = [list(r) for r in Ks]
    ctx = ctx or next(k.ctx for r in Ks for k in r if isinstance(k, Expression))
    b = ctx.resolve_var(base)
    rest = [i for i in range(ctx.n) if i != b]
    m = len(rest)
    if len(Ks) != m or any(len(r) != m for r in Ks):
        raise ValueError(f"expected a {m}x{m} matrix")
    K = [[k if isinstance(k, Expression) else Expression.const(ctx, k) for k in r] for r in Ks]
    for a in range(m):
        for c in range(a + 1, m):
            if K[a][c] != K[c][a]:
                raise ValueError("K must be symmetric")
    out = Expression.const(ctx, 0)
    for a in range(m):
        for c in range(m):
            if not K[a][c].is_zero():
                out = out + K[a][c].total_derivative(rest[a]).total_derivative(rest[c])
    return out


# -- {h(omega)} -------------------------------------------------------------------------------

def _matrix(G, ctx):
    G = [[g if isinstance(g, Expression) else Expression.const(ctx, g) for g in r] for r in G]
    n = ctx.n
    if len(G) != n or any(len(r) != n for r in G):
        raise ValueError(f"expected an {n}x{n} matrix")
    for i in range(n):
        for j in range(i, n):
            if not (G[i][j] + G[j][i]).is_zero():
                raise ValueError("G must be antisymmetric")
    return G


def construct_family_omega(G, omega: Expression) -> Expression:
    """Sum over i, j of D_i (G^{ij} D_j omega) for antisymmetric G."""
    ctx = omega.ctx
    G = _matrix(G, ctx)
    if omega.is_const():
        raise ValueError("omega must be nonconstant")
    d = [omega.total_derivative(j) for j in range(ctx.n)]
    out = Expression.const(ctx, 0)
    for i in range(ctx.n):
        inner = Expression.const(ctx, 0)
        for j in range(ctx.n):
            if not G[i][j].is_zero():
                inner = inner + G[i][j] * d[j]
        if not inner.is_zero():
            out = out + inner.total_derivative(i)
    return out


def omega_null_divergence(G, ctx) -> tuple:
    """F^j = sum_i D_i G^{ij}; then Div F = 0 and the omega-form equals sum_j F^j D_j omega."""
    G = _matrix(G, ctx)
    out = []
    for j in range(ctx.n):
        acc = Expression.const(ctx, 0)
        for i in range(ctx.n):
            if not G[i][j].is_zero():
                acc = acc + G[i][j].total_derivative(i)
        out.append(acc)
    return tuple(out)


def family_omega_split(L: Expression, omega: Expression) -> dict:
    _single_unknown(L)
    if omega.is_const():
        raise ValueError("omega must be nonconstant")
    ctx = L.ctx
    name = _fresh(ctx, "h")
    h = compose(name, omega)
    return split_by_arbitrary_functions(euler(h * L), [name])


def verify_family_omega(L: Expression, omega: Expression) -> bool:
    return not family_omega_split(L, omega)


def compare_up_to_sign(a: Expression, b: Expression):
    """+1 if a == b, -1 if a == -b, None otherwise."""
    if (a - b).is_zero():
        return 1
    if (a + b).is_zero():
        return -1
    return None
