"""Variational calculus on jet space."""

from __future__ import annotations

from dataclasses import dataclass
from math import comb, prod

from gmpy2 import mpq

from .context import COMPOSITE, FUNC, JET, KERNEL, VAR, JetContext, MultiIndex, func_beta, func_gen, jet_alpha, jet_gen
from .expr import Expression, NEG_INF
from .poly import Poly


class NotADivergence(ValueError):
    """The input is not in the image of the requested total divergence."""


class NonPolynomialInput(ValueError):
    pass


# -- data types -----------------------------------------------------------------

@dataclass(frozen=True)
class ConservedCurrent:
    components: tuple

    def __post_init__(self):
        comps = tuple(self.components)
        object.__setattr__(self, "components", comps)
        if not comps:
            raise ValueError("a current needs at least one component")
        ctx = comps[0].ctx
        if len(comps) != ctx.n:
            raise ValueError(f"expected {ctx.n} components, got {len(comps)}")

    def divergence(self) -> Expression:
        return divergence(self.components)


@dataclass(frozen=True)
class Characteristic:
    components: tuple

    def __post_init__(self):
        comps = tuple(self.components)
        object.__setattr__(self, "components", comps)
        if not comps:
            raise ValueError("a characteristic needs at least one component")


# -- total derivatives -----------------------------------------------------------

def total_derivative(f: Expression, i) -> Expression:
    return f.total_derivative(i)


def total_derivative_multi(f: Expression, alpha, cache: dict | None = None) -> Expression:
    """D^alpha f, memoized in ``cache`` keyed by multi-index."""
    alpha = tuple(alpha)
    if cache is None:
        cache = {}
    zero = (0,) * len(alpha)
    cache.setdefault(zero, f)
    if alpha in cache:
        return cache[alpha]
    i = max(j for j, k in enumerate(alpha) if k)
    prev = list(alpha)
    prev[i] -= 1
    out = total_derivative_multi(f, prev, cache).total_derivative(i)
    cache[alpha] = out
    return out


def divergence(components) -> Expression:
    comps = list(components)
    out = comps[0].total_derivative(0)
    for i, F in enumerate(comps[1:], start=1):
        out = out + F.total_derivative(i)
    return out


def multi_binomial(beta, alpha) -> int:
    return prod(comb(b, a) for b, a in zip(beta, alpha))


def alternating_sum(terms: dict, n: int, axes=None) -> Expression | None:
    """Sum over alpha of (-D)^alpha g_alpha, evaluated Horner style along each axis.

    ``terms`` maps length-n tuples to Expressions; ``axes`` lists the
    coordinates that may be nonzero (default all).
    """
    if not terms:
        return None
    if axes is None:
        axes = tuple(range(n))
    return _horner(terms, tuple(axes))


def _horner(terms: dict, axes: tuple):
    if not axes:
        total = None
        for g in terms.values():
            total = g if total is None else total + g
        return total
    ax, rest = axes[0], axes[1:]
    groups: dict = {}
    for alpha, g in terms.items():
        groups.setdefault(alpha[ax], {})[alpha] = g
    top = max(groups)
    acc = None
    for k in range(top, -1, -1):
        inner = _horner(groups[k], rest) if k in groups else None
        if acc is None:
            acc = inner
        else:
            d = -acc.total_derivative(ax)
            acc = d if inner is None else inner + d
    return acc


def _zero(ctx):
    return Expression.const(ctx, 0)


def _dep_index(ctx: JetContext, a) -> int:
    if isinstance(a, str):
        return ctx.dep_index(a)
    a = int(a)
    if not 0 <= a < len(ctx.dependent):
        raise KeyError(f"dependent index {a} out of range")
    return a


# -- Euler operators ---------------------------------------------------------------

def euler(f: Expression, a=0) -> Expression:
    """Variational derivative of f with respect to the a-th unknown."""
    ctx = f.ctx
    a = _dep_index(ctx, a)
    terms = {}
    for g in f.jet_generators():
        if g[1] == a:
            d = f.diff(g)
            if not d.is_zero():
                terms[tuple(jet_alpha(g))] = d
    out = alternating_sum(terms, ctx.n)
    return _zero(ctx) if out is None else out


def euler_all(f: Expression) -> tuple:
    return tuple(euler(f, a) for a in range(len(f.ctx.dependent)))


def higher_euler(f: Expression, a, alpha) -> Expression:
    """Sum over beta >= alpha of C(beta, alpha) (-D)^(beta - alpha) df/du_beta."""
    ctx = f.ctx
    a = _dep_index(ctx, a)
    alpha = MultiIndex(alpha)
    if len(alpha) != ctx.n:
        raise ValueError("multi-index length mismatch")
    terms = {}
    for g in f.jet_generators():
        beta = jet_alpha(g)
        if g[1] == a and beta.dominates(alpha):
            d = f.diff(g)
            if not d.is_zero():
                c = multi_binomial(beta, alpha)
                terms[tuple(beta - alpha)] = d * c if c != 1 else d
    out = alternating_sum(terms, ctx.n)
    return _zero(ctx) if out is None else out


def _split_vars(ctx, excluded):
    if isinstance(excluded, (str, int)):
        excluded = (excluded,)
    ex = tuple(ctx.resolve_var(v) for v in excluded)
    keep = tuple(i for i in range(ctx.n) if i not in ex)
    return ex, keep


def restricted_euler(f: Expression, excluded, k, a=0) -> Expression:
    """Euler operator over the non-excluded variables for the jets carrying
    exactly ``k`` derivatives in the excluded variables.

    ``excluded`` is a variable or a tuple of variables; ``k`` is an integer
    (one excluded variable) or a tuple aligned with ``excluded``.
    """
    ctx = f.ctx
    a = _dep_index(ctx, a)
    ex, keep = _split_vars(ctx, excluded)
    k = (k,) if isinstance(k, int) else tuple(k)
    if len(k) != len(ex):
        raise ValueError("one derivative count per excluded variable is required")
    terms = {}
    for g in f.jet_generators():
        alpha = jet_alpha(g)
        if g[1] == a and tuple(alpha[i] for i in ex) == k:
            d = f.diff(g)
            if not d.is_zero():
                key = tuple(0 if i in ex else alpha[i] for i in range(ctx.n))
                terms[key] = d
    out = alternating_sum(terms, ctx.n, keep)
    return _zero(ctx) if out is None else out


def restricted_euler_system(f: Expression, excluded) -> dict:
    """All nonzero restricted Euler expressions, keyed by (a, k)."""
    ctx = f.ctx
    ex, keep = _split_vars(ctx, excluded)
    keys = set()
    for g in f.jet_generators():
        alpha = jet_alpha(g)
        keys.add((g[1], tuple(alpha[i] for i in ex)))
    out = {}
    for a, k in sorted(keys):
        r = restricted_euler(f, ex, k, a)
        if not r.is_zero():
            out[(a, k)] = r
    return out


def is_total_divergence(f: Expression) -> bool:
    return all(e.is_zero() for e in euler_all(f))


# -- operators ------------------------------------------------------------------------

class TotalOperator:
    """Finite sum of coefficient * D^alpha."""

    __slots__ = ("ctx", "coefficients")

    def __init__(self, ctx: JetContext, coefficients: dict | None = None):
        self.ctx = ctx
        coeffs = {}
        for alpha, c in (coefficients or {}).items():
            alpha = MultiIndex(alpha)
            if len(alpha) != ctx.n:
                raise ValueError("multi-index length mismatch")
            if not isinstance(c, Expression):
                c = Expression.const(ctx, c)
            if not c.is_zero():
                coeffs[alpha] = coeffs[alpha] + c if alpha in coeffs else c
        self.coefficients = {k: v for k, v in coeffs.items() if not v.is_zero()}

    @classmethod
    def identity(cls, ctx):
        return cls(ctx, {MultiIndex.zero(ctx.n): 1})

    @classmethod
    def d(cls, ctx, i, k: int = 1):
        return cls(ctx, {MultiIndex.unit(ctx.n, ctx.resolve_var(i), k): 1})

    @classmethod
    def multiplication(cls, f: Expression):
        return cls(f.ctx, {MultiIndex.zero(f.ctx.n): f})

    def order(self):
        return max((a.order for a in self.coefficients), default=NEG_INF)

    def is_zero(self):
        return not self.coefficients

    def __call__(self, g):
        return apply_operator(self, g)

    def __add__(self, other):
        out = dict(self.coefficients)
        for a, c in other.coefficients.items():
            out[a] = out[a] + c if a in out else c
        return TotalOperator(self.ctx, out)

    def __neg__(self):
        return TotalOperator(self.ctx, {a: -c for a, c in self.coefficients.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, f):
        return TotalOperator(self.ctx, {a: c * f for a, c in self.coefficients.items()})

    def __matmul__(self, other):
        return compose(self, other)

    def __eq__(self, other):
        if not isinstance(other, TotalOperator):
            return NotImplemented
        return self.coefficients == other.coefficients

    def __hash__(self):
        return hash(frozenset(self.coefficients.items()))

    def to_text(self) -> str:
        if not self.coefficients:
            return "0"
        parts = []
        for alpha in sorted(self.coefficients, key=lambda a: (a.order, tuple(-k for k in a))):
            c = self.coefficients[alpha]
            d = "*".join(f"D_{x}" + (f"^{k}" if k > 1 else "")
                         for x, k in zip(self.ctx.independent, alpha) if k)
            ct = c.to_text()
            if not d:
                parts.append(f"({ct})")
            elif c == 1:
                parts.append(d)
            else:
                parts.append(f"({ct})*{d}")
        return " + ".join(parts)

    def __repr__(self):
        return f"TotalOperator({self.to_text()})"


def apply_operator(P: TotalOperator, g: Expression) -> Expression:
    cache: dict = {}
    out = _zero(g.ctx)
    for alpha, c in P.coefficients.items():
        out = out + c * total_derivative_multi(g, alpha, cache)
    return out


def formal_adjoint(P: TotalOperator) -> TotalOperator:
    """Coefficients of f -> sum (-D)^alpha (psi^alpha f)."""
    ctx = P.ctx
    out: dict = {}
    for alpha, psi in P.coefficients.items():
        cache: dict = {}
        sign = -1 if alpha.order % 2 else 1
        for beta in _below(alpha):
            c = multi_binomial(alpha, beta) * sign
            term = total_derivative_multi(psi, alpha - beta, cache) * c
            out[beta] = out[beta] + term if beta in out else term
    return TotalOperator(ctx, out)


def compose(P: TotalOperator, Q: TotalOperator) -> TotalOperator:
    """The operator g -> P(Q(g))."""
    out: dict = {}
    for alpha, psi in P.coefficients.items():
        for beta, chi in Q.coefficients.items():
            cache: dict = {}
            for gamma in _below(alpha):
                c = multi_binomial(alpha, gamma)
                term = psi * total_derivative_multi(chi, gamma, cache) * c
                key = (alpha - gamma) + beta
                out[key] = out[key] + term if key in out else term
    return TotalOperator(P.ctx, out)


def _below(alpha):
    """All multi-indices beta <= alpha."""
    out = [()]
    for k in alpha:
        out = [b + (j,) for b in out for j in range(k + 1)]
    return [MultiIndex(b) for b in out]


def frechet(rho: Expression, var="x") -> TotalOperator:
    """Linearization sum_k (d rho / d u_k) D_x^k for a density in x-derivatives."""
    ctx = rho.ctx
    i = ctx.resolve_var(var)
    if len(ctx.dependent) != 1:
        raise ValueError("the Frechet derivative here needs a single unknown")
    coeffs = {}
    for g in rho.jet_generators():
        alpha = jet_alpha(g)
        if any(k for j, k in enumerate(alpha) if j != i):
            raise ValueError("density contains derivatives in variables other than "
                             f"{ctx.independent[i]}")
        coeffs[alpha] = rho.diff(g)
    return TotalOperator(ctx, coeffs)


# -- splitting ------------------------------------------------------------------------

def split_by(e: Expression, pred) -> dict:
    """Coefficients of e with respect to monomials in generators satisfying ``pred``.

    Keys are the monomials as Expressions (``1`` for the free part).
    """
    if any(pred(g) for g in e.den.gens()):
        raise NonPolynomialInput("split generators appear in the denominator")
    ctx = e.ctx
    out = {}
    for m, coeff in e.num.collect(pred).items():
        key = Expression(ctx, Poly.monomial(m), normalized=True)
        out[key] = Expression(ctx, coeff, e.den)
    return {k: v for k, v in out.items() if not v.is_zero()}


def split_by_arbitrary_functions(e: Expression, funcs) -> dict:
    names = {funcs} if isinstance(funcs, str) else set(funcs)
    return split_by(e, lambda g: g[0] in (FUNC, COMPOSITE) and g[1] in names)


# -- antiderivatives ---------------------------------------------------------------------

def _lower(g, i, ctx):
    """The generator whose i-th total derivative is g."""
    if g[0] == JET:
        alpha = list(jet_alpha(g))
        alpha[i] -= 1
        return jet_gen(g[1], alpha)
    args = ctx.function_args(g[1])
    j = args.index(ctx.independent[i])
    beta = list(func_beta(g))
    beta[j] -= 1
    return func_gen(g[1], beta)


def _peel_candidates(f: Expression, i: int):
    """Generators g of f that are D_i of another generator."""
    ctx = f.ctx
    name = ctx.independent[i]
    out = []
    for g in f.generators():
        if g[0] == JET and jet_alpha(g)[i] > 0:
            out.append(g)
        elif g[0] == FUNC:
            args = ctx.function_args(g[1])
            if name in args and func_beta(g)[args.index(name)] > 0:
                out.append(g)
    return out


def _depends_on_var(g, i, ctx) -> bool:
    """True if generator g varies with x_i (as a function, not via total derivative)."""
    if g[0] == VAR:
        return g[1] == i
    if g[0] == KERNEL:
        return g[2] == i
    if g[0] == FUNC:
        return ctx.independent[i] in ctx.function_args(g[1])
    return g[0] in (JET, COMPOSITE)


def _integrate_in_gen(A: Expression, w) -> Expression:
    """An antiderivative of A with respect to the generator w, rational or error."""
    ctx = A.ctx
    if w not in A.den.gens():
        out = {}
        for m, c in A.num.terms.items():
            e = 0
            rest = []
            for g, k in m:
                if g == w:
                    e = k
                else:
                    rest.append((g, k))
            nm = tuple(sorted(rest + [(w, e + 1)]))
            out[nm] = c / (e + 1)
        return Expression(ctx, Poly(out), A.den)
    return _ratint(A, w)


def _ratint(A: Expression, w) -> Expression:
    import sympy
    ctx = A.ctx
    gens = sorted(A.generators())
    syms = sympy.symbols(f"z0:{len(gens)}")
    idx = {g: s for g, s in zip(gens, syms)}

    def to_sym(p: Poly):
        return sympy.Add(*[sympy.Rational(int(c.numerator), int(c.denominator))
                           * sympy.Mul(*[idx[g] ** k for g, k in m]) for m, c in p.terms.items()])

    from sympy.integrals.rationaltools import ratint
    res = ratint(to_sym(A.num) / to_sym(A.den), idx[w])
    if res.has(sympy.log, sympy.atan, sympy.RootSum):
        raise NotADivergence("the antiderivative is not a rational function")
    num, den = sympy.fraction(sympy.cancel(sympy.together(res)))
    back = {s: g for g, s in idx.items()}

    def from_sym(e):
        p = sympy.Poly(e, *syms, domain="QQ")
        terms = {}
        for exps, c in p.terms():
            m = tuple(sorted((back[s], k) for s, k in zip(syms, exps) if k))
            terms[m] = mpq(int(c.p), int(c.q))
        return Poly(terms)

    return Expression(ctx, from_sym(num), from_sym(den))


def antiderivative(f: Expression, var) -> Expression:
    """F with D_var F = f, by peeling the highest derivative of each chain.

    Other independent variables act as parameters.  Raises NotADivergence
    if no such F exists in the supported function class.
    """
    ctx = f.ctx
    i = ctx.resolve_var(var)
    if any(g[0] == COMPOSITE for g in f.generators()):
        raise NonPolynomialInput("composite functions are not supported here")
    result = _zero(ctx)
    rem = f
    for _ in range(10000):
        if rem.is_zero():
            return result
        cands = _peel_candidates(rem, i)
        if not cands:
            part = _integrate_pure(rem, i)
            result = result + part
            if (part.total_derivative(i) - rem).is_zero():
                return result
            raise NotADivergence("remainder is not a total derivative")
        g = max(cands, key=lambda h: (h[2], h))
        A = rem.diff(g)
        if not A.diff(g).is_zero():
            raise NotADivergence("not a total derivative: nonlinear in the top derivative")
        w = _lower(g, i, ctx)
        phi = _integrate_in_gen(A, w)
        result = result + phi
        new = rem - phi.total_derivative(i)
        if g in new.generators():
            raise NotADivergence("not a total derivative")
        rem = new
    raise RuntimeError("peeling did not terminate")


def total_antiderivative_1d(f: Expression) -> Expression:
    ctx = f.ctx
    if ctx.n != 1:
        raise ValueError("needs a single independent variable")
    if not is_total_divergence(f):
        raise NotADivergence("the Euler operator does not annihilate the input")
    F = antiderivative(f, 0)
    return _drop_constant(F)


def _drop_constant(F: Expression) -> Expression:
    if F.den.is_one() and F.num.const_value():
        return F - F.num.const_value()
    return F


def _integrate_pure(f: Expression, i: int) -> Expression:
    """Antiderivative in x_i of an expression free of x_i-chains."""
    ctx = f.ctx
    dep = [g for g in f.generators() if _depends_on_var(g, i, ctx)]
    if not dep:
        return f * Expression.from_gen(ctx, (VAR, i))
    if any(g[0] in (JET, COMPOSITE) for g in dep):
        raise NotADivergence("remaining jet dependence cannot be integrated")
    if any(g[0] == FUNC for g in dep):
        raise NotADivergence("cannot integrate an arbitrary function")
    if any(_depends_on_var(g, i, ctx) for g in f.den.gens()):
        if any(g[0] == KERNEL for g in dep):
            raise NotADivergence("unsupported transcendental integrand")
        return _ratint(f, (VAR, i))
    pred = lambda g: _depends_on_var(g, i, ctx)
    out = Poly()
    for m, coeff in f.num.collect(pred).items():
        out = out + _integrate_kernel_monomials(ctx, i, m) * coeff
    return Expression(ctx, out, f.den)


def _integrate_kernel_monomials(ctx, i, m) -> Poly:
    """Antiderivative of a monomial in x_i, cos, sin, exp of x_i, inside the
    finite D-stable span it generates; solved by exact linear algebra."""
    d = dict(m)
    xg, cg, sg, eg = (VAR, i), (KERNEL, 0, i), (KERNEL, 1, i), (KERNEL, 2, i)
    n = d.get(xg, 0)
    J = d.get(cg, 0) + d.get(sg, 0)
    mexp = d.get(eg, 0)
    trig = [(b, 0) for b in range(J + 1)] + [(b, 1) for b in range(J)]
    basis = []
    for a in range(n + 2):
        for b, s in trig:
            basis.append((a, b, s))

    def mono(a, b, s):
        parts = [(xg, a), (cg, b), (sg, s), (eg, mexp)]
        return tuple(sorted((g, k) for g, k in parts if k))

    dgen = {xg: Poly.const(1), cg: -Poly.gen(sg), sg: Poly.gen(cg), eg: Poly.gen(eg)}
    images = []
    for a, b, s in basis:
        p = Poly.monomial(mono(a, b, s)).derivation(lambda g: dgen.get(g)).reduce_trig()
        images.append(p)
    target = Poly.monomial(m)
    rows = sorted({mm for p in images for mm in p.terms} | set(target.terms))
    # skip the constant basis element so the integration constant is zero
    active = [j for j, bb in enumerate(basis) if not (mexp == 0 and bb == (0, 0, 0))]
    mat = [[images[j].terms.get(r, mpq(0)) for j in active] + [target.terms.get(r, mpq(0))] for r in rows]
    sol = _solve(mat, len(active))
    if sol is None:
        raise NotADivergence("no antiderivative in the kernel span")
    out = Poly()
    for j, v in zip(active, sol):
        if v:
            out = out + Poly.monomial(mono(*basis[j]), v)
    return out


def _solve(mat, ncols):
    """Solve an augmented system over Q; free variables are set to zero."""
    rows = [list(r) for r in mat]
    piv_cols = []
    r = 0
    for c in range(ncols):
        p = next((k for k in range(r, len(rows)) if rows[k][c]), None)
        if p is None:
            continue
        rows[r], rows[p] = rows[p], rows[r]
        inv = 1 / rows[r][c]
        rows[r] = [v * inv for v in rows[r]]
        for k in range(len(rows)):
            if k != r and rows[k][c]:
                fac = rows[k][c]
                rows[k] = [a - fac * b for a, b in zip(rows[k], rows[r])]
        piv_cols.append(c)
        r += 1
    for k in range(r, len(rows)):
        if rows[k][ncols]:
            return None
    sol = [mpq(0)] * ncols
    for k, c in enumerate(piv_cols):
        sol[c] = rows[k][ncols]
    return sol


# -- horizontal decomposition ---------------------------------------------------------------

def horizontal_decompose(f: Expression, vars) -> tuple:
    """Components F with sum_i D_i F^i = f over the listed variables.

    Built with the polynomial homotopy operator of the horizontal complex;
    other variables are parameters.  The result is re-verified.
    """
    ctx = f.ctx
    hv = tuple(ctx.resolve_var(v) for v in ([vars] if isinstance(vars, (str, int)) else vars))
    if not hv:
        raise ValueError("need at least one variable")
    if f.is_zero():
        return tuple(_zero(ctx) for _ in hv)
    gens = f.generators()
    if any(g[0] == COMPOSITE for g in gens):
        raise NonPolynomialInput("composite functions are not supported here")
    if any(g[0] == JET for g in f.den.gens()):
        raise NonPolynomialInput("horizontal_decompose needs polynomial dependence on jets")
    param = tuple(j for j in range(ctx.n) if j not in hv)
    for a in range(len(ctx.dependent)):
        keys = {tuple(jet_alpha(g)[j] for j in param) for g in gens if g[0] == JET and g[1] == a}
        for k in keys:
            if not restricted_euler(f, param, k, a).is_zero() if param else not euler(f, a).is_zero():
                raise NotADivergence("obstruction: restricted Euler operator does not vanish")
    by_degree: dict = {}
    for m, c in f.num.terms.items():
        d = sum(k for g, k in m if g[0] == JET)
        by_degree.setdefault(d, {})[m] = c
    comps = [_zero(ctx) for _ in hv]
    for d, terms in sorted(by_degree.items()):
        fd = Expression(ctx, Poly(terms), f.den)
        if d == 0:
            comps[0] = comps[0] + _integrate_pure(fd, hv[0])
            continue
        for pos, k in enumerate(hv):
            comps[pos] = comps[pos] + _homotopy_component(fd, hv, param, k) * mpq(1, d)
    check = _zero(ctx)
    for pos, k in enumerate(hv):
        check = check + comps[pos].total_derivative(k)
    if not (check - f).is_zero():
        raise NotADivergence("decomposition failed verification")
    return tuple(comps)


def _homotopy_component(f: Expression, hv, param, k) -> Expression:
    ctx = f.ctx
    n = ctx.n
    out = _zero(ctx)
    jets = f.jet_generators()
    seen = set()
    for g in jets:
        alpha = jet_alpha(g)
        gamma = tuple(alpha[j] if j in param else 0 for j in range(n))
        seen.add((g[1], gamma))
    for a, gamma in sorted(seen):
        # horizontal parts I of jets u^a_{gamma + I + delta_k}
        ups = {}
        for g in jets:
            alpha = jet_alpha(g)
            if g[1] != a or tuple(alpha[j] if j in param else 0 for j in range(n)) != gamma:
                continue
            if alpha[k] == 0:
                continue
            I = tuple(0 if j in param else alpha[j] for j in range(n))
            I = list(I)
            I[k] -= 1
            for J in _below(I):
                ups[tuple(J)] = True
        if not ups:
            continue
        ua = Expression.from_gen(ctx, jet_gen(a, gamma))
        for I in sorted(ups):
            Ik = list(I)
            Ik[k] += 1
            e = _higher_euler_restricted(f, a, gamma, tuple(Ik), param)
            if e.is_zero():
                continue
            hI = sum(I[j] for j in hv)
            w = mpq(I[k] + 1, hI + 1)
            out = out + total_derivative_multi(ua * e, I) * w
    return out


def _higher_euler_restricted(f, a, gamma, I, param):
    """Higher Euler operator over horizontal variables for jets with fixed
    parameter part gamma."""
    ctx = f.ctx
    n = ctx.n
    terms = {}
    for g in f.jet_generators():
        alpha = jet_alpha(g)
        if g[1] != a or tuple(alpha[j] if j in param else 0 for j in range(n)) != gamma:
            continue
        beta = tuple(0 if j in param else alpha[j] for j in range(n))
        if all(b >= c for b, c in zip(beta, I)):
            dd = f.diff(g)
            if dd.is_zero():
                continue
            c = multi_binomial(beta, I)
            terms[tuple(b - c_ for b, c_ in zip(beta, I))] = dd * c
    hv = tuple(j for j in range(n) if j not in param)
    out = alternating_sum(terms, n, hv)
    return _zero(ctx) if out is None else out
