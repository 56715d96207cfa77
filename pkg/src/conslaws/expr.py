"""Canonical exact rational differential functions.

An :class:`Expression` is ``num / den`` with ``num``, ``den`` sparse
polynomials over Q in the generators of a :class:`JetContext`.  The normal
form is

* ``gcd(num, den) == 1`` and ``den`` has leading coefficient 1,
* ``den`` contains no ``sin`` kernel (denominators are rationalized with
  the conjugate ``p - q sin``),
* every ``sin`` kernel appears with degree <= 1 (``sin^2 = 1 - cos^2``).

With this normal form two expressions are equal iff their numerators and
denominators are equal, and an expression is zero iff its numerator is.
"""

from __future__ import annotations

from numbers import Rational

from gmpy2 import mpq

from .context import (COMPOSITE, FUNC, JET, KERNEL, VAR, JetContext, composite_gen, func_beta,
                      func_gen, is_sin, jet_alpha, jet_gen, kernel_gen, var_gen)
from .poly import Poly, cofactors, gcd_cofactors, mono_key, monomial_gcd, to_mpq

NEG_INF = float("-inf")


class ContextMismatch(ValueError):
    pass


_MPQ = type(mpq())


def _is_scalar(x) -> bool:
    return isinstance(x, (int, Rational, _MPQ)) and not isinstance(x, bool)


def _rationalize_sin(num: Poly, den: Poly) -> tuple:
    for g in sorted(den.gens()):
        if not is_sin(g):
            continue
        parts = den.coefficients_in(g)
        p = parts.get(0, Poly())
        q = parts.get(1, Poly())
        conj = p - q * Poly.gen(g)
        num = (num * conj).reduce_trig()
        den = (den * conj).reduce_trig()
    return num, den


def _normalize(num: Poly, den: Poly) -> tuple:
    if den.is_zero():
        raise ZeroDivisionError("zero denominator")
    if num.is_zero():
        return Poly(), ONE
    num = num.reduce_trig()
    if den.is_const():
        c = den.const_value()
        return (num if c == 1 else num.scale(1 / c)), ONE
    den = den.reduce_trig()
    if any(is_sin(g) for g in den.gens()):
        num, den = _rationalize_sin(num, den)
        if den.is_const():
            return num.scale(1 / den.const_value()), ONE
    if len(den.terms) == 1:
        (m, c), = den.terms.items()
        g = monomial_gcd([m] + list(num.terms))
        if g:
            num = num.mono_divide(g)
            m = tuple(ge for ge in den.mono_divide(g).terms)[0]
        return num.scale(1 / c), (Poly.monomial(m) if m else ONE)
    if num.is_const() and len(num.terms) == 1:
        pass
    else:
        num, den = cofactors(num, den)
    if den.is_const():
        return num.scale(1 / den.const_value()), ONE
    _, lc = den.leading()
    if lc != 1:
        num, den = num.scale(1 / lc), den.scale(1 / lc)
    return num, den


ONE = Poly.const(1)


def _quotient_rule(ctx, n: Poly, d: Poly, dn: Poly, dd: Poly) -> "Expression":
    """Derivative of the reduced fraction n/d under a derivation.

    With g = gcd(d, dd) the candidate (dn*(d/g) - n*(dd/g)) / (d*(d/g)) can
    only share factors with g: an irreducible factor p of d with p not
    dividing its own derivative appears in g once less than in d, and then
    cannot divide the numerator.  So one gcd against g replaces the gcd
    against d^2.
    """
    if not _trig_free(n, d, dn, dd):
        return Expression(ctx, dn * d - n * dd, d * d)
    g, dq, ddq = gcd_cofactors(d, dd)
    num = (dn * dq - n * ddq).reduce_trig()
    if num.is_zero():
        return Expression(ctx, Poly(), ONE, normalized=True)
    if g.is_const():
        den = d * dq
    else:
        _, num, r = gcd_cofactors(num, g)
        den = (r * dq * dq).reduce_trig()
    return _finish(ctx, num, den)


def _trig_free(*polys) -> bool:
    """No cos/sin generator: the polynomial ring is then a UFD."""
    return not any(g[0] == KERNEL and g[1] < 2 for p in polys for g in p.gens())


def _finish(ctx, num: Poly, den: Poly) -> "Expression":
    """Wrap an already reduced fraction, making the denominator monic."""
    if num.is_zero():
        return Expression(ctx, Poly(), ONE, normalized=True)
    if den.is_const():
        c = den.const_value()
        return Expression(ctx, num if c == 1 else num.scale(1 / c), ONE, normalized=True)
    _, lc = den.leading()
    if lc != 1:
        num, den = num.scale(1 / lc), den.scale(1 / lc)
    return Expression(ctx, num, den, normalized=True)


class Expression:
    """An element of the field of rational differential functions."""

    __slots__ = ("ctx", "num", "den", "_hash")

    def __init__(self, ctx: JetContext, num: Poly, den: Poly = ONE, *, normalized: bool = False):
        if not normalized:
            num, den = _normalize(num, den)
        self.ctx = ctx
        self.num = num
        self.den = den
        self._hash = None

    # -- construction -----------------------------------------------------
    @classmethod
    def const(cls, ctx: JetContext, c) -> "Expression":
        return cls(ctx, Poly.const(c), ONE, normalized=True)

    @classmethod
    def from_gen(cls, ctx: JetContext, g) -> "Expression":
        return cls(ctx, Poly.gen(g), ONE, normalized=True)

    def _lift(self, other) -> tuple:
        if isinstance(other, Expression):
            if other.ctx is self.ctx or other.ctx == self.ctx:
                return self.ctx, other
            if self.ctx.extends(other.ctx):
                return self.ctx, other
            if other.ctx.extends(self.ctx):
                return other.ctx, other
            raise ContextMismatch("expressions live in different jet contexts")
        if _is_scalar(other):
            return self.ctx, Expression.const(self.ctx, other)
        return None, None

    def lift(self, ctx: JetContext) -> "Expression":
        if not ctx.extends(self.ctx):
            raise ContextMismatch("target context does not extend this one")
        return Expression(ctx, self.num, self.den, normalized=True)

    # -- predicates -------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.num.terms

    def is_polynomial(self) -> bool:
        return self.den.is_one()

    def is_const(self) -> bool:
        return self.num.is_const() and self.den.is_one()

    def const_value(self) -> mpq:
        if not self.is_const():
            raise ValueError("not a constant")
        return self.num.const_value()

    def generators(self) -> set:
        return self.num.gens() | self.den.gens()

    def jet_generators(self) -> set:
        """Jet variables the expression depends on, including through composites."""
        out = set()
        for g in self.generators():
            if g[0] == JET:
                out.add(g)
            elif g[0] == COMPOSITE:
                out |= g[4].jet_generators()
        return out

    def depends_on(self, g) -> bool:
        if g in self.generators():
            return True
        if g[0] == JET:
            return any(h[0] == COMPOSITE and h[4].depends_on(g) for h in self.generators())
        return False

    # -- arithmetic ---------------------------------------------------------
    def __add__(self, other):
        ctx, other = self._lift(other)
        if other is None:
            return NotImplemented
        if self.den.is_one() and other.den.is_one():
            return Expression(ctx, self.num + other.num, ONE, normalized=True)
        if self.den == other.den:
            return Expression(ctx, self.num + other.num, self.den)
        a, b, c, d = self.num, self.den, other.num, other.den
        if _trig_free(a, b, c, d):
            # Henrici: only gcds of the pieces are needed
            if b.is_one():
                return _finish(ctx, a * d + c, d)
            if d.is_one():
                return _finish(ctx, c * b + a, b)
            g, bq, dq = gcd_cofactors(b, d)
            if g.is_const():
                return _finish(ctx, a * d + c * b, b * d)
            t = a * dq + c * bq
            g2, tq, gq = gcd_cofactors(t, g)
            return _finish(ctx, tq, bq * dq * gq)
        return Expression(ctx, a * d + c * b, b * d)

    __radd__ = __add__

    def __neg__(self):
        return Expression(self.ctx, -self.num, self.den, normalized=True)

    def __sub__(self, other):
        ctx, other = self._lift(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        ctx, other = self._lift(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        ctx, other = self._lift(other)
        if other is None:
            return NotImplemented
        if self.den.is_one() and other.den.is_one():
            return Expression(ctx, (self.num * other.num).reduce_trig(), ONE, normalized=True)
        a, b, c, d = self.num, self.den, other.num, other.den
        if _trig_free(a, b, c, d):
            if not d.is_one():
                _, a, d = gcd_cofactors(a, d)
            if not b.is_one():
                _, c, b = gcd_cofactors(c, b)
            return _finish(ctx, a * c, b * d)
        return Expression(ctx, a * c, b * d)

    __rmul__ = __mul__

    def __truediv__(self, other):
        ctx, other = self._lift(other)
        if other is None:
            return NotImplemented
        if other.is_zero():
            raise ZeroDivisionError("division by the zero expression")
        if other.is_const():
            return Expression(ctx, self.num.scale(1 / other.num.const_value()), self.den, normalized=True)
        return Expression(ctx, self.num * other.den, self.den * other.num)

    def __rtruediv__(self, other):
        ctx, other = self._lift(other)
        if other is None:
            return NotImplemented
        return other / self

    def __pow__(self, k):
        if not isinstance(k, int):
            raise TypeError("only integer powers are supported")
        if k < 0:
            if self.is_zero():
                raise ZeroDivisionError("negative power of zero")
            return Expression(self.ctx, self.den ** (-k), self.num ** (-k))
        if self.den.is_one():
            out = ONE if k == 0 else self.num
            for _ in range(k - 1):
                out = (out * self.num).reduce_trig()
            return Expression(self.ctx, out, ONE, normalized=True)
        return Expression(self.ctx, self.num ** k, self.den ** k)

    # -- equality -----------------------------------------------------------
    def __eq__(self, other):
        if isinstance(other, Expression):
            return (self.ctx.independent == other.ctx.independent
                    and self.ctx.dependent == other.ctx.dependent
                    and self.num == other.num and self.den == other.den)
        if _is_scalar(other):
            return self.den.is_one() and self.num == Poly.const(other)
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.num, self.den))
        return self._hash

    # -- calculus -------------------------------------------------------------
    def diff(self, g) -> "Expression":
        """Partial derivative with respect to a generator (chain rule through composites)."""
        dn = self._poly_diff(self.num, g)
        if self.den.is_one():
            return Expression(self.ctx, dn.reduce_trig(), ONE, normalized=True)
        dd = self._poly_diff(self.den, g)
        if dd.is_zero():
            return Expression(self.ctx, dn, self.den)
        return _quotient_rule(self.ctx, self.num, self.den, dn.reduce_trig(), dd.reduce_trig())

    @staticmethod
    def _poly_diff(p: Poly, g) -> Poly:
        out = p.diff(g)
        if g[0] == JET:
            for h in p.gens():
                if h[0] == COMPOSITE:
                    inner = h[4].diff(g)
                    if not inner.is_zero():
                        outer = Poly.gen(composite_gen(h[1], h[2] + 1, h[4]))
                        out = out + p.diff(h) * outer * inner.num
        return out

    def total_derivative(self, i) -> "Expression":
        i = self.ctx.resolve_var(i)
        dgen = _gen_derivative_fn(self.ctx, i)
        dn = self.num.derivation(dgen).reduce_trig()
        if self.den.is_one():
            return Expression(self.ctx, dn, ONE, normalized=True)
        dd = self.den.derivation(dgen)
        if dd.is_zero():
            return Expression(self.ctx, dn, self.den)
        return _quotient_rule(self.ctx, self.num, self.den, dn, dd)

    def order(self):
        """Highest derivative order of the unknowns, or -inf."""
        gens = self.jet_generators()
        return max((g[2] for g in gens), default=NEG_INF)

    def substitute(self, bindings: dict) -> "Expression":
        return substitute(self, bindings)

    # -- text -------------------------------------------------------------------
    def to_text(self) -> str:
        from .syntax import format_expression
        return format_expression(self)

    def __str__(self):
        return self.to_text()

    def __repr__(self):
        return f"Expression({self.to_text()!r})"


def _gen_derivative_fn(ctx: JetContext, i: int):
    cache = ctx.__dict__.setdefault("_dcache", {})
    key = i
    table = cache.setdefault(key, {})

    def dgen(g):
        v = table.get(g, False)
        if v is not False:
            return v
        kind = g[0]
        if kind == VAR:
            v = Poly.const(1) if g[1] == i else None
        elif kind == JET:
            alpha = list(jet_alpha(g))
            alpha[i] += 1
            v = Poly.gen(jet_gen(g[1], alpha))
        elif kind == FUNC:
            args = ctx.function_args(g[1])
            name = ctx.independent[i]
            if name in args:
                beta = list(func_beta(g))
                beta[args.index(name)] += 1
                v = Poly.gen(func_gen(g[1], beta))
            else:
                v = None
        elif kind == KERNEL:
            if g[2] != i:
                v = None
            elif g[1] == 0:
                v = -Poly.gen(kernel_gen("sin", i))
            elif g[1] == 1:
                v = Poly.gen(kernel_gen("cos", i))
            else:
                v = Poly.gen(g)
        else:
            omega = g[4]
            d = omega.total_derivative(i)
            v = Poly.gen(composite_gen(g[1], g[2] + 1, omega)) * d.num if not d.is_zero() else None
        if kind != COMPOSITE:
            table[g] = v
        return v

    return dgen


# -- convenience constructors ------------------------------------------------

def const(ctx: JetContext, c) -> Expression:
    return Expression.const(ctx, c)


def var(ctx: JetContext, name) -> Expression:
    return Expression.from_gen(ctx, var_gen(ctx.resolve_var(name)))


def jet(ctx: JetContext, dep, alpha=None) -> Expression:
    a = ctx.dep_index(dep) if isinstance(dep, str) else int(dep)
    if alpha is None:
        alpha = (0,) * ctx.n
    alpha = tuple(alpha)
    if len(alpha) != ctx.n:
        raise ValueError("multi-index length differs from the number of independent variables")
    return Expression.from_gen(ctx, jet_gen(a, alpha))


def func(ctx: JetContext, name: str, beta=None) -> Expression:
    args = ctx.function_args(name)
    if beta is None:
        beta = (0,) * len(args)
    return Expression.from_gen(ctx, func_gen(name, tuple(beta)))


def kernel(ctx: JetContext, tag: str, x) -> Expression:
    i = ctx.resolve_var(x)
    if (tag, ctx.independent[i]) not in ctx.kernels:
        raise KeyError(f"kernel {tag}({ctx.independent[i]}) is not declared")
    return Expression.from_gen(ctx, kernel_gen(tag, i))


def compose(name: str, omega: Expression, k: int = 0) -> Expression:
    """The k-th derivative of a symbolic unary function ``name`` evaluated at omega."""
    if not omega.is_polynomial():
        raise ValueError("composite arguments must be polynomial differential functions")
    if omega.is_const():
        raise ValueError("composite argument must be nonconstant")
    ctx = omega.ctx
    if name in ctx.independent or name in ctx.dependent or ctx.has_function(name):
        raise ValueError(f"{name!r} clashes with a declared name")
    return Expression.from_gen(ctx, composite_gen(name, k, omega))


# -- public operations -------------------------------------------------

def is_zero(e: Expression) -> bool:
    return e.is_zero()


def order(e: Expression):
    return e.order()


def arith(op: str, a: Expression, b):
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    if op in ("pow", "pow-int"):
        return a ** b
    raise ValueError(f"unknown operation {op!r}")


def _gen_key(key, ctx):
    if isinstance(key, Expression):
        if not key.den.is_one() or len(key.num.terms) != 1:
            raise ValueError("substitution keys must be single generators")
        (m, c), = key.num.terms.items()
        if c != 1 or len(m) != 1 or m[0][1] != 1:
            raise ValueError("substitution keys must be single generators")
        return m[0][0]
    if isinstance(key, str):
        from .syntax import parse
        return _gen_key(parse(key, ctx), ctx)
    return key


def substitute(e: Expression, bindings: dict) -> Expression:
    """Simultaneously replace generators by expressions."""
    ctx = e.ctx
    table = {}
    for k, v in bindings.items():
        g = _gen_key(k, ctx)
        if not isinstance(v, Expression):
            v = Expression.const(ctx, v)
        table[g] = v
    if not table:
        return e

    def value(g):
        if g in table:
            return table[g]
        if g[0] == COMPOSITE:
            new_omega = substitute(g[4], bindings)
            if new_omega != g[4]:
                return compose(g[1], new_omega, g[2])
        return Expression.from_gen(ctx, g)

    def ev(p: Poly) -> Expression:
        cache = {}
        total = Expression.const(ctx, 0)
        for m, c in p.sorted_terms():
            term = Expression.const(ctx, c)
            for g, k in m:
                if g not in cache:
                    cache[g] = value(g)
                term = term * cache[g] ** k
            total = total + term
        return total

    num = ev(e.num)
    den = ev(e.den)
    if den.is_zero():
        raise ZeroDivisionError("substitution makes the denominator vanish")
    return num / den
