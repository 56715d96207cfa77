"""Text form of expressions and jet contexts.

Grammar (precedence low to high)::

    expr    := term (('+' | '-') term)*
    term    := unary (('*' | '/') unary)*
    unary   := ('+' | '-') unary | power
    power   := postfix ('^' unary)?            right associative, integer exponent
    postfix := atom "'"*                        prime = D_t, one-variable contexts only
    atom    := INT | NAME | NAME '(' args ')' | 'der' '(' expr (',' NAME [INT])* ')'
             | '(' expr ')'

Jet variables are written ``u_txx`` (letters in any order) when every
independent variable has a one-letter name, or ``der(u, t, x, x)`` /
``der(u, x, 2)`` in general.  ``der`` of any expression is its total
derivative.
"""

from __future__ import annotations

import re

from gmpy2 import mpq

from .context import COMPOSITE, FUNC, JET, KERNEL, KERNEL_TAGS, VAR, JetContext, func_beta, jet_alpha

_TOKEN = re.compile(r"\s*(?:(?P<num>\d+)|(?P<name>[A-Za-z_][A-Za-z0-9_]*)|(?P<op>\*\*|[-+*/^(),']))")


class ParseError(ValueError):
    """Malformed input; ``position`` is a 0-based character offset."""

    def __init__(self, message: str, position: int | None = None):
        self.message = message
        self.position = position
        where = f" at position {position}" if position is not None else ""
        super().__init__(f"{message}{where}")


class UndeclaredSymbol(ParseError):
    pass


# -- printing -----------------------------------------------------------------

def _suffix_style(ctx: JetContext) -> bool:
    return all(len(x) == 1 for x in ctx.independent) and all("_" not in u for u in ctx.dependent)


def format_generator(ctx: JetContext, g) -> str:
    kind = g[0]
    if kind == VAR:
        return ctx.independent[g[1]]
    if kind == JET:
        name = ctx.dependent[g[1]]
        alpha = jet_alpha(g)
        if not any(alpha):
            return name
        if _suffix_style(ctx):
            return name + "_" + "".join(x * k for x, k in zip(ctx.independent, alpha))
        return f"der({name}, {_var_list(ctx.independent, alpha)})"
    if kind == FUNC:
        args = ctx.function_args(g[1])
        base = f"{g[1]}({','.join(args)})" if args else g[1]
        beta = func_beta(g)
        if not any(beta):
            return base
        return f"der({base}, {_var_list(args, beta)})"
    if kind == KERNEL:
        return f"{KERNEL_TAGS[g[1]]}({ctx.independent[g[2]]})"
    if kind == COMPOSITE:
        base = f"{g[1]}({g[3]})"
        return base if g[2] == 0 else f"der({base}, {g[2]})"
    raise ValueError(f"unknown generator {g!r}")


def _var_list(names, counts) -> str:
    parts = []
    for x, k in zip(names, counts):
        if k == 1:
            parts.append(x)
        elif k > 1:
            parts.append(f"{x}, {k}")
    return ", ".join(parts)


def _format_monomial(ctx, m) -> str:
    return "*".join(format_generator(ctx, g) + (f"^{e}" if e > 1 else "") for g, e in m)


def _format_poly(ctx, p, rational=True) -> str:
    if not p.terms:
        return "0"
    out = []
    for m, c in p.sorted_terms():
        neg = c < 0
        a = -c if neg else c
        if not m:
            body = str(a.numerator) if a.denominator == 1 else f"{a.numerator}/{a.denominator}"
        else:
            body = _format_monomial(ctx, m)
            if a.numerator != 1:
                body = f"{a.numerator}*{body}"
            if a.denominator != 1:
                body = f"{body}/{a.denominator}"
        if not out:
            out.append("-" + body if neg else body)
        else:
            out.append(("- " if neg else "+ ") + body)
    return " ".join(out)


def format_expression(e) -> str:
    """Deterministic canonical text of an Expression."""
    if e.den.is_one():
        return _format_poly(e.ctx, e.num)
    cn = e.num.content_scale()
    cd = e.den.content_scale()
    r = cn / cd
    num = e.num.scale(mpq(r.numerator) / cn)
    den = e.den.scale(mpq(r.denominator) / cd)
    ntext = _format_poly(e.ctx, num)
    dtext = _format_poly(e.ctx, den)
    if len(num.terms) > 1:
        ntext = f"({ntext})"
    return f"{ntext} / ({dtext})"


# -- context headers ------------------------------------------------------------

_FUNC_DECL = re.compile(r"([A-Za-z_][A-Za-z0-9_]*)\s*(?:\(([^)]*)\))?")


def parse_context(text: str) -> JetContext:
    """Parse ``vars t x; unknowns u; funcs h(t) c(); kernels cos(t) sin(t)``."""
    fields = {"vars": None, "unknowns": None, "funcs": [], "kernels": None}
    for clause in text.split(";"):
        clause = clause.strip()
        if not clause:
            continue
        key, _, rest = clause.partition(" ")
        key = key.strip()
        rest = rest.strip()
        if key not in fields:
            raise ParseError(f"unknown context clause {key!r}")
        if key in ("vars", "unknowns"):
            fields[key] = tuple(rest.replace(",", " ").split())
        else:
            items = []
            pos = 0
            while pos < len(rest):
                if rest[pos] in " ,\t":
                    pos += 1
                    continue
                mt = _FUNC_DECL.match(rest, pos)
                if not mt:
                    raise ParseError(f"bad {key} declaration", pos)
                args = tuple(a for a in (mt.group(2) or "").replace(",", " ").split())
                items.append((mt.group(1), args))
                pos = mt.end()
            if key == "kernels":
                for tag, args in items:
                    if len(args) != 1:
                        raise ParseError(f"kernel {tag} takes one variable")
                fields[key] = frozenset((tag, args[0]) for tag, args in items)
            else:
                fields[key] = items
    if not fields["vars"] or not fields["unknowns"]:
        raise ParseError("context needs 'vars' and 'unknowns' clauses")
    try:
        return JetContext(fields["vars"], fields["unknowns"], tuple(fields["funcs"]), fields["kernels"])
    except ValueError as exc:
        raise ParseError(str(exc)) from None


# -- parsing ---------------------------------------------------------------------

def _tokenize(text: str) -> list:
    toks = []
    pos = 0
    text = text.rstrip()
    while pos < len(text):
        mt = _TOKEN.match(text, pos)
        if not mt or mt.end() == pos:
            bad = len(text) - len(text[pos:].lstrip()) if pos < len(text) else pos
            raise ParseError(f"unexpected character {text[bad]!r}", bad)
        start = mt.start(mt.lastgroup)
        kind = mt.lastgroup
        val = mt.group(kind)
        if val == "**":
            val = "^"
        toks.append((kind, val, start))
        pos = mt.end()
    toks.append(("end", None, len(text)))
    return toks


class _Parser:
    def __init__(self, text: str, ctx: JetContext, composites):
        from . import expr as E
        self.E = E
        self.ctx = ctx
        self.toks = _tokenize(text)
        self.i = 0
        self.composites = frozenset(composites)

    # token helpers
    def peek(self, k=0):
        return self.toks[min(self.i + k, len(self.toks) - 1)]

    def take(self):
        t = self.toks[self.i]
        self.i += 1
        return t

    def accept(self, op):
        t = self.peek()
        if t[0] == "op" and t[1] == op:
            self.i += 1
            return True
        return False

    def expect(self, op):
        t = self.peek()
        if not (t[0] == "op" and t[1] == op):
            raise ParseError(f"expected {op!r}", t[2])
        self.i += 1

    # grammar
    def parse(self):
        if self.peek()[0] == "end":
            raise ParseError("empty expression", 0)
        e = self.expr()
        t = self.peek()
        if t[0] != "end":
            raise ParseError(f"unexpected {t[1]!r}", t[2])
        return e

    def expr(self):
        e = self.term()
        while True:
            if self.accept("+"):
                e = e + self.term()
            elif self.accept("-"):
                e = e - self.term()
            else:
                return e

    def term(self):
        e = self.unary()
        while True:
            t = self.peek()
            if self.accept("*"):
                e = e * self.unary()
            elif self.accept("/"):
                d = self.unary()
                if d.is_zero():
                    raise ParseError("division by zero", t[2])
                e = e / d
            else:
                return e

    def unary(self):
        if self.accept("-"):
            return -self.unary()
        if self.accept("+"):
            return self.unary()
        return self.power()

    def power(self):
        base = self.postfix()
        t = self.peek()
        if self.accept("^"):
            ex = self.unary()
            if not ex.is_const() or ex.const_value().denominator != 1:
                raise ParseError("exponent must be an integer", t[2])
            k = int(ex.const_value())
            if k < 0 and base.is_zero():
                raise ParseError("negative power of zero", t[2])
            return base ** k
        return base

    def postfix(self):
        e = self.atom()
        while True:
            t = self.peek()
            if not self.accept("'"):
                return e
            if self.ctx.n != 1:
                raise ParseError("prime notation needs exactly one independent variable", t[2])
            e = e.total_derivative(0)

    def atom(self):
        E, ctx = self.E, self.ctx
        kind, val, pos = self.take()
        if kind == "num":
            return E.const(ctx, int(val))
        if kind == "op":
            if val == "(":
                e = self.expr()
                self.expect(")")
                return e
            raise ParseError(f"unexpected {val!r}", pos)
        if kind == "end":
            raise ParseError("unexpected end of input", pos)
        name = val
        if self.peek()[0] == "op" and self.peek()[1] == "(":
            return self.call(name, pos)
        return self.identifier(name, pos)

    def identifier(self, name, pos):
        E, ctx = self.E, self.ctx
        if name in ctx.independent:
            return E.var(ctx, name)
        if name in ctx.dependent:
            return E.jet(ctx, name)
        if ctx.has_function(name):
            if ctx.function_args(name):
                raise ParseError(f"{name} must be applied to its arguments", pos)
            return E.func(ctx, name)
        if "_" in name and _suffix_style(ctx):
            base, _, suffix = name.rpartition("_")
            if base in ctx.dependent and suffix:
                alpha = [0] * ctx.n
                for ch in suffix:
                    if ch not in ctx.independent:
                        raise UndeclaredSymbol(f"{ch!r} in {name!r} is not an independent variable", pos)
                    alpha[ctx.independent.index(ch)] += 1
                return E.jet(ctx, base, alpha)
        raise UndeclaredSymbol(f"undeclared symbol {name!r}", pos)

    def call(self, name, pos):
        E, ctx = self.E, self.ctx
        self.expect("(")
        if name in KERNEL_TAGS:
            t = self.take()
            if t[0] != "name" or t[1] not in ctx.independent:
                raise UndeclaredSymbol(f"{name} expects an independent variable", t[2])
            self.expect(")")
            if (name, t[1]) not in ctx.kernels:
                raise UndeclaredSymbol(f"kernel {name}({t[1]}) is not declared", pos)
            return E.kernel(ctx, name, t[1])
        if name == "der":
            return self.der(pos)
        if ctx.has_function(name):
            args = []
            while not self.accept(")"):
                if args:
                    self.expect(",")
                t = self.take()
                if t[0] != "name":
                    raise ParseError("expected a variable name", t[2])
                args.append(t[1])
            if tuple(args) != ctx.function_args(name):
                raise ParseError(f"{name} is declared with arguments {ctx.function_args(name)}", pos)
            return E.func(ctx, name)
        if name in self.composites:
            arg = self.expr()
            self.expect(")")
            return E.compose(name, arg)
        raise ParseError(f"unknown function {name!r}", pos)

    def der(self, pos):
        E = self.E
        target = self.expr()
        if self.accept(","):
            t = self.peek()
            if t[0] == "num":
                self.take()
                self.expect(")")
                gens = target.generators()
                if (target.is_polynomial() and len(target.num.terms) == 1 and len(gens) == 1
                        and next(iter(gens))[0] == COMPOSITE):
                    g = next(iter(gens))
                    if target == E.Expression.from_gen(self.ctx, g):
                        return E.compose(g[1], g[4], g[2] + int(t[1]))
                raise ParseError("a bare order only applies to h(argument) terms", t[2])
            self.i -= 1
        while self.accept(","):
            t = self.take()
            if t[0] != "name" or t[1] not in self.ctx.independent:
                raise UndeclaredSymbol("der expects independent variable names", t[2])
            count = 1
            if self.peek()[0] == "op" and self.peek()[1] == "," and self.peek(1)[0] == "num":
                self.take()
                count = int(self.take()[1])
            for _ in range(count):
                target = target.total_derivative(t[1])
        self.expect(")")
        return target


def parse(text: str, ctx: JetContext, composites=()) -> "Expression":
    """Parse ``text`` into a canonical Expression over ``ctx``.

    ``composites`` names symbolic unary functions accepted as ``h(expr)``.
    """
    return _Parser(text, ctx, composites).parse()
