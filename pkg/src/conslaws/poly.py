"""Sparse multivariate polynomials over Q with symbolic generators.

A monomial is a tuple of ``(generator, exponent)`` pairs sorted by
generator; a polynomial maps monomials to nonzero ``mpq`` coefficients.
Multivariate gcds are delegated to sympy's sparse polynomial rings.
"""

from __future__ import annotations

from functools import lru_cache, reduce

import gmpy2
from gmpy2 import mpq
from sympy import symbols
from sympy.polys.domains import ZZ
from sympy.polys.orderings import lex
from sympy.polys.rings import PolyRing

from .context import KERNEL, cos_of, is_sin

ONE_MONO = ()


@lru_cache(maxsize=1 << 18)
def mono_mul(a: tuple, b: tuple) -> tuple:
    if not a:
        return b
    if not b:
        return a
    d = dict(a)
    for g, e in b:
        d[g] = d.get(g, 0) + e
    return tuple(sorted(d.items()))


def mono_key(m: tuple) -> tuple:
    """Sort key: compare the largest generator first."""
    return tuple(reversed(m))


def mono_div(a: tuple, b: tuple) -> tuple:
    d = dict(a)
    for g, e in b:
        r = d[g] - e
        if r < 0:
            raise ArithmeticError("monomial not divisible")
        if r:
            d[g] = r
        else:
            del d[g]
    return tuple(sorted(d.items()))


def to_mpq(c) -> mpq:
    if isinstance(c, type(mpq())):
        return c
    if hasattr(c, "numerator") and hasattr(c, "denominator"):
        return mpq(int(c.numerator), int(c.denominator))
    return mpq(c)


class Poly:
    __slots__ = ("terms",)

    def __init__(self, terms=None):
        self.terms = terms if terms is not None else {}

    # -- constructors ------------------------------------------------------
    @classmethod
    def const(cls, c) -> "Poly":
        c = to_mpq(c)
        return cls({ONE_MONO: c} if c else {})

    @classmethod
    def gen(cls, g, e: int = 1) -> "Poly":
        return cls({((g, e),): mpq(1)})

    @classmethod
    def monomial(cls, m: tuple, c=1) -> "Poly":
        return cls({m: to_mpq(c)})

    # -- predicates --------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def is_const(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and ONE_MONO in self.terms)

    def const_value(self) -> mpq:
        return self.terms.get(ONE_MONO, mpq(0))

    def is_one(self) -> bool:
        return len(self.terms) == 1 and self.terms.get(ONE_MONO) == 1

    def gens(self) -> set:
        out = set()
        for m in self.terms:
            for g, _ in m:
                out.add(g)
        return out

    def degree(self, g) -> int:
        deg = 0
        for m in self.terms:
            for h, e in m:
                if h == g and e > deg:
                    deg = e
        return deg

    def __eq__(self, other):
        return isinstance(other, Poly) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __len__(self):
        return len(self.terms)

    # -- ring operations ---------------------------------------------------
    def __add__(self, other: "Poly") -> "Poly":
        if not other.terms:
            return self
        if not self.terms:
            return other
        out = dict(self.terms)
        for m, c in other.terms.items():
            v = out.get(m)
            if v is None:
                out[m] = c
            else:
                v = v + c
                if v:
                    out[m] = v
                else:
                    del out[m]
        return Poly(out)

    def __neg__(self) -> "Poly":
        return Poly({m: -c for m, c in self.terms.items()})

    def __sub__(self, other: "Poly") -> "Poly":
        return self + (-other)

    def scale(self, c) -> "Poly":
        c = to_mpq(c)
        if not c:
            return Poly()
        if c == 1:
            return self
        return Poly({m: v * c for m, v in self.terms.items()})

    def __mul__(self, other: "Poly") -> "Poly":
        a, b = self.terms, other.terms
        if not a or not b:
            return Poly()
        if len(a) < len(b):
            a, b = b, a
        if len(b) == 1:
            (m2, c2), = b.items()
            if not m2:
                return self.scale(c2) if a is self.terms else other.scale(c2)
            return Poly({mono_mul(m1, m2): c1 * c2 for m1, c1 in a.items()})
        out = {}
        for m1, c1 in a.items():
            for m2, c2 in b.items():
                m = mono_mul(m1, m2)
                v = out.get(m)
                out[m] = c1 * c2 if v is None else v + c1 * c2
        return Poly({m: c for m, c in out.items() if c})

    def __pow__(self, k: int) -> "Poly":
        if k < 0:
            raise ValueError("negative power of a polynomial")
        result = Poly.const(1)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def mono_divide(self, m: tuple) -> "Poly":
        return Poly({mono_div(mm, m): c for mm, c in self.terms.items()})

    # -- calculus ------------------------------------------------------------
    def diff(self, g) -> "Poly":
        out = {}
        for m, c in self.terms.items():
            for idx, (h, e) in enumerate(m):
                if h == g:
                    if e == 1:
                        nm = m[:idx] + m[idx + 1:]
                    else:
                        nm = m[:idx] + ((h, e - 1),) + m[idx + 1:]
                    out[nm] = out.get(nm, 0) + c * e
                    break
        return Poly({m: c for m, c in out.items() if c})

    def derivation(self, dgen) -> "Poly":
        """Apply the derivation determined by ``dgen(g) -> Poly | None``."""
        out = {}
        cache = {}
        for m, c in self.terms.items():
            for idx, (g, e) in enumerate(m):
                dg = cache.get(g, False)
                if dg is False:
                    dg = dgen(g)
                    cache[g] = dg
                if dg is None or not dg.terms:
                    continue
                if e == 1:
                    rest = m[:idx] + m[idx + 1:]
                else:
                    rest = m[:idx] + ((g, e - 1),) + m[idx + 1:]
                ce = c * e
                for m2, c2 in dg.terms.items():
                    nm = mono_mul(rest, m2)
                    v = out.get(nm)
                    out[nm] = ce * c2 if v is None else v + ce * c2
        return Poly({m: c for m, c in out.items() if c})

    # -- structure -------------------------------------------------------------
    def collect(self, pred) -> dict:
        """Split into ``{monomial in gens satisfying pred: coefficient Poly}``."""
        out: dict = {}
        for m, c in self.terms.items():
            key = tuple(ge for ge in m if pred(ge[0]))
            rest = tuple(ge for ge in m if not pred(ge[0]))
            out.setdefault(key, {})[rest] = c
        return {k: Poly(v) for k, v in out.items()}

    def coefficients_in(self, g) -> dict:
        """``{exponent: coefficient Poly}`` with respect to a single generator."""
        out: dict = {}
        for m, c in self.terms.items():
            e = 0
            rest = m
            for idx, (h, k) in enumerate(m):
                if h == g:
                    e = k
                    rest = m[:idx] + m[idx + 1:]
                    break
            out.setdefault(e, {})[rest] = c
        return {k: Poly(v) for k, v in out.items()}

    def leading(self) -> tuple:
        m = max(self.terms, key=mono_key)
        return m, self.terms[m]

    def sorted_terms(self) -> list:
        return sorted(self.terms.items(), key=lambda mc: mono_key(mc[0]))

    def has_high_sin(self) -> bool:
        for m in self.terms:
            for g, e in m:
                if e >= 2 and g[0] == KERNEL and g[1] == 1:
                    return True
        return False

    def reduce_trig(self) -> "Poly":
        """Rewrite sin(x)^2 as 1 - cos(x)^2 until every sin degree is <= 1."""
        if not self.has_high_sin():
            return self
        out = Poly()
        plain = {}
        for m, c in self.terms.items():
            if not any(e >= 2 and is_sin(g) for g, e in m):
                plain[m] = c
                continue
            base = []
            factor = Poly.const(c)
            for g, e in m:
                if is_sin(g) and e >= 2:
                    cg = cos_of(g)
                    factor = factor * (Poly.const(1) - Poly.gen(cg, 2)) ** (e // 2)
                    if e % 2:
                        base.append((g, 1))
                else:
                    base.append((g, e))
            out = out + factor * Poly.monomial(tuple(base))
        return Poly(plain) + out

    def content_scale(self) -> mpq:
        """The rational c with ``self / c`` having coprime integer coefficients."""
        dens = reduce(gmpy2.lcm, (c.denominator for c in self.terms.values()), gmpy2.mpz(1))
        nums = reduce(gmpy2.gcd, (c.numerator for c in self.terms.values()), gmpy2.mpz(0))
        return mpq(nums, dens)


@lru_cache(maxsize=64)
def _ring(n: int) -> PolyRing:
    return PolyRing(symbols(f"g0:{n}"), ZZ, lex)


def _clear(p: Poly) -> tuple:
    """Integer multiple of p and the multiplier."""
    L = reduce(gmpy2.lcm, (c.denominator for c in p.terms.values()), gmpy2.mpz(1))
    return {m: int(c * L) for m, c in p.terms.items()}, L


def cofactors(p: Poly, q: Poly) -> tuple:
    """Return ``(a, b)`` with ``a/b == p/q`` and gcd(a, b) = 1."""
    if p.terms and (len(p.terms) == 1 or len(q.terms) == 1):
        _, a, b = gcd_cofactors(p, q)
        return a, b
    gens = sorted(p.gens() | q.gens())
    idx = {g: i for i, g in enumerate(gens)}
    R = _ring(len(gens))
    n = len(gens)

    def conv(terms):
        out = {}
        for m, c in terms.items():
            v = [0] * n
            for g, e in m:
                v[idx[g]] = e
            out[tuple(v)] = c
        return R.from_dict(out)

    pi, lp = _clear(p)
    qi, lq = _clear(q)
    _, a, b = conv(pi).cofactors(conv(qi))

    def back(el, scale):
        terms = {}
        for v, c in el.items():
            m = tuple((gens[i], e) for i, e in enumerate(v) if e)
            terms[m] = mpq(int(c)) * scale
        return Poly(terms)

    return back(a, mpq(lq)), back(b, mpq(lp))


def _monomial_cofactors(p: Poly, q: Poly) -> tuple:
    """gcd_cofactors when q is a single nonzero term."""
    (m, _), = q.terms.items()
    h = monomial_gcd([m] + list(p.terms)) if p.terms else m
    if not h:
        return Poly.const(1), p, q
    return Poly.monomial(h), p.mono_divide(h), q.mono_divide(h)


def gcd_cofactors(p: Poly, q: Poly) -> tuple:
    """``(h, a, b)`` with p = h*a and q = h*b, h a primitive gcd."""
    if len(q.terms) == 1:
        return _monomial_cofactors(p, q)
    if len(p.terms) == 1:
        h, b, a = _monomial_cofactors(q, p)
        return h, a, b
    return _gcd_cofactors(p, q)


# Wronskian rows repeat the same denominators; Poly values are never mutated
@lru_cache(maxsize=1 << 12)
def _gcd_cofactors(p: Poly, q: Poly) -> tuple:
    gens = sorted(p.gens() | q.gens())
    if not gens:
        return Poly.const(1), p, q
    idx = {g: i for i, g in enumerate(gens)}
    R = _ring(len(gens))
    n = len(gens)

    def conv(terms):
        out = {}
        for m, c in terms.items():
            v = [0] * n
            for g, e in m:
                v[idx[g]] = e
            out[tuple(v)] = c
        return R.from_dict(out)

    def back(el, scale):
        return Poly({tuple((gens[i], e) for i, e in enumerate(v) if e): mpq(int(c)) * scale
                     for v, c in el.items()})

    pi, lp = _clear(p)
    qi, lq = _clear(q)
    h, a, b = conv(pi).cofactors(conv(qi))
    return back(h, mpq(1)), back(a, 1 / mpq(lp)), back(b, 1 / mpq(lq))


def monomial_gcd(monos) -> tuple:
    it = iter(monos)
    g = dict(next(it))
    for m in it:
        d = dict(m)
        for k in list(g):
            e = d.get(k, 0)
            if e < g[k]:
                if e:
                    g[k] = e
                else:
                    del g[k]
        if not g:
            break
    return tuple(sorted(g.items()))
