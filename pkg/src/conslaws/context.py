"""Jet-space declarations and the generator symbols of the expression kernel.

A :class:`JetContext` fixes the independent variables, the unknowns, the
arbitrary functions and the transcendental kernels.  Every
:class:`~conslaws.expr.Expression` is a rational function in *generators*,
which are plain tuples whose natural ordering is the canonical generator
order::

    (0, i)                          independent variable x_i
    (1, a, |alpha|, -alpha)         jet variable u^a_alpha
    (2, name, |beta|, -beta)        derivative d^beta h of an arbitrary function
    (3, name, k, text, omega)       k-th derivative of h composed with omega
    (4, tag, i)                     kernel cos/sin/exp of x_i (tag 0/1/2)

Negated multi-indices make ``u_t`` sort before ``u_x`` for contexts
declared as ``vars t x``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable

BUILTINS = frozenset({"sin", "cos", "exp", "der"})
KERNEL_TAGS = ("cos", "sin", "exp")

VAR, JET, FUNC, COMPOSITE, KERNEL = range(5)


class MultiIndex(tuple):
    """Exponent tuple ``(alpha_1, ..., alpha_n)`` of a partial derivative."""

    __slots__ = ()

    def __new__(cls, exponents: Iterable[int] = ()):
        exps = tuple(int(e) for e in exponents)
        if any(e < 0 for e in exps):
            raise ValueError(f"negative multi-index entry in {exps}")
        return super().__new__(cls, exps)

    @classmethod
    def zero(cls, n: int) -> "MultiIndex":
        return cls((0,) * n)

    @classmethod
    def unit(cls, n: int, i: int, k: int = 1) -> "MultiIndex":
        exps = [0] * n
        exps[i] = k
        return cls(exps)

    @property
    def order(self) -> int:
        return sum(self)

    def __add__(self, other):
        return MultiIndex(a + b for a, b in zip(self, other))

    def __sub__(self, other):
        return MultiIndex(a - b for a, b in zip(self, other))

    def dominates(self, other) -> bool:
        """True if ``self >= other`` componentwise."""
        return all(a >= b for a, b in zip(self, other))

    def __repr__(self):
        return f"MultiIndex({tuple(self)})"


@dataclass(frozen=True)
class JetContext:
    """Declaration of the jet space everything else is interpreted in.

    ``arbitrary_functions`` is a tuple of ``(name, args)`` pairs, ``args``
    being names of independent variables; an empty ``args`` declares a free
    constant.  ``kernels`` holds ``(tag, variable)`` pairs; by default every
    independent variable gets ``cos``, ``sin`` and ``exp``.
    """

    independent: tuple[str, ...]
    dependent: tuple[str, ...]
    arbitrary_functions: tuple[tuple[str, tuple[str, ...]], ...] = ()
    kernels: frozenset = field(default=None)

    def __post_init__(self):
        object.__setattr__(self, "independent", tuple(self.independent))
        object.__setattr__(self, "dependent", tuple(self.dependent))
        funcs = tuple((name, tuple(args)) for name, args in self.arbitrary_functions)
        object.__setattr__(self, "arbitrary_functions", funcs)
        if self.kernels is None:
            kernels = frozenset((tag, x) for x in self.independent for tag in KERNEL_TAGS)
        else:
            kernels = frozenset((str(tag), str(x)) for tag, x in self.kernels)
        object.__setattr__(self, "kernels", kernels)
        self._validate()

    def _validate(self):
        names = list(self.independent) + list(self.dependent) + [f for f, _ in self.arbitrary_functions]
        if len(set(names)) != len(names):
            raise ValueError(f"names must be pairwise distinct: {names}")
        for name in names:
            if name in BUILTINS:
                raise ValueError(f"{name!r} is reserved")
            if not name.isidentifier():
                raise ValueError(f"{name!r} is not an identifier")
        for name, args in self.arbitrary_functions:
            for a in args:
                if a not in self.independent:
                    raise ValueError(f"argument {a!r} of {name} is not an independent variable")
            if len(set(args)) != len(args):
                raise ValueError(f"repeated argument in {name}{args}")
        for tag, x in self.kernels:
            if tag not in KERNEL_TAGS:
                raise ValueError(f"unknown kernel {tag!r}")
            if x not in self.independent:
                raise ValueError(f"kernel {tag}({x}) over an undeclared variable")
        for tag, x in self.kernels:
            if tag == "sin" and ("cos", x) not in self.kernels:
                raise ValueError(f"sin({x}) declared without cos({x})")

    # -- lookups ---------------------------------------------------------
    @property
    def n(self) -> int:
        return len(self.independent)

    def var_index(self, name: str) -> int:
        try:
            return self.independent.index(name)
        except ValueError:
            raise KeyError(f"unknown independent variable {name!r}") from None

    def dep_index(self, name: str) -> int:
        try:
            return self.dependent.index(name)
        except ValueError:
            raise KeyError(f"unknown dependent variable {name!r}") from None

    def function_args(self, name: str) -> tuple[str, ...]:
        for f, args in self.arbitrary_functions:
            if f == name:
                return args
        raise KeyError(f"unknown arbitrary function {name!r}")

    def has_function(self, name: str) -> bool:
        return any(f == name for f, _ in self.arbitrary_functions)

    def resolve_var(self, v) -> int:
        """Accept a variable name or an index."""
        if isinstance(v, str):
            return self.var_index(v)
        i = int(v)
        if not 0 <= i < self.n:
            raise KeyError(f"independent variable index {i} out of range")
        return i

    def with_functions(self, *funcs: tuple[str, Iterable[str]]) -> "JetContext":
        """A copy of this context with extra arbitrary functions declared."""
        extra = tuple((name, tuple(args)) for name, args in funcs if not self.has_function(name))
        return JetContext(self.independent, self.dependent,
                          self.arbitrary_functions + extra, self.kernels)

    def extends(self, other: "JetContext") -> bool:
        """True if every declaration of ``other`` is also made here."""
        return (self.independent == other.independent
                and self.dependent == other.dependent
                and set(other.arbitrary_functions) <= set(self.arbitrary_functions)
                and other.kernels <= self.kernels)

    def header(self) -> str:
        parts = [f"vars {' '.join(self.independent)}", f"unknowns {' '.join(self.dependent)}"]
        if self.arbitrary_functions:
            parts.append("funcs " + " ".join(f"{f}({','.join(a)})" for f, a in self.arbitrary_functions))
        default = {(tag, x) for x in self.independent for tag in KERNEL_TAGS}
        if set(self.kernels) != default:
            ks = sorted(self.kernels, key=lambda k: (self.independent.index(k[1]), KERNEL_TAGS.index(k[0])))
            parts.append("kernels " + " ".join(f"{t}({x})" for t, x in ks))
        return "; ".join(parts) + ";"


# -- generator constructors and accessors ---------------------------------

def var_gen(i: int) -> tuple:
    return (VAR, i)


def jet_gen(a: int, alpha) -> tuple:
    alpha = tuple(alpha)
    return (JET, a, sum(alpha), tuple(-k for k in alpha))


def jet_alpha(gen) -> MultiIndex:
    return MultiIndex(-k for k in gen[3])


def func_gen(name: str, beta) -> tuple:
    beta = tuple(beta)
    return (FUNC, name, sum(beta), tuple(-k for k in beta))


def func_beta(gen) -> MultiIndex:
    return MultiIndex(-k for k in gen[3])


def kernel_gen(tag: str, i: int) -> tuple:
    return (KERNEL, KERNEL_TAGS.index(tag), i)


def composite_gen(name: str, k: int, omega) -> tuple:
    return (COMPOSITE, name, k, omega.to_text(), omega)


def is_sin(gen) -> bool:
    return gen[0] == KERNEL and gen[1] == 1


def cos_of(sin_gen) -> tuple:
    return (KERNEL, 0, sin_gen[2])
