"""(1+1)-dimensional evolution equations u_t = G with prescribed densities."""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

from .context import jet_alpha, jet_gen
from .expr import Expression
from .calculus import antiderivative, euler, frechet, restricted_euler, NotADivergence
from .ode import ConsistencyError
from .wronskian import ZeroWronskian, darboux_adjoint, wronskian


class DegenerateEvolutionWarning(UserWarning):
    """The constructed right-hand side violates G_{u_r} != 0, r >= 2."""


T, X = 0, 1


def _check_evolution_context(ctx):
    if ctx.n != 2 or len(ctx.dependent) != 1:
        raise ValueError("evolution equations live in a (t, x | u) context")


def has_t_derivatives(f: Expression) -> bool:
    return any(jet_alpha(g)[T] > 0 for g in f.jet_generators())


def _require_no_t(f: Expression, what: str):
    if has_t_derivatives(f):
        raise ValueError(f"{what} contains t-derivatives of the unknown")


def x_order(f: Expression):
    return f.order()


@dataclass(frozen=True)
class EvolutionEquation:
    """u_t = G(t, x, u, u_x, ..., u_r)."""

    G: Expression
    strict: bool = True
    order: object = field(init=False)

    def __post_init__(self):
        _check_evolution_context(self.G.ctx)
        _require_no_t(self.G, "G")
        r = self.G.order()
        object.__setattr__(self, "order", r)
        if self.strict and (r == float("-inf") or r < 2):
            raise ValueError(f"an evolution equation needs order r >= 2, got {r}")

    @property
    def ctx(self):
        return self.G.ctx

    def lhs(self) -> Expression:
        """u_t - G."""
        return Expression.from_gen(self.ctx, jet_gen(0, (1, 0))) - self.G


def partial_t(f: Expression) -> Expression:
    """Explicit t-derivative of a function free of t-derivatives of u."""
    _require_no_t(f, "argument")
    out = f.total_derivative(T)
    for g in f.jet_generators():
        alpha = jet_alpha(g)
        ut = Expression.from_gen(f.ctx, jet_gen(0, (alpha[T] + 1, alpha[X])))
        out = out - ut * f.diff(g)
    return out


def restricted_dt(E: EvolutionEquation, f: Expression) -> Expression:
    """Total t-derivative of f on solutions: f_t + sum (D_x^k G) f_{u_k}."""
    out = partial_t(f)
    dG = [E.G]
    for g in sorted(f.jet_generators(), key=lambda g: jet_alpha(g)[X]):
        k = jet_alpha(g)[X]
        while len(dG) <= k:
            dG.append(dG[-1].total_derivative(X))
        out = out + dG[k] * f.diff(g)
    return out


def characteristic_from_density(rho: Expression) -> Expression:
    _check_evolution_context(rho.ctx)
    _require_no_t(rho, "density")
    return euler(rho, 0)


def is_x_divergence(f: Expression) -> bool:
    """True if f = D_x of something, t being a parameter."""
    keys = {jet_alpha(g)[T] for g in f.jet_generators()}
    return all(restricted_euler(f, T, k, 0).is_zero() for k in keys)


def is_density(E: EvolutionEquation, rho: Expression) -> bool:
    return is_x_divergence(restricted_dt(E, rho))


def verify_conserved_current(E: EvolutionEquation, rho: Expression, sigma: Expression) -> bool:
    _require_no_t(rho, "density")
    _require_no_t(sigma, "flux")
    return (restricted_dt(E, rho) + sigma.total_derivative(X)).is_zero()


def flux_from_density(E: EvolutionEquation, rho: Expression) -> Expression:
    f = restricted_dt(E, rho)
    if not is_x_divergence(f):
        raise NotADivergence("not a density of this equation")
    sigma = -antiderivative(f, X)
    if not verify_conserved_current(E, rho, sigma):
        raise ConsistencyError("flux failed verification")
    return sigma


def _characteristics(rhos):
    lams = [characteristic_from_density(r) for r in rhos]
    ctx = rhos[0].ctx
    if wronskian(lams, X).is_zero():
        raise ZeroWronskian("characteristics are linearly dependent in x")
    return ctx, lams


def construct_evolution_terms(rhos, H, literal: bool = False) -> Expression:
    """Right-hand side G for densities rhos and free function H.

    With ``literal=True`` the correction term uses W(lams without s)/W(lams)
    without the sign (-1)^(p-s) of the adjoint functions; kept for tests
    that show why the sign is needed.
    """
    rhos = list(rhos)
    if not rhos:
        raise ValueError("at least one density is required")
    ctx, lams = _characteristics(rhos)
    if not isinstance(H, Expression):
        H = Expression.const(ctx, H)
    _require_no_t(H, "H")
    p = len(lams)
    w = wronskian(lams, X)
    G = darboux_adjoint(lams, X, ctx)(H)
    for s in range(1, p + 1):
        rho_t = partial_t(rhos[s - 1])
        if rho_t.is_zero():
            continue
        rest = lams[:s - 1] + lams[s:]
        coeff = wronskian(rest, X, ctx=ctx) / w
        if not literal and (p - s) % 2:
            coeff = -coeff
        G = G - darboux_adjoint(rest, X, ctx)(coeff * rho_t)
    return G


def construct_evolution(rhos, H) -> Expression:
    """G such that every rho^s is a density of u_t = G; verified before return."""
    rhos = list(rhos)
    G = construct_evolution_terms(rhos, H)
    E = EvolutionEquation(G, strict=False)
    for rho in rhos:
        if not is_density(E, rho):
            raise ConsistencyError(f"{rho} is not a density of the constructed equation")
    r = E.order
    if r == float("-inf") or r < 2:
        warnings.warn(f"constructed G has order {r}; the standing assumption r >= 2 fails",
                      DegenerateEvolutionWarning, stacklevel=2)
    return G


def kernel_of_frechet_note(rho: Expression):
    """Upper bound ord(rho) on the dimension of ker rho_* (no kernel is computed)."""
    return rho.order()


__all__ = [
    "EvolutionEquation", "DegenerateEvolutionWarning", "partial_t", "restricted_dt",
    "characteristic_from_density", "verify_conserved_current", "flux_from_density",
    "construct_evolution", "construct_evolution_terms", "kernel_of_frechet_note",
    "is_density", "is_x_divergence", "frechet",
]


