"""Conservative closures of the averaged two-dimensional vorticity equation."""

from __future__ import annotations

from dataclasses import dataclass, asdict
from functools import lru_cache

from .context import JetContext
from .expr import Expression, jet
from .families import compare_up_to_sign, construct_family_omega, verify_family_omega
from .calculus import euler, is_total_divergence, split_by_arbitrary_functions

T, X, Y = 0, 1, 2


@lru_cache(maxsize=1)
def vorticity_context() -> JetContext:
    return JetContext(("t", "x", "y"), ("psi",), (("h", ("t",)), ("f", ("t",)), ("g", ("t",))))


def _ctx(ctx):
    return ctx or vorticity_context()


def psi(ctx=None, alpha=(0, 0, 0)) -> Expression:
    return jet(_ctx(ctx), 0, alpha)


def zeta(ctx=None) -> Expression:
    return psi(ctx, (0, 2, 0)) + psi(ctx, (0, 0, 2))


def jacobian(ctx=None) -> Expression:
    """psi_x zeta_y - psi_y zeta_x."""
    z = zeta(ctx)
    return psi(ctx, (0, 1, 0)) * z.total_derivative(Y) - psi(ctx, (0, 0, 1)) * z.total_derivative(X)


def vorticity_lhs(ctx=None) -> Expression:
    return zeta(ctx).total_derivative(T) + jacobian(ctx)


def _dd(e: Expression, *axes) -> Expression:
    for a in axes:
        e = e.total_derivative(a)
    return e


def jacobian_identity_rhs(ctx=None) -> Expression:
    """(D_y^2 - D_x^2)(psi_x psi_y) + D_x D_y (psi_x^2 - psi_y^2)."""
    px, py = psi(ctx, (0, 1, 0)), psi(ctx, (0, 0, 1))
    a = px * py
    return _dd(a, Y, Y) - _dd(a, X, X) + _dd(px * px - py * py, X, Y)


def lhs_double_divergence(ctx=None) -> Expression:
    """D_x^2 (psi_t - psi_x psi_y) + D_x D_y (psi_x^2 - psi_y^2) + D_y^2 (psi_t + psi_x psi_y)."""
    pt, px, py = psi(ctx, (1, 0, 0)), psi(ctx, (0, 1, 0)), psi(ctx, (0, 0, 1))
    return _dd(pt - px * py, X, X) + _dd(px * px - py * py, X, Y) + _dd(pt + px * py, Y, Y)


def lhs_K_matrix(ctx=None) -> list:
    """Symmetric K over (x, y) with sum D_i D_j K^{ij} equal to the left-hand side."""
    pt, px, py = psi(ctx, (1, 0, 0)), psi(ctx, (0, 1, 0)), psi(ctx, (0, 0, 1))
    kxy = (px * px - py * py) / 2
    return [[pt - px * py, kxy], [kxy, pt + px * py]]


def enstrophy_matrix(ctx=None) -> list:
    c = _ctx(ctx)
    y = Expression.from_gen(c, (0, Y))
    p = psi(c)
    z = Expression.const(c, 0)
    return [[z, z, y], [z, z, -p], [-y, p, z]]


def enstrophy_form(ctx=None):
    """(value of D_i(G^{ij} D_j zeta), sign relative to the left-hand side)."""
    form = construct_family_omega(enstrophy_matrix(ctx), zeta(ctx))
    return form, compare_up_to_sign(form, vorticity_lhs(ctx))


@dataclass(frozen=True)
class ClosureData:
    P: tuple
    S: tuple

    def __post_init__(self):
        P, S = tuple(self.P), tuple(self.S)
        if len(P) != 3 or len(S) != 3:
            raise ValueError("P and S are triples")
        object.__setattr__(self, "P", P)
        object.__setattr__(self, "S", S)


def build_V(data: ClosureData, ctx=None) -> Expression:
    c = _ctx(ctx)
    P = [p if isinstance(p, Expression) else Expression.const(c, p) for p in data.P]
    S = [s if isinstance(s, Expression) else Expression.const(c, s) for s in data.S]
    pxx, pxy, pyy = psi(c, (0, 2, 0)), psi(c, (0, 1, 1)), psi(c, (0, 0, 2))
    z = zeta(c)
    f11 = pyy * P[1] - pxy * P[2]
    f12 = pxx * P[2] - pyy * P[0]
    f22 = pxy * P[0] - pxx * P[1]
    divS = S[0].total_derivative(T) + S[1].total_derivative(X) + S[2].total_derivative(Y)
    r = z * divS + (S[0] * z.total_derivative(T) + S[1] * z.total_derivative(X)
                    + S[2] * z.total_derivative(Y)) * 2
    return _dd(f11, X, X) + _dd(f12, X, Y) + _dd(f22, Y, Y) + _dd(r, X, X) + _dd(r, Y, Y)


@dataclass(frozen=True)
class ClosureReport:
    circulation: bool
    momentum_x: bool
    momentum_y: bool
    energy: bool

    @property
    def all(self) -> bool:
        return self.circulation and self.momentum_x and self.momentum_y and self.energy

    def as_dict(self) -> dict:
        return asdict(self)


def verify_closed_vorticity(V: Expression) -> ClosureReport:
    """Characteristics h(t), f(t) x, g(t) y and psi of lhs - V = 0."""
    c = V.ctx
    L = vorticity_lhs(c) - V
    x = Expression.from_gen(c, (0, X))
    y = Expression.from_gen(c, (0, Y))

    def family(chi, name):
        return not split_by_arbitrary_functions(euler(chi * L), [name])

    h = Expression.from_gen(c, (2, "h", 0, (0,)))
    f = Expression.from_gen(c, (2, "f", 0, (0,)))
    g = Expression.from_gen(c, (2, "g", 0, (0,)))
    return ClosureReport(
        circulation=family(h, "h"),
        momentum_x=family(f * x, "f"),
        momentum_y=family(g * y, "g"),
        energy=is_total_divergence(psi(c) * L),
    )


@dataclass(frozen=True)
class EnergyReport:
    divergence_ok: bool
    homogeneous_ok: object = None
    particular_ok: object = None
    q_identity_ok: object = None
    q_particular_ok: object = None

    def as_dict(self) -> dict:
        return asdict(self)


def energy_constraint_solve(F11, F12, F22, P=None, S=None, ctx=None) -> EnergyReport:
    """Check the energy condition on (F11, F12, F22) and, optionally, the
    P-decomposition and the Q = zeta^2 S particular solution."""
    c = _ctx(ctx)
    pxx, pxy, pyy = psi(c, (0, 2, 0)), psi(c, (0, 1, 1)), psi(c, (0, 0, 2))
    F = [f if isinstance(f, Expression) else Expression.const(c, f) for f in (F11, F12, F22)]
    pairing = pxx * F[0] + pxy * F[1] + pyy * F[2]
    ok = is_total_divergence(psi(c) * _dd(F[0], X, X) + psi(c) * _dd(F[1], X, Y) + psi(c) * _dd(F[2], Y, Y))
    ok2 = is_total_divergence(pairing)
    if ok != ok2:
        raise AssertionError("integration by parts changed the divergence verdict")
    hom = part = None
    if P is not None:
        P = [p if isinstance(p, Expression) else Expression.const(c, p) for p in P]
        ph = [pyy * P[1] - pxy * P[2], pxx * P[2] - pyy * P[0], pxy * P[0] - pxx * P[1]]
        hom = (pxx * ph[0] + pxy * ph[1] + pyy * ph[2]).is_zero()
        R = [a - b for a, b in zip(F, ph)]
        part = is_total_divergence(pxx * R[0] + pxy * R[1] + pyy * R[2])
    qid = qpart = None
    if S is not None:
        S = [s if isinstance(s, Expression) else Expression.const(c, s) for s in S]
        z = zeta(c)
        Q = [z * z * s for s in S]
        divQ = Q[0].total_derivative(T) + Q[1].total_derivative(X) + Q[2].total_derivative(Y)
        divS = S[0].total_derivative(T) + S[1].total_derivative(X) + S[2].total_derivative(Y)
        rhs = z * z * divS + z * (S[0] * z.total_derivative(T) + S[1] * z.total_derivative(X)
                                  + S[2] * z.total_derivative(Y)) * 2
        qid = (divQ - rhs).is_zero()
        R = z * divS + (S[0] * z.total_derivative(T) + S[1] * z.total_derivative(X)
                        + S[2] * z.total_derivative(Y)) * 2
        qpart = is_total_divergence(pxx * R + pyy * R)
    return EnergyReport(ok, hom, part, qid, qpart)


def omega_family_check(ctx=None) -> bool:
    return verify_family_omega(vorticity_lhs(ctx), zeta(ctx))
