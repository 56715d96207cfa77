"""Hypothesis strategies producing random differential functions."""

from hypothesis import strategies as st

from conslaws import JetContext, const, jet, var

ODE = JetContext(("t",), ("u",))
EVO = JetContext(("t", "x"), ("u",))
PLANE = JetContext(("x", "y"), ("u",))

coeffs = st.integers(-4, 4)


def _vocab(ctx, order):
    out = [var(ctx, i) for i in range(ctx.n)]
    if ctx.n == 1:
        out += [jet(ctx, 0, (k,)) for k in range(order + 1)]
    elif ctx is EVO:
        out += [jet(ctx, 0, (0, k)) for k in range(order + 1)]
    else:
        out += [jet(ctx, 0, (a, b)) for a in range(order + 1) for b in range(order + 1 - a)]
    return out


@st.composite
def polynomials(draw, ctx=ODE, order=2, terms=3, degree=2):
    vocab = _vocab(ctx, order)
    out = const(ctx, 0)
    for _ in range(draw(st.integers(1, terms))):
        c = draw(coeffs.filter(bool))
        t = const(ctx, c)
        for _ in range(draw(st.integers(0, degree))):
            t = t * draw(st.sampled_from(vocab))
        out = out + t
    return out


@st.composite
def nonzero_polynomials(draw, **kw):
    return draw(polynomials(**kw).filter(lambda e: not e.is_zero()))


@st.composite
def rationals(draw, ctx=ODE, order=2):
    n = draw(polynomials(ctx=ctx, order=order))
    d = draw(nonzero_polynomials(ctx=ctx, order=order, terms=2, degree=1))
    return n / d
