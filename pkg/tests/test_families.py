import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conslaws import parse, parse_context
from conslaws.calculus import divergence, euler
from conslaws.families import (compare_up_to_sign, construct_family_affine, construct_family_h,
                               construct_family_omega, family_h_split, omega_null_divergence,
                               verify_family_affine, verify_family_h, verify_family_omega)

TX = parse_context("vars t x; unknowns u")
TXY = parse_context("vars t x y; unknowns u")


def P(text, ctx=TXY):
    return parse(text, ctx)


atoms_xy = ["u", "u_x", "u_y", "u_t", "u_xy", "x", "y", "t", "u^2", "u_x*u_y", "u*u_xx", "t*u_y"]


@st.composite
def fns(draw, ctx=TXY, atoms=atoms_xy, terms=3):
    out = P("0", ctx)
    for _ in range(draw(st.integers(1, terms))):
        out = out + P(draw(st.sampled_from(atoms)), ctx) * draw(st.integers(-3, 3).filter(bool))
    return out


# -- {h(t)} ------------------------------------------------------------------------------

def test_family_h_examples():
    assert verify_family_h(P("u_x", TX), "t")
    assert not verify_family_h(P("u_t", TX), "t")
    assert not verify_family_h(P("u", TX), "t")
    with pytest.raises(ValueError):
        verify_family_h(P("u_x", TX), ("t", "x"))


def test_family_h_split_oracle():
    parts = family_h_split(P("u_t", TX), "t")
    assert parts
    assert family_h_split(P("u*u_tx + u_t*u_x", TX), "t") == {}
    assert family_h_split(P("u_x*u_t", TX), "t")


@settings(max_examples=100)
@given(fns(), fns())
def test_family_h_round_trip(F1, F2):
    L = construct_family_h([F1, F2], "t", TXY)
    assert verify_family_h(L, "t")
    assert family_h_split(L, "t") == {}


@settings(max_examples=50)
@given(fns())
def test_family_h_verifier_matches_split(L):
    assert verify_family_h(L, "t") == (family_h_split(L, "t") == {})


def test_finite_basis_criterion():
    L = construct_family_h([P("u*u_t", TX)], "t", TX)
    hs = ["1", "t", "t^2", "t^3"]
    assert all(euler(P(h, TX) * L).is_zero() for h in hs)
    assert verify_family_h(L, "t")
    # only the constants survive for u_t
    assert euler(P("u_t", TX)).is_zero()
    assert not euler(P("t*u_t", TX)).is_zero()
    assert not verify_family_h(P("u_t", TX), "t")


# -- {h(t) + f(t) x + g(t) y} --------------------------------------------------------------

def test_family_affine_examples():
    assert verify_family_affine(P("u_xx + u_xy"), "t")
    assert not verify_family_affine(P("u_x"), "t")
    assert verify_family_h(P("u_x"), "t")


@settings(max_examples=50)
@given(fns(), fns(), fns())
def test_family_affine_round_trip(a, b, c):
    L = construct_family_affine([[a, b], [b, c]], "t", TXY)
    assert verify_family_affine(L, "t")
    assert verify_family_h(L, "t")


@settings(max_examples=100)
@given(fns())
def test_affine_implies_h(L):
    if verify_family_affine(L, "t"):
        assert verify_family_h(L, "t")


def test_affine_rejects_asymmetric():
    with pytest.raises(ValueError):
        construct_family_affine([[P("u"), P("u_x")], [P("u_y"), P("u")]], "t", TXY)


# -- {h(omega)} ------------------------------------------------------------------------------

def antisym(a, b, c, ctx=TXY):
    z = P("0", ctx)
    return [[z, a, b], [-a, z, c], [-b, -c, z]]


def test_family_h_jet_free():
    assert verify_family_h(P("x*t + y"), "t")
    assert verify_family_h(P("0"), "t")


def test_family_omega_examples():
    # h(u) u_x = D_x of an antiderivative of h
    assert verify_family_omega(P("u_x", TX), P("u", TX))
    assert not verify_family_omega(P("u_xx", TX), P("u", TX))
    with pytest.raises(ValueError):
        construct_family_omega(antisym(P("1"), P("0"), P("0")), P("3"))


@settings(max_examples=50)
@given(fns(terms=2), fns(terms=2), fns(terms=2), st.sampled_from(["u", "u_x", "u_x + u_y", "u_xx + u_yy"]))
def test_family_omega_round_trip(a, b, c, w):
    omega = P(w)
    L = construct_family_omega(antisym(a, b, c), omega)
    assert verify_family_omega(L, omega)


@settings(max_examples=50)
@given(fns(terms=2), fns(terms=2), fns(terms=2), st.sampled_from(["u", "u_x", "u_xx + u_yy"]))
def test_null_divergence_form(a, b, c, w):
    omega = P(w)
    G = antisym(a, b, c)
    F = omega_null_divergence(G, TXY)
    assert divergence(F).is_zero()
    L = construct_family_omega(G, omega)
    pairing = sum((f * omega.total_derivative(j) for j, f in enumerate(F)), P("0"))
    assert pairing == L


def test_compare_up_to_sign():
    assert compare_up_to_sign(P("u"), P("u")) == 1
    assert compare_up_to_sign(P("u"), P("-u")) == -1
    assert compare_up_to_sign(P("u"), P("u_x")) is None
