import warnings

import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from conslaws import parse, parse_context
from conslaws.calculus import NotADivergence, split_by_arbitrary_functions
from conslaws.evolution import (DegenerateEvolutionWarning, EvolutionEquation, characteristic_from_density,
                                construct_evolution, construct_evolution_terms, flux_from_density,
                                is_density, kernel_of_frechet_note, partial_t, restricted_dt,
                                verify_conserved_current)
from conslaws.wronskian import ZeroWronskian, adjoint_functions, wronskian

TX = parse_context("vars t x; unknowns u")
TXF = parse_context("vars t x; unknowns u; funcs f1(t) f2(t)")


def P(text, ctx=TX):
    return parse(text, ctx)


KDV = EvolutionEquation(P("-(u*u_x + u_xxx)"))

atoms = ["u", "u_x", "x", "t", "u^2", "u*u_x", "u_x^2", "x*u", "t*u", "u^3"]


@st.composite
def densities(draw, ctx=TX):
    out = P("0", ctx)
    for _ in range(draw(st.integers(1, 3))):
        out = out + P(draw(st.sampled_from(atoms)), ctx) * draw(st.integers(-3, 3).filter(bool))
    return out


@st.composite
def density_lists(draw, ctx=TX, pmax=2):
    p = draw(st.integers(1, pmax))
    rhos = [draw(densities(ctx)) for _ in range(p)]
    lams = [characteristic_from_density(r) for r in rhos]
    assume(not wronskian(lams, 1).is_zero())
    return rhos


H_atoms = ["u", "u_x", "u_xx", "x", "u^2", "u*u_x", "1"]


@st.composite
def Hs(draw, ctx=TX):
    out = P("0", ctx)
    for _ in range(draw(st.integers(1, 2))):
        out = out + P(draw(st.sampled_from(H_atoms)), ctx) * draw(st.integers(-3, 3).filter(bool))
    return out


# -- basic objects ------------------------------------------------------------------------

def test_equation_validation():
    assert KDV.order == 3
    with pytest.raises(ValueError):
        EvolutionEquation(P("u_x"))
    with pytest.raises(ValueError):
        EvolutionEquation(P("u_t + u_xx"))
    assert EvolutionEquation(P("u_x"), strict=False).order == 1
    assert KDV.lhs() == P("u_t + u*u_x + u_xxx")


def test_partial_t_and_restricted_dt():
    assert partial_t(P("t*u^2")) == P("u^2")
    assert restricted_dt(KDV, P("u")) == P("-(u*u_x + u_xxx)")
    with pytest.raises(ValueError):
        partial_t(P("u_t"))


def test_kdv_characteristics():
    assert characteristic_from_density(P("u")) == 1
    assert characteristic_from_density(P("u^2/2")) == P("u")
    assert characteristic_from_density(P("u_x^2/2")) == P("-u_xx")


def test_kdv_currents():
    assert verify_conserved_current(KDV, P("u"), P("u^2/2 + u_xx"))
    assert verify_conserved_current(KDV, P("u^2/2"), P("u^3/3 + u*u_xx - u_x^2/2"))
    assert not verify_conserved_current(KDV, P("u"), P("0"))
    assert flux_from_density(KDV, P("u")) == P("u^2/2 + u_xx")
    assert flux_from_density(KDV, P("u^2/2")) == P("u^3/3 + u*u_xx - u_x^2/2")


def test_flux_rejects_non_density():
    with pytest.raises(NotADivergence):
        flux_from_density(KDV, P("u*u_x^3 + x*u"))


def test_kdv_reconstruction():
    G = construct_evolution([P("u"), P("u^2/2")], P("-u_x/2 - u^3/(6*u_x)"))
    assert G == P("-u*u_x - u_xxx")


def test_degenerate_output_warns():
    with pytest.warns(DegenerateEvolutionWarning):
        construct_evolution([P("u")], P("u"))


def test_zero_wronskian():
    with pytest.raises(ZeroWronskian):
        construct_evolution([P("u"), P("2*u")], P("u"))


def test_time_dependent_density_needs_the_sign():
    # for an odd p - s the literal correction term loses the density property
    rhos = [P("t*u"), P("u^2/2")]
    H = P("u_xx")
    literal = construct_evolution_terms(rhos, H, literal=True)
    E = EvolutionEquation(literal, strict=False)
    assert not is_density(E, rhos[0])
    G = construct_evolution(rhos, H)
    E = EvolutionEquation(G, strict=False)
    assert all(is_density(E, r) for r in rhos)


# -- properties ---------------------------------------------------------------------------------

@settings(max_examples=100)
@given(density_lists(), Hs())
def test_constructed_equation_conserves(rhos, H):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", DegenerateEvolutionWarning)
        G = construct_evolution(rhos, H)
    E = EvolutionEquation(G, strict=False)
    for rho in rhos:
        assert is_density(E, rho)


@settings(max_examples=40)
@given(density_lists(pmax=1), Hs())
def test_flux_round_trip(rhos, H):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", DegenerateEvolutionWarning)
        G = construct_evolution(rhos, H)
    E = EvolutionEquation(G, strict=False)
    for rho in rhos:
        assert verify_conserved_current(E, rho, flux_from_density(E, rho))


@given(density_lists(TXF), Hs(TXF))
def test_gauge_kernel_functions_of_t(rhos, H):
    lams = [characteristic_from_density(r) for r in rhos]
    phis = adjoint_functions(lams, 1)
    shifted = H
    for name, phi in zip(("f1", "f2"), phis):
        shifted = shifted + P(f"{name}(t)", TXF) * phi
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", DegenerateEvolutionWarning)
        diff = construct_evolution_terms(rhos, shifted) - construct_evolution_terms(rhos, H)
    assert split_by_arbitrary_functions(diff, ["f1", "f2"]) == {}


@given(densities(), densities())
def test_characteristic_ignores_trivial_densities(rho, g):
    assert characteristic_from_density(rho + g.total_derivative(1)) == characteristic_from_density(rho)


def test_kernel_note():
    assert kernel_of_frechet_note(P("u^2/2")) == 0
    assert kernel_of_frechet_note(P("u_x^2")) == 1
