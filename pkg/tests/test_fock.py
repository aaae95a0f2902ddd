from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from ealaloc.fock import (
    ModuleSpace,
    Monomial,
    MVector,
    ValidityError,
    ZeroVectorError,
    degrees,
    format_vector,
    homogeneous_components,
    mono_mul,
    project_mod_M,
    total_degree,
    validate_in,
    xm_hat_degree,
)
from ealaloc.parsing import parse_vector
from ealaloc.scalar import ParamEnv

indices = st.tuples(st.integers(-3, 3), st.integers(-3, 3))
exponents = st.integers(-3, 3).filter(bool)
monomials = st.lists(st.tuples(indices, exponents), max_size=4).map(Monomial)
coeffs = st.fractions(min_value=-20, max_value=20, max_denominator=9).filter(bool)
vectors = st.dictionaries(monomials, coeffs, max_size=5).map(MVector)


@given(st.lists(st.tuples(indices, exponents), max_size=6))
def test_monomial_is_order_independent(items):
    a = Monomial(items)
    b = Monomial(list(reversed(items)))
    assert a == b
    assert list(a) == sorted(a)
    assert all(e for _, e in a)


@given(monomials, monomials)
def test_monomial_product_adds_exponents(a, b):
    prod = a * b
    for idx in {i for i, _ in a} | {i for i, _ in b}:
        assert prod.exponent(idx) == a.exponent(idx) + b.exponent(idx)
    assert prod.degree == a.degree + b.degree


@given(vectors)
def test_format_parse_roundtrip(v):
    assert parse_vector(format_vector(v)) == v


@given(vectors, vectors)
def test_vector_arithmetic(u, v):
    assert u + v == v + u
    assert (u - v) + v == u
    assert u.scale(Fraction(0)) == MVector()
    assert (u - u) == 0


def test_format_is_sorted_and_deterministic():
    v = MVector({Monomial.var((2, 2)): Fraction(-3, 2), Monomial([((1, 0), 2), ((0, -1), 1)]): 1})
    assert format_vector(v) == "x[0,-1]*x[1,0]^2 - 3/2*x[2,2]"
    assert str(MVector()) == "0"


def test_validity_by_space():
    env = ParamEnv.make("2", "1/3")
    v = parse_vector("x[1,0]^-2*x[0,1]")
    with pytest.raises(ValidityError) as err:
        validate_in(ModuleSpace.plain(env), v)
    assert err.value.index == (1, 0)
    validate_in(ModuleSpace.localized(env, (1, 0)), v)
    with pytest.raises(ValidityError):
        validate_in(ModuleSpace.localized(env, (0, 1)), v)
    with pytest.raises(ValueError):
        ModuleSpace.twisted(env, (1, 0))  # no b
    with pytest.raises(ValueError):
        ModuleSpace("localized", env)


def test_degrees():
    v = parse_vector("x[1,0]^-3*x[0,1]^2 - x[1,0]^-2*x[-1,2]")
    assert total_degree(v) == -1
    assert xm_hat_degree(v, (1, 0)) == -1 + 3
    mixed = parse_vector("x[0,1] + x[0,1]^2")
    assert list(homogeneous_components(mixed)) == [1, 2]
    assert "xm_hat_degree" not in degrees(mixed, (1, 0))
    with pytest.raises(ZeroVectorError):
        total_degree(MVector())


def test_project_mod_M_and_mono_mul():
    m = (1, 0)
    v = parse_vector("x[1,0]^-1*x[0,1] + x[0,1]^2 + x[1,0]*x[0,1]^-1")
    assert project_mod_M(v, m) == parse_vector("x[1,0]^-1*x[0,1]")
    env = ParamEnv.make("2", "0")
    w = mono_mul(Monomial.var(m, -2), parse_vector("x[1,0]^2 + x[0,1]"))
    assert w == parse_vector("1 + x[1,0]^-2*x[0,1]")
    with pytest.raises(ValidityError):
        mono_mul(Monomial.var((0, 1), -2), parse_vector("x[0,1]"), ModuleSpace.localized(env, m))
