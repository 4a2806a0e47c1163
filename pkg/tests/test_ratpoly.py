from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from arena_model.ratpoly import RatPoly, _kronecker, _schoolbook

fractions = st.builds(Fraction, st.integers(-99, 99), st.integers(1, 50))
polys = st.lists(fractions, max_size=8).map(RatPoly)
big_ints = st.lists(st.integers(-10 ** 30, 10 ** 30), min_size=1, max_size=120)


def test_basic_arithmetic():
    x = RatPoly.identity()
    p = (1 - x) * (1 + x)
    assert p == RatPoly([1, 0, -1])
    assert p.degree == 2
    assert RatPoly().degree == -1 and RatPoly([0, 0]).is_zero
    assert (x ** 3).coeffs == (0, 0, 0, 1)
    assert RatPoly.monomial(2, Fraction(1, 3)) == x * x / 3


def test_integrate_monomials():
    for k in range(10):
        assert RatPoly.monomial(k).integrate() == Fraction(1, k + 1)
    assert RatPoly([1, 1]).integrate(Fraction(1, 2), 1) == Fraction(7, 8)


def test_exact_and_float_evaluation():
    p = RatPoly([Fraction(1, 3), -2, 5])
    assert p(Fraction(1, 2)) == Fraction(1, 3) - 1 + Fraction(5, 4)
    xs = np.linspace(0, 1, 7)
    np.testing.assert_allclose(p.evaluate(xs), [float(p(Fraction(x).limit_denominator())) for x in xs])


def test_rejects_bad_operands():
    with pytest.raises(TypeError):
        RatPoly([1]) + "a"
    with pytest.raises(ZeroDivisionError):
        RatPoly([1]) / 0
    with pytest.raises(ValueError):
        RatPoly([1]) ** -1


@given(polys, polys, polys)
def test_ring_axioms(p, q, r):
    assert p * (q + r) == p * q + p * r
    assert (p * q) * r == p * (q * r)
    assert p - p == RatPoly()


@given(polys, polys)
def test_derivative_product_rule(p, q):
    assert (p * q).derivative() == p.derivative() * q + p * q.derivative()


@given(polys)
def test_fundamental_theorem(p):
    assert p.antiderivative().derivative() == p
    P = p.antiderivative()
    assert p.integrate() == P(1) - P(0)


@given(polys, polys, fractions)
def test_compose_is_evaluation(p, q, x):
    assert p.compose(q)(x) == p(q(x))


@given(big_ints, big_ints)
def test_kronecker_matches_schoolbook(a, b):
    assert _kronecker(a, b) == _schoolbook(a, b)


def test_large_product_uses_fast_path():
    x = RatPoly.identity()
    p = (1 - x) ** 60 * (x ** 2 + Fraction(1, 7)) ** 40
    assert p(Fraction(1)) == 0
    assert p(Fraction(0)) == Fraction(1, 7) ** 40
