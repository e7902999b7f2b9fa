#!/usr/bin/env python3
"""
Tests for exact bivariate polynomials: arithmetic, derivatives, text form
"""

import pickle
import sys
from fractions import Fraction
from pathlib import Path

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

# Add src to path
sys.path.insert(0, str(Path(__file__).parent / "src"))

from algebra.poly import ONE, X, Y, ZERO, Poly, evaluate_univariate, jac, leading_form, parse_poly, \
    parse_univariate, partial, render_poly, render_univariate, substitute
from utils.errors import DegreeCapExceeded, PolySyntaxError, ZeroPolynomial

coefficients = st.fractions(min_value=-10, max_value=10, max_denominator=6)
polys = st.dictionaries(
    st.tuples(st.integers(0, 4), st.integers(0, 4)), coefficients, max_size=6
).map(Poly.from_terms)


class TestArithmetic:
    @settings(max_examples=60, deadline=None)
    @given(polys, polys, polys)
    def test_ring_axioms(self, p, q, r):
        assert (p + q) + r == p + (q + r)
        assert p + q == q + p
        assert (p * q) * r == p * (q * r)
        assert p * q == q * p
        assert p * (q + r) == p * q + p * r
        assert p + ZERO == p
        assert p * ONE == p
        assert p - p == ZERO

    def test_scalar_operations(self):
        assert X * 2 == X + X
        assert (X * 3) / 3 == X
        assert 1 - X == -(X - 1)
        assert Poly.constant(Fraction(1, 2)) * 2 == ONE

    def test_values_are_immutable(self):
        with pytest.raises(AttributeError):
            X._elem = None

    def test_equal_values_hash_alike(self):
        assert hash(parse_poly("x + y")) == hash(X + Y)
        assert len({X + Y, parse_poly("y + x")}) == 1

    def test_pickle(self):
        p = parse_poly("x^2 - 3/4*x*y + 5")
        assert pickle.loads(pickle.dumps(p)) == p

    def test_degrees(self):
        p = parse_poly("x^3*y + x*y^5 + 1")
        assert p.total_degree() == 6
        assert p.degree_in("x") == 3
        assert p.degree_in("y") == 5
        assert ZERO.total_degree() == -1
        assert ONE.total_degree() == 0

    def test_degree_cap(self):
        with pytest.raises(DegreeCapExceeded):
            X ** (2 ** 16 + 1)
        with pytest.raises(DegreeCapExceeded):
            Poly.monomial(2 ** 16 + 1, 0)

    def test_univariate_helpers(self):
        assert evaluate_univariate([1, 0, 2], X) == parse_poly("1 + 2*x^2")
        assert evaluate_univariate([], X) == ZERO
        assert Poly.univariate([0, 1, 1], "y") == Y + Y ** 2
        assert (Y ** 2 - 1).univariate_coeffs("y") == [-1, 0, 1]


class TestCalculus:
    def test_partial(self):
        p = parse_poly("x^2*y + y^3")
        assert partial(p, "x") == parse_poly("2*x*y")
        assert partial(p, "y") == parse_poly("x^2 + 3*y^2")

    def test_jacobian_examples(self):
        assert jac(X + Y ** 2, Y) == ONE
        assert jac(Y, X) == -ONE
        assert jac(X ** 2, Y) == X * 2

    @settings(max_examples=40, deadline=None)
    @given(polys, polys, st.integers(-5, 5))
    def test_jacobian_is_antisymmetric(self, p, q, c):
        assert jac(p, q) == -jac(q, p)
        assert jac(p, Poly.constant(c)) == ZERO

    @settings(max_examples=40, deadline=None)
    @given(polys, polys, polys)
    def test_jacobian_is_a_derivation(self, p, q, r):
        assert jac(p * r, q) == p * jac(r, q) + r * jac(p, q)

    @settings(max_examples=30, deadline=None)
    @given(polys, polys)
    def test_substitution_is_a_ring_map(self, p, q):
        px, py = X + Y ** 2, X * Y - 1
        assert substitute(p + q, px, py) == substitute(p, px, py) + substitute(q, px, py)
        assert substitute(p * q, px, py) == substitute(p, px, py) * substitute(q, px, py)

    def test_substitute(self):
        assert substitute(X * Y, X + 1, Y) == X * Y + Y
        assert substitute(Poly.constant(3), X ** 2, Y) == Poly.constant(3)
        with pytest.raises(DegreeCapExceeded):
            substitute(X ** 300, X ** 300, Y)

    def test_leading_form(self):
        assert leading_form(parse_poly("x^2 + x*y + y + 1")) == parse_poly("x^2 + x*y")
        with pytest.raises(ZeroPolynomial):
            leading_form(ZERO)


class TestTextForm:
    def test_canonical_rendering(self):
        assert render_poly(parse_poly("2*x*y^2 - 1/2 + x^2")) == "x^2 + 2*x*y^2 - 1/2"
        assert render_poly(parse_poly("-x + 3/4*y")) == "-x + 3/4*y"
        assert render_poly(X - Y ** 2) == "x - y^2"
        assert render_poly(ZERO) == "0"
        assert render_poly(ONE) == "1"
        assert render_poly(X + Y, ("u", "v")) == "u + v"

    def test_parse_forms(self):
        assert parse_poly("3x^2*y") == Poly.monomial(2, 1, 3)
        assert parse_poly("3*x^2*y") == Poly.monomial(2, 1, 3)
        assert parse_poly("  x +x - 2*x ") == ZERO
        assert parse_poly("-7/14") == Poly.constant(Fraction(-1, 2))
        assert parse_poly("x*x*y") == Poly.monomial(2, 1)

    @pytest.mark.parametrize("text, position", [
        ("x + * y", 4),
        ("x^0", 2),
        ("1/0", 2),
        ("x + z", 4),
        ("x +", 3),
        ("x $ y", 2),
        ("", 0),
        ("x^٣", 2),
        ("x^70000", 2),
    ])
    def test_syntax_errors_carry_position(self, text, position):
        with pytest.raises(PolySyntaxError) as info:
            parse_poly(text)
        assert info.value.position == position
        assert f"at position {position}" in info.value.message
        assert info.value.exit_code == 2

    def test_input_degree_cap(self):
        assert parse_poly("x^10*y^10", degree_cap=10) == Poly.monomial(10, 10)
        with pytest.raises(PolySyntaxError) as info:
            parse_poly("x^30", degree_cap=10)
        assert info.value.position == 2
        assert "degree cap 10" in info.value.message
        with pytest.raises(PolySyntaxError) as info:
            parse_poly("y + x^6*x^6", degree_cap=10)
        assert info.value.position == 10
        # never above the arithmetic cap
        with pytest.raises(PolySyntaxError):
            parse_poly("x^65537", degree_cap=2 ** 20)

    @settings(max_examples=80, deadline=None)
    @given(st.dictionaries(
        st.tuples(st.integers(0, 12), st.integers(0, 12)),
        st.fractions(min_value=-10 ** 6, max_value=10 ** 6, max_denominator=10 ** 6),
        max_size=8,
    ))
    def test_render_then_parse_is_identity(self, terms):
        p = Poly.from_terms(terms)
        assert parse_poly(render_poly(p)) == p

    def test_univariate_text(self):
        assert render_univariate([0, 1, 0, -2]) == "-2*t^3 + t"
        assert render_univariate([]) == "0"
        assert parse_univariate("t^2 - 1") == [-1, 0, 1]
        assert parse_univariate("0") == [0]
