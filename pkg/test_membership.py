#!/usr/bin/env python3
"""
Tests for subalgebra membership: Gröbner elimination and univariate peeling
"""

import sys
from fractions import Fraction
from pathlib import Path

import pytest
from sympy.polys.groebnertools import groebner as reference_groebner
from sympy.polys.groebnertools import is_reduced

# Add src to path
sys.path.insert(0, str(Path(__file__).parent / "src"))

from algebra.endo import Endo, apply
from algebra.membership import RING4, GROEBNER_DEGREE_CAP, groebner, in_subalgebra, lift, lift_uv, lower_uv, \
    membership_ideal, sigma0_apply, verify_witness, wang_membership
from algebra.poly import X, Y, Poly, evaluate_univariate, parse_poly
from algebra.tame import invert
from utils.errors import DegreeCapExceeded, HypothesisFailed, JacobianNotUnit, ZeroPolynomial

SHEAR = Endo(X + Y ** 2, Y)


class TestGroebner:
    @pytest.mark.parametrize("P, Q", [
        ("x + y^2", "y"),
        ("x^2", "y"),
        ("2*x + 3*y", "x + 2*y"),
        ("y + x^2", "x"),
        ("x + y^3 - 2*y", "y - x^2"),
        ("x*y", "x + y"),
    ])
    def test_agrees_with_reference(self, P, Q):
        gens = membership_ideal(parse_poly(P), parse_poly(Q))
        basis = groebner(gens)
        assert basis == reference_groebner(gens, RING4)
        assert is_reduced(basis, RING4)

    def test_basis_of_a_triangular_ideal_is_itself(self):
        gens = membership_ideal(X ** 2, Y)
        assert set(groebner(gens)) == {g.monic() for g in gens}

    def test_degree_cap(self):
        with pytest.raises(DegreeCapExceeded):
            groebner(membership_ideal(X ** (GROEBNER_DEGREE_CAP + 1), Y))
        with pytest.raises(DegreeCapExceeded):
            in_subalgebra(X, X ** 5, Y, degree_cap=4)

    def test_zero_ideal(self):
        with pytest.raises(ZeroPolynomial):
            groebner([])
        with pytest.raises(ZeroPolynomial):
            groebner([RING4.zero])

    def test_lifts(self):
        p = parse_poly("x^2 - 1/3*y")
        assert lower_uv(lift_uv(p)) == p
        assert lower_uv(lift(p)) is None


class TestSubalgebraMembership:
    def test_shear_inverse_witness(self):
        witness = in_subalgebra(X, SHEAR.P, SHEAR.Q)
        assert witness.phi == X - Y ** 2
        assert witness.render() == "u - v^2"
        assert witness.reduced
        assert verify_witness(witness, X, SHEAR.P, SHEAR.Q)

    def test_member_of_proper_subalgebra(self):
        witness = in_subalgebra(X ** 2 + Y, X ** 2, Y)
        assert witness.phi == X + Y

    def test_not_a_member(self):
        assert in_subalgebra(X, X ** 2, Y) is None

    def test_witness_is_the_inverse_image(self):
        f = Endo(parse_poly("x + 2*y + y^2"), parse_poly("y - 1"))
        inverse = invert(f)
        basis = groebner(membership_ideal(f.P, f.Q))
        for text in ("x*y", "x^2 - y^3", "7", "x + y"):
            R = parse_poly(text)
            witness = in_subalgebra(R, f.P, f.Q, basis=basis)
            assert witness.phi == apply(inverse, R)

    def test_sigma0_exchanges_generators(self):
        assert sigma0_apply(SHEAR, SHEAR.P) == SHEAR.Q
        assert sigma0_apply(SHEAR, SHEAR.Q) == SHEAR.P
        R = parse_poly("x*y + 3")
        assert sigma0_apply(SHEAR, sigma0_apply(SHEAR, R)) == R

    def test_sigma0_needs_unit_jacobian(self):
        with pytest.raises(JacobianNotUnit):
            sigma0_apply(Endo(X ** 2, Y), X)


class TestUnivariateMembership:
    def test_recovers_h(self):
        A = X + Y
        R = evaluate_univariate([2, -1, 3], A)
        witness = wang_membership(A, R)
        assert witness.h == (2, -1, 3)
        assert witness.degree == 2
        assert witness.render() == "3*t^2 - t + 2"

    def test_gapped_coefficients(self):
        A = parse_poly("x^2 - y")
        coeffs = [Fraction(1, 2), 0, 0, -4]
        witness = wang_membership(A, evaluate_univariate(coeffs, A))
        assert list(witness.h) == coeffs

    def test_constants(self):
        assert wang_membership(X, Poly.constant(5)).h == (5,)
        assert wang_membership(X, Poly()).degree == -1

    def test_absent(self):
        assert wang_membership(X, Y) is None
        assert wang_membership(X ** 2 + Y, X ** 2 + Y + X) is None
        assert wang_membership(X ** 2, X ** 3) is None

    def test_constant_generator_is_rejected(self):
        with pytest.raises(HypothesisFailed):
            wang_membership(Poly.constant(3), X)
