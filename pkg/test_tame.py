#!/usr/bin/env python3
"""
Tests for tame factorization, inversion and involution classification
"""

import math
import sys
from fractions import Fraction
from pathlib import Path

import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

# Add src to path
sys.path.insert(0, str(Path(__file__).parent / "src"))

import algebra.tame as tame
from algebra.endo import ALPHA, BETA, IDENTITY, MINUS_IDENTITY, Endo, compose, linear_map
from algebra.poly import X, Y, parse_poly
from algebra.tame import Affine, Factorization, InvolutionTag, Triangular, classify_involution, conjugate_to_alpha, \
    decompose, invert, is_automorphism, normalize_word
from utils.errors import JCCandidate, NotAnAutomorphism, NotConjugateToAlpha, NotInvolution

SHEAR = Endo(X + Y ** 2, Y)
SWAP = Affine(0, 1, 1, 0)


def conjugate(g: Endo, normal_form: Endo) -> Endo:
    """g⁻¹ ∘ N ∘ g"""
    return compose(compose(invert(g), normal_form), g)


small = st.integers(-2, 2)
nonzero = st.integers(-3, 3).filter(bool)
affines = st.tuples(small, small, small, small, small, small).filter(
    lambda m: m[0] * m[3] != m[1] * m[2]).map(lambda m: Affine(*m))
# degree 2 or 3 in y
triangulars = st.builds(
    lambda a, c, d, low, top: Triangular(a=a, c=c, d=d, p=tuple(low) + (top,)),
    nonzero, nonzero, small, st.lists(st.integers(-3, 3), min_size=2, max_size=3), nonzero,
)


@st.composite
def tame_words(draw):
    word = []
    for _ in range(draw(st.integers(1, 2))):
        word += [draw(affines), draw(triangulars)]
    word.append(draw(affines))
    return word


class TestElementaryFactors:
    def test_validation(self):
        with pytest.raises(ValueError):
            Affine(1, 2, 2, 4)
        with pytest.raises(ValueError):
            Triangular(a=0, c=1)

    def test_affine_product_matches_composition(self):
        a, b = Affine(2, 1, 1, 1, 3, -1), Affine(0, 1, -1, 5, 0, 2)
        assert a.then(b).to_endo() == compose(a.to_endo(), b.to_endo())
        assert compose(a.to_endo(), a.inverse().to_endo()) == IDENTITY

    def test_triangular_product_matches_composition(self):
        s = Triangular(a=2, c=-1, d=3, p=(1, 0, 4))
        t = Triangular(a=-1, c=3, d=1, p=(0, 2, 0, -1))
        assert s.then(t).to_endo() == compose(s.to_endo(), t.to_endo())
        assert compose(s.to_endo(), s.inverse().to_endo()) == IDENTITY
        assert compose(t.inverse().to_endo(), t.to_endo()) == IDENTITY

    def test_intersection_conversions(self):
        t = Triangular(a=2, c=3, d=1, p=(5, -1))
        assert t.is_affine
        assert t.to_affine().to_endo() == t.to_endo()
        assert Affine(2, 7, 0, 3, 1, 1).to_triangular().to_endo() == Affine(2, 7, 0, 3, 1, 1).to_endo()

    def test_normalize_word(self):
        assert normalize_word([]) == [Affine.identity()]
        assert normalize_word([Affine.identity(), Triangular(a=1, c=1)]) == [Affine.identity()]
        word = normalize_word([Triangular(a=2, c=1, p=(1, 3))])
        assert word == [Affine(2, 3, 0, 1, 1, 0)]
        shear = Triangular.shear((0, 0, 1))
        assert normalize_word([shear, Affine(1, 0, 0, 1, 0, 2), shear]) == [shear.then(Triangular(1, 1, 2)).then(shear)]


class TestDecompose:
    def test_shear(self):
        factorization = decompose(SHEAR)
        assert factorization.factors == (Triangular.shear((0, 0, 1)),)
        assert factorization.to_endo() == SHEAR

    def test_affine(self):
        f = linear_map(2, 3, 1, 2, 5, -1)
        assert decompose(f).factors == (Affine(2, 3, 1, 2, 5, -1),)

    def test_round_trip_and_degrees(self):
        word = [Triangular.shear((0, 0, 1)), SWAP, Triangular(a=1, c=2, d=1, p=(0, 1, 0, 1))]
        f = Factorization(tuple(word)).to_endo()
        factorization = decompose(f)
        assert factorization.to_endo() == f
        assert sorted(factorization.triangular_degrees) == [2, 3]
        assert max(f.P.total_degree(), f.Q.total_degree()) == math.prod(factorization.triangular_degrees)

    def test_reduction_degrees_of_shear(self):
        assert decompose(SHEAR).reduction_degrees == (3, 2)
        assert decompose(linear_map(2, 3, 1, 2)).reduction_degrees == (2,)

    @settings(max_examples=30, deadline=None)
    @given(tame_words())
    def test_reduction_degrees_strictly_decrease(self, word):
        f = Factorization(tuple(word)).to_endo()
        factorization = decompose(f)
        top = max(f.P.total_degree(), f.Q.total_degree())
        trace = factorization.reduction_degrees
        assert trace[0] == f.P.total_degree() + f.Q.total_degree()
        assert all(a > b for a, b in zip(trace, trace[1:]))
        # one entry per peel after the first
        assert len(trace) - 1 <= top
        assert math.prod(factorization.triangular_degrees) == top

    def test_alternating_form(self, small_corpus):
        for entry in small_corpus:
            factors = decompose(entry.endo).factors
            for left, right in zip(factors, factors[1:]):
                assert type(left) is not type(right)

    def test_not_an_automorphism(self):
        with pytest.raises(NotAnAutomorphism) as info:
            decompose(Endo(X ** 2, Y))
        assert info.value.details["degrees"] == (2, 1)
        assert not is_automorphism(Endo(X ** 2, Y))
        assert not is_automorphism(Endo(X + Y, X + Y))

    def test_stalled_unit_jacobian_is_reported(self, monkeypatch):
        monkeypatch.setattr(tame, "_peel", lambda P, Q: (P, []))
        with pytest.raises(JCCandidate) as info:
            decompose(SHEAR)
        assert info.value.exit_code == 4
        with pytest.raises(JCCandidate):
            is_automorphism(SHEAR)


class TestInvert:
    def test_shear_inverse(self):
        assert invert(SHEAR) == Endo(X - Y ** 2, Y)

    def test_inverse_identities(self, small_corpus):
        for entry in small_corpus:
            inverse = invert(entry.endo)
            assert compose(entry.endo, inverse) == IDENTITY
            assert compose(inverse, entry.endo) == IDENTITY

    def test_ground_truth_inverse(self, small_corpus):
        for entry in small_corpus:
            assert entry.ground_truth.inverse_endo() == invert(entry.endo)


class TestInvolutions:
    @pytest.mark.parametrize("gamma, tag", [
        (IDENTITY, InvolutionTag.IDENTITY),
        (MINUS_IDENTITY, InvolutionTag.MINUS_IDENTITY),
        (Endo(-X + Y ** 2, -Y), InvolutionTag.MINUS_IDENTITY),
        (Endo(-X + 4, -Y + 2), InvolutionTag.MINUS_IDENTITY),
        (ALPHA, InvolutionTag.ALPHA_CONJUGATE),
        (BETA, InvolutionTag.ALPHA_CONJUGATE),
        (Endo(X + (Y - 1) ** 3, -Y + 2), InvolutionTag.ALPHA_CONJUGATE),
    ])
    def test_normal_forms(self, gamma, tag):
        result = classify_involution(gamma)
        assert result.tag is tag
        assert conjugate(result.normalizer, result.normal_form) == gamma

    def test_conjugates_of_alpha(self, small_corpus):
        for g in [SHEAR] + [e.endo for e in small_corpus[:3]]:
            gamma = conjugate(g, ALPHA)
            result = classify_involution(gamma)
            assert result.tag is InvolutionTag.ALPHA_CONJUGATE
            assert conjugate(result.conjugator, ALPHA) == gamma

    def test_conjugate_to_alpha(self):
        g = conjugate_to_alpha(BETA)
        assert conjugate(g, ALPHA) == BETA
        with pytest.raises(NotConjugateToAlpha):
            conjugate_to_alpha(MINUS_IDENTITY)

    @settings(max_examples=60, deadline=None)
    @given(st.integers(-4, 4), st.integers(-4, 4), st.integers(-4, 4), st.integers(-4, 4), st.integers(-3, 3))
    def test_linear_involutions_conjugate_affinely(self, a, b, c, d, s):
        det = a * d - b * c
        assume(det != 0)
        # eigenvector (a, c) for +1 and (b, d) for -1; the translation lies on the -1 line
        trace_part = Fraction(a * d + b * c, det)
        gamma = linear_map(trace_part, Fraction(-2 * a * b, det), Fraction(2 * c * d, det), -trace_part,
                           s * b, s * d)
        g = conjugate_to_alpha(gamma)
        assert max(g.P.total_degree(), g.Q.total_degree()) <= 1
        assert conjugate(g, ALPHA) == gamma

    def test_rejects_non_involutions(self):
        with pytest.raises(NotInvolution):
            classify_involution(SHEAR)
        with pytest.raises(NotInvolution):
            classify_involution(Endo(parse_poly("2*x"), Y))
