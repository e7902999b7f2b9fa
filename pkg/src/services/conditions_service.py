"""
Conditions Service for invol
Certificate-producing invertibility checks: γ,δ intertwining, reduction to
α-endomorphisms, extension and restriction conditions, generalized and
symmetric ε-endomorphisms, and the s,k construction
"""

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import List, Optional, Tuple

from algebra.endo import ALPHA, BETA, BETA_X, IDENTITY, Endo, apply, compose, fixing_involution, intertwines, \
    is_alpha_endo, is_jacobian_unit, jacobian_constant, parity_of, render_endo, require_involution
from algebra.membership import MembershipWitness, UniWitness, in_subalgebra, wang_membership
from algebra.poly import X, Y, Poly, jac, render_poly, substitute
from algebra.tame import conjugate_to_alpha, invert
from utils.config import Config, get_config
from utils.errors import CertificateFailure, HypothesisFailed, JacobianNotUnit, NotAnAutomorphism, NotInImage, \
    NotIntertwining, SymmetryHypothesisFailed
from utils.logger import LoggerMixin


class Branch(str, Enum):
    P = "P-branch"
    Q = "Q-branch"


class SymmetryCase(str, Enum):
    P_SYMMETRIC = "P-symmetric"
    P_SKEW = "P-skew"
    Q_SYMMETRIC = "Q-symmetric"
    Q_SKEW = "Q-skew"


class Direction(str, Enum):
    TO_ALPHA = "toAlpha"
    FROM_ALPHA = "fromAlpha"


@dataclass(frozen=True)
class GammaDeltaPair:
    """f γ = δ f; a pair built by find_gamma_delta also knows g with γ = g⁻¹ ∘ α ∘ g"""
    gamma: Endo
    delta: Endo
    conjugator: Optional[Endo] = None


@dataclass(frozen=True)
class AlphaReduction:
    """core = h ∘ f ∘ g⁻¹ commutes with α"""
    g: Endo
    h: Endo
    core: Endo


@dataclass(frozen=True)
class RestrictionCert:
    phiP: MembershipWitness
    phiQ: MembershipWitness


@dataclass(frozen=True)
class GeneralizedCert:
    a: Fraction
    branch: Branch
    b: Fraction
    h: UniWitness
    g: UniWitness
    epsP: Poly
    epsQ: Poly
    restriction: RestrictionCert


@dataclass(frozen=True)
class SymmetryCert(RestrictionCert):
    case: SymmetryCase
    a: Fraction
    b: Fraction
    h: UniWitness


@dataclass(frozen=True)
class SkResult:
    inverse: Endo
    g: Endo
    phi_s: MembershipWitness
    phi_k: MembershipWitness
    # x = phi_x(P, Q), y = phi_y(P, Q)
    phi_x: MembershipWitness
    phi_y: MembershipWitness


@dataclass(frozen=True)
class SymmetricConjugation:
    direction: Direction
    sign: int
    conjugator: Endo
    involution: Endo
    image: Poly


@dataclass(frozen=True)
class AlphaEndoReport:
    is_alpha_endo: bool
    jacobian_unit: bool
    inverse: Optional[Endo] = None


class ConditionsService(LoggerMixin):
    """Service for the theorem-level invertibility conditions"""

    def __init__(self, config: Optional[Config] = None):
        config = config or get_config()
        self.groebner_degree_cap = config.algebra.groebner_degree_cap
        self.assert_postconditions = config.checks.assert_postconditions
        self.logger.debug("Initializing Conditions Service",
                          groebner_degree_cap=self.groebner_degree_cap,
                          assert_postconditions=self.assert_postconditions)

    # Helpers

    def _require_unit(self, f: Endo) -> Fraction:
        a = jacobian_constant(f)
        if a is None:
            raise JacobianNotUnit("Jacobian is not a nonzero constant", endo=render_endo(f))
        return a

    def _ensure(self, holds: bool, what: str, **details):
        if self.assert_postconditions and not holds:
            self.log_error(f"Postcondition failed: {what}", **details)
            raise CertificateFailure(f"postcondition failed: {what}", **details)

    def _member(self, R: Poly, f: Endo) -> Optional[MembershipWitness]:
        return in_subalgebra(R, f.P, f.Q, self.groebner_degree_cap)

    def _witness(self, phi: Poly, target: Poly, f: Endo) -> MembershipWitness:
        """Wrap a constructed Φ after checking Φ(P, Q) = target"""
        if substitute(phi, f.P, f.Q) != target:
            raise CertificateFailure("constructed witness does not reproduce its target",
                                     phi=render_poly(phi, ("u", "v")), target=render_poly(target))
        return MembershipWitness(phi=phi, reduced=False)

    def _peel(self, A: Poly, R: Poly, label: str) -> UniWitness:
        witness = wang_membership(A, R)
        if witness is None:
            raise CertificateFailure(f"univariate peeling failed for {label}", A=render_poly(A), R=render_poly(R))
        return witness

    # γ,δ machinery

    def find_gamma_delta(self, f: Endo) -> Optional[GammaDeltaPair]:
        """γ = f⁻¹ ∘ α ∘ f and δ = α, or None when f is not invertible"""
        self._require_unit(f)
        try:
            inverse = invert(f)
        except NotAnAutomorphism:
            return None
        # γ∘γ = id and f∘γ = α∘f follow from the two identities invert() certified;
        # γ has degree deg(f)², so composing it again is left out
        return GammaDeltaPair(gamma=compose(compose(inverse, ALPHA), f), delta=ALPHA, conjugator=f)

    def reduce_to_alpha_endo(self, f: Endo, pair: GammaDeltaPair) -> AlphaReduction:
        if pair.conjugator == f and pair.delta == ALPHA:
            # γ = f⁻¹ α f, so g = f and h = id; core = f ∘ f⁻¹ is the identity invert() certified
            return AlphaReduction(g=f, h=IDENTITY, core=IDENTITY)
        if not intertwines(f, pair.gamma, pair.delta):
            raise NotIntertwining("f does not intertwine gamma and delta", endo=render_endo(f),
                                  gamma=render_endo(pair.gamma), delta=render_endo(pair.delta))
        g = conjugate_to_alpha(pair.gamma)
        h = conjugate_to_alpha(pair.delta)
        core = compose(compose(h, f), invert(g))
        self._ensure(is_alpha_endo(core), "core commutes with alpha", core=render_endo(core))
        if is_jacobian_unit(f):
            self._ensure(is_jacobian_unit(core), "core has a unit Jacobian", core=render_endo(core))
        return AlphaReduction(g=g, h=h, core=core)

    def recover_from_core(self, reduction: AlphaReduction) -> Endo:
        """f = h⁻¹ ∘ core ∘ g"""
        return compose(compose(invert(reduction.h), reduction.core), reduction.g)

    def check_alpha_endo(self, f: Endo) -> AlphaEndoReport:
        """α-endomorphism test; an invertible one also gets its explicit inverse"""
        alpha_endo = is_alpha_endo(f)
        unit = is_jacobian_unit(f)
        inverse = invert(f) if alpha_endo and unit else None
        return AlphaEndoReport(is_alpha_endo=alpha_endo, jacobian_unit=unit, inverse=inverse)

    # Extension and restriction

    def check_restriction(self, f: Endo, eps: Endo) -> Optional[RestrictionCert]:
        """Witnesses for ε(P), ε(Q) ∈ Q[P, Q]"""
        self._require_unit(f)
        require_involution(eps, "eps")
        eps_p, eps_q = apply(eps, f.P), apply(eps, f.Q)
        phi_p = self._member(eps_p, f)
        phi_q = self._member(eps_q, f) if phi_p is not None else None
        if phi_p is None or phi_q is None:
            self.logger.warning("Restriction condition fails on a unit-Jacobian map",
                                endo=render_endo(f), eps=render_endo(eps))
            return None
        return RestrictionCert(phiP=phi_p, phiQ=phi_q)

    def check_extension(self, f: Endo) -> Optional[Endo]:
        """The involution σ = f ∘ α ∘ f⁻¹ extending σ₀, or None"""
        self._require_unit(f)
        try:
            inverse = invert(f)
        except NotAnAutomorphism:
            return None
        # σ(P) = f(α(f⁻¹(P))) = f(y) = Q and σ∘σ = id follow from the certified inverse
        return compose(compose(f, ALPHA), inverse)

    # Generalized ε-endomorphisms

    def is_generalized(self, f: Endo, eps: Endo) -> Optional[Branch]:
        require_involution(eps, "eps")
        if not is_jacobian_unit(f):
            return None
        if jacobian_constant(Endo(f.P, apply(eps, f.P))) is not None:
            return Branch.P
        if jacobian_constant(Endo(f.Q, apply(eps, f.Q))) is not None:
            return Branch.Q
        return None

    def invert_via_generalized(self, f: Endo, eps: Endo) -> Tuple[Endo, GeneralizedCert]:
        """Inverse of a generalized ε-endomorphism with its certificate

        With (A, B) = (P, Q) on the P-branch and (Q, P) on the Q-branch,
        a_AB = Jac(A, B), b = Jac(A, εA) and j = Jac(ε):
            εA = (b / a_AB) B + b H(A)
            εB = a_AB j (G(εA) - A / b)
        """
        branch = self.is_generalized(f, eps)
        if branch is None:
            raise HypothesisFailed("generalized", "neither Jac(P, eps(P)) nor Jac(Q, eps(Q)) is a nonzero constant",
                                   endo=render_endo(f), eps=render_endo(eps))
        a = jacobian_constant(f)
        j = jacobian_constant(eps)
        if branch is Branch.P:
            A, B, a_ab, var_a, var_b = f.P, f.Q, a, X, Y
        else:
            A, B, a_ab, var_a, var_b = f.Q, f.P, -a, Y, X
        eps_a, eps_b = apply(eps, A), apply(eps, B)
        b = jac(A, eps_a).constant_value()

        h = self._peel(A, eps_a / b - B / a_ab, "H")
        g = self._peel(eps_a, eps_b / (a_ab * j) + A / b, "G")
        self._ensure(eps_a == B * (b / a_ab) + h.evaluate(A) * b, "eps(A) = (b/a) B + b H(A)",
                     endo=render_endo(f))
        self._ensure(eps_b == (g.evaluate(eps_a) - A / b) * (a_ab * j), "eps(B) = a j (G(eps A) - A/b)",
                     endo=render_endo(f))

        phi_eps_a = var_b * (b / a_ab) + h.evaluate(var_a) * b
        phi_eps_b = (g.evaluate(phi_eps_a) - var_a / b) * (a_ab * j)
        if branch is Branch.P:
            eps_p, eps_q, phi_p, phi_q = eps_a, eps_b, phi_eps_a, phi_eps_b
        else:
            eps_p, eps_q, phi_p, phi_q = eps_b, eps_a, phi_eps_b, phi_eps_a
        restriction = RestrictionCert(phiP=self._witness(phi_p, eps_p, f), phiQ=self._witness(phi_q, eps_q, f))

        cert = GeneralizedCert(a=a, branch=branch, b=b, h=h, g=g, epsP=eps_p, epsQ=eps_q, restriction=restriction)
        self.logger.info("Generalized certificate built", branch=branch.value, a=str(a), b=str(b),
                         H=h.render(), G=g.render())
        return invert(f), cert

    def suggest_generalized_involution(self, f: Endo) -> Optional[Endo]:
        """First of α, β, (-x, y) for which f is a generalized ε-endomorphism"""
        for eps in (ALPHA, BETA, BETA_X):
            if self.is_generalized(f, eps) is not None:
                return eps
        return None

    # Symmetry

    def symmetry_case(self, f: Endo, eps: Endo) -> Optional[SymmetryCase]:
        p_parity = parity_of(f.P, eps)
        if p_parity == 1:
            return SymmetryCase.P_SYMMETRIC
        if p_parity == -1:
            return SymmetryCase.P_SKEW
        q_parity = parity_of(f.Q, eps)
        if q_parity == 1:
            return SymmetryCase.Q_SYMMETRIC
        if q_parity == -1:
            return SymmetryCase.Q_SKEW
        return None

    def invert_via_symmetry(self, f: Endo, eps: Endo) -> Tuple[Endo, SymmetryCert]:
        """Inverse when ε fixes or negates P (or Q)

        P-case: a = Jac(P, Q), b = Jac(P, εQ) and Q/a - εQ/b = H(P), so
        εQ = bQ/a - bH(P). The Q-case mirrors it with a' = Jac(Q, P).
        """
        self._require_unit(f)
        require_involution(eps, "eps")
        case = self.symmetry_case(f, eps)
        if case is None:
            raise SymmetryHypothesisFailed(endo=render_endo(f), eps=render_endo(eps))

        sign = 1 if case in (SymmetryCase.P_SYMMETRIC, SymmetryCase.Q_SYMMETRIC) else -1
        if case in (SymmetryCase.P_SYMMETRIC, SymmetryCase.P_SKEW):
            A, B, var_a, var_b = f.P, f.Q, X, Y
        else:
            A, B, var_a, var_b = f.Q, f.P, Y, X
        a = jac(A, B).constant_value()
        eps_b = apply(eps, B)
        b = jacobian_constant(Endo(A, eps_b))
        if b is None:
            raise CertificateFailure("Jac(A, eps(B)) is not a nonzero constant", endo=render_endo(f))

        h = self._peel(A, B / a - eps_b / b, "H")
        self._ensure(eps_b == B * (b / a) - h.evaluate(A) * b, "eps(B) = bB/a - bH(A)", endo=render_endo(f))

        phi_a = var_a * sign
        phi_b = var_b * (b / a) - h.evaluate(var_a) * b
        if case in (SymmetryCase.P_SYMMETRIC, SymmetryCase.P_SKEW):
            phi_p, phi_q = phi_a, phi_b
        else:
            phi_p, phi_q = phi_b, phi_a
        cert = SymmetryCert(
            phiP=self._witness(phi_p, apply(eps, f.P), f),
            phiQ=self._witness(phi_q, apply(eps, f.Q), f),
            case=case, a=a, b=b, h=h,
        )
        self.logger.info("Symmetry certificate built", case=case.value, a=str(a), b=str(b), H=h.render())
        return invert(f), cert

    def suggest_symmetry_involution(self, f: Endo) -> Optional[Endo]:
        """An involution fixing or negating P or Q, from a fixed candidate list"""
        candidates: List[Endo] = []
        for image in (f.P, f.Q):
            if 0 <= image.total_degree() <= 1:
                candidates.append(fixing_involution(image))
        candidates.extend((ALPHA, BETA, BETA_X))
        for eps in candidates:
            if self.symmetry_case(f, eps) is not None:
                return eps
        return None

    # s, k construction

    def invert_via_sk(self, f: Endo, s: Poly, k: Poly) -> SkResult:
        """Invert f from α-symmetric s and α-skew k in its image with Jac(s, k) constant"""
        if apply(ALPHA, s) != s:
            raise HypothesisFailed("symmetric", "s is not fixed by alpha", s=render_poly(s))
        if apply(ALPHA, k) != -k:
            raise HypothesisFailed("skew", "k is not negated by alpha", k=render_poly(k))
        if jacobian_constant(Endo(s, k)) is None:
            raise HypothesisFailed("jacobian", "Jac(s, k) is not a nonzero constant",
                                   s=render_poly(s), k=render_poly(k))
        phi_s = self._member(s, f)
        if phi_s is None:
            raise NotInImage("s is not in the image subalgebra", s=render_poly(s), endo=render_endo(f))
        phi_k = self._member(k, f)
        if phi_k is None:
            raise NotInImage("k is not in the image subalgebra", k=render_poly(k), endo=render_endo(f))

        g = Endo(s + k, s - k)
        self._ensure(is_alpha_endo(g), "g commutes with alpha", g=render_endo(g))
        self._ensure(is_jacobian_unit(g), "g has a unit Jacobian", g=render_endo(g))

        # x = g⁻¹(g(x)) and g(x), g(y) are polynomials in s, k, hence in P, Q
        g_inverse = invert(g)
        image_x = phi_s.phi + phi_k.phi
        image_y = phi_s.phi - phi_k.phi
        phi_x = self._witness(substitute(g_inverse.P, image_x, image_y), X, f)
        phi_y = self._witness(substitute(g_inverse.Q, image_x, image_y), Y, f)

        inverse = Endo(phi_x.phi, phi_y.phi)
        if self.assert_postconditions:
            self._ensure(inverse == invert(f), "surjectivity inverse agrees with the tame inverse",
                         endo=render_endo(f))
        return SkResult(inverse=inverse, g=g, phi_s=phi_s, phi_k=phi_k, phi_x=phi_x, phi_y=phi_y)

    # Symmetric conjugation

    def symmetric_conjugation(self, P: Poly, direction: Direction, witness: Endo) -> SymmetricConjugation:
        """Move a ±fixed polynomial of an involution to an α-symmetric one, or back"""
        if direction is Direction.TO_ALPHA:
            require_involution(witness, "witness")
            sign = parity_of(P, witness)
            if sign is None:
                raise HypothesisFailed("fixed", "the involution neither fixes nor negates P",
                                       P=render_poly(P), eps=render_endo(witness))
            g = conjugate_to_alpha(witness)
            image = apply(g, P)
            self._ensure(apply(ALPHA, image) == image * sign, "g(P) has the parity of P", P=render_poly(P))
            return SymmetricConjugation(direction=direction, sign=sign, conjugator=g, involution=witness,
                                        image=image)

        image = apply(witness, P)
        sign = parity_of(image, ALPHA)
        if sign is None:
            raise HypothesisFailed("alpha-parity", "g(P) is neither symmetric nor skew under alpha",
                                   P=render_poly(P), g=render_endo(witness))
        involution = compose(compose(invert(witness), ALPHA), witness)
        self._ensure(apply(involution, P) == P * sign, "the involution has P with the same parity",
                     P=render_poly(P))
        return SymmetricConjugation(direction=direction, sign=sign, conjugator=witness, involution=involution,
                                    image=image)
