"""
Tame automorphisms of Q[x,y]

Every automorphism of the plane is a word in affine and triangular
(de Jonquières) factors. decompose() finds such a word by degree
reduction, invert() inverts it factor by factor, and classify_involution()
conjugates an involution into one of three normal forms.

A Factorization [F1, ..., Fn] stands for the ring map F1∘F2∘...∘Fn.
"""

from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple, Union

from utils.errors import InternalInvariantError, JCCandidate, NotAnAutomorphism, NotConjugateToAlpha, NotInvolution
from utils.logger import get_logger, log_function_call, log_performance

from .endo import ALPHA, IDENTITY, MINUS_IDENTITY, Endo, compose, compose_all, is_involution, is_jacobian_unit, \
    render_endo
from .poly import X, Y, Poly, evaluate_univariate, leading_form

logger = get_logger(__name__)

Rat = Fraction


def _trim(coeffs: Sequence[Rat]) -> Tuple[Rat, ...]:
    coeffs = [Fraction(c) for c in coeffs]
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    return tuple(coeffs)


@dataclass(frozen=True)
class Affine:
    """x -> m11 x + m12 y + t1, y -> m21 x + m22 y + t2"""
    m11: Rat
    m12: Rat
    m21: Rat
    m22: Rat
    t1: Rat = Fraction(0)
    t2: Rat = Fraction(0)

    kind = "affine"

    def __post_init__(self):
        for name in ("m11", "m12", "m21", "m22", "t1", "t2"):
            object.__setattr__(self, name, Fraction(getattr(self, name)))
        if self.det == 0:
            raise ValueError("affine factor with singular matrix")

    @classmethod
    def identity(cls) -> "Affine":
        return cls(1, 0, 0, 1)

    @classmethod
    def from_endo(cls, f: Endo) -> "Affine":
        return cls(f.P.coeff(1, 0), f.P.coeff(0, 1), f.Q.coeff(1, 0), f.Q.coeff(0, 1),
                   f.P.coeff(0, 0), f.Q.coeff(0, 0))

    @property
    def det(self) -> Rat:
        return self.m11 * self.m22 - self.m12 * self.m21

    @property
    def jacobian(self) -> Rat:
        return self.det

    @property
    def matrix(self) -> Tuple[Tuple[Rat, Rat], Tuple[Rat, Rat]]:
        return (self.m11, self.m12), (self.m21, self.m22)

    @property
    def translation(self) -> Tuple[Rat, Rat]:
        return self.t1, self.t2

    @property
    def is_identity(self) -> bool:
        return self == Affine.identity()

    @property
    def is_triangular(self) -> bool:
        return self.m21 == 0

    def to_endo(self) -> Endo:
        return Endo(X * self.m11 + Y * self.m12 + self.t1, X * self.m21 + Y * self.m22 + self.t2)

    def to_triangular(self) -> "Triangular":
        return Triangular(a=self.m11, c=self.m22, d=self.t2, p=(self.t1, self.m12))

    def then(self, inner: "Affine") -> "Affine":
        """compose(self, inner) as an affine factor: matrix M_inner M_self"""
        a, b = self, inner
        return Affine(
            b.m11 * a.m11 + b.m12 * a.m21, b.m11 * a.m12 + b.m12 * a.m22,
            b.m21 * a.m11 + b.m22 * a.m21, b.m21 * a.m12 + b.m22 * a.m22,
            b.m11 * a.t1 + b.m12 * a.t2 + b.t1, b.m21 * a.t1 + b.m22 * a.t2 + b.t2,
        )

    def inverse(self) -> "Affine":
        det = self.det
        i11, i12, i21, i22 = self.m22 / det, -self.m12 / det, -self.m21 / det, self.m11 / det
        return Affine(i11, i12, i21, i22, -(i11 * self.t1 + i12 * self.t2), -(i21 * self.t1 + i22 * self.t2))


@dataclass(frozen=True)
class Triangular:
    """x -> a x + p(y), y -> c y + d; p holds dense coefficients low to high"""
    a: Rat
    c: Rat
    d: Rat = Fraction(0)
    p: Tuple[Rat, ...] = field(default_factory=tuple)

    kind = "triangular"

    def __post_init__(self):
        for name in ("a", "c", "d"):
            object.__setattr__(self, name, Fraction(getattr(self, name)))
        object.__setattr__(self, "p", _trim(self.p))
        if self.a == 0 or self.c == 0:
            raise ValueError("triangular factor with a zero diagonal entry")

    @classmethod
    def shear(cls, p: Sequence[Rat]) -> "Triangular":
        """x -> x + p(y), y -> y"""
        return cls(a=1, c=1, d=0, p=tuple(p))

    @property
    def jacobian(self) -> Rat:
        return self.a * self.c

    @property
    def degree(self) -> int:
        return len(self.p) - 1

    @property
    def p_poly(self) -> Poly:
        return evaluate_univariate(self.p, Y)

    @property
    def is_identity(self) -> bool:
        return self.a == 1 and self.c == 1 and self.d == 0 and not self.p

    @property
    def is_affine(self) -> bool:
        return self.degree <= 1

    def to_endo(self) -> Endo:
        return Endo(X * self.a + self.p_poly, Y * self.c + self.d)

    def to_affine(self) -> Affine:
        p0 = self.p[0] if len(self.p) > 0 else 0
        p1 = self.p[1] if len(self.p) > 1 else 0
        return Affine(self.a, p1, 0, self.c, p0, self.d)

    def then(self, inner: "Triangular") -> "Triangular":
        """compose(self, inner): a = a1 a2, p = a2 p1(y) + p2(c1 y + d1), c = c1 c2, d = c2 d1 + d2"""
        outer = self
        shifted = evaluate_univariate(inner.p, Y * outer.c + outer.d)
        p = outer.p_poly * inner.a + shifted
        return Triangular(a=outer.a * inner.a, c=outer.c * inner.c, d=inner.c * outer.d + inner.d,
                          p=tuple(p.univariate_coeffs("y")) if p else ())

    def inverse(self) -> "Triangular":
        """x -> x/a - p((y - d)/c)/a, y -> (y - d)/c"""
        inv_c = 1 / self.c
        back = evaluate_univariate(self.p, Y * inv_c - self.d * inv_c)
        p = back * (-1 / self.a)
        return Triangular(a=1 / self.a, c=inv_c, d=-self.d * inv_c,
                          p=tuple(p.univariate_coeffs("y")) if p else ())


Elementary = Union[Affine, Triangular]


@dataclass(frozen=True)
class Factorization:
    factors: Tuple[Elementary, ...]
    # deg P + deg Q before the first peel and after each one; empty unless built by decompose
    reduction_degrees: Tuple[int, ...] = field(default=(), compare=False)

    def to_endo(self) -> Endo:
        return compose_all(f.to_endo() for f in self.factors)

    def inverse_endo(self) -> Endo:
        return compose_all(f.inverse().to_endo() for f in reversed(self.factors))

    @property
    def triangular_degrees(self) -> List[int]:
        return [f.degree for f in self.factors if isinstance(f, Triangular)]


# Amalgam normal form

def _in_intersection(f: Elementary) -> bool:
    return f.is_triangular if isinstance(f, Affine) else f.is_affine


def _as_kind(f: Elementary, kind: type) -> Elementary:
    if isinstance(f, kind):
        return f
    return f.to_triangular() if isinstance(f, Affine) else f.to_affine()


def normalize_word(factors: Sequence[Elementary]) -> List[Elementary]:
    """Alternating affine/triangular word with the shared subgroup absorbed"""
    word = list(factors)
    changed = True
    while changed:
        changed = False
        kept = [f for f in word if not f.is_identity]
        if len(kept) != len(word):
            word, changed = kept, True

        merged: List[Elementary] = []
        for f in word:
            if merged and type(merged[-1]) is type(f):
                merged[-1] = merged[-1].then(f)
                changed = True
            else:
                merged.append(f)
        word = merged
        if changed:
            continue

        if len(word) > 1:
            for index, f in enumerate(word):
                if _in_intersection(f):
                    neighbour = word[index - 1] if index > 0 else word[index + 1]
                    word[index] = _as_kind(f, type(neighbour))
                    changed = True
                    break

    if not word:
        return [Affine.identity()]
    if len(word) == 1 and isinstance(word[0], Triangular) and word[0].is_affine:
        return [word[0].to_affine()]
    return word


# Decomposition

def _max_degree(f: Endo) -> int:
    return max(f.P.total_degree(), f.Q.total_degree())


def _degree_sum(f: Endo) -> int:
    return f.P.total_degree() + f.Q.total_degree()


def _peel(P: Poly, Q: Poly) -> Tuple[Poly, List[Rat]]:
    """Subtract c Q^m from P while LF(P) = c LF(Q)^m; returns (rest, p) with P = rest + p(Q)"""
    degree_q = Q.total_degree()
    lead_q = leading_form(Q)
    shear = {}
    rest = P
    while rest and not rest.is_constant() and rest.total_degree() >= degree_q:
        degree = rest.total_degree()
        if degree % degree_q:
            break
        m = degree // degree_q
        target = lead_q ** m
        lead = leading_form(rest)
        monom, coeff = next(target.terms())
        c = lead.coeff(*monom) / coeff
        if c == 0 or lead != target * c:
            break
        shear[m] = shear.get(m, Fraction(0)) + c
        rest = rest - Q ** m * c
    coeffs = [shear.get(n, Fraction(0)) for n in range(max(shear, default=-1) + 1)]
    return rest, coeffs


def _stall(f: Endo, current: Endo):
    if is_jacobian_unit(f):
        text = render_endo(f)
        logger.critical("Tame reduction stalled on a map with constant nonzero Jacobian",
                        endo=text, stalled=render_endo(current))
        raise JCCandidate(text, stalled=render_endo(current))
    raise NotAnAutomorphism(
        "tame reduction stalled",
        endo=render_endo(f),
        stalled=render_endo(current),
        degrees=(current.P.total_degree(), current.Q.total_degree()),
    )


def decompose(f: Endo) -> Factorization:
    """Factor f into affine and triangular automorphisms

    Each round peels the higher-degree image by powers of the other, which
    splits off a shear on the right; a swap moves the larger degree into
    P. Every peel lowers deg P + deg Q. A swap keeps both degrees and is
    always followed by a peel.
    """
    with log_performance("decompose", logger_name=__name__):
        current = f
        right: List[Elementary] = []
        trace = [_degree_sum(current)]
        rounds = 0
        while _max_degree(current) > 1:
            rounds += 1
            P, Q = current.P, current.Q
            if Q.total_degree() > P.total_degree():
                right.insert(0, Affine(0, 1, 1, 0))
                current = Endo(Q, P)
                continue
            if Q.total_degree() < 1:
                _stall(f, current)
            rest, shear = _peel(P, Q)
            if not shear:
                _stall(f, current)
            right.insert(0, Triangular.shear(shear))
            current = Endo(rest, Q)
            trace.append(_degree_sum(current))
            logger.debug("Reduction round", round=rounds, degrees=(rest.total_degree(), Q.total_degree()))

        if _affine_det(current) == 0:
            _stall(f, current)
        factors = normalize_word([Affine.from_endo(current)] + right)
        factorization = Factorization(tuple(factors), reduction_degrees=tuple(trace))
    if factorization.to_endo() != f:
        raise InternalInvariantError("factorization does not reproduce the map", endo=render_endo(f))
    return factorization


def _affine_det(f: Endo) -> Rat:
    return f.P.coeff(1, 0) * f.Q.coeff(0, 1) - f.P.coeff(0, 1) * f.Q.coeff(1, 0)


def invert(f: Endo) -> Endo:
    """Two-sided inverse through the tame factorization"""
    inverse = decompose(f).inverse_endo()
    if compose(f, inverse) != IDENTITY or compose(inverse, f) != IDENTITY:
        raise InternalInvariantError("inverse identities failed", endo=render_endo(f))
    return inverse


def is_automorphism(f: Endo) -> bool:
    """True iff decompose succeeds; JCCandidate propagates"""
    try:
        decompose(f)
    except NotAnAutomorphism:
        return False
    return True


# Involutions

class InvolutionTag(str, Enum):
    IDENTITY = "Identity"
    MINUS_IDENTITY = "MinusIdentity"
    ALPHA_CONJUGATE = "AlphaConjugate"


NORMAL_FORMS = {
    InvolutionTag.IDENTITY: IDENTITY,
    InvolutionTag.MINUS_IDENTITY: MINUS_IDENTITY,
    InvolutionTag.ALPHA_CONJUGATE: ALPHA,
}


@dataclass(frozen=True)
class InvolutionClass:
    """gamma = normalizer⁻¹ ∘ normal_form ∘ normalizer"""
    tag: InvolutionTag
    normalizer: Endo
    conjugator: Optional[Endo] = None

    @property
    def normal_form(self) -> Endo:
        return NORMAL_FORMS[self.tag]


def _affine_normalizer(A: Affine) -> Tuple[InvolutionTag, Affine]:
    """Normal form tag and h with A = h⁻¹ ∘ N ∘ h for an affine involution"""
    half_t1, half_t2 = A.t1 / 2, A.t2 / 2
    if (A.m11, A.m12, A.m21, A.m22) == (1, 0, 0, 1):
        return InvolutionTag.IDENTITY, Affine.identity()
    if (A.m11, A.m12, A.m21, A.m22) == (-1, 0, 0, -1):
        return InvolutionTag.MINUS_IDENTITY, Affine(1, 0, 0, 1, half_t1, half_t2)

    # eigenvectors for +1 and -1 from the columns of I + M and I - M
    plus_cols = [(1 + A.m11, A.m21), (A.m12, 1 + A.m22)]
    minus_cols = [(1 - A.m11, -A.m21), (-A.m12, 1 - A.m22)]
    v_plus = next(v for v in plus_cols if v != (0, 0))
    v_minus = next(v for v in minus_cols if v != (0, 0))
    g1 = ((v_plus[0] + v_minus[0]) / 2, (v_plus[1] + v_minus[1]) / 2)
    g2 = ((v_plus[0] - v_minus[0]) / 2, (v_plus[1] - v_minus[1]) / 2)
    return InvolutionTag.ALPHA_CONJUGATE, Affine(g1[0], g2[0], g1[1], g2[1], half_t1, half_t2)


def _triangular_normalizer(T: Triangular) -> Tuple[InvolutionTag, Endo]:
    """Normal form tag and n with T = n⁻¹ ∘ N ∘ n for a triangular involution"""
    if T.c == -1 and T.d != 0:
        sigma = Triangular(a=1, c=1, d=T.d / 2)
        centred = sigma.then(T).then(sigma.inverse())
    else:
        sigma = Triangular(a=1, c=1)
        centred = T

    tau = Triangular.shear(tuple(-(centred.a / 2) * c for c in centred.p))
    diagonal = Affine(centred.a, 0, 0, centred.c)
    tag, h = _affine_normalizer(diagonal)
    return tag, compose(compose(h.to_endo(), tau.to_endo()), sigma.to_endo())


@log_function_call()
def classify_involution(gamma: Endo) -> InvolutionClass:
    """Conjugate an involution to Identity, (-x, -y) or α

    The factor word is rotated (conjugated by its first factor) until a
    single factor remains, then that factor is normalized in closed form.
    """
    if not is_involution(gamma):
        raise NotInvolution("not an involution", endo=render_endo(gamma))

    word = decompose(gamma).factors
    initial_length = len(word)
    # gamma = k ∘ current ∘ k⁻¹ with k_inv = k⁻¹
    k_inv = IDENTITY
    rotations = 0
    while len(word) > 1:
        if rotations >= 2 * initial_length:
            raise InternalInvariantError("involution word did not shorten under rotation",
                                         endo=render_endo(gamma), length=len(word))
        head = word[0]
        word = normalize_word(list(word[1:]) + [head])
        k_inv = compose(head.inverse().to_endo(), k_inv)
        rotations += 1

    single = word[0]
    if isinstance(single, Affine):
        tag, h = _affine_normalizer(single)
        m = h.to_endo()
    else:
        tag, m = _triangular_normalizer(single)

    normalizer = compose(m, k_inv)
    normal_form = NORMAL_FORMS[tag]
    if compose(compose(invert(normalizer), normal_form), normalizer) != gamma:
        raise InternalInvariantError("involution normalizer failed its round trip", endo=render_endo(gamma),
                                     tag=tag.value)
    logger.debug("Involution classified", tag=tag.value, rotations=rotations)
    conjugator = normalizer if tag is InvolutionTag.ALPHA_CONJUGATE else None
    return InvolutionClass(tag=tag, normalizer=normalizer, conjugator=conjugator)


def conjugate_to_alpha(gamma: Endo) -> Endo:
    """g with gamma = g⁻¹ ∘ α ∘ g"""
    involution_class = classify_involution(gamma)
    if involution_class.tag is not InvolutionTag.ALPHA_CONJUGATE:
        raise NotConjugateToAlpha(f"involution is of class {involution_class.tag.value}",
                                  endo=render_endo(gamma), tag=involution_class.tag.value)
    return involution_class.conjugator
