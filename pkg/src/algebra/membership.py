"""
Subalgebra membership

R ∈ Q[P,Q] is decided by elimination: reduce R modulo a Gröbner basis of
<u - P, v - Q> under a block order with {x,y} above {u,v}. The normal form
lies in Q[u,v] exactly when R is a member, and then it is the witness Φ
with Φ(P,Q) = R. Membership in Q[A] for a single A is decided by peeling
leading forms.
"""

from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from sympy import QQ
from sympy.polys.orderings import ProductOrder, grlex
from sympy.polys.rings import ring

from utils.errors import CertificateFailure, DegreeCapExceeded, HypothesisFailed, JacobianNotUnit, NotInImage, \
    ZeroPolynomial
from utils.logger import get_logger, log_function_call, log_performance

from .endo import Endo, is_jacobian_unit, render_endo
from .poly import ONE, Poly, evaluate_univariate, from_qq, leading_form, render_poly, render_univariate, \
    substitute

logger = get_logger(__name__)

GROEBNER_DEGREE_CAP = 64


def _xy_block(monom):
    return monom[:2]


def _uv_block(monom):
    return monom[2:]


BLOCK_ORDER = ProductOrder((grlex, _xy_block), (grlex, _uv_block))
RING4, _X4, _Y4, _U4, _V4 = ring("x,y,u,v", QQ, BLOCK_ORDER)


def lift(p: Poly):
    """Embed a Poly in x,y into QQ[x,y,u,v]"""
    return RING4.from_dict({(i, j, 0, 0): c for (i, j), c in p.elem.items()})


def lift_uv(phi: Poly):
    """Embed a Poly written in x,y as the same polynomial in u,v"""
    return RING4.from_dict({(0, 0, i, j): c for (i, j), c in phi.elem.items()})


def lower_uv(r) -> Optional[Poly]:
    """Inverse of lift_uv; None when r involves x or y"""
    if any(m[0] or m[1] for m in r.itermonoms()):
        return None
    return Poly.from_terms({(m[2], m[3]): from_qq(c) for m, c in r.iterterms()})


def _total_degree(f) -> int:
    return max((sum(m) for m in f.itermonoms()), default=-1)


@dataclass(frozen=True)
class MembershipWitness:
    """Φ with Φ(P,Q) = R; Φ is stored in x,y standing for u,v"""
    phi: Poly
    # True when phi is a Gröbner normal form, False when built from a certificate
    reduced: bool = True

    def render(self) -> str:
        return render_poly(self.phi, ("u", "v"))


@dataclass(frozen=True)
class UniWitness:
    """H(t) = h[0] + h[1] t + ... with H(A) = R"""
    h: Tuple[Fraction, ...]

    def evaluate(self, arg: Poly) -> Poly:
        return evaluate_univariate(self.h, arg)

    @property
    def degree(self) -> int:
        nonzero = [n for n, c in enumerate(self.h) if c]
        return nonzero[-1] if nonzero else -1

    def render(self, name: str = "t") -> str:
        return render_univariate(self.h, name)


# Buchberger over RING4

def _spoly(f, g):
    R = f.ring
    lcm = R.monomial_lcm(f.LM, g.LM)
    return f.mul_monom(R.monomial_div(lcm, f.LM)) - g.mul_monom(R.monomial_div(lcm, g.LM))


def _select(G, pairs):
    """Normal strategy: smallest lcm degree, ties broken lexicographically"""
    R = G[0].ring

    def key(pair):
        i, j = pair
        lcm = R.monomial_lcm(G[i].LM, G[j].LM)
        return sum(lcm), lcm, i, j

    return min(pairs, key=key)


def _update(G, pairs, f):
    """Gebauer-Möller update of the pair set when f joins the basis"""
    R = f.ring
    lcm = R.monomial_lcm
    mul = R.monomial_mul
    div = R.monomial_div
    lmf = f.LM
    lmG = [g.LM for g in G]

    pairs = {p for p in pairs if (not div(lcm(lmG[p[0]], lmG[p[1]]), lmf) or
                                  lcm(lmG[p[0]], lmG[p[1]]) == lcm(lmG[p[0]], lmf) or
                                  lcm(lmG[p[0]], lmG[p[1]]) == lcm(lmG[p[1]], lmf))}
    lcm_dict = {}
    for i in range(len(G)):
        lcm_dict.setdefault(lcm(lmG[i], lmf), []).append(i)
    minimalized_lcms = []
    for L in sorted(lcm_dict.keys(), key=R.order):
        if all(not div(L, L_) for L_ in minimalized_lcms):
            minimalized_lcms.append(L)
    new_pairs = set()
    for L in minimalized_lcms:
        if not any(lcm(lmG[i], lmf) == mul(lmG[i], lmf) for i in lcm_dict[L]):
            new_pairs.add((min(lcm_dict[L]), len(G)))

    return G + [f], pairs | new_pairs


def _minimalize(G):
    R = G[0].ring
    Gmin = []
    for f in sorted(G, key=lambda h: R.order(h.LM)):
        if all(not R.monomial_div(f.LM, g.LM) for g in Gmin):
            Gmin.append(f)
    return Gmin


def _interreduce(G):
    reduced = []
    for i in range(len(G)):
        reduced.append(G[i].rem(G[:i] + G[i + 1:]).monic())
    return reduced


def groebner(gens: Sequence, degree_cap: int = GROEBNER_DEGREE_CAP) -> List:
    """Reduced Gröbner basis of <gens> in RING4, monic and sorted by leading monomial (largest first)"""
    F = [g for g in gens if g]
    if not F:
        raise ZeroPolynomial("Gröbner basis of the zero ideal")
    for f in F:
        if _total_degree(f) > degree_cap:
            raise DegreeCapExceeded("generator exceeds the Gröbner degree cap", degree=_total_degree(f),
                                    cap=degree_cap)

    R = RING4
    with log_performance("groebner", logger_name=__name__, generators=len(F)):
        G: List = []
        pairs = set()
        for f in F:
            G, pairs = _update(G, pairs, f.monic())

        steps = 0
        while pairs:
            i, j = _select(G, pairs)
            pairs.remove((i, j))
            r = _spoly(G[i], G[j]).rem(G)
            steps += 1
            if r:
                degree = _total_degree(r)
                if degree > degree_cap:
                    raise DegreeCapExceeded("intermediate remainder exceeds the Gröbner degree cap",
                                            degree=degree, cap=degree_cap)
                G, pairs = _update(G, pairs, r.monic())

        basis = sorted(_interreduce(_minimalize(G)), key=lambda g: R.order(g.LM), reverse=True)
    logger.debug("Gröbner basis computed", pairs_processed=steps, basis_size=len(basis))
    return basis


# Membership in Q[P, Q]

def membership_ideal(P: Poly, Q: Poly) -> List:
    return [_U4 - lift(P), _V4 - lift(Q)]


@log_function_call()
def in_subalgebra(R: Poly, P: Poly, Q: Poly, degree_cap: int = GROEBNER_DEGREE_CAP,
                  basis: Optional[List] = None) -> Optional[MembershipWitness]:
    """Witness Φ with Φ(P,Q) = R, or None when R is not in Q[P,Q]

    A basis from groebner(membership_ideal(P, Q)) may be passed to save
    recomputation across several queries with the same P, Q.
    """
    if basis is None:
        basis = groebner(membership_ideal(P, Q), degree_cap)
    remainder = lift(R).rem(basis)
    phi = lower_uv(remainder)
    if phi is None:
        logger.debug("Not a member", R=render_poly(R), P=render_poly(P), Q=render_poly(Q))
        return None
    if substitute(phi, P, Q) != R:
        raise CertificateFailure("membership witness does not reproduce R",
                                 R=render_poly(R), phi=render_poly(phi, ("u", "v")))
    return MembershipWitness(phi=phi, reduced=True)


def verify_witness(witness: MembershipWitness, R: Poly, P: Poly, Q: Poly) -> bool:
    return substitute(witness.phi, P, Q) == R


# Membership in Q[A]

def wang_membership(A: Poly, R: Poly) -> Optional[UniWitness]:
    """H with H(A) = R by peeling leading forms, or None

    Each step needs deg R' = m deg A and LF(R') = c LF(A)^m; then c A^m is
    subtracted. Any mismatch answers None.
    """
    if A.is_constant():
        raise HypothesisFailed("nonconstant", "univariate membership needs a nonconstant A", A=render_poly(A))

    degree_a = A.total_degree()
    lead_a = leading_form(A)
    powers = {0: ONE, 1: A}
    lead_powers = {0: ONE, 1: lead_a}
    coeffs = {}
    rest = R

    while rest:
        if rest.is_constant():
            coeffs[0] = coeffs.get(0, Fraction(0)) + rest.constant_value()
            break
        degree = rest.total_degree()
        if degree % degree_a:
            return None
        m = degree // degree_a
        if m not in lead_powers:
            lead_powers[m] = lead_a ** m
            powers[m] = A ** m
        lead = leading_form(rest)
        monom, target = next(lead_powers[m].terms())
        c = lead.coeff(*monom) / target
        if lead != lead_powers[m] * c:
            return None
        coeffs[m] = coeffs.get(m, Fraction(0)) + c
        rest = rest - powers[m] * c

    top = max(coeffs, default=0)
    witness = UniWitness(tuple(coeffs.get(n, Fraction(0)) for n in range(top + 1)))
    if witness.evaluate(A) != R:
        raise CertificateFailure("univariate witness does not reproduce R", R=render_poly(R), H=witness.render())
    return witness


def sigma0_apply(f: Endo, R: Poly, degree_cap: int = GROEBNER_DEGREE_CAP) -> Poly:
    """σ₀(R) = Φ(Q, P) on T = Q[P, Q], where Φ(P, Q) = R"""
    if not is_jacobian_unit(f):
        raise JacobianNotUnit("σ₀ needs a constant nonzero Jacobian", endo=render_endo(f))
    witness = in_subalgebra(R, f.P, f.Q, degree_cap)
    if witness is None:
        raise NotInImage("not in the image subalgebra", R=render_poly(R), endo=render_endo(f))
    return substitute(witness.phi, f.Q, f.P)
