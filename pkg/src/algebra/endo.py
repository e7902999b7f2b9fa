"""
Endomorphisms and involutions of Q[x,y]

An Endo is given by the image pair (P, Q) = (f(x), f(y)). Composition is
ring-map composition: compose(f, g)(p) = f(g(p)), so the juxtaposition
"f g" reads as compose(f, g).
"""

from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from typing import Iterable, Optional

from utils.errors import HypothesisFailed, NotInvolution, PolySyntaxError

from .poly import DEGREE_CAP, X, Y, ZERO, Poly, jac, parse_poly, render_poly, substitute


@dataclass(frozen=True)
class Endo:
    """Endomorphism x -> P, y -> Q"""
    P: Poly
    Q: Poly

    def __str__(self):
        return render_endo(self)


IDENTITY = Endo(X, Y)
ALPHA = Endo(Y, X)
BETA = Endo(X, -Y)
# Fixes y, negates x
BETA_X = Endo(-X, Y)
MINUS_IDENTITY = Endo(-X, -Y)

BUILTIN_ENDOS = {
    "alpha": ALPHA,
    "beta": BETA,
    "id": IDENTITY,
}


@dataclass(frozen=True)
class SymSkewSplit:
    s: Poly
    k: Poly
    wrt: Endo


def compose(outer: Endo, inner: Endo) -> Endo:
    """Ring-map composition outer(inner(.))"""
    return Endo(substitute(inner.P, outer.P, outer.Q), substitute(inner.Q, outer.P, outer.Q))


def compose_all(maps: Iterable[Endo]) -> Endo:
    return reduce(compose, maps, IDENTITY)


def apply(f: Endo, p: Poly) -> Poly:
    return substitute(p, f.P, f.Q)


def jacobian_of(f: Endo) -> Poly:
    return jac(f.P, f.Q)


def jacobian_constant(f: Endo) -> Optional[Fraction]:
    """The Jacobian as a rational when it is a nonzero constant"""
    j = jacobian_of(f)
    if j.is_constant() and not j.is_zero():
        return j.constant_value()
    return None


def is_jacobian_unit(f: Endo) -> bool:
    return jacobian_constant(f) is not None


def is_involution(f: Endo) -> bool:
    """f∘f = id; the identity counts"""
    return compose(f, f) == IDENTITY


def require_involution(eps: Endo, role: str = "involution"):
    if not is_involution(eps):
        raise NotInvolution(f"{role} is not an involution", endo=render_endo(eps))


def involution_jacobian(eps: Endo) -> Fraction:
    """Jacobian of an involution, always +1 or -1"""
    require_involution(eps)
    return jacobian_constant(eps)


def intertwines(f: Endo, gamma: Endo, delta: Endo) -> bool:
    """f γ = δ f"""
    require_involution(gamma, "gamma")
    require_involution(delta, "delta")
    return compose(f, gamma) == compose(delta, f)


def is_alpha_endo(f: Endo) -> bool:
    return intertwines(f, ALPHA, ALPHA)


def sym_skew_split(w: Poly, eps: Endo) -> SymSkewSplit:
    require_involution(eps)
    image = apply(eps, w)
    return SymSkewSplit(s=(w + image) / 2, k=(w - image) / 2, wrt=eps)


def parity_of(w: Poly, eps: Endo) -> Optional[int]:
    """+1 if eps fixes w, -1 if it negates w, None otherwise"""
    image = apply(eps, w)
    if image == w:
        return 1
    if image == -w:
        return -1
    return None


def jac_parity_formula(i: int, j: int, k: int, l: int, s: int = 1, t: int = 1) -> Poly:
    """Closed form of Jac(x^i y^j + s x^j y^i, x^k y^l + t x^l y^k)

    With s = t = 1 both arguments are symmetric under x <-> y; s or t = -1
    selects the skew variants. Terms with a zero coefficient are dropped
    before their monomial is formed, so no negative exponent appears.
    """
    result = ZERO
    for coeff, ex, ey in (
        (i * l - j * k, i + k - 1, j + l - 1),
        (t * (i * k - j * l), i + l - 1, j + k - 1),
        (s * (j * l - i * k), j + k - 1, i + l - 1),
        (s * t * (j * k - i * l), j + l - 1, i + k - 1),
    ):
        if coeff:
            result = result + Poly.monomial(ex, ey, coeff)
    return result


def fixing_involution(p: Poly) -> Endo:
    """Involution fixing a linear polynomial a*x + b*y + e"""
    if p.total_degree() > 1:
        raise HypothesisFailed("linear", "fixing involutions are only built for linear polynomials",
                               poly=render_poly(p))
    a, b = p.coeff(1, 0), p.coeff(0, 1)
    if a == 0 and b == 0:
        return ALPHA
    if a == 0:
        return BETA_X
    if b == 0:
        return BETA
    return Endo(Y * (b / a), X * (a / b))


# Text form

def render_endo(f: Endo) -> str:
    return f"P = {render_poly(f.P)}; Q = {render_poly(f.Q)}"


def parse_endo(text: str, degree_cap: int = DEGREE_CAP) -> Endo:
    """Parse 'P = <poly>; Q = <poly>' or a built-in name"""
    name = text.strip()
    if name in BUILTIN_ENDOS:
        return BUILTIN_ENDOS[name]

    images = {}
    offset = 0
    for part in text.split(";"):
        if part.strip():
            if "=" not in part:
                position = offset + len(part) - len(part.lstrip())
                raise PolySyntaxError("expected 'P = ...' or 'Q = ...'", text, position)
            lhs, rhs = part.split("=", 1)
            key = lhs.strip()
            if key not in ("P", "Q") or key in images:
                position = offset + len(lhs) - len(lhs.lstrip())
                raise PolySyntaxError(f"unexpected assignment target {key!r}", text, position)
            rhs_offset = offset + len(lhs) + 1
            try:
                images[key] = parse_poly(rhs, degree_cap=degree_cap)
            except PolySyntaxError as e:
                raise PolySyntaxError(e.message.rsplit(" at position", 1)[0], text,
                                      rhs_offset + e.position) from None
        offset += len(part) + 1

    missing = [k for k in ("P", "Q") if k not in images]
    if missing:
        raise PolySyntaxError(f"missing assignment for {missing[0]}", text, len(text))
    return Endo(images["P"], images["Q"])


def linear_map(m11, m12, m21, m22, t1=0, t2=0) -> Endo:
    return Endo(X * m11 + Y * m12 + t1, X * m21 + Y * m22 + t2)
