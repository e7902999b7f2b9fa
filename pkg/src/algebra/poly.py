"""
Exact bivariate polynomials over the rationals

Poly wraps an element of sympy's sparse ring QQ[x,y] (grlex). Values are
immutable; every operation returns a new Poly. Coefficients cross the
public boundary as fractions.Fraction.
"""

import re
from fractions import Fraction
from typing import Dict, Iterator, List, Sequence, Tuple, Union

from sympy import QQ
from sympy.polys.orderings import grlex
from sympy.polys.rings import ring

from utils.errors import DegreeCapExceeded, PolySyntaxError, ZeroPolynomial

RING, _X, _Y = ring("x,y", QQ, grlex)

# Per-variable exponent limit
DEGREE_CAP = 2 ** 16

Monomial = Tuple[int, int]
Scalar = Union[int, Fraction]


def to_qq(value: Scalar):
    value = Fraction(value)
    return QQ(value.numerator, value.denominator)


def from_qq(value) -> Fraction:
    return Fraction(int(value.numerator), int(value.denominator))


class Poly:
    """Immutable sparse polynomial in x, y with rational coefficients"""

    __slots__ = ("_elem",)

    def __init__(self, elem=None):
        object.__setattr__(self, "_elem", RING.zero if elem is None else elem)

    def __setattr__(self, name, value):
        raise AttributeError("Poly is immutable")

    # Construction

    @classmethod
    def constant(cls, value: Scalar) -> "Poly":
        return cls(RING.ground_new(to_qq(value)))

    @classmethod
    def monomial(cls, i: int, j: int, coeff: Scalar = 1) -> "Poly":
        _check_exponents(i, j)
        return cls.from_terms({(i, j): coeff})

    @classmethod
    def from_terms(cls, terms: Dict[Monomial, Scalar]) -> "Poly":
        data = {}
        for (i, j), c in terms.items():
            if c:
                _check_exponents(i, j)
                data[(i, j)] = to_qq(c)
        return cls(RING.from_dict(data))

    @classmethod
    def univariate(cls, coeffs: Sequence[Scalar], var: str = "y") -> "Poly":
        """Dense low-to-high coefficients in one variable"""
        if var == "x":
            return cls.from_terms({(n, 0): c for n, c in enumerate(coeffs)})
        return cls.from_terms({(0, n): c for n, c in enumerate(coeffs)})

    # Inspection

    @property
    def elem(self):
        return self._elem

    def is_zero(self) -> bool:
        return not self._elem

    def is_constant(self) -> bool:
        return all(m == (0, 0) for m in self._elem.keys())

    def constant_value(self) -> Fraction:
        """Value of a constant polynomial (0 for the zero polynomial)"""
        if not self.is_constant():
            raise ValueError(f"not a constant: {self}")
        return self.coeff(0, 0)

    def coeff(self, i: int, j: int) -> Fraction:
        return from_qq(self._elem.get((i, j), QQ.zero))

    def terms(self) -> Iterator[Tuple[Monomial, Fraction]]:
        """Terms in canonical grlex order, largest first"""
        for monom, c in self._elem.terms():
            yield monom, from_qq(c)

    def monomials(self) -> List[Monomial]:
        return [m for m, _ in self._elem.terms()]

    def total_degree(self) -> int:
        """Total degree; -1 for the zero polynomial"""
        if not self._elem:
            return -1
        return max(i + j for i, j in self._elem.keys())

    def degree_in(self, var: str) -> int:
        if not self._elem:
            return -1
        k = 0 if var == "x" else 1
        return max(m[k] for m in self._elem.keys())

    def uses_only(self, var: str) -> bool:
        k = 1 if var == "x" else 0
        return all(m[k] == 0 for m in self._elem.keys())

    def univariate_coeffs(self, var: str = "y") -> List[Fraction]:
        """Dense coefficients of a polynomial in one variable, low to high"""
        if not self.uses_only(var):
            raise ValueError(f"{self} is not univariate in {var}")
        k = 0 if var == "x" else 1
        coeffs = [Fraction(0)] * (self.degree_in(var) + 1)
        for monom, c in self.terms():
            coeffs[monom[k]] = c
        return coeffs

    # Arithmetic

    def _lift(self, other) -> "Poly":
        if isinstance(other, Poly):
            return other
        if isinstance(other, (int, Fraction)):
            return Poly.constant(other)
        return NotImplemented

    def __add__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return Poly(self._elem + other._elem)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return Poly(self._elem - other._elem)

    def __rsub__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return Poly(other._elem - self._elem)

    def __neg__(self):
        return Poly(-self._elem)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return Poly(self._elem * to_qq(other))
        other = self._lift(other)
        if other is NotImplemented:
            return other
        for var in ("x", "y"):
            if self.degree_in(var) + other.degree_in(var) > DEGREE_CAP:
                raise DegreeCapExceeded("product exceeds the degree cap", var=var, cap=DEGREE_CAP)
        return Poly(self._elem * other._elem)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if not isinstance(other, (int, Fraction)):
            return NotImplemented
        if other == 0:
            raise ZeroDivisionError("division of a polynomial by zero")
        return Poly(self._elem * to_qq(1 / Fraction(other)))

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power of a polynomial")
        for var in ("x", "y"):
            if self.degree_in(var) * n > DEGREE_CAP:
                raise DegreeCapExceeded("power exceeds the degree cap", var=var, power=n, cap=DEGREE_CAP)
        return Poly(self._elem ** n)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Poly.constant(other)
        if not isinstance(other, Poly):
            return NotImplemented
        return self._elem == other._elem

    def __hash__(self):
        return hash(self._elem)

    def __bool__(self):
        return bool(self._elem)

    def __str__(self):
        return render_poly(self)

    def __repr__(self):
        return f"Poly({render_poly(self)!r})"

    def __reduce__(self):
        return (parse_poly, (render_poly(self),))


def _check_exponents(i: int, j: int):
    if i < 0 or j < 0:
        raise ValueError(f"negative exponent in monomial ({i}, {j})")
    if i > DEGREE_CAP or j > DEGREE_CAP:
        raise DegreeCapExceeded("monomial exceeds the degree cap", monomial=(i, j), cap=DEGREE_CAP)


ZERO = Poly()
ONE = Poly.constant(1)
X = Poly(_X)
Y = Poly(_Y)


# Ring operations

def add(p: Poly, q: Poly) -> Poly:
    return p + q


def mul(p: Poly, q: Poly) -> Poly:
    return p * q


def partial(p: Poly, var: str) -> Poly:
    """Formal partial derivative with respect to 'x' or 'y'"""
    if var not in ("x", "y"):
        raise ValueError(f"unknown variable: {var}")
    return Poly(p.elem.diff(_X if var == "x" else _Y))


def jac(p: Poly, q: Poly) -> Poly:
    """Jacobian determinant p_x q_y - p_y q_x"""
    return partial(p, "x") * partial(q, "y") - partial(p, "y") * partial(q, "x")


def substitute(p: Poly, px: Poly, py: Poly, degree_cap: int = DEGREE_CAP) -> Poly:
    """Image of p under the ring map x -> px, y -> py"""
    for var in ("x", "y"):
        dx, dy = max(px.degree_in(var), 0), max(py.degree_in(var), 0)
        bound = max((i * dx + j * dy for i, j in p.monomials()), default=0)
        if bound > degree_cap:
            raise DegreeCapExceeded("substitution exceeds the degree cap", var=var, bound=bound, cap=degree_cap)
    if p.is_constant():
        return p
    return Poly(p.elem.compose([(_X, px.elem), (_Y, py.elem)]))


def leading_form(p: Poly) -> Poly:
    """Sum of the terms of maximal total degree"""
    if p.is_zero():
        raise ZeroPolynomial("leading form of the zero polynomial")
    top = p.total_degree()
    return Poly.from_terms({m: c for m, c in p.terms() if m[0] + m[1] == top})


def evaluate_univariate(coeffs: Sequence[Scalar], arg: Poly) -> Poly:
    """H(arg) for H given by dense low-to-high coefficients (Horner)"""
    result = ZERO
    for c in reversed(list(coeffs)):
        result = result * arg + Fraction(c)
    return result


# Text form

VARIABLES = ("x", "y")

_TOKEN = re.compile(r"\s*(?:(?P<int>[0-9]+)|(?P<var>[A-Za-z_][A-Za-z_0-9]*)|(?P<op>[-+*/^]))")


def _render_monomial(exps: Sequence[int], names: Sequence[str]) -> str:
    parts = []
    for name, e in zip(names, exps):
        if e == 1:
            parts.append(name)
        elif e > 1:
            parts.append(f"{name}^{e}")
    return "*".join(parts)


def render_terms(terms: Dict[Tuple[int, ...], Fraction], names: Sequence[str]) -> str:
    """Render a term map, lexicographic with the first name largest"""
    if not terms:
        return "0"
    pieces = []
    for exps in sorted(terms, reverse=True):
        c = terms[exps]
        monomial = _render_monomial(exps, names)
        magnitude = abs(c)
        if monomial and magnitude == 1:
            body = monomial
        elif monomial:
            body = f"{magnitude}*{monomial}"
        else:
            body = str(magnitude)
        if not pieces:
            pieces.append(f"-{body}" if c < 0 else body)
        else:
            pieces.append(f"- {body}" if c < 0 else f"+ {body}")
    return " ".join(pieces)


def render_poly(p: Poly, names: Sequence[str] = VARIABLES) -> str:
    """Canonical text, e.g. x^2 + 2*x*y^2 - 1/2"""
    return render_terms(dict(p.terms()), names)


def render_univariate(coeffs: Sequence[Scalar], name: str = "t") -> str:
    return render_terms({(n,): Fraction(c) for n, c in enumerate(coeffs) if c}, (name,))


class _Parser:
    """Recursive descent over the polynomial grammar

    expr     := [sign] term (sign term)*
    term     := coeff ['*'] monomials | coeff | monomials
    coeff    := INT ['/' INT]
    monomial := VAR ['^' INT>0]
    """

    def __init__(self, text: str, names: Sequence[str], degree_cap: int = DEGREE_CAP):
        self.text = text
        self.names = tuple(names)
        self.degree_cap = min(degree_cap, DEGREE_CAP)
        self.tokens = self._tokenize()
        self.index = 0

    def _tokenize(self) -> List[Tuple[str, str, int]]:
        tokens = []
        pos = 0
        text = self.text
        while pos < len(text):
            if text[pos:].strip() == "":
                break
            match = _TOKEN.match(text, pos)
            if not match:
                offset = pos + len(text[pos:]) - len(text[pos:].lstrip())
                raise PolySyntaxError(f"unexpected character {text[offset]!r}", text, offset)
            kind = match.lastgroup
            start = match.start(kind)
            tokens.append((kind, match.group(kind), start))
            pos = match.end()
        tokens.append(("end", "", len(text)))
        return tokens

    def peek(self) -> Tuple[str, str, int]:
        return self.tokens[self.index]

    def advance(self) -> Tuple[str, str, int]:
        token = self.tokens[self.index]
        self.index += 1
        return token

    def error(self, message: str, token=None):
        token = token or self.peek()
        found = token[1] or "end of input"
        raise PolySyntaxError(f"{message}, found {found!r}", self.text, token[2])

    def parse(self) -> Dict[Tuple[int, ...], Fraction]:
        terms: Dict[Tuple[int, ...], Fraction] = {}
        sign = 1
        kind, value, _ = self.peek()
        if kind == "op" and value in "+-":
            self.advance()
            sign = -1 if value == "-" else 1
        while True:
            coeff, exps = self.term()
            terms[exps] = terms.get(exps, Fraction(0)) + sign * coeff
            kind, value, _ = self.peek()
            if kind == "end":
                break
            if kind == "op" and value in "+-":
                self.advance()
                sign = -1 if value == "-" else 1
                continue
            self.error("expected '+', '-' or end of input")
        return {e: c for e, c in terms.items() if c != 0}

    def term(self) -> Tuple[Fraction, Tuple[int, ...]]:
        kind, value, _ = self.peek()
        coeff = Fraction(1)
        if kind == "int":
            coeff = self.coefficient()
            kind, value, _ = self.peek()
            if kind == "op" and value == "*":
                self.advance()
                return coeff, self.monomials()
            if kind == "var":
                return coeff, self.monomials()
            return coeff, (0,) * len(self.names)
        if kind == "var":
            return coeff, self.monomials()
        self.error("expected a coefficient or a variable")

    def coefficient(self) -> Fraction:
        _, numerator, _ = self.advance()
        kind, value, _ = self.peek()
        if kind == "op" and value == "/":
            self.advance()
            token = self.peek()
            if token[0] != "int":
                self.error("expected a denominator")
            self.advance()
            if int(token[1]) == 0:
                raise PolySyntaxError("zero denominator", self.text, token[2])
            return Fraction(int(numerator), int(token[1]))
        return Fraction(int(numerator))

    def monomials(self) -> Tuple[int, ...]:
        exps = [0] * len(self.names)
        while True:
            token = self.peek()
            if token[0] != "var":
                self.error("expected a variable")
            if token[1] not in self.names:
                raise PolySyntaxError(f"unknown variable {token[1]!r}", self.text, token[2])
            self.advance()
            power, at = 1, token[2]
            kind, value, _ = self.peek()
            if kind == "op" and value == "^":
                self.advance()
                exponent = self.peek()
                if exponent[0] != "int":
                    self.error("expected a positive exponent")
                if int(exponent[1]) == 0:
                    raise PolySyntaxError("exponent must be positive", self.text, exponent[2])
                self.advance()
                power, at = int(exponent[1]), exponent[2]
            var = self.names.index(token[1])
            exps[var] += power
            if exps[var] > self.degree_cap:
                raise PolySyntaxError(f"exponent exceeds the degree cap {self.degree_cap}", self.text, at)
            kind, value, _ = self.peek()
            if kind == "op" and value == "*" and self.tokens[self.index + 1][0] == "var":
                self.advance()
                continue
            return tuple(exps)


def parse_terms(text: str, names: Sequence[str], degree_cap: int = DEGREE_CAP) -> Dict[Tuple[int, ...], Fraction]:
    return _Parser(text, names, degree_cap).parse()


def parse_poly(text: str, names: Sequence[str] = VARIABLES, degree_cap: int = DEGREE_CAP) -> Poly:
    """Parse the polynomial text grammar; raises PolySyntaxError with position

    Exponents above degree_cap (never above DEGREE_CAP) are syntax errors.
    """
    if len(names) != 2:
        raise ValueError("parse_poly needs exactly two variable names")
    terms = parse_terms(text, names, degree_cap)
    return Poly.from_terms({(e[0], e[1]): c for e, c in terms.items()})


def parse_univariate(text: str, name: str = "t") -> List[Fraction]:
    """Dense low-to-high coefficients of a polynomial in one variable"""
    terms = parse_terms(text, (name,))
    if not terms:
        return [Fraction(0)]
    coeffs = [Fraction(0)] * (max(e[0] for e in terms) + 1)
    for (n,), c in terms.items():
        coeffs[n] = c
    return coeffs
