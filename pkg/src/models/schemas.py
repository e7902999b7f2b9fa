"""
JSON views of algebraic results
Rationals are exact strings ("p/q" or "n"), polynomials use the text grammar
"""

from fractions import Fraction
from typing import Any, Dict, List, Literal, Optional, Union

from pydantic import BaseModel, Field

from algebra.endo import Endo, render_endo
from algebra.membership import MembershipWitness, UniWitness
from algebra.poly import Poly, render_poly
from algebra.tame import Affine, Factorization, InvolutionClass, Triangular
from services.conditions_service import AlphaEndoReport, GeneralizedCert, RestrictionCert, SkResult, \
    SymmetricConjugation, SymmetryCert
from services.corpus_service import CorpusEntry


def rat(value: Fraction) -> str:
    return str(Fraction(value))


class EndoView(BaseModel):
    P: str
    Q: str
    text: str

    @classmethod
    def of(cls, f: Endo) -> "EndoView":
        return cls(P=render_poly(f.P), Q=render_poly(f.Q), text=render_endo(f))


class AffineView(BaseModel):
    kind: Literal["affine"] = "affine"
    matrix: List[List[str]]
    translation: List[str]


class TriangularView(BaseModel):
    kind: Literal["triangular"] = "triangular"
    a: str
    c: str
    d: str
    p: List[str]


FactorView = Union[AffineView, TriangularView]


def factor_view(factor: Union[Affine, Triangular]) -> FactorView:
    if isinstance(factor, Affine):
        return AffineView(matrix=[[rat(v) for v in row] for row in factor.matrix],
                          translation=[rat(v) for v in factor.translation])
    return TriangularView(a=rat(factor.a), c=rat(factor.c), d=rat(factor.d), p=[rat(v) for v in factor.p])


class FactorizationView(BaseModel):
    factors: List[FactorView]
    endo: EndoView

    @classmethod
    def of(cls, factorization: Factorization) -> "FactorizationView":
        return cls(factors=[factor_view(f) for f in factorization.factors],
                   endo=EndoView.of(factorization.to_endo()))


class MembershipView(BaseModel):
    member: bool
    phi: Optional[str] = None
    reduced: Optional[bool] = None

    @classmethod
    def of(cls, witness: Optional[MembershipWitness]) -> "MembershipView":
        if witness is None:
            return cls(member=False)
        return cls(member=True, phi=witness.render(), reduced=witness.reduced)


class UniWitnessView(BaseModel):
    member: bool
    H: Optional[List[str]] = None
    text: Optional[str] = None

    @classmethod
    def of(cls, witness: Optional[UniWitness]) -> "UniWitnessView":
        if witness is None:
            return cls(member=False)
        return cls(member=True, H=[rat(c) for c in witness.h], text=witness.render())


class InvolutionView(BaseModel):
    tag: str
    normal_form: EndoView
    normalizer: EndoView
    conjugator: Optional[EndoView] = None

    @classmethod
    def of(cls, result: InvolutionClass) -> "InvolutionView":
        return cls(
            tag=result.tag.value,
            normal_form=EndoView.of(result.normal_form),
            normalizer=EndoView.of(result.normalizer),
            conjugator=EndoView.of(result.conjugator) if result.conjugator is not None else None,
        )


class RestrictionView(BaseModel):
    phiP: str
    phiQ: str

    @classmethod
    def of(cls, cert: RestrictionCert) -> "RestrictionView":
        return cls(phiP=cert.phiP.render(), phiQ=cert.phiQ.render())


class GeneralizedCertView(BaseModel):
    a: str
    b: str
    branch: str
    H: List[str]
    G: List[str]
    phiP: str
    phiQ: str

    @classmethod
    def of(cls, cert: GeneralizedCert) -> "GeneralizedCertView":
        return cls(
            a=rat(cert.a), b=rat(cert.b), branch=cert.branch.value,
            H=[rat(c) for c in cert.h.h], G=[rat(c) for c in cert.g.h],
            phiP=cert.restriction.phiP.render(), phiQ=cert.restriction.phiQ.render(),
        )


class SymmetryCertView(BaseModel):
    case: str
    a: str
    b: str
    H: List[str]
    phiP: str
    phiQ: str

    @classmethod
    def of(cls, cert: SymmetryCert) -> "SymmetryCertView":
        return cls(case=cert.case.value, a=rat(cert.a), b=rat(cert.b), H=[rat(c) for c in cert.h.h],
                   phiP=cert.phiP.render(), phiQ=cert.phiQ.render())


class InverseView(BaseModel):
    inverse: EndoView
    certificate: Optional[Dict[str, Any]] = None


class SkView(BaseModel):
    inverse: EndoView
    g: EndoView
    phi_s: str
    phi_k: str
    phi_x: str
    phi_y: str

    @classmethod
    def of(cls, result: SkResult) -> "SkView":
        return cls(inverse=EndoView.of(result.inverse), g=EndoView.of(result.g),
                   phi_s=result.phi_s.render(), phi_k=result.phi_k.render(),
                   phi_x=result.phi_x.render(), phi_y=result.phi_y.render())


class AlphaEndoView(BaseModel):
    is_alpha_endo: bool
    jacobian_unit: bool
    inverse: Optional[EndoView] = None

    @classmethod
    def of(cls, report: AlphaEndoReport) -> "AlphaEndoView":
        return cls(is_alpha_endo=report.is_alpha_endo, jacobian_unit=report.jacobian_unit,
                   inverse=EndoView.of(report.inverse) if report.inverse is not None else None)


class SymmetricConjugationView(BaseModel):
    direction: str
    sign: int
    conjugator: EndoView
    involution: EndoView
    image: str

    @classmethod
    def of(cls, result: SymmetricConjugation) -> "SymmetricConjugationView":
        return cls(direction=result.direction.value, sign=result.sign, conjugator=EndoView.of(result.conjugator),
                   involution=EndoView.of(result.involution), image=render_poly(result.image))


class CorpusEntryView(BaseModel):
    index: int
    seed_path: List[int]
    endo: EndoView
    ground_truth: List[FactorView]

    @classmethod
    def of(cls, entry: CorpusEntry) -> "CorpusEntryView":
        return cls(index=entry.index, seed_path=list(entry.seed_path), endo=EndoView.of(entry.endo),
                   ground_truth=[factor_view(f) for f in entry.ground_truth.factors])


class PolyView(BaseModel):
    text: str
    terms: Dict[str, str] = Field(default_factory=dict)

    @classmethod
    def of(cls, p: Poly) -> "PolyView":
        return cls(text=render_poly(p), terms={f"{i},{j}": rat(c) for (i, j), c in p.terms()})


class ErrorView(BaseModel):
    error: str
    message: str
    exit_code: int
    details: Dict[str, Any] = Field(default_factory=dict)
