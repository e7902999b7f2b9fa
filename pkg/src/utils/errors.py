"""
Exception hierarchy for invol
Every error knows the CLI exit status it maps to
"""

from typing import Any, Dict


class InvolError(Exception):
    """Base class for all invol errors"""

    exit_code = 3

    def __init__(self, message: str, **details: Any):
        super().__init__(message)
        self.message = message
        self.details: Dict[str, Any] = details

    def to_dict(self) -> Dict[str, Any]:
        return {
            "error": type(self).__name__,
            "message": self.message,
            "details": {k: str(v) for k, v in self.details.items()},
        }


# Honest mathematical "no" answers

class MathematicalNegative(InvolError):
    exit_code = 1


class NotInvolution(MathematicalNegative):
    pass


class JacobianNotUnit(MathematicalNegative):
    pass


class NotInImage(MathematicalNegative):
    pass


class NotAnAutomorphism(MathematicalNegative):
    """Tame reduction stalled; details carry the stalled pair"""


class NotConjugateToAlpha(MathematicalNegative):
    pass


class NotIntertwining(MathematicalNegative):
    pass


class HypothesisFailed(MathematicalNegative):
    def __init__(self, hypothesis: str, message: str = "", **details: Any):
        super().__init__(message or f"hypothesis failed: {hypothesis}", hypothesis=hypothesis, **details)
        self.hypothesis = hypothesis


class SymmetryHypothesisFailed(HypothesisFailed):
    def __init__(self, message: str = "", **details: Any):
        super().__init__("symmetry", message or "neither image is fixed or negated by the involution", **details)


# Malformed user input

class PolySyntaxError(InvolError, ValueError):
    exit_code = 2

    def __init__(self, message: str, text: str, position: int):
        super().__init__(f"{message} at position {position}", text=text, position=position)
        self.text = text
        self.position = position


class UnknownSuite(InvolError):
    exit_code = 2


# Bug traps and guardrails

class ZeroPolynomial(InvolError, ValueError):
    pass


class DegreeCapExceeded(InvolError):
    pass


class CertificateFailure(InvolError):
    """A certificate identity did not hold; always a bug"""


class InternalInvariantError(InvolError):
    pass


class JCCandidate(InvolError):
    """Constant nonzero Jacobian but tame reduction stalled"""

    exit_code = 4

    def __init__(self, endo_text: str, **details: Any):
        super().__init__(
            f"tame reduction stalled on a map with constant nonzero Jacobian: {endo_text}",
            endo=endo_text,
            **details,
        )
        self.endo_text = endo_text
