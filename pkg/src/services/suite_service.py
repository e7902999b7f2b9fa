"""
Suite Service for invol
Property suites over seeded corpora; each property collects pass/fail
counts, counterexamples and per-case timings into a Report
"""

import itertools
import math
import time
from typing import Callable, Dict, List, Optional

from pydantic import BaseModel, Field
from rich.table import Table

from algebra.endo import ALPHA, BETA, IDENTITY, MINUS_IDENTITY, Endo, apply, compose, fixing_involution, \
    jac_parity_formula, jacobian_of, render_endo, sym_skew_split
from algebra.membership import groebner, in_subalgebra, membership_ideal, sigma0_apply, wang_membership
from algebra.poly import ONE, X, Y, Poly, evaluate_univariate, jac, parse_poly, render_poly, substitute
from algebra.tame import Factorization, InvolutionTag, classify_involution, decompose, invert, is_automorphism
from services.conditions_service import ConditionsService
from services.corpus_service import CorpusEntry, CorpusParams, CorpusService, DeterministicRng
from utils.config import Config, SuiteConfig, get_config
from utils.errors import InvolError, JCCandidate, UnknownSuite
from utils.logger import LoggerMixin, log_context

# Keep reports readable
MAX_COUNTEREXAMPLES = 5

# Stream offsets so suites never reuse corpus streams
POLY_STREAM = 2 ** 40
PARITY_STREAM = POLY_STREAM + 1
MEMBERSHIP_STREAM = POLY_STREAM + 2
WANG_STREAM = POLY_STREAM + 3
CONDITIONS_STREAM = POLY_STREAM + 4


class PropertyResult(BaseModel):
    name: str
    passed: int = 0
    failed: int = 0
    seconds: float = 0.0
    max_case_seconds: float = 0.0
    # wall-clock time of each case, in run order
    case_seconds: List[float] = Field(default_factory=list)
    counterexamples: List[str] = Field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.failed == 0


class Report(BaseModel):
    suite: str
    seed: int
    properties: List[PropertyResult] = Field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(p.ok for p in self.properties)

    @property
    def failures(self) -> int:
        return sum(p.failed for p in self.properties)

    def property(self, name: str) -> PropertyResult:
        for result in self.properties:
            if result.name == name:
                return result
        result = PropertyResult(name=name)
        self.properties.append(result)
        return result

    def to_table(self) -> Table:
        table = Table(title=f"suite {self.suite} (seed {self.seed})")
        table.add_column("property")
        table.add_column("passed", justify="right")
        table.add_column("failed", justify="right")
        table.add_column("seconds", justify="right")
        table.add_column("slowest case", justify="right")
        for p in self.properties:
            table.add_row(p.name, str(p.passed), str(p.failed), f"{p.seconds:.3f}", f"{p.max_case_seconds:.3f}")
        return table


def _symmetric_monomial(i: int, j: int, sign: int = 1) -> Poly:
    return Poly.monomial(i, j) + Poly.monomial(j, i) * sign


class SuiteService(LoggerMixin):
    """Service driving the property suites"""

    def __init__(self, config: Optional[Config] = None, params: Optional[CorpusParams] = None):
        config = config or get_config()
        self.params = params or config.corpus
        self.suite_config: SuiteConfig = config.suite
        self.conditions = ConditionsService(config)
        self.degree_cap = config.algebra.groebner_degree_cap
        self._corpus: Optional[List[CorpusEntry]] = None
        self.suites: Dict[str, Callable[[Report], None]] = {
            "poly": self._poly_suite,
            "parity": self._parity_suite,
            "tame": self._tame_suite,
            "membership": self._membership_suite,
            "tfae": self._tfae_suite,
            "conditions": self._conditions_suite,
        }

    @property
    def corpus(self) -> List[CorpusEntry]:
        if self._corpus is None:
            self._corpus = CorpusService(self.params).random_tame()
        return self._corpus

    def run_suite(self, name: str) -> Report:
        if name != "all" and name not in self.suites:
            raise UnknownSuite(f"unknown suite: {name}", suite=name, known=", ".join([*self.suites, "all"]))
        report = Report(suite=name, seed=self.params.seed)
        names = list(self.suites) if name == "all" else [name]
        for suite_name in names:
            self.logger.info(f"Running suite {suite_name}", seed=self.params.seed)
            with log_context(suite=suite_name):
                self.suites[suite_name](report)
        self.logger.info("Suite finished", suite=name, failures=report.failures)
        return report

    def _check(self, report: Report, name: str, case: Callable[[], bool], describe: Callable[[], str]):
        """Run one case of a property; any error other than JCCandidate counts as a failure"""
        result = report.property(name)
        start = time.perf_counter()
        detail = ""
        try:
            ok = bool(case())
        except JCCandidate:
            raise
        except InvolError as e:
            ok, detail = False, f"{type(e).__name__}: {e.message}"
        except Exception as e:
            ok, detail = False, f"{type(e).__name__}: {e}"
        elapsed = time.perf_counter() - start
        result.seconds += elapsed
        result.max_case_seconds = max(result.max_case_seconds, elapsed)
        result.case_seconds.append(elapsed)
        if ok:
            result.passed += 1
            return
        result.failed += 1
        if len(result.counterexamples) < MAX_COUNTEREXAMPLES:
            text = describe()
            result.counterexamples.append(f"{text} ({detail})" if detail else text)
        self.logger.warning("Property failed", property=name, case=describe(), detail=detail)

    # poly

    def _poly_suite(self, report: Report):
        rng = DeterministicRng(self.params.seed, POLY_STREAM)
        for _ in range(self.params.count):
            p, q, r = (rng.poly(3, 10) for _ in range(3))
            px, py = rng.poly(2, 5), rng.poly(2, 5)
            c = Poly.constant(rng.randint(-10, 10))
            describe = lambda: f"p={render_poly(p)}; q={render_poly(q)}; r={render_poly(r)}"

            self._check(report, "poly.ring_axioms", lambda: (
                (p * q) * r == p * (q * r) and p * (q + r) == p * q + p * r
                and p * q == q * p and (p + q) + r == p + (q + r)
            ), describe)
            self._check(report, "poly.jac_antisymmetric", lambda: (
                jac(p, q) == -jac(q, p) and jac(p, c).is_zero()
            ), describe)
            self._check(report, "poly.jac_derivation", lambda: (
                jac(p * r, q) == p * jac(r, q) + r * jac(p, q)
            ), describe)
            self._check(report, "poly.substitute_homomorphism", lambda: (
                substitute(p + q, px, py) == substitute(p, px, py) + substitute(q, px, py)
                and substitute(p * q, px, py) == substitute(p, px, py) * substitute(q, px, py)
            ), describe)

        for _ in range(self.params.count):
            p = rng.poly(rng.randint(0, 12), 10 ** 6)
            self._check(report, "poly.parse_render_round_trip",
                        lambda: parse_poly(render_poly(p)) == p, lambda: render_poly(p))

    # parity

    def _parity_suite(self, report: Report):
        bound = self.suite_config.parity_max_exponent
        for i, j, k, l in itertools.product(range(bound + 1), repeat=4):
            self._check(report, "parity.formula_matches_jacobian", lambda: (
                jac_parity_formula(i, j, k, l) == jac(_symmetric_monomial(i, j), _symmetric_monomial(k, l))
            ), lambda: f"(i,j,k,l)=({i},{j},{k},{l})")

        signed_bound = min(bound, 3)
        for i, j, k, l in itertools.product(range(signed_bound + 1), repeat=4):
            for s, t in ((1, -1), (-1, 1), (-1, -1)):
                self._check(report, "parity.signed_formula_matches_jacobian", lambda: (
                    jac_parity_formula(i, j, k, l, s, t)
                    == jac(_symmetric_monomial(i, j, s), _symmetric_monomial(k, l, t))
                ), lambda: f"(i,j,k,l,s,t)=({i},{j},{k},{l},{s},{t})")

        rng = DeterministicRng(self.params.seed, PARITY_STREAM)
        degree = self.suite_config.random_degree
        for _ in range(self.suite_config.random_pairs):
            first = sym_skew_split(rng.poly(degree, 10), ALPHA)
            second = sym_skew_split(rng.poly(degree, 10), ALPHA)
            describe = lambda: f"w1 = {render_poly(first.s + first.k)}; w2 = {render_poly(second.s + second.k)}"
            self._check(report, "parity.sym_sym_is_skew", lambda: (
                apply(ALPHA, jac(first.s, second.s)) == -jac(first.s, second.s)
            ), describe)
            self._check(report, "parity.skew_skew_is_skew", lambda: (
                apply(ALPHA, jac(first.k, second.k)) == -jac(first.k, second.k)
            ), describe)
            self._check(report, "parity.sym_skew_is_sym", lambda: (
                apply(ALPHA, jac(first.s, second.k)) == jac(first.s, second.k)
            ), describe)
            self._check(report, "parity.split_idempotent", lambda: (
                sym_skew_split(first.s, ALPHA).k.is_zero() and sym_skew_split(first.k, ALPHA).s.is_zero()
            ), describe)

    # tame

    def _tame_suite(self, report: Report):
        corpus = self.corpus
        for entry in corpus:
            f = entry.endo
            describe = lambda: f"#{entry.index}: {render_endo(f)}"
            # one factorization per entry; its inverse is checked once and then reused
            cache: Dict[str, object] = {}

            def factorization() -> Factorization:
                if "factorization" not in cache:
                    cache["factorization"] = decompose(f)
                return cache["factorization"]

            def inverse_identities():
                inverse = factorization().inverse_endo()
                ok = compose(f, inverse) == IDENTITY and compose(inverse, f) == IDENTITY
                if ok:
                    cache["inverse"] = inverse
                return ok

            def chain_rule_at_identity():
                inverse = cache.get("inverse") or invert(f)
                return jacobian_of(inverse) * apply(inverse, jacobian_of(f)) == ONE

            def degree_product():
                degrees = factorization().triangular_degrees
                top = max(f.P.total_degree(), f.Q.total_degree())
                return math.prod(degrees) == top and len(degrees) <= top

            def reduction_degrees_decrease():
                trace = factorization().reduction_degrees
                return all(a > b for a, b in zip(trace, trace[1:]))

            self._check(report, "tame.ground_truth_composes", lambda: entry.ground_truth.to_endo() == f, describe)
            self._check(report, "tame.decompose_round_trip", lambda: factorization().to_endo() == f, describe)
            self._check(report, "tame.inverse_identities", inverse_identities, describe)
            self._check(report, "tame.chain_rule_at_identity", chain_rule_at_identity, describe)
            self._check(report, "tame.degree_is_product_of_triangular_degrees", degree_product, describe)
            self._check(report, "tame.reduction_degrees_decrease", reduction_degrees_decrease, describe)

        for f, g in zip(corpus, corpus[1:]):
            self._check(report, "tame.chain_rule", lambda: (
                jacobian_of(compose(f.endo, g.endo)) == apply(f.endo, jacobian_of(g.endo)) * jacobian_of(f.endo)
            ), lambda: f"f = #{f.index}; g = #{g.index}")

        self._check(report, "tame.non_automorphism_rejected", lambda: not is_automorphism(Endo(X ** 2, Y)),
                    lambda: "P = x^2; Q = y")

    # membership

    def _membership_suite(self, report: Report):
        rng = DeterministicRng(self.params.seed, MEMBERSHIP_STREAM)
        for entry in self.corpus:
            f = entry.endo
            inverse = invert(f)
            basis = groebner(membership_ideal(f.P, f.Q), self.degree_cap)
            for _ in range(self.suite_config.membership_samples):
                R = rng.poly(rng.randint(0, self.suite_config.membership_degree), 5)
                describe = lambda: f"#{entry.index}: R = {render_poly(R)}"

                def witness_is_inverse_image():
                    witness = in_subalgebra(R, f.P, f.Q, self.degree_cap, basis=basis)
                    return witness is not None and witness.phi == apply(inverse, R)

                self._check(report, "membership.witness_is_inverse_image", witness_is_inverse_image, describe)
                self._check(report, "membership.sigma0_involutive", lambda: (
                    sigma0_apply(f, sigma0_apply(f, R, self.degree_cap), self.degree_cap) == R
                ), describe)

            self._check(report, "membership.generators_reachable", lambda: (
                in_subalgebra(X, f.P, f.Q, self.degree_cap, basis=basis) is not None
                and in_subalgebra(Y, f.P, f.Q, self.degree_cap, basis=basis) is not None
                and is_automorphism(f)
            ), lambda: f"#{entry.index}: {render_endo(f)}")

        self._check(report, "membership.negative_control", lambda: in_subalgebra(X, X ** 2, Y) is None,
                    lambda: "x in Q[x^2, y]")

        wang_rng = DeterministicRng(self.params.seed, WANG_STREAM)
        for _ in range(self.suite_config.wang_pairs):
            A = wang_rng.poly(wang_rng.randint(1, self.suite_config.wang_max_a_degree), 5)
            if A.is_constant():
                A = A + X
            h_degree = wang_rng.randint(0, self.suite_config.wang_max_h_degree)
            coeffs = [wang_rng.randint(-5, 5) for _ in range(h_degree)] + [wang_rng.nonzero(5)]
            R = evaluate_univariate(coeffs, A)

            def recovers_h():
                witness = wang_membership(A, R)
                return witness is not None and list(witness.h) == coeffs

            self._check(report, "membership.wang_recovers_h", recovers_h,
                        lambda: f"A = {render_poly(A)}; H = {coeffs}")

        for entry in self.corpus:
            P = entry.endo.P
            self._check(report, "membership.wang_on_unit_jacobian_pairs", lambda: (
                wang_membership(P, P * P - P * 3 + 7) is not None
            ), lambda: f"#{entry.index}: A = {render_poly(P)}")

        self._check(report, "membership.wang_negative_control", lambda: wang_membership(X, Y) is None,
                    lambda: "y in Q[x]")

    # tfae

    def _tfae_suite(self, report: Report):
        for entry in self.corpus:
            f = entry.endo
            describe = lambda: f"#{entry.index}: {render_endo(f)}"

            def loop():
                pair = self.conditions.find_gamma_delta(f)
                if pair is None:
                    return False
                reduction = self.conditions.reduce_to_alpha_endo(f, pair)
                invert(reduction.core)
                return self.conditions.recover_from_core(reduction) == f

            self._check(report, "tfae.loop_recovers_f", loop, describe)

    # conditions

    def _conditions_suite(self, report: Report):
        conditions = self.conditions
        self._golden_examples(report)

        for entry in self.corpus:
            f = entry.endo
            describe = lambda: f"#{entry.index}: {render_endo(f)}"
            self._check(report, "conditions.restriction_alpha",
                        lambda: conditions.check_restriction(f, ALPHA) is not None, describe)
            self._check(report, "conditions.restriction_beta",
                        lambda: conditions.check_restriction(f, BETA) is not None, describe)
            self._check(report, "conditions.extension", lambda: (
                conditions.check_extension(f) is not None and is_automorphism(f)
            ), describe)

            eps = conditions.suggest_generalized_involution(f)
            if eps is not None:
                self._check(report, "conditions.generalized_path_agrees",
                            lambda: conditions.invert_via_generalized(f, eps)[0] == invert(f), describe)
            eps_sym = conditions.suggest_symmetry_involution(f)
            if eps_sym is not None:
                self._check(report, "conditions.symmetry_path_agrees",
                            lambda: conditions.invert_via_symmetry(f, eps_sym)[0] == invert(f), describe)

        for f, eps in (
            (Endo(X + Y ** 2, Y), ALPHA),
            (Endo(X * 2 + Y * 3, X + Y * 2), ALPHA),
            (Endo(X + Y, X - Y), BETA),
        ):
            self._check(report, "conditions.generalized_path_agrees",
                        lambda: conditions.invert_via_generalized(f, eps)[0] == invert(f),
                        lambda: render_endo(f))
        for f, eps in ((Endo(X + Y, Y), ALPHA), (Endo(X, Y + X ** 2), BETA)):
            self._check(report, "conditions.symmetry_path_agrees",
                        lambda: conditions.invert_via_symmetry(f, eps)[0] == invert(f),
                        lambda: render_endo(f))

        rng = DeterministicRng(self.params.seed, CONDITIONS_STREAM)
        for _ in range(self.suite_config.involution_samples // 4 or 1):
            q = [rng.randint(-3, 3) for _ in range(rng.randint(0, 2))]
            s = X + Y + evaluate_univariate(q, (X - Y) ** 2)
            k = X - Y
            f = Endo(s, k)

            def sk_remark():
                result = conditions.invert_via_sk(f, s, k)
                return result.g == compose(f, Endo(X + Y, X - Y)) and result.inverse == invert(f)

            self._check(report, "conditions.sk_builds_f_h", sk_remark, lambda: render_endo(f))

        # conjugation squares the degree
        small = [e.endo for e in self.corpus if max(e.endo.P.total_degree(), e.endo.Q.total_degree()) <= 4]
        for n in range(self.suite_config.involution_samples if small else 0):
            g = small[n % len(small)]
            gamma = compose(compose(invert(g), ALPHA), g)
            self._check(report, "conditions.alpha_conjugates_classified", lambda: (
                classify_involution(gamma).tag is InvolutionTag.ALPHA_CONJUGATE
            ), lambda: render_endo(gamma))

        for gamma, tag in (
            (MINUS_IDENTITY, InvolutionTag.MINUS_IDENTITY),
            (Endo(-X + Y ** 2, -Y), InvolutionTag.MINUS_IDENTITY),
            (BETA, InvolutionTag.ALPHA_CONJUGATE),
        ):
            self._check(report, "conditions.fixed_involutions_classified",
                        lambda: classify_involution(gamma).tag is tag, lambda: render_endo(gamma))

    def _golden_examples(self, report: Report):
        conditions = self.conditions
        name = "conditions.golden_examples"
        self._check(report, name, lambda: jac(X + Y ** 2, Y) == ONE, lambda: "Jac(x+y^2, y) = 1")
        self._check(report, name, lambda: jac(Y, X) == -ONE, lambda: "Jac(y, x) = -1")
        self._check(report, name, lambda: (
            conditions.is_generalized(Endo(X + Y, X - Y), ALPHA) is None
            and conditions.is_generalized(Endo(X + Y, X - Y), BETA) is not None
        ), lambda: "(x+y, x-y) generalized for beta only")

        rng = DeterministicRng(self.params.seed, CONDITIONS_STREAM + 1)
        for _ in range(20):
            a, b = rng.nonzero(9), rng.nonzero(9)
            w = X * a + Y * b
            eps = fixing_involution(w)
            self._check(report, name, lambda: (
                jac(w, apply(ALPHA, w)) == Poly.constant(a * a - b * b)
                and compose(eps, eps) == IDENTITY and apply(eps, w) == w
            ), lambda: f"a={a}, b={b}")
