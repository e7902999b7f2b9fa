"""
Command line interface for invol
Every command prints text, or JSON with --json; exit status follows the error class
"""

import json
import sys
from dataclasses import dataclass
from typing import Any, Optional, Sequence

import click
from pydantic import BaseModel
from rich.console import Console

from algebra.endo import ALPHA, Endo, apply, compose, parse_endo, render_endo
from algebra.membership import in_subalgebra, sigma0_apply, wang_membership
from algebra.poly import Poly, jac, parse_poly, render_poly
from algebra.tame import classify_involution, conjugate_to_alpha, decompose, invert
from models.schemas import AlphaEndoView, CorpusEntryView, EndoView, ErrorView, FactorizationView, \
    GeneralizedCertView, InverseView, InvolutionView, MembershipView, PolyView, RestrictionView, SkView, \
    SymmetricConjugationView, SymmetryCertView, UniWitnessView
from services.conditions_service import ConditionsService, Direction
from services.corpus_service import CorpusService
from services.suite_service import SuiteService
from utils.config import Config, CorpusConfig, get_config
from utils.errors import DegreeCapExceeded, InvolError, JCCandidate, PolySyntaxError
from utils.logger import get_logger, setup_logging

logger = get_logger(__name__)


@dataclass
class CliState:
    config: Optional[Config] = None
    as_json: bool = False

    @property
    def conditions(self) -> ConditionsService:
        return ConditionsService(self.config)


def _input_degree_cap(ctx: Optional[click.Context]) -> int:
    state = ctx.find_object(CliState) if ctx is not None else None
    config = state.config if state is not None and state.config is not None else get_config()
    return config.algebra.degree_cap


class PolyParam(click.ParamType):
    name = "poly"

    def convert(self, value, param, ctx):
        if isinstance(value, Poly):
            return value
        try:
            return parse_poly(value, degree_cap=_input_degree_cap(ctx))
        except (PolySyntaxError, DegreeCapExceeded) as e:
            self.fail(e.message, param, ctx)


class EndoParam(click.ParamType):
    name = "endo"

    def convert(self, value, param, ctx):
        if isinstance(value, Endo):
            return value
        try:
            return parse_endo(value, degree_cap=_input_degree_cap(ctx))
        except (PolySyntaxError, DegreeCapExceeded) as e:
            self.fail(e.message, param, ctx)


POLY = PolyParam()
ENDO = EndoParam()


def _set_json(ctx: click.Context, param, value):
    if value:
        ctx.ensure_object(CliState).as_json = True


json_option = click.option("--json", "as_json", is_flag=True, expose_value=False, callback=_set_json,
                           help="Print JSON instead of text")
eps_option = click.option("--eps", type=ENDO, default="alpha", show_default=True,
                          help="Involution, as 'P = ...; Q = ...' or alpha, beta, id")


def emit(ctx: click.Context, text: str, view: Any):
    state: CliState = ctx.ensure_object(CliState)
    if state.as_json:
        if isinstance(view, BaseModel):
            click.echo(view.model_dump_json(indent=2))
        else:
            click.echo(json.dumps(view, indent=2))
    else:
        click.echo(text)


def negative(ctx: click.Context, text: str, view: Any):
    """Print an honest 'no' and leave with status 1"""
    emit(ctx, text, view)
    ctx.exit(1)


@click.group()
@click.option("--json", "as_json", is_flag=True, help="Print JSON instead of text")
@click.option("--config-dir", type=click.Path(file_okay=False), default=None, help="Directory holding invol.yaml")
@click.option("--log-level", type=click.Choice(["TRACE", "DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"],
                                                case_sensitive=False), default=None)
@click.pass_context
def cli(ctx: click.Context, as_json: bool, config_dir: Optional[str], log_level: Optional[str]):
    """Involutions and invertibility of polynomial maps of Q[x, y]"""
    config = get_config(config_dir).model_copy(deep=True)
    if log_level:
        config.logging.level = log_level.upper()
    setup_logging(config.logging)
    state = ctx.ensure_object(CliState)
    state.config = config
    state.as_json = state.as_json or as_json


# Polynomials and maps

@cli.command("jac")
@click.argument("p", type=POLY)
@click.argument("q", type=POLY)
@json_option
@click.pass_context
def jac_command(ctx, p: Poly, q: Poly):
    """Jacobian determinant of (P, Q)"""
    result = jac(p, q)
    emit(ctx, render_poly(result), PolyView.of(result))


@cli.command("parse")
@click.argument("text")
@click.option("--endo", "as_endo", is_flag=True, help="Parse an endomorphism instead of a polynomial")
@json_option
@click.pass_context
def parse_command(ctx, text: str, as_endo: bool):
    """Parse and print in canonical form"""
    if as_endo:
        f = ENDO.convert(text, None, ctx)
        emit(ctx, render_endo(f), EndoView.of(f))
    else:
        p = POLY.convert(text, None, ctx)
        emit(ctx, render_poly(p), PolyView.of(p))


@cli.command("compose")
@click.argument("outer", type=ENDO)
@click.argument("inner", type=ENDO)
@json_option
@click.pass_context
def compose_command(ctx, outer: Endo, inner: Endo):
    """OUTER ∘ INNER as ring maps: p ↦ OUTER(INNER(p))"""
    result = compose(outer, inner)
    emit(ctx, render_endo(result), EndoView.of(result))


@cli.command("apply")
@click.argument("f", type=ENDO)
@click.argument("r", type=POLY)
@json_option
@click.pass_context
def apply_command(ctx, f: Endo, r: Poly):
    """R(P, Q)"""
    result = apply(f, r)
    emit(ctx, render_poly(result), PolyView.of(result))


@cli.command("invert")
@click.argument("f", type=ENDO)
@json_option
@click.pass_context
def invert_command(ctx, f: Endo):
    """Inverse of a tame automorphism"""
    inverse = invert(f)
    emit(ctx, render_endo(inverse), InverseView(inverse=EndoView.of(inverse)))


@cli.command("decompose")
@click.argument("f", type=ENDO)
@json_option
@click.pass_context
def decompose_command(ctx, f: Endo):
    """Alternating affine/triangular factorization, first factor applied first"""
    factorization = decompose(f)
    lines = [f"{factor.kind}: {render_endo(factor.to_endo())}" for factor in factorization.factors]
    emit(ctx, "\n".join(lines), FactorizationView.of(factorization))


@cli.command("classify-involution")
@click.argument("gamma", type=ENDO)
@json_option
@click.pass_context
def classify_involution_command(ctx, gamma: Endo):
    """Identity, MinusIdentity or AlphaConjugate, with the normalizer"""
    result = classify_involution(gamma)
    text = f"{result.tag.value}\nnormalizer: {render_endo(result.normalizer)}"
    emit(ctx, text, InvolutionView.of(result))


@cli.command("conjugate-to-alpha")
@click.argument("gamma", type=ENDO)
@json_option
@click.pass_context
def conjugate_to_alpha_command(ctx, gamma: Endo):
    """g with gamma = g^-1 alpha g"""
    g = conjugate_to_alpha(gamma)
    emit(ctx, render_endo(g), EndoView.of(g))


# Membership

@cli.command("member")
@click.argument("r", type=POLY)
@click.option("--in", "generators", type=POLY, nargs=2, required=True, metavar="P Q",
              help="Generators of the subalgebra")
@json_option
@click.pass_context
def member_command(ctx, r: Poly, generators):
    """Witness phi(u, v) with phi(P, Q) = R"""
    state: CliState = ctx.obj
    p, q = generators
    witness = in_subalgebra(r, p, q, state.config.algebra.groebner_degree_cap)
    if witness is None:
        negative(ctx, "not a member", MembershipView.of(None))
    emit(ctx, witness.render(), MembershipView.of(witness))


@cli.command("wang")
@click.argument("a", type=POLY)
@click.argument("r", type=POLY)
@json_option
@click.pass_context
def wang_command(ctx, a: Poly, r: Poly):
    """H(t) with H(A) = R"""
    witness = wang_membership(a, r)
    if witness is None:
        negative(ctx, "not a member", UniWitnessView.of(None))
    emit(ctx, witness.render(), UniWitnessView.of(witness))


@cli.command("sigma0")
@click.argument("f", type=ENDO)
@click.argument("r", type=POLY)
@json_option
@click.pass_context
def sigma0_command(ctx, f: Endo, r: Poly):
    """The involution of Q[P, Q] exchanging P and Q, applied to R"""
    state: CliState = ctx.obj
    result = sigma0_apply(f, r, state.config.algebra.groebner_degree_cap)
    emit(ctx, render_poly(result), PolyView.of(result))


# Theorem checks

@cli.group("check")
def check_group():
    """Invertibility conditions"""


@check_group.command("alpha-endo")
@click.argument("f", type=ENDO)
@json_option
@click.pass_context
def check_alpha_endo(ctx, f: Endo):
    report = ctx.obj.conditions.check_alpha_endo(f)
    lines = [f"alpha-endomorphism: {'yes' if report.is_alpha_endo else 'no'}",
             f"jacobian unit: {'yes' if report.jacobian_unit else 'no'}"]
    if report.inverse is not None:
        lines.append(f"inverse: {render_endo(report.inverse)}")
    if not report.is_alpha_endo:
        negative(ctx, "\n".join(lines), AlphaEndoView.of(report))
    emit(ctx, "\n".join(lines), AlphaEndoView.of(report))


@check_group.command("gamma-delta")
@click.argument("f", type=ENDO)
@json_option
@click.pass_context
def check_gamma_delta(ctx, f: Endo):
    pair = ctx.obj.conditions.find_gamma_delta(f)
    if pair is None:
        negative(ctx, "not invertible", {"invertible": False})
    emit(ctx, f"gamma: {render_endo(pair.gamma)}\ndelta: {render_endo(pair.delta)}",
         {"gamma": EndoView.of(pair.gamma).model_dump(), "delta": EndoView.of(pair.delta).model_dump()})


@check_group.command("generalized")
@click.argument("f", type=ENDO)
@eps_option
@json_option
@click.pass_context
def check_generalized(ctx, f: Endo, eps: Endo):
    branch = ctx.obj.conditions.is_generalized(f, eps)
    if branch is None:
        negative(ctx, "not generalized", {"generalized": False})
    emit(ctx, branch.value, {"generalized": True, "branch": branch.value})


@check_group.command("restriction")
@click.argument("f", type=ENDO)
@eps_option
@json_option
@click.pass_context
def check_restriction(ctx, f: Endo, eps: Endo):
    cert = ctx.obj.conditions.check_restriction(f, eps)
    if cert is None:
        negative(ctx, "restriction fails", {"restriction": False})
    emit(ctx, f"phiP = {cert.phiP.render()}\nphiQ = {cert.phiQ.render()}", RestrictionView.of(cert))


@check_group.command("extension")
@click.argument("f", type=ENDO)
@json_option
@click.pass_context
def check_extension(ctx, f: Endo):
    sigma = ctx.obj.conditions.check_extension(f)
    if sigma is None:
        negative(ctx, "extension fails", {"extension": False})
    emit(ctx, render_endo(sigma), EndoView.of(sigma))


@check_group.command("symmetry")
@click.argument("f", type=ENDO)
@eps_option
@json_option
@click.pass_context
def check_symmetry(ctx, f: Endo, eps: Endo):
    case = ctx.obj.conditions.symmetry_case(f, eps)
    if case is None:
        negative(ctx, "no symmetry", {"symmetry": False})
    emit(ctx, case.value, {"symmetry": True, "case": case.value})


@check_group.command("symmetric-conjugation")
@click.argument("p", type=POLY)
@click.argument("witness", type=ENDO)
@click.option("--direction", type=click.Choice([d.value for d in Direction]), default=Direction.TO_ALPHA.value,
              show_default=True)
@json_option
@click.pass_context
def check_symmetric_conjugation(ctx, p: Poly, witness: Endo, direction: str):
    """Move a fixed or negated P of an involution to an alpha-parity polynomial, or back"""
    result = ctx.obj.conditions.symmetric_conjugation(p, Direction(direction), witness)
    text = (f"sign: {result.sign:+d}\nconjugator: {render_endo(result.conjugator)}\n"
            f"involution: {render_endo(result.involution)}\nimage: {render_poly(result.image)}")
    emit(ctx, text, SymmetricConjugationView.of(result))


# Inversion through the theorems

@cli.group("invert-via")
def invert_via_group():
    """Inverse together with its certificate"""


def _pick_eps(f: Endo, eps: Optional[Endo], suggest) -> Endo:
    if eps is not None:
        return eps
    suggestion = suggest(f)
    return suggestion if suggestion is not None else ALPHA


@invert_via_group.command("generalized")
@click.argument("f", type=ENDO)
@click.option("--eps", type=ENDO, default=None, help="Involution; tried from alpha, beta, (-x, y) when omitted")
@json_option
@click.pass_context
def invert_via_generalized(ctx, f: Endo, eps: Optional[Endo]):
    conditions: ConditionsService = ctx.obj.conditions
    eps = _pick_eps(f, eps, conditions.suggest_generalized_involution)
    inverse, cert = conditions.invert_via_generalized(f, eps)
    view = GeneralizedCertView.of(cert)
    text = "\n".join([
        render_endo(inverse),
        f"branch: {view.branch}; a = {view.a}; b = {view.b}",
        f"H(t) = {cert.h.render()}",
        f"G(t) = {cert.g.render()}",
        f"phiP = {view.phiP}",
        f"phiQ = {view.phiQ}",
    ])
    emit(ctx, text, InverseView(inverse=EndoView.of(inverse), certificate=view.model_dump()))


@invert_via_group.command("symmetry")
@click.argument("f", type=ENDO)
@click.option("--eps", type=ENDO, default=None, help="Involution; picked from a fixed candidate list when omitted")
@json_option
@click.pass_context
def invert_via_symmetry(ctx, f: Endo, eps: Optional[Endo]):
    conditions: ConditionsService = ctx.obj.conditions
    eps = _pick_eps(f, eps, conditions.suggest_symmetry_involution)
    inverse, cert = conditions.invert_via_symmetry(f, eps)
    view = SymmetryCertView.of(cert)
    text = "\n".join([
        render_endo(inverse),
        f"case: {view.case}; a = {view.a}; b = {view.b}",
        f"H(t) = {cert.h.render()}",
        f"phiP = {view.phiP}",
        f"phiQ = {view.phiQ}",
    ])
    emit(ctx, text, InverseView(inverse=EndoView.of(inverse), certificate=view.model_dump()))


@invert_via_group.command("sk")
@click.argument("f", type=ENDO)
@click.argument("s", type=POLY)
@click.argument("k", type=POLY)
@json_option
@click.pass_context
def invert_via_sk(ctx, f: Endo, s: Poly, k: Poly):
    result = ctx.obj.conditions.invert_via_sk(f, s, k)
    text = "\n".join([
        render_endo(result.inverse),
        f"g: {render_endo(result.g)}",
        f"x = {result.phi_x.render()}",
        f"y = {result.phi_y.render()}",
    ])
    emit(ctx, text, SkView.of(result))


# Harness

def _corpus_params(config: Config, **overrides) -> CorpusConfig:
    values = config.corpus.model_dump()
    values.update({k: v for k, v in overrides.items() if v is not None})
    return CorpusConfig(**values)


corpus_options = [
    click.option("--count", type=int, default=None),
    click.option("--seed", type=int, default=None),
    click.option("--max-factors", type=int, default=None),
    click.option("--max-tri-degree", type=int, default=None),
    click.option("--coeff-height", type=int, default=None),
]


def with_corpus_options(func):
    for option in reversed(corpus_options):
        func = option(func)
    return func


@cli.command("corpus")
@with_corpus_options
@json_option
@click.pass_context
def corpus_command(ctx, **overrides):
    """Seeded random tame automorphisms"""
    params = _corpus_params(ctx.obj.config, **overrides)
    entries = CorpusService(params).random_tame()
    if ctx.obj.as_json:
        emit(ctx, "", [CorpusEntryView.of(e).model_dump() for e in entries])
        return
    for entry in entries:
        click.echo(f"#{entry.index} {render_endo(entry.endo)}")


@cli.command("suite")
@click.argument("name")
@with_corpus_options
@json_option
@click.pass_context
def suite_command(ctx, name: str, **overrides):
    """Run a property suite: poly, parity, tame, membership, tfae, conditions or all"""
    params = _corpus_params(ctx.obj.config, **overrides)
    report = SuiteService(ctx.obj.config, params).run_suite(name)
    if ctx.obj.as_json:
        emit(ctx, "", report)
    else:
        console = Console(file=sys.stdout, width=120)
        console.print(report.to_table())
        for prop in report.properties:
            for example in prop.counterexamples:
                console.print(f"[red]{prop.name}[/red]: {example}", markup=True, highlight=False)
    if not report.ok:
        ctx.exit(1)


def _report_error(error: InvolError, as_json: bool):
    if as_json:
        view = ErrorView(exit_code=error.exit_code, **error.to_dict())
        click.echo(view.model_dump_json(indent=2))
    else:
        click.echo(f"{type(error).__name__}: {error.message}", err=True)
        for key, value in error.details.items():
            click.echo(f"  {key}: {value}", err=True)


def run_command(argv: Sequence[str]) -> int:
    """Run the CLI on argv and return the exit status instead of exiting"""
    argv = list(argv)
    as_json = "--json" in argv
    try:
        result = cli.main(args=argv, prog_name="invol", standalone_mode=False)
    except click.exceptions.Abort:
        click.echo("Aborted!", err=True)
        return 1
    except click.ClickException as e:
        e.show()
        return 2
    except JCCandidate as e:
        logger.critical("Jacobian-unit map resists tame reduction", **e.details)
        _report_error(e, as_json)
        return e.exit_code
    except InvolError as e:
        logger.debug("Command ended with an error", error=type(e).__name__, exit_code=e.exit_code)
        _report_error(e, as_json)
        return e.exit_code
    except Exception as e:
        logger.exception("Internal error", error=str(e))
        click.echo(f"internal error: {e}", err=True)
        return 3
    return result if isinstance(result, int) else 0
