"""Verification, rate and bound subcommands."""

import argparse
import logging
import re
from fractions import Fraction
from typing import Dict, Optional, Tuple

from src.access import parse_structure
from src.bound.certificates import (
    Lemma,
    implied_kappa_bound,
    lemma_certificate,
    to_report,
    verify_certificate,
)
from src.bound.lp import build_lp, solve_lp
from src.commands.output import CommandResult, rate_text
from src.config import get_budget, settings
from src.entropy import (
    check_perfect,
    check_uniform_shares,
    entropy_report,
    enumerate_joint,
    enumeration_size,
)
from src.models import (
    BoundReport,
    CliConfig,
    ComponentCheck,
    RateReport,
    TheoremReport,
    VerifyReport,
)
from src.schemes import SchemeKind, SchemeSpec, nominal_rate, structure_for
from src.utils.rationals import format_rational

logger = logging.getLogger(__name__)


def verify_command(args: argparse.Namespace, config: CliConfig) -> CommandResult:
    """Exhaustive perfectness and share uniformity for one scheme."""
    spec = SchemeSpec.create(args.scheme, config.n, config.q)
    table = enumerate_joint(spec, budget=config.budget)
    perfectness = check_perfect(table, structure_for(spec))
    report = entropy_report(table, subsets=[])
    verified = perfectness.perfect and all(report.uniform.values())
    return CommandResult(
        VerifyReport(
            scheme=spec.kind,
            n=spec.n,
            q=spec.q.q,
            perfect=perfectness.perfect,
            violations=perfectness.violations,
            uniform=report.uniform,
            rates={name: rate_text(r) for name, r in report.rates.items()},
            min_rate=rate_text(report.min_rate),
            verified=verified,
        ),
        0 if verified else 1,
    )


def _component_checks(n: int, q: int, budget: int) -> Optional[Dict[str, ComponentCheck]]:
    checks = {}
    for kind in (SchemeKind.SIGMA1, SchemeKind.SIGMA2):
        spec = SchemeSpec.create(kind, n, q)
        if enumeration_size(spec) > budget:
            logger.warning("Skipping %s check at n=%d: beyond budget", kind.value, n)
            return None
        table = enumerate_joint(spec, budget=budget)
        checks[kind.value] = ComponentCheck(
            q=q,
            perfect=check_perfect(table, structure_for(spec)).perfect,
            uniform=all(check_uniform_shares(table).values()),
        )
    return checks


def realized_rate(
    n: int, q: Optional[int], budget: Optional[int] = None
) -> Tuple[RateReport, bool]:
    """Rate of the composite scheme, by enumeration when the budget allows.

    Returns the report and whether the claimed rate is backed by checks.
    """
    spec = SchemeSpec.create(SchemeKind.COMPOSITE, n, q)
    budget = get_budget(budget)
    nominal = format_rational(nominal_rate(spec))
    if enumeration_size(spec) <= budget:
        table = enumerate_joint(spec, budget=budget)
        perfect = check_perfect(table, structure_for(spec)).perfect
        report = entropy_report(table, subsets=[])
        exact = isinstance(report.min_rate, Fraction)
        return (
            RateReport(
                n=n,
                q=spec.q.q,
                oracle=True,
                min_rate=rate_text(report.min_rate) if exact else nominal,
                nominal_rate=nominal,
                rates={name: rate_text(r) for name, r in report.rates.items()},
                perfect=perfect,
            ),
            perfect and exact,
        )
    components = _component_checks(n, spec.q.q, budget)
    backed = components is not None and all(
        c.perfect and c.uniform for c in components.values()
    )
    return (
        RateReport(
            n=n,
            q=spec.q.q,
            oracle=False,
            min_rate=nominal,
            nominal_rate=nominal,
            components=components,
        ),
        backed,
    )


def rate_command(args: argparse.Namespace, config: CliConfig) -> CommandResult:
    report, backed = realized_rate(config.n, config.q, config.budget)
    return CommandResult(report, 0 if backed else 1)


def _gamma_size(label: str) -> Optional[int]:
    match = re.fullmatch(r"gamma_(\d+)", label)
    return int(match.group(1)) if match else None


def bound_command(args: argparse.Namespace, config: CliConfig) -> CommandResult:
    structure = parse_structure(args.structure)
    kappa = solve_lp(build_lp(structure)).value
    verified = None
    n = _gamma_size(args.structure)
    if n is not None:
        certificate = lemma_certificate(Lemma.COMBINED, n)
        verified = verify_certificate(certificate) and implied_kappa_bound(certificate) == kappa
    return CommandResult(
        BoundReport(
            structure=args.structure,
            kappa=format_rational(kappa),
            rate_upper_bound=format_rational(1 / kappa),
            certificate_verified=verified,
        ),
        1 if verified is False else 0,
    )


def certify_command(args: argparse.Namespace, config: CliConfig) -> CommandResult:
    report = to_report(lemma_certificate(args.lemma, config.n), config.n)
    return CommandResult(report, 0 if report.verified else 1)


def _upper_bound(n: int) -> Tuple[Optional[Fraction], str]:
    if n + 2 <= settings.lp_max_elements:
        return 1 / solve_lp(build_lp(parse_structure(f"gamma_{n}"))).value, "lp"
    certificate = lemma_certificate(Lemma.COMBINED, n)
    if not verify_certificate(certificate):
        return None, "certificate"
    return 1 / implied_kappa_bound(certificate), "certificate"


def theorem_command(args: argparse.Namespace, config: CliConfig) -> CommandResult:
    """Check that the realized rate meets the proven upper bound at (n-1)/(2n-3)."""
    n = config.n
    expected = Fraction(n - 1, 2 * n - 3)
    rate, backed = realized_rate(n, config.q, config.budget)
    upper, upper_source = _upper_bound(n)
    lower = Fraction(rate.min_rate)
    tight = backed and upper is not None and lower == upper == expected
    return CommandResult(
        TheoremReport(
            n=n,
            q=rate.q,
            lower_bound=rate.min_rate,
            lower_source="oracle" if rate.oracle else "nominal",
            upper_bound=format_rational(upper) if upper is not None else None,
            upper_source=upper_source,
            expected=format_rational(expected),
            tight=tight,
        ),
        0 if tight else 1,
    )


def register(subparsers: argparse._SubParsersAction) -> None:
    schemes = [kind.value for kind in SchemeKind]

    p = subparsers.add_parser("verify", help="Exhaustively check perfectness and uniformity")
    p.add_argument("--scheme", choices=schemes, required=True)
    p.add_argument("--n", type=int, required=True, help="Number of pawns")
    p.add_argument("--q", type=int, help="Prime modulus (default: smallest prime > 2n-1)")
    p.set_defaults(handler=verify_command)

    p = subparsers.add_parser("rate", help="Information rate of the composite scheme")
    p.add_argument("--n", type=int, required=True, help="Number of pawns")
    p.add_argument("--q", type=int, help="Prime modulus (default: smallest prime > 2n-1)")
    p.set_defaults(handler=rate_command)

    p = subparsers.add_parser("bound", help="Exact LP lower bound on the max share size")
    p.add_argument("--structure", required=True, help="gamma_N, path4, fan or triangle-d")
    p.set_defaults(handler=bound_command)

    p = subparsers.add_parser("certify", help="Build and verify a share-size certificate")
    p.add_argument("--lemma", choices=[m.value for m in Lemma], required=True)
    p.add_argument("--n", type=int, required=True, help="Number of pawns")
    p.set_defaults(handler=certify_command)

    p = subparsers.add_parser("theorem", help="Check that rate and upper bound meet")
    p.add_argument("--n", type=int, required=True, help="Number of pawns")
    p.add_argument("--q", type=int, help="Prime modulus (default: smallest prime > 2n-1)")
    p.set_defaults(handler=theorem_command)
