"""Structure, dealing and reconstruction subcommands."""

import argparse
import logging
from pathlib import Path

from pydantic import ValidationError

from src.access import make_gamma, maximal_unqualified
from src.commands.output import CommandResult, parse_csv_ints, parse_csv_names
from src.errors import InvalidParameter
from src.models import CliConfig, ReconstructReport, ShareFile, StructureReport
from src.schemes import SchemeKind, SchemeSpec, SecretVector, deal, reconstruct

logger = logging.getLogger(__name__)

SCHEME_CHOICES = [kind.value for kind in SchemeKind]


def gamma(args: argparse.Namespace, config: CliConfig) -> CommandResult:
    """Print Gamma_n with its minimal qualified and maximal unqualified sets."""
    structure = make_gamma(config.n)
    order = structure.index
    return CommandResult(
        StructureReport(
            structure=f"gamma_{config.n}",
            participants=list(structure.participants),
            minimal_qualified=structure.to_json_dict()["minimal_qualified"],
            maximal_unqualified=[
                sorted(group, key=order.__getitem__) for group in maximal_unqualified(structure)
            ],
        )
    )


def deal_command(args: argparse.Namespace, config: CliConfig) -> CommandResult:
    spec = SchemeSpec.create(args.scheme, config.n, config.q)
    secret = SecretVector(symbols=tuple(parse_csv_ints(args.secret)))
    bundle, transcript = deal(spec, secret, config.seed)
    share_file = ShareFile.from_bundle(bundle, transcript)
    if config.out is not None:
        config.out.write_text(share_file.model_dump_json(indent=2) + "\n")
        logger.info("Wrote %d shares to %s", len(bundle.shares), config.out)
    return CommandResult(share_file)


def _load_share_file(path: Path) -> ShareFile:
    try:
        return ShareFile.model_validate_json(path.read_text())
    except OSError as exc:
        raise InvalidParameter(f"Cannot read share file {path}: {exc}") from exc
    except ValidationError as exc:
        raise InvalidParameter(
            f"Malformed share file {path}", {"errors": [e["msg"] for e in exc.errors()]}
        ) from exc


def reconstruct_command(args: argparse.Namespace, config: CliConfig) -> CommandResult:
    share_file = _load_share_file(config.shares)
    spec = share_file.spec()
    names = parse_csv_names(args.set)
    partial = share_file.to_bundle().restrict(names)
    secret = reconstruct(spec, partial, names)
    return CommandResult(
        ReconstructReport(
            scheme=spec.kind,
            n=spec.n,
            q=spec.q.q,
            coalition=names,
            secret=list(secret.symbols),
        )
    )


def register(subparsers: argparse._SubParsersAction) -> None:
    p = subparsers.add_parser("gamma", help="Print the king-and-pawns access structure")
    p.add_argument("--n", type=int, required=True, help="Number of pawns")
    p.set_defaults(handler=gamma)

    p = subparsers.add_parser("deal", help="Deal shares of a secret")
    p.add_argument("--scheme", choices=SCHEME_CHOICES, required=True)
    p.add_argument("--n", type=int, required=True, help="Number of pawns")
    p.add_argument("--q", type=int, help="Prime modulus (default: smallest prime > 2n-1)")
    p.add_argument("--secret", required=True, help="Comma-separated secret symbols")
    p.add_argument("--seed", type=int, required=True, help="Dealer randomness seed")
    p.add_argument("--out", type=Path, help="Write the share file here")
    p.set_defaults(handler=deal_command)

    p = subparsers.add_parser("reconstruct", help="Recover the secret from pooled shares")
    p.add_argument("--shares", type=Path, required=True, help="Share file from 'deal'")
    p.add_argument("--set", required=True, help="Comma-separated coalition, e.g. k,p2")
    p.set_defaults(handler=reconstruct_command)
