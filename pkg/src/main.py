"""
kpn - command-line front end for the king-and-pawns secret-sharing toolkit.
"""

import argparse
import logging
import sys
from typing import List, Optional

from pydantic import ValidationError

from src.commands import analysis, dealing
from src.commands.output import attr, emit
from src.config import configure_logging, settings
from src.errors import KpnError
from src.models import CliConfig, ErrorReport

logger = logging.getLogger(__name__)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="kpn",
        description="Deal, verify and bound secret-sharing schemes for the king and n pawns",
    )
    parser.add_argument(
        "--format",
        choices=["json", "plain"],
        default=None,
        help="Report format (default: KPN_OUTPUT_FORMAT or json)",
    )
    parser.add_argument(
        "--budget", type=int, default=None, help="Enumeration budget (default: KPN_BUDGET)"
    )
    parser.add_argument("--log-level", default=None, help="Logging level for stderr")
    subparsers = parser.add_subparsers(dest="command", required=True)
    dealing.register(subparsers)
    analysis.register(subparsers)
    return parser


def _config(args: argparse.Namespace, output_format: str) -> CliConfig:
    return CliConfig(
        command=args.command,
        n=attr(args, "n"),
        q=attr(args, "q"),
        seed=attr(args, "seed"),
        shares=attr(args, "shares"),
        out=attr(args, "out"),
        budget=args.budget,
        output_format=output_format,
    )


def run(argv: Optional[List[str]] = None) -> int:
    """Parse ``argv``, dispatch, print the report and return the exit code."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 2

    configure_logging(args.log_level)
    output_format = args.format or settings.output_format

    try:
        config = _config(args, output_format)
        result = args.handler(args, config)
    except KpnError as exc:
        emit(
            ErrorReport(error=str(exc), code=exc.code, details=exc.details or None),
            output_format,
        )
        return exc.exit_code
    except ValidationError as exc:
        emit(
            ErrorReport(
                error="Invalid arguments",
                code="ValidationError",
                details={"errors": [e["msg"] for e in exc.errors()]},
            ),
            output_format,
        )
        return 2
    except Exception:
        # Internal details go to the log, not the report.
        logger.exception("Unhandled error in %s", args.command)
        emit(ErrorReport(error="Internal error"), output_format)
        return 1

    emit(result.report, output_format)
    return result.exit_code


def main() -> None:
    """Main entry point for the kpn command."""
    sys.exit(run())


if __name__ == "__main__":
    main()
