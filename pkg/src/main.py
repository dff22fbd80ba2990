import argparse
import logging
import sys
from typing import Optional, Sequence

from dotenv import load_dotenv
from pydantic import ValidationError

from commands import campaign, dump_basis, enumerate_outcomes, history, measure, schema, verify
from commands.output import EXIT_INPUT_ERROR
from core.config import configure_settings
from core.exceptions import QuswapError
from core.log import configure_logging

logger = logging.getLogger("quswap")

COMMANDS = (verify, measure, enumerate_outcomes, dump_basis, campaign, history, schema)


def _global_options(suppress: bool) -> argparse.ArgumentParser:
    # SUPPRESS on the sub-command copies keeps a flag given before the command
    default = (lambda value: argparse.SUPPRESS) if suppress else (lambda value: value)
    options = argparse.ArgumentParser(add_help=False)
    options.add_argument("--json", action="store_true", default=default(False), help="Emit the report as JSON")
    options.add_argument(
        "--max-amplitudes",
        type=int,
        default=default(None),
        help="Refuse states with more than this many amplitudes (default: QUSWAP_MAX_AMPLITUDES or 2^26)",
    )
    options.add_argument(
        "--log-level",
        choices=["DEBUG", "INFO", "WARNING", "ERROR"],
        type=str.upper,
        default=default(None),
        help="Log level for stderr diagnostics",
    )
    return options


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="quswap",
        description="Exact simulation and verification of multi-qudit entanglement swapping",
        parents=[_global_options(suppress=False)],
    )
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")
    common = _global_options(suppress=True)
    for command in COMMANDS:
        command.register(sub, common)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    load_dotenv()
    args = build_parser().parse_args(argv)

    overrides = {}
    if args.max_amplitudes is not None:
        overrides["max_amplitudes"] = args.max_amplitudes
    try:
        settings = configure_settings(**overrides)
    except ValidationError as exc:
        print(f"error: invalid settings: {exc.errors()[0]['msg']}", file=sys.stderr)
        return EXIT_INPUT_ERROR
    configure_logging(args.log_level or settings.log_level)

    try:
        return args.handler(args)
    except (QuswapError, ValidationError) as exc:
        message = exc.errors()[0]["msg"] if isinstance(exc, ValidationError) else str(exc)
        logger.warning("%s: %s", args.command, message)
        print(f"error: {message}", file=sys.stderr)
        return EXIT_INPUT_ERROR


if __name__ == "__main__":
    sys.exit(main())
