"""Command-line interface: ``convolab run | digest | catalog``."""

import argparse
import logging
import sys
import typing

from convolab.config import load_config
from convolab.constants import (
    EXIT_CONFIG_ERROR,
    EXIT_OK,
    EXIT_PRECONDITION,
    THREADS_ENVIRONMENT_VARIABLE,
)
from convolab.dcclasses import default_sequence_catalog
from convolab.exceptions import ConfigError, ConvolabError
from convolab.mollifiers import default_bump_catalog
from convolab.reports import report_digest
from convolab.scenarios import default_registry, run
from convolab.spectra import default_model_catalog
from convolab.symbols import default_symbol_catalog
from convolab.utilities import atomic_write_bytes
from convolab.weights import default_weight_catalog

if typing.TYPE_CHECKING:
    from collections.abc import Sequence

_logger = logging.getLogger(__name__)

_LOG_LEVELS: typing.Final[tuple[str, ...]] = (
    "DEBUG",
    "INFO",
    "WARNING",
    "ERROR",
)


def _parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="convolab",
        description=(
            "Windowed checks of slow decrease, coercion and counterexample "
            "constructions for convolution operators."
        ),
        epilog=(
            f"{THREADS_ENVIRONMENT_VARIABLE} caps the number of FFT workers."
        ),
    )
    parser.add_argument(
        "--log-level",
        choices=_LOG_LEVELS,
        default="WARNING",
        help="Logging threshold (default: WARNING).",
    )
    commands = parser.add_subparsers(dest="command", required=True)

    run_parser = commands.add_parser("run", help="Run a scenario file.")
    run_parser.add_argument("config", help="TOML scenario file.")
    run_parser.add_argument(
        "--output-dir", help="Directory for the report and curves."
    )
    run_parser.add_argument("--seed", type=int, help="Override the seed.")
    run_parser.add_argument(
        "--set",
        dest="overrides",
        action="append",
        default=[],
        metavar="KEY=VALUE",
        help="Override a dotted setting, e.g. gevrey.a=0.55. Repeatable.",
    )

    digest_parser = commands.add_parser(
        "digest", help="Summarise report files into one CSV table."
    )
    digest_parser.add_argument("paths", nargs="*", help="JSON reports.")
    digest_parser.add_argument(
        "--output", help="Write the table here instead of stdout."
    )

    commands.add_parser(
        "catalog", help="List catalog keys and scenario names."
    )
    return parser


def _run(arguments: argparse.Namespace) -> int:
    config = load_config(
        arguments.config,
        overrides=arguments.overrides,
        output_dir=arguments.output_dir,
        seed=arguments.seed,
    )
    outcome = run(config)
    sys.stdout.write(
        f"{config.scenario}: {outcome.result.verdict} -> {outcome.report_path}\n"
    )
    return outcome.exit_code


def _digest(arguments: argparse.Namespace) -> int:
    digest = report_digest(arguments.paths)
    table = digest.to_csv()
    if arguments.output:
        atomic_write_bytes(arguments.output, table)
    else:
        sys.stdout.write(table.decode())
    return digest.exit_code


def _catalog() -> int:
    catalogs = (
        default_weight_catalog,
        default_sequence_catalog,
        default_symbol_catalog,
        default_bump_catalog,
        default_model_catalog,
    )
    lines = []
    for catalog in catalogs:
        lines.append(f"[{catalog.name}]")
        lines.extend(f"  {key}" for key in catalog.keys())
    lines.append("[scenario]")
    lines.extend(
        f"  {name}: {default_registry.get(name).summary}"
        for name in default_registry.names
    )
    sys.stdout.write("\n".join(lines) + "\n")
    return EXIT_OK


def main(argv: Sequence[str] | None = None) -> int:
    """Entry point of the ``convolab`` command.

    Returns
    -------
    int
        ``0`` when every verdict holds, ``2`` on a refutation, ``3``
        when a verdict is inconclusive, ``64`` on configuration errors
        and ``65`` on numerical precondition failures.
    """
    arguments = _parser().parse_args(argv)
    logging.basicConfig(
        level=arguments.log_level,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )
    try:
        match arguments.command:
            case "run":
                return _run(arguments)
            case "digest":
                return _digest(arguments)
            case _:
                return _catalog()
    except ConfigError as exc:
        _logger.error("Configuration error: %s", exc)  # noqa: TRY400
        sys.stderr.write(f"convolab: {exc}\n")
        return EXIT_CONFIG_ERROR
    except ConvolabError as exc:
        _logger.error("Precondition failure: %s", exc)  # noqa: TRY400
        sys.stderr.write(f"convolab: {exc}\n")
        return EXIT_PRECONDITION
