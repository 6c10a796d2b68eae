"""JSON reports, CSV curves and the digest of several reports."""

import csv
import dataclasses
import datetime
import io
import itertools
import json
import logging
import math
import pathlib
import typing

import numpy as np

from convolab.constants import EXIT_INCONCLUSIVE, EXIT_OK, EXIT_REFUTED
from convolab.exceptions import ReportFormatError
from convolab.utilities import atomic_write_bytes
from convolab.verdicts import Verdict, combine, jsonable

if typing.TYPE_CHECKING:
    from collections.abc import Iterable, Mapping

    import numpy.typing as npt

_logger = logging.getLogger(__name__)

REPORT_SUFFIX: typing.Final[str] = ".json"
"""Suffix of report files."""

_REPORT_KEYS: typing.Final[tuple[str, ...]] = (
    "scenario",
    "timestamp",
    "seed",
    "verdict",
    "manifest",
    "verdicts",
    "margins",
    "results",
    "curves",
)
_DIGEST_COLUMNS: typing.Final[tuple[str, ...]] = (
    "scenario",
    "verdict",
    "verified",
    "refuted",
    "inconclusive",
    "min_margin",
    "runtime_seconds",
    "path",
)
_CSV_FORMAT: typing.Final[str] = ".17g"

type Columns = dict[str, npt.NDArray[np.float64]]


@dataclasses.dataclass(frozen=True, kw_only=True, slots=True)
class ScenarioResult:
    """Everything a scenario hands to the report writer.

    Parameters
    ----------
    scenario
        Name of the scenario.
    seed
        Seed the scenario ran with.
    verdicts
        Verdict per named check. The overall verdict merges them.
    margins
        Least margin per named check, where one is defined.
    manifest
        Named theorem and equation tags the scenario exercised.
    results
        JSON-compatible payload of the individual reports.
    curves
        CSV tables keyed by name; each table maps column names to
        arrays.
    """

    scenario: str
    seed: int
    verdicts: dict[str, Verdict]
    margins: dict[str, float] = dataclasses.field(default_factory=dict)
    manifest: tuple[str, ...] = ()
    results: dict[str, typing.Any] = dataclasses.field(default_factory=dict)
    curves: dict[str, Columns] = dataclasses.field(default_factory=dict)

    @property
    def verdict(self) -> Verdict:
        """The merged verdict of every check."""
        return combine(self.verdicts.values())

    @property
    def exit_code(self) -> int:
        """Process exit code matching :attr:`verdict`."""
        return exit_code_for(self.verdict)


def exit_code_for(verdict: Verdict) -> int:
    """Exit code for a merged verdict."""
    match verdict:
        case Verdict.VERIFIED:
            return EXIT_OK
        case Verdict.REFUTED:
            return EXIT_REFUTED
        case _:
            return EXIT_INCONCLUSIVE


# ----------------------------------------------------------------------
# --- Writing ----------------------------------------------------------
# ----------------------------------------------------------------------


def _format_cell(value: float) -> str:
    if math.isnan(value):
        return "nan"
    return format(value, _CSV_FORMAT)


def curves_to_csv(columns: Mapping[str, npt.ArrayLike]) -> bytes:
    """Render named columns as comma-separated text with a header row.

    Shorter columns are padded with empty cells. Numbers use ``"."`` as
    decimal separator whatever the locale.
    """
    arrays = [
        np.real(np.asarray(values, dtype=np.complex128)).ravel()
        for values in columns.values()
    ]
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(columns.keys())
    for row in itertools.zip_longest(*arrays, fillvalue=None):
        writer.writerow(
            "" if value is None else _format_cell(float(value))
            for value in row
        )
    return buffer.getvalue().encode("ascii")


def _curve_file_name(scenario: str, table: str) -> str:
    safe = "".join(c if c.isalnum() or c in "-_" else "-" for c in table)
    return f"{scenario}.{safe}.csv"


def report_document(
    result: ScenarioResult,
    *,
    curve_files: Mapping[str, str],
    timestamp: Mapping[str, typing.Any],
) -> dict[str, typing.Any]:
    """Assemble the JSON document of a result in the fixed key order."""
    document = {
        "scenario": result.scenario,
        "timestamp": dict(timestamp),
        "seed": result.seed,
        "verdict": result.verdict,
        "manifest": list(result.manifest),
        "verdicts": dict(sorted(result.verdicts.items())),
        "margins": dict(sorted(result.margins.items())),
        "results": result.results,
        "curves": dict(curve_files),
    }
    return {key: jsonable(document[key]) for key in _REPORT_KEYS}


def write_report(
    result: ScenarioResult,
    output_dir: str | pathlib.Path,
    *,
    started: datetime.datetime | None = None,
    runtime_seconds: float = 0.0,
) -> pathlib.Path:
    """Write the JSON report and its CSV curves into ``output_dir``.

    Every file is written atomically. The ``timestamp`` entry carries
    the start time and the runtime; it is the only entry that differs
    between two runs of the same configuration.

    Returns
    -------
    pathlib.Path
        Path of the JSON report.
    """
    directory = pathlib.Path(output_dir)
    curve_files: dict[str, str] = {}
    for table, columns in sorted(result.curves.items()):
        name = _curve_file_name(result.scenario, table)
        atomic_write_bytes(directory / name, curves_to_csv(columns))
        curve_files[table] = name

    moment = started or datetime.datetime.now(tz=datetime.UTC)
    document = report_document(
        result,
        curve_files=curve_files,
        timestamp={
            "started": moment.isoformat(),
            "runtime_seconds": round(runtime_seconds, 6),
        },
    )
    path = directory / f"{result.scenario}{REPORT_SUFFIX}"
    payload = json.dumps(document, indent=2, allow_nan=False) + "\n"
    atomic_write_bytes(path, payload.encode())
    _logger.info(
        "Wrote report %s (%s, %d curve files)",
        path,
        result.verdict,
        len(curve_files),
    )
    return path


# ----------------------------------------------------------------------
# --- Reading and digest -----------------------------------------------
# ----------------------------------------------------------------------


def read_report(path: str | pathlib.Path) -> dict[str, typing.Any]:
    """Read a JSON report and check its top-level structure.

    Raises
    ------
    ReportFormatError
        If the file cannot be read, is not JSON or lacks a report key.
    """
    source = pathlib.Path(path)
    try:
        document = json.loads(source.read_text(encoding="utf-8"))
    except (OSError, UnicodeDecodeError, json.JSONDecodeError) as exc:
        error_message = f"Cannot read report {source}"
        raise ReportFormatError(error_message) from exc

    if not isinstance(document, dict):
        error_message = f"Report {source} is not a JSON object"
        raise ReportFormatError(error_message)
    missing = [key for key in _REPORT_KEYS if key not in document]
    if missing:
        error_message = f"Report {source} lacks {', '.join(missing)}"
        raise ReportFormatError(error_message)
    try:
        Verdict(document["verdict"])
    except ValueError as exc:
        error_message = (
            f"Report {source} has an unknown verdict {document['verdict']!r}"
        )
        raise ReportFormatError(error_message) from exc
    return document


def _digest_row(
    path: pathlib.Path, document: dict[str, typing.Any]
) -> dict[str, str]:
    counts = dict.fromkeys(Verdict, 0)
    for verdict in document["verdicts"].values():
        counts[Verdict(verdict)] += 1
    margins = [
        float(value)
        for value in document["margins"].values()
        if isinstance(value, (int, float))
    ]
    runtime = document["timestamp"].get("runtime_seconds", "")
    return {
        "scenario": str(document["scenario"]),
        "verdict": str(document["verdict"]),
        "verified": str(counts[Verdict.VERIFIED]),
        "refuted": str(counts[Verdict.REFUTED]),
        "inconclusive": str(counts[Verdict.INCONCLUSIVE]),
        "min_margin": _format_cell(min(margins)) if margins else "",
        "runtime_seconds": str(runtime),
        "path": str(path),
    }


@dataclasses.dataclass(frozen=True, kw_only=True, slots=True)
class Digest:
    """Summary of several reports.

    Parameters
    ----------
    rows
        One row per readable report, ordered by scenario then path.
    errors
        ``(path, message)`` per malformed report.
    """

    rows: tuple[dict[str, str], ...]
    errors: tuple[tuple[str, str], ...] = ()

    @property
    def verdict(self) -> Verdict:
        """Merged verdict of the readable reports."""
        return combine(Verdict(row["verdict"]) for row in self.rows)

    @property
    def exit_code(self) -> int:
        """Exit code: inconclusive when a report is malformed."""
        if self.errors:
            return max(EXIT_INCONCLUSIVE, exit_code_for(self.verdict))
        return exit_code_for(self.verdict)

    def to_csv(self) -> bytes:
        """Summary table followed by an ``errors`` section when needed."""
        buffer = io.StringIO()
        writer = csv.DictWriter(
            buffer, fieldnames=_DIGEST_COLUMNS, lineterminator="\n"
        )
        writer.writeheader()
        writer.writerows(self.rows)
        if self.errors:
            plain = csv.writer(buffer, lineterminator="\n")
            plain.writerow(())
            plain.writerow(("errors",))
            plain.writerow(("path", "message"))
            plain.writerows(self.errors)
        return buffer.getvalue().encode("utf-8")


def report_digest(paths: Iterable[str | pathlib.Path]) -> Digest:
    """Merge reports into one summary, ordered by scenario name."""
    rows: list[dict[str, str]] = []
    errors: list[tuple[str, str]] = []
    for raw in paths:
        path = pathlib.Path(raw)
        try:
            rows.append(_digest_row(path, read_report(path)))
        except ReportFormatError as exc:
            _logger.warning("Skipping malformed report %s: %s", path, exc)
            errors.append((str(path), str(exc)))
        except (AttributeError, KeyError, TypeError, ValueError) as exc:
            _logger.warning("Skipping malformed report %s: %s", path, exc)
            errors.append((str(path), f"Malformed report entries: {exc}"))
    rows.sort(key=lambda row: (row["scenario"], row["path"]))
    errors.sort()
    return Digest(rows=tuple(rows), errors=tuple(errors))
