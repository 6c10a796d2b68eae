import csv
import datetime
import io
import json
import pathlib

import numpy as np
import pytest

from convolab.exceptions import ReportFormatError
from convolab.reports import (
    ScenarioResult,
    curves_to_csv,
    exit_code_for,
    read_report,
    report_digest,
    write_report,
)
from convolab.verdicts import Verdict

STARTED = datetime.datetime(2024, 6, 11, tzinfo=datetime.UTC)


def result(name: str, *verdicts: Verdict) -> ScenarioResult:
    return ScenarioResult(
        scenario=name,
        seed=1,
        verdicts={f"check-{i}": v for i, v in enumerate(verdicts)},
        margins={"check-0": 0.25},
        manifest=("sandwich-bounds",),
        curves={"bounds": {"xi": np.arange(3.0), "margin": np.ones(2)}},
    )


class TestResults:
    @pytest.mark.parametrize(
        ("verdicts", "code"),
        [
            ((), 0),
            ((Verdict.VERIFIED, Verdict.INCONCLUSIVE), 3),
            ((Verdict.INCONCLUSIVE, Verdict.REFUTED), 2),
        ],
    )
    def test_exit_codes(self, verdicts: tuple[Verdict, ...], code: int) -> None:
        assert result("s", *verdicts).exit_code == code

    def test_exit_code_for(self) -> None:
        assert exit_code_for(Verdict.VERIFIED) == 0


class TestWriting:
    def test_csv(self) -> None:
        text = curves_to_csv({"a": [1.0, np.nan], "b": [0.1]}).decode()
        assert text == "a,b\n1,0.10000000000000001\nnan,\n"

    def test_report_layout(self, tmp_path: pathlib.Path) -> None:
        path = write_report(
            result("sandwich", Verdict.VERIFIED), tmp_path, started=STARTED
        )
        document = json.loads(path.read_text())
        assert list(document) == [
            "scenario",
            "timestamp",
            "seed",
            "verdict",
            "manifest",
            "verdicts",
            "margins",
            "results",
            "curves",
        ]
        assert document["verdict"] == "verified-on-window"
        assert document["timestamp"]["started"] == STARTED.isoformat()
        curve = tmp_path / document["curves"]["bounds"]
        rows = list(csv.reader(curve.read_text().splitlines()))
        assert rows[0] == ["xi", "margin"]
        assert rows[-1] == ["2", ""]

    def test_reports_are_reproducible(self, tmp_path: pathlib.Path) -> None:
        first = write_report(result("s", Verdict.VERIFIED), tmp_path / "1")
        second = write_report(result("s", Verdict.VERIFIED), tmp_path / "2")
        one, two = (json.loads(p.read_text()) for p in (first, second))
        one.pop("timestamp")
        two.pop("timestamp")
        assert one == two


class TestReading:
    def test_not_json(self, tmp_path: pathlib.Path) -> None:
        path = tmp_path / "bad.json"
        path.write_text("{", encoding="utf-8")
        with pytest.raises(ReportFormatError):
            read_report(path)

    def test_missing_keys(self, tmp_path: pathlib.Path) -> None:
        path = tmp_path / "partial.json"
        path.write_text('{"scenario": "x"}', encoding="utf-8")
        with pytest.raises(ReportFormatError, match="lacks"):
            read_report(path)

    def test_unknown_verdict(self, tmp_path: pathlib.Path) -> None:
        path = write_report(result("s", Verdict.VERIFIED), tmp_path)
        document = json.loads(path.read_text())
        document["verdict"] = "probably"
        path.write_text(json.dumps(document), encoding="utf-8")
        with pytest.raises(ReportFormatError, match="verdict"):
            read_report(path)


class TestDigest:
    def test_empty(self) -> None:
        digest = report_digest([])
        assert digest.exit_code == 0
        assert digest.to_csv().decode().splitlines() == [
            "scenario,verdict,verified,refuted,inconclusive,"
            "min_margin,runtime_seconds,path"
        ]

    def test_rows_are_ordered(self, tmp_path: pathlib.Path) -> None:
        paths = [
            write_report(result(name, Verdict.VERIFIED), tmp_path)
            for name in ("zeta", "alpha")
        ]
        digest = report_digest(paths)
        assert [row["scenario"] for row in digest.rows] == ["alpha", "zeta"]
        assert digest.rows[0]["min_margin"] == "0.25"
        assert digest.exit_code == 0

    def test_inconclusive(self, tmp_path: pathlib.Path) -> None:
        path = write_report(
            result("s", Verdict.VERIFIED, Verdict.INCONCLUSIVE), tmp_path
        )
        digest = report_digest([path])
        assert digest.rows[0]["inconclusive"] == "1"
        assert digest.exit_code == 3

    def test_malformed_reports_are_listed(self, tmp_path: pathlib.Path) -> None:
        good = write_report(result("s", Verdict.REFUTED), tmp_path)
        bad = tmp_path / "bad.json"
        bad.write_text("[]", encoding="utf-8")
        digest = report_digest([good, bad])
        assert digest.exit_code == 3
        assert digest.errors[0][0] == str(bad)
        rows = list(csv.reader(io.StringIO(digest.to_csv().decode())))
        assert ["errors"] in rows
