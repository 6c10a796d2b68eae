import json
import pathlib

import pytest

from convolab.cli import main

GEVREY_OUTSIDE = """\
scenario = "counterexample-gevrey"

[gevrey]
a = 1.0
r = 0.5
s = 0.7
"""


def write(path: pathlib.Path, text: str) -> pathlib.Path:
    path.write_text(text, encoding="utf-8")
    return path


class TestCommands:
    def test_catalog(self, capsys: pytest.CaptureFixture[str]) -> None:
        assert main(["catalog"]) == 0
        out = capsys.readouterr().out
        assert "[scenario]" in out
        assert "  gevrey-map:" in out

    def test_unknown_scenario(self, tmp_path: pathlib.Path) -> None:
        path = write(tmp_path / "x.toml", 'scenario = "no-such-scenario"\n')
        assert main(["run", str(path)]) == 64

    def test_missing_file(self, tmp_path: pathlib.Path) -> None:
        assert main(["run", str(tmp_path / "absent.toml")]) == 64

    def test_precondition_failure(self, tmp_path: pathlib.Path) -> None:
        path = write(tmp_path / "gevrey.toml", GEVREY_OUTSIDE)
        code = main(["run", str(path), "--output-dir", str(tmp_path)])
        assert code == 65

    def test_run_and_digest(
        self, tmp_path: pathlib.Path, capsys: pytest.CaptureFixture[str]
    ) -> None:
        path = write(tmp_path / "map.toml", 'scenario = "gevrey-map"\n')
        code = main([
            "run",
            str(path),
            "--output-dir",
            str(tmp_path / "out"),
            "--set",
            "map.step=0.25",
            "--seed",
            "3",
        ])
        assert code == 0
        report = tmp_path / "out" / "gevrey-map.json"
        assert json.loads(report.read_text())["seed"] == 3
        capsys.readouterr()

        table = tmp_path / "digest.csv"
        assert main(["digest", str(report), "--output", str(table)]) == 0
        lines = table.read_text().splitlines()
        assert lines[1].startswith("gevrey-map,verified-on-window,1,0,0")

    def test_empty_digest(self, capsys: pytest.CaptureFixture[str]) -> None:
        assert main(["digest"]) == 0
        assert capsys.readouterr().out.startswith("scenario,verdict")
