import json
import pathlib

import pytest

from convolab.config import config_from_mapping, load_config
from convolab.exceptions import ConfigError
from convolab.reports import ScenarioResult
from convolab.scenarios import ScenarioRegistry, default_registry, run
from convolab.verdicts import Verdict

EXPECTED_SCENARIOS = (
    "coercion-doublestar",
    "coercion-star",
    "counterexample-gevrey",
    "counterexample-general",
    "gevrey-map",
    "lemma1",
    "prop1-sum",
    "sandwich",
    "slowdec-scan",
    "units-bounds",
    "weights-check",
)


class TestRegistry:
    def test_default_scenarios(self) -> None:
        assert set(EXPECTED_SCENARIOS) <= set(default_registry.names)
        assert default_registry.get("sandwich").summary

    def test_unknown(self) -> None:
        with pytest.raises(ConfigError, match="Unknown scenario"):
            default_registry.get("no-such-scenario")

    def test_duplicates(self) -> None:
        registry = ScenarioRegistry()

        @registry.scenario("noop", anchors=("nothing",))
        def noop(config: object) -> ScenarioResult:
            """Do nothing."""
            return ScenarioResult(scenario="noop", seed=0, verdicts={})

        with pytest.raises(ValueError, match="already registered"):
            registry.scenario("noop")(noop)
        registry.scenario("noop", overwrite=True)(noop)
        scenario = registry.get("noop")
        assert scenario.summary == "Do nothing."
        config = config_from_mapping({"scenario": "noop"})
        assert scenario(config).manifest == ("nothing",)


class TestGevreyMap:
    def test_regions_are_disjoint(self, tmp_path: pathlib.Path) -> None:
        config = config_from_mapping({
            "scenario": "gevrey-map",
            "output_dir": str(tmp_path),
            "map": {"step": 0.05},
        })
        outcome = run(config)
        assert outcome.result.verdicts == {"disjoint": Verdict.VERIFIED}
        assert outcome.result.results["triples"] == 20 * 19 * 19
        assert outcome.result.results["overlaps"] == []
        assert outcome.exit_code == 0
        document = json.loads(outcome.report_path.read_text())
        assert document["manifest"] == [
            "gevrey-multipliers",
            "gevrey-counterexample",
        ]
        assert (tmp_path / document["curves"]["regions"]).exists()

    def test_runs_are_deterministic(self, tmp_path: pathlib.Path) -> None:
        documents = []
        for label in ("first", "second"):
            config = config_from_mapping({
                "scenario": "gevrey-map",
                "output_dir": str(tmp_path / label),
                "map": {"step": 0.25},
            })
            document = json.loads(run(config).report_path.read_text())
            document.pop("timestamp")
            documents.append(document)
        assert documents[0] == documents[1]

    def test_coercive_sample_runs_the_double_star_chain(
        self, tmp_path: pathlib.Path
    ) -> None:
        config = config_from_mapping({
            "scenario": "gevrey-map",
            "output_dir": str(tmp_path),
            "map": {"step": 0.5, "end_to_end": [[0.8, 0.5, 0.7]]},
        })
        result = run(config).result
        (sample,) = result.results["end_to_end"]
        assert sample["scenario"] == "coercion-doublestar"
        assert sample["steps"]["condition"] is Verdict.VERIFIED
        assert sample["steps"]["tail_bound"] is Verdict.VERIFIED
        assert sample["verdict"] is not Verdict.REFUTED
        assert result.verdicts["end_to_end"] is sample["verdict"]

    def test_counterexample_sample_runs_the_construction(
        self, tmp_path: pathlib.Path
    ) -> None:
        config = config_from_mapping({
            "scenario": "gevrey-map",
            "output_dir": str(tmp_path),
            "window": {"radius": 8192.0, "step": 0.125},
            "map": {"step": 0.5, "end_to_end": [[0.6, 0.5, 0.7]]},
        })
        (sample,) = run(config).result.results["end_to_end"]
        assert sample["scenario"] == "counterexample-gevrey"
        assert set(sample["slow_decrease"]) == {"w_r", "w_s"}


class TestCounterexampleGevrey:
    def test_runs_are_deterministic(self, tmp_path: pathlib.Path) -> None:
        documents = []
        for label in ("first", "second"):
            config = config_from_mapping({
                "scenario": "counterexample-gevrey",
                "output_dir": str(tmp_path / label),
                "gevrey": {"a": 0.6, "r": 0.5, "s": 0.7},
            })
            outcome = run(config)
            assert outcome.exit_code == 0
            document = json.loads(outcome.report_path.read_text())
            document.pop("timestamp")
            documents.append(document)
        assert documents[0] == documents[1]
        assert documents[0]["results"]["slow_decrease"] == {
            "w_r": "verified-on-window",
            "w_s": "refuted",
        }


class TestSandwich:
    def test_default_models(self, tmp_path: pathlib.Path) -> None:
        config = config_from_mapping({
            "scenario": "sandwich",
            "output_dir": str(tmp_path),
            "window": {"radius": 256.0, "step": 0.125},
            "sandwich": {"ratios": [4.0]},
        })
        outcome = run(config)
        assert set(outcome.result.verdicts) == {"gaussian:1@4", "laplace:1@4"}
        assert outcome.result.verdict is Verdict.VERIFIED


class TestSettings:
    def test_gevrey_needs_its_triple(self, tmp_path: pathlib.Path) -> None:
        config = config_from_mapping({
            "scenario": "counterexample-gevrey",
            "output_dir": str(tmp_path),
        })
        with pytest.raises(ConfigError, match="gevrey.a"):
            run(config)


class TestShippedScenarios:
    @pytest.mark.parametrize(
        "path",
        sorted(
            (pathlib.Path(__file__).parent.parent / "scenarios").glob("*.toml")
        ),
        ids=lambda path: path.stem,
    )
    def test_files_name_registered_scenarios(self, path: pathlib.Path) -> None:
        config = load_config(path)
        assert config.scenario == path.stem
        assert default_registry.get(config.scenario).name == path.stem
