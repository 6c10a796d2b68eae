import pathlib

import pytest

from convolab.config import (
    apply_override,
    config_from_mapping,
    load_config,
)
from convolab.constants import DEFAULT_SEED
from convolab.exceptions import ConfigError, CatalogKeyError

SCENARIO = """\
scenario = "counterexample-gevrey"
seed = 7

[window]
radius = 4096.0

[gevrey]
a = 0.6
r = 0.5
s = 0.7
"""


@pytest.fixture
def scenario_file(tmp_path: pathlib.Path) -> pathlib.Path:
    path = tmp_path / "gevrey.toml"
    path.write_text(SCENARIO, encoding="utf-8")
    return path


class TestLoadConfig:
    def test_tables(self, scenario_file: pathlib.Path) -> None:
        config = load_config(scenario_file)
        assert config.scenario == "counterexample-gevrey"
        assert config.seed == 7
        assert config.source == scenario_file
        assert config.number("gevrey.a") == pytest.approx(0.6)
        window = config.window()
        assert window.radius == 4096.0
        assert window.step == 0.125

    def test_overrides(self, scenario_file: pathlib.Path) -> None:
        config = load_config(
            scenario_file,
            overrides=["gevrey.a=0.55", "notes.label=first run"],
            output_dir="out",
            seed=11,
        )
        assert config.number("gevrey.a") == pytest.approx(0.55)
        assert config.get("notes.label") == "first run"
        assert config.output_dir == pathlib.Path("out")
        assert config.seed == 11

    def test_missing_file(self, tmp_path: pathlib.Path) -> None:
        with pytest.raises(ConfigError, match="Cannot read"):
            load_config(tmp_path / "absent.toml")

    def test_invalid_toml(self, tmp_path: pathlib.Path) -> None:
        path = tmp_path / "broken.toml"
        path.write_text("scenario = \n", encoding="utf-8")
        with pytest.raises(ConfigError):
            load_config(path)


class TestMapping:
    def test_defaults(self) -> None:
        config = config_from_mapping({"scenario": "sandwich"})
        assert config.seed == DEFAULT_SEED
        assert config.output_dir == pathlib.Path("reports")
        assert config.get("sandwich.exponent", 0.5) == 0.5

    def test_needs_a_scenario(self) -> None:
        with pytest.raises(ConfigError, match="scenario"):
            config_from_mapping({"seed": 1})

    @pytest.mark.parametrize("seed", [True, 1.5, "7"])
    def test_seed_must_be_an_integer(self, seed: object) -> None:
        with pytest.raises(ConfigError, match="Seed"):
            config_from_mapping({"scenario": "sandwich", "seed": seed})

    def test_missing_setting(self) -> None:
        config = config_from_mapping({"scenario": "counterexample-gevrey"})
        with pytest.raises(ConfigError, match="gevrey.a"):
            config.number("gevrey.a")

    def test_numbers(self) -> None:
        config = config_from_mapping(
            {"scenario": "sandwich", "sandwich": {"ratios": [2, 4], "bad": 3}}
        )
        assert config.numbers("sandwich.ratios") == (2.0, 4.0)
        with pytest.raises(ConfigError):
            config.numbers("sandwich.bad")
        with pytest.raises(ConfigError):
            config.number("sandwich.ratios")

    def test_catalog_keys(self) -> None:
        config = config_from_mapping(
            {"scenario": "x", "weights": {"w": "gevrey:0.5", "n": 3}}
        )
        assert config.weight("weights.w").name == "gevrey:0.5"
        assert config.sequence("weights.l", "analytic").name == "analytic"
        with pytest.raises(ConfigError, match="catalog key"):
            config.weight("weights.n")
        with pytest.raises(CatalogKeyError):
            config.bump("weights.b", "no-such-bump")


class TestOverride:
    def test_nested_tables_are_created(self) -> None:
        data: dict[str, object] = {}
        apply_override(data, "a.b.c=[1, 2]")
        assert data == {"a": {"b": {"c": [1, 2]}}}

    def test_malformed(self) -> None:
        with pytest.raises(ConfigError, match="key=value"):
            apply_override({}, "gevrey.a")

    def test_crossing_a_value(self) -> None:
        with pytest.raises(ConfigError, match="crosses"):
            apply_override({"gevrey": 1}, "gevrey.a=2")
