"""Scenario configuration files.

A configuration is a TOML document with a top-level ``scenario`` name,
optional ``seed`` and ``output_dir`` and one table per concern::

    scenario = "counterexample-gevrey"
    seed = 7

    [window]
    radius = 4096.0
    step = 0.125

    [gevrey]
    a = 0.6
    r = 0.5
    s = 0.7

Dotted ``--set`` overrides such as ``gevrey.a=0.55`` replace single
values; the right-hand side is read as a TOML value and falls back to a
plain string.
"""

import dataclasses
import logging
import pathlib
import tomllib
import typing

from convolab.constants import DEFAULT_SEED
from convolab.dcclasses import default_sequence_catalog
from convolab.exceptions import ConfigError
from convolab.grids import FrequencyWindow
from convolab.mollifiers import default_bump_catalog
from convolab.symbols import default_symbol_catalog
from convolab.weights import default_weight_catalog

if typing.TYPE_CHECKING:
    from collections.abc import Iterable

    from convolab.dcclasses import DCSequence
    from convolab.mollifiers import BumpModel
    from convolab.symbols import SymbolModel
    from convolab.weights import Weight

_logger = logging.getLogger(__name__)

_OVERRIDE_SEPARATOR: typing.Final[str] = "="
_PATH_SEPARATOR: typing.Final[str] = "."
_MISSING: typing.Final = object()


@dataclasses.dataclass(frozen=True, kw_only=True, slots=True)
class ScenarioConfig:
    """A parsed scenario configuration.

    Parameters
    ----------
    scenario
        Name of the scenario to run.
    seed
        Seed of every random draw made by the scenario.
    output_dir
        Directory receiving the report and its curves.
    tables
        The remaining TOML tables, keyed by table name.
    source
        File the configuration was read from, if any.
    """

    scenario: str
    seed: int = DEFAULT_SEED
    output_dir: pathlib.Path = pathlib.Path("reports")
    tables: dict[str, typing.Any] = dataclasses.field(default_factory=dict)
    source: pathlib.Path | None = None

    def get(self, path: str, default: typing.Any = _MISSING) -> typing.Any:
        """Value at a dotted ``path`` such as ``"gevrey.a"``.

        Raises
        ------
        ConfigError
            If the value is missing and no default is given.
        """
        node: typing.Any = self.tables
        for part in path.split(_PATH_SEPARATOR):
            if not isinstance(node, dict) or part not in node:
                if default is _MISSING:
                    error_message = (
                        f"Scenario {self.scenario!r} needs the setting {path!r}"
                    )
                    raise ConfigError(error_message)
                return default
            node = node[part]
        return node

    def number(self, path: str, default: float | None = None) -> float:
        """Float value at ``path``."""
        value = self.get(path) if default is None else self.get(path, default)
        try:
            return float(value)
        except (TypeError, ValueError) as exc:
            error_message = f"Setting {path!r} must be a number, got {value!r}"
            raise ConfigError(error_message) from exc

    def numbers(
        self, path: str, default: Iterable[float] | None = None
    ) -> tuple[float, ...]:
        """Tuple of floats at ``path``."""
        value = self.get(path) if default is None else self.get(path, default)
        try:
            return tuple(float(x) for x in value)
        except (TypeError, ValueError) as exc:
            error_message = f"Setting {path!r} must be a list of numbers"
            raise ConfigError(error_message) from exc

    def window(
        self,
        table: str = "window",
        *,
        radius: float = 1024.0,
        step: float = 0.125,
    ) -> FrequencyWindow:
        """Frequency window from ``[table]`` with the given defaults."""
        return FrequencyWindow(
            radius=self.number(f"{table}.radius", radius),
            step=self.number(f"{table}.step", step),
        )

    def weight(self, path: str, default: str | None = None) -> Weight:
        """Weight named by the catalog key at ``path``."""
        return default_weight_catalog.resolve(self._key(path, default))

    def sequence(self, path: str, default: str | None = None) -> DCSequence:
        """Denjoy-Carleman sequence named by the key at ``path``."""
        return default_sequence_catalog.resolve(self._key(path, default))

    def symbol(self, path: str, default: str | None = None) -> SymbolModel:
        """Symbol named by the catalog key at ``path``."""
        return default_symbol_catalog.resolve(self._key(path, default))

    def bump(self, path: str, default: str | None = None) -> BumpModel:
        """Bump named by the catalog key at ``path``."""
        return default_bump_catalog.resolve(self._key(path, default))

    def _key(self, path: str, default: str | None) -> str:
        key = self.get(path) if default is None else self.get(path, default)
        if not isinstance(key, str):
            error_message = f"Setting {path!r} must be a catalog key string"
            raise ConfigError(error_message)
        return key


def _parse_value(text: str) -> typing.Any:
    try:
        return tomllib.loads(f"value = {text}")["value"]
    except tomllib.TOMLDecodeError:
        return text


def apply_override(data: dict[str, typing.Any], override: str) -> None:
    """Apply one ``dotted.key=value`` override to raw TOML data in place.

    Raises
    ------
    ConfigError
        If the override has no ``=`` or crosses a non-table value.
    """
    path, separator, text = override.partition(_OVERRIDE_SEPARATOR)
    if not separator or not path.strip():
        error_message = f"Override {override!r} must look like key=value"
        raise ConfigError(error_message)

    *parents, leaf = path.strip().split(_PATH_SEPARATOR)
    node = data
    for part in parents:
        child = node.setdefault(part, {})
        if not isinstance(child, dict):
            error_message = f"Override {override!r} crosses the value {part!r}"
            raise ConfigError(error_message)
        node = child
    node[leaf] = _parse_value(text.strip())
    _logger.debug("Applied override %s", override)


def config_from_mapping(
    data: dict[str, typing.Any],
    *,
    source: pathlib.Path | None = None,
) -> ScenarioConfig:
    """Build a configuration from raw TOML data.

    Raises
    ------
    ConfigError
        If ``scenario`` is missing or ``seed`` is not an integer.
    """
    tables = dict(data)
    scenario = tables.pop("scenario", None)
    if not isinstance(scenario, str):
        error_message = "Configuration needs a top-level scenario name"
        raise ConfigError(error_message)
    seed = tables.pop("seed", DEFAULT_SEED)
    if not isinstance(seed, int) or isinstance(seed, bool):
        error_message = f"Seed must be an integer, got {seed!r}"
        raise ConfigError(error_message)
    output_dir = pathlib.Path(str(tables.pop("output_dir", "reports")))
    return ScenarioConfig(
        scenario=scenario,
        seed=seed,
        output_dir=output_dir,
        tables=tables,
        source=source,
    )


def load_config(
    path: str | pathlib.Path,
    *,
    overrides: Iterable[str] = (),
    output_dir: str | pathlib.Path | None = None,
    seed: int | None = None,
) -> ScenarioConfig:
    """Read a TOML scenario file and apply command-line overrides.

    Raises
    ------
    ConfigError
        If the file cannot be read or parsed, or an override is
        malformed.
    """
    source = pathlib.Path(path)
    try:
        with source.open("rb") as handle:
            data = tomllib.load(handle)
    except (OSError, tomllib.TOMLDecodeError) as exc:
        error_message = f"Cannot read configuration {source}"
        raise ConfigError(error_message) from exc

    for override in overrides:
        apply_override(data, override)
    if output_dir is not None:
        data["output_dir"] = str(output_dir)
    if seed is not None:
        data["seed"] = seed
    config = config_from_mapping(data, source=source)
    _logger.info("Loaded scenario %s from %s", config.scenario, source)
    return config
