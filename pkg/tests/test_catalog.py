import pytest

from convolab.catalog import Catalog
from convolab.exceptions import CatalogKeyError, ConfigError


@pytest.fixture
def catalog() -> Catalog[float]:
    catalog: Catalog[float] = Catalog("number")
    catalog.register("one", lambda: 1.0)
    catalog.register("half", lambda x: float(x) / 2, usage="half:<x>")
    return catalog


class TestCatalog:
    def test_resolves_prefix_with_arguments(
        self, catalog: Catalog[float]
    ) -> None:
        assert catalog.resolve("one") == 1.0
        assert catalog.resolve("half:3") == 1.5

    def test_unknown_prefix_carries_key(self, catalog: Catalog[float]) -> None:
        with pytest.raises(CatalogKeyError) as info:
            catalog.resolve("two")
        assert info.value.key == "two"
        assert info.value.catalog == "number"

    def test_bad_arguments_are_config_errors(
        self, catalog: Catalog[float]
    ) -> None:
        with pytest.raises(ConfigError):
            catalog.resolve("half:x")
        with pytest.raises(ConfigError):
            catalog.resolve("one:2")

    def test_duplicate_prefix_needs_overwrite(
        self, catalog: Catalog[float]
    ) -> None:
        with pytest.raises(ValueError, match="already registered"):
            catalog.register("one", lambda: 2.0)
        catalog.register("one", lambda: 2.0, overwrite=True)
        assert catalog.resolve("one") == 2.0

    def test_keys_and_membership(self, catalog: Catalog[float]) -> None:
        assert catalog.keys() == ["half:<x>", "one"]
        assert "half:4" in catalog
        assert "third" not in catalog
        assert 3 not in catalog
