"""String-keyed registries for weights, sequences, symbols and bumps.

Configuration files and the command line refer to models by keys such as
``"gevrey:0.5"`` or ``"analytic"``. A :class:`Catalog` maps the key
prefix to a factory and passes the remaining arguments as strings.
"""

import logging
import typing

if typing.TYPE_CHECKING:
    from collections.abc import Callable

from convolab.constants import CATALOG_SEPARATOR
from convolab.exceptions import CatalogKeyError, ConfigError

_logger = logging.getLogger(__name__)


class Catalog[T]:
    """Registry resolving string keys such as ``"gevrey:0.5"``.

    A key consists of a prefix and optional arguments separated by
    ``":"``. Each prefix maps to a factory receiving the argument
    strings.

    Parameters
    ----------
    name
        Human-readable catalog name used in error messages.
    """

    def __init__(self, name: str) -> None:
        self.name = name
        self._factories: dict[str, Callable[..., T]] = {}
        self._usage: dict[str, str] = {}

    def register(
        self,
        prefix: str,
        factory: Callable[..., T],
        *,
        usage: str | None = None,
        overwrite: bool = False,
    ) -> None:
        """Add a factory to the catalog.

        Parameters
        ----------
        prefix
            Key prefix the factory answers to.
        factory
            Callable receiving the key arguments as strings.
        usage
            Example key shown by ``convolab catalog``.
        overwrite
            Whether to overwrite an existing factory of the same prefix.

        Raises
        ------
        ValueError
            If the prefix is already registered and ``overwrite`` is
            ``False``.
        """
        if prefix in self._factories and not overwrite:
            error_message = (
                f"Prefix {prefix!r} is already registered in the "
                f"{self.name} catalog. Use overwrite to replace it."
            )
            raise ValueError(error_message)

        self._factories[prefix] = factory
        self._usage[prefix] = usage or prefix
        _logger.debug("Registered %s catalog prefix %r", self.name, prefix)

    def resolve(self, key: str) -> T:
        """Build the object named by ``key``.

        Raises
        ------
        CatalogKeyError
            If the prefix is unknown.
        ConfigError
            If the factory rejects the arguments.
        """
        prefix, *arguments = key.split(CATALOG_SEPARATOR)
        if (factory := self._factories.get(prefix)) is None:
            raise CatalogKeyError(key, catalog=self.name)

        try:
            return factory(*arguments)
        except (TypeError, ValueError) as exc:
            error_message = f"Invalid arguments in {self.name} key {key!r}"
            raise ConfigError(error_message) from exc

    def keys(self) -> list[str]:
        """Example keys of every registered prefix, sorted."""
        return sorted(self._usage.values())

    def __contains__(self, key: object) -> bool:
        if not isinstance(key, str):
            return False
        return key.split(CATALOG_SEPARATOR)[0] in self._factories
