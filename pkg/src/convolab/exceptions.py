"""Exceptions used throughout the package."""

import typing


class ConvolabError(Exception):
    """Base exception class for convolab-related errors."""


class RepresentationError(ConvolabError):
    """Raised when a model cannot be evaluated where it is needed."""


class InvariantViolationError(ConvolabError):
    """Raised when a model breaks one of its structural invariants."""

    def __init__(self, message: str, *, witness: typing.Any) -> None:
        super().__init__(f"{message} (witness: {witness!r})")
        self.witness = witness


class PreconditionError(ConvolabError):
    """Raised when an operation is called outside its hypotheses."""

    def __init__(
        self,
        message: str,
        *,
        witness: typing.Any | None = None,
    ) -> None:
        if witness is not None:
            message = f"{message} (witness: {witness!r})"
        super().__init__(message)
        self.witness = witness


class ConfigError(ConvolabError):
    """Raised when a scenario configuration is invalid."""


class CatalogKeyError(ConfigError):
    """Raised when a catalog key does not resolve."""

    def __init__(self, key: str, *, catalog: str) -> None:
        super().__init__(f"Key {key!r} not found in {catalog} catalog")
        self.key = key
        self.catalog = catalog


class ShapeError(ConvolabError):
    """Raised when two grid objects live on different windows."""


class AliasingError(ConvolabError):
    """Raised when a physical model is too wide for the window."""

    def __init__(self, *, tail_mass: float, tolerance: float) -> None:
        super().__init__(
            f"Physical tail mass {tail_mass:.3e} exceeds the aliasing "
            f"tolerance {tolerance:.1e}"
        )
        self.tail_mass = tail_mass
        self.tolerance = tolerance


class EquationSolveError(ConvolabError):
    """Raised when a scalar equation has no bracketed root."""

    def __init__(self, message: str, *, diagnostics: dict[str, float]) -> None:
        details = ", ".join(f"{k}={v:.6g}" for k, v in diagnostics.items())
        super().__init__(f"{message} ({details})")
        self.diagnostics = diagnostics


class UnsupportedModelError(ConvolabError):
    """Raised when a model lacks an access path an operation needs."""


class ReportFormatError(ConvolabError):
    """Raised when a report file cannot be parsed."""
