"""Tri-state verdicts and the report records every scan returns.

Windowed scans can neither prove an asymptotic statement nor refute
one; they return a :class:`Verdict` together with the evidence that
led to it (certificates, witnesses and margin curves).
"""

import dataclasses
import enum
import typing

import numpy as np

if typing.TYPE_CHECKING:
    from collections.abc import Iterable

    import numpy.typing as npt


class Verdict(enum.StrEnum):
    """Outcome of a windowed check."""

    VERIFIED = "verified-on-window"
    """The property holds at every tested point of the window."""

    REFUTED = "refuted"
    """The property fails, with witnesses and a worsening trend."""

    INCONCLUSIVE = "inconclusive"
    """The window does not support either conclusion."""


class Relation(enum.StrEnum):
    """Order relation between two weights."""

    DOMINATES = "dominates"
    """``w2 >= A + B * w1`` with a constant ``B > 0``."""

    STRICTLY_DOMINATES = "strictly_dominates"
    """Domination with a ratio that grows along the scale ladder."""

    EQUIVALENT = "equivalent"
    """Domination in both directions."""

    FAILS = "fails"
    """No certificate was found."""

    INCONCLUSIVE = "inconclusive"
    """The window is too small to read a trend."""


class Trend(enum.StrEnum):
    """Reading of the partial integrals of an improper integral."""

    DIVERGENT = "divergent-trend"
    """Increments per dyadic scale stay bounded away from zero."""

    CONVERGENT = "convergent-trend"
    """Increments per dyadic scale decay geometrically."""

    INCONCLUSIVE = "inconclusive"
    """Neither pattern is visible on the ladder."""


def combine(verdicts: Iterable[Verdict]) -> Verdict:
    """Merge several verdicts into one.

    A single refutation wins over anything else; otherwise any
    inconclusive verdict makes the result inconclusive.

    Parameters
    ----------
    verdicts
        The verdicts to merge. An empty iterable yields ``VERIFIED``.

    Returns
    -------
    Verdict
        The merged verdict.
    """
    seen = set(verdicts)
    if Verdict.REFUTED in seen:
        return Verdict.REFUTED
    if Verdict.INCONCLUSIVE in seen:
        return Verdict.INCONCLUSIVE
    return Verdict.VERIFIED


def _jsonable(value: typing.Any) -> typing.Any:
    if isinstance(value, enum.Enum):
        return value.value
    if isinstance(value, np.ndarray):
        return [_jsonable(v) for v in value.tolist()]
    if isinstance(value, (np.floating, float)):
        number = float(value)
        if np.isnan(number):
            return None
        if np.isinf(number):
            return "inf" if number > 0 else "-inf"
        return number
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, np.bool_):
        return bool(value)
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    return value


@dataclasses.dataclass(frozen=True, kw_only=True, slots=True)
class VerdictReport:
    """Verdict of a single check with its evidence.

    Parameters
    ----------
    name
        Short name of the check.
    verdict
        The tri-state outcome.
    certificate
        Constants certifying the property when it holds.
    witnesses
        Points where the property is tightest or fails.
    notes
        Free-form remarks, e.g. excluded points or fitted constants.
    """

    name: str
    verdict: Verdict
    certificate: dict[str, typing.Any] = dataclasses.field(
        default_factory=dict
    )
    witnesses: tuple[float, ...] = ()
    notes: tuple[str, ...] = ()

    @property
    def holds(self) -> bool:
        """Whether the verdict is ``VERIFIED``."""
        return self.verdict is Verdict.VERIFIED

    def as_dict(self) -> dict[str, typing.Any]:
        """Return a JSON-compatible representation."""
        return _jsonable({
            "name": self.name,
            "verdict": self.verdict,
            "certificate": self.certificate,
            "witnesses": self.witnesses,
            "notes": self.notes,
        })


@dataclasses.dataclass(frozen=True, kw_only=True, slots=True)
class BoundReport:
    """Pointwise verification of an inequality ``lhs <= rhs``.

    Parameters
    ----------
    name
        Short name of the inequality.
    verdict
        The tri-state outcome.
    params
        Parameters the inequality was evaluated with.
    margin_min
        Smallest margin ``rhs - lhs`` over all tested points.
    witnesses
        Points with negative margin.
    curves
        Named curves (for example the margin) on a shared abscissa.
    notes
        Free-form remarks.
    """

    name: str
    verdict: Verdict
    params: dict[str, typing.Any] = dataclasses.field(default_factory=dict)
    margin_min: float = float("inf")
    witnesses: tuple[float, ...] = ()
    curves: dict[str, npt.NDArray[np.float64]] = dataclasses.field(
        default_factory=dict
    )
    notes: tuple[str, ...] = ()

    @property
    def holds(self) -> bool:
        """Whether the verdict is ``VERIFIED``."""
        return self.verdict is Verdict.VERIFIED

    def as_dict(self) -> dict[str, typing.Any]:
        """Return a JSON-compatible representation without curves."""
        return _jsonable({
            "name": self.name,
            "verdict": self.verdict,
            "params": self.params,
            "margin_min": self.margin_min,
            "witnesses": self.witnesses,
            "notes": self.notes,
        })


def bound_report(
    name: str,
    abscissa: npt.NDArray[np.float64],
    margin: npt.NDArray[np.float64],
    *,
    params: dict[str, typing.Any] | None = None,
    tolerance: float = 0.0,
    max_witnesses: int = 16,
    abscissa_name: str = "xi",
    extra_curves: dict[str, npt.NDArray[np.float64]] | None = None,
) -> BoundReport:
    """Build a :class:`BoundReport` from a margin curve.

    Parameters
    ----------
    name
        Short name of the inequality.
    abscissa
        Points at which the margin was evaluated.
    margin
        Values of ``rhs - lhs``; ``nan`` entries are ignored.
    params
        Parameters recorded in the report.
    tolerance
        Margins down to ``-tolerance`` still count as satisfied.
    max_witnesses
        Number of worst violating points recorded.
    abscissa_name
        Key of the abscissa in the stored curves.
    extra_curves
        Additional curves stored alongside the margin.

    Returns
    -------
    BoundReport
        ``VERIFIED`` if every finite margin is at least
        ``-tolerance``, ``REFUTED`` otherwise, and ``INCONCLUSIVE`` if
        no finite margin exists.
    """
    margin = np.asarray(margin, dtype=np.float64)
    finite = np.isfinite(margin)
    curves = {
        abscissa_name: np.asarray(abscissa, dtype=np.float64),
        "margin": margin,
    }
    curves.update(extra_curves or {})
    if not finite.any():
        return BoundReport(
            name=name,
            verdict=Verdict.INCONCLUSIVE,
            params=params or {},
            margin_min=float("nan"),
            curves=curves,
            notes=("no finite margin on the window",),
        )

    margin_min = float(np.min(margin[finite]))
    bad = np.flatnonzero(finite & (margin < -tolerance))
    worst = bad[np.argsort(margin[bad])][:max_witnesses]
    witnesses = tuple(float(abscissa[i]) for i in np.sort(worst))
    verdict = Verdict.REFUTED if bad.size else Verdict.VERIFIED
    return BoundReport(
        name=name,
        verdict=verdict,
        params=params or {},
        margin_min=margin_min,
        witnesses=witnesses,
        curves=curves,
    )


@dataclasses.dataclass(frozen=True, kw_only=True, slots=True)
class TrendVerdict:
    """Trend reading of partial integrals along a dyadic ladder.

    Parameters
    ----------
    trend
        The trend classification.
    ladder
        Upper integration limits.
    partials
        Partial integrals at each ladder limit.
    increments
        Differences of consecutive partial integrals.
    """

    trend: Trend
    ladder: tuple[float, ...]
    partials: tuple[float, ...]
    increments: tuple[float, ...]

    def as_dict(self) -> dict[str, typing.Any]:
        """Return a JSON-compatible representation."""
        return _jsonable(dataclasses.asdict(self))


def jsonable(value: typing.Any) -> typing.Any:
    """Convert numpy scalars, arrays and enums into JSON values.

    Parameters
    ----------
    value
        Arbitrary nested structure of dicts, sequences and scalars.

    Returns
    -------
    Any
        The same structure built from JSON-compatible values.
    """
    return _jsonable(value)
