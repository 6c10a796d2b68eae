"""Beurling weight functions and their order relations.

A weight is a nonnegative, subadditive, radial function normalised by
``w(0) = 0`` that grows at least logarithmically and satisfies the
integral bound ``∫ w(ξ) / (1 + |ξ|²) dξ < ∞``. Every asymptotic claim
about weights is read on a finite :class:`~convolab.grids.FrequencyWindow`
through a dyadic scale ladder, and returned as a windowed verdict.
"""

import dataclasses
import logging
import pathlib
import typing

import numpy as np
import numpy.typing as npt
from scipy import integrate

from convolab.catalog import Catalog
from convolab.constants import (
    DEFAULT_SEED,
    GRID_TOLERANCE,
    SUBADDITIVITY_SAMPLES,
)
from convolab.exceptions import (
    InvariantViolationError,
    PreconditionError,
    RepresentationError,
)
from convolab.utilities import range_max, read_two_columns
from convolab.verdicts import Relation, Verdict, VerdictReport

if typing.TYPE_CHECKING:
    from collections.abc import Callable

    from convolab.grids import FrequencyWindow

_logger = logging.getLogger(__name__)

type Profile = Callable[[npt.NDArray[np.float64]], npt.NDArray[np.float64]]
"""Radial profile evaluated on nonnegative radii."""

_TREND_PERSISTENCE: typing.Final[float] = 0.5
_INTEGRAL_DECAY_SLOPE: typing.Final[float] = -0.02


@dataclasses.dataclass(frozen=True, eq=False, kw_only=True, slots=True)
class Weight:
    """Radial weight function.

    Parameters
    ----------
    name
        Catalog-style name, e.g. ``"gevrey:0.5"``.
    profile
        Vectorised map from nonnegative radii to values.
    dimension
        Dimension of the underlying space. Numerics require ``1``.
    monotone_radial
        Whether the profile is nondecreasing in the radius.
    provably_subadditive
        ``False`` for sampled profiles, whose subadditivity can only be
        spot-checked.
    max_radius
        Largest radius at which the profile may be evaluated.
    """

    name: str
    profile: Profile
    dimension: int = 1
    monotone_radial: bool = True
    provably_subadditive: bool = True
    max_radius: float = float("inf")

    def __call__(self, xi: npt.ArrayLike) -> npt.NDArray[np.float64]:
        """Evaluate the weight at ``xi`` (radially).

        Raises
        ------
        RepresentationError
            If some ``|xi|`` lies beyond :attr:`max_radius` or the
            profile returns non-finite values.
        """
        radius = np.abs(np.asarray(xi, dtype=np.float64))
        if radius.size and float(radius.max()) > self.max_radius * (
            1 + 1e-12
        ):
            error_message = (
                f"Weight {self.name!r} is not evaluable at radius "
                f"{float(radius.max()):.6g} (max {self.max_radius:.6g})"
            )
            raise RepresentationError(error_message)

        with np.errstate(all="ignore"):
            values = np.asarray(self.profile(radius), dtype=np.float64)
        if not np.all(np.isfinite(values)):
            error_message = f"Weight {self.name!r} returned non-finite values"
            raise RepresentationError(error_message)
        return values

    def plus(self, other: Weight) -> Weight:
        """Pointwise sum ``self + other``."""
        return Weight(
            name=f"({self.name})+({other.name})",
            profile=lambda r: self.profile(r) + other.profile(r),
            dimension=self.dimension,
            monotone_radial=self.monotone_radial and other.monotone_radial,
            provably_subadditive=(
                self.provably_subadditive and other.provably_subadditive
            ),
            max_radius=min(self.max_radius, other.max_radius),
        )

    def compose(self, outer: Profile, *, name: str) -> Weight:
        """Composition ``outer(self(ξ))`` with a nondecreasing ``outer``.

        Subadditivity is not preserved in general, so the result is
        flagged as not provably subadditive.
        """
        return Weight(
            name=f"{name}∘({self.name})",
            profile=lambda r: outer(self.profile(r)),
            dimension=self.dimension,
            monotone_radial=self.monotone_radial,
            provably_subadditive=False,
            max_radius=self.max_radius,
        )


def log_weight() -> Weight:
    """The weight ``log(1 + |ξ|)`` (distributions)."""
    return Weight(name="log", profile=np.log1p)


def gevrey_weight(alpha: float) -> Weight:
    """The Gevrey weight ``|ξ|^α`` with ``0 < α < 1``.

    Raises
    ------
    ValueError
        If ``alpha`` lies outside ``(0, 1)``.
    """
    if not 0 < alpha < 1:
        error_message = f"Gevrey exponent must lie in (0, 1), got {alpha}"
        raise ValueError(error_message)
    return Weight(name=f"gevrey:{alpha:g}", profile=lambda r: r**alpha)


def affine_log_weight(b: float) -> Weight:
    """The weight ``b · log(1 + |ξ|)`` with ``b > 0``."""
    if b <= 0:
        error_message = f"Log coefficient must be positive, got {b}"
        raise ValueError(error_message)
    return Weight(name=f"affine-log:{b:g}", profile=lambda r: b * np.log1p(r))


def power_log_weight(p: float) -> Weight:
    """The weight ``log(1 + |ξ|)^p`` with ``0 < p <= 1``.

    Larger powers are not subadditive. Powers below one grow slower
    than the logarithm, so they fail the lower bound ``w >= a + b log``
    only asymptotically; on a finite window the logarithmic fit of
    :func:`check_membership` still accepts them.
    """
    if not 0 < p <= 1:
        error_message = f"Log power must lie in (0, 1], got {p}"
        raise ValueError(error_message)
    return Weight(name=f"power-log:{p:g}", profile=lambda r: np.log1p(r) ** p)


def sampled_weight(
    radii: npt.ArrayLike,
    values: npt.ArrayLike,
    *,
    name: str = "sampled",
) -> Weight:
    """Weight given by a table, linearly interpolated.

    Parameters
    ----------
    radii
        Strictly increasing nonnegative radii starting at ``0``.
    values
        Profile values at ``radii``.
    name
        Name of the weight.

    Raises
    ------
    RepresentationError
        If the table is malformed.
    """
    r = np.asarray(radii, dtype=np.float64)
    v = np.asarray(values, dtype=np.float64)
    if r.ndim != 1 or r.shape != v.shape or r.size < 2:  # noqa: PLR2004
        error_message = "Sampled weight needs two equally long columns"
        raise RepresentationError(error_message)
    if r[0] != 0 or np.any(np.diff(r) <= 0):
        error_message = "Sampled radii must start at 0 and strictly increase"
        raise RepresentationError(error_message)
    if not np.all(np.isfinite(v)):
        error_message = "Sampled weight values must be finite"
        raise RepresentationError(error_message)

    return Weight(
        name=name,
        profile=lambda x: np.interp(x, r, v),
        monotone_radial=bool(np.all(np.diff(v) >= 0)),
        provably_subadditive=False,
        max_radius=float(r[-1]),
    )


def load_sampled_weight(path: str | pathlib.Path) -> Weight:
    """Read a sampled weight from a two-column CSV (radius, value)."""
    table = read_two_columns(pathlib.Path(path))
    return sampled_weight(table[:, 0], table[:, 1], name=f"sampled:{path}")


# ----------------------------------------------------------------------
# --- Membership -------------------------------------------------------
# ----------------------------------------------------------------------


@dataclasses.dataclass(frozen=True, kw_only=True, slots=True)
class MembershipReport:
    """Result of :func:`check_membership`.

    Parameters
    ----------
    weight
        Name of the checked weight.
    checks
        Pass/fail per invariant: ``normalization``, ``subadditive``,
        ``log_lower_bound`` and ``integral_bound``.
    a, b
        Fitted constants of the lower bound ``w >= a + b·log(1+ξ)``.
    witnesses
        Failing points per invariant.
    integral_increments
        Increments of ``∫ w / (1 + ξ²)`` over consecutive ladder rungs.
    provable
        Whether subadditivity is known structurally.
    """

    weight: str
    checks: dict[str, bool]
    a: float
    b: float
    witnesses: dict[str, tuple[float, ...]]
    integral_increments: tuple[float, ...]
    provable: bool

    @property
    def passed(self) -> bool:
        """Whether every check passed."""
        return all(self.checks.values())

    def as_dict(self) -> dict[str, typing.Any]:
        """Return a JSON-compatible representation."""
        return {
            "weight": self.weight,
            "checks": dict(self.checks),
            "a": self.a,
            "b": self.b,
            "witnesses": {k: list(v) for k, v in self.witnesses.items()},
            "integral_increments": list(self.integral_increments),
            "provable": self.provable,
            "verdict": (
                Verdict.VERIFIED if self.passed else Verdict.REFUTED
            ).value,
        }


def check_membership(
    w: Weight,
    win: FrequencyWindow,
    *,
    seed: int = DEFAULT_SEED,
    samples: int = SUBADDITIVITY_SAMPLES,
) -> MembershipReport:
    """Check the defining properties of a weight on a window.

    Parameters
    ----------
    w
        The weight to check. Must be evaluable on ``[0, 2Ξ]``.
    win
        Frequency window.
    seed
        Seed of the random pairs used for the subadditivity check.
    samples
        Number of random pairs.

    Returns
    -------
    MembershipReport
        Per-invariant results with fitted ``(a, b)``.

    Raises
    ------
    RepresentationError
        If the profile is not evaluable on ``[0, 2Ξ]``.
    InvariantViolationError
        If the profile takes negative values.
    """
    radius = win.nonnegative()
    values = w(radius)
    w(np.array([2 * win.radius]))

    if np.any(values < -GRID_TOLERANCE):
        index = int(np.argmin(values))
        error_message = f"Weight {w.name!r} takes negative values"
        raise InvariantViolationError(
            error_message, witness=float(radius[index])
        )

    checks: dict[str, bool] = {}
    witnesses: dict[str, tuple[float, ...]] = {}

    checks["normalization"] = abs(float(values[0])) <= GRID_TOLERANCE
    if not checks["normalization"]:
        witnesses["normalization"] = (0.0,)

    rng = np.random.default_rng(seed)
    xi, eta = rng.uniform(-win.radius, win.radius, size=(2, samples))
    lhs = w(xi + eta)
    rhs = w(xi) + w(eta)
    violated = lhs - rhs > GRID_TOLERANCE * (1 + rhs)
    checks["subadditive"] = not bool(violated.any())
    if violated.any():
        index = np.flatnonzero(violated)[:8]
        witnesses["subadditive"] = tuple(
            float(v) for pair in zip(xi[index], eta[index], strict=True)
            for v in pair
        )

    a, b = _fit_log_lower_bound(radius, values, win)
    checks["log_lower_bound"] = b > GRID_TOLERANCE
    if not checks["log_lower_bound"]:
        witnesses["log_lower_bound"] = (win.radius,)

    increments = _integral_increments(radius, values, win)
    slope = _log_slope(np.asarray(increments))
    checks["integral_bound"] = slope < _INTEGRAL_DECAY_SLOPE
    if not checks["integral_bound"]:
        witnesses["integral_bound"] = (win.radius,)

    _logger.debug(
        "Membership of %s: %s (a=%.4g, b=%.4g)", w.name, checks, a, b
    )
    return MembershipReport(
        weight=w.name,
        checks=checks,
        a=a,
        b=b,
        witnesses=witnesses,
        integral_increments=tuple(increments),
        provable=w.provably_subadditive,
    )


def _fit_log_lower_bound(
    radius: npt.NDArray[np.float64],
    values: npt.NDArray[np.float64],
    win: FrequencyWindow,
) -> tuple[float, float]:
    outer = radius >= win.ladder[len(win.ladder) // 2 - 1]
    logs = np.log1p(radius)
    design = np.column_stack((np.ones(outer.sum()), logs[outer]))
    coef, *_ = np.linalg.lstsq(design, values[outer], rcond=None)
    b = float(coef[1])
    if b <= 0:
        return float("-inf"), b
    a = float(np.min(values - b * logs))
    return a, b


def _integral_increments(
    radius: npt.NDArray[np.float64],
    values: npt.NDArray[np.float64],
    win: FrequencyWindow,
) -> list[float]:
    cumulative = integrate.cumulative_trapezoid(
        values / (1 + radius**2), radius, initial=0.0
    )
    partial = np.interp(win.ladder, radius, cumulative)
    return [float(d) for d in np.diff(partial)]


def _log_slope(increments: npt.NDArray[np.float64]) -> float:
    positive = increments > 0
    if positive.sum() < 2:  # noqa: PLR2004
        return float("-inf") if np.all(increments <= 0) else 0.0
    k = np.arange(increments.size)[positive]
    return float(np.polyfit(k, np.log(increments[positive]), 1)[0])


# ----------------------------------------------------------------------
# --- Order relations --------------------------------------------------
# ----------------------------------------------------------------------


@dataclasses.dataclass(frozen=True, kw_only=True, slots=True)
class DominationVerdict:
    """Result of comparing two weights (or two curves).

    Parameters
    ----------
    relation
        The strongest relation found on the window.
    A, B
        Certificate ``upper >= A + B · lower`` at every grid point.
    trend
        Per-rung ratios used for the trend reading.
    witnesses
        Frequencies where the inequality is tightest or fails.
    """

    relation: Relation
    A: float
    B: float
    trend: tuple[float, ...] = ()
    witnesses: tuple[float, ...] = ()

    @property
    def holds(self) -> bool:
        """Whether some form of domination holds."""
        return self.relation in {
            Relation.DOMINATES,
            Relation.STRICTLY_DOMINATES,
            Relation.EQUIVALENT,
        }

    def as_dict(self) -> dict[str, typing.Any]:
        """Return a JSON-compatible representation."""
        return {
            "relation": self.relation.value,
            "A": self.A,
            "B": self.B,
            "trend": list(self.trend),
            "witnesses": list(self.witnesses),
        }


def _rung_statistic(
    xi: npt.NDArray[np.float64],
    values: npt.NDArray[np.float64],
    win: FrequencyWindow,
    reducer: Callable[[npt.NDArray[np.float64]], float],
) -> list[float]:
    # The innermost annulus holds the origin, where ratios degenerate.
    stats = []
    for mask in win.rung_masks(xi)[1:]:
        selected = values[mask & np.isfinite(values)]
        if selected.size:
            stats.append(float(reducer(selected)))
    return stats


def _decays(ratios: list[float]) -> bool:
    """Whether rung ratios fall steadily without levelling off."""
    if len(ratios) < 3 or min(ratios) <= 0:  # noqa: PLR2004
        return len(ratios) >= 3 and min(ratios) <= 0  # noqa: PLR2004
    drops = -np.diff(np.log(ratios))
    if np.any(drops <= 0):
        return False
    return bool(drops[-1] >= _TREND_PERSISTENCE * drops.mean())


def dominance(
    upper: npt.NDArray[np.float64],
    lower: npt.NDArray[np.float64],
    xi: npt.NDArray[np.float64],
    win: FrequencyWindow,
    *,
    strict: bool = False,
) -> DominationVerdict:
    """Decide ``upper ≻ lower`` for two curves sampled at ``xi``.

    The certificate takes the largest ``B`` compatible with the ratio
    ``upper / lower`` on the outer ladder rungs and then the largest
    ``A`` with ``upper >= A + B · lower`` at every sample. Domination
    fails when the rung minima of the ratio keep falling at a
    non-vanishing logarithmic rate.

    Parameters
    ----------
    upper, lower
        Nonnegative curves on the points ``xi``.
    xi
        Nonnegative sample points.
    win
        Window supplying the scale ladder.
    strict
        Also require the ratio ``(upper - A) / lower`` to increase
        across the ladder rungs.

    Returns
    -------
    DominationVerdict
        The strongest relation found.
    """
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.where(lower > GRID_TOLERANCE, upper / lower, np.nan)

    minima = _rung_statistic(xi, ratio, win, np.min)
    if len(minima) < 3:  # noqa: PLR2004
        return DominationVerdict(relation=Relation.INCONCLUSIVE, A=0, B=0)

    outer = np.isfinite(ratio) & (np.abs(xi) > win.ladder[0])
    edge = int(np.flatnonzero(outer)[np.argmin(ratio[outer])])
    if _decays(minima):
        return DominationVerdict(
            relation=Relation.FAILS,
            A=float("-inf"),
            B=0.0,
            trend=tuple(minima),
            witnesses=(float(xi[edge]),),
        )

    B = float(np.min(ratio[outer]))
    if B <= 0:
        return DominationVerdict(
            relation=Relation.FAILS,
            A=float("-inf"),
            B=0.0,
            trend=tuple(minima),
            witnesses=(float(xi[edge]),),
        )

    slack = upper - B * lower
    tight = int(np.argmin(slack))
    A = float(slack[tight])
    relation = Relation.DOMINATES
    trend = tuple(minima)
    if strict:
        with np.errstate(divide="ignore", invalid="ignore"):
            excess = np.where(
                lower > GRID_TOLERANCE, (upper - A) / lower, np.nan
            )
        means = _rung_statistic(xi, excess, win, np.mean)
        trend = tuple(means)
        increasing = np.all(np.diff(means) > GRID_TOLERANCE)
        if len(means) >= 3 and increasing:  # noqa: PLR2004
            relation = Relation.STRICTLY_DOMINATES

    return DominationVerdict(
        relation=relation,
        A=A,
        B=B,
        trend=trend,
        witnesses=(float(xi[tight]),),
    )


def compare(
    w2: Weight,
    w1: Weight,
    mode: typing.Literal["dominates", "strict", "equivalent"],
    win: FrequencyWindow,
) -> DominationVerdict:
    """Decide whether ``w2`` dominates ``w1`` on the window.

    Parameters
    ----------
    w2
        Candidate upper weight.
    w1
        Candidate lower weight.
    mode
        ``"dominates"`` for ``w2 ≻ w1``, ``"strict"`` for ``w2 ≻≻ w1``,
        ``"equivalent"`` for domination in both directions.
    win
        Frequency window.

    Returns
    -------
    DominationVerdict
        The verdict with certificate ``(A, B)`` when the relation holds.
        In ``"strict"`` mode a plain domination is reported as
        ``DOMINATES``, which callers must not read as strict.
    """
    xi = win.nonnegative()
    upper, lower = w2(xi), w1(xi)
    verdict = dominance(upper, lower, xi, win, strict=mode == "strict")
    if mode == "equivalent" and verdict.holds:
        backward = dominance(lower, upper, xi, win)
        if backward.relation is Relation.INCONCLUSIVE:
            return dataclasses.replace(
                verdict, relation=Relation.INCONCLUSIVE
            )
        if not backward.holds:
            return dataclasses.replace(
                verdict,
                relation=Relation.FAILS,
                witnesses=backward.witnesses,
            )
        return dataclasses.replace(verdict, relation=Relation.EQUIVALENT)

    _logger.debug(
        "compare(%s, %s, %s) -> %s (A=%.4g, B=%.4g)",
        w2.name,
        w1.name,
        mode,
        verdict.relation,
        verdict.A,
        verdict.B,
    )
    return verdict


def _to_verdict(
    name: str, domination: DominationVerdict, notes: tuple[str, ...] = ()
) -> VerdictReport:
    if domination.relation is Relation.INCONCLUSIVE:
        verdict = Verdict.INCONCLUSIVE
    elif domination.holds:
        verdict = Verdict.VERIFIED
    else:
        verdict = Verdict.REFUTED
    return VerdictReport(
        name=name,
        verdict=verdict,
        certificate={"A": domination.A, "B": domination.B},
        witnesses=domination.witnesses,
        notes=notes,
    )


def is_slowly_varying(
    w: Weight,
    delta: Profile,
    win: FrequencyWindow,
) -> VerdictReport:
    """Check that ``inf_{B(ξ,δ(ξ))} w ≻ sup_{B(ξ,δ(ξ))} w``.

    Parameters
    ----------
    w
        Weight evaluable on ``[0, 2Ξ]``.
    delta
        Ball radius function with ``δ(ξ) = o(ξ)``.
    win
        Frequency window.

    Returns
    -------
    VerdictReport
        Certificate ``(A, B)`` or a witness.

    Raises
    ------
    PreconditionError
        If ``δ(ξ) / ξ`` is not decreasing on the window.
    """
    xi = win.nonnegative()
    radii = np.asarray(delta(xi), dtype=np.float64)
    _require_sublinear(xi[1:], radii[1:], "delta")

    extended = win.step * np.arange(2 * win.count + 1, dtype=float)
    values = w(extended)
    lo = np.where(xi - radii > 0, np.floor((xi - radii) / win.step), 0)
    hi = np.minimum(np.ceil((xi + radii) / win.step), extended.size - 1)
    lo_index, hi_index = lo.astype(np.intp), hi.astype(np.intp)
    sup = range_max(values, lo_index, hi_index)
    inf = -range_max(-values, lo_index, hi_index)

    return _to_verdict("slowly_varying", dominance(inf, sup, xi, win))


def _require_sublinear(
    xi: npt.NDArray[np.float64],
    radii: npt.NDArray[np.float64],
    label: str,
) -> None:
    ratio = radii / xi
    rising = np.flatnonzero(np.diff(ratio) > GRID_TOLERANCE * ratio[:-1])
    if rising.size or ratio[-1] >= ratio[0]:
        witness = float(xi[rising[0] + 1]) if rising.size else float(xi[-1])
        error_message = f"{label}(ξ)/ξ must decrease on the window"
        raise PreconditionError(error_message, witness=witness)


def in_M_tilde(
    w: Weight,
    xi_seq: npt.ArrayLike,
    rho_seq: npt.ArrayLike,
    *,
    resolution: int = 2049,
) -> VerdictReport:
    """Check ``min_{|η| <= ρ_j} w(ξ_j + η) >= c · w(ξ_j)`` for all ``j``.

    Parameters
    ----------
    w
        The weight.
    xi_seq
        Increasing centers ``ξ_j``.
    rho_seq
        Radii ``ρ_j`` with ``ρ_j / ξ_j`` decreasing.
    resolution
        Number of samples per ball.

    Returns
    -------
    VerdictReport
        Verified with the fitted constant ``c`` in the certificate,
        refuted with the failing index ``j`` as witness.

    Raises
    ------
    PreconditionError
        If the centers do not increase or ``ρ_j / ξ_j`` does not
        decrease.
    """
    xi = np.asarray(xi_seq, dtype=np.float64)
    rho = np.asarray(rho_seq, dtype=np.float64)
    if xi.shape != rho.shape or np.any(np.diff(xi) <= 0):
        error_message = "Centers must strictly increase and match the radii"
        raise PreconditionError(error_message)
    if np.any(np.diff(rho / xi) >= 0):
        index = int(np.flatnonzero(np.diff(rho / xi) >= 0)[0]) + 1
        error_message = "ρ_j/ξ_j must strictly decrease"
        raise PreconditionError(error_message, witness=index)

    offsets = np.linspace(-1.0, 1.0, resolution)
    ratios = np.empty(xi.size)
    for j, (center, radius) in enumerate(zip(xi, rho, strict=True)):
        ball_min = float(np.min(w(center + radius * offsets)))
        ratios[j] = ball_min / max(float(w(center)), GRID_TOLERANCE)

    c = float(ratios.min())
    failing = np.flatnonzero(ratios <= GRID_TOLERANCE)
    if failing.size:
        return VerdictReport(
            name="M_tilde",
            verdict=Verdict.REFUTED,
            certificate={"c": c},
            witnesses=tuple(float(j) for j in failing),
        )
    if _decays(list(ratios)):
        return VerdictReport(
            name="M_tilde",
            verdict=Verdict.REFUTED,
            certificate={"c": c},
            witnesses=(float(xi.size - 1),),
            notes=("ball minimum ratio decays along the sequence",),
        )
    return VerdictReport(
        name="M_tilde", verdict=Verdict.VERIFIED, certificate={"c": c}
    )


# ----------------------------------------------------------------------
# --- Concave majorants ------------------------------------------------
# ----------------------------------------------------------------------


def _upper_hull(
    x: npt.NDArray[np.float64], y: npt.NDArray[np.float64]
) -> list[int]:
    hull: list[int] = []
    for i in range(x.size):
        while len(hull) >= 2:  # noqa: PLR2004
            o, a = hull[-2], hull[-1]
            cross = (x[a] - x[o]) * (y[i] - y[o]) - (y[a] - y[o]) * (
                x[i] - x[o]
            )
            if cross < 0:
                break
            hull.pop()
        hull.append(i)
    return hull


def _envelope(
    x: npt.NDArray[np.float64], y: npt.NDArray[np.float64]
) -> Profile:
    """Least concave nondecreasing majorant of samples, linearly extended."""
    y = np.maximum.accumulate(y)
    vertices = _upper_hull(x, y)
    xv, yv = x[vertices], y[vertices]
    slope = (yv[-1] - yv[-2]) / (xv[-1] - xv[-2]) if xv.size > 1 else 0.0

    def profile(r: npt.NDArray[np.float64]) -> npt.NDArray[np.float64]:
        inside = np.interp(r, xv, yv)
        return np.where(r > xv[-1], yv[-1] + slope * (r - xv[-1]), inside)

    return profile


def concave_majorant(
    w: Weight,
    win: FrequencyWindow,
    *,
    strict: bool = False,
) -> Weight:
    """Least concave nondecreasing majorant of a weight on the window.

    Parameters
    ----------
    w
        The weight.
    win
        Frequency window; the envelope is built from the samples on
        ``[0, Ξ]`` and continued linearly beyond.
    strict
        Multiply by ``(1 + log(1 + ξ))^{1/2}`` and take the envelope
        again, so that the result strictly dominates ``w``.

    Returns
    -------
    Weight
        A concave, nondecreasing weight with ``w̃(0) = w(0)``.
    """
    x = win.nonnegative()
    profile = _envelope(x, w(x))
    name = f"envelope({w.name})"
    if strict:
        boosted = profile(x) * np.sqrt(1 + np.log1p(x))
        profile = _envelope(x, boosted)
        name = f"strict-envelope({w.name})"

    return Weight(name=name, profile=profile, dimension=w.dimension)


# ----------------------------------------------------------------------
# --- Catalog ----------------------------------------------------------
# ----------------------------------------------------------------------


def _build_default_catalog() -> Catalog[Weight]:
    catalog: Catalog[Weight] = Catalog("weight")
    catalog.register("log", log_weight, usage="log")
    catalog.register(
        "gevrey", lambda a: gevrey_weight(float(a)), usage="gevrey:<alpha>"
    )
    catalog.register(
        "affine-log",
        lambda b: affine_log_weight(float(b)),
        usage="affine-log:<b>",
    )
    catalog.register(
        "power-log",
        lambda p: power_log_weight(float(p)),
        usage="power-log:<p>",
    )
    catalog.register("sampled", load_sampled_weight, usage="sampled:<path>")
    return catalog


default_weight_catalog = _build_default_catalog()
