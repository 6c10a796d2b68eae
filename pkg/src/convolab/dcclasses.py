"""Denjoy-Carleman sequences, the associated function and condition (*).

A sequence ``L`` with ``L_0 = 1`` and ``C^{-1} L_{k+1} >= L_k >= k``
defines the class ``C^L`` of smooth functions with
``sup |D^α f| <= C (L_α / r)^α``. Its associated function
``q_L(t) = log sup_k (t / L_k)^k`` controls how fast ``C^L`` cutoffs
may decay on the Fourier side.
"""

import dataclasses
import logging
import math
import pathlib
import typing

import numpy as np
import numpy.typing as npt

from convolab.catalog import Catalog
from convolab.constants import ALPHA_MAX_CLOSED_FORM, GRID_TOLERANCE
from convolab.exceptions import (
    InvariantViolationError,
    PreconditionError,
    RepresentationError,
    UnsupportedModelError,
)
from convolab.utilities import read_two_columns
from convolab.verdicts import Trend, TrendVerdict, Verdict, VerdictReport
from convolab.weights import Weight

if typing.TYPE_CHECKING:
    from collections.abc import Callable

    from convolab.grids import FrequencyWindow
    from convolab.smooth import SmoothFunction

_logger = logging.getLogger(__name__)

_BLOCK: typing.Final[int] = 64
_A_LADDER: typing.Final[npt.NDArray[np.float64]] = 2.0 ** (
    np.arange(-32, 161) / 8
)
_DIVERGENT_RATIO: typing.Final[float] = 0.9
_CONVERGENT_RATIO: typing.Final[float] = 0.85
_T_CAP: typing.Final[float] = 1e6


@dataclasses.dataclass(frozen=True, eq=False, kw_only=True, slots=True)
class DCSequence:
    """Denjoy-Carleman sequence ``k ↦ L_k``.

    Parameters
    ----------
    name
        Catalog-style name.
    log_L
        Vectorised map from integer indices to ``log L_k``.
    C
        Regularity constant with ``C^{-1} L_{k+1} >= L_k``.
    length
        Number of available terms (``inf`` for closed forms).
    """

    name: str
    log_L: Callable[[npt.NDArray[np.int64]], npt.NDArray[np.float64]]
    C: float = 1.0
    length: float = float("inf")

    def log_values(self, k_max: int) -> npt.NDArray[np.float64]:
        """``log L_k`` for ``k = 0, ..., k_max``.

        Raises
        ------
        RepresentationError
            If the sequence has fewer than ``k_max + 1`` terms.
        """
        if k_max + 1 > self.length:
            error_message = (
                f"Sequence {self.name!r} has {self.length:g} terms, "
                f"{k_max + 1} requested"
            )
            raise RepresentationError(error_message)
        return np.asarray(
            self.log_L(np.arange(k_max + 1, dtype=np.int64)), dtype=np.float64
        )

    def k_stop(self, t: float) -> int:
        """Least ``k`` with ``L_k >= t`` (capped by the length)."""
        if t <= 1:
            return 0
        target = math.log(t)
        upper = 1
        while (
            upper < self.length
            and self.log_L(np.array([upper]))[0] < target
        ):
            upper *= 2
        upper = int(min(upper, self.length - 1))
        logs = self.log_values(upper)
        return int(min(np.searchsorted(logs, target, side="left"), upper))

    def validate(self, k_max: int = 200) -> VerdictReport:
        """Check ``L_0 = 1`` and ``C^{-1} L_{k+1} >= L_k >= k``.

        Raises
        ------
        InvariantViolationError
            If any condition fails for some ``k <= k_max``.
        """
        k_max = int(min(k_max, self.length - 2))
        logs = self.log_values(k_max + 1)
        if abs(logs[0]) > GRID_TOLERANCE:
            error_message = f"L_0 must equal 1 in {self.name!r}"
            raise InvariantViolationError(error_message, witness=0)

        k = np.arange(1, k_max + 1)
        below = np.flatnonzero(logs[1:-1] < np.log(k) - GRID_TOLERANCE)
        if below.size:
            error_message = f"L_k >= k fails in {self.name!r}"
            raise InvariantViolationError(
                error_message, witness=int(k[below[0]])
            )

        gaps = np.diff(logs) - math.log(self.C)
        regular = np.flatnonzero(gaps < -GRID_TOLERANCE)
        if regular.size:
            error_message = f"C^-1 L_(k+1) >= L_k fails in {self.name!r}"
            raise InvariantViolationError(
                error_message, witness=int(regular[0])
            )

        return VerdictReport(
            name="dc_sequence",
            verdict=Verdict.VERIFIED,
            certificate={"C": self.C, "k_max": float(k_max)},
        )


def analytic_sequence() -> DCSequence:
    """``L_0 = 1`` and ``L_k = k``: the real analytic class."""
    return DCSequence(
        name="analytic",
        log_L=lambda k: np.log(np.maximum(k, 1)),
        C=1.0,
    )


def gevrey_order_sequence(sigma: float) -> DCSequence:
    """``L_0 = 1`` and ``L_k = k^σ`` with ``σ > 1``."""
    if sigma <= 1:
        error_message = f"Gevrey order must exceed 1, got {sigma}"
        raise ValueError(error_message)
    return DCSequence(
        name=f"gevrey-order:{sigma:g}",
        log_L=lambda k: sigma * np.log(np.maximum(k, 1)),
        C=1.0,
    )


def table_sequence(
    values: npt.ArrayLike, *, name: str = "table"
) -> DCSequence:
    """Sequence given by a finite table ``L_0, L_1, ...``."""
    table = np.asarray(values, dtype=np.float64)
    if table.ndim != 1 or table.size < 2 or np.any(table <= 0):  # noqa: PLR2004
        error_message = "Sequence tables need at least two positive terms"
        raise RepresentationError(error_message)
    logs = np.log(table)
    ratio = float(np.min(table[1:] / table[:-1]))
    return DCSequence(
        name=name,
        log_L=lambda k: logs[k],
        C=min(ratio, 1.0),
        length=float(table.size),
    )


def load_table_sequence(path: str | pathlib.Path) -> DCSequence:
    """Read a sequence from a CSV with columns ``k, L_k``."""
    table = read_two_columns(pathlib.Path(path))
    order = np.argsort(table[:, 0])
    k = table[order, 0]
    if not np.array_equal(k, np.arange(k.size)):
        error_message = f"Table {path} must list k = 0, 1, 2, ... once each"
        raise RepresentationError(error_message)
    return table_sequence(table[order, 1], name=f"table:{path}")


# ----------------------------------------------------------------------
# --- Associated function ----------------------------------------------
# ----------------------------------------------------------------------


def q_L_values(
    L: DCSequence, t: npt.ArrayLike
) -> npt.NDArray[np.float64]:
    """Vectorised :func:`q_L` accepting ``t >= 0``.

    ``q_L(0)`` is ``0`` through the ``k = 0`` term.
    """
    points = np.atleast_1d(np.asarray(t, dtype=np.float64))
    out = np.zeros_like(points)
    positive = points > 0
    if not positive.any():
        return out.reshape(np.shape(t))

    k_max = L.k_stop(float(points.max()))
    if k_max == 0:
        return out.reshape(np.shape(t))

    logs = L.log_values(k_max)
    log_t = np.log(points[positive])
    k = np.arange(k_max + 1, dtype=np.float64)
    # term_{k+1} >= term_k  iff  log t >= (k+1) log L_{k+1} - k log L_k
    thresholds = k[1:] * logs[1:] - k[:-1] * logs[:-1]
    if np.all(np.diff(thresholds) >= 0):
        best = np.searchsorted(thresholds, log_t, side="right")
        result = best * (log_t - logs[best])
    else:
        result = np.empty_like(log_t)
        for start in range(0, log_t.size, _BLOCK):
            block = log_t[start : start + _BLOCK, None]
            terms = k[1:] * (block - logs[1:])
            result[start : start + _BLOCK] = terms.max(axis=1)
    out[positive] = np.maximum(result, 0.0)
    return out.reshape(np.shape(t))


def q_L(L: DCSequence, t: float) -> float:
    """Associated function ``q_L(t) = log sup_{k>=0} (t / L_k)^k``.

    The maximum is taken over ``k = 0, ..., k_stop`` where ``k_stop``
    is the first index with ``L_k >= t``; later terms do not exceed
    one.

    Parameters
    ----------
    L
        The sequence.
    t
        Positive argument.

    Returns
    -------
    float
        ``q_L(t) >= 0``.

    Raises
    ------
    PreconditionError
        If ``t <= 0``.

    Examples
    --------
    >>> round(q_L(analytic_sequence(), math.e), 12)
    1.0
    """
    if t <= 0:
        error_message = f"q_L is defined for t > 0, got {t}"
        raise PreconditionError(error_message)
    return float(q_L_values(L, np.array([t]))[0])


def associated_weight(L: DCSequence) -> Weight:
    """The profile ``t ↦ q_L(t)`` as a weight-like object."""
    return Weight(
        name=f"q[{L.name}]",
        profile=lambda r: q_L_values(L, r),
        provably_subadditive=False,
    )


# ----------------------------------------------------------------------
# --- Seminorm and quasi-analyticity -----------------------------------
# ----------------------------------------------------------------------


@dataclasses.dataclass(frozen=True, kw_only=True, slots=True)
class DCSeminorm:
    """Result of :func:`dc_seminorm`.

    Parameters
    ----------
    value
        The seminorm (``inf`` on overflow).
    log_terms
        ``log((r/L_α)^α · max_K |D^α f|)`` per order.
    growing
        Whether the per-order maxima still grow at the last order.
    truncated
        Whether derivative access ended before ``alpha_max``.
    """

    value: float
    log_terms: tuple[float, ...]
    growing: bool
    truncated: bool

    @property
    def alpha_max(self) -> int:
        """Highest order evaluated."""
        return len(self.log_terms) - 1


def dc_seminorm(
    f: SmoothFunction,
    L: DCSequence,
    r: float,
    K: tuple[float, float],
    *,
    alpha_max: int = ALPHA_MAX_CLOSED_FORM,
    samples: int = 513,
) -> DCSeminorm:
    """``sup_{α, x ∈ K} (r / L_α)^α |D^α f(x)|``, accumulated in logs.

    Parameters
    ----------
    f
        Smooth function with derivative access.
    L
        Denjoy-Carleman sequence.
    r
        Positive radius.
    K
        Compact interval ``(a, b)``.
    alpha_max
        Highest derivative order; capped by ``f.max_order``.
    samples
        Number of sample points in ``K``.

    Returns
    -------
    DCSeminorm
        The seminorm with truncation and growth flags.
    """
    x = np.linspace(K[0], K[1], samples)
    top = min(alpha_max, f.max_order)
    truncated = top < alpha_max
    log_L = L.log_values(top)
    terms: list[float] = []
    for alpha in range(top + 1):
        try:
            peak = float(np.max(np.abs(f.derivative(alpha, x))))
        except UnsupportedModelError:
            truncated = True
            break
        if not np.isfinite(peak):
            truncated = True
            break
        log_peak = math.log(peak) if peak > 0 else -math.inf
        terms.append(alpha * (math.log(r) - float(log_L[alpha])) + log_peak)

    if truncated:
        _logger.warning(
            "Derivative access of %s ended at order %d", f.name, len(terms) - 1
        )

    if not terms:
        error_message = f"No derivative order of {f.name} could be evaluated"
        raise UnsupportedModelError(error_message)
    best = max(terms)
    finite = [v for v in terms if np.isfinite(v)]
    growing = len(finite) > 1 and terms[-1] >= best - GRID_TOLERANCE and (
        terms[-1] > terms[0]
    )
    value = math.exp(best) if best < 700 else math.inf  # noqa: PLR2004
    return DCSeminorm(
        value=value,
        log_terms=tuple(terms),
        growing=growing,
        truncated=truncated,
    )


def quasianalytic_test(
    L: DCSequence,
    t_max: float,
    *,
    rungs: int = 8,
    resolution: int = 20_000,
) -> TrendVerdict:
    """Trend reading of ``∫_1^T q_L(t) t^{-2} dt`` along a dyadic ladder.

    Parameters
    ----------
    L
        Denjoy-Carleman sequence.
    t_max
        Largest integration limit, at least ``1e3``.
    rungs
        Number of ladder limits ``t_max / 2^k``.
    resolution
        Number of log-spaced quadrature nodes.

    Returns
    -------
    TrendVerdict
        ``DIVERGENT`` when increments per scale stay level (the class
        is quasi-analytic), ``CONVERGENT`` when they decay
        geometrically.

    Raises
    ------
    PreconditionError
        If ``t_max < 1e3``.
    """
    if t_max < 1e3:  # noqa: PLR2004
        error_message = f"quasianalytic_test needs t_max >= 1e3, got {t_max}"
        raise PreconditionError(error_message)

    s = np.linspace(0.0, math.log(t_max), resolution)
    integrand = q_L_values(L, np.exp(s)) * np.exp(-s)
    cumulative = np.concatenate((
        [0.0],
        np.cumsum(np.diff(s) * (integrand[1:] + integrand[:-1]) / 2),
    ))
    ladder = t_max / 2.0 ** np.arange(rungs - 1, -1, -1)
    partials = np.interp(np.log(ladder), s, cumulative)
    increments = np.diff(partials)
    ratios = increments[1:] / np.maximum(increments[:-1], 1e-300)
    median = float(np.median(ratios))
    if median >= _DIVERGENT_RATIO:
        trend = Trend.DIVERGENT
    elif median <= _CONVERGENT_RATIO:
        trend = Trend.CONVERGENT
    else:
        trend = Trend.INCONCLUSIVE

    _logger.debug("Quasi-analyticity of %s: %s", L.name, trend)
    return TrendVerdict(
        trend=trend,
        ladder=tuple(float(v) for v in ladder),
        partials=tuple(float(v) for v in partials),
        increments=tuple(float(v) for v in increments),
    )


# ----------------------------------------------------------------------
# --- Condition (*) ----------------------------------------------------
# ----------------------------------------------------------------------


def star_condition(
    L: DCSequence,
    w: Weight,
    w_prime: Weight,
    b: float,
    win: FrequencyWindow,
) -> VerdictReport:
    """Search the least ``a`` with ``q_L(a · w'(ξ)) >= b · w(ξ)``.

    The inequality is required for all grid ``ξ`` beyond a threshold
    ``R`` taken from ``{1} ∪`` the window ladder without its last two
    rungs. ``a`` runs over the geometric ladder ``2^{k/8}``.

    Parameters
    ----------
    L
        Denjoy-Carleman sequence.
    w, w_prime
        Weights.
    b
        Positive constant.
    win
        Frequency window.

    Returns
    -------
    VerdictReport
        Certificate ``{a, R}`` revalidated on the refined grid, or a
        refutation with the margins of the largest ``a`` per rung.

    Raises
    ------
    PreconditionError
        If ``b <= 0``.
    """
    if b <= 0:
        error_message = f"star_condition needs b > 0, got {b}"
        raise PreconditionError(error_message)

    q = associated_weight(L)
    thresholds = (1.0, *win.ladder[:-2])
    xi = win.nonnegative()
    target = b * w(xi)
    inner = w_prime(xi)
    ladder = _A_LADDER[_A_LADDER * max(float(inner.max()), 1.0) <= _T_CAP]
    for a in ladder:
        margin = q(a * inner) - target
        for R in thresholds:
            if np.all(margin[xi > R] >= -GRID_TOLERANCE):
                refined = win.refined().nonnegative()
                refined = refined[refined > R]
                check = q(a * w_prime(refined)) - b * w(refined)
                if np.all(check >= -GRID_TOLERANCE):
                    _logger.debug(
                        "Condition (*) for %s: a=%.4g, R=%.4g", L.name, a, R
                    )
                    return VerdictReport(
                        name="star_condition",
                        verdict=Verdict.VERIFIED,
                        certificate={"a": float(a), "R": float(R)},
                        notes=("revalidated on the refined grid",),
                    )

    margin = q(ladder[-1] * inner) - target
    per_rung = [
        float(margin[mask].min()) for mask in win.rung_masks(xi) if mask.any()
    ]
    worst = xi[np.argmin(margin)]
    return VerdictReport(
        name="star_condition",
        verdict=Verdict.REFUTED,
        certificate={"a_max": float(ladder[-1])},
        witnesses=(float(worst),),
        notes=tuple(f"rung margin {v:.6g}" for v in per_rung),
    )


# ----------------------------------------------------------------------
# --- Catalog ----------------------------------------------------------
# ----------------------------------------------------------------------


def _build_default_catalog() -> Catalog[DCSequence]:
    catalog: Catalog[DCSequence] = Catalog("sequence")
    catalog.register("analytic", analytic_sequence, usage="analytic")
    catalog.register(
        "gevrey-order",
        lambda sigma: gevrey_order_sequence(float(sigma)),
        usage="gevrey-order:<sigma>",
    )
    catalog.register("table", load_table_sequence, usage="table:<path>")
    return catalog


default_sequence_catalog = _build_default_catalog()
