"""Pseudo-measures that are not invertible although ``fu`` is.

An :class:`IntervalFamily` removes well separated intervals ``I_j`` from
the line; ``E`` is what remains and ``r(ξ)`` the distance to it. The
pseudo-measure ``û = ĝ ∗ χ_E`` decays like ``ĝ`` deep inside the
intervals, while multiplying by a suitable ``f`` lifts that decay to a
slow one. Every convolution with ``χ_E`` goes through tail integrals
``T(x) = ∫_x^∞``, so deep-interval values keep their relative accuracy.
"""

import dataclasses
import logging
import math
import typing

import numpy as np
import numpy.typing as npt
import scipy.integrate
import scipy.optimize
import scipy.signal
import scipy.special

from convolab.constants import (
    DEFAULT_A_LADDER,
    DEFAULT_XI_RATIO,
    DEFAULT_XI_START,
    GRID_TOLERANCE,
    MIN_INTERVAL_GAP,
    NEGATIVITY_FLOOR,
    SOLVE_RELATIVE_TOLERANCE,
    TREND_FACTOR,
)
from convolab.exceptions import (
    EquationSolveError,
    InvariantViolationError,
    PreconditionError,
)
from convolab.grids import FrequencyWindow
from convolab.mollifiers import gevrey_bump, make_autocorr_bump
from convolab.spectra import (
    GridSpectrum,
    scan_start,
    slow_decrease_check,
    w_norm,
)
from convolab.verdicts import (
    BoundReport,
    Verdict,
    VerdictReport,
    bound_report,
    combine,
    jsonable,
)
from convolab.weights import (
    Weight,
    concave_majorant,
    gevrey_weight,
    in_M_tilde,
)

if typing.TYPE_CHECKING:
    from collections.abc import Callable, Sequence

    from convolab.mollifiers import BumpModel
    from convolab.spectra import PhysicalModel, SlowDecreaseReport

_logger = logging.getLogger(__name__)

type Profile = Callable[[npt.NDArray[np.float64]], npt.NDArray[np.float64]]

_TABLE_POINTS: typing.Final[int] = 2**16
_NOISE_FLOOR: typing.Final[float] = 1e-28
_KERNEL_CUTOFF: typing.Final[float] = 1e-30
_ENVELOPE_FLOOR: typing.Final[float] = 64 * float(np.finfo(np.float64).eps)
_LOG_TINY: typing.Final[float] = float(np.finfo(np.float64).tiny)
_BOUND_TOLERANCE: typing.Final[float] = 1e-9
_BALL_SAMPLES: typing.Final[int] = 2049
_BUMP_RADIUS: typing.Final[float] = 4.0
_GENERAL_BUMP_BETA: typing.Final[float] = 0.9
_REFUTATION_LADDER: typing.Final[tuple[float, ...]] = (0.125, 0.25, 0.5)
_DEFAULT_RADIUS: typing.Final[float] = 2.0**15
_DEFAULT_STEP: typing.Final[float] = 2.0**-4


def default_window() -> FrequencyWindow:
    """Window used by the counterexamples unless one is supplied."""
    return FrequencyWindow(radius=_DEFAULT_RADIUS, step=_DEFAULT_STEP)


# ----------------------------------------------------------------------
# --- Interval families ------------------------------------------------
# ----------------------------------------------------------------------


@dataclasses.dataclass(frozen=True, slots=True)
class IntervalFamily:
    """Open intervals ``I_j = (ξ_j - d_j, ξ_j + d_j)`` removed from ``E``.

    Parameters
    ----------
    centers
        Increasing positive centers ``ξ_j``.
    half_widths
        Positive half-widths ``d_j``.

    Raises
    ------
    InvariantViolationError
        If the centers do not increase, two intervals are closer than
        two, or ``d_j / ξ_j`` does not strictly decrease. The witness is
        the offending index.
    """

    centers: tuple[float, ...] = ()
    half_widths: tuple[float, ...] = ()

    def __post_init__(self) -> None:
        centers = tuple(float(c) for c in self.centers)
        widths = tuple(float(d) for d in self.half_widths)
        object.__setattr__(self, "centers", centers)
        object.__setattr__(self, "half_widths", widths)
        if len(centers) != len(widths):
            error_message = (
                f"{len(centers)} centers but {len(widths)} half-widths"
            )
            raise InvariantViolationError(error_message, witness=None)

        for j, (c, d) in enumerate(zip(centers, widths, strict=True)):
            if c <= 0 or d <= 0:
                error_message = f"Interval {j} needs a positive center/width"
                raise InvariantViolationError(error_message, witness=j)

        for j in range(1, len(centers)):
            gap = (centers[j] - widths[j]) - (centers[j - 1] + widths[j - 1])
            if gap < MIN_INTERVAL_GAP:
                error_message = (
                    f"Intervals {j - 1} and {j} are {gap:.4g} apart, "
                    f"at least {MIN_INTERVAL_GAP:g} is required"
                )
                raise InvariantViolationError(error_message, witness=j)
            if widths[j] / centers[j] >= widths[j - 1] / centers[j - 1]:
                error_message = f"d_j/ξ_j does not decrease at index {j}"
                raise InvariantViolationError(error_message, witness=j)

    @property
    def count(self) -> int:
        """Number of intervals."""
        return len(self.centers)

    def edges(self) -> npt.NDArray[np.float64]:
        """Array of ``(a_j, b_j)`` rows."""
        c = np.asarray(self.centers, dtype=np.float64)
        d = np.asarray(self.half_widths, dtype=np.float64)
        return np.column_stack((c - d, c + d)).reshape(-1, 2)

    def fits(self, window: FrequencyWindow) -> None:
        """Raise :class:`PreconditionError` if an interval leaves the window."""
        for j, (_, b) in enumerate(self.edges()):
            if b > window.radius:
                error_message = (
                    f"Interval {j} ends at {b:.6g}, beyond the window "
                    f"radius {window.radius:g}"
                )
                raise PreconditionError(error_message, witness=j)

    def require_length(self, minimum: float) -> None:
        """Raise :class:`PreconditionError` if some ``2 d_j < minimum``."""
        for j, d in enumerate(self.half_widths):
            if 2 * d < minimum:
                error_message = (
                    f"Interval {j} has length {2 * d:.4g}, "
                    f"at least {minimum:g} is required"
                )
                raise PreconditionError(error_message, witness=j)


def distance_to_E(
    fam: IntervalFamily, xi: npt.ArrayLike
) -> npt.NDArray[np.float64]:
    """Distance ``r(ξ)`` from ``ξ`` to the complement of the intervals.

    Zero on the closure of ``E`` and ``d_j - |ξ - ξ_j|`` inside ``I_j``.
    """
    points = np.asarray(xi, dtype=np.float64)
    r = np.zeros_like(points)
    for c, d in zip(fam.centers, fam.half_widths, strict=True):
        r = np.maximum(r, d - np.abs(points - c))
    return r


def geometric_centers(
    window: FrequencyWindow,
    half_width: Callable[[float], float],
    *,
    start: float = DEFAULT_XI_START,
    ratio: float = DEFAULT_XI_RATIO,
) -> tuple[float, ...]:
    """Centers ``start · ratio^j`` whose intervals stay inside the window."""
    centers: list[float] = []
    xi = start
    while xi + half_width(xi) <= window.radius:
        centers.append(xi)
        xi *= ratio
    return tuple(centers)


# ----------------------------------------------------------------------
# --- Tail integrals ---------------------------------------------------
# ----------------------------------------------------------------------


class _TailTable:
    """Tail integrals ``T(x) = ∫_x^∞ ν`` of an even density ``ν >= 0``.

    ``ν`` is tabulated on ``k·h, k = 0..N``; ``beyond`` is the mass
    past the last node and ``total`` the full mass on the line.
    """

    def __init__(
        self,
        step: float,
        density: npt.NDArray[np.float64],
        *,
        beyond: float = 0.0,
        total: float | None = None,
    ) -> None:
        self.step = step
        self.density = density
        self.nodes = step * np.arange(density.size)
        reverse = scipy.integrate.cumulative_trapezoid(
            density[::-1], dx=step, initial=0.0
        )
        self.values = reverse[::-1] + beyond
        self.total = 2 * float(self.values[0]) if total is None else total
        with np.errstate(divide="ignore"):
            self._log_values = np.log(np.maximum(self.values, _LOG_TINY))

    def __call__(self, x: npt.ArrayLike) -> npt.NDArray[np.float64]:
        points = np.asarray(x, dtype=np.float64)
        magnitude = np.abs(points)
        log_tail = np.interp(
            magnitude,
            self.nodes,
            self._log_values,
            right=math.log(_LOG_TINY),
        )
        tail = np.where(log_tail <= math.log(_LOG_TINY), 0.0, np.exp(log_tail))
        return np.where(points >= 0, tail, self.total - tail)

    def mass(
        self, u: npt.NDArray[np.float64], v: npt.NDArray[np.float64]
    ) -> npt.NDArray[np.float64]:
        """Return ``ν((u, v))`` for intervals not containing the origin."""
        right = self(np.maximum(u, 0.0)) - self(np.maximum(v, 0.0))
        left = self(np.maximum(-v, 0.0)) - self(np.maximum(-u, 0.0))
        return np.where(u >= 0, right, left)

    def complement_convolution(
        self, fam: IntervalFamily, xi: npt.NDArray[np.float64]
    ) -> npt.NDArray[np.float64]:
        """Return ``(ν ∗ χ_E)(ξ) = ∫ χ_E(ξ - t) ν(t) dt``.

        Inside ``I_j`` the value is the mass outside the shifted
        interval, summed from tails, minus the other shifted intervals.
        """
        own = np.zeros_like(xi)
        others = np.zeros_like(xi)
        inside_any = np.zeros(xi.shape, dtype=bool)
        for a, b in fam.edges():
            u = xi - b
            v = xi - a
            inside = (u < 0) & (v > 0)
            outside_mass = self(np.maximum(v, 0.0)) + self(np.maximum(-u, 0.0))
            own = np.where(inside, outside_mass, own)
            others += np.where(
                inside, 0.0, self.mass(np.where(inside, 0.0, u), v)
            )
            inside_any |= inside
        result = np.where(inside_any, own, self.total) - others
        return np.clip(result, 0.0, self.total)


def _density_table(nu: PhysicalModel) -> _TailTable:
    end = nu.support[1]
    step = end / _TABLE_POINTS
    nodes = step * np.arange(_TABLE_POINTS + 1)
    return _TailTable(step, nu(nodes), beyond=nu.tail_mass / 2)


def _log_margin(
    larger: npt.NDArray[np.float64], smaller: npt.NDArray[np.float64]
) -> npt.NDArray[np.float64]:
    """Return ``log larger - log smaller``, both floored at ``tiny``."""
    return np.log(np.maximum(larger, _LOG_TINY)) - np.log(
        np.maximum(smaller, _LOG_TINY)
    )


# ----------------------------------------------------------------------
# --- Sandwich ---------------------------------------------------------
# ----------------------------------------------------------------------


def sandwich_check(
    nu: PhysicalModel, fam: IntervalFamily, win: FrequencyWindow
) -> BoundReport:
    """Check ``ν((r, r+1)) <= (ν ∗ χ_E)(ξ) <= 2ν((r, ∞))`` with ``r = r(ξ)``.

    Parameters
    ----------
    nu
        Even integrable density.
    fam
        The intervals; each must have length at least two.
    win
        Frequencies at which the sandwich is tested.

    Returns
    -------
    BoundReport
        The margin is the smaller of the two gaps; ``"lower"``,
        ``"middle"`` and ``"upper"`` curves are attached.

    Raises
    ------
    PreconditionError
        If ``ν`` is not even, has a point mass or an interval is
        shorter than two.
    """
    if not nu.even or nu.point_mass or nu.density is None:
        error_message = f"Sandwich needs an even density, got {nu.name}"
        raise PreconditionError(error_message)
    fam.require_length(MIN_INTERVAL_GAP)

    tails = _density_table(nu)
    xi = win.symmetric()
    r = distance_to_E(fam, xi)
    lower = tails(r) - tails(r + 1)
    middle = tails.complement_convolution(fam, xi)
    upper = 2 * tails(r)
    margin = np.minimum(middle - lower, upper - middle)
    _logger.info(
        "Sandwich of %s over %d intervals: least gap %.3g",
        nu.name,
        fam.count,
        float(np.min(margin)),
    )
    return bound_report(
        "sandwich",
        xi,
        margin,
        params={"nu": nu.name, "intervals": fam.count},
        tolerance=GRID_TOLERANCE * tails.total,
        extra_curves={
            "r": r,
            "lower": lower,
            "middle": middle,
            "upper": upper,
        },
    )


# ----------------------------------------------------------------------
# --- Pseudo-measures --------------------------------------------------
# ----------------------------------------------------------------------


@dataclasses.dataclass(frozen=True, eq=False, kw_only=True, slots=True)
class PseudoMeasure:
    """The pseudo-measure ``û = ĝ ∗ χ_E`` on a window.

    Parameters
    ----------
    u_hat
        Samples of ``û`` on the window.
    g
        Bump with ``ĝ >= 0``.
    family
        The removed intervals.
    tails
        Tail integrals of ``ĝ`` on ``[0, 2Ξ]``.
    """

    u_hat: GridSpectrum
    g: BumpModel
    family: IntervalFamily
    tails: _TailTable

    @property
    def g_mass(self) -> float:
        """Return ``∫ĝ``."""
        return self.tails.total

    def distance(self, xi: npt.ArrayLike) -> npt.NDArray[np.float64]:
        """Return ``r(ξ)``."""
        return distance_to_E(self.family, xi)


def _spectral_table(g: BumpModel, window: FrequencyWindow) -> _TailTable:
    nodes = window.step * np.arange(2 * window.count + 1)
    values = g.transform(nodes).real
    peak = float(np.max(values))
    lowest = int(np.argmin(values))
    if peak <= 0 or values[lowest] < NEGATIVITY_FLOOR * peak:
        error_message = (
            f"Transform of {g.name} is negative at ξ={nodes[lowest]:.6g}"
        )
        raise PreconditionError(error_message, witness=float(nodes[lowest]))
    values = np.where(values < _NOISE_FLOOR * peak, 0.0, values)
    return _TailTable(window.step, values)


def build_pseudomeasure(
    g: BumpModel, fam: IntervalFamily, win: FrequencyWindow
) -> PseudoMeasure:
    """Sample ``û = ĝ ∗ χ_E = ∫ĝ - ĝ ∗ χ_{∪I_j}`` on the window.

    ``ĝ`` is tabulated on ``[0, 2Ξ]``, far enough for every shift of
    an interval by a window frequency.

    Raises
    ------
    PreconditionError
        If ``ĝ`` is negative beyond the noise floor or an interval
        leaves the window.
    """
    fam.fits(win)
    tails = _spectral_table(g, win)
    xi = win.symmetric()
    u_hat = tails.complement_convolution(fam, xi)
    _logger.info(
        "Built pseudo-measure from %s over %d intervals (∫ĝ=%.6g)",
        g.name,
        fam.count,
        tails.total,
    )
    spectrum = GridSpectrum(
        window=win,
        samples=u_hat.astype(np.complex128),
        provenance=f"{g.name}∗χ_E",
    )
    return PseudoMeasure(u_hat=spectrum, g=g, family=fam, tails=tails)


def _require_nonincreasing(
    f_hat: Profile, nodes: npt.NDArray[np.float64]
) -> None:
    values = np.asarray(f_hat(nodes), dtype=np.float64)
    scale = max(float(np.max(values, initial=0.0)), _LOG_TINY)
    rises = np.flatnonzero(np.diff(values) > GRID_TOLERANCE * scale)
    if values.min() < 0 or rises.size:
        witness = float(nodes[rises[0] + 1]) if rises.size else None
        error_message = "f̂ must be nonnegative and nonincreasing on [0, ∞)"
        raise PreconditionError(error_message, witness=witness)


def _product_table(
    pm: PseudoMeasure, f_hat: Profile, f_mass: float
) -> _TailTable:
    """Tail table of ``(fg)^ = f̂ ∗ ĝ``, convolved term by term."""
    g_values = pm.tails.density
    support = np.flatnonzero(g_values > _KERNEL_CUTOFF * g_values[0])
    m = int(support[-1]) if support.size else 0
    kernel = np.concatenate((g_values[m:0:-1], g_values[: m + 1]))

    # f̂ on [-m h, (N + m) h]; positive terms keep relative accuracy.
    n = pm.tails.nodes.size - 1
    step = pm.tails.step
    shifts = step * np.arange(-m, n + m + 1, dtype=float)
    f_extended = np.asarray(f_hat(np.abs(shifts)), dtype=np.float64)
    product = scipy.signal.convolve(
        f_extended, kernel, mode="valid", method="direct"
    )
    product = product[: n + 1] * step
    return _TailTable(step, product, total=f_mass * pm.g_mass)


def verify_bounds(
    pm: PseudoMeasure,
    f_hat: Profile,
    win: FrequencyWindow,
    *,
    f_mass: float | None = None,
) -> BoundReport:
    """Check both bounds of the pseudo-measure construction.

    * ``û(ξ) <= 2∫_{d_j/2}^∞ ĝ`` when ``|ξ - ξ_j| <= d_j/2``;
    * ``(fu)^(ξ) >= (∫_{-1}^0 ĝ) · f̂(r(ξ) + 2)`` everywhere,

    with ``(fu)^ = (f̂ ∗ ĝ) ∗ χ_E``. Margins are log-ratios, so
    deep-interval values are compared at their own scale.

    Parameters
    ----------
    pm
        The pseudo-measure.
    f_hat
        Radial profile ``t ↦ f̂(t)`` for ``t >= 0``.
    win
        The window of ``pm``.
    f_mass
        ``∫ f̂`` over the line; integrated when omitted.

    Returns
    -------
    BoundReport
        Curves ``"eq1_margin"`` (``nan`` off the half-intervals),
        ``"eq2_margin"``, ``"u_hat"`` and ``"fu"``. The parameters hold
        the per-interval minima ``"eq1_margins"`` and
        ``"eq2_margin_min"``.

    Raises
    ------
    PreconditionError
        If ``f̂`` is negative or increases on the tested grid.
    """
    win.ensure_same(pm.u_hat.window)
    _require_nonincreasing(f_hat, pm.tails.nodes)
    if f_mass is None:
        half, _ = scipy.integrate.quad(
            lambda t: float(f_hat(np.asarray(t))), 0.0, math.inf, limit=200
        )
        f_mass = 2 * half

    xi = win.symmetric()
    r = pm.distance(xi)
    u_hat = pm.u_hat.samples.real
    product = _product_table(pm, f_hat, f_mass)
    fu = product.complement_convolution(pm.family, xi)

    eq1 = np.full(xi.size, np.nan)
    eq1_minima: list[float] = []
    for c, d in zip(pm.family.centers, pm.family.half_widths, strict=True):
        covered = np.abs(xi - c) <= d / 2
        bound = 2 * float(pm.tails(np.asarray(d / 2)))
        bounds = np.full(int(covered.sum()), bound)
        eq1[covered] = _log_margin(bounds, u_hat[covered])
        eq1_minima.append(float(np.min(eq1[covered], initial=np.inf)))

    left_mass = float(pm.tails(np.asarray(0.0)) - pm.tails(np.asarray(1.0)))
    eq2 = _log_margin(fu, left_mass * np.asarray(f_hat(r + 2)))
    margin = np.fmin(eq1, eq2)
    eq2_min = float(np.min(eq2))
    _logger.info(
        "Pseudo-measure bounds: eq1 least margin %s, eq2 least margin %.3g",
        min(eq1_minima, default=math.inf),
        eq2_min,
    )
    return bound_report(
        "pseudo-measure-bounds",
        xi,
        margin,
        params={
            "eq1_margins": eq1_minima,
            "eq2_margin_min": eq2_min,
            "left_mass": left_mass,
            "fg_mass": product.total,
        },
        tolerance=_BOUND_TOLERANCE,
        extra_curves={
            "eq1_margin": eq1,
            "eq2_margin": eq2,
            "u_hat": u_hat,
            "fu": fu,
        },
    )


# ----------------------------------------------------------------------
# --- Half-widths ------------------------------------------------------
# ----------------------------------------------------------------------


def _ball_minimum(w: Weight, center: float, radius: float) -> float:
    if w.monotone_radial:
        return float(w(np.asarray(center - radius)))
    ball = np.linspace(center - radius, center + radius, _BALL_SAMPLES)
    return float(np.min(w(ball)))


def solve_dj(
    phi_tilde: Weight, w: Weight, xi_seq: Sequence[float]
) -> list[float]:
    """Solve ``φ̃(d) = min_{|η| <= d} w(ξ_j + η)`` for ``d ∈ (0, ξ_j/2]``.

    Parameters
    ----------
    phi_tilde
        Strictly increasing weight.
    w
        The weight whose balls are minimised; radial monotone weights
        use ``w(ξ_j - d)``, others a sampled minimum.
    xi_seq
        The centers ``ξ_j``.

    Returns
    -------
    list of float
        The roots ``d_j``, found by Brent's method.

    Raises
    ------
    EquationSolveError
        If the equation has no sign change on the bracket, or the
        root misses ``|lhs - rhs| <= 1e-9 (1 + rhs)``.
    """
    roots: list[float] = []
    for xi in xi_seq:

        def residual(d: float, xi: float = xi) -> float:
            return float(phi_tilde(np.asarray(d))) - _ball_minimum(w, xi, d)

        lower = SOLVE_RELATIVE_TOLERANCE * xi
        upper = xi / 2
        at_lower, at_upper = residual(lower), residual(upper)
        if at_lower * at_upper > 0:
            error_message = f"No sign change for d_j on (0, {upper:g}]"
            raise EquationSolveError(
                error_message,
                diagnostics={
                    "xi": xi,
                    "residual_lower": at_lower,
                    "residual_upper": at_upper,
                },
            )

        root = scipy.optimize.brentq(
            residual, lower, upper, xtol=1e-14 * xi, maxiter=200
        )
        rhs = _ball_minimum(w, xi, root)
        error = abs(residual(root))
        if error > SOLVE_RELATIVE_TOLERANCE * (1 + abs(rhs)):
            error_message = f"Root d={root:.12g} for ξ={xi:g} is inaccurate"
            raise EquationSolveError(
                error_message,
                diagnostics={"xi": xi, "d": root, "residual": error},
            )
        _logger.debug("Solved d_j=%.12g at ξ_j=%g", root, xi)
        roots.append(float(root))
    return roots


def dj_milestones(
    phi_tilde: Weight,
    w: Weight,
    xi_seq: Sequence[float],
    d_seq: Sequence[float],
) -> VerdictReport:
    """Check ``d_j/ξ_j`` decreasing and ``φ̃(d_j) >= c · w(ξ_j)``.

    The certificate holds the fitted ``c``.
    """
    xi = np.asarray(xi_seq, dtype=np.float64)
    d = np.asarray(d_seq, dtype=np.float64)
    ratios = d / xi
    constants = phi_tilde(d) / w(xi)
    c = float(np.min(constants, initial=np.inf))
    rising = np.flatnonzero(np.diff(ratios) >= 0)
    certificate = {"c": c, "ratios": ratios.tolist()}
    if rising.size or not c > 0:
        witnesses = tuple(float(xi[j + 1]) for j in rising)
        return VerdictReport(
            name="dj-milestones",
            verdict=Verdict.REFUTED,
            certificate=certificate,
            witnesses=witnesses,
        )
    _logger.debug("Half-widths satisfy φ̃(d_j) >= %.4g w(ξ_j)", c)
    return VerdictReport(
        name="dj-milestones",
        verdict=Verdict.VERIFIED,
        certificate=certificate,
    )


# ----------------------------------------------------------------------
# --- Counterexamples --------------------------------------------------
# ----------------------------------------------------------------------


@dataclasses.dataclass(frozen=True, eq=False, kw_only=True, slots=True)
class CounterexampleReport:
    """Outcome of a counterexample construction.

    Parameters
    ----------
    name
        ``"gevrey"`` or ``"general"``.
    verdict
        ``VERIFIED`` when every check came out as the construction
        predicts, including a refuted slow decrease of ``û``.
    params
        Input parameters.
    alpha
        Exponent of ``f̂ = e^{-|ξ|^α}``, ``None`` for the general case.
    beta
        Gevrey index of the bump ``g``.
    xi, d
        Interval centers and half-widths.
    eq1_margins
        Least upper-bound margin on each half-interval.
    eq2_margin_min
        Least lower-bound margin on the window.
    trend_exponent
        ``rβ/α - s``, ``None`` for the general case.
    ratios
        Per-interval trend quantity: ``(d_j/2)^β / ξ_j^s`` (increasing)
        or ``w(ξ_j)/γ(d_j)`` (decreasing).
    slow_decrease
        ``"w_r"``: verdict for ``fu``, ``"w_s"``: verdict for ``u``.
    checks
        Every report that went into the verdict.
    curves
        Window curves for CSV export.
    notes
        Free-form remarks.
    """

    name: str
    verdict: Verdict
    params: dict[str, typing.Any]
    alpha: float | None
    beta: float
    xi: tuple[float, ...]
    d: tuple[float, ...]
    eq1_margins: tuple[float, ...]
    eq2_margin_min: float
    trend_exponent: float | None
    ratios: tuple[float, ...]
    slow_decrease: dict[str, Verdict]
    checks: tuple[VerdictReport | BoundReport, ...] = ()
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
        return jsonable({
            "name": self.name,
            "verdict": self.verdict,
            "params": self.params,
            "alpha": self.alpha,
            "beta": self.beta,
            "xi": self.xi,
            "d": self.d,
            "eq1_margins": self.eq1_margins,
            "eq2_margin_min": self.eq2_margin_min,
            "trend_exponent": self.trend_exponent,
            "ratios": self.ratios,
            "slow_decrease": self.slow_decrease,
            "checks": [check.as_dict() for check in self.checks],
            "notes": self.notes,
        })


def _family(xi: Sequence[float], d: Sequence[float]) -> IntervalFamily:
    try:
        return IntervalFamily(tuple(xi), tuple(d))
    except InvariantViolationError as exc:
        error_message = "Interval centers violate the spacing requirements"
        raise PreconditionError(error_message, witness=exc.witness) from exc


def _upper_envelope(
    pm: PseudoMeasure, gamma: Weight, window: FrequencyWindow
) -> tuple[GridSpectrum, list[str]]:
    """Rigorous upper bound of ``û``: ``‖ĝ e^{γ}‖_1 e^{-γ(r(ξ))}``."""
    notes: list[str] = []
    u_hat = pm.u_hat.samples.real + _ENVELOPE_FLOOR * pm.g_mass
    norm = w_norm(pm.g.spectrum(window), 1.0, gamma)
    if norm.lower_bound_only or not math.isfinite(norm.value):
        notes.append(f"‖ĝ‖ under {gamma.name} not resolved; raw û used")
        envelope = u_hat
    else:
        r = pm.distance(window.symmetric())
        with np.errstate(over="ignore", under="ignore"):
            decay = norm.value * np.exp(-gamma(r))
        envelope = np.minimum(u_hat, decay)
    spectrum = GridSpectrum(
        window=window,
        samples=envelope.astype(np.complex128),
        provenance=f"upper envelope of {pm.u_hat.provenance}",
    )
    return spectrum, notes


def _lower_envelope(
    pm: PseudoMeasure,
    f_hat: Profile,
    left_mass: float,
    window: FrequencyWindow,
) -> GridSpectrum:
    """Lower bound ``(∫_{-1}^0 ĝ) f̂(r(ξ) + 2)`` of ``(fu)^``."""
    r = pm.distance(window.symmetric())
    values = left_mass * np.asarray(f_hat(r + 2), dtype=np.float64)
    return GridSpectrum(
        window=window,
        samples=values.astype(np.complex128),
        provenance="lower envelope of (fu)^",
    )


def _expecting(report: SlowDecreaseReport, expected: Verdict) -> Verdict:
    if report.verdict is Verdict.INCONCLUSIVE:
        return Verdict.INCONCLUSIVE
    return Verdict.VERIFIED if report.verdict is expected else Verdict.REFUTED


def _monotone_trend(
    name: str,
    ratios: npt.NDArray[np.float64],
    xi: npt.NDArray[np.float64],
    *,
    increasing: bool,
    certificate: dict[str, typing.Any],
) -> VerdictReport:
    steps = np.diff(ratios) if increasing else -np.diff(ratios)
    if ratios.size < 2:  # noqa: PLR2004
        return VerdictReport(
            name=name,
            verdict=Verdict.INCONCLUSIVE,
            certificate=certificate,
            notes=("fewer than two intervals on the window",),
        )
    broken = np.flatnonzero(steps <= 0)
    if broken.size:
        return VerdictReport(
            name=name,
            verdict=Verdict.REFUTED,
            certificate=certificate,
            witnesses=tuple(float(xi[j + 1]) for j in broken),
        )
    return VerdictReport(
        name=name, verdict=Verdict.VERIFIED, certificate=certificate
    )


def _witness_location(
    report: SlowDecreaseReport,
    centers: Sequence[float],
    half_widths: Sequence[float],
) -> VerdictReport:
    """Check that refutation witnesses sit within ``d_j/2`` of a center.

    Centers with no witness nearby are listed in the notes.
    """
    if not report.witnesses:
        return VerdictReport(
            name="witness-location",
            verdict=Verdict.INCONCLUSIVE,
            notes=("no refutation witnesses",),
        )
    xi = np.asarray(centers, dtype=np.float64)
    reach = np.asarray(half_widths, dtype=np.float64) / 2
    stray: list[float] = []
    covered = np.zeros(xi.size, dtype=bool)
    for witness in report.witnesses:
        near = np.abs(abs(witness) - xi) <= reach
        if not near.any():
            stray.append(witness)
        covered |= near
    notes = tuple(
        f"no witness near ξ_j={x:g}" for x in xi[~covered].tolist()
    )
    return VerdictReport(
        name="witness-location",
        verdict=Verdict.REFUTED if stray else Verdict.VERIFIED,
        certificate={"covered": xi[covered].tolist()},
        witnesses=tuple(stray),
        notes=notes,
    )


def _lower_bound_trend(
    bounds: BoundReport, fam: IntervalFamily, r: float
) -> VerdictReport:
    """Check ``(fu)^(ξ) >= c e^{-2^r |ξ|^r}`` beyond the first interval."""
    xi = bounds.curves["xi"]
    fu = bounds.curves["fu"]
    tested = np.abs(xi) >= fam.centers[0] - fam.half_widths[0]
    vanishing = np.flatnonzero(tested & (fu <= 0))
    if vanishing.size:
        return VerdictReport(
            name="lower-envelope",
            verdict=Verdict.REFUTED,
            witnesses=tuple(float(x) for x in xi[vanishing[:16]]),
            notes=("(fu)^ vanishes",),
        )

    with np.errstate(divide="ignore"):
        log_ratio = np.log(fu) + 2**r * np.abs(xi) ** r
    minima = [
        float(np.min(log_ratio[np.abs(xi - c) < d]))
        for c, d in zip(fam.centers, fam.half_widths, strict=True)
    ]
    log_const = float(np.min(log_ratio[tested]))
    certificate = {"log_const": log_const, "interval_minima": minima}
    drops = np.diff(minima) < -math.log(TREND_FACTOR)
    verdict = Verdict.INCONCLUSIVE if drops.any() else Verdict.VERIFIED
    return VerdictReport(
        name="lower-envelope", verdict=verdict, certificate=certificate
    )


def gevrey_counterexample(
    a: float,
    r: float,
    s: float,
    xi_seq: Sequence[float] | None = None,
    win: FrequencyWindow | None = None,
) -> CounterexampleReport:
    """Build ``u`` with ``fu`` slowly decreasing for ``|ξ|^r`` but ``u`` not.

    ``α`` and ``β`` are the midpoints of ``(max(a, r), r/s)`` and
    ``(αs/r, 1)``; the intervals have half-widths ``d_j = ξ_j^{r/α}``,
    ``g`` is the autocorrelation of a bump of Gevrey order ``1/β`` and
    ``f̂ = e^{-|ξ|^α}``.

    Parameters
    ----------
    a
        Gevrey index of the multiplier class, in ``(0, 1]``.
    r, s
        Exponents of the two weights ``|ξ|^r`` and ``|ξ|^s``.
    xi_seq
        Interval centers; the geometric ladder ``100 · 4^j`` clipped
        to the window when omitted.
    win
        Frequency window; :func:`default_window` when omitted.

    Raises
    ------
    PreconditionError
        If ``a >= r/s``, a parameter leaves its range or the centers
        violate the interval spacing.
    """
    if not (0 < r < 1 and 0 < s < 1 and 0 < a <= 1):
        error_message = "Need 0 < r, s < 1 and 0 < a <= 1"
        raise PreconditionError(error_message, witness=(a, r, s))
    if a >= r / s:
        error_message = (
            f"The construction needs a < r/s, got a={a:g} and "
            f"r/s={r / s:.6g} (equivalently a·s < r)"
        )
        raise PreconditionError(error_message, witness=(a, r, s))

    window = win or default_window()
    alpha = (max(a, r) + r / s) / 2
    beta = (alpha * s / r + 1) / 2
    power = r / alpha
    centers = tuple(
        xi_seq
        if xi_seq is not None
        else geometric_centers(window, lambda x: x**power)
    )
    half_widths = tuple(x**power for x in centers)
    fam = _family(centers, half_widths)
    _logger.info(
        "Gevrey counterexample a=%g r=%g s=%g: α=%.6g β=%.6g, %d intervals",
        a,
        r,
        s,
        alpha,
        beta,
        fam.count,
    )

    g = make_autocorr_bump(gevrey_bump(beta, radius=_BUMP_RADIUS))
    pm = build_pseudomeasure(g, fam, window)

    def f_hat(t: npt.NDArray[np.float64]) -> npt.NDArray[np.float64]:
        return np.exp(-(np.abs(t) ** alpha))

    f_mass = 2 * float(scipy.special.gamma(1 + 1 / alpha))
    bounds = verify_bounds(pm, f_hat, window, f_mass=f_mass)

    xi = np.asarray(centers, dtype=np.float64)
    d = np.asarray(half_widths, dtype=np.float64)
    trend_exponent = r * beta / alpha - s
    ratios = (d / 2) ** beta / xi**s
    upper = _monotone_trend(
        "upper-trend",
        ratios,
        xi,
        increasing=True,
        certificate={"trend_exponent": trend_exponent},
    )
    lower = _lower_bound_trend(bounds, fam, r)

    w_s = gevrey_weight(s)
    w_r = gevrey_weight(r)
    envelope, notes = _upper_envelope(pm, gevrey_weight(beta), window)
    slow_u = slow_decrease_check(
        envelope,
        w_s,
        _REFUTATION_LADDER,
        xi_min=scan_start(w_s, _REFUTATION_LADDER, window),
    )
    located = _witness_location(slow_u, centers, half_widths)
    left_mass = float(bounds.params["left_mass"])
    slow_fu = slow_decrease_check(
        _lower_envelope(pm, f_hat, left_mass, window),
        w_r,
        DEFAULT_A_LADDER,
        xi_min=scan_start(w_r, DEFAULT_A_LADDER, window),
    )

    verdict = combine([
        bounds.verdict,
        upper.verdict,
        lower.verdict,
        _expecting(slow_u, Verdict.REFUTED),
        located.verdict,
        _expecting(slow_fu, Verdict.VERIFIED),
    ])
    _logger.info("Gevrey counterexample: %s", verdict)
    return CounterexampleReport(
        name="gevrey",
        verdict=verdict,
        params={"a": a, "r": r, "s": s},
        alpha=alpha,
        beta=beta,
        xi=centers,
        d=half_widths,
        eq1_margins=tuple(bounds.params["eq1_margins"]),
        eq2_margin_min=float(bounds.params["eq2_margin_min"]),
        trend_exponent=trend_exponent,
        ratios=tuple(ratios.tolist()),
        slow_decrease={"w_r": slow_fu.verdict, "w_s": slow_u.verdict},
        checks=(bounds, upper, lower, located),
        curves=bounds.curves,
        notes=tuple(notes),
    )


def general_counterexample(
    w: Weight,
    phi: Weight,
    win: FrequencyWindow | None = None,
    *,
    xi_seq: Sequence[float] | None = None,
) -> CounterexampleReport:
    """Build ``u`` with ``fu`` slowly decreasing for ``w`` but ``u`` not.

    ``φ̃`` is the strict concave majorant of ``φ + w`` and ``γ`` the
    strict concave majorant of ``φ̃``; ``d_j`` solves
    ``φ̃(d) = min_{|η| <= d} w(ξ_j + η)`` and ``f̂ = e^{-φ̃}``.

    Parameters
    ----------
    w
        Weight of the slow decrease, tested against the class of
        weights with comparable balls.
    phi
        Weight of the multiplier class.
    win
        Frequency window; :func:`default_window` when omitted.
    xi_seq
        Interval centers; the geometric ladder ``100 · 4^j`` clipped
        to the window when omitted.

    Raises
    ------
    PreconditionError
        If ``w`` fails the ball comparison on the computed
        ``(ξ_j, d_j)``.
    EquationSolveError
        If some ``d_j`` cannot be solved for.
    """
    window = win or default_window()
    phi_tilde = concave_majorant(phi.plus(w), window, strict=True)
    gamma = concave_majorant(phi_tilde, window, strict=True)
    centers = tuple(
        xi_seq
        if xi_seq is not None
        else geometric_centers(window, lambda x: x / 2)
    )
    half_widths = tuple(solve_dj(phi_tilde, w, centers))

    membership = in_M_tilde(w, centers, half_widths)
    if not membership.holds:
        error_message = f"{w.name} fails the ball comparison on the intervals"
        raise PreconditionError(error_message, witness=membership.witnesses)
    fam = _family(centers, half_widths)
    _logger.info(
        "General counterexample w=%s φ=%s: %d intervals",
        w.name,
        phi.name,
        fam.count,
    )

    g = make_autocorr_bump(
        gevrey_bump(_GENERAL_BUMP_BETA, radius=_BUMP_RADIUS)
    )
    pm = build_pseudomeasure(g, fam, window)

    def f_hat(t: npt.NDArray[np.float64]) -> npt.NDArray[np.float64]:
        return np.exp(-phi_tilde(t))

    bounds = verify_bounds(pm, f_hat, window)

    xi = np.asarray(centers, dtype=np.float64)
    d = np.asarray(half_widths, dtype=np.float64)
    milestones = dj_milestones(phi_tilde, w, centers, half_widths)
    ratios = w(xi) / gamma(d)
    trend = _monotone_trend(
        "gamma-trend",
        ratios,
        xi,
        increasing=False,
        certificate={"ratios": ratios.tolist()},
    )

    envelope, notes = _upper_envelope(pm, gamma, window)
    slow_u = slow_decrease_check(
        envelope,
        w,
        _REFUTATION_LADDER,
        xi_min=scan_start(w, _REFUTATION_LADDER, window),
    )
    located = _witness_location(slow_u, centers, half_widths)
    left_mass = float(bounds.params["left_mass"])
    slow_fu = slow_decrease_check(
        _lower_envelope(pm, f_hat, left_mass, window),
        w,
        DEFAULT_A_LADDER,
        xi_min=scan_start(w, DEFAULT_A_LADDER, window),
    )

    verdict = combine([
        bounds.verdict,
        milestones.verdict,
        trend.verdict,
        _expecting(slow_u, Verdict.REFUTED),
        located.verdict,
        _expecting(slow_fu, Verdict.VERIFIED),
    ])
    _logger.info("General counterexample: %s", verdict)
    return CounterexampleReport(
        name="general",
        verdict=verdict,
        params={"w": w.name, "phi": phi.name},
        alpha=None,
        beta=_GENERAL_BUMP_BETA,
        xi=centers,
        d=half_widths,
        eq1_margins=tuple(bounds.params["eq1_margins"]),
        eq2_margin_min=float(bounds.params["eq2_margin_min"]),
        trend_exponent=None,
        ratios=tuple(ratios.tolist()),
        slow_decrease={"w_r": slow_fu.verdict, "w_s": slow_u.verdict},
        checks=(bounds, membership, milestones, trend, located),
        curves=bounds.curves,
        notes=tuple(notes),
    )
