"""Fourier-side models of compactly supported functions and distributions.

A :class:`GridSpectrum` holds the samples of ``û`` on a
:class:`~convolab.grids.FrequencyWindow`. The scans of this module read
Beurling-type seminorms, the Paley-Wiener order and the slow-decrease
condition that characterises invertibility of convolution operators.

The transform convention is ``û(ξ) = ∫ u(x) e^{-ixξ} dx``.
"""

import dataclasses
import logging
import math
import pathlib
import typing

import numpy as np
import numpy.typing as npt
import scipy.integrate
import scipy.signal
import scipy.special

from convolab.catalog import Catalog
from convolab.constants import (
    ALIASING_TOLERANCE,
    BALL_RESOLUTION,
    DEFAULT_A_LADDER,
    GRID_TOLERANCE,
    TAIL_FLAG_RATIO,
)
from convolab.exceptions import (
    AliasingError,
    PreconditionError,
    RepresentationError,
    ShapeError,
)
from convolab.utilities import range_max, slope_fit
from convolab.verdicts import Verdict, VerdictReport, jsonable

if typing.TYPE_CHECKING:
    from collections.abc import Callable, Iterable, Sequence

    from convolab.grids import FrequencyWindow
    from convolab.weights import Weight

_logger = logging.getLogger(__name__)

type Evaluator = Callable[[npt.NDArray[np.float64]], npt.NDArray[typing.Any]]

_MIN_PHYSICAL_SAMPLES: typing.Final[int] = 4096
_SERIES_THRESHOLD: typing.Final[float] = 1e-3
_GAUSSIAN_CUTOFF: typing.Final[float] = 12.0
_LAPLACE_CUTOFF: typing.Final[float] = 40.0
_MIN_SLOW_DECREASE_RADIUS: typing.Final[float] = 100.0
_MAX_WITNESSES: typing.Final[int] = 64


# ----------------------------------------------------------------------
# --- Physical models --------------------------------------------------
# ----------------------------------------------------------------------


@dataclasses.dataclass(frozen=True, eq=False, kw_only=True, slots=True)
class PhysicalModel:
    """Physical-space model ``u = c·δ + density``.

    Parameters
    ----------
    name
        Human-readable name.
    density
        Vectorised function part, ``None`` for a pure point mass.
    support
        Interval outside which the density is (numerically) zero.
    point_mass
        Mass ``c`` of the Dirac component at the origin.
    piecewise_linear
        Whether the density is piecewise linear with breakpoints at the
        support ends. Such densities are transformed exactly.
    even
        Whether the model is real and even.
    tail_mass
        Mass of the density outside ``support``.
    transform
        Closed-form transform ``ξ ↦ û(ξ)`` when known.
    """

    name: str
    density: Evaluator | None = None
    support: tuple[float, float] = (0.0, 0.0)
    point_mass: float = 0.0
    piecewise_linear: bool = False
    even: bool = True
    tail_mass: float = 0.0
    transform: Evaluator | None = None

    def __call__(self, x: npt.ArrayLike) -> npt.NDArray[np.float64]:
        """Evaluate the density part at ``x``."""
        points = np.asarray(x, dtype=np.float64)
        if self.density is None:
            return np.zeros_like(points)
        return np.asarray(self.density(points), dtype=np.float64)

    def scaled(self, factor: float) -> PhysicalModel:
        """The model multiplied by ``factor``."""
        return combine([(factor, self)], name=f"{factor:g}·{self.name}")

    def __add__(self, other: PhysicalModel) -> PhysicalModel:
        return combine([(1.0, self), (1.0, other)])


def combine(
    terms: Sequence[tuple[float, PhysicalModel]],
    *,
    name: str | None = None,
) -> PhysicalModel:
    """Linear combination ``Σ c_k u_k`` of physical models.

    The closed-form transform survives when every term has one.
    """
    if not terms:
        error_message = "A linear combination needs at least one term"
        raise RepresentationError(error_message)

    def density(x: npt.NDArray[np.float64]) -> npt.NDArray[np.float64]:
        return sum(
            (c * m(x) for c, m in terms),
            start=np.zeros_like(x),
        )

    transform: Evaluator | None = None
    if all(m.transform is not None for _, m in terms):

        def transform(xi: npt.NDArray[np.float64]) -> npt.NDArray[typing.Any]:
            return sum(
                (c * m.transform(xi) for c, m in terms),  # type: ignore[misc]
                start=np.zeros(xi.shape, dtype=np.complex128),
            )

    with_density = [m for _, m in terms if m.density is not None]
    support = (
        (
            min(m.support[0] for m in with_density),
            max(m.support[1] for m in with_density),
        )
        if with_density
        else (0.0, 0.0)
    )
    return PhysicalModel(
        name=name or " + ".join(f"{c:g}·{m.name}" for c, m in terms),
        density=density if with_density else None,
        support=support,
        point_mass=sum(c * m.point_mass for c, m in terms),
        piecewise_linear=all(m.piecewise_linear for m in with_density),
        even=all(m.even for _, m in terms),
        tail_mass=sum(abs(c) * m.tail_mass for c, m in terms),
        transform=transform,
    )


def dirac() -> PhysicalModel:
    """Unit point mass at the origin, ``δ̂ ≡ 1``."""
    return PhysicalModel(
        name="dirac",
        point_mass=1.0,
        transform=lambda xi: np.ones(xi.shape, dtype=np.complex128),
    )


def indicator(a: float = 1.0) -> PhysicalModel:
    """Indicator of ``[-a, a]`` with transform ``2 sin(aξ)/ξ``."""
    return PhysicalModel(
        name=f"indicator:{a:g}",
        density=lambda x: (np.abs(x) <= a).astype(np.float64),
        support=(-a, a),
        piecewise_linear=True,
        transform=lambda xi: (2 * a * np.sinc(a * xi / np.pi)).astype(
            np.complex128
        ),
    )


def triangle(a: float = 1.0) -> PhysicalModel:
    """Hat function ``(1 - |x|/a)_+`` with transform ``a·sinc²``."""
    return PhysicalModel(
        name=f"triangle:{a:g}",
        density=lambda x: np.clip(1 - np.abs(x) / a, 0, None),
        support=(-a, a),
        piecewise_linear=True,
        transform=lambda xi: (a * np.sinc(a * xi / (2 * np.pi)) ** 2).astype(
            np.complex128
        ),
    )


def gaussian(sigma: float = 1.0) -> PhysicalModel:
    """Gaussian ``e^{-x²/(2σ²)}``, truncated at twelve deviations."""
    cutoff = _GAUSSIAN_CUTOFF * sigma
    root = sigma * math.sqrt(2 * math.pi)
    return PhysicalModel(
        name=f"gaussian:{sigma:g}",
        density=lambda x: np.exp(-(x**2) / (2 * sigma**2)),
        support=(-cutoff, cutoff),
        tail_mass=root * float(
            scipy.special.erfc(_GAUSSIAN_CUTOFF / math.sqrt(2))
        ),
        transform=lambda xi: (root * np.exp(-(sigma * xi) ** 2 / 2)).astype(
            np.complex128
        ),
    )


def laplace(scale: float = 1.0) -> PhysicalModel:
    """Probability density ``e^{-|x|/b}/(2b)``, truncated at forty scales."""
    cutoff = _LAPLACE_CUTOFF * scale
    return PhysicalModel(
        name=f"laplace:{scale:g}",
        density=lambda x: np.exp(-np.abs(x) / scale) / (2 * scale),
        support=(-cutoff, cutoff),
        tail_mass=math.exp(-_LAPLACE_CUTOFF),
        transform=lambda xi: (1 / (1 + (scale * xi) ** 2)).astype(
            np.complex128
        ),
    )


# ----------------------------------------------------------------------
# --- Spectra ----------------------------------------------------------
# ----------------------------------------------------------------------


@dataclasses.dataclass(frozen=True, eq=False, kw_only=True, slots=True)
class GridSpectrum:
    """Samples of ``û`` on the symmetric grid of a window.

    Parameters
    ----------
    window
        The frequency window.
    samples
        Complex values of ``û`` at :meth:`FrequencyWindow.symmetric`.
    support_radius
        Declared radius of ``supp u`` in physical space.
    provenance
        Tag describing how the samples were obtained.

    Raises
    ------
    ShapeError
        If the number of samples does not match the window.
    RepresentationError
        If some sample is not finite.
    """

    window: FrequencyWindow
    samples: npt.NDArray[np.complex128]
    support_radius: float = 0.0
    provenance: str = "declared"

    def __post_init__(self) -> None:
        samples = np.asarray(self.samples, dtype=np.complex128)
        if samples.shape != (self.window.size,):
            error_message = (
                f"Spectrum has {samples.shape} samples, the window needs "
                f"{self.window.size}"
            )
            raise ShapeError(error_message)
        if not np.all(np.isfinite(samples)):
            error_message = f"Spectrum {self.provenance!r} is not finite"
            raise RepresentationError(error_message)
        object.__setattr__(self, "samples", samples)

    @classmethod
    def declared(
        cls,
        window: FrequencyWindow,
        function: Evaluator,
        *,
        support_radius: float = 0.0,
        provenance: str = "declared",
    ) -> GridSpectrum:
        """Spectrum given directly on the Fourier side."""
        with np.errstate(all="ignore"):
            values = function(window.symmetric())
        return cls(
            window=window,
            samples=np.asarray(values, dtype=np.complex128),
            support_radius=support_radius,
            provenance=provenance,
        )

    @property
    def xi(self) -> npt.NDArray[np.float64]:
        """The grid of the window."""
        return self.window.symmetric()

    def magnitude(self) -> npt.NDArray[np.float64]:
        """Return ``|û|`` on the grid."""
        return np.abs(self.samples)

    def log_magnitude(self) -> npt.NDArray[np.float64]:
        """Return ``log|û|`` with ``-inf`` at zeros."""
        with np.errstate(divide="ignore"):
            return np.log(self.magnitude())

    def is_real_even(self, tolerance: float = GRID_TOLERANCE) -> bool:
        """Whether the samples are real and even up to ``tolerance``."""
        scale = max(float(np.max(self.magnitude(), initial=0.0)), 1e-300)
        odd = np.abs(self.samples - self.samples[::-1])
        return bool(
            np.max(np.abs(self.samples.imag), initial=0.0) <= tolerance * scale
            and np.max(odd, initial=0.0) <= tolerance * scale
        )

    def added(self, other: GridSpectrum) -> GridSpectrum:
        """Sum of two spectra on the same window."""
        self.window.ensure_same(other.window)
        return GridSpectrum(
            window=self.window,
            samples=self.samples + other.samples,
            support_radius=max(self.support_radius, other.support_radius),
            provenance=f"({self.provenance})+({other.provenance})",
        )

    def to_csv(self, path: str | pathlib.Path) -> None:
        """Write ``xi,real,imag`` rows to ``path``."""
        table = np.column_stack((self.xi, self.samples.real, self.samples.imag))
        np.savetxt(
            path,
            table,
            delimiter=",",
            header="xi,real,imag",
            comments="",
            fmt="%.17g",
        )


@dataclasses.dataclass(frozen=True, slots=True)
class SeminormValue:
    """Extended-real seminorm value read on a window.

    Parameters
    ----------
    value
        The value computed on the window, possibly ``inf``.
    lower_bound_only
        Set when the window truncates a divergent tail or growth, so
        the true value may be larger (possibly infinite).
    """

    value: float
    lower_bound_only: bool = False

    def as_dict(self) -> dict[str, typing.Any]:
        """Return a JSON-compatible representation."""
        return jsonable(dataclasses.asdict(self))


def _endpoint_weights(
    theta: npt.NDArray[np.float64],
) -> tuple[npt.NDArray[np.float64], npt.NDArray[np.complex128]]:
    # Attenuation factor and endpoint correction of the piecewise-linear
    # interpolant, with their Taylor series near theta = 0.
    small = np.abs(theta) < _SERIES_THRESHOLD
    t = np.where(small, 1.0, theta)
    one_minus_cos = 1 - np.cos(t)
    attenuation = 2 * one_minus_cos / t**2
    alpha = (-one_minus_cos + 1j * (t - np.sin(t))) / t**2
    s2 = theta**2
    attenuation = np.where(small, 1 - s2 / 12 + s2**2 / 360, attenuation)
    alpha = np.where(
        small, -0.5 + s2 / 24 + 1j * theta * (1 / 6 - s2 / 120), alpha
    )
    return attenuation, alpha


def _transform_density(
    model: PhysicalModel, xi: npt.NDArray[np.float64]
) -> npt.NDArray[np.complex128]:
    a, b = model.support
    width = b - a
    step = float(xi[1] - xi[0]) if xi.size > 1 else 1.0
    if xi.size > 1 and not np.allclose(np.diff(xi), step, rtol=1e-9):
        error_message = "Numeric transforms need a uniform frequency grid"
        raise RepresentationError(error_message)
    if width > 2 * np.pi / abs(step):
        error_message = (
            f"Support of {model.name} (width {width:g}) exceeds the "
            f"physical box {2 * np.pi / abs(step):g} of the grid step"
        )
        raise PreconditionError(error_message, witness=model.support)

    top = max(float(np.max(np.abs(xi))), 1.0)
    delta = min(width / _MIN_PHYSICAL_SAMPLES, np.pi / (4 * top))
    # Even so that the midpoint is a node (kink of the hat function).
    n = 2 * math.ceil(width / (2 * delta))
    delta = width / n
    x = a + delta * np.arange(n + 1)
    values = model(x)

    if not model.piecewise_linear:
        edge = max(abs(values[0]), abs(values[-1]))
        scale = float(np.max(np.abs(values), initial=0.0))
        if edge > ALIASING_TOLERANCE * max(scale, 1e-300):
            raise AliasingError(tail_mass=edge, tolerance=ALIASING_TOLERANCE)
        values = values.copy()
        values[[0, -1]] *= 0.5

    # Chirp-z evaluation of Σ f_j e^{-i ξ_k j δ} along the grid.
    sums = scipy.signal.czt(
        values,
        m=xi.size,
        w=np.exp(-1j * step * delta),
        a=np.exp(1j * xi[0] * delta),
    )
    phase = np.exp(-1j * xi * a)
    if not model.piecewise_linear:
        return delta * phase * sums

    theta = xi * delta
    attenuation, alpha = _endpoint_weights(theta)
    corrected = (
        attenuation * sums
        + np.conj(alpha) * values[0]
        + np.exp(-1j * xi * width) * alpha * values[-1]
    )
    return delta * phase * corrected


def transform_samples(
    model: PhysicalModel,
    xi: npt.ArrayLike,
    *,
    closed_form: bool = True,
) -> npt.NDArray[np.complex128]:
    """Evaluate ``û`` on a uniform, increasing frequency grid.

    Piecewise-linear densities are transformed exactly through the
    endpoint-corrected linear rule; other densities use the trapezoid
    rule, which is spectrally accurate for smooth compactly supported
    functions.

    Parameters
    ----------
    model
        The physical model.
    xi
        Frequencies, uniformly spaced when a numeric transform is
        needed.
    closed_form
        Use the model's closed-form transform when it has one.

    Raises
    ------
    AliasingError
        If the mass outside the declared support exceeds the aliasing
        tolerance or a smooth density does not vanish at its support
        ends.
    PreconditionError
        If the support does not fit the physical box ``2π/step``.
    """
    points = np.atleast_1d(np.asarray(xi, dtype=np.float64))
    if closed_form and model.transform is not None:
        return np.asarray(model.transform(points), dtype=np.complex128)

    if model.tail_mass > ALIASING_TOLERANCE:
        raise AliasingError(
            tail_mass=model.tail_mass, tolerance=ALIASING_TOLERANCE
        )

    samples = np.full(points.shape, model.point_mass, dtype=np.complex128)
    if model.density is not None and model.support[1] > model.support[0]:
        samples += _transform_density(model, points)
    return samples


def fourier_of(
    model: PhysicalModel,
    window: FrequencyWindow,
    *,
    closed_form: bool = True,
) -> GridSpectrum:
    """Sample ``û`` on the window.

    Parameters
    ----------
    model
        The physical model.
    window
        Frequency window.
    closed_form
        Use the model's closed-form transform when it has one. With
        ``False`` the density is always transformed numerically.

    Returns
    -------
    GridSpectrum
        The sampled transform.

    Raises
    ------
    AliasingError
        See :func:`transform_samples`.
    PreconditionError
        See :func:`transform_samples`.
    """
    xi = window.symmetric()
    radius = max(abs(model.support[0]), abs(model.support[1]))
    numeric = not (closed_form and model.transform is not None)
    samples = transform_samples(model, xi, closed_form=closed_form)

    if numeric and model.even:
        imaginary = float(np.max(np.abs(samples.imag), initial=0.0))
        _logger.debug(
            "Dropping imaginary part %.3g of even model %s",
            imaginary,
            model.name,
        )
        samples = (0.5 * (samples + samples[::-1])).real.astype(np.complex128)

    _logger.debug("Transformed %s on %d points", model.name, xi.size)
    return GridSpectrum(
        window=window,
        samples=samples,
        support_radius=radius,
        provenance=f"{'fft' if numeric else 'closed-form'}:{model.name}",
    )


def convolve(u: GridSpectrum, v: GridSpectrum) -> GridSpectrum:
    """Spectrum of ``u * v``: the pointwise product of samples.

    Raises
    ------
    ShapeError
        If the windows differ.
    """
    u.window.ensure_same(v.window)
    return GridSpectrum(
        window=u.window,
        samples=u.samples * v.samples,
        support_radius=u.support_radius + v.support_radius,
        provenance=f"({u.provenance})*({v.provenance})",
    )


# ----------------------------------------------------------------------
# --- Seminorms --------------------------------------------------------
# ----------------------------------------------------------------------


def w_norm(phi: GridSpectrum, lam: float, w: Weight) -> SeminormValue:
    """Weighted norm ``∫ |φ̂(ξ)| e^{λ w(ξ)} dξ`` over the window.

    ``λ = 0`` is accepted and gives the ``L¹`` norm of ``φ̂``.

    Raises
    ------
    PreconditionError
        If ``lam`` is negative.
    """
    if lam < 0:
        error_message = f"w-norm needs λ >= 0, got {lam}"
        raise PreconditionError(error_message)

    xi = phi.xi
    with np.errstate(over="ignore"):
        integrand = phi.magnitude() * np.exp(lam * w(xi))
    if not np.all(np.isfinite(integrand)):
        _logger.warning("w-norm of %s overflows on the window", phi.provenance)
        return SeminormValue(float("inf"), lower_bound_only=True)

    total = float(scipy.integrate.trapezoid(integrand, xi))
    edge = max(float(integrand[0]), float(integrand[-1]))
    flagged = edge > TAIL_FLAG_RATIO * total
    if flagged:
        _logger.warning(
            "w-norm of %s has a heavy tail at the window edge (%.3g)",
            phi.provenance,
            edge,
        )
    return SeminormValue(total, lower_bound_only=flagged)


def _rung_maxima(
    window: FrequencyWindow,
    xi: npt.NDArray[np.float64],
    values: npt.NDArray[np.float64],
) -> npt.NDArray[np.float64]:
    return np.array([
        float(np.max(values[mask], initial=-np.inf))
        for mask in window.rung_masks(xi)
    ])


def sup_seminorm(u: GridSpectrum, lam: float, w: Weight) -> SeminormValue:
    """Supremum ``sup |û(ξ)| e^{λ w(ξ)}`` over the window.

    ``λ`` may be negative. The result is flagged when the rung maxima
    still grow at the outermost rung.
    """
    xi = u.xi
    log_values = u.log_magnitude() + lam * w(xi)
    peak = float(np.max(log_values))
    with np.errstate(over="ignore"):
        value = float(np.exp(peak))

    rungs = _rung_maxima(u.window, xi, log_values)
    growing = rungs.size > 1 and bool(
        rungs[-1] - rungs[-2] > GRID_TOLERANCE * max(1, abs(peak))
    )
    if growing:
        _logger.warning(
            "Weighted sup of %s still grows at the window edge",
            u.provenance,
        )
    return SeminormValue(value, lower_bound_only=growing)


@dataclasses.dataclass(frozen=True, slots=True)
class PaleyWienerOrder:
    """Estimated order ``λ`` with ``|û| e^{λw}`` bounded.

    Parameters
    ----------
    order
        Least-squares estimate.
    interval
        Two-standard-error confidence interval.
    verdict
        ``INCONCLUSIVE`` when the envelope is not monotone or too
        short.
    """

    order: float
    interval: tuple[float, float]
    verdict: Verdict

    def as_dict(self) -> dict[str, typing.Any]:
        """Return a JSON-compatible representation."""
        return jsonable(dataclasses.asdict(self))


def pw_order(u: GridSpectrum, w: Weight) -> PaleyWienerOrder:
    """Fit ``log|û| ≈ c - λ·w`` on the upper envelope of the ladder.

    Each ladder annulus but the innermost contributes its maximum of
    ``log|û|`` together with the weight at the maximiser.
    """
    xi = u.xi
    log_values = u.log_magnitude()
    weights = w(xi)
    points: list[tuple[float, float]] = []
    for mask in u.window.rung_masks(xi)[1:]:
        index = np.flatnonzero(mask)
        best = index[np.argmax(log_values[index])]
        if np.isfinite(log_values[best]):
            points.append((float(weights[best]), float(log_values[best])))

    if len(points) < 3:  # noqa: PLR2004
        return PaleyWienerOrder(
            float("nan"), (float("nan"), float("nan")), Verdict.INCONCLUSIVE
        )

    abscissa, envelope = (np.array(col) for col in zip(*points, strict=True))
    _, slope, stderr = slope_fit(abscissa, envelope)
    order = -slope
    steps = np.diff(envelope)
    tolerance = GRID_TOLERANCE * max(1.0, float(np.max(np.abs(envelope))))
    monotone = bool(np.all(steps <= tolerance) or np.all(steps >= -tolerance))
    verdict = Verdict.VERIFIED if monotone else Verdict.INCONCLUSIVE
    _logger.debug(
        "Paley-Wiener order of %s: %.6g ± %.3g",
        u.provenance,
        order,
        stderr,
    )
    return PaleyWienerOrder(
        order, (order - 2 * stderr, order + 2 * stderr), verdict
    )


# ----------------------------------------------------------------------
# --- Slow decrease ----------------------------------------------------
# ----------------------------------------------------------------------


@dataclasses.dataclass(frozen=True, kw_only=True, slots=True)
class SlowDecreaseReport:
    """Result of :func:`slow_decrease_check`.

    Parameters
    ----------
    verdict
        ``VERIFIED`` iff some ladder constant works at every tested
        frequency.
    A_star
        Least ladder constant verified everywhere, ``None`` if none.
    ladder
        The tested constants.
    witnesses
        Representative frequencies violating the bound for every
        tested constant, one per connected run of violations.
    excluded
        Number of tested frequencies whose ball left the window for
        some constant.
    curves
        ``"xi"`` and one ``"margin:<A>"`` curve per constant; the margin
        is ``log sup + A·w(ξ) + log A`` and ``nan`` where excluded.
    notes
        Free-form remarks.
    """

    verdict: Verdict
    A_star: float | None
    ladder: tuple[float, ...]
    witnesses: tuple[float, ...] = ()
    excluded: int = 0
    curves: dict[str, npt.NDArray[np.float64]] = dataclasses.field(
        default_factory=dict
    )
    notes: tuple[str, ...] = ()

    @property
    def holds(self) -> bool:
        """Whether the verdict is ``VERIFIED``."""
        return self.verdict is Verdict.VERIFIED

    def margin(self, a: float) -> npt.NDArray[np.float64]:
        """Margin curve for the ladder constant ``a``."""
        return self.curves[f"margin:{a:g}"]

    def as_dict(self) -> dict[str, typing.Any]:
        """Return a JSON-compatible representation without curves."""
        return jsonable({
            "verdict": self.verdict,
            "A_star": self.A_star,
            "ladder": self.ladder,
            "witnesses": self.witnesses,
            "excluded": self.excluded,
            "notes": self.notes,
        })


def _ball_bounds(
    window: FrequencyWindow,
    xi: npt.NDArray[np.float64],
    radius: npt.NDArray[np.float64],
) -> tuple[npt.NDArray[np.intp], npt.NDArray[np.intp]]:
    lo = np.ceil((xi - radius) / window.step - GRID_TOLERANCE)
    hi = np.floor((xi + radius) / window.step + GRID_TOLERANCE)
    return (
        lo.astype(np.intp) + window.count,
        hi.astype(np.intp) + window.count,
    )


def _representatives(
    indices: npt.NDArray[np.intp],
    score: npt.NDArray[np.float64],
) -> list[int]:
    # One witness per run of consecutive grid indices: the worst point.
    if not indices.size:
        return []
    breaks = np.flatnonzero(np.diff(indices) > 1) + 1
    return [
        int(run[np.argmin(score[run])])
        for run in np.split(np.arange(indices.size), breaks)
    ]


def _worsens(
    window: FrequencyWindow,
    xi: npt.NDArray[np.float64],
    best: npt.NDArray[np.float64],
    failing: npt.NDArray[np.bool_],
) -> bool:
    minima = [
        float(np.min(best[mask & failing]))
        for mask in window.rung_masks(xi)[1:]
        if np.any(mask & failing)
    ]
    return len(minima) >= 2 and minima[-1] < minima[0]  # noqa: PLR2004


def slow_decrease_check(
    u: GridSpectrum,
    w: Weight,
    a_ladder: Iterable[float] = DEFAULT_A_LADDER,
    *,
    xi_min: float = 1.0,
) -> SlowDecreaseReport:
    """Scan ``sup_{|η| ≤ A w(ξ)} |û(ξ+η)| >= A^{-1} e^{-A w(ξ)}``.

    Every grid frequency with ``xi_min < |ξ| <= radius`` is tested for
    each ``A`` of the ladder. Balls leaving the window are excluded.

    Parameters
    ----------
    u
        The spectrum.
    w
        The weight.
    a_ladder
        Strictly increasing positive constants.
    xi_min
        Frequencies with ``|ξ| <= xi_min`` are not tested.

    Returns
    -------
    SlowDecreaseReport
        ``REFUTED`` requires a violation for every constant and margins
        that worsen along the window ladder.

    Raises
    ------
    PreconditionError
        If the window radius is below 100, the ladder is malformed or
        the grid step exceeds a tenth of the smallest ball radius.
    """
    ladder = tuple(float(a) for a in a_ladder)
    window = u.window
    if window.radius < _MIN_SLOW_DECREASE_RADIUS:
        error_message = (
            f"Slow-decrease scans need a window radius of at least "
            f"{_MIN_SLOW_DECREASE_RADIUS:g}, got {window.radius:g}"
        )
        raise PreconditionError(error_message)
    if not ladder or ladder[0] <= 0 or np.any(np.diff(ladder) <= 0):
        error_message = "A ladder must be positive and strictly increasing"
        raise PreconditionError(error_message, witness=ladder)

    grid = window.symmetric()
    tested = np.flatnonzero(np.abs(grid) > xi_min)
    xi = grid[tested]
    weights = w(xi)
    smallest_ball = ladder[0] * float(np.min(weights))
    if window.step > BALL_RESOLUTION * smallest_ball:
        error_message = (
            f"Grid step {window.step:g} exceeds {BALL_RESOLUTION:g} of the "
            f"smallest ball radius {smallest_ball:.4g}"
        )
        raise PreconditionError(error_message, witness=smallest_ball)

    log_values = u.log_magnitude()
    curves: dict[str, npt.NDArray[np.float64]] = {"xi": xi}
    margins = np.empty((len(ladder), xi.size))
    excluded = np.zeros(xi.size, dtype=bool)
    a_star: float | None = None
    every_constant_fails = True
    for row, a in enumerate(ladder):
        lo, hi = _ball_bounds(window, xi, a * weights)
        inside = (lo >= 0) & (hi <= window.size - 1)
        excluded |= ~inside
        sup = range_max(
            log_values,
            np.clip(lo, 0, window.size - 1),
            np.clip(hi, 0, window.size - 1),
        )
        margin = np.where(inside, sup + a * weights + math.log(a), np.nan)
        margins[row] = margin
        curves[f"margin:{a:g}"] = margin
        fails = inside & (margin < -GRID_TOLERANCE)
        every_constant_fails &= bool(fails.any())
        if a_star is None and inside.any() and not fails.any():
            a_star = a
        _logger.debug(
            "Slow decrease of %s at A=%g: %d failures, %d excluded",
            u.provenance,
            a,
            int(fails.sum()),
            int((~inside).sum()),
        )

    usable = ~np.all(np.isnan(margins), axis=0)
    if not usable.any():
        return SlowDecreaseReport(
            verdict=Verdict.INCONCLUSIVE,
            A_star=None,
            ladder=ladder,
            excluded=int(excluded.sum()),
            curves=curves,
            notes=("every ball leaves the window",),
        )

    best = np.full(xi.size, -np.inf)
    best[usable] = np.nanmax(margins[:, usable], axis=0)
    failing = usable & (best < -GRID_TOLERANCE)
    runs = _representatives(tested[failing], best[failing])
    witnesses = tuple(
        float(xi[failing][i]) for i in runs[:_MAX_WITNESSES]
    )

    notes: list[str] = []
    if a_star is not None:
        verdict = Verdict.VERIFIED
        witnesses = ()
    elif every_constant_fails and _worsens(window, xi, best, failing):
        verdict = Verdict.REFUTED
    else:
        verdict = Verdict.INCONCLUSIVE
        notes.append("violations without a worsening trend")

    _logger.info(
        "Slow decrease of %s under %s: %s (A*=%s)",
        u.provenance,
        w.name,
        verdict,
        a_star,
    )
    return SlowDecreaseReport(
        verdict=verdict,
        A_star=a_star,
        ladder=ladder,
        witnesses=witnesses,
        excluded=int(excluded.sum()),
        curves=curves,
        notes=tuple(notes),
    )


def scan_start(
    w: Weight,
    a_ladder: Sequence[float],
    window: FrequencyWindow,
    *,
    floor: float = 16.0,
) -> float:
    """Least grid frequency from which every ball is resolved.

    Frequencies beyond the returned value satisfy the resolution
    requirement of :func:`slow_decrease_check` for the smallest ladder
    constant, so it can be passed as ``xi_min``.

    Raises
    ------
    PreconditionError
        If no frequency of the window qualifies.
    """
    grid = window.nonnegative()
    resolved = window.step <= BALL_RESOLUTION * a_ladder[0] * w(grid)
    usable = np.flatnonzero(resolved & (grid >= floor))
    if not usable.size:
        error_message = (
            f"Grid step {window.step:g} is too coarse for the balls of "
            f"{w.name}"
        )
        raise PreconditionError(error_message)
    return float(grid[usable[0]])


def equivalence_perturbation(
    u: GridSpectrum,
    v: GridSpectrum,
    w: Weight,
    a_ladder: Iterable[float] = DEFAULT_A_LADDER,
    *,
    xi_min: float = 1.0,
) -> VerdictReport:
    """Compare the slow-decrease verdicts of ``û`` and ``û + v̂``.

    ``v̂`` is expected to decay faster than every ``e^{-Aw}``, in which
    case both verdicts coincide.
    """
    ladder = tuple(a_ladder)
    base = slow_decrease_check(u, w, ladder, xi_min=xi_min)
    perturbed = slow_decrease_check(u.added(v), w, ladder, xi_min=xi_min)
    definite = {Verdict.VERIFIED, Verdict.REFUTED}
    if base.verdict is perturbed.verdict:
        verdict = Verdict.VERIFIED
    elif base.verdict in definite and perturbed.verdict in definite:
        verdict = Verdict.REFUTED
    else:
        verdict = Verdict.INCONCLUSIVE
    return VerdictReport(
        name="equivalence-perturbation",
        verdict=verdict,
        certificate={
            "base": base.verdict,
            "perturbed": perturbed.verdict,
            "base_A_star": base.A_star,
            "perturbed_A_star": perturbed.A_star,
        },
    )


def _build_default_catalog() -> Catalog[PhysicalModel]:
    catalog: Catalog[PhysicalModel] = Catalog("model")
    catalog.register("dirac", dirac, usage="dirac")
    catalog.register(
        "indicator",
        lambda a="1": indicator(float(a)),
        usage="indicator[:<a>]",
    )
    catalog.register(
        "triangle",
        lambda a="1": triangle(float(a)),
        usage="triangle[:<a>]",
    )
    catalog.register(
        "gaussian",
        lambda sigma="1": gaussian(float(sigma)),
        usage="gaussian[:<sigma>]",
    )
    catalog.register(
        "laplace",
        lambda b="1": laplace(float(b)),
        usage="laplace[:<b>]",
    )
    return catalog


default_model_catalog = _build_default_catalog()


def resolve_model(keys: str | Sequence[str]) -> PhysicalModel:
    """Model named by a catalog key, or the sum of several keyed models."""
    if isinstance(keys, str):
        return default_model_catalog.resolve(keys)
    models = [default_model_catalog.resolve(key) for key in keys]
    if len(models) == 1:
        return models[0]
    return combine([(1.0, model) for model in models])
