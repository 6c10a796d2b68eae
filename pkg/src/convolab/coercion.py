"""Coercion experiments: slow decrease transported through operators.

A family ``G`` of kernels ``a(ξ, η)`` acts by
``A_a f(ξ) = (2π)^{-1} ∫ a(ξ, η) f(η) dη``. When the family is bounded,
its off-diagonal tails decay fast enough and ``inf_a |A_a f|`` decreases
slowly for ``w``, then ``f`` decreases slowly for ``w'``.
:func:`lemma2_scan` runs that chain on a window;
:func:`coercion_experiment` builds the family from a symbol, either from
Ehrenpreis units (condition ``q_L(a w') >= b w``) or from a single
cutoff (condition ``Γ ∘ w' ≻ w``).
"""

import dataclasses
import logging
import math
import typing

import numpy as np
import numpy.typing as npt
import scipy.integrate

from convolab.constants import (
    DEFAULT_A_LADDER,
    DEFAULT_N_MAX,
    GRID_TOLERANCE,
    TREND_FACTOR,
)
from convolab.dcclasses import q_L_values, star_condition
from convolab.exceptions import PreconditionError
from convolab.mollifiers import (
    cutoff_lower_bound,
    ehrenpreis_units,
    gevrey_bump,
    plateau,
    unit_derivative_bounds,
    unit_norm_bound,
)
from convolab.spectra import (
    GridSpectrum,
    fourier_of,
    scan_start,
    slow_decrease_check,
    w_norm,
)
from convolab.symbols import bracket, kernel_of, weight_integral
from convolab.utilities import range_max
from convolab.verdicts import (
    BoundReport,
    Verdict,
    VerdictReport,
    combine,
    jsonable,
)
from convolab.weights import compare

if typing.TYPE_CHECKING:
    from collections.abc import Callable, Mapping, Sequence

    from convolab.dcclasses import DCSequence
    from convolab.grids import FrequencyWindow
    from convolab.mollifiers import BumpModel, UnitSequence
    from convolab.spectra import PhysicalModel
    from convolab.symbols import KernelModel, SymbolModel
    from convolab.weights import DominationVerdict, Weight

_logger = logging.getLogger(__name__)

type Profile = Callable[[npt.NDArray[np.float64]], npt.NDArray[np.float64]]

_TAIL_NOISE: typing.Final[float] = 1e-12
_C_LADDER: typing.Final[tuple[float, ...]] = tuple(
    2.0 ** (k / 4) for k in range(-16, 65)
)
_LAMBDA0_STEPS: typing.Final[tuple[float, ...]] = tuple(
    k / 2 for k in range(1, 17)
)
_EXTRA_LAMBDAS: typing.Final[tuple[float, ...]] = (2.0, 4.0)
_MOLLIFIER_BETA: typing.Final[float] = 0.5
_MOLLIFIER_RADIUS: typing.Final[float] = 0.5
_PLATEAU_MARGIN: typing.Final[float] = 1.0
_UNIT_ALPHA_MAX: typing.Final[int] = 4
_NORM_SLACK: typing.Final[float] = 1e-6
_NORM_WIDENING: typing.Final[int] = 4
_BOUND_SCALES: typing.Final[tuple[float, ...]] = tuple(
    2.0**k for k in range(-2, 11)
)

DEFAULT_LAMBDA_LADDER: typing.Final[tuple[float, ...]] = (1.0, 2.0, 4.0)
"""Exponents ``λ`` tested by the tail estimate."""

DEFAULT_RHO_LADDER: typing.Final[tuple[float, ...]] = (
    0.25,
    0.5,
    1.0,
    2.0,
    4.0,
    8.0,
)
"""Ball factors ``ρ`` tried for the tail estimate."""


# ----------------------------------------------------------------------
# --- Families and reports ---------------------------------------------
# ----------------------------------------------------------------------


@dataclasses.dataclass(frozen=True, eq=False, slots=True)
class KernelFamily:
    """A finite family of kernels on one window.

    Parameters
    ----------
    name
        Human-readable name.
    members
        The kernels; all share the window of the first.

    Raises
    ------
    PreconditionError
        If the family is empty.
    ShapeError
        If two members live on different windows.
    """

    name: str
    members: tuple[KernelModel, ...]

    def __post_init__(self) -> None:
        if not self.members:
            error_message = f"Kernel family {self.name} is empty"
            raise PreconditionError(error_message)
        for member in self.members[1:]:
            self.window.ensure_same(member.window)

    @property
    def window(self) -> FrequencyWindow:
        """The common window."""
        return self.members[0].window

    def apply(self, f: GridSpectrum) -> npt.NDArray[np.complex128]:
        """Rows ``A_a f`` for every member, stacked."""
        self.window.ensure_same(f.window)
        xi = f.xi
        return np.stack([
            scipy.integrate.trapezoid(
                member.values * f.samples[np.newaxis, :], xi, axis=1
            )
            / (2 * np.pi)
            for member in self.members
        ])

    def bounded(
        self,
        lambda_ladder: Sequence[float],
        w: Weight,
    ) -> VerdictReport:
        """Find, for every ``λ``, a ``Λ`` with ``sup_a [a]_{λ,Λ}`` finite.

        Rows are restricted to half the window radius. ``Λ`` runs over
        ``λ`` and the ladder values above it, then ``2λ`` and ``4λ``.
        """
        row_radius = self.window.radius / 2
        certificate: dict[str, typing.Any] = {}
        flagged_only: list[float] = []
        for lam in lambda_ladder:
            candidates = sorted(
                {lam, *(x for x in lambda_ladder if x > lam)}
                | {factor * lam for factor in _EXTRA_LAMBDAS}
            )
            found = False
            saw_flag = False
            for Lambda in candidates:  # noqa: N806
                values = [
                    bracket(member, lam, Lambda, w, row_radius=row_radius)
                    for member in self.members
                ]
                if any(not math.isfinite(v.value) for v in values):
                    continue
                if any(v.lower_bound_only for v in values):
                    saw_flag = True
                    continue
                certificate[f"{lam:g}"] = {
                    "Lambda": Lambda,
                    "sup": max(v.value for v in values),
                }
                found = True
                break
            if not found and saw_flag:
                flagged_only.append(lam)
            elif not found:
                return VerdictReport(
                    name="family-bounded",
                    verdict=Verdict.REFUTED,
                    certificate=certificate,
                    witnesses=(lam,),
                )

        if flagged_only:
            return VerdictReport(
                name="family-bounded",
                verdict=Verdict.INCONCLUSIVE,
                certificate=certificate,
                witnesses=tuple(flagged_only),
                notes=("brackets tail-limited on the window",),
            )
        _logger.debug("Family %s bounded: %s", self.name, certificate)
        return VerdictReport(
            name="family-bounded",
            verdict=Verdict.VERIFIED,
            certificate=certificate,
        )


@dataclasses.dataclass(frozen=True, eq=False, kw_only=True, slots=True)
class CoercionReport:
    """Outcome of a coercion scan.

    Parameters
    ----------
    name
        Name of the experiment.
    inputs
        Names of the weights, the symbol, the family and the input.
    steps
        Verdicts of ``"family_bounded"``, ``"tail_estimate"``,
        ``"main_estimate"``, ``"inf_slow_decrease"`` and
        ``"conclusion"``, plus experiment-specific steps.
    certificates
        Constants found along the way (``λ0``, ``ρ`` per ``λ``, ``C``,
        ``A_star``).
    checks
        Reports of the individual steps.
    curves
        Window curves for CSV export.
    notes
        Free-form remarks, e.g. a withheld conclusion.
    """

    name: str
    inputs: dict[str, typing.Any]
    steps: dict[str, Verdict]
    certificates: dict[str, typing.Any] = dataclasses.field(
        default_factory=dict
    )
    checks: tuple[VerdictReport | BoundReport, ...] = ()
    curves: dict[str, npt.NDArray[np.float64]] = dataclasses.field(
        default_factory=dict
    )
    notes: tuple[str, ...] = ()

    @property
    def conclusion(self) -> Verdict:
        """Verdict on the slow decrease of the input for ``w'``."""
        return self.steps["conclusion"]

    @property
    def verdict(self) -> Verdict:
        """The conclusion; kept for uniform report handling."""
        return self.conclusion

    def as_dict(self) -> dict[str, typing.Any]:
        """Return a JSON-compatible representation without curves."""
        return jsonable({
            "name": self.name,
            "inputs": self.inputs,
            "steps": self.steps,
            "certificates": self.certificates,
            "checks": [check.as_dict() for check in self.checks],
            "notes": self.notes,
        })


# ----------------------------------------------------------------------
# --- Lemma scan -------------------------------------------------------
# ----------------------------------------------------------------------


def _tail_curves(
    family: KernelFamily,
    rows: npt.NDArray[np.intp],
    radii: npt.NDArray[np.float64],
    weight: npt.NDArray[np.float64],
) -> npt.NDArray[np.float64]:
    """``inf_a ∫_{|η-ξ| > radius} |a| e^{λ0 w(η)} dη`` on the given rows.

    Tails below the noise floor of a row count as zero; rows whose
    tail region leaves the window are ``nan``.
    """
    xi = family.window.symmetric()
    distance = np.abs(xi[np.newaxis, :] - xi[rows, np.newaxis])
    outside = distance > radii[:, np.newaxis]
    inside = xi[rows] + radii < xi[-1]
    inside &= xi[rows] - radii > xi[0]
    best = np.full(rows.size, np.inf)
    for member in family.members:
        integrand = np.abs(member.values[rows]) * weight[np.newaxis, :]
        total = scipy.integrate.trapezoid(integrand, xi, axis=1)
        tail = scipy.integrate.trapezoid(
            np.where(outside, integrand, 0.0), xi, axis=1
        )
        tail = np.where(tail <= _TAIL_NOISE * total, 0.0, tail)
        best = np.minimum(best, tail)
    return np.where(inside, best, np.nan)


def _decays_per_rung(
    window: FrequencyWindow,
    xi: npt.NDArray[np.float64],
    values: npt.NDArray[np.float64],
) -> bool | None:
    """Whether rung maxima fall by ``TREND_FACTOR`` per rung.

    ``None`` when fewer than two rungs carry finite values.
    """
    maxima = [
        float(np.max(values[mask]))
        for mask in window.rung_masks(xi)
        if np.any(mask & np.isfinite(values))
        and np.all(np.isfinite(values[mask]))
    ]
    if len(maxima) < 2:  # noqa: PLR2004
        return None
    return all(
        after == 0 or after <= before / TREND_FACTOR
        for before, after in zip(maxima, maxima[1:], strict=False)
    )


def _log_decays_per_rung(
    window: FrequencyWindow,
    xi: npt.NDArray[np.float64],
    log_values: npt.NDArray[np.float64],
) -> bool | None:
    """:func:`_decays_per_rung` for a curve given by its logarithm."""
    maxima = [
        float(np.max(log_values[mask]))
        for mask in window.rung_masks(xi)
        if mask.any()
    ]
    if len(maxima) < 2:  # noqa: PLR2004
        return None
    drop = math.log(TREND_FACTOR)
    return all(
        after == -math.inf or after <= before - drop
        for before, after in zip(maxima, maxima[1:], strict=False)
    )


def _bound_trend(  # noqa: PLR0913
    name: str,
    window: FrequencyWindow,
    xi: npt.NDArray[np.float64],
    w_values: npt.NDArray[np.float64],
    log_decay: Callable[[float], npt.NDArray[np.float64]],
    lambda_ladder: Sequence[float],
) -> VerdictReport:
    """Find, for every ``λ``, a scale with ``λ w - log_decay`` falling.

    The scale runs over ``2^k`` for ``k = -2, ..., 10``; the first one
    whose curve drops by ``TREND_FACTOR`` per rung is recorded.
    """
    found: dict[str, float] = {}
    missing: list[float] = []
    for lam in lambda_ladder:
        outcome = None
        for scale in _BOUND_SCALES:
            with np.errstate(over="ignore", invalid="ignore"):
                curve = lam * w_values - log_decay(scale)
            outcome = _log_decays_per_rung(window, xi, curve)
            if outcome:
                found[f"{lam:g}"] = scale
                break
        if outcome is None:
            return VerdictReport(
                name=name,
                verdict=Verdict.INCONCLUSIVE,
                notes=("fewer than two rungs on the rows",),
            )
        if not outcome:
            missing.append(lam)
    if missing:
        return VerdictReport(
            name=name,
            verdict=Verdict.REFUTED,
            certificate={"scale": found},
            witnesses=tuple(missing),
            notes=("no scale makes the bound beat e^{-λ w}",),
        )
    _logger.debug("Bound %s decays with scales %s", name, found)
    return VerdictReport(
        name=name, verdict=Verdict.VERIFIED, certificate={"scale": found}
    )


def _ball_sup(
    f: GridSpectrum,
    rows: npt.NDArray[np.intp],
    radii: npt.NDArray[np.float64],
) -> npt.NDArray[np.float64]:
    window = f.window
    reach = np.floor(radii / window.step).astype(np.intp)
    lo = np.clip(rows - reach, 0, window.size - 1)
    hi = np.clip(rows + reach, 0, window.size - 1)
    return range_max(f.magnitude(), lo, hi)


def lemma2_scan(  # noqa: PLR0913, PLR0915
    G: KernelFamily,  # noqa: N803
    f: GridSpectrum,
    w: Weight,
    w_prime: Weight,
    lambda0: float,
    lambda_ladder: Sequence[float] = DEFAULT_LAMBDA_LADDER,
    rho_ladder: Sequence[float] = DEFAULT_RHO_LADDER,
    *,
    prior_steps: Mapping[str, Verdict] | None = None,
) -> CoercionReport:
    """Transport slow decrease from ``inf_a |A_a f|`` to ``f``.

    Parameters
    ----------
    G
        Kernel family on the window of ``f``.
    f
        The spectrum under test.
    w, w_prime
        Weight of the hypothesis and of the conclusion.
    lambda0
        Exponent of the growth allowance ``e^{λ0 w(η)}`` in the tails.
    lambda_ladder
        Decay exponents ``λ`` the tails must beat.
    rho_ladder
        Ball factors ``ρ`` tried for each ``λ``.
    prior_steps
        Verdicts of steps run before the scan, e.g. by
        :func:`coercion_experiment`. They lead the step table and gate
        the conclusion like the scan's own steps.

    Returns
    -------
    CoercionReport
        The conclusion is a slow-decrease verdict on ``f`` for ``w'``
        when every step holds, and ``INCONCLUSIVE`` (withheld)
        otherwise.
    """
    window = G.window
    window.ensure_same(f.window)
    xi = window.symmetric()
    rows = np.flatnonzero(np.abs(xi) <= window.radius / 2)
    row_xi = xi[rows]
    w_rows = w(row_xi)
    with np.errstate(over="ignore"):
        allowance = np.exp(lambda0 * w(xi))
    checks: list[VerdictReport | BoundReport] = []
    steps: dict[str, Verdict] = dict(prior_steps or {})
    certificates: dict[str, typing.Any] = {"lambda0": lambda0}
    curves: dict[str, npt.NDArray[np.float64]] = {"xi": row_xi}
    notes: list[str] = []

    bounded = G.bounded(lambda_ladder, w)
    checks.append(bounded)
    steps["family_bounded"] = bounded.verdict

    # Tails beyond ρ w'(ξ), weighted by e^{λ w(ξ)}.
    rho_for: dict[str, float] = {}
    for lam in lambda_ladder:
        for rho in rho_ladder:
            radii = rho * w_prime(row_xi)
            tails = _tail_curves(G, rows, radii, allowance)
            with np.errstate(over="ignore", invalid="ignore"):
                scaled = tails * np.exp(lam * w_rows)
            if _decays_per_rung(window, row_xi, scaled):
                rho_for[f"{lam:g}"] = rho
                curves[f"tail:{lam:g}"] = scaled
                break
    missing = [lam for lam in lambda_ladder if f"{lam:g}" not in rho_for]
    tail_report = VerdictReport(
        name="tail-estimate",
        verdict=Verdict.VERIFIED if not missing else Verdict.REFUTED,
        certificate={"rho": rho_for},
        witnesses=tuple(missing),
        notes=() if not missing else ("no ρ achieves the decay trend",),
    )
    checks.append(tail_report)
    steps["tail_estimate"] = tail_report.verdict
    certificates["rho"] = rho_for

    images = np.abs(G.apply(f))
    infimum = np.min(images, axis=0)
    curves["inf_A_f"] = infimum[rows]

    # inf_a |A_a f| <= C e^{C w} (sup_ball |f| + ‖f‖ e^{-λ w}).
    if rho_for:
        lam = max(float(k) for k in rho_for)
        rho = rho_for[f"{lam:g}"]
        with np.errstate(under="ignore"):
            f_norm = float(np.max(f.magnitude() / allowance))
            ball = _ball_sup(f, rows, rho * w_prime(row_xi))
            rhs = ball + f_norm * np.exp(-lam * w_rows)
        with np.errstate(divide="ignore"):
            log_ratio = np.log(infimum[rows]) - np.log(rhs)
        workable = next(
            (
                c
                for c in _C_LADDER
                if np.all(math.log(c) + c * w_rows >= log_ratio)
            ),
            None,
        )
        main = VerdictReport(
            name="main-estimate",
            verdict=(
                Verdict.VERIFIED if workable is not None else Verdict.REFUTED
            ),
            certificate={"C": workable, "lambda": lam, "rho": rho},
        )
        certificates["C"] = workable
    else:
        main = VerdictReport(
            name="main-estimate",
            verdict=Verdict.INCONCLUSIVE,
            notes=("no certified tail estimate",),
        )
    checks.append(main)
    steps["main_estimate"] = main.verdict

    inf_spectrum = GridSpectrum(
        window=window,
        samples=infimum.astype(np.complex128),
        provenance=f"inf over {G.name}",
    )
    inf_scan = slow_decrease_check(
        inf_spectrum,
        w,
        DEFAULT_A_LADDER,
        xi_min=scan_start(w, DEFAULT_A_LADDER, window),
    )
    steps["inf_slow_decrease"] = inf_scan.verdict
    certificates["inf_A_star"] = inf_scan.A_star

    prerequisites = (
        *(prior_steps or {}),
        "family_bounded",
        "tail_estimate",
        "main_estimate",
        "inf_slow_decrease",
    )
    if all(steps[key] is Verdict.VERIFIED for key in prerequisites):
        conclusion = slow_decrease_check(
            f,
            w_prime,
            DEFAULT_A_LADDER,
            xi_min=scan_start(w_prime, DEFAULT_A_LADDER, window),
        )
        steps["conclusion"] = conclusion.verdict
        certificates["A_star"] = conclusion.A_star
    else:
        steps["conclusion"] = Verdict.INCONCLUSIVE
        failed = [
            key for key in prerequisites if steps[key] is not Verdict.VERIFIED
        ]
        notes.append(f"conclusion withheld: {', '.join(failed)}")

    _logger.info(
        "Lemma scan of %s over %s: %s",
        f.provenance,
        G.name,
        steps["conclusion"],
    )
    return CoercionReport(
        name="lemma2",
        inputs={
            "family": G.name,
            "f": f.provenance,
            "w": w.name,
            "w_prime": w_prime.name,
        },
        steps=steps,
        certificates=certificates,
        checks=tuple(checks),
        curves=curves,
        notes=tuple(notes),
    )


# ----------------------------------------------------------------------
# --- Experiments ------------------------------------------------------
# ----------------------------------------------------------------------


@dataclasses.dataclass(frozen=True, slots=True)
class StarCondition:
    """Condition ``q_L(a w'(ξ)) >= b w(ξ)``; families from Ehrenpreis units."""

    L: DCSequence
    b: float = 1.0


@dataclasses.dataclass(frozen=True, slots=True)
class DoubleStarCondition:
    """Condition ``Γ ∘ w' ≻ w`` with ``Γ`` nondecreasing; one cutoff."""

    gamma: Profile
    name: str = "Γ"


def condition_double_star(
    gamma_profile: Profile,
    w: Weight,
    w_prime: Weight,
    win: FrequencyWindow,
    *,
    name: str = "Γ",
) -> DominationVerdict:
    """Decide ``Γ ∘ w' ≻ w`` on the window."""
    composed = w_prime.compose(gamma_profile, name=name)
    return compare(composed, w, "dominates", win)


def choose_lambda0(order: float, w: Weight, win: FrequencyWindow) -> float:
    """Least ``λ0 = m + k/2`` with ``∫ e^{(m - λ0) w}`` finite.

    Raises
    ------
    PreconditionError
        If no step up to ``m + 8`` makes the integral finite.
    """
    for step in _LAMBDA0_STEPS:
        _, finite = weight_integral(-step, w, win)
        if finite:
            return order + step
    error_message = f"∫ e^{{-λ w}} diverges under {w.name} for λ <= 8"
    raise PreconditionError(error_message)


def _as_report(name: str, verdict: DominationVerdict) -> VerdictReport:
    return VerdictReport(
        name=name,
        verdict=Verdict.VERIFIED if verdict.holds else Verdict.REFUTED,
        certificate=verdict.as_dict(),
        witnesses=verdict.witnesses,
    )


def _family_norm_chain(  # noqa: PLR0913
    units: UnitSequence,
    family: KernelFamily,
    reference: KernelModel,
    lambda_ladder: Sequence[float],
    w: Weight,
    win: FrequencyWindow,
) -> VerdictReport:
    """Check the bracket chain of the units against an outer cutoff.

    The bound reads
    ``sup_N [a_{χ_N p}]_{λ,Λ} <= ‖Φ‖_Λ^w [a_{ψ'p}]_{λ,Λ} / 2π``.

    ``ψ'`` is equal to one on every unit, so ``a_{χ_N p}`` is the
    convolution of ``χ̂_N`` with ``a_{ψ'p}`` in the row variable. ``Λ``
    runs over the candidates of :meth:`KernelFamily.bounded`; ``‖Φ‖``
    is read on a widened window.
    """
    row_radius = win.radius / 2
    plateau_spectrum = units.plateau.spectrum(win.widened(_NORM_WIDENING))
    certificate: dict[str, typing.Any] = {}
    undecided: list[float] = []
    violated: list[float] = []
    for lam in lambda_ladder:
        candidates = sorted(
            {lam, *(x for x in lambda_ladder if x > lam)}
            | {factor * lam for factor in _EXTRA_LAMBDAS}
        )
        for Lambda in candidates:  # noqa: N806
            outer = bracket(reference, lam, Lambda, w, row_radius=row_radius)
            norm_phi = w_norm(plateau_spectrum, Lambda, w)
            if outer.lower_bound_only or norm_phi.lower_bound_only:
                continue
            values = [
                bracket(member, lam, Lambda, w, row_radius=row_radius)
                for member in family.members
            ]
            if any(v.lower_bound_only for v in values):
                continue
            bound = norm_phi.value * outer.value / (2 * np.pi)
            top = max(v.value for v in values)
            certificate[f"{lam:g}"] = {
                "Lambda": Lambda,
                "sup": top,
                "bound": bound,
            }
            if top > bound * (1 + _NORM_SLACK):
                violated.append(lam)
            break
        else:
            undecided.append(lam)

    if violated:
        verdict = Verdict.REFUTED
    elif undecided:
        verdict = Verdict.INCONCLUSIVE
    else:
        verdict = Verdict.VERIFIED
    return VerdictReport(
        name="family-norm",
        verdict=verdict,
        certificate=certificate,
        witnesses=tuple(violated or undecided),
        notes=("brackets tail-limited on the window",) if undecided else (),
    )


def _star_family(  # noqa: PLR0913
    condition: StarCondition,
    p: SymbolModel,
    psi: BumpModel,
    u_physical: PhysicalModel,
    w: Weight,
    w_prime: Weight,
    win: FrequencyWindow,
    *,
    n_max: int,
    lambda_ladder: Sequence[float],
) -> tuple[KernelFamily, dict[str, Verdict], list[VerdictReport | BoundReport]]:
    star = star_condition(condition.L, w, w_prime, condition.b, win)
    if not star.holds:
        error_message = (
            f"Condition q_L(a w') >= {condition.b:g} w fails for "
            f"L={condition.L.name}, w={w.name}, w'={w_prime.name}"
        )
        raise PreconditionError(error_message, witness=star.witnesses)

    lam = lambda_ladder[0]
    core = psi.radius + _PLATEAU_MARGIN
    units = ehrenpreis_units(
        plateau(core, core + _PLATEAU_MARGIN),
        gevrey_bump(_MOLLIFIER_BETA, radius=_MOLLIFIER_RADIUS).normalized(),
        n_max,
    )
    derivatives = unit_derivative_bounds(units, min(_UNIT_ALPHA_MAX, n_max))
    norms = unit_norm_bound(units, lam, w, win)
    cutoffs = [
        cutoff_lower_bound(u_physical, chi, psi, lam, w, win)
        for chi in units.members
    ]
    family = KernelFamily(
        f"a[χ_N,{p.name}]",
        tuple(kernel_of(chi, p, win) for chi in units.members),
    )

    # The outer cutoff is one on [-core - 2, core + 2], beyond every unit.
    outer = plateau(core + 2 * _PLATEAU_MARGIN, core + 3 * _PLATEAU_MARGIN)
    chain = _family_norm_chain(
        units, family, kernel_of(outer, p, win), lambda_ladder, w, win
    )

    # e^{-q_L(a ρ w'(ξ))} = inf_N (L_N / (a ρ w'(ξ)))^N with a from (*).
    a = float(star.certificate["a"])
    xi = win.symmetric()
    row_xi = xi[np.abs(xi) <= win.radius / 2]
    inner = w_prime(row_xi)
    tail = _bound_trend(
        "analytic-tail-bound",
        win,
        row_xi,
        w(row_xi),
        lambda rho: q_L_values(condition.L, a * rho * inner),
        lambda_ladder,
    )
    steps = {
        "condition": star.verdict,
        "units": combine([derivatives.verdict, norms.verdict]),
        "cutoff": combine(report.verdict for report in cutoffs),
        "family_norm": chain.verdict,
        "tail_bound": tail.verdict,
    }
    checks: list[VerdictReport | BoundReport] = [
        star,
        derivatives,
        norms,
        *cutoffs,
        chain,
        tail,
    ]
    return family, steps, checks


def _double_star_family(  # noqa: PLR0913
    condition: DoubleStarCondition,
    p: SymbolModel,
    psi: BumpModel,
    w: Weight,
    w_prime: Weight,
    win: FrequencyWindow,
    *,
    lambda_ladder: Sequence[float],
) -> tuple[KernelFamily, dict[str, Verdict], list[VerdictReport | BoundReport]]:
    domination = condition_double_star(
        condition.gamma, w, w_prime, win, name=condition.name
    )
    if not domination.holds:
        error_message = (
            f"Condition {condition.name}∘w' ≻ w fails for w={w.name}, "
            f"w'={w_prime.name}"
        )
        raise PreconditionError(error_message, witness=domination.witnesses)

    # Tails of ψ̂ beyond ρ w'(ξ), ρ >= 1, are below C_κ e^{-κ Γ(w'(ξ))}
    # for every κ, as Γ is nondecreasing.
    xi = win.symmetric()
    row_xi = xi[np.abs(xi) <= win.radius / 2]
    composed = np.asarray(condition.gamma(w_prime(row_xi)), dtype=np.float64)
    tail = _bound_trend(
        "gamma-tail-bound",
        win,
        row_xi,
        w(row_xi),
        lambda kappa: kappa * composed,
        lambda_ladder,
    )
    family = KernelFamily(f"a[{psi.name},{p.name}]", (kernel_of(psi, p, win),))
    steps = {"condition": Verdict.VERIFIED, "tail_bound": tail.verdict}
    return family, steps, [_as_report("double-star", domination), tail]


def coercion_experiment(  # noqa: PLR0913
    kind: StarCondition | DoubleStarCondition,
    p: SymbolModel,
    psi: BumpModel,
    u_physical: PhysicalModel,
    w: Weight,
    w_prime: Weight,
    win: FrequencyWindow,
    *,
    n_max: int = DEFAULT_N_MAX,
    lambda_ladder: Sequence[float] = DEFAULT_LAMBDA_LADDER,
    rho_ladder: Sequence[float] = DEFAULT_RHO_LADDER,
) -> CoercionReport:
    """Run the coercion chain for ``p(x, D)u`` localised by ``ψ``.

    With :class:`StarCondition` the family is ``{a_{χ_N p}}`` over
    Ehrenpreis units equal to one around ``supp ψ``. Extra steps cover
    the condition, the units, the cutoff lower bound for ``u``, the
    bracket chain through ``‖Φ‖`` and the ``q_L`` tail bound. With
    :class:`DoubleStarCondition` the family is the single kernel
    ``a_{ψp}`` and the extra steps are the condition and the ``Γ`` tail
    bound. Both then run :func:`lemma2_scan` on ``û``, which withholds
    the conclusion unless every step is verified.

    The region where ``p(x, D)u`` fails to be smooth is taken to be
    ``supp ψ``; reports record this as an assumption.

    Raises
    ------
    PreconditionError
        If the selected condition fails on the window, or no ``λ0``
        makes ``∫ e^{(m - λ0) w}`` finite.
    """
    lambda0 = choose_lambda0(p.order, w, win)
    match kind:
        case StarCondition():
            family, extra_steps, extra_checks = _star_family(
                kind,
                p,
                psi,
                u_physical,
                w,
                w_prime,
                win,
                n_max=n_max,
                lambda_ladder=lambda_ladder,
            )
            label = "star"
        case DoubleStarCondition():
            family, extra_steps, extra_checks = _double_star_family(
                kind, p, psi, w, w_prime, win, lambda_ladder=lambda_ladder
            )
            label = "double-star"

    _logger.info(
        "Coercion experiment %s for %s on %s", label, p.name, u_physical.name
    )
    f = fourier_of(u_physical, win)
    report = lemma2_scan(
        family,
        f,
        w,
        w_prime,
        lambda0,
        lambda_ladder,
        rho_ladder,
        prior_steps=extra_steps,
    )
    return dataclasses.replace(
        report,
        name=f"coercion-{label}",
        inputs=report.inputs
        | {"symbol": p.name, "psi": psi.name, "u": u_physical.name},
        checks=(*extra_checks, *report.checks),
        notes=(
            *report.notes,
            f"singular support of p(x,D)u assumed inside supp {psi.name}",
        ),
    )


# ----------------------------------------------------------------------
# --- Gevrey parameter map ---------------------------------------------
# ----------------------------------------------------------------------


@dataclasses.dataclass(frozen=True, slots=True)
class GevreyRelation:
    """Which theorem covers a Gevrey triple ``(a, r, s)``.

    Parameters
    ----------
    coercive_claim
        ``a·s >= r``: multipliers of index ``a`` carry ``|ξ|^r`` slow
        decrease over to ``|ξ|^s``.
    counterexample_exists
        ``a < r/s``: :func:`~convolab.counterexamples.gevrey_counterexample`
        applies.
    analytic
        ``a = 1``, where the coercive claim reads ``s >= r``.

    Exactly one of the first two flags holds.
    """

    coercive_claim: bool
    counterexample_exists: bool
    analytic: bool = False

    def as_dict(self) -> dict[str, typing.Any]:
        """Return a JSON-compatible representation."""
        return dataclasses.asdict(self)


def gevrey_relation(a: float, r: float, s: float) -> GevreyRelation:
    """Classify ``(a, r, s)`` with ``0 < r, s < 1`` and ``0 < a <= 1``.

    Raises
    ------
    PreconditionError
        If a parameter leaves its range.
    """
    if not (0 < r < 1 and 0 < s < 1 and 0 < a <= 1):
        error_message = "Need 0 < r, s < 1 and 0 < a <= 1"
        raise PreconditionError(error_message, witness=(a, r, s))
    # One rounded quantity decides both flags; a*s >= r and a < r/s are
    # complementary.
    gap = a * s - r
    coercive = gap >= -GRID_TOLERANCE
    counterexample = not coercive
    return GevreyRelation(
        coercive_claim=coercive,
        counterexample_exists=counterexample,
        analytic=a == 1,
    )
