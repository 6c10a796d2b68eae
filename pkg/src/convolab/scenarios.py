"""Named end-to-end scenarios and the registry the CLI runs them from.

Each scenario reads its parameters from a
:class:`~convolab.config.ScenarioConfig`, runs the library checks and
returns a :class:`~convolab.reports.ScenarioResult`. Scenarios register
themselves on a :class:`ScenarioRegistry` with a decorator::

    @registry.scenario("sandwich", anchors=("sandwich-bounds",))
    def sandwich(config: ScenarioConfig) -> ScenarioResult: ...
"""

import dataclasses
import datetime
import itertools
import logging
import math
import time
import typing

import numpy as np

from convolab.coercion import (
    DEFAULT_LAMBDA_LADDER,
    DEFAULT_RHO_LADDER,
    DoubleStarCondition,
    StarCondition,
    coercion_experiment,
    gevrey_relation,
)
from convolab.constants import DEFAULT_A_LADDER, DEFAULT_N_MAX
from convolab.counterexamples import (
    IntervalFamily,
    default_window,
    general_counterexample,
    geometric_centers,
    gevrey_counterexample,
    sandwich_check,
)
from convolab.dcclasses import q_L
from convolab.exceptions import ConfigError
from convolab.mollifiers import (
    ehrenpreis_units,
    gevrey_bump,
    unit_derivative_bounds,
    unit_norm_bound,
)
from convolab.reports import ScenarioResult, write_report
from convolab.spectra import (
    GridSpectrum,
    fourier_of,
    pw_order,
    resolve_model,
    scan_start,
    slow_decrease_check,
)
from convolab.symbols import (
    asymptotic_sum,
    default_symbol_catalog,
    expression_symbol,
    lemma1_check,
    poly_symbol,
)
from convolab.verdicts import Verdict, combine
from convolab.weights import (
    check_membership,
    compare,
    default_weight_catalog,
    gevrey_weight,
)

if typing.TYPE_CHECKING:
    import pathlib
    from collections.abc import Callable, Mapping

    import numpy.typing as npt

    from convolab.config import ScenarioConfig
    from convolab.counterexamples import CounterexampleReport
    from convolab.grids import FrequencyWindow
    from convolab.verdicts import BoundReport

_logger = logging.getLogger(__name__)

type ScenarioHandler = Callable[[ScenarioConfig], ScenarioResult]

_MAX_CURVE_ROWS: typing.Final[int] = 2**14
_Q_L_POINTS: typing.Final[int] = 200
_MAP_STEP: typing.Final[float] = 0.05
_COERCION_RADIUS: typing.Final[float] = 128.0
_COERCION_STEP: typing.Final[float] = 0.125
_MAX_CUTOFF_BETA: typing.Final[float] = 0.95
_VERDICT_KEYS: typing.Final[frozenset[str]] = frozenset(
    verdict.value for verdict in Verdict
)


@dataclasses.dataclass(frozen=True, slots=True)
class Scenario:
    """A registered scenario."""

    name: str
    handler: ScenarioHandler
    anchors: tuple[str, ...] = ()
    summary: str = ""

    def __call__(self, config: ScenarioConfig) -> ScenarioResult:
        result = self.handler(config)
        return dataclasses.replace(result, manifest=self.anchors)


class ScenarioRegistry:
    """Registry mapping scenario names to their handlers.

    Examples
    --------
    >>> registry = ScenarioRegistry()
    >>> @registry.scenario("noop", anchors=("nothing",))
    ... def noop(config: ScenarioConfig) -> ScenarioResult:
    ...     return ScenarioResult(scenario="noop", seed=0, verdicts={})
    """

    def __init__(self) -> None:
        self._scenarios: dict[str, Scenario] = {}

    @property
    def names(self) -> list[str]:
        """Sorted names of the registered scenarios."""
        return sorted(self._scenarios)

    def get(self, name: str) -> Scenario:
        """Scenario registered under ``name``.

        Raises
        ------
        ConfigError
            If no scenario has that name.
        """
        if (scenario := self._scenarios.get(name)) is None:
            error_message = (
                f"Unknown scenario {name!r}; known: {', '.join(self.names)}"
            )
            raise ConfigError(error_message)
        return scenario

    def scenario(
        self,
        name: str,
        *,
        anchors: tuple[str, ...] = (),
        overwrite: bool = False,
    ) -> Callable[[ScenarioHandler], ScenarioHandler]:
        """Register the decorated function as the scenario ``name``.

        Parameters
        ----------
        name
            Name used in configuration files.
        anchors
            Named results the scenario exercises; written to the
            report manifest.
        overwrite
            Whether to replace a scenario of the same name.

        Raises
        ------
        ValueError
            If the name is taken and ``overwrite`` is ``False``.
        """

        def decorator(func: ScenarioHandler) -> ScenarioHandler:
            if name in self._scenarios and not overwrite:
                error_message = f"Scenario {name!r} is already registered"
                raise ValueError(error_message)
            summary = (func.__doc__ or "").strip().splitlines()[:1]
            self._scenarios[name] = Scenario(
                name, func, anchors, summary[0] if summary else ""
            )
            _logger.debug("Registered scenario: %s -> %s", name, func)
            return func

        return decorator


@dataclasses.dataclass(frozen=True, kw_only=True, slots=True)
class RunOutcome:
    """Result of :func:`run` with the report location."""

    result: ScenarioResult
    report_path: pathlib.Path

    @property
    def exit_code(self) -> int:
        """Exit code of the scenario verdict."""
        return self.result.exit_code


default_registry = ScenarioRegistry()


def run(
    config: ScenarioConfig,
    registry: ScenarioRegistry = default_registry,
) -> RunOutcome:
    """Run the configured scenario and write its report.

    Raises
    ------
    ConfigError
        If the scenario is unknown or a setting is invalid.
    ConvolabError
        Any numerical failure of the scenario.
    """
    scenario = registry.get(config.scenario)
    started = datetime.datetime.now(tz=datetime.UTC)
    clock = time.perf_counter()
    _logger.info("Running scenario %s (seed %d)", scenario.name, config.seed)
    result = scenario(config)
    runtime = time.perf_counter() - clock
    path = write_report(
        result, config.output_dir, started=started, runtime_seconds=runtime
    )
    _logger.info(
        "Scenario %s finished in %.2f s: %s",
        scenario.name,
        runtime,
        result.verdict,
    )
    return RunOutcome(result=result, report_path=path)


# ----------------------------------------------------------------------
# --- Helpers ----------------------------------------------------------
# ----------------------------------------------------------------------


def _thin(
    columns: Mapping[str, npt.NDArray[typing.Any]],
) -> dict[str, npt.NDArray[np.float64]]:
    """Keep every k-th row so a table has at most ``2**14`` rows."""
    longest = max((np.size(v) for v in columns.values()), default=0)
    stride = max(1, math.ceil(longest / _MAX_CURVE_ROWS))
    return {
        name: np.real(np.asarray(values)).ravel()[::stride]
        for name, values in columns.items()
    }


def _expected(config: ScenarioConfig, path: str) -> Verdict | None:
    value = config.get(path, None)
    if value is None:
        return None
    if value not in _VERDICT_KEYS:
        error_message = (
            f"Setting {path!r} must be one of {sorted(_VERDICT_KEYS)}"
        )
        raise ConfigError(error_message)
    return Verdict(value)


def _matches(observed: Verdict, expected: Verdict | None) -> Verdict:
    if expected is None or observed is expected:
        return observed if expected is None else Verdict.VERIFIED
    if observed is Verdict.INCONCLUSIVE:
        return Verdict.INCONCLUSIVE
    return Verdict.REFUTED


def _bound_entries(
    reports: Mapping[str, BoundReport],
) -> tuple[dict[str, Verdict], dict[str, float]]:
    verdicts = {key: report.verdict for key, report in reports.items()}
    margins = {key: report.margin_min for key, report in reports.items()}
    return verdicts, margins


# ----------------------------------------------------------------------
# --- Weights and slow decrease ----------------------------------------
# ----------------------------------------------------------------------


@default_registry.scenario(
    "weights-check",
    anchors=("weight-axioms", "associated-function", "weight-domination"),
)
def weights_check(config: ScenarioConfig) -> ScenarioResult:
    """Weight axioms per catalog key, domination pairs and the q_L oracle."""
    window = config.window()
    keys = config.get(
        "weights.keys", ["log", "gevrey:0.5", "affine-log:2", "power-log:0.5"]
    )
    verdicts: dict[str, Verdict] = {}
    results: dict[str, typing.Any] = {"membership": {}, "domination": {}}
    for key in keys:
        membership = check_membership(
            default_weight_catalog.resolve(key), window, seed=config.seed
        )
        verdicts[f"membership:{key}"] = (
            Verdict.VERIFIED if membership.passed else Verdict.REFUTED
        )
        results["membership"][key] = membership.as_dict()

    pairs = config.get("weights.dominates", [["gevrey:0.5", "log"]])
    for upper, lower in pairs:
        domination = compare(
            default_weight_catalog.resolve(upper),
            default_weight_catalog.resolve(lower),
            "dominates",
            window,
        )
        verdicts[f"dominates:{upper}>{lower}"] = (
            Verdict.VERIFIED if domination.holds else Verdict.REFUTED
        )
        results["domination"][f"{upper}>{lower}"] = domination.as_dict()

    # |q_L(t) - t/e| <= 1 for the analytic sequence.
    sequence = config.sequence("weights.sequence", "analytic")
    t = np.geomspace(
        config.number("weights.q_min", 10.0),
        config.number("weights.q_max", 1e4),
        _Q_L_POINTS,
    )
    q = np.array([q_L(sequence, float(value)) for value in t])
    gap = 1 - np.abs(q - t / math.e)
    verdicts["q_L-oracle"] = (
        Verdict.VERIFIED if np.all(gap >= 0) else Verdict.REFUTED
    )
    return ScenarioResult(
        scenario="weights-check",
        seed=config.seed,
        verdicts=verdicts,
        margins={"q_L-oracle": float(np.min(gap))},
        results=results,
        curves={"q_L": {"t": t, "q_L": q, "t_over_e": t / math.e}},
    )


def _spectrum(config: ScenarioConfig, window: FrequencyWindow) -> GridSpectrum:
    if (decay := config.get("spectrum.decay", None)) is not None:
        exponent = float(decay)
        return GridSpectrum.declared(
            window,
            lambda xi: np.exp(-np.abs(xi) ** exponent),
            provenance=f"exp(-|xi|^{exponent:g})",
        )
    model = resolve_model(config.get("spectrum.model", "dirac"))
    return fourier_of(model, window)


@default_registry.scenario(
    "slowdec-scan", anchors=("slow-decrease", "paley-wiener-order")
)
def slowdec_scan(config: ScenarioConfig) -> ScenarioResult:
    """Slow-decrease scan of one spectrum for one weight."""
    window = config.window()
    w = config.weight("slowdec.weight", "log")
    ladder = config.numbers("slowdec.ladder", DEFAULT_A_LADDER)
    u = _spectrum(config, window)
    report = slow_decrease_check(
        u, w, ladder, xi_min=scan_start(w, ladder, window)
    )
    order = pw_order(u, w)
    verdict = _matches(report.verdict, _expected(config, "slowdec.expect"))
    return ScenarioResult(
        scenario="slowdec-scan",
        seed=config.seed,
        verdicts={"slow_decrease": verdict},
        results={
            "spectrum": u.provenance,
            "weight": w.name,
            "slow_decrease": report.as_dict(),
            "pw_order": order.as_dict(),
        },
        curves={"margins": _thin(report.curves)},
    )


# ----------------------------------------------------------------------
# --- Units, symbols and kernels ---------------------------------------
# ----------------------------------------------------------------------


@default_registry.scenario(
    "units-bounds", anchors=("ehrenpreis-units", "unit-norm-bound")
)
def units_bounds(config: ScenarioConfig) -> ScenarioResult:
    """Derivative and norm bounds of an Ehrenpreis unit sequence."""
    window = config.window(radius=1024.0, step=0.125)
    units = ehrenpreis_units(
        config.bump("units.plateau", "plateau:1:2"),
        config.bump("units.mollifier", "gevrey-bump:0.5:0.5").normalized(),
        int(config.number("units.n_max", 6)),
    )
    reports: dict[str, BoundReport] = {
        "derivatives": unit_derivative_bounds(
            units, int(config.number("units.alpha_max", 3))
        )
    }
    for key, lam in itertools.product(
        config.get("units.weights", ["log", "gevrey:0.3"]),
        config.numbers("units.lambdas", (0.5, 1.0, 2.0)),
    ):
        reports[f"norm:{key}:{lam:g}"] = unit_norm_bound(
            units, lam, default_weight_catalog.resolve(key), window
        )
    verdicts, margins = _bound_entries(reports)
    return ScenarioResult(
        scenario="units-bounds",
        seed=config.seed,
        verdicts=verdicts,
        margins=margins,
        results={key: report.as_dict() for key, report in reports.items()},
        curves={
            key: _thin(report.curves)
            for key, report in reports.items()
            if report.curves
        },
    )


@default_registry.scenario(
    "lemma1", anchors=("kernel-bracket-bound", "cutoff-bracket-bound")
)
def lemma1(config: ScenarioConfig) -> ScenarioResult:
    """Both kernel bracket bounds for each configured symbol."""
    window = config.window(radius=512.0, step=0.5)
    w = config.weight("lemma1.weight", "log")
    psi = config.bump("lemma1.psi", "gevrey-bump:0.75")
    psi1 = config.bump("lemma1.psi1", "plateau:1:2")
    big_lambda = config.number("lemma1.Lambda", 2.0)
    reports: dict[str, BoundReport] = {}
    for key, lam in itertools.product(
        config.get("lemma1.symbols", ["poly:1", "sep:exp(x):1"]),
        config.numbers("lemma1.lambdas", (0.0, 1.0)),
    ):
        p = default_symbol_catalog.resolve(key)
        reports[f"{key}@{lam:g}"] = lemma1_check(
            p, psi, psi1, p.order, lam, big_lambda, w, window=window
        )
    verdicts, margins = _bound_entries(reports)
    return ScenarioResult(
        scenario="lemma1",
        seed=config.seed,
        verdicts=verdicts,
        margins=margins,
        results={key: report.as_dict() for key, report in reports.items()},
    )


@default_registry.scenario("prop1-sum", anchors=("asymptotic-sum",))
def prop1_sum(config: ScenarioConfig) -> ScenarioResult:
    """Asymptotic sum of ``(1 + |ξ|)^{-j}`` with certified scales."""
    j_max = int(config.number("sum.j_max", 8))
    terms = [
        expression_symbol(f"(1 + abs(xi))**(-{j})", order=-j, name=f"p_{j}")
        for j in range(j_max + 1)
    ]
    summed = asymptotic_sum(
        terms,
        config.bump("sum.chi", "plateau:1:2"),
        int(config.number("sum.alpha_max", 3)),
    )
    reports = {"grid": summed.report, "refined-grid": summed.refined}
    verdicts, margins = _bound_entries(reports)
    return ScenarioResult(
        scenario="prop1-sum",
        seed=config.seed,
        verdicts=verdicts,
        margins=margins,
        results={
            "epsilons": summed.epsilons,
            "order": summed.order,
            "j0": summed.j0,
            "grid": summed.report.as_dict(),
            "refined-grid": summed.refined.as_dict(),
        },
        curves={"constants": _thin(summed.report.curves)},
    )


# ----------------------------------------------------------------------
# --- Counterexamples --------------------------------------------------
# ----------------------------------------------------------------------


@default_registry.scenario("sandwich", anchors=("sandwich-bounds",))
def sandwich(config: ScenarioConfig) -> ScenarioResult:
    """Sandwich bounds of ``ν ∗ χ_E`` for several densities and families."""
    window = config.window(radius=1000.0, step=2**-4)
    exponent = config.number("sandwich.exponent", 0.5)
    start = config.number("sandwich.start", 10.0)
    reports: dict[str, BoundReport] = {}
    for key, ratio in itertools.product(
        config.get("sandwich.models", ["gaussian:1", "laplace:1"]),
        config.numbers("sandwich.ratios", (2.0, 4.0, 8.0)),
    ):
        centers = geometric_centers(
            window,
            lambda xi: xi**exponent,
            start=start,
            ratio=ratio,
        )
        family = IntervalFamily(
            centers=centers,
            half_widths=tuple(c**exponent for c in centers),
        )
        reports[f"{key}@{ratio:g}"] = sandwich_check(
            resolve_model(key), family, window
        )
    verdicts, margins = _bound_entries(reports)
    return ScenarioResult(
        scenario="sandwich",
        seed=config.seed,
        verdicts=verdicts,
        margins=margins,
        results={key: report.as_dict() for key, report in reports.items()},
        curves={key: _thin(report.curves) for key, report in reports.items()},
    )


def _counterexample_result(
    name: str, config: ScenarioConfig, report: CounterexampleReport
) -> ScenarioResult:
    finite = [m for m in report.eq1_margins if math.isfinite(m)]
    return ScenarioResult(
        scenario=name,
        seed=config.seed,
        verdicts={"construction": report.verdict},
        margins={
            "eq1": min(finite, default=math.nan),
            "eq2": report.eq2_margin_min,
        },
        results=report.as_dict(),
        curves={"window": _thin(report.curves)},
    )


@default_registry.scenario(
    "counterexample-gevrey",
    anchors=(
        "sandwich-bounds",
        "pseudo-measure-bounds",
        "gevrey-counterexample",
    ),
)
def counterexample_gevrey(config: ScenarioConfig) -> ScenarioResult:
    """Gevrey counterexample for the triple ``(a, r, s)``."""
    base = default_window()
    window = config.window(radius=base.radius, step=base.step)
    xi = config.get("gevrey.xi", None)
    report = gevrey_counterexample(
        config.number("gevrey.a"),
        config.number("gevrey.r"),
        config.number("gevrey.s"),
        None if xi is None else [float(x) for x in xi],
        window,
    )
    return _counterexample_result("counterexample-gevrey", config, report)


@default_registry.scenario(
    "counterexample-general",
    anchors=(
        "sandwich-bounds",
        "pseudo-measure-bounds",
        "concave-majorant",
        "general-counterexample",
    ),
)
def counterexample_general(config: ScenarioConfig) -> ScenarioResult:
    """Counterexample for a weight with comparable balls and a class weight."""
    base = default_window()
    window = config.window(radius=base.radius, step=base.step)
    xi = config.get("general.xi", None)
    report = general_counterexample(
        config.weight("general.w", "log"),
        config.weight("general.phi", "gevrey:0.3"),
        window,
        xi_seq=None if xi is None else [float(x) for x in xi],
    )
    return _counterexample_result("counterexample-general", config, report)


# ----------------------------------------------------------------------
# --- Coercion ---------------------------------------------------------
# ----------------------------------------------------------------------


def _coercion_result(
    name: str, config: ScenarioConfig, kind: StarCondition | DoubleStarCondition
) -> ScenarioResult:
    window = config.window(radius=_COERCION_RADIUS, step=_COERCION_STEP)
    report = coercion_experiment(
        kind,
        config.symbol("coercion.symbol", "poly:1"),
        config.bump("coercion.psi", "gevrey-bump:0.5"),
        resolve_model(config.get("coercion.u", ["dirac", "gaussian:1"])),
        config.weight("coercion.w", "log"),
        config.weight("coercion.w_prime", "log"),
        window,
        n_max=int(config.number("coercion.n_max", min(DEFAULT_N_MAX, 4))),
        lambda_ladder=config.numbers(
            "coercion.lambdas", DEFAULT_LAMBDA_LADDER
        ),
        rho_ladder=config.numbers("coercion.rhos", DEFAULT_RHO_LADDER),
    )
    return ScenarioResult(
        scenario=name,
        seed=config.seed,
        verdicts=dict(report.steps),
        results=report.as_dict(),
        curves={"rows": _thin(report.curves)},
    )


@default_registry.scenario(
    "coercion-star",
    anchors=("ehrenpreis-units", "tail-estimate", "coercion-star"),
)
def coercion_star(config: ScenarioConfig) -> ScenarioResult:
    """Coercion chain under ``q_L(a w') >= b w``."""
    kind = StarCondition(
        config.sequence("coercion.sequence", "analytic"),
        config.number("coercion.b", 1.0),
    )
    return _coercion_result("coercion-star", config, kind)


@default_registry.scenario(
    "coercion-doublestar", anchors=("tail-estimate", "coercion-double-star")
)
def coercion_doublestar(config: ScenarioConfig) -> ScenarioResult:
    """Coercion chain under ``Γ ∘ w' ≻ w`` with ``Γ(t) = t^p``."""
    power = config.number("coercion.gamma_power", 0.5)
    kind = DoubleStarCondition(
        lambda t: np.power(t, power), name=f"t^{power:g}"
    )
    return _coercion_result("coercion-doublestar", config, kind)


# ----------------------------------------------------------------------
# --- Gevrey parameter map ---------------------------------------------
# ----------------------------------------------------------------------


def _map_axis(step: float, *, closed: bool) -> npt.NDArray[np.float64]:
    count = round(1 / step)
    top = count if closed else count - 1
    return np.arange(1, top + 1) * step


def _end_to_end(
    triple: tuple[float, float, float],
    window: FrequencyWindow,
    coercion_window: FrequencyWindow,
) -> dict[str, typing.Any]:
    """Run the scenario matching the region of ``triple``.

    Coercive triples run the double-star chain with ``Γ(t) = t^a``,
    ``w = |ξ|^r`` and ``w' = |ξ|^s``; the others run the Gevrey
    counterexample. Either way the verdict reads ``VERIFIED`` when the
    run confirms its theorem on the window.
    """
    a, r, s = triple
    relation = gevrey_relation(a, r, s)
    if relation.counterexample_exists:
        report = gevrey_counterexample(a, r, s, win=window)
        return {
            "triple": list(triple),
            "scenario": "counterexample-gevrey",
            "verdict": report.verdict,
            "slow_decrease": report.slow_decrease,
        }

    coercion = coercion_experiment(
        DoubleStarCondition(lambda t: np.power(t, a), name=f"t^{a:g}"),
        poly_symbol([1]),
        gevrey_bump(min((1 + a) / 2, _MAX_CUTOFF_BETA)),
        resolve_model(["dirac", "gaussian:1"]),
        gevrey_weight(r),
        gevrey_weight(s),
        coercion_window,
    )
    return {
        "triple": list(triple),
        "scenario": "coercion-doublestar",
        "verdict": coercion.verdict,
        "steps": coercion.steps,
    }


@default_registry.scenario(
    "gevrey-map", anchors=("gevrey-multipliers", "gevrey-counterexample")
)
def gevrey_map(config: ScenarioConfig) -> ScenarioResult:
    """Region map of ``(a, r, s)`` with the disjointness check."""
    step = config.number("map.step", _MAP_STEP)
    a_axis = _map_axis(step, closed=True)
    rs_axis = _map_axis(step, closed=False)
    rows: dict[str, list[float]] = {
        key: [] for key in ("a", "r", "s", "coercive", "counterexample")
    }
    overlaps: list[tuple[float, float, float]] = []
    for a, r, s in itertools.product(a_axis, rs_axis, rs_axis):
        relation = gevrey_relation(float(a), float(r), float(s))
        if relation.coercive_claim and relation.counterexample_exists:
            overlaps.append((float(a), float(r), float(s)))
        for key, value in zip(
            rows,
            (
                a,
                r,
                s,
                relation.coercive_claim,
                relation.counterexample_exists,
            ),
            strict=True,
        ):
            rows[key].append(float(value))

    verdicts = {
        "disjoint": Verdict.REFUTED if overlaps else Verdict.VERIFIED,
    }
    samples = config.get("map.end_to_end", [])
    if samples:
        base = default_window()
        window = config.window(radius=base.radius, step=base.step)
        coercion_window = config.window(
            "map.coercion_window",
            radius=_COERCION_RADIUS,
            step=_COERCION_STEP,
        )
        outcomes = [
            _end_to_end(
                (float(a), float(r), float(s)), window, coercion_window
            )
            for a, r, s in samples
        ]
        verdicts["end_to_end"] = combine(o["verdict"] for o in outcomes)
    else:
        outcomes = []
    _logger.info(
        "Gevrey map over %d triples: %d overlaps", len(rows["a"]), len(overlaps)
    )
    return ScenarioResult(
        scenario="gevrey-map",
        seed=config.seed,
        verdicts=verdicts,
        results={
            "step": step,
            "triples": len(rows["a"]),
            "coercive": int(sum(rows["coercive"])),
            "counterexample": int(sum(rows["counterexample"])),
            "overlaps": overlaps,
            "end_to_end": outcomes,
        },
        curves={
            "regions": {key: np.asarray(v) for key, v in rows.items()}
        },
    )
