import json
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from convolab import counterexamples
from convolab.counterexamples import (
    CounterexampleReport,
    IntervalFamily,
    build_pseudomeasure,
    distance_to_E,
    dj_milestones,
    general_counterexample,
    gevrey_counterexample,
    geometric_centers,
    sandwich_check,
    solve_dj,
    verify_bounds,
)
from convolab.exceptions import (
    EquationSolveError,
    InvariantViolationError,
    PreconditionError,
)
from convolab.grids import FrequencyWindow
from convolab.mollifiers import gevrey_bump, make_autocorr_bump
from convolab.spectra import SlowDecreaseReport, dirac, gaussian, laplace
from convolab.verdicts import Verdict
from convolab.weights import Weight, gevrey_weight, log_weight

ROOT_TWO_PI = math.sqrt(2 * math.pi)

FAMILY = IntervalFamily((3.5, 9.5), (1.5, 1.5))


@pytest.fixture(scope="module")
def default_report() -> CounterexampleReport:
    """The Gevrey construction for (0.6, 0.5, 0.7) on the default window."""
    return gevrey_counterexample(0.6, 0.5, 0.7)


class TestIntervalFamily:
    def test_edges(self) -> None:
        np.testing.assert_array_equal(FAMILY.edges(), [[2, 5], [8, 11]])
        assert FAMILY.count == 2

    def test_gap(self) -> None:
        with pytest.raises(InvariantViolationError) as info:
            IntervalFamily((10.0, 13.0), (1.0, 0.5))
        assert info.value.witness == 1

    def test_relative_widths_must_shrink(self) -> None:
        with pytest.raises(InvariantViolationError) as info:
            IntervalFamily((10.0, 100.0), (1.0, 20.0))
        assert info.value.witness == 1

    def test_matching_lengths(self) -> None:
        with pytest.raises(InvariantViolationError):
            IntervalFamily((10.0, 100.0), (1.0,))

    def test_fits_the_window(self, small_window: FrequencyWindow) -> None:
        with pytest.raises(PreconditionError):
            IntervalFamily((100.0,), (40.0,)).fits(small_window)

    @given(st.floats(-50, 50, allow_nan=False))
    def test_distance(self, xi: float) -> None:
        r = float(distance_to_E(FAMILY, xi))
        assert 0 <= r <= 1.5
        inside = [abs(xi - c) < d for c, d in zip((3.5, 9.5), (1.5, 1.5))]
        if not any(inside):
            assert r == 0
        else:
            c = 3.5 if inside[0] else 9.5
            assert r == pytest.approx(1.5 - abs(xi - c))

    def test_geometric_centers(self, window: FrequencyWindow) -> None:
        centers = geometric_centers(window, lambda x: x / 2)
        assert centers == (100.0, 400.0)


class TestSandwich:
    def test_gaussian_values(self, small_window: FrequencyWindow) -> None:
        report = sandwich_check(gaussian(1.0), FAMILY, small_window)
        assert report.verdict is Verdict.VERIFIED
        i = small_window.index_of(3.5)
        assert report.curves["r"][i] == pytest.approx(1.5)
        lower = report.curves["lower"][i] / ROOT_TWO_PI
        middle = report.curves["middle"][i] / ROOT_TWO_PI
        upper = report.curves["upper"][i] / ROOT_TWO_PI
        assert lower == pytest.approx(0.0606, abs=1e-4)
        assert middle == pytest.approx(0.1336, abs=1e-4)
        assert upper == pytest.approx(0.1336, abs=1e-4)
        assert lower <= middle <= upper

    def test_laplace(self, small_window: FrequencyWindow) -> None:
        report = sandwich_check(laplace(1.0), FAMILY, small_window)
        assert report.verdict is Verdict.VERIFIED

    def test_needs_a_density(self, small_window: FrequencyWindow) -> None:
        with pytest.raises(PreconditionError):
            sandwich_check(dirac(), FAMILY, small_window)

    def test_needs_long_intervals(self, small_window: FrequencyWindow) -> None:
        short = IntervalFamily((10.0,), (0.5,))
        with pytest.raises(PreconditionError):
            sandwich_check(gaussian(1.0), short, small_window)


class TestPseudoMeasure:
    def test_bounds_hold(self, window: FrequencyWindow) -> None:
        g = make_autocorr_bump(gevrey_bump(0.9, radius=4.0))
        fam = IntervalFamily((100.0, 400.0), (20.0, 40.0))
        pm = build_pseudomeasure(g, fam, window)
        assert np.all(pm.u_hat.samples.real >= 0)
        assert np.all(pm.u_hat.samples.real <= pm.g_mass * (1 + 1e-12))
        report = verify_bounds(
            pm, lambda t: np.exp(-np.sqrt(np.abs(t))), window, f_mass=4.0
        )
        assert report.params["left_mass"] > 0
        assert report.params["fg_mass"] == pytest.approx(4.0 * pm.g_mass)
        assert len(report.params["eq1_margins"]) == 2

    def test_profile_must_not_increase(self, window: FrequencyWindow) -> None:
        g = make_autocorr_bump(gevrey_bump(0.9, radius=4.0))
        pm = build_pseudomeasure(g, IntervalFamily((100.0,), (20.0,)), window)
        with pytest.raises(PreconditionError):
            verify_bounds(pm, lambda t: np.abs(t), window, f_mass=1.0)


class TestHalfWidths:
    def test_root_against_log(self) -> None:
        (d,) = solve_dj(gevrey_weight(0.5), log_weight(), [1000.0])
        assert d == pytest.approx(47.0, abs=0.5)
        assert math.sqrt(d) == pytest.approx(math.log(1001 - d), abs=1e-8)

    def test_linear_majorant(self) -> None:
        linear = Weight(name="linear", profile=lambda r: r)
        (d,) = solve_dj(linear, log_weight(), [math.exp(10)])
        assert d == pytest.approx(10.0, abs=0.01)

    def test_no_sign_change(self) -> None:
        with pytest.raises(EquationSolveError) as info:
            solve_dj(log_weight(), gevrey_weight(0.5), [100.0])
        assert info.value.diagnostics["xi"] == 100.0

    def test_milestones(self) -> None:
        phi = gevrey_weight(0.5)
        good = dj_milestones(phi, log_weight(), (100.0, 400.0), (10.0, 20.0))
        assert good.verdict is Verdict.VERIFIED
        assert good.certificate["c"] > 0
        bad = dj_milestones(phi, log_weight(), (100.0, 400.0), (10.0, 80.0))
        assert bad.verdict is Verdict.REFUTED
        assert bad.witnesses == (400.0,)


class TestGevreyCounterexample:
    def test_outside_the_region(self) -> None:
        with pytest.raises(PreconditionError, match="a < r/s"):
            gevrey_counterexample(1.0, 0.5, 0.7)

    def test_parameter_ranges(self) -> None:
        with pytest.raises(PreconditionError):
            gevrey_counterexample(0.5, 1.5, 0.7)

    def test_exponents(self) -> None:
        window = FrequencyWindow(8192.0, 0.125)
        report = gevrey_counterexample(0.6, 0.5, 0.7, win=window)
        assert report.alpha == pytest.approx(0.657, abs=1e-3)
        assert report.beta == pytest.approx(0.9599, abs=1e-4)
        assert report.trend_exponent == pytest.approx(0.0306, abs=1e-4)
        assert report.xi[:2] == (100.0, 400.0)
        assert report.d[0] == pytest.approx(100 ** (0.5 / report.alpha))
        assert min(report.eq1_margins) >= -1e-9
        assert json.dumps(report.as_dict())

    def test_default_window_construction(
        self, default_report: CounterexampleReport
    ) -> None:
        assert default_report.verdict is Verdict.VERIFIED
        assert default_report.slow_decrease == {
            "w_r": Verdict.VERIFIED,
            "w_s": Verdict.REFUTED,
        }
        assert default_report.trend_exponent > 0
        assert min(default_report.eq1_margins) >= -1e-6
        assert default_report.eq2_margin_min >= -1e-6
        assert np.all(np.diff(default_report.ratios) > 0)

    def test_witnesses_sit_in_the_intervals(
        self, default_report: CounterexampleReport
    ) -> None:
        located = next(
            check
            for check in default_report.checks
            if check.name == "witness-location"
        )
        assert located.verdict is Verdict.VERIFIED
        assert located.witnesses == ()
        assert located.certificate["covered"]


class TestWitnessLocation:
    def test_stray_witness_refutes(self) -> None:
        report = SlowDecreaseReport(
            verdict=Verdict.REFUTED,
            A_star=None,
            ladder=(0.125,),
            witnesses=(-101.0, 250.0),
        )
        located = counterexamples._witness_location(
            report, (100.0, 400.0), (30.0, 90.0)
        )
        assert located.verdict is Verdict.REFUTED
        assert located.witnesses == (250.0,)
        assert located.certificate["covered"] == [100.0]
        assert located.notes == ("no witness near ξ_j=400",)

    def test_no_witnesses(self) -> None:
        report = SlowDecreaseReport(
            verdict=Verdict.VERIFIED, A_star=1.0, ladder=(1.0,)
        )
        located = counterexamples._witness_location(
            report, (100.0,), (30.0,)
        )
        assert located.verdict is Verdict.INCONCLUSIVE


class TestGeneralCounterexample:
    def test_crowded_centers(self, window: FrequencyWindow) -> None:
        with pytest.raises(PreconditionError):
            general_counterexample(
                log_weight(), log_weight(), window, xi_seq=(100.0, 101.0)
            )

    def test_log_weight_against_a_gevrey_class(self) -> None:
        report = general_counterexample(log_weight(), gevrey_weight(0.3))
        assert report.name == "general"
        assert len(report.xi) == len(report.d) >= 2
        for center, half_width in zip(report.xi, report.d, strict=True):
            assert 0 < half_width <= center / 2
        assert min(report.eq1_margins) >= -1e-6
        assert {check.name for check in report.checks} >= {
            "witness-location"
        }
        assert set(report.slow_decrease) == {"w_r", "w_s"}
        assert json.dumps(report.as_dict())
