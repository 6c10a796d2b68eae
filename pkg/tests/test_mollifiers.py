import math

import numpy as np
import pytest

from convolab import mollifiers
from convolab.exceptions import PreconditionError
from convolab.grids import FrequencyWindow
from convolab.mollifiers import (
    BumpModel,
    UnitSequence,
    cutoff_lower_bound,
    default_bump_catalog,
    detect_core,
    ehrenpreis_units,
    gevrey_bump,
    gevrey_step,
    make_autocorr_bump,
    plateau,
    triangle_bump,
    unit_derivative_bounds,
    unit_norm_bound,
)
from convolab.spectra import GridSpectrum, SeminormValue, gaussian
from convolab.verdicts import Verdict
from convolab.weights import Weight, log_weight


@pytest.fixture(scope="module")
def units() -> UnitSequence:
    return ehrenpreis_units(
        plateau(1.0, 2.0), gevrey_bump(0.5, 0.5).normalized(), 3
    )


class TestBumps:
    def test_gevrey_bump_profile(self) -> None:
        bump = gevrey_bump(0.5)
        assert bump.name == "gevrey-bump:0.5"
        assert float(bump(0.0)) == pytest.approx(math.exp(-1))
        np.testing.assert_array_equal(bump([-1.0, 1.0, 1.5]), 0.0)
        assert float(bump.derivative(1, np.array([0.0]))[0]) == pytest.approx(
            0.0, abs=1e-12
        )

    @pytest.mark.parametrize("beta", [0.0, 1.0])
    def test_gevrey_bump_range(self, beta: float) -> None:
        with pytest.raises(ValueError, match="0 < beta < 1"):
            gevrey_bump(beta)

    def test_normalized_mass(self) -> None:
        bump = gevrey_bump(0.5, 0.5).normalized()
        assert bump.integral() == pytest.approx(1.0, rel=1e-9)

    def test_gevrey_step(self) -> None:
        t = np.linspace(-1, 2, 301)
        values = gevrey_step(t, 1.0)
        np.testing.assert_array_equal(values[t <= 0], 0.0)
        np.testing.assert_array_equal(values[t >= 1], 1.0)
        assert np.all(np.diff(values) >= 0)
        assert float(gevrey_step(0.5, 1.0)) == pytest.approx(0.5)

    def test_plateau_core(self) -> None:
        bump = plateau(1.0, 2.0)
        left, right = detect_core(bump)
        assert left <= -1.0 + 1e-3
        assert right >= 1.0 - 1e-3
        assert float(bump(2.0)) == 0.0

    def test_plateau_needs_ordered_radii(self) -> None:
        with pytest.raises(ValueError, match="core < outer"):
            plateau(2.0, 1.0)

    def test_core_must_contain_the_origin(self) -> None:
        with pytest.raises(PreconditionError):
            detect_core(gevrey_bump(0.5))

    def test_autocorrelation_has_nonnegative_transform(self) -> None:
        bump = make_autocorr_bump(triangle_bump(1.0))
        assert bump.support == (-2.0, 2.0)
        values = bump.transform(np.linspace(-50, 50, 1001))
        assert np.all(values.real >= 0)
        np.testing.assert_array_equal(values.imag, 0.0)

    def test_autocorrelation_needs_compact_support(self) -> None:
        wide = BumpModel(name="g", model=gaussian(1.0), construction="test")
        with pytest.raises(PreconditionError):
            make_autocorr_bump(wide)

    @pytest.mark.parametrize(
        "key", ["gevrey-bump:0.5", "plateau:1:2", "indicator", "triangle:2"]
    )
    def test_catalog(self, key: str) -> None:
        assert isinstance(default_bump_catalog.resolve(key), BumpModel)


class TestEhrenpreisUnits:
    def test_members(self, units: UnitSequence) -> None:
        assert units.n_max == 3
        assert units.core[0] < 0 < units.core[1]
        inner = (units.grid >= units.core[0]) & (units.grid <= units.core[1])
        for values in units.samples:
            np.testing.assert_allclose(values[inner], 1.0, atol=1e-9)

    def test_members_share_the_mass(self, units: UnitSequence) -> None:
        masses = [units.member_transform(n, [0.0])[0].real for n in range(4)]
        np.testing.assert_allclose(masses, masses[0], rtol=1e-9)

    def test_mollifier_must_have_unit_mass(self) -> None:
        with pytest.raises(PreconditionError):
            ehrenpreis_units(plateau(1.0, 2.0), gevrey_bump(0.5, 0.5), 2)

    def test_mollifier_must_fit_the_core(self) -> None:
        with pytest.raises(PreconditionError):
            ehrenpreis_units(
                plateau(1.0, 2.0), gevrey_bump(0.5, 1.5).normalized(), 2
            )

    def test_units_stay_in_the_outer_interval(self) -> None:
        with pytest.raises(PreconditionError) as info:
            ehrenpreis_units(
                plateau(1.0, 2.0),
                gevrey_bump(0.5, 0.5).normalized(),
                2,
                outer=(-2.0, 2.0),
            )
        assert info.value.witness == 1

    def test_norms_are_bounded_by_the_plateau(
        self, units: UnitSequence, small_window: FrequencyWindow
    ) -> None:
        report = unit_norm_bound(units, 1.0, log_weight(), small_window)
        assert report.verdict is Verdict.VERIFIED
        assert report.params["norm_phi"] > 0

    def test_flagged_member_makes_the_report_inconclusive(
        self,
        units: UnitSequence,
        small_window: FrequencyWindow,
        monkeypatch: pytest.MonkeyPatch,
    ) -> None:
        original = mollifiers.w_norm

        def flag_second_member(
            phi: GridSpectrum, lam: float, w: Weight
        ) -> SeminormValue:
            value = original(phi, lam, w)
            if phi.provenance == "chi_2":
                return SeminormValue(value.value, lower_bound_only=True)
            return value

        monkeypatch.setattr(mollifiers, "w_norm", flag_second_member)
        report = unit_norm_bound(units, 1.0, log_weight(), small_window)
        assert report.verdict is Verdict.INCONCLUSIVE
        assert "tail flag on chi_2" in report.notes

    def test_derivative_constant(self, units: UnitSequence) -> None:
        report = unit_derivative_bounds(units, 2)
        assert report.params["C_fit"] > 0
        assert report.verdict is not Verdict.REFUTED

    def test_derivative_order_limit(self, units: UnitSequence) -> None:
        with pytest.raises(PreconditionError):
            unit_derivative_bounds(units, 4)


class TestCutoffLowerBound:
    def test_bound_holds(self, small_window: FrequencyWindow) -> None:
        report = cutoff_lower_bound(
            gaussian(1.0),
            plateau(1.0, 2.0),
            gevrey_bump(0.5, 0.5),
            0.5,
            log_weight(),
            small_window,
        )
        assert report.verdict is Verdict.VERIFIED
        assert report.params["constant"] > 0

    def test_cutoff_must_cover_the_bump(
        self, small_window: FrequencyWindow
    ) -> None:
        with pytest.raises(PreconditionError):
            cutoff_lower_bound(
                gaussian(1.0),
                plateau(0.2, 0.4),
                gevrey_bump(0.5),
                0.5,
                log_weight(),
                small_window,
            )
