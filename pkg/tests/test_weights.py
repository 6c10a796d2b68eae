import pathlib

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from convolab.exceptions import (
    ConfigError,
    InvariantViolationError,
    PreconditionError,
    RepresentationError,
)
from convolab.grids import FrequencyWindow
from convolab.verdicts import Relation, Verdict
from convolab.weights import (
    check_membership,
    compare,
    concave_majorant,
    default_weight_catalog,
    gevrey_weight,
    in_M_tilde,
    is_slowly_varying,
    load_sampled_weight,
    log_weight,
    power_log_weight,
    sampled_weight,
)

CATALOG_KEYS = [
    "log",
    "gevrey:0.5",
    "gevrey:0.3",
    "affine-log:2",
    "power-log:0.5",
]

frequencies = st.floats(-1e6, 1e6, allow_nan=False)


class TestCatalogWeights:
    @pytest.mark.parametrize("key", CATALOG_KEYS)
    def test_names_follow_keys(self, key: str) -> None:
        assert default_weight_catalog.resolve(key).name == key

    @pytest.mark.parametrize("key", CATALOG_KEYS)
    @given(xi=frequencies, eta=frequencies)
    def test_subadditive(self, key: str, xi: float, eta: float) -> None:
        w = default_weight_catalog.resolve(key)
        lhs = float(w(xi + eta))
        rhs = float(w(xi) + w(eta))
        assert lhs <= rhs + 1e-12 * (1 + rhs)

    @pytest.mark.parametrize("key", CATALOG_KEYS)
    def test_normalized_and_even(self, key: str) -> None:
        w = default_weight_catalog.resolve(key)
        assert float(w(0.0)) == 0.0
        np.testing.assert_array_equal(w([-3.0, -0.5]), w([3.0, 0.5]))

    @pytest.mark.parametrize(
        "key", ["gevrey:1.5", "power-log:2", "affine-log:0"]
    )
    def test_out_of_range_parameters(self, key: str) -> None:
        with pytest.raises(ConfigError):
            default_weight_catalog.resolve(key)

    def test_gevrey_range(self) -> None:
        with pytest.raises(ValueError, match=r"\(0, 1\)"):
            gevrey_weight(1.0)

    def test_plus_and_compose(self) -> None:
        w = log_weight().plus(gevrey_weight(0.5))
        assert float(w(3.0)) == pytest.approx(np.log(4) + np.sqrt(3))
        composed = gevrey_weight(0.5).compose(np.sqrt, name="sqrt")
        assert float(composed(16.0)) == pytest.approx(2.0)
        assert not composed.provably_subadditive


class TestSampledWeight:
    def test_reads_csv_with_header(self, tmp_path: pathlib.Path) -> None:
        path = tmp_path / "weight.csv"
        path.write_text("radius,value\n0,0\n10,1\n100,2\n")
        w = load_sampled_weight(path)
        assert float(w(55.0)) == pytest.approx(1.5)
        assert w.max_radius == 100.0
        assert not w.provably_subadditive
        with pytest.raises(RepresentationError):
            w(101.0)

    def test_catalog_key(self, tmp_path: pathlib.Path) -> None:
        path = tmp_path / "weight.csv"
        path.write_text("0,0\n4,2\n")
        w = default_weight_catalog.resolve(f"sampled:{path}")
        assert float(w(2.0)) == pytest.approx(1.0)

    @pytest.mark.parametrize(
        ("radii", "values"),
        [([1.0, 2.0], [0.0, 1.0]), ([0.0, 0.0], [0.0, 1.0]), ([0.0], [0.0])],
    )
    def test_malformed_tables(
        self, radii: list[float], values: list[float]
    ) -> None:
        with pytest.raises(RepresentationError):
            sampled_weight(radii, values)


class TestMembership:
    @pytest.mark.parametrize("key", ["log", "gevrey:0.5", "affine-log:2"])
    def test_catalog_weights_pass(
        self, key: str, window: FrequencyWindow
    ) -> None:
        report = check_membership(default_weight_catalog.resolve(key), window)
        assert report.passed, report.checks
        assert report.b > 0
        assert report.as_dict()["verdict"] == "verified-on-window"

    def test_bounded_profile_fails_log_bound(
        self, window: FrequencyWindow
    ) -> None:
        w = sampled_weight([0.0, 1.0, 4096.0], [0.0, 1.0, 1.0])
        report = check_membership(w, window)
        assert not report.checks["log_lower_bound"]
        assert not report.passed

    def test_quadratic_profile_fails_subadditivity(
        self, window: FrequencyWindow
    ) -> None:
        r = np.linspace(0, 4096, 4097)
        report = check_membership(sampled_weight(r, r**2 / 1000), window)
        assert not report.checks["subadditive"]
        assert report.witnesses["subadditive"]

    def test_negative_profile_is_rejected(
        self, window: FrequencyWindow
    ) -> None:
        with pytest.raises(InvariantViolationError):
            check_membership(sampled_weight([0, 4096], [0, -5]), window)

    def test_sub_logarithmic_power_passes_the_finite_fit(
        self, window: FrequencyWindow
    ) -> None:
        report = check_membership(power_log_weight(0.5), window)
        assert report.checks["log_lower_bound"]
        assert report.b > 0

    def test_seed_makes_report_reproducible(
        self, window: FrequencyWindow
    ) -> None:
        w = log_weight()
        first = check_membership(w, window, seed=3)
        second = check_membership(w, window, seed=3)
        assert first.as_dict() == second.as_dict()


class TestCompare:
    def test_gevrey_dominates_log(self, window: FrequencyWindow) -> None:
        verdict = compare(
            gevrey_weight(0.5), log_weight(), "dominates", window
        )
        assert verdict.relation is Relation.DOMINATES
        assert verdict.B > 0

    def test_log_does_not_dominate_gevrey(
        self, window: FrequencyWindow
    ) -> None:
        verdict = compare(
            log_weight(), gevrey_weight(0.5), "dominates", window
        )
        assert verdict.relation is Relation.FAILS
        assert not verdict.holds

    def test_scaled_log_is_equivalent(self, window: FrequencyWindow) -> None:
        scaled = default_weight_catalog.resolve("affine-log:2")
        verdict = compare(scaled, log_weight(), "equivalent", window)
        assert verdict.relation is Relation.EQUIVALENT
        assert verdict.B == pytest.approx(2.0)


class TestBalls:
    def test_log_is_slowly_varying_on_root_balls(
        self, window: FrequencyWindow
    ) -> None:
        report = is_slowly_varying(log_weight(), np.sqrt, window)
        assert report.verdict is Verdict.VERIFIED

    def test_linear_balls_are_rejected(self, window: FrequencyWindow) -> None:
        with pytest.raises(PreconditionError):
            is_slowly_varying(log_weight(), lambda xi: xi, window)

    def test_log_has_comparable_balls(self) -> None:
        xi = 100.0 * 4.0 ** np.arange(5)
        report = in_M_tilde(log_weight(), xi, np.sqrt(xi))
        assert report.verdict is Verdict.VERIFIED
        assert 0.5 < report.certificate["c"] <= 1.0

    def test_radii_must_shrink_relatively(self) -> None:
        xi = np.array([10.0, 20.0, 40.0])
        with pytest.raises(PreconditionError):
            in_M_tilde(gevrey_weight(0.5), xi, xi / 2)


class TestConcaveMajorant:
    @pytest.mark.parametrize("strict", [False, True])
    def test_concave_nondecreasing_majorant(
        self, small_window: FrequencyWindow, strict: bool
    ) -> None:
        w = sampled_weight(
            [0.0, 10.0, 20.0, 300.0], [0.0, 1.0, 5.0, 6.0]
        )
        majorant = concave_majorant(w, small_window, strict=strict)
        x = small_window.nonnegative()
        values = majorant(x)
        assert np.all(values >= w(x) - 1e-12)
        assert np.all(np.diff(values) >= -1e-12)
        assert np.all(np.diff(values, 2) <= 1e-9)

    def test_concave_weight_is_its_own_envelope(
        self, small_window: FrequencyWindow
    ) -> None:
        x = small_window.nonnegative()
        majorant = concave_majorant(log_weight(), small_window)
        np.testing.assert_allclose(majorant(x), np.log1p(x), atol=1e-12)
