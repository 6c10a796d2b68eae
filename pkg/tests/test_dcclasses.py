import math
import pathlib

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from convolab.dcclasses import (
    analytic_sequence,
    associated_weight,
    dc_seminorm,
    default_sequence_catalog,
    gevrey_order_sequence,
    load_table_sequence,
    q_L,
    q_L_values,
    quasianalytic_test,
    star_condition,
    table_sequence,
)
from convolab.exceptions import (
    ConfigError,
    InvariantViolationError,
    PreconditionError,
    RepresentationError,
    UnsupportedModelError,
)
from convolab.grids import FrequencyWindow
from convolab.smooth import SmoothFunction
from convolab.verdicts import Trend, Verdict
from convolab.weights import gevrey_weight, log_weight


class TestSequences:
    @pytest.mark.parametrize("key", ["analytic", "gevrey-order:2"])
    def test_catalog_sequences_are_valid(self, key: str) -> None:
        sequence = default_sequence_catalog.resolve(key)
        assert sequence.name == key
        assert sequence.validate().verdict is Verdict.VERIFIED

    def test_gevrey_order_must_exceed_one(self) -> None:
        with pytest.raises(ValueError, match="exceed 1"):
            gevrey_order_sequence(1.0)
        with pytest.raises(ConfigError):
            default_sequence_catalog.resolve("gevrey-order:0.5")

    def test_table_from_csv(self, tmp_path: pathlib.Path) -> None:
        path = tmp_path / "factorial.csv"
        path.write_text("k,L\n0,1\n1,1\n2,2\n3,6\n")
        sequence = load_table_sequence(path)
        np.testing.assert_allclose(
            np.exp(sequence.log_values(3)), [1, 1, 2, 6]
        )
        assert sequence.validate().verdict is Verdict.VERIFIED
        with pytest.raises(RepresentationError):
            sequence.log_values(4)

    def test_table_needs_every_index(self, tmp_path: pathlib.Path) -> None:
        path = tmp_path / "gap.csv"
        path.write_text("0,1\n2,2\n")
        with pytest.raises(RepresentationError):
            load_table_sequence(path)

    def test_first_term_must_be_one(self) -> None:
        with pytest.raises(InvariantViolationError):
            table_sequence([2.0, 3.0, 4.0]).validate()

    def test_terms_must_reach_the_index(self) -> None:
        with pytest.raises(InvariantViolationError) as info:
            table_sequence([1.0, 1.0, 1.5, 3.0]).validate()
        assert info.value.witness == 2


class TestAssociatedFunction:
    def test_value_at_e(self) -> None:
        assert q_L(analytic_sequence(), math.e) == pytest.approx(1.0)

    def test_analytic_oracle(self) -> None:
        t = np.geomspace(10, 1e4, 200)
        q = q_L_values(analytic_sequence(), t)
        assert np.all(np.abs(q - t / math.e) <= 1)

    def test_vanishes_below_one(self) -> None:
        q = q_L_values(analytic_sequence(), np.array([0.0, 0.5, 1.0]))
        np.testing.assert_array_equal(q, 0.0)

    def test_rejects_nonpositive_arguments(self) -> None:
        with pytest.raises(PreconditionError):
            q_L(analytic_sequence(), 0.0)

    @pytest.mark.parametrize("key", ["analytic", "gevrey-order:2"])
    @given(
        st.floats(1e-3, 1e5, allow_nan=False),
        st.floats(1e-3, 1e5, allow_nan=False),
    )
    def test_monotone(self, key: str, s: float, t: float) -> None:
        sequence = default_sequence_catalog.resolve(key)
        low, high = sorted((s, t))
        assert q_L(sequence, low) <= q_L(sequence, high) + 1e-12

    def test_associated_weight(self) -> None:
        w = associated_weight(analytic_sequence())
        assert float(w(math.e)) == pytest.approx(1.0)
        assert not w.provably_subadditive


class TestQuasianalyticity:
    def test_analytic_class_is_quasianalytic(self) -> None:
        verdict = quasianalytic_test(analytic_sequence(), 1e6)
        assert verdict.trend is Trend.DIVERGENT

    def test_gevrey_class_is_not(self) -> None:
        verdict = quasianalytic_test(gevrey_order_sequence(2.0), 1e6)
        assert verdict.trend is Trend.CONVERGENT
        assert len(verdict.increments) == len(verdict.ladder) - 1

    def test_needs_a_long_range(self) -> None:
        with pytest.raises(PreconditionError):
            quasianalytic_test(analytic_sequence(), 100.0)


class TestSeminorm:
    def test_exponential_in_analytic_class(self) -> None:
        f = SmoothFunction.from_expression("exp(x)")
        seminorm = dc_seminorm(
            f, analytic_sequence(), 0.5, (0.0, 1.0), alpha_max=10
        )
        assert seminorm.value == pytest.approx(math.e)
        assert not seminorm.growing
        assert not seminorm.truncated
        assert seminorm.alpha_max == 10

    def test_truncation_is_flagged(self) -> None:
        f = SmoothFunction.from_expression("exp(x)", max_order=3)
        seminorm = dc_seminorm(
            f, analytic_sequence(), 0.5, (0.0, 1.0), alpha_max=10
        )
        assert seminorm.truncated
        assert seminorm.alpha_max == 3

    def test_no_finite_derivative_is_an_error(self) -> None:
        f = SmoothFunction("pole", lambda _order: lambda x: 1 / x, max_order=4)
        with pytest.raises(UnsupportedModelError, match="pole"):
            dc_seminorm(f, analytic_sequence(), 0.5, (0.0, 1.0), alpha_max=4)


class TestStarCondition:
    def test_analytic_units_for_log(self, window: FrequencyWindow) -> None:
        report = star_condition(
            analytic_sequence(), log_weight(), log_weight(), 1.0, window
        )
        assert report.verdict is Verdict.VERIFIED
        assert report.certificate["a"] > 0

    def test_needs_positive_b(self, window: FrequencyWindow) -> None:
        with pytest.raises(PreconditionError):
            star_condition(
                analytic_sequence(),
                gevrey_weight(0.5),
                log_weight(),
                0.0,
                window,
            )
