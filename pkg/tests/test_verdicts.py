import math

import numpy as np
from hypothesis import given
from hypothesis import strategies as st

from convolab.verdicts import (
    BoundReport,
    Verdict,
    bound_report,
    combine,
    jsonable,
)


class TestCombine:
    def test_empty_is_verified(self) -> None:
        assert combine([]) is Verdict.VERIFIED

    @given(st.lists(st.sampled_from(list(Verdict)), min_size=1))
    def test_refutation_wins(self, verdicts: list[Verdict]) -> None:
        merged = combine(verdicts)
        if Verdict.REFUTED in verdicts:
            assert merged is Verdict.REFUTED
        elif Verdict.INCONCLUSIVE in verdicts:
            assert merged is Verdict.INCONCLUSIVE
        else:
            assert merged is Verdict.VERIFIED


class TestBoundReport:
    def test_positive_margin_verifies(self) -> None:
        x = np.linspace(0, 1, 11)
        report = bound_report("demo", x, 1 + x)
        assert report.verdict is Verdict.VERIFIED
        assert report.margin_min == 1.0
        assert report.witnesses == ()
        np.testing.assert_allclose(report.curves["margin"], 1 + x)

    def test_negative_margin_refutes_with_witnesses(self) -> None:
        x = np.arange(5.0)
        report = bound_report("demo", x, np.array([1, -1, 2, -3, 0.0]))
        assert report.verdict is Verdict.REFUTED
        assert report.witnesses == (1.0, 3.0)
        assert report.margin_min == -3.0

    def test_tolerance_absorbs_small_violations(self) -> None:
        x = np.arange(3.0)
        margin = np.array([1, -1e-12, 1])
        report = bound_report("demo", x, margin, tolerance=1e-9)
        assert report.holds

    def test_only_nan_is_inconclusive(self) -> None:
        report = bound_report("demo", np.arange(2.0), np.full(2, np.nan))
        assert report.verdict is Verdict.INCONCLUSIVE
        assert math.isnan(report.margin_min)

    def test_as_dict_drops_curves(self) -> None:
        report = BoundReport(name="demo", verdict=Verdict.VERIFIED)
        document = report.as_dict()
        assert document["verdict"] == "verified-on-window"
        assert document["margin_min"] == "inf"
        assert "curves" not in document


class TestJsonable:
    def test_converts_numpy_and_special_floats(self) -> None:
        value = {
            "a": np.array([1.0, np.nan]),
            "b": np.float64(-np.inf),
            "c": np.int64(3),
            "d": (Verdict.REFUTED, np.bool_(True)),
        }
        assert jsonable(value) == {
            "a": [1.0, None],
            "b": "-inf",
            "c": 3,
            "d": ["refuted", True],
        }
