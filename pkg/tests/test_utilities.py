import pathlib

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from convolab.exceptions import ConfigError
from convolab.utilities import (
    atomic_write_bytes,
    fft_workers,
    range_max,
    slope_fit,
    thread_limit,
)


class TestThreadLimit:
    def test_unset_means_all_workers(
        self, monkeypatch: pytest.MonkeyPatch
    ) -> None:
        monkeypatch.delenv("CONVOLAB_THREADS", raising=False)
        assert thread_limit() is None
        assert fft_workers() == -1

    def test_reads_positive_integer(
        self, monkeypatch: pytest.MonkeyPatch
    ) -> None:
        monkeypatch.setenv("CONVOLAB_THREADS", "3")
        assert fft_workers() == 3

    @pytest.mark.parametrize("raw", ["zero", "0", "-2"])
    def test_rejects_invalid_values(
        self, monkeypatch: pytest.MonkeyPatch, raw: str
    ) -> None:
        monkeypatch.setenv("CONVOLAB_THREADS", raw)
        with pytest.raises(ConfigError):
            thread_limit()


class TestRangeMax:
    @given(
        st.lists(
            st.floats(-1e6, 1e6, allow_nan=False), min_size=1, max_size=60
        ),
        st.data(),
    )
    def test_matches_slices(
        self, values: list[float], data: st.DataObject
    ) -> None:
        array = np.asarray(values)
        n = array.size
        lo = data.draw(st.lists(st.integers(0, n - 1), min_size=1, max_size=10))
        hi = [data.draw(st.integers(start, n - 1)) for start in lo]
        expected = [array[a : b + 1].max() for a, b in zip(lo, hi, strict=True)]
        np.testing.assert_array_equal(
            range_max(array, np.asarray(lo), np.asarray(hi)), expected
        )


class TestSlopeFit:
    def test_exact_line(self) -> None:
        x = np.arange(10.0)
        intercept, slope, stderr = slope_fit(x, 2 - 0.5 * x)
        assert intercept == pytest.approx(2.0)
        assert slope == pytest.approx(-0.5)
        assert stderr == pytest.approx(0.0, abs=1e-12)


class TestAtomicWrite:
    def test_creates_parents_and_leaves_no_temporary(
        self, tmp_path: pathlib.Path
    ) -> None:
        target = tmp_path / "nested" / "out.bin"
        atomic_write_bytes(target, b"first")
        atomic_write_bytes(target, b"second")
        assert target.read_bytes() == b"second"
        assert [p.name for p in target.parent.iterdir()] == ["out.bin"]
