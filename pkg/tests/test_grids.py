import numpy as np
import pytest

from convolab.exceptions import PreconditionError, ShapeError
from convolab.grids import FrequencyWindow


class TestFrequencyWindow:
    def test_grid_shape(self, small_window: FrequencyWindow) -> None:
        assert small_window.count == 1024
        assert small_window.size == 2049
        grid = small_window.symmetric()
        assert grid[0] == -128.0
        assert grid[-1] == 128.0
        assert small_window.nonnegative()[0] == 0.0

    def test_default_ladder_is_dyadic(
        self, small_window: FrequencyWindow
    ) -> None:
        ladder = np.asarray(small_window.ladder)
        assert ladder[-1] == small_window.radius
        np.testing.assert_allclose(ladder[1:] / ladder[:-1], 2.0)

    @pytest.mark.parametrize(
        ("radius", "step"),
        [(128.0, 0.3), (16.0, 0.125), (-1.0, 0.1), (128.0, 0.0)],
    )
    def test_rejects_bad_grids(self, radius: float, step: float) -> None:
        with pytest.raises(PreconditionError):
            FrequencyWindow(radius, step)

    def test_rejects_ladder_not_ending_at_radius(self) -> None:
        with pytest.raises(PreconditionError):
            FrequencyWindow(128.0, 0.125, ladder=(16.0, 64.0))

    def test_refined_and_widened(self, small_window: FrequencyWindow) -> None:
        assert small_window.refined().count == 2048
        wide = small_window.widened(2)
        assert wide.radius == 256.0
        assert wide.ladder[-1] == 256.0

    def test_index_of_clamps(self, small_window: FrequencyWindow) -> None:
        grid = small_window.symmetric()
        assert grid[small_window.index_of(3.0)] == 3.0
        assert small_window.index_of(1e6) == small_window.size - 1
        assert small_window.index_of(-1e6) == 0

    def test_ensure_same(self, small_window: FrequencyWindow) -> None:
        small_window.ensure_same(FrequencyWindow(128.0, 0.125))
        with pytest.raises(ShapeError):
            small_window.ensure_same(small_window.refined())

    def test_rung_masks_partition_the_grid(
        self, small_window: FrequencyWindow
    ) -> None:
        grid = small_window.symmetric()
        masks = small_window.rung_masks(grid)
        assert len(masks) == len(small_window.ladder)
        np.testing.assert_array_equal(sum(m.astype(int) for m in masks), 1)
