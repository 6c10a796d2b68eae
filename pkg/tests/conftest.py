import pytest

from convolab.grids import FrequencyWindow


@pytest.fixture
def small_window() -> FrequencyWindow:
    """Window with the fewest points the grid accepts."""
    return FrequencyWindow(128.0, 0.125)


@pytest.fixture
def window() -> FrequencyWindow:
    return FrequencyWindow(1024.0, 0.125)
