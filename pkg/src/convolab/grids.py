"""Module defining the ``FrequencyWindow`` grid."""

import dataclasses
import math

import numpy as np
import numpy.typing as npt

from convolab.constants import DEFAULT_LADDER_LEVELS, MIN_WINDOW_POINTS
from convolab.exceptions import PreconditionError, ShapeError


@dataclasses.dataclass(frozen=True, slots=True)
class FrequencyWindow:
    """Finite symmetric frequency window with a uniform grid.

    Parameters
    ----------
    radius
        Window radius; the grid covers ``[-radius, radius]``.
    step
        Grid step. ``radius / step`` must be an integer of at least
        ``2**10``.
    ladder
        Strictly increasing dyadic sub-radii ending at ``radius`` used
        for trend statistics. Built automatically when omitted.

    Raises
    ------
    PreconditionError
        If the step does not divide the radius, the grid is too coarse
        or the ladder is malformed.
    """

    radius: float
    step: float
    ladder: tuple[float, ...] = ()

    def __post_init__(self) -> None:
        if self.radius <= 0 or self.step <= 0:
            error_message = "Window radius and step must be positive"
            raise PreconditionError(error_message)

        ratio = self.radius / self.step
        if abs(ratio - round(ratio)) > 1e-9 * ratio:
            error_message = (
                f"Window radius {self.radius} is not an integer multiple "
                f"of the step {self.step}"
            )
            raise PreconditionError(error_message)

        if round(ratio) < MIN_WINDOW_POINTS:
            error_message = (
                f"Window has {round(ratio)} steps per side, "
                f"at least {MIN_WINDOW_POINTS} are required"
            )
            raise PreconditionError(error_message)

        if not self.ladder:
            rungs = tuple(
                self.radius / 2**k
                for k in reversed(range(DEFAULT_LADDER_LEVELS))
            )
            object.__setattr__(self, "ladder", rungs)

        rungs = np.asarray(self.ladder)
        if np.any(np.diff(rungs) <= 0) or not math.isclose(
            rungs[-1], self.radius
        ):
            error_message = (
                "Ladder must be strictly increasing and end at the radius"
            )
            raise PreconditionError(error_message, witness=self.ladder)

    @property
    def count(self) -> int:
        """Number of grid steps between zero and the radius."""
        return round(self.radius / self.step)

    @property
    def size(self) -> int:
        """Number of points of the symmetric grid."""
        return 2 * self.count + 1

    def symmetric(self) -> npt.NDArray[np.float64]:
        """Grid points of ``[-radius, radius]``."""
        return self.step * np.arange(-self.count, self.count + 1, dtype=float)

    def nonnegative(self) -> npt.NDArray[np.float64]:
        """Grid points of ``[0, radius]``."""
        return self.step * np.arange(self.count + 1, dtype=float)

    def refined(self) -> FrequencyWindow:
        """The same window with half the grid step."""
        return FrequencyWindow(self.radius, self.step / 2, self.ladder)

    def widened(self, factor: int) -> FrequencyWindow:
        """The window with its radius multiplied by ``factor``."""
        ladder = (*self.ladder, self.radius * factor)
        return FrequencyWindow(self.radius * factor, self.step, ladder)

    def index_of(self, xi: float) -> int:
        """Index of the symmetric grid point nearest to ``xi``."""
        index = round(xi / self.step) + self.count
        return min(max(index, 0), self.size - 1)

    def ensure_same(self, other: FrequencyWindow) -> None:
        """Raise :class:`ShapeError` unless both grids coincide."""
        if not (
            math.isclose(self.radius, other.radius)
            and math.isclose(self.step, other.step)
        ):
            error_message = (
                f"Window mismatch: ({self.radius}, {self.step}) vs "
                f"({other.radius}, {other.step})"
            )
            raise ShapeError(error_message)

    def rung_masks(
        self, points: npt.NDArray[np.float64]
    ) -> list[npt.NDArray[np.bool_]]:
        """Masks selecting ``points`` in each ladder annulus.

        The first annulus is ``|xi| <= ladder[0]``; annulus ``k`` holds
        ``ladder[k-1] < |xi| <= ladder[k]``.
        """
        magnitude = np.abs(points)
        masks = []
        lower = -1.0
        for upper in self.ladder:
            masks.append((magnitude > lower) & (magnitude <= upper))
            lower = upper
        return masks
