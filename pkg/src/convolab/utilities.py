"""Utility functions used across the codebase."""

import logging
import os
import pathlib
import tempfile

import numpy as np
import numpy.typing as npt

from convolab.constants import THREADS_ENVIRONMENT_VARIABLE
from convolab.exceptions import ConfigError, RepresentationError

_logger = logging.getLogger(__name__)


def thread_limit() -> int | None:
    """Read the parallelism cap from the environment.

    Returns
    -------
    int | None
        The value of ``CONVOLAB_THREADS`` or ``None`` when unset.

    Raises
    ------
    ConfigError
        If the variable is set to something other than a positive
        integer.
    """
    raw = os.environ.get(THREADS_ENVIRONMENT_VARIABLE)
    if raw is None or not raw.strip():
        return None

    try:
        value = int(raw)
    except ValueError as exc:
        error_message = (
            f"Invalid {THREADS_ENVIRONMENT_VARIABLE} value: {raw!r}"
        )
        raise ConfigError(error_message) from exc

    if value < 1:
        error_message = f"{THREADS_ENVIRONMENT_VARIABLE} must be positive"
        raise ConfigError(error_message)

    return value


def fft_workers() -> int:
    """Return the ``workers`` argument passed to :mod:`scipy.fft`."""
    limit = thread_limit()
    return -1 if limit is None else limit


def range_max(
    values: npt.NDArray[np.float64],
    lo: npt.NDArray[np.intp],
    hi: npt.NDArray[np.intp],
) -> npt.NDArray[np.float64]:
    """Maximum of ``values[lo[i]:hi[i] + 1]`` for every ``i``.

    A sparse table answers each query in constant time after an
    ``O(n log n)`` build, so balls of varying radius around every grid
    point cost about as much as a single pass.

    Parameters
    ----------
    values
        One-dimensional array to query.
    lo
        Inclusive lower indices.
    hi
        Inclusive upper indices, ``hi >= lo`` elementwise.

    Returns
    -------
    numpy.ndarray
        The maxima, one per query.
    """
    values = np.asarray(values, dtype=np.float64)
    lo = np.asarray(lo, dtype=np.intp)
    hi = np.asarray(hi, dtype=np.intp)
    length = np.maximum(hi - lo + 1, 1)
    level = np.floor(np.log2(length)).astype(np.intp)
    out = np.empty(lo.shape, dtype=np.float64)
    # Only the current level of the table is kept in memory.
    row = values
    for k in range(int(level.max(initial=0)) + 1):
        if k:
            span = 1 << (k - 1)
            row = np.maximum(row[:-span], row[span:])
        mask = level == k
        if mask.any():
            out[mask] = np.maximum(
                row[lo[mask]], row[hi[mask] - (1 << k) + 1]
            )
    return out


def slope_fit(
    x: npt.NDArray[np.float64],
    y: npt.NDArray[np.float64],
) -> tuple[float, float, float]:
    """Least-squares line ``y = intercept + slope * x``.

    Returns
    -------
    tuple[float, float, float]
        ``(intercept, slope, standard error of the slope)``.
    """
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    design = np.column_stack((np.ones_like(x), x))
    coef, residuals, _, _ = np.linalg.lstsq(design, y, rcond=None)
    dof = max(x.size - 2, 1)
    sse = float(residuals[0]) if residuals.size else 0.0
    spread = float(np.sum((x - x.mean()) ** 2))
    stderr = float(np.sqrt(sse / dof / spread)) if spread > 0 else np.inf
    _logger.debug("Line fit on %d points: slope=%.6g", x.size, coef[1])
    return float(coef[0]), float(coef[1]), stderr


def read_two_columns(path: pathlib.Path) -> npt.NDArray[np.float64]:
    """Read a two-column comma-separated table, skipping a header row.

    Raises
    ------
    RepresentationError
        If the file is unreadable or does not have two columns.
    """
    try:
        table = np.loadtxt(path, delimiter=",", ndmin=2)
    except ValueError:
        table = np.loadtxt(path, delimiter=",", ndmin=2, skiprows=1)
    except OSError as exc:
        error_message = f"Cannot read table {path}"
        raise RepresentationError(error_message) from exc

    if table.shape[1] != 2:  # noqa: PLR2004
        error_message = f"Table {path} must have exactly two columns"
        raise RepresentationError(error_message)
    return np.asarray(table, dtype=np.float64)


def atomic_write_bytes(path: str | pathlib.Path, data: bytes) -> None:
    """Write ``data`` to ``path`` through a temporary file and a rename.

    Readers see either the old file or the complete new one.
    """
    target = pathlib.Path(path)
    target.parent.mkdir(parents=True, exist_ok=True)
    handle, temporary = tempfile.mkstemp(
        dir=target.parent, prefix=f".{target.name}.", suffix=".tmp"
    )
    try:
        with os.fdopen(handle, "wb") as stream:
            stream.write(data)
        os.replace(temporary, target)
    except BaseException:
        pathlib.Path(temporary).unlink(missing_ok=True)
        raise
    _logger.debug("Wrote %d bytes to %s", len(data), target)
