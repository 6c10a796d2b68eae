"""Smooth one-variable functions with derivative access.

Closed forms carry a sympy expression and get exact derivative rules,
lambdified to numpy. Sampled functions fall back to central finite
differences with one Richardson step.
"""

import functools
import logging
import typing

import numpy as np
import numpy.typing as npt
import sympy as sp

from convolab.constants import ALPHA_MAX_CLOSED_FORM, ALPHA_MAX_SAMPLED
from convolab.exceptions import RepresentationError, UnsupportedModelError

if typing.TYPE_CHECKING:
    from collections.abc import Callable

_logger = logging.getLogger(__name__)

X: typing.Final = sp.Symbol("x", real=True)
"""Physical variable used by every closed-form expression."""

type Evaluator = Callable[[npt.NDArray[np.float64]], npt.NDArray[np.float64]]


class SmoothFunction:
    """Function of one real variable with derivatives up to some order.

    Use :meth:`from_expression` or :meth:`from_samples` to build one.

    Parameters
    ----------
    name
        Human-readable name.
    derivative_source
        Callable returning the vectorised ``order``-th derivative.
    max_order
        Highest available derivative order.
    expression
        The sympy expression for closed forms, ``None`` otherwise.
    """

    def __init__(
        self,
        name: str,
        derivative_source: Callable[[int], Evaluator],
        *,
        max_order: int,
        expression: sp.Expr | None = None,
    ) -> None:
        self.name = name
        self.max_order = max_order
        self.expression = expression
        self._source = functools.cache(derivative_source)

    def __repr__(self) -> str:
        return f"SmoothFunction({self.name!r}, max_order={self.max_order})"

    def __call__(self, x: npt.ArrayLike) -> npt.NDArray[np.float64]:
        return self.derivative(0, x)

    def derivative(
        self, order: int, x: npt.ArrayLike
    ) -> npt.NDArray[np.float64]:
        """Evaluate the ``order``-th derivative at ``x``.

        Raises
        ------
        UnsupportedModelError
            If ``order`` exceeds :attr:`max_order`.
        """
        if order > self.max_order:
            error_message = (
                f"{self.name} provides derivatives up to order "
                f"{self.max_order}, requested {order}"
            )
            raise UnsupportedModelError(error_message)

        points = np.asarray(x, dtype=np.float64)
        with np.errstate(all="ignore"):
            values = np.asarray(self._source(order)(points))
        return np.broadcast_to(values, points.shape).astype(np.float64)

    @classmethod
    def from_expression(
        cls,
        expression: sp.Expr | str,
        *,
        name: str | None = None,
        max_order: int = ALPHA_MAX_CLOSED_FORM,
    ) -> SmoothFunction:
        """Closed-form function of the symbol ``x``.

        Expressions of the form ``exp(g)`` are differentiated as
        ``exp(g) · R_k`` with ``R_{k+1} = R_k' + g' R_k`` so that high
        orders stay compact.
        """
        expr = sp.sympify(expression, locals={"x": X})
        if not expr.free_symbols <= {X}:
            error_message = f"Expression {expr} depends on more than x"
            raise RepresentationError(error_message)

        if expr.func is sp.exp:
            exponent = expr.args[0]
            inner = sp.diff(exponent, X)
            factors: list[sp.Expr] = [sp.Integer(1)]

            def source(order: int) -> Evaluator:
                while len(factors) <= order:
                    prev = factors[-1]
                    step = sp.diff(prev, X) + inner * prev
                    factors.append(sp.cancel(step))
                derivative = factors[order] * expr
                return _lambdify(derivative)

        else:

            def source(order: int) -> Evaluator:
                return _lambdify(sp.diff(expr, X, order))

        _logger.debug("Built closed-form smooth function %s", expr)
        return cls(
            name or str(expr),
            source,
            max_order=max_order,
            expression=expr,
        )

    @classmethod
    def from_samples(
        cls,
        x: npt.ArrayLike,
        y: npt.ArrayLike,
        *,
        name: str = "sampled",
        max_order: int = ALPHA_MAX_SAMPLED,
    ) -> SmoothFunction:
        """Function tabulated on a uniform grid.

        Derivatives are central differences (repeated
        :func:`numpy.gradient`) improved by one Richardson step against
        the grid of twice the spacing, then interpolated linearly.
        """
        grid = np.asarray(x, dtype=np.float64)
        values = np.asarray(y, dtype=np.float64)
        steps = np.diff(grid)
        malformed = grid.ndim != 1 or grid.shape != values.shape
        if malformed or grid.size < 8:  # noqa: PLR2004
            error_message = "Sampled function needs two equal 1-d arrays"
            raise RepresentationError(error_message)
        if not np.allclose(steps, steps[0], rtol=1e-9):
            error_message = "Sampled function needs a uniform grid"
            raise RepresentationError(error_message)

        def source(order: int) -> Evaluator:
            table = _richardson(grid, values, order)
            return lambda p: np.interp(p, grid, table)

        return cls(name, source, max_order=max_order)


def _lambdify(expression: sp.Expr) -> Evaluator:
    evaluator = sp.lambdify(X, expression, modules="numpy")
    return typing.cast("Evaluator", evaluator)


def _repeated_gradient(
    grid: npt.NDArray[np.float64],
    values: npt.NDArray[np.float64],
    order: int,
) -> npt.NDArray[np.float64]:
    out = values
    for _ in range(order):
        out = np.gradient(out, grid, edge_order=2)
    return out


def _richardson(
    grid: npt.NDArray[np.float64],
    values: npt.NDArray[np.float64],
    order: int,
) -> npt.NDArray[np.float64]:
    if order == 0:
        return values
    fine = _repeated_gradient(grid, values, order)
    coarse = _repeated_gradient(grid[::2], values[::2], order)
    coarse_on_fine = np.interp(grid, grid[::2], coarse)
    return (4 * fine - coarse_on_fine) / 3
