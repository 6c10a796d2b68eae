import math

import numpy as np
import pytest

from convolab.exceptions import RepresentationError, UnsupportedModelError
from convolab.smooth import SmoothFunction


class TestClosedForm:
    def test_exponential_derivatives(self) -> None:
        f = SmoothFunction.from_expression("exp(2*x)")
        assert float(f.derivative(3, 0.5)) == pytest.approx(8 * math.e)

    def test_exponential_of_polynomial(self) -> None:
        f = SmoothFunction.from_expression("exp(-x**2)")
        x = np.array([0.0, 1.0])
        expected = (4 * x**2 - 2) * np.exp(-(x**2))
        np.testing.assert_allclose(f.derivative(2, x), expected)

    def test_generic_expression(self) -> None:
        f = SmoothFunction.from_expression("sin(x)", name="sine")
        x = np.linspace(0, 3, 7)
        np.testing.assert_allclose(f.derivative(2, x), -np.sin(x))
        np.testing.assert_allclose(f(x), np.sin(x))
        assert f.name == "sine"

    def test_constant_broadcasts(self) -> None:
        f = SmoothFunction.from_expression("3")
        np.testing.assert_array_equal(f(np.zeros(4)), np.full(4, 3.0))

    def test_rejects_other_symbols(self) -> None:
        with pytest.raises(RepresentationError):
            SmoothFunction.from_expression("x*y")

    def test_order_limit(self) -> None:
        f = SmoothFunction.from_expression("x**2", max_order=2)
        with pytest.raises(UnsupportedModelError):
            f.derivative(3, 0.0)


class TestSampled:
    def test_first_derivative_of_sine(self) -> None:
        x = np.linspace(0, 2 * np.pi, 4001)
        f = SmoothFunction.from_samples(x, np.sin(x))
        inner = x[10:-10]
        np.testing.assert_allclose(
            f.derivative(1, inner), np.cos(inner), atol=1e-6
        )

    def test_rejects_non_uniform_grid(self) -> None:
        x = np.linspace(0, 1, 16) ** 2
        with pytest.raises(RepresentationError):
            SmoothFunction.from_samples(x, x)

    def test_rejects_short_tables(self) -> None:
        with pytest.raises(RepresentationError):
            SmoothFunction.from_samples([0.0, 1.0], [0.0, 1.0])
