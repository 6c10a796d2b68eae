import math
import pathlib

import numpy as np
import pytest

from convolab.constants import KERNEL_FILE_MAGIC
from convolab.dcclasses import analytic_sequence
from convolab.exceptions import (
    PreconditionError,
    ReportFormatError,
    ShapeError,
    UnsupportedModelError,
)
from convolab.grids import FrequencyWindow
from convolab.mollifiers import gevrey_bump, plateau
from convolab.spectra import dirac, fourier_of
from convolab.symbols import (
    BeurlingFlavor,
    KernelModel,
    SchwartzFlavor,
    apply_operator,
    asymptotic_sum,
    bracket,
    default_symbol_catalog,
    ellipticity_check,
    expression_symbol,
    kernel_consistency,
    kernel_of,
    lemma1_check,
    load_table_symbol,
    poly_symbol,
    read_kernel,
    sm_regularity_check,
    symbol_seminorm,
    table_symbol,
    write_kernel,
)
from convolab.verdicts import Verdict
from convolab.weights import log_weight


def exponential_kernel(window: FrequencyWindow) -> KernelModel:
    xi = window.symmetric()
    row = np.exp(-np.abs(xi)).astype(np.complex128)
    return KernelModel(
        window=window, values=np.tile(row, (xi.size, 1)), provenance="exp"
    )


class TestSymbolModels:
    def test_closed_form_derivatives(self) -> None:
        p = expression_symbol("exp(x)*(1 + abs(xi))", order=1.0)
        assert complex(p.derivative(1, 1, 0.0, 2.0)) == pytest.approx(1.0)
        assert complex(p.derivative(0, 1, 0.0, -2.0)) == pytest.approx(-1.0)
        assert complex(p(0.0, 3.0)) == pytest.approx(4.0)
        assert not p.x_independent

    def test_polynomial(self) -> None:
        p = poly_symbol([1, 0, 1])
        assert p.name == "poly:1,0,1"
        assert p.order == 2.0
        assert p.x_independent
        assert complex(p(0.5, 2.0)) == pytest.approx(5.0)
        assert complex(p.derivative(0, 1, 0.0, 3.0)) == pytest.approx(6.0)

    def test_separable_catalog_key(self) -> None:
        p = default_symbol_catalog.resolve("sep:exp(x):1+abs(xi)")
        assert p.order == pytest.approx(1.0)
        assert p.factors is not None
        assert complex(p(1.0, 1.0)) == pytest.approx(2 * math.e)

    def test_sum_takes_the_larger_order(self) -> None:
        p = poly_symbol([1]).plus(poly_symbol([0, 1]))
        assert p.order == 1.0
        assert complex(p(0.0, 2.0)) == pytest.approx(3.0)

    def test_table_symbol(self) -> None:
        x = np.linspace(0, 1, 11)
        xi = np.linspace(-5, 5, 21)
        values = np.add.outer(2 * x, np.zeros_like(xi))
        p = table_symbol(x, xi, values, order=0.0)
        assert complex(p(0.55, 1.25)) == pytest.approx(1.1)
        assert complex(p.derivative(1, 0, 0.5, 0.0)) == pytest.approx(2.0)
        assert p.domain == (0.0, 1.0)
        with pytest.raises(UnsupportedModelError):
            p.derivative(0, 1, 0.5, 0.0)

    def test_table_shape(self) -> None:
        with pytest.raises(ShapeError):
            table_symbol([0, 1], [0, 1, 2], np.zeros((2, 2)), order=0.0)

    def test_table_from_archive(self, tmp_path: pathlib.Path) -> None:
        path = tmp_path / "symbol.npz"
        x = np.linspace(0, 1, 5)
        xi = np.linspace(-1, 1, 5)
        np.savez(path, x=x, xi=xi, values=np.ones((5, 5)), order=1.5)
        p = load_table_symbol(path)
        assert p.order == 1.5
        assert complex(p(0.5, 0.0)) == pytest.approx(1.0)


class TestSymbolSeminorms:
    def test_schwartz_flavor(self, small_window: FrequencyWindow) -> None:
        value = symbol_seminorm(
            poly_symbol([1, 0, 1]),
            2.0,
            SchwartzFlavor(0, (0.0, 1.0)),
            small_window,
        )
        assert value.value == pytest.approx(1.0)
        assert not value.lower_bound_only

    def test_beurling_needs_positive_lambda(
        self, small_window: FrequencyWindow
    ) -> None:
        w = log_weight()
        flavor = BeurlingFlavor(0.0, gevrey_bump(0.5), w, w)
        with pytest.raises(PreconditionError):
            symbol_seminorm(poly_symbol([1]), 0.0, flavor, small_window)

    def test_compact_set_inside_the_domain(
        self, small_window: FrequencyWindow
    ) -> None:
        p = table_symbol([0, 1], [-1, 1], np.ones((2, 2)), order=0.0)
        with pytest.raises(PreconditionError):
            symbol_seminorm(
                p, 0.0, SchwartzFlavor(0, (0.0, 2.0)), small_window
            )


    def test_regularity_radii(self) -> None:
        report = sm_regularity_check(
            poly_symbol([1, 0, 1]), 3.0, analytic_sequence(), (0.0, 1.0), 1.0, 2
        )
        assert report.verdict is Verdict.VERIFIED
        assert report.margin_min > 0
        assert report.params["symbol"] == "poly:1,0,1"

    def test_regularity_threshold(self) -> None:
        with pytest.raises(PreconditionError):
            sm_regularity_check(
                poly_symbol([1]), 0.0, analytic_sequence(), (0.0, 1.0), 0.0, 0
            )

class TestEllipticity:
    def test_elliptic_polynomial(self, small_window: FrequencyWindow) -> None:
        report = ellipticity_check(
            poly_symbol([1, 0, 1]), 2.0, (0.0, 1.0), small_window
        )
        assert report.verdict is Verdict.VERIFIED
        assert report.certificate["c"] >= 1.0

    def test_vanishing_symbol(self, small_window: FrequencyWindow) -> None:
        p = expression_symbol("x - 1/2", order=0.0)
        report = ellipticity_check(p, 0.0, (0.0, 1.0), small_window)
        assert report.verdict is Verdict.REFUTED


class TestAsymptoticSum:
    def test_single_symbol_is_vacuous(self) -> None:
        summed = asymptotic_sum([poly_symbol([1])], plateau(1.0, 2.0), 2)
        assert summed.j0 is None
        assert summed.epsilons == (1.0,)
        assert summed.certified

    def test_two_orders(self) -> None:
        terms = [
            poly_symbol([1]),
            expression_symbol("(1 + abs(xi))**(-1)", order=-1.0),
        ]
        summed = asymptotic_sum(terms, plateau(1.0, 2.0), 1)
        assert summed.j0 == 1
        assert summed.order == 0.0
        assert summed.epsilons[1] <= 0.5 * summed.epsilons[0]
        assert summed.certified

    def test_empty_list(self) -> None:
        with pytest.raises(PreconditionError):
            asymptotic_sum([], plateau(1.0, 2.0), 1)

    def test_orders_must_not_increase(self) -> None:
        terms = [poly_symbol([1]), poly_symbol([0, 1])]
        with pytest.raises(PreconditionError):
            asymptotic_sum(terms, plateau(1.0, 2.0), 1)

    def test_needs_a_lower_order(self) -> None:
        terms = [poly_symbol([1]), poly_symbol([2])]
        with pytest.raises(PreconditionError):
            asymptotic_sum(terms, plateau(1.0, 2.0), 1)


class TestKernels:
    def test_bracket_of_exponential_rows(
        self, small_window: FrequencyWindow
    ) -> None:
        kernel = exponential_kernel(small_window)
        w = log_weight()
        assert bracket(kernel, 0.0, 0.0, w).value == pytest.approx(2, rel=2e-3)
        assert bracket(kernel, 1.0, 0.0, w).value == pytest.approx(4, rel=2e-3)

    def test_multiplier_free_kernel(
        self, small_window: FrequencyWindow
    ) -> None:
        psi = gevrey_bump(0.75)
        kernel = kernel_of(psi, poly_symbol([1]), small_window)
        np.testing.assert_allclose(
            np.diag(kernel.values), psi.integral(), rtol=1e-9
        )
        assert kernel_consistency(kernel).verdict is Verdict.VERIFIED

    def test_operator_on_a_point_mass(
        self, small_window: FrequencyWindow
    ) -> None:
        psi = gevrey_bump(0.75)
        u = fourier_of(dirac(), small_window)
        out = apply_operator(poly_symbol([1]), psi, u)
        center = small_window.index_of(0.0)
        assert out.samples[center].real == pytest.approx(
            math.exp(-1), rel=1e-4
        )

    def test_kernel_needs_provenance(
        self, small_window: FrequencyWindow
    ) -> None:
        with pytest.raises(UnsupportedModelError):
            kernel_consistency(exponential_kernel(small_window))

    def test_kernel_file(
        self, tmp_path: pathlib.Path, small_window: FrequencyWindow
    ) -> None:
        kernel = exponential_kernel(small_window)
        path = tmp_path / "kernel.bin"
        write_kernel(kernel, path)
        assert path.read_bytes().startswith(KERNEL_FILE_MAGIC)
        restored = read_kernel(path)
        np.testing.assert_array_equal(restored.values, kernel.values)
        assert restored.window.step == small_window.step
        assert restored.provenance == f"file:{path}"

    def test_kernel_file_magic(self, tmp_path: pathlib.Path) -> None:
        path = tmp_path / "kernel.bin"
        path.write_bytes(b"NOTAKERNEL" + bytes(64))
        with pytest.raises(ReportFormatError):
            read_kernel(path)


class TestLemma1:
    def test_constant_symbol(self) -> None:
        window = FrequencyWindow(512.0, 0.5)
        report = lemma1_check(
            poly_symbol([1]),
            gevrey_bump(0.75),
            plateau(1.0, 2.0),
            0.0,
            0.0,
            2.0,
            log_weight(),
            window=window,
        )
        assert report.verdict is Verdict.VERIFIED
        assert report.params["Lambda_first"] == 2.0
        assert report.params["psi1_norm"] >= 2 * math.pi * 0.999
