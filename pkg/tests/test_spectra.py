import math

import numpy as np
import pytest

from convolab.exceptions import (
    AliasingError,
    PreconditionError,
    RepresentationError,
    ShapeError,
)
from convolab.grids import FrequencyWindow
from convolab.spectra import (
    GridSpectrum,
    PhysicalModel,
    convolve,
    default_model_catalog,
    dirac,
    equivalence_perturbation,
    fourier_of,
    gaussian,
    laplace,
    pw_order,
    resolve_model,
    scan_start,
    slow_decrease_check,
    sup_seminorm,
    triangle,
    w_norm,
)
from convolab.verdicts import Verdict
from convolab.weights import log_weight


class TestFourierTransform:
    @pytest.mark.parametrize(
        "model", [triangle(1.0), triangle(2.5), gaussian(1.0)]
    )
    def test_numeric_matches_closed_form(
        self, model: PhysicalModel, small_window: FrequencyWindow
    ) -> None:
        numeric = fourier_of(model, small_window, closed_form=False)
        exact = fourier_of(model, small_window)
        assert numeric.provenance.startswith("fft:")
        assert exact.provenance.startswith("closed-form:")
        np.testing.assert_allclose(
            numeric.samples, exact.samples, atol=1e-8
        )

    def test_dirac_is_flat(self, small_window: FrequencyWindow) -> None:
        spectrum = fourier_of(dirac(), small_window)
        np.testing.assert_array_equal(spectrum.samples, 1.0)
        assert spectrum.is_real_even()

    def test_laplace_transform(self, small_window: FrequencyWindow) -> None:
        spectrum = fourier_of(laplace(2.0), small_window)
        xi = spectrum.xi
        np.testing.assert_allclose(spectrum.samples, 1 / (1 + 4 * xi**2))

    def test_support_must_fit_the_physical_box(
        self, small_window: FrequencyWindow
    ) -> None:
        with pytest.raises(PreconditionError):
            fourier_of(laplace(1.0), small_window, closed_form=False)

    def test_truncated_density_is_aliasing(
        self, small_window: FrequencyWindow
    ) -> None:
        model = PhysicalModel(
            name="cut", density=np.ones_like, support=(-1.0, 1.0)
        )
        with pytest.raises(AliasingError):
            fourier_of(model, small_window)


class TestGridSpectrum:
    def test_sample_count_must_match(
        self, small_window: FrequencyWindow
    ) -> None:
        with pytest.raises(ShapeError):
            GridSpectrum(window=small_window, samples=np.ones(3))

    def test_samples_must_be_finite(
        self, small_window: FrequencyWindow
    ) -> None:
        with pytest.raises(RepresentationError):
            GridSpectrum.declared(small_window, lambda xi: 1 / xi)

    def test_convolution_is_a_product(
        self, small_window: FrequencyWindow
    ) -> None:
        u = fourier_of(gaussian(1.0), small_window)
        v = fourier_of(triangle(2.0), small_window)
        product = convolve(u, v)
        np.testing.assert_allclose(product.samples, u.samples * v.samples)
        assert product.support_radius == pytest.approx(14.0)

    def test_convolution_needs_one_window(
        self, small_window: FrequencyWindow, window: FrequencyWindow
    ) -> None:
        with pytest.raises(ShapeError):
            convolve(
                fourier_of(dirac(), small_window), fourier_of(dirac(), window)
            )


class TestSeminorms:
    def test_l1_norm_of_gaussian(self, small_window: FrequencyWindow) -> None:
        u = fourier_of(gaussian(1.0), small_window)
        value = w_norm(u, 0.0, log_weight())
        assert value.value == pytest.approx(2 * math.pi)
        assert not value.lower_bound_only

    def test_negative_order_is_rejected(
        self, small_window: FrequencyWindow
    ) -> None:
        with pytest.raises(PreconditionError):
            w_norm(fourier_of(dirac(), small_window), -1.0, log_weight())

    def test_growing_supremum_is_flagged(
        self, small_window: FrequencyWindow
    ) -> None:
        u = fourier_of(dirac(), small_window)
        growing = sup_seminorm(u, 1.0, log_weight())
        assert growing.value == pytest.approx(129.0)
        assert growing.lower_bound_only
        bounded = sup_seminorm(u, -1.0, log_weight())
        assert bounded.value == pytest.approx(1.0)
        assert not bounded.lower_bound_only

    def test_power_decay_order(self, small_window: FrequencyWindow) -> None:
        u = GridSpectrum.declared(
            small_window, lambda xi: (1 + np.abs(xi)) ** -3.0
        )
        order = pw_order(u, log_weight())
        assert order.order == pytest.approx(3.0)
        assert order.verdict is Verdict.VERIFIED


class TestSlowDecrease:
    def test_dirac_is_slowly_decreasing(self, window: FrequencyWindow) -> None:
        w = log_weight()
        u = fourier_of(dirac(), window)
        ladder = (0.25, 0.5, 1.0, 2.0)
        report = slow_decrease_check(
            u, w, ladder, xi_min=scan_start(w, ladder, window)
        )
        assert report.holds
        assert report.A_star is not None
        assert report.A_star <= 1.0
        assert not report.witnesses

    def test_root_exponential_decay_is_refuted(
        self, window: FrequencyWindow
    ) -> None:
        w = log_weight()
        u = GridSpectrum.declared(
            window, lambda xi: np.exp(-np.sqrt(np.abs(xi)))
        )
        ladder = (0.25, 0.5, 1.0)
        report = slow_decrease_check(
            u, w, ladder, xi_min=scan_start(w, ladder, window)
        )
        assert report.verdict is Verdict.REFUTED
        assert report.A_star is None
        assert report.witnesses
        assert np.nanmin(report.margin(1.0)) < 0

    def test_scan_start_resolves_the_smallest_ball(
        self, window: FrequencyWindow
    ) -> None:
        start = scan_start(log_weight(), (0.25,), window)
        assert window.step <= 0.1 * 0.25 * math.log1p(start)
        assert start >= 16.0

    def test_malformed_ladder(self, window: FrequencyWindow) -> None:
        u = fourier_of(dirac(), window)
        with pytest.raises(PreconditionError):
            slow_decrease_check(u, log_weight(), (2.0, 1.0), xi_min=200.0)

    def test_small_windows_are_rejected(self) -> None:
        small = FrequencyWindow(64.0, 1 / 16)
        with pytest.raises(PreconditionError):
            slow_decrease_check(fourier_of(dirac(), small), log_weight())

    def test_fast_perturbation_keeps_the_verdict(
        self, window: FrequencyWindow
    ) -> None:
        u = fourier_of(dirac(), window)
        v = fourier_of(gaussian(1.0), window)
        report = equivalence_perturbation(
            u, v, log_weight(), (0.5, 1.0, 2.0), xi_min=200.0
        )
        assert report.verdict is Verdict.VERIFIED
        assert report.certificate["base"] is Verdict.VERIFIED


class TestModelCatalog:
    def test_keys(self) -> None:
        assert set(default_model_catalog.keys()) >= {
            "dirac",
            "gaussian",
            "laplace",
        }

    def test_sum_of_models(self) -> None:
        model = resolve_model(["dirac", "gaussian:1"])
        assert model.point_mass == 1.0
        value = model.transform(np.array([0.0]))  # type: ignore[misc]
        assert value[0] == pytest.approx(1 + math.sqrt(2 * math.pi))

    def test_single_key(self) -> None:
        assert resolve_model("triangle:2").name == "triangle:2"
