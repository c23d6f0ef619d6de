import math

import numpy as np
import pytest
from scipy.integrate import quad
from scipy.special import ndtr

from zpfdetect.fixed_window import (
    FixedWindowDetector,
    SaturationWarning,
    asymptotic_slope,
    count_probability,
    low_signal_suppression,
    rate_fixed_window,
    window_intensity_pdf,
)

PHI_0 = 0.3989422804014327  # standard normal density at 0
PHI_1 = 0.24197072451914337  # and at 1


def make_det(T=1.0, I_m=1.0, xi=0.01, I0=0.0, sigma=1.0):
    return FixedWindowDetector(T=T, I_m=I_m, xi=xi, I0=I0, sigma=sigma)


class TestDetectorValidation:
    @pytest.mark.parametrize(
        "kwargs",
        [
            {"T": 0.0},
            {"I_m": 0.0},
            {"I_m": -1.0},
            {"xi": 0.0},
            {"sigma": 0.0},
            {"sigma": -2.0},
        ],
    )
    def test_rejects_bad_fields(self, kwargs):
        with pytest.raises(ValueError):
            make_det(**kwargs)

    def test_saturation_intensity(self):
        det = make_det(xi=0.02, I0=3.0)
        assert det.saturation_intensity == pytest.approx(3.0 + 50.0)


class TestIntensityPdf:
    def test_peak_value(self):
        det = make_det(sigma=2.0, I0=1.0)
        peak = window_intensity_pdf(1.0 + 3.0, det, 3.0)
        assert peak == pytest.approx(1.0 / (2.0 * math.sqrt(2 * math.pi)))

    def test_normalization(self):
        det = make_det(sigma=1.5, I0=4.0)
        val, _ = quad(window_intensity_pdf, -np.inf, np.inf, args=(det, 2.0))
        assert val == pytest.approx(1.0, abs=1e-9)

    def test_point_value(self):
        det = make_det(sigma=1.0, I0=10.0)
        val = window_intensity_pdf(13.0, det, 2.0)
        assert val == pytest.approx(math.exp(-0.5) / math.sqrt(2 * math.pi), rel=1e-12)


class TestCountProbability:
    def test_below_threshold(self):
        det = make_det(I_m=2.0)
        assert count_probability(det.I0 + 1.0, det) == 0.0

    def test_linear_branch(self):
        det = make_det(I_m=2.0, xi=0.01)
        assert count_probability(det.I0 + 4.0, det) == pytest.approx(0.04)

    def test_threshold_boundary_is_zero(self):
        det = make_det(I_m=2.0)
        assert count_probability(det.I0 + 2.0, det) == 0.0

    def test_clamped_with_warning(self):
        det = make_det(I_m=1.0, xi=0.01)
        with pytest.warns(SaturationWarning):
            q = count_probability(det.I0 + 150.0, det)
        assert q == 1.0

    def test_vectorized(self):
        det = make_det(I_m=1.0, xi=0.1)
        I = det.I0 + np.array([0.5, 1.0, 2.0, 3.0])
        np.testing.assert_allclose(count_probability(I, det), [0.0, 0.0, 0.2, 0.3])


class TestRate:
    def test_a_zero_example(self):
        # a = (I_m - I_s)/sigma = 0: R = xi*(sigma*phi(0) + I_s/2)
        det = make_det()
        assert rate_fixed_window(det, 1.0) == pytest.approx(
            0.01 * (PHI_0 + 0.5), rel=1e-12
        )

    def test_dark_rate_example(self):
        det = make_det()
        assert rate_fixed_window(det, 0.0) == pytest.approx(0.01 * PHI_1, rel=1e-12)

    def test_deterministic_limit(self):
        # tiny sigma, signal above threshold: R -> xi*I_s/T
        det = make_det(I_m=1.0, sigma=1e-9)
        assert rate_fixed_window(det, 2.0) == pytest.approx(0.02, rel=1e-9)

    def test_closed_vs_quadrature_grid(self):
        # xi small enough that the saturation clamp carries no mass over
        # the grid; inside the clamp the two methods differ by design
        det = make_det(I_m=2.0, sigma=1.0, xi=1e-4)
        for i_s in np.linspace(0.0, 1000.0, 41):
            closed = rate_fixed_window(det, i_s, method="closed")
            numeric = rate_fixed_window(det, i_s, method="quadrature")
            assert numeric == pytest.approx(closed, rel=1e-6)

    def test_quadrature_sees_the_clamp(self):
        # past saturation the quadrature integrates the clamped response
        # and must fall below the unclamped closed form
        det = make_det(I_m=1.0, xi=1e-3, sigma=1.0)
        with pytest.warns(SaturationWarning):
            closed = rate_fixed_window(det, 1500.0, method="closed")
        with pytest.warns(SaturationWarning):
            numeric = rate_fixed_window(det, 1500.0, method="quadrature")
        assert numeric < closed

    def test_strictly_increasing_and_below_envelope(self):
        # strictness is only representable while the threshold stays within
        # a few sigma of the signal; beyond that floats saturate the slope
        det = make_det(I_m=3.0)
        grid = np.linspace(0.0, det.I_m + 7.0 * det.sigma, 200)
        rates = rate_fixed_window(det, grid)
        assert np.all(np.diff(rates) > 0)
        a = (det.I_m - grid) / det.sigma
        envelope = (det.xi / det.T) * (
            grid + det.sigma * np.exp(-0.5 * a**2) / math.sqrt(2 * math.pi)
        )
        assert np.all(rates[grid > 0] < envelope[grid > 0])

    def test_dark_rate_decreases_with_threshold(self):
        darks = [rate_fixed_window(make_det(I_m=im), 0.0) for im in (0.5, 1.0, 2.0, 4.0)]
        assert all(a > b for a, b in zip(darks, darks[1:]))

    def test_saturating_detector_flagged(self):
        # signal far beyond the clamp point: closed form ignores the clamp,
        # so the call must warn that it overestimates
        det = make_det(I_m=1.0, xi=0.5, sigma=1.0)
        with pytest.warns(SaturationWarning):
            rate_fixed_window(det, 10.0)

    def test_negative_signal_rejected(self):
        with pytest.raises(ValueError):
            rate_fixed_window(make_det(), -0.5)


class TestSlopeAndSuppression:
    def test_asymptotic_slope_values(self):
        assert asymptotic_slope(make_det(xi=0.01, T=1.0)) == 0.01
        assert asymptotic_slope(make_det(xi=0.05, T=0.5)) == pytest.approx(0.1)

    def test_slope_reached_at_high_intensity(self):
        det = make_det(I_m=1.0, sigma=1.0, xi=1e-3)
        i_s = 100.0 * det.sigma + det.I_m
        assert rate_fixed_window(det, i_s) / i_s == pytest.approx(
            asymptotic_slope(det), rel=0.01
        )

    @pytest.mark.filterwarnings("ignore::zpfdetect.fixed_window.SaturationWarning")
    def test_suppression_examples(self):
        det3 = make_det(I_m=3.0, sigma=1.0)
        assert low_signal_suppression(det3, 1.0) < 0.15
        assert low_signal_suppression(det3, 100.0 * det3.sigma + 3.0) > 0.99
        det_tiny = make_det(I_m=1e-9, sigma=1.0)
        assert low_signal_suppression(det_tiny, 10.0) == pytest.approx(1.0, abs=0.05)

    def test_suppression_frozen_value(self):
        # I_m = 3 sigma, I_s = sigma: ratio = phi(2) + (1 - Phi(2))
        det = make_det(I_m=3.0, sigma=1.0)
        expected = math.exp(-2.0) / math.sqrt(2 * math.pi) + (1.0 - ndtr(2.0))
        assert low_signal_suppression(det, 1.0) == pytest.approx(expected, rel=1e-12)

    @pytest.mark.filterwarnings("ignore::zpfdetect.fixed_window.SaturationWarning")
    def test_suppression_below_one(self):
        # the deficit 1 - ratio shrinks past double precision once I_s is
        # ~8 sigma above threshold, so strictness is asserted below that
        # and never-above beyond it
        det = make_det(I_m=2.0, sigma=1.0)
        strict_edge = det.I_m + 7.0 * det.sigma
        for i_s in np.geomspace(det.sigma**2 / det.I_m, 1e3, 50):
            ratio = low_signal_suppression(det, i_s)
            assert ratio <= 1.0
            if i_s <= strict_edge:
                assert ratio < 1.0

    def test_suppression_increasing_above_crossover(self):
        # the ratio R/((xi/T) I_s) is increasing for I_s >= sigma^2/I_m;
        # below that the dark-rate term dominates and the ratio blows up
        det = make_det(I_m=2.0, sigma=1.0)
        grid = np.geomspace(det.sigma**2 / det.I_m, det.I_m + 7.0 * det.sigma, 80)
        vals = [low_signal_suppression(det, x) for x in grid]
        assert all(a < b for a, b in zip(vals, vals[1:]))

    def test_suppression_diverges_at_low_signal(self):
        # below the crossover the dark term sends the ratio above 1,
        # which is why the range restriction above is not cosmetic
        det = make_det(I_m=2.0, sigma=1.0)
        tiny = 1e-4 * det.sigma**2 / det.I_m
        assert low_signal_suppression(det, tiny) > 1.0

    def test_suppression_rejects_zero_signal(self):
        with pytest.raises(ValueError):
            low_signal_suppression(make_det(), 0.0)

    def test_dark_constraint_forces_suppression(self):
        # pushing the dark count probability down pushes the threshold up,
        # which suppresses the response at I_s = sigma ever harder
        sigma, xi, T = 1.0, 0.01, 1.0
        ratios = []
        for eps in (1e-4, 1e-5, 1e-6):
            # smallest I_m with R(0)*T < eps, from phi(I_m/sigma) = eps*T/(xi*sigma)
            target = eps * T / (xi * sigma)
            i_m = sigma * math.sqrt(-2.0 * math.log(target * math.sqrt(2 * math.pi)))
            det = make_det(T=T, I_m=i_m, xi=xi, sigma=sigma)
            assert rate_fixed_window(det, 0.0) * T < eps * 1.0001
            ratios.append(low_signal_suppression(det, sigma))
        assert all(r < 0.5 for r in ratios)
        assert ratios[0] > ratios[1] > ratios[2]
