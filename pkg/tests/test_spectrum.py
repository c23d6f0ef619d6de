import numpy as np
import pytest

from zpfdetect.spectrum import (
    COMPTON_OMEGA,
    CONSTANTS,
    SpectrumParams,
    spectral_density,
    spectral_density_thermal,
    spectral_density_zpf,
    thermal_band_energy_density,
    zpf_band_intensity,
)

HBAR = CONSTANTS.hbar
KB = CONSTANTS.k_B
C = CONSTANTS.c

# angular frequencies of the 400-700 nm band edges
OMEGA_VIS_LO = 2 * np.pi * C / 700e-9
OMEGA_VIS_HI = 2 * np.pi * C / 400e-9


class TestSpectralDensity:
    def test_zero_temperature_is_pure_vacuum_term(self):
        w = 5e15
        assert spectral_density(w, 0.0) == HBAR * w**3 / (2 * np.pi**2 * C**3)
        assert spectral_density_thermal(w, 0.0) == 0.0

    def test_rayleigh_jeans_limit(self):
        # low frequency: thermal term approaches w^2 kB T / (pi^2 c^3)
        T = 300.0
        w = 0.015 * KB * T / HBAR
        rj = w**2 * KB * T / (np.pi**2 * C**3)
        assert spectral_density_thermal(w, T) == pytest.approx(rj, rel=0.01)

    def test_high_precision_value(self):
        # frozen from a 40-digit evaluation of the two terms
        assert spectral_density(1e15, 300.0) == pytest.approx(
            1.9828246576177522e-16, rel=1e-12
        )
        assert spectral_density_thermal(1e15, 300.0) == pytest.approx(
            3.4740823344906451e-27, rel=1e-12
        )

    def test_no_overflow_deep_in_wien_tail(self):
        # hbar*w/kB*T around 700: exponential must underflow, not overflow
        T = 1.0
        w = 700 * KB * T / HBAR
        val = spectral_density_thermal(w, T)
        assert val == 0.0 or val < 1e-250
        assert np.isfinite(spectral_density(w, T))

    def test_zpf_term_temperature_independent(self):
        # subtraction can only resolve the thermal term down to the ulp of
        # the total, so the tolerance is anchored there
        w = np.geomspace(1e12, 1e18, 7)
        for T in (2.7, 300.0, 6000.0):
            total = spectral_density(w, T)
            diff = total - spectral_density(w, 0.0)
            np.testing.assert_allclose(
                diff, spectral_density_thermal(w, T),
                rtol=1e-12, atol=4 * float(np.max(np.spacing(total))),
            )

    def test_omega_validation(self):
        with pytest.raises(ValueError):
            spectral_density_zpf(0.0)
        with pytest.raises(ValueError):
            spectral_density(np.array([1e15, -1.0]), 300.0)


class TestZpfBandIntensity:
    def test_empty_band(self):
        assert zpf_band_intensity(1e15, 1e15) == 0.0

    def test_visible_band_magnitude(self):
        # frozen oracle: hbar*(w_hi^4 - w_lo^4)/(8 pi^2 c^2) at the band edges
        val = zpf_band_intensity(OMEGA_VIS_LO, OMEGA_VIS_HI)
        assert val == pytest.approx(6528937013.578099, rel=1e-12)
        kw_per_cm2 = val / 1e7
        assert 1.0 < kw_per_cm2 < 1e3

    def test_quadrature_matches_closed_form(self):
        a, b = OMEGA_VIS_LO, OMEGA_VIS_HI
        closed = zpf_band_intensity(a, b)
        quad = zpf_band_intensity(a, b, method="quadrature")
        assert quad == pytest.approx(closed, rel=1e-10)

    def test_fourth_power_scaling(self):
        base = zpf_band_intensity(1e15, 3e15)
        for k in (0.5, 2.0, 10.0):
            scaled = zpf_band_intensity(k * 1e15, k * 3e15)
            assert scaled == pytest.approx(k**4 * base, rel=1e-12)

    def test_band_additivity(self):
        w1, w2, w3 = 1e15, 2.5e15, 6e15
        total = zpf_band_intensity(w1, w3)
        split = zpf_band_intensity(w1, w2) + zpf_band_intensity(w2, w3)
        assert split == pytest.approx(total, rel=1e-12)

    def test_quarter_convention(self):
        full = zpf_band_intensity(1e15, 2e15, convention="c")
        quarter = zpf_band_intensity(1e15, 2e15, convention="c/4")
        assert quarter == pytest.approx(full / 4.0, rel=1e-15)

    def test_band_validation(self):
        with pytest.raises(ValueError):
            zpf_band_intensity(2e15, 1e15)
        with pytest.raises(ValueError):
            zpf_band_intensity(0.0, 1e15)
        with pytest.raises(ValueError):
            zpf_band_intensity(1e15, 2 * COMPTON_OMEGA)

    def test_cutoff_override(self):
        params = SpectrumParams(omega_cutoff=1e16)
        with pytest.raises(ValueError):
            zpf_band_intensity(1e15, 2e16, params=params)
        assert zpf_band_intensity(1e15, 9e15, params=params) > 0


class TestThermalBand:
    def test_zero_temperature_limit(self):
        assert thermal_band_energy_density(1e14, 1e16, 0.0) == 0.0

    def test_stefan_boltzmann_full_band(self):
        # frozen oracle: pi^2 kB^4 T^4 / (15 hbar^3 c^3) at 300 K
        u = thermal_band_energy_density(0.0, np.inf, 300.0)
        assert u == pytest.approx(6.1282439439914818e-6, rel=1e-3)

    def test_band_additivity(self):
        T = 300.0
        w1, w2, w3 = 1e13, 5e13, 4e14
        total = thermal_band_energy_density(w1, w3, T)
        split = thermal_band_energy_density(w1, w2, T) + thermal_band_energy_density(
            w2, w3, T
        )
        assert split == pytest.approx(total, rel=1e-9)

    def test_monotone_in_temperature(self):
        vals = [thermal_band_energy_density(1e13, 1e15, T) for T in (100, 200, 400, 800)]
        assert all(a < b for a, b in zip(vals, vals[1:]))

    def test_monotone_in_band_width(self):
        T = 300.0
        narrow = thermal_band_energy_density(1e13, 1e14, T)
        wide = thermal_band_energy_density(1e13, 5e14, T)
        assert 0 < narrow < wide


def test_compton_cutoff_value():
    assert COMPTON_OMEGA == pytest.approx(7.7634407110501095e20, rel=1e-12)
    assert SpectrumParams().omega_cutoff == COMPTON_OMEGA
