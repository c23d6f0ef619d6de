import numpy as np
import pytest

from zpfdetect.noise import (
    NoiseModel,
    SeedSpec,
    generator,
    ou_intensity_path,
    wiener_increments,
)


class TestSeedSpec:
    def test_validation(self):
        with pytest.raises(ValueError):
            SeedSpec(-1)
        with pytest.raises(ValueError):
            SeedSpec(2**64)
        with pytest.raises(ValueError):
            SeedSpec(0, -1)

    def test_substream_offsets(self):
        s = SeedSpec(42, 5)
        assert s.substream(3) == SeedSpec(42, 8)
        assert s.substream(0) == s

    def test_identical_spec_identical_stream(self):
        a = generator(SeedSpec(123, 7)).standard_normal(100)
        b = generator(SeedSpec(123, 7)).standard_normal(100)
        assert np.array_equal(a, b)

    def test_distinct_streams_differ(self):
        a = generator(SeedSpec(123, 0)).standard_normal(100)
        b = generator(SeedSpec(123, 1)).standard_normal(100)
        assert not np.array_equal(a, b)

    def test_stream_cross_correlation(self):
        n = 200_000
        a = generator(SeedSpec(9, 0)).standard_normal(n)
        b = generator(SeedSpec(9, 1)).standard_normal(n)
        r = np.corrcoef(a, b)[0, 1]
        assert abs(r) < 4.0 / np.sqrt(n)


class TestNoiseModel:
    def test_white_constructor(self):
        m = NoiseModel.white(2.0)
        assert m.kind == "white"
        assert m.Sigma == 2.0
        assert m.effective_sigma == 2.0

    def test_colored_effective_sigma(self):
        m = NoiseModel.colored(sigma_I=3.0, tau_c=0.5)
        assert m.effective_sigma == pytest.approx(3.0 * np.sqrt(1.0))

    def test_invariants(self):
        with pytest.raises(ValueError):
            NoiseModel.white(-1.0)
        with pytest.raises(ValueError):
            NoiseModel.colored(sigma_I=1.0, tau_c=0.0)
        with pytest.raises(ValueError):
            NoiseModel.colored(sigma_I=-1.0, tau_c=1.0)
        with pytest.raises(ValueError):
            NoiseModel(kind="pink")


class TestWienerIncrements:
    def test_zero_sigma(self):
        d = wiener_increments(0.0, 0.01, 100, SeedSpec(1))
        assert d.shape == (100,)
        assert np.all(d == 0.0)

    def test_increment_variance(self):
        # var estimator of n gaussians has sd ~ var*sqrt(2/n)
        n = 1_000_000
        d = wiener_increments(1.0, 0.01, n, SeedSpec(2))
        v = d.var()
        assert abs(v - 0.01) < 3 * 0.01 * np.sqrt(2.0 / n)

    def test_summed_variance(self):
        # full sums over many independent streams, Sigma^2*n*dt = 2e5
        sums = np.array(
            [wiener_increments(2.0, 0.5, 100_000, SeedSpec(3, k)).sum() for k in range(400)]
        )
        v = sums.var()
        expected = 4.0 * 100_000 * 0.5
        assert abs(v - expected) < 3 * expected * np.sqrt(2.0 / 400)

    def test_validation(self):
        with pytest.raises(ValueError):
            wiener_increments(1.0, 0.0, 10, SeedSpec(0))
        with pytest.raises(ValueError):
            wiener_increments(1.0, 0.1, 0, SeedSpec(0))
        with pytest.raises(ValueError):
            wiener_increments(-1.0, 0.1, 10, SeedSpec(0))


class TestOUPath:
    def test_zero_sigma_path(self):
        x = ou_intensity_path(0.0, 1.0, 0.1, 1000, SeedSpec(4))
        assert np.all(x == 0.0)

    def test_lag_autocorrelation(self):
        # lag 10 * dt 0.1 = tau_c, so autocorr should be exp(-1)
        n = 1_000_000
        x = ou_intensity_path(1.0, 1.0, 0.1, n, SeedSpec(5))
        r = np.corrcoef(x[:-10], x[10:])[0, 1]
        # se of the lag correlation for an AR(1) is about sqrt(1/n_eff)
        assert abs(r - np.exp(-1)) < 3e-3

    def test_stationary_variance(self):
        n = 1_000_000
        x = ou_intensity_path(2.0, 0.5, 0.05, n, SeedSpec(6))
        # neighboring samples are correlated; effective sample count shrinks
        # by roughly (1+a)/(1-a) with a = exp(-dt/tau)
        a = np.exp(-0.05 / 0.5)
        n_eff = n * (1 - a) / (1 + a)
        assert abs(x.var() - 4.0) < 3 * 4.0 * np.sqrt(2.0 / n_eff)

    def test_first_sample_stationary(self):
        x0 = np.array(
            [ou_intensity_path(1.5, 1.0, 0.1, 2, SeedSpec(7, k))[0] for k in range(4000)]
        )
        assert abs(x0.mean()) < 4 * 1.5 / np.sqrt(4000)
        assert abs(x0.var() - 2.25) < 4 * 2.25 * np.sqrt(2.0 / 4000)

    def test_integrated_variance_white_limit(self):
        # integrating over T = 100*tau_c approaches Sigma_eff^2 * T within 5%
        sigma_i, tau_c, dt = 1.0, 0.1, 0.005
        n = int(100 * tau_c / dt)
        m = 20_000
        sums = np.empty(m)
        for k in range(m):
            x = ou_intensity_path(sigma_i, tau_c, dt, n, SeedSpec(8, k))
            sums[k] = x.sum() * dt
        sig_eff2 = sigma_i**2 * 2 * tau_c
        expected = sig_eff2 * (n * dt)
        assert abs(sums.var() - expected) < 0.05 * expected

    def test_reproducible(self):
        x = ou_intensity_path(1.0, 1.0, 0.1, 50, SeedSpec(10, 3))
        y = ou_intensity_path(1.0, 1.0, 0.1, 50, SeedSpec(10, 3))
        assert np.array_equal(x, y)
