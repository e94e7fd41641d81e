import math

import numpy as np
import pytest

from edbounds.bounds import exact_mi
from edbounds.model import ChannelParams, GaussianStat, make_constellation, stat_sh, stat_sn, stat_w
from edbounds.sim import (
    SampleBatch,
    clt_gaussian_ks_limit,
    empirical_mi_plugin,
    ks_distance_to_gaussian,
    simulate_exact,
)


@pytest.fixture(scope="module")
def batch_m200():
    params = ChannelParams(1.0, 1.0, 200)
    return params, simulate_exact(params, make_constellation(4), 100_000, seed=7)


class TestSimulateExact:
    def test_decomposition_identity(self, batch_m200):
        _, batch = batch_m200
        recon = (
            batch.sh_values * batch.x_values
            + batch.sn_values
            + batch.w_values * np.sqrt(batch.x_values)
        )
        np.testing.assert_allclose(batch.z_values, recon, rtol=0.0, atol=1e-12)

    def test_identity_holds_at_high_noise_power(self):
        params = ChannelParams(1.0, 100.0, 50)
        batch = simulate_exact(params, make_constellation(8), 5000, seed=3)
        recon = (
            batch.sh_values * batch.x_values
            + batch.sn_values
            + batch.w_values * np.sqrt(batch.x_values)
        )
        np.testing.assert_allclose(batch.z_values, recon, rtol=1e-12)

    def test_bit_identical_across_runs(self):
        params = ChannelParams(1.0, 0.5, 64)
        con = make_constellation(4)
        a = simulate_exact(params, con, 9000, seed=123)
        b = simulate_exact(params, con, 9000, seed=123)
        for name in ("x_values", "sh_values", "sn_values", "w_values", "z_values"):
            np.testing.assert_array_equal(getattr(a, name), getattr(b, name))

    def test_different_seeds_differ(self):
        params = ChannelParams(1.0, 0.5, 64)
        con = make_constellation(4)
        a = simulate_exact(params, con, 1000, seed=1)
        b = simulate_exact(params, con, 1000, seed=2)
        assert not np.array_equal(a.z_values, b.z_values)

    def test_noiseless_degeneration(self):
        params = ChannelParams(1.0, 1e-18, 100)
        batch = simulate_exact(params, make_constellation(4), 2000, seed=5)
        assert np.max(np.abs(batch.sn_values)) < 1e-15
        assert np.max(np.abs(batch.w_values)) < 1e-7
        np.testing.assert_allclose(
            batch.z_values, batch.sh_values * batch.x_values, atol=1e-7
        )

    def test_rejects_empty_batch(self):
        with pytest.raises(ValueError):
            simulate_exact(ChannelParams(1.0, 1.0, 32), make_constellation(2), 0, 1)

    def test_moments_match_large_array_laws(self, batch_m200):
        # empirical mean/variance of each detector statistic within five
        # standard errors of the approximating Gaussian parameters
        params, batch = batch_m200
        n = len(batch)
        m = params.antennas
        checks = [
            (batch.sh_values, stat_sh(params)),
            (batch.sn_values, stat_sn(params)),
            (batch.w_values, stat_w(params)),
        ]
        for samples, law in checks:
            se_mean = law.std / math.sqrt(n)
            assert abs(samples.mean() - law.mean) < 5.0 * se_mean
            # sample-variance standard error for these light-tailed laws is
            # close to var * sqrt((2 + 6/m) / n)
            se_var = law.variance * math.sqrt((2.0 + 6.0 / m) / n)
            assert abs(samples.var(ddof=1) - law.variance) < 5.0 * se_var

    def test_channel_energy_mean_against_gamma_law(self):
        # the averaged channel energy is Gamma(m, sigma_h2/m) exactly; its
        # mean and variance anchor the sampler
        params = ChannelParams(1.0, 1.0, 200)
        batch = simulate_exact(params, make_constellation(2), 1_000_000, seed=17)
        n, m = len(batch), params.antennas
        assert abs(batch.sh_values.mean() - 1.0) < 5.0 / math.sqrt(n * m)
        theta = 1.0 / m
        var_exact = m * theta**2
        mu4 = 3.0 * m * (m + 2.0) * theta**4
        se_var = math.sqrt((mu4 - var_exact**2) / n)
        assert abs(batch.sh_values.var(ddof=1) - var_exact) < 5.0 * se_var


class TestKsDistance:
    def test_null_distribution_close(self):
        rng = np.random.default_rng(31)
        ref = GaussianStat(2.0, 4.0)
        samples = rng.normal(ref.mean, ref.std, 100_000)
        assert ks_distance_to_gaussian(samples, ref) < 0.006

    def test_distance_decreases_with_antennas(self):
        distances = {}
        for m in (10, 200):
            params = ChannelParams(1.0, 1.0, m)
            batch = simulate_exact(params, make_constellation(2), 100_000, seed=7)
            distances[m] = ks_distance_to_gaussian(batch.sh_values, stat_sh(params))
        assert distances[200] < distances[10]

    def test_point_mass_far_from_any_gaussian(self):
        samples = np.full(500, 1.0)
        assert ks_distance_to_gaussian(samples, GaussianStat(1.0, 1.0)) >= 0.5

    def test_requires_enough_samples(self):
        with pytest.raises(ValueError):
            ks_distance_to_gaussian(np.zeros(99), GaussianStat(0.0, 1.0))

    def test_model_limit_shrinks_with_antennas(self):
        limits = [clt_gaussian_ks_limit(m) for m in (10, 50, 200)]
        assert limits[0] > limits[1] > limits[2]
        assert limits[2] < 0.01


class TestEmpiricalMiPlugin:
    def test_degenerate_alphabet_has_zero_information(self):
        params = ChannelParams(1.0, 1.0, 64)
        batch = simulate_exact(params, make_constellation(1), 20_000, seed=9)
        assert empirical_mi_plugin(batch) == pytest.approx(0.0, abs=1e-12)

    def test_near_noiseless_alphabet_is_fully_resolved(self):
        params = ChannelParams.from_snr_db(40.0, 400)
        batch = simulate_exact(params, make_constellation(4), 100_000, seed=11)
        assert empirical_mi_plugin(batch, 256) == pytest.approx(2.0, abs=0.05)

    def test_matches_gaussian_model_oracle_at_operating_point(self, cfg):
        params = ChannelParams.from_snr_db(6.0, 200)
        con = make_constellation(8)
        batch = simulate_exact(params, con, 100_000, seed=13)
        plugin = empirical_mi_plugin(batch, 256)
        assert abs(plugin - exact_mi(params, con, cfg)) < 0.15

    def test_preconditions(self):
        params = ChannelParams(1.0, 1.0, 64)
        small = simulate_exact(params, make_constellation(2), 9_999, seed=1)
        with pytest.raises(ValueError):
            empirical_mi_plugin(small)
        batch = simulate_exact(params, make_constellation(2), 10_000, seed=1)
        with pytest.raises(ValueError):
            empirical_mi_plugin(batch, bins=15)

    def test_degenerate_output_range_rejected(self):
        n = 10_000
        flat = SampleBatch(
            x_values=np.zeros(n),
            sh_values=np.ones(n),
            sn_values=np.zeros(n),
            w_values=np.zeros(n),
            z_values=np.ones(n),
            seed=0,
        )
        with pytest.raises(ValueError):
            empirical_mi_plugin(flat)


class TestSampleBatch:
    def test_rejects_ragged_columns(self):
        with pytest.raises(ValueError):
            SampleBatch(
                x_values=np.zeros(3),
                sh_values=np.zeros(3),
                sn_values=np.zeros(3),
                w_values=np.zeros(3),
                z_values=np.zeros(4),
                seed=0,
            )
