import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from edbounds.model import (
    ChannelParams,
    GaussianStat,
    make_constellation,
    moments_z_given_sh_x,
    moments_z_given_w_x,
    moments_z_given_x,
    stat_sh,
    stat_sn,
    stat_w,
)


def params(sigma_h2=1.0, sigma_n2=1.0, antennas=100) -> ChannelParams:
    return ChannelParams(sigma_h2, sigma_n2, antennas)


class TestMakeConstellation:
    def test_binary_alphabet(self):
        con = make_constellation(2, target_mean=1.0)
        assert con.scale == pytest.approx(2.0, abs=0)
        np.testing.assert_allclose(con.energies, [0.0, 2.0])
        np.testing.assert_allclose(con.pmf, [0.5, 0.5])

    def test_degenerate_alphabet(self):
        con = make_constellation(1)
        assert con.order == 1
        assert con.scale == 0.0
        np.testing.assert_array_equal(con.energies, [0.0])
        assert con.mean_energy == 0.0

    def test_eight_level_mean_by_direct_summation(self):
        con = make_constellation(8, target_mean=1.0)
        assert con.scale == pytest.approx(2.0 / 7.0)
        # independent check: plain sum over the 8 uniform levels
        assert sum(con.energies) / 8.0 == pytest.approx(1.0, abs=1e-12)
        assert con.energies[-1] == pytest.approx(2.0)

    def test_custom_pmf_hits_target_mean(self):
        con = make_constellation(3, target_mean=2.0, pmf=[0.5, 0.25, 0.25])
        assert con.mean_energy == pytest.approx(2.0, abs=1e-12)
        # spacing solves  sum pmf[p] * p * c = mean
        assert con.scale == pytest.approx(2.0 / 0.75)

    @settings(max_examples=50, deadline=None)
    @given(
        order=st.integers(min_value=2, max_value=32),
        target=st.floats(min_value=1e-2, max_value=1e2),
    )
    def test_mean_energy_matches_target(self, order, target):
        con = make_constellation(order, target)
        assert con.mean_energy == pytest.approx(target, rel=1e-12)
        diffs = np.diff(con.energies)
        assert np.all(diffs > 0.0)

    @pytest.mark.parametrize("bad_order", [0, -1])
    def test_rejects_bad_order(self, bad_order):
        with pytest.raises(ValueError):
            make_constellation(bad_order)

    def test_rejects_bad_mean_and_pmf(self):
        with pytest.raises(ValueError):
            make_constellation(4, target_mean=0.0)
        with pytest.raises(ValueError):
            make_constellation(4, pmf=[0.5, 0.5])
        with pytest.raises(ValueError):
            make_constellation(2, pmf=[0.7, 0.7])
        with pytest.raises(ValueError):
            make_constellation(2, pmf=[-0.5, 1.5])
        with pytest.raises(ValueError):
            make_constellation(2, pmf=[1.0, 0.0])  # all mass on the zero level


class TestChannelParams:
    def test_validation(self):
        with pytest.raises(ValueError):
            ChannelParams(0.0, 1.0, 10)
        with pytest.raises(ValueError):
            ChannelParams(1.0, -1.0, 10)
        with pytest.raises(ValueError):
            ChannelParams(1.0, 1.0, 0)

    def test_small_array_warns(self):
        with pytest.warns(UserWarning):
            ChannelParams(1.0, 1.0, 10)

    def test_from_snr_db(self):
        p = ChannelParams.from_snr_db(6.0, 200)
        assert p.sigma_n2 == pytest.approx(10 ** (-0.6))
        assert p.snr_db() == pytest.approx(6.0, abs=1e-12)
        assert p.snr() == pytest.approx(10 ** 0.6)

    def test_snr_scales_with_mean_energy(self):
        p = ChannelParams.from_snr_db(0.0, 100, mean_energy=4.0)
        assert p.sigma_n2 == pytest.approx(4.0)
        assert p.snr(mean_energy=4.0) == pytest.approx(1.0)


class TestDetectorStats:
    def test_stat_sh_example(self):
        s = stat_sh(params(sigma_h2=1.0, antennas=100))
        assert (s.mean, s.variance) == (1.0, pytest.approx(0.01))

    def test_stat_sn_single_antenna(self):
        with pytest.warns(UserWarning):
            p = ChannelParams(1.0, 1.0, 1)
        s = stat_sn(p)
        assert (s.mean, s.variance) == (1.0, 1.0)

    def test_stat_w_example(self):
        s = stat_w(params(sigma_h2=1.0, sigma_n2=0.25, antennas=200))
        assert s.mean == 0.0
        assert s.variance == pytest.approx(2.0 * 0.25 / 200)

    def test_gaussian_stat_rejects_negative_variance(self):
        with pytest.raises(ValueError):
            GaussianStat(0.0, -1e-9)


class TestOutputMoments:
    def test_zero_energy_leaves_noise_only(self):
        p = params()
        for stat in (
            moments_z_given_x(p, 0.0),
            moments_z_given_sh_x(p, p.sigma_h2, 0.0),
            moments_z_given_w_x(p, 0.3, 0.0),
        ):
            assert stat.mean == pytest.approx(p.sigma_n2)
            assert stat.variance == pytest.approx(p.sigma_n2**2 / p.antennas)

    def test_direct_substitution_examples(self):
        p = params(1.0, 1.0, 100)
        s = moments_z_given_x(p, 1.0)
        assert (s.mean, s.variance) == (pytest.approx(2.0), pytest.approx(0.04))
        s = moments_z_given_sh_x(p, 1.2, 1.0)
        assert (s.mean, s.variance) == (pytest.approx(2.2), pytest.approx(0.03))
        p200 = params(1.0, 1.0, 200)
        s = moments_z_given_w_x(p200, 0.1, 4.0)
        assert (s.mean, s.variance) == (pytest.approx(5.2), pytest.approx(17.0 / 200))

    def test_conditional_variance_ignores_channel_energy(self):
        p = params()
        v = [moments_z_given_sh_x(p, sh, 1.5).variance for sh in (0.2, 1.0, 3.0)]
        assert v[0] == v[1] == v[2]

    @settings(max_examples=50, deadline=None)
    @given(
        x=st.floats(min_value=0.0, max_value=50.0),
        sh2=st.floats(min_value=0.1, max_value=5.0),
        sn2=st.floats(min_value=0.01, max_value=20.0),
        m=st.integers(min_value=30, max_value=1000),
    )
    def test_variance_decomposition(self, x, sh2, sn2, m):
        p = ChannelParams(sh2, sn2, m)
        full = moments_z_given_x(p, x).variance
        assert full == pytest.approx(
            moments_z_given_sh_x(p, sh2, x).variance + stat_sh(p).variance * x**2,
            abs=1e-12,
            rel=1e-12,
        )
        assert full == pytest.approx(
            moments_z_given_w_x(p, 0.0, x).variance + stat_w(p).variance * x,
            abs=1e-12,
            rel=1e-12,
        )
        assert full == pytest.approx(
            stat_sh(p).variance * x**2 + stat_sn(p).variance + stat_w(p).variance * x,
            abs=1e-12,
            rel=1e-12,
        )

    @pytest.mark.parametrize(
        "op",
        [
            lambda p, x: moments_z_given_x(p, x),
            lambda p, x: moments_z_given_sh_x(p, 1.0, x),
            lambda p, x: moments_z_given_w_x(p, 0.0, x),
        ],
    )
    def test_negative_energy_rejected(self, op):
        with pytest.raises(ValueError):
            op(params(), -1e-9)
