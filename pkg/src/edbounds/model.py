"""Signal model for a PAM energy-detection receiver with a large antenna array.

The receiver squares and averages the received samples over M antennas, so the
detector output decomposes into a channel-energy term, a noise-energy term and
a signal-noise cross term.  For large M each of those sample means is well
approximated by a Gaussian; this module holds the constellation, the channel
parameters and every first/second-moment formula of the detector output under
that approximation.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

# Below this array size the large-array Gaussian approximation is shaky.
CLT_ANTENNA_THRESHOLD = 30

PMF_ATOL = 1e-12


def _readonly(a: np.ndarray) -> np.ndarray:
    a = np.asarray(a, dtype=float)
    a.flags.writeable = False
    return a


@dataclass(frozen=True, eq=False)
class Constellation:
    """Nonnegative PAM energy alphabet {0, c, 2c, ...} with its pmf.

    The transmitted amplitude is the square root of the selected energy.
    """

    order: int
    scale: float
    energies: np.ndarray
    pmf: np.ndarray

    def __post_init__(self) -> None:
        object.__setattr__(self, "energies", _readonly(self.energies))
        object.__setattr__(self, "pmf", _readonly(self.pmf))
        if self.order < 1:
            raise ValueError(f"order must be >= 1, got {self.order}")
        if len(self.energies) != self.order or len(self.pmf) != self.order:
            raise ValueError("energies and pmf must have length equal to order")
        if self.energies[0] != 0.0:
            raise ValueError("lowest energy level must be 0")
        expected = self.scale * np.arange(self.order)
        if self.order > 1:
            if self.scale <= 0.0:
                raise ValueError("scale must be positive for order >= 2")
            if not np.allclose(self.energies, expected, rtol=0.0, atol=1e-12):
                raise ValueError("energies must be consecutive multiples of the scale")
        if np.any(self.pmf < 0.0):
            raise ValueError("pmf entries must be nonnegative")
        if abs(float(self.pmf.sum()) - 1.0) > PMF_ATOL:
            raise ValueError("pmf must sum to 1")

    @property
    def mean_energy(self) -> float:
        return float(np.dot(self.pmf, self.energies))

    @property
    def max_rate_bits(self) -> float:
        """Entropy ceiling of the alphabet, log2 of its size."""
        return math.log2(self.order)


def make_constellation(
    order: int,
    target_mean: float = 1.0,
    pmf: Optional[Sequence[float]] = None,
) -> Constellation:
    """Build the energy alphabet {0, c, ..., c*(order-1)} with mean target_mean.

    The spacing c is solved from the pmf so the average transmit energy equals
    ``target_mean`` exactly.  ``order == 1`` yields the degenerate alphabet {0}
    (scale unused, set to 0).
    """
    if order < 1:
        raise ValueError(f"order must be a positive integer, got {order}")
    if target_mean <= 0.0:
        raise ValueError(f"target_mean must be positive, got {target_mean}")
    if pmf is None:
        pmf_arr = np.full(order, 1.0 / order)
    else:
        pmf_arr = np.asarray(pmf, dtype=float)
        if pmf_arr.shape != (order,):
            raise ValueError(f"pmf must have length {order}")
        if np.any(pmf_arr < 0.0):
            raise ValueError("pmf entries must be nonnegative")
        if abs(float(pmf_arr.sum()) - 1.0) > PMF_ATOL:
            raise ValueError("pmf must sum to 1")
    if order == 1:
        return Constellation(1, 0.0, np.zeros(1), pmf_arr)
    weighted_index = float(np.dot(pmf_arr, np.arange(order)))
    if weighted_index <= 0.0:
        raise ValueError("pmf puts all mass on the zero-energy level")
    scale = target_mean / weighted_index
    return Constellation(order, scale, scale * np.arange(order), pmf_arr)


@dataclass(frozen=True)
class ChannelParams:
    """Channel power, noise power and number of receive antennas."""

    sigma_h2: float
    sigma_n2: float
    antennas: int

    def __post_init__(self) -> None:
        if self.sigma_h2 <= 0.0:
            raise ValueError(f"sigma_h2 must be positive, got {self.sigma_h2}")
        if self.sigma_n2 <= 0.0:
            raise ValueError(f"sigma_n2 must be positive, got {self.sigma_n2}")
        if not isinstance(self.antennas, (int, np.integer)) or self.antennas < 1:
            raise ValueError(f"antennas must be an integer >= 1, got {self.antennas}")
        if self.antennas < CLT_ANTENNA_THRESHOLD:
            warnings.warn(
                f"antennas={self.antennas} is below the large-array regime "
                f"(M >= {CLT_ANTENNA_THRESHOLD}); the Gaussian approximations "
                "degrade for small arrays",
                UserWarning,
                stacklevel=3,
            )

    @classmethod
    def from_snr_db(
        cls,
        snr_db: float,
        antennas: int,
        sigma_h2: float = 1.0,
        mean_energy: float = 1.0,
    ) -> "ChannelParams":
        """Derive the noise power from an SNR in dB (SNR = mean energy / noise power)."""
        sigma_n2 = mean_energy * 10.0 ** (-snr_db / 10.0)
        return cls(sigma_h2=sigma_h2, sigma_n2=sigma_n2, antennas=antennas)

    def snr(self, mean_energy: float = 1.0) -> float:
        return mean_energy / self.sigma_n2

    def snr_db(self, mean_energy: float = 1.0) -> float:
        return 10.0 * math.log10(self.snr(mean_energy))


@dataclass(frozen=True)
class GaussianStat:
    """Mean and variance of a scalar Gaussian."""

    mean: float
    variance: float

    def __post_init__(self) -> None:
        if self.variance < 0.0:
            raise ValueError(f"variance must be >= 0, got {self.variance}")

    @property
    def std(self) -> float:
        return math.sqrt(self.variance)


def stat_sh(params: ChannelParams) -> GaussianStat:
    """Large-array law of the averaged channel energy."""
    return GaussianStat(params.sigma_h2, params.sigma_h2**2 / params.antennas)


def stat_sn(params: ChannelParams) -> GaussianStat:
    """Large-array law of the averaged noise energy."""
    return GaussianStat(params.sigma_n2, params.sigma_n2**2 / params.antennas)


def stat_w(params: ChannelParams) -> GaussianStat:
    """Large-array law of the signal-noise cross term (zero mean)."""
    return GaussianStat(0.0, 2.0 * params.sigma_h2 * params.sigma_n2 / params.antennas)


def _check_energy(x: float) -> float:
    x = float(x)
    if x < 0.0:
        raise ValueError(f"transmit energy must be >= 0, got {x}")
    return x


def moments_z_given_x(params: ChannelParams, x: float) -> GaussianStat:
    """Detector-output law conditioned on the transmitted energy only."""
    x = _check_energy(x)
    sh2, sn2, m = params.sigma_h2, params.sigma_n2, params.antennas
    mean = sh2 * x + sn2
    variance = (sh2**2 * x**2 + sn2**2 + 2.0 * sh2 * sn2 * x) / m
    return GaussianStat(mean, variance)


def moments_z_given_sh_x(params: ChannelParams, sh: float, x: float) -> GaussianStat:
    """Detector-output law given the channel-energy realization and the symbol.

    The variance no longer carries the channel-hardening term; it is
    independent of the conditioning value.
    """
    x = _check_energy(x)
    sh2, sn2, m = params.sigma_h2, params.sigma_n2, params.antennas
    mean = sh * x + sn2
    variance = (sn2**2 + 2.0 * sh2 * sn2 * x) / m
    return GaussianStat(mean, variance)


def moments_z_given_w_x(params: ChannelParams, w: float, x: float) -> GaussianStat:
    """Detector-output law given the cross-term realization and the symbol."""
    x = _check_energy(x)
    sh2, sn2, m = params.sigma_h2, params.sigma_n2, params.antennas
    mean = sh2 * x + w * math.sqrt(x) + sn2
    variance = (sh2**2 * x**2 + sn2**2) / m
    return GaussianStat(mean, variance)
