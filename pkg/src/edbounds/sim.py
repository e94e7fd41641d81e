"""Sample-level simulator of the exact energy-detector output.

Draws per-antenna complex channel and noise samples, forms the squared-and-
averaged detector output and its decomposition terms, and provides the
goodness-of-fit and histogram-MI checks used to validate the large-array
Gaussian approximations.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Tuple

import numpy as np
from scipy import stats

from .model import ChannelParams, Constellation, GaussianStat

# Rows generated per RNG shard; each shard draws from its own substream so a
# batch is reproducible and shards may be generated concurrently.
SHARD_ROWS = 4096


def _readonly(a: np.ndarray) -> np.ndarray:
    a.flags.writeable = False
    return a


@dataclass(frozen=True, eq=False)
class SampleBatch:
    """Aligned per-transmission samples of the detector output and its parts.

    Row-wise, ``z = sh * x + sn + w * sqrt(x)`` holds up to floating-point
    rounding of the antenna averages.
    """

    x_values: np.ndarray
    sh_values: np.ndarray
    sn_values: np.ndarray
    w_values: np.ndarray
    z_values: np.ndarray
    seed: int

    def __post_init__(self) -> None:
        n = self.z_values.size
        for name in ("x_values", "sh_values", "sn_values", "w_values", "z_values"):
            arr = getattr(self, name)
            if arr.size != n:
                raise ValueError("all sample columns must have equal length")
            object.__setattr__(self, name, _readonly(np.asarray(arr, dtype=float)))

    def __len__(self) -> int:
        return self.z_values.size


def _complex_normal(
    rng: np.random.Generator, rows: int, cols: int, variance: float
) -> np.ndarray:
    # CN(0, v): independent real and imaginary parts with variance v/2 each.
    scale = math.sqrt(variance / 2.0)
    return scale * (
        rng.standard_normal((rows, cols)) + 1j * rng.standard_normal((rows, cols))
    )


def simulate_exact(
    params: ChannelParams,
    constellation: Constellation,
    n: int,
    seed: int,
) -> SampleBatch:
    """Simulate ``n`` transmissions through the exact per-antenna model.

    Per row: a symbol energy is drawn from the constellation pmf, M channel
    and noise samples are drawn, and the detector output is the average of
    the squared received samples.  Deterministic for a given seed.
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    m = params.antennas
    x = np.empty(n)
    sh = np.empty(n)
    sn = np.empty(n)
    w = np.empty(n)
    z = np.empty(n)
    for shard, start in enumerate(range(0, n, SHARD_ROWS)):
        stop = min(start + SHARD_ROWS, n)
        rows = stop - start
        rng = np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(shard,)))
        idx = rng.choice(constellation.order, size=rows, p=constellation.pmf)
        xs = constellation.energies[idx]
        h = _complex_normal(rng, rows, m, params.sigma_h2)
        v = _complex_normal(rng, rows, m, params.sigma_n2)
        received = h * np.sqrt(xs)[:, None] + v
        x[start:stop] = xs
        sh[start:stop] = np.mean(np.abs(h) ** 2, axis=1)
        sn[start:stop] = np.mean(np.abs(v) ** 2, axis=1)
        w[start:stop] = 2.0 * np.mean(np.real(h * np.conj(v)), axis=1)
        z[start:stop] = np.mean(np.abs(received) ** 2, axis=1)
    return SampleBatch(x, sh, sn, w, z, seed)


def ks_distance_to_gaussian(samples: np.ndarray, ref: GaussianStat) -> float:
    """Two-sided Kolmogorov-Smirnov statistic against a Gaussian reference."""
    samples = np.asarray(samples, dtype=float)
    if samples.size < 100:
        raise ValueError(f"need at least 100 samples, got {samples.size}")
    if ref.variance <= 0.0:
        raise ValueError("reference Gaussian must be nondegenerate")
    result = stats.kstest(samples, stats.norm(loc=ref.mean, scale=ref.std).cdf)
    return float(result.statistic)


def clt_gaussian_ks_limit(antennas: int) -> float:
    """Large-sample KS distance between an averaged-energy law and its
    Gaussian approximation.

    The averaged squared-magnitude of M unit complex Gaussians follows a
    Gamma(M, 1/M) law; the distance of that law to N(1, 1/M) is the
    irreducible fit error of the approximation (scale invariant, so it
    applies to any power level).  Used to set validation thresholds.
    """
    if antennas < 1:
        raise ValueError("antennas must be >= 1")
    m = antennas
    gamma = stats.gamma(a=m, scale=1.0 / m)
    gauss = stats.norm(loc=1.0, scale=1.0 / math.sqrt(m))
    x = np.linspace(max(0.0, 1.0 - 8.0 / math.sqrt(m)), 1.0 + 8.0 / math.sqrt(m), 20001)
    return float(np.max(np.abs(gamma.cdf(x) - gauss.cdf(x))))


def empirical_mi_plugin(batch: SampleBatch, bins: int = 256) -> float:
    """Plug-in mutual information (bits) from the joint symbol/output histogram.

    Equal-width output bins over the sample range, no bias correction; a
    coarse cross-check, not a precision estimator.
    """
    if len(batch) < 10_000:
        raise ValueError(f"need at least 10000 rows, got {len(batch)}")
    if bins < 16:
        raise ValueError(f"need at least 16 bins, got {bins}")
    z = batch.z_values
    z_lo, z_hi = float(z.min()), float(z.max())
    if z_hi <= z_lo:
        raise ValueError("degenerate output range")
    symbols, sym_idx = np.unique(batch.x_values, return_inverse=True)
    edges = np.linspace(z_lo, z_hi, bins + 1)
    z_idx = np.clip(np.searchsorted(edges, z, side="right") - 1, 0, bins - 1)
    joint = np.zeros((symbols.size, bins))
    np.add.at(joint, (sym_idx, z_idx), 1.0)
    joint /= joint.sum()
    px = joint.sum(axis=1, keepdims=True)
    pz = joint.sum(axis=0, keepdims=True)
    mask = joint > 0.0
    ratio = joint[mask] / (px @ pz)[mask]
    return float(np.sum(joint[mask] * np.log2(ratio)))
