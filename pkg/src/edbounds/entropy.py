"""Differential-entropy engines.

Closed-form Gaussian entropies, one-dimensional Gaussian-mixture entropy by
deterministic quadrature and by Monte Carlo, and the outer expectations of the
conditional output entropies over the channel-energy and cross-term variables.

All entropies are computed and carried in nats; conversion to bits happens
once at reporting time.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Iterable, Literal, Optional, Sequence, Tuple

import numpy as np

from .model import (
    ChannelParams,
    Constellation,
    moments_z_given_sh_x,
    moments_z_given_w_x,
    moments_z_given_x,
    stat_sh,
    stat_w,
)

LN2 = math.log(2.0)
_LOG_SQRT_2PI = 0.5 * math.log(2.0 * math.pi)

# Relative floor applied to channel-energy quadrature nodes/draws: the Gaussian
# approximation admits negative values for small arrays, the physical quantity
# does not.
SH_CLIP_RATIO = 1e-12

# Independent RNG stream tags so the inner-MC and the two outer-MC estimators
# never share draws for one configured seed.
_STREAM_MIXTURE_MC = 1
_STREAM_OUTER_SH = 2
_STREAM_OUTER_W = 3

# Cap on elements per vectorized log-pdf evaluation (memory control).
_CHUNK_ELEMENTS = 1 << 24

Method = Literal["quadrature", "monte-carlo"]


def nats_to_bits(nats: float) -> float:
    return nats / LN2


def bits_to_nats(bits: float) -> float:
    return bits * LN2


@dataclass(frozen=True)
class NumericsConfig:
    """Knobs for the quadrature and Monte Carlo engines.

    ``z_quadrature_points`` is the panel budget of the composite-Simpson rule
    for the output-variable integral, ``tail_sigmas`` the per-component
    truncation width, ``outer_quadrature_order`` the Gauss-Hermite order of
    the outer expectations.  ``rel_tolerance`` sets the minimum panel density
    per local component width.
    """

    z_quadrature_points: int = 8192
    tail_sigmas: float = 10.0
    outer_quadrature_order: int = 64
    mc_outer_samples: int = 1000
    mc_inner_samples: int = 100_000
    seed: int = 0
    rel_tolerance: float = 1e-6

    def __post_init__(self) -> None:
        for name in ("z_quadrature_points", "outer_quadrature_order",
                     "mc_outer_samples", "mc_inner_samples"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be >= 1")
        if self.tail_sigmas < 4.0:
            raise ValueError("tail_sigmas must be >= 4")
        if self.rel_tolerance <= 0.0:
            raise ValueError("rel_tolerance must be positive")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must fit in 64 unsigned bits")


@dataclass(frozen=True)
class EntropyValue:
    """An entropy in nats with the standard error of its estimator.

    Deterministic quadrature reports ``std_error = 0``.
    """

    nats: float
    std_error: float = 0.0

    def __post_init__(self) -> None:
        if self.std_error < 0.0:
            raise ValueError("std_error must be >= 0")

    @property
    def bits(self) -> float:
        return nats_to_bits(self.nats)


@dataclass(frozen=True, eq=False)
class MixtureSpec:
    """Weighted one-dimensional Gaussian mixture."""

    weights: np.ndarray
    means: np.ndarray
    variances: np.ndarray

    def __post_init__(self) -> None:
        w = np.atleast_1d(np.asarray(self.weights, dtype=float))
        m = np.atleast_1d(np.asarray(self.means, dtype=float))
        v = np.atleast_1d(np.asarray(self.variances, dtype=float))
        if w.size == 0:
            raise ValueError("mixture must have at least one component")
        if not (w.shape == m.shape == v.shape):
            raise ValueError("weights, means and variances must have equal length")
        if np.any(w < 0.0):
            raise ValueError("weights must be nonnegative")
        if abs(float(w.sum()) - 1.0) > 1e-12:
            raise ValueError("weights must sum to 1")
        if np.any(v <= 0.0):
            raise ValueError("variances must be strictly positive")
        for name, arr in (("weights", w), ("means", m), ("variances", v)):
            arr.flags.writeable = False
            object.__setattr__(self, name, arr)

    @classmethod
    def from_components(
        cls, components: Iterable[Tuple[float, float, float]]
    ) -> "MixtureSpec":
        comps = list(components)
        if not comps:
            raise ValueError("mixture must have at least one component")
        w, m, v = (np.array(col, dtype=float) for col in zip(*comps))
        return cls(w, m, v)

    @property
    def stds(self) -> np.ndarray:
        return np.sqrt(self.variances)


def gaussian_entropy(variance: float) -> EntropyValue:
    """Differential entropy of a Gaussian, 0.5*ln(2*pi*e*variance)."""
    if variance <= 0.0:
        raise ValueError(f"variance must be positive, got {variance}")
    return EntropyValue(0.5 * math.log(2.0 * math.pi * math.e * variance))


def _panel_density_floor(rel_tolerance: float) -> float:
    # Composite Simpson on a Gaussian integrand needs ~(C/tol)^(1/4) panels
    # per sigma for relative error tol.
    return max(2.0, (0.055 / rel_tolerance) ** 0.25)


def _quad_plan(
    means: np.ndarray, stds: np.ndarray, cfg: NumericsConfig
) -> Tuple[np.ndarray, np.ndarray]:
    """Simpson nodes and weights resolving every mixture component.

    The support is split at all component interval endpoints (mean +/-
    tail_sigmas * std); each covered piece receives panels in proportion to
    its width measured in units of the narrowest overlapping component, so a
    sharp component sitting inside a broad one is still resolved.  Pieces not
    covered by any component carry negligible density and are skipped.
    """
    tail = cfg.tail_sigmas
    lo = means - tail * stds
    hi = means + tail * stds
    edges = np.unique(np.concatenate([lo, hi]))
    left, right = edges[:-1], edges[1:]
    covered = (lo[None, :] < right[:, None]) & (hi[None, :] > left[:, None])
    keep = covered.any(axis=1) & (right > left)
    left, right, covered = left[keep], right[keep], covered[keep]
    local_sigma = np.where(covered, stds[None, :], np.inf).min(axis=1)
    widths = right - left
    difficulty = widths / local_sigma
    share = cfg.z_quadrature_points * difficulty / difficulty.sum()
    floor = _panel_density_floor(cfg.rel_tolerance) * difficulty
    panels = np.ceil(np.maximum(np.maximum(share, floor), 2.0)).astype(int)
    panels += panels % 2  # composite Simpson needs even panel counts

    counts = panels + 1
    interval = np.repeat(np.arange(panels.size), counts)
    offsets = np.arange(counts.sum()) - np.repeat(
        np.concatenate([[0], np.cumsum(counts)[:-1]]), counts
    )
    step = widths / panels
    z = left[interval] + offsets * step[interval]
    w = np.where(offsets % 2 == 1, 4.0, 2.0)
    w[offsets == 0] = 1.0
    w[offsets == panels[interval]] = 1.0
    return z, w * (step[interval] / 3.0)


def _mixture_log_pdf(
    z: np.ndarray, weights: np.ndarray, means: np.ndarray, stds: np.ndarray
) -> np.ndarray:
    """Log density of the mixture at ``z``, accumulated component by component."""
    log_f = np.full(z.shape, -np.inf)
    for wgt, mu, sigma in zip(weights, means, stds):
        if wgt == 0.0:
            continue
        comp = math.log(wgt) - math.log(sigma) - _LOG_SQRT_2PI \
            - 0.5 * ((z - mu) / sigma) ** 2
        log_f = np.logaddexp(log_f, comp)
    return log_f


def _mixture_pdf_rows(
    z: np.ndarray, weights: np.ndarray, means_rows: np.ndarray, stds: np.ndarray
) -> np.ndarray:
    """Row-wise mixture density: z is (K, N), means_rows is (K, P).

    Linear-space accumulation; quadrature nodes always lie within the
    truncation width of some component, so the sum never fully underflows
    where it matters.
    """
    f = np.zeros(z.shape)
    for p in range(weights.size):
        if weights[p] == 0.0:
            continue
        u = (z - means_rows[:, p, None]) / stds[p]
        f += (weights[p] / (stds[p] * math.sqrt(2.0 * math.pi))) * np.exp(-0.5 * u * u)
    return f


def _neg_f_log_f(f: np.ndarray) -> np.ndarray:
    # -f*ln(f) -> 0 as f -> 0.
    out = np.zeros_like(f)
    ok = f > 0.0
    out[ok] = -f[ok] * np.log(f[ok])
    return out


def mixture_entropy_quad(spec: MixtureSpec, cfg: NumericsConfig) -> EntropyValue:
    """Mixture entropy by deterministic composite-Simpson quadrature."""
    z, w = _quad_plan(spec.means, spec.stds, cfg)
    f = _mixture_pdf_rows(z[None, :], spec.weights, spec.means[None, :], spec.stds)
    return EntropyValue(float(np.dot(w, _neg_f_log_f(f)[0])))


def _stream(seed: int, *key: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=key))


def _sample_mixture(
    spec: MixtureSpec, n: int, rng: np.random.Generator
) -> np.ndarray:
    idx = rng.choice(spec.weights.size, size=n, p=spec.weights)
    return spec.means[idx] + spec.stds[idx] * rng.standard_normal(n)


def mixture_entropy_mc(
    spec: MixtureSpec,
    cfg: NumericsConfig,
    rng: Optional[np.random.Generator] = None,
) -> EntropyValue:
    """Mixture entropy by Monte Carlo: mean of -ln f under the mixture itself.

    Deterministic for a given config seed.
    """
    n = cfg.mc_inner_samples
    if n < 2:
        raise ValueError("mc_inner_samples must be >= 2 for a standard error")
    if rng is None:
        rng = _stream(cfg.seed, _STREAM_MIXTURE_MC)
    z = _sample_mixture(spec, n, rng)
    vals = -_mixture_log_pdf(z, spec.weights, spec.means, spec.stds)
    return EntropyValue(float(vals.mean()), float(vals.std(ddof=1) / math.sqrt(n)))


def h_z_given_x(params: ChannelParams, constellation: Constellation) -> EntropyValue:
    """Closed-form conditional output entropy given the transmitted symbol."""
    variances = np.array(
        [moments_z_given_x(params, e).variance for e in constellation.energies]
    )
    nats = float(
        np.dot(constellation.pmf, 0.5 * np.log(2.0 * math.pi * math.e * variances))
    )
    return EntropyValue(nats)


def h_z_given_sh_x(
    params: ChannelParams, constellation: Constellation
) -> EntropyValue:
    """Conditional output entropy given symbol and channel energy (closed form).

    The per-symbol variance drops the channel-hardening term, so the value
    does not depend on the channel-energy realization.
    """
    variances = np.array(
        [
            moments_z_given_sh_x(params, params.sigma_h2, e).variance
            for e in constellation.energies
        ]
    )
    nats = float(
        np.dot(constellation.pmf, 0.5 * np.log(2.0 * math.pi * math.e * variances))
    )
    return EntropyValue(nats)


def h_z_given_w_x(params: ChannelParams, constellation: Constellation) -> EntropyValue:
    """Conditional output entropy given symbol and cross term (closed form)."""
    variances = np.array(
        [moments_z_given_w_x(params, 0.0, e).variance for e in constellation.energies]
    )
    nats = float(
        np.dot(constellation.pmf, 0.5 * np.log(2.0 * math.pi * math.e * variances))
    )
    return EntropyValue(nats)


@lru_cache(maxsize=8)
def _gauss_hermite(order: int) -> Tuple[np.ndarray, np.ndarray]:
    t, w = np.polynomial.hermite.hermgauss(order)
    return t, w / math.sqrt(math.pi)


def _batched_inner_entropies(
    means_per_outer: np.ndarray,
    stds: np.ndarray,
    pmf: np.ndarray,
    cfg: NumericsConfig,
) -> np.ndarray:
    """Quadrature mixture entropy for each row of per-outer-value means."""
    k_total = means_per_outer.shape[0]
    plans = [_quad_plan(means_per_outer[k], stds, cfg) for k in range(k_total)]
    n_max = max(z.size for z, _ in plans)
    z_all = np.empty((k_total, n_max))
    w_all = np.zeros((k_total, n_max))
    for k, (z, w) in enumerate(plans):
        z_all[k, : z.size] = z
        z_all[k, z.size:] = z[-1]  # padding nodes carry zero weight
        w_all[k, : w.size] = w
    inner = np.empty(k_total)
    chunk = max(1, _CHUNK_ELEMENTS // (pmf.size * n_max))
    for k0 in range(0, k_total, chunk):
        sl = slice(k0, min(k0 + chunk, k_total))
        f = _mixture_pdf_rows(z_all[sl], pmf, means_per_outer[sl], stds)
        inner[sl] = np.einsum("kn,kn->k", w_all[sl], _neg_f_log_f(f))
    return inner


def _outer_expectation(
    outer_mean: float,
    outer_std: float,
    component_means: Callable[[np.ndarray], np.ndarray],
    stds: np.ndarray,
    pmf: np.ndarray,
    cfg: NumericsConfig,
    method: Method,
    stream_tag: int,
    clip_floor: Optional[float] = None,
) -> EntropyValue:
    """E over a Gaussian outer variable of the inner mixture entropy.

    Gauss-Hermite quadrature by default; ``monte-carlo`` replaces the outer
    rule with seeded draws and reports the standard error of the mean.
    """
    if method == "quadrature":
        t, gh_w = _gauss_hermite(cfg.outer_quadrature_order)
        values = outer_mean + math.sqrt(2.0) * outer_std * t
        if clip_floor is not None:
            values = np.maximum(values, clip_floor)
        inner = _batched_inner_entropies(component_means(values), stds, pmf, cfg)
        return EntropyValue(float(np.dot(gh_w, inner)))
    if method == "monte-carlo":
        k = cfg.mc_outer_samples
        rng = _stream(cfg.seed, stream_tag)
        values = outer_mean + outer_std * rng.standard_normal(k)
        if clip_floor is not None:
            values = np.maximum(values, clip_floor)
        inner = _batched_inner_entropies(component_means(values), stds, pmf, cfg)
        se = float(inner.std(ddof=1) / math.sqrt(k)) if k > 1 else 0.0
        return EntropyValue(float(inner.mean()), se)
    raise ValueError(f"unknown method {method!r}")


def h_z_given_sh(
    params: ChannelParams,
    constellation: Constellation,
    cfg: NumericsConfig,
    method: Method = "quadrature",
) -> EntropyValue:
    """Output entropy conditioned on the channel-energy sample mean.

    Outer expectation over its large-array Gaussian law; the inner entropy is
    the quadrature entropy of the per-symbol Gaussian mixture.  Outer values
    are clipped to a tiny positive floor since the physical channel energy is
    nonnegative.
    """
    law = stat_sh(params)
    energies = constellation.energies
    stds = np.sqrt(
        np.array(
            [
                moments_z_given_sh_x(params, params.sigma_h2, e).variance
                for e in energies
            ]
        )
    )

    def component_means(values: np.ndarray) -> np.ndarray:
        return values[:, None] * energies[None, :] + params.sigma_n2

    return _outer_expectation(
        law.mean,
        law.std,
        component_means,
        stds,
        constellation.pmf,
        cfg,
        method,
        _STREAM_OUTER_SH,
        clip_floor=SH_CLIP_RATIO * params.sigma_h2,
    )


def h_z_given_w(
    params: ChannelParams,
    constellation: Constellation,
    cfg: NumericsConfig,
    method: Method = "quadrature",
) -> EntropyValue:
    """Output entropy conditioned on the signal-noise cross term."""
    law = stat_w(params)
    energies = constellation.energies
    amplitudes = np.sqrt(energies)
    stds = np.sqrt(
        np.array(
            [moments_z_given_w_x(params, 0.0, e).variance for e in energies]
        )
    )

    def component_means(values: np.ndarray) -> np.ndarray:
        return (
            params.sigma_h2 * energies[None, :]
            + values[:, None] * amplitudes[None, :]
            + params.sigma_n2
        )

    return _outer_expectation(
        law.mean,
        law.std,
        component_means,
        stds,
        constellation.pmf,
        cfg,
        method,
        _STREAM_OUTER_W,
    )


def output_mixture(
    params: ChannelParams, constellation: Constellation
) -> MixtureSpec:
    """Marginal detector-output law: per-symbol Gaussians weighted by the pmf."""
    stats = [moments_z_given_x(params, e) for e in constellation.energies]
    return MixtureSpec(
        constellation.pmf.copy(),
        np.array([s.mean for s in stats]),
        np.array([s.variance for s in stats]),
    )
