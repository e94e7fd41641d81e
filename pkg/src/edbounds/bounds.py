"""Mutual-information bounds for the energy-detection output.

Two lower bounds (conditioning the output entropy on the channel-energy
sample mean or on the signal-noise cross term), two genie-aided upper bounds
(revealing the same variables to the receiver), their composites, and an
exact-MI oracle that is available because the output given the symbol is
exactly Gaussian under the large-array model.
"""

from __future__ import annotations

from dataclasses import dataclass

from .entropy import (
    LN2,
    EntropyValue,
    Method,
    NumericsConfig,
    h_z_given_sh,
    h_z_given_sh_x,
    h_z_given_w,
    h_z_given_w_x,
    h_z_given_x,
    mixture_entropy_quad,
    output_mixture,
)
from .model import ChannelParams, Constellation

# Fixed allowance (bits) covering quadrature truncation in the per-point
# tolerance; statistical error is added on top from the standard errors.
QUADRATURE_TOL_BITS = 1e-3


@dataclass(frozen=True)
class BoundsResult:
    """The four bounds, their composites and the exact MI, in bits/channel use.

    ``lb``/``ub`` are the composite bounds (max of the lower, min of the upper
    ones).  Raw, unclamped differences are kept for diagnostics; the headline
    fields are clamped to the information-theoretically valid range
    [0, log2(order)].
    """

    lb_h: float
    lb_w: float
    ub_h: float
    ub_w: float
    lb: float
    ub: float
    exact_mi: float
    se_lb_h: float = 0.0
    se_lb_w: float = 0.0
    se_ub_h: float = 0.0
    se_ub_w: float = 0.0
    se_lb: float = 0.0
    se_ub: float = 0.0
    se_exact_mi: float = 0.0
    raw_lb_h: float = 0.0
    raw_lb_w: float = 0.0
    raw_ub_h: float = 0.0
    raw_ub_w: float = 0.0
    raw_exact_mi: float = 0.0

    def __post_init__(self) -> None:
        for name in ("se_lb_h", "se_lb_w", "se_ub_h", "se_ub_w",
                     "se_lb", "se_ub", "se_exact_mi"):
            if getattr(self, name) < 0.0:
                raise ValueError(f"{name} must be >= 0")

    @property
    def tol(self) -> float:
        """Per-point slack in bits: 4x the worst standard error plus the
        fixed quadrature allowance."""
        worst_se = max(self.se_lb, self.se_ub, self.se_exact_mi)
        return 4.0 * worst_se + QUADRATURE_TOL_BITS

    @property
    def bracketing_violation(self) -> float:
        """How far (bits) the point strays from lb <= exact <= ub, lb <= ub."""
        return max(
            0.0,
            self.lb - self.exact_mi,
            self.exact_mi - self.ub,
            self.lb - self.ub,
        )


def _clamp(value: float, low: float, high: float) -> float:
    return min(max(value, low), high)


def lb_h(
    params: ChannelParams,
    constellation: Constellation,
    cfg: NumericsConfig,
    method: Method = "quadrature",
) -> float:
    """Lower bound from conditioning on the channel-energy sample mean (bits)."""
    gap = h_z_given_sh(params, constellation, cfg, method).nats
    gap -= h_z_given_x(params, constellation).nats
    return max(0.0, gap / LN2)


def lb_w(
    params: ChannelParams,
    constellation: Constellation,
    cfg: NumericsConfig,
    method: Method = "quadrature",
) -> float:
    """Lower bound from conditioning on the signal-noise cross term (bits)."""
    gap = h_z_given_w(params, constellation, cfg, method).nats
    gap -= h_z_given_x(params, constellation).nats
    return max(0.0, gap / LN2)


def ub_h(
    params: ChannelParams,
    constellation: Constellation,
    cfg: NumericsConfig,
    method: Method = "quadrature",
) -> float:
    """Genie-aided upper bound with the channel energy revealed (bits)."""
    gap = h_z_given_sh(params, constellation, cfg, method).nats
    gap -= h_z_given_sh_x(params, constellation).nats
    return min(constellation.max_rate_bits, gap / LN2)


def ub_w(
    params: ChannelParams,
    constellation: Constellation,
    cfg: NumericsConfig,
    method: Method = "quadrature",
) -> float:
    """Genie-aided upper bound with the cross term revealed (bits)."""
    gap = h_z_given_w(params, constellation, cfg, method).nats
    gap -= h_z_given_w_x(params, constellation).nats
    return min(constellation.max_rate_bits, gap / LN2)


def exact_mi(
    params: ChannelParams,
    constellation: Constellation,
    cfg: NumericsConfig,
) -> float:
    """Exact mutual information under the large-array Gaussian model (bits).

    The output given the symbol is exactly Gaussian there, so the marginal is
    a P-component mixture and I = h(output) - h(output | symbol) is a single
    one-dimensional quadrature.
    """
    marginal = mixture_entropy_quad(output_mixture(params, constellation), cfg)
    raw = (marginal.nats - h_z_given_x(params, constellation).nats) / LN2
    return _clamp(raw, 0.0, constellation.max_rate_bits)


def composite(
    params: ChannelParams,
    constellation: Constellation,
    cfg: NumericsConfig,
    method: Method = "quadrature",
) -> BoundsResult:
    """Evaluate all four bounds, the composites and the exact MI at one point.

    The two expensive conditional entropies are computed once and shared by
    the lower/upper bound that uses each.
    """
    h_x = h_z_given_x(params, constellation).nats
    h_shx = h_z_given_sh_x(params, constellation).nats
    h_wx = h_z_given_w_x(params, constellation).nats
    ent_sh: EntropyValue = h_z_given_sh(params, constellation, cfg, method)
    ent_w: EntropyValue = h_z_given_w(params, constellation, cfg, method)
    marginal = mixture_entropy_quad(output_mixture(params, constellation), cfg)

    max_bits = constellation.max_rate_bits
    raw_lb_h = (ent_sh.nats - h_x) / LN2
    raw_lb_w = (ent_w.nats - h_x) / LN2
    raw_ub_h = (ent_sh.nats - h_shx) / LN2
    raw_ub_w = (ent_w.nats - h_wx) / LN2
    raw_exact = (marginal.nats - h_x) / LN2

    v_lb_h = max(0.0, raw_lb_h)
    v_lb_w = max(0.0, raw_lb_w)
    v_ub_h = min(max_bits, raw_ub_h)
    v_ub_w = min(max_bits, raw_ub_w)
    se_h = ent_sh.std_error / LN2
    se_w = ent_w.std_error / LN2

    lb_val, se_lb = max((v_lb_h, se_h), (v_lb_w, se_w))
    ub_val, se_ub = min((v_ub_h, se_h), (v_ub_w, se_w))
    return BoundsResult(
        lb_h=v_lb_h,
        lb_w=v_lb_w,
        ub_h=v_ub_h,
        ub_w=v_ub_w,
        lb=lb_val,
        ub=ub_val,
        exact_mi=_clamp(raw_exact, 0.0, max_bits),
        se_lb_h=se_h,
        se_lb_w=se_w,
        se_ub_h=se_h,
        se_ub_w=se_w,
        se_lb=se_lb,
        se_ub=se_ub,
        se_exact_mi=marginal.std_error / LN2,
        raw_lb_h=raw_lb_h,
        raw_lb_w=raw_lb_w,
        raw_ub_h=raw_ub_h,
        raw_ub_w=raw_ub_w,
        raw_exact_mi=raw_exact,
    )
