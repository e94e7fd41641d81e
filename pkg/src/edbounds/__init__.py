"""Mutual-information bounds for PAM energy detection with large antenna arrays."""

from .benchmark import AdaptiveChoice, AdaptiveConfig, SimoParams, select_constellation, simo_capacity
from .bounds import BoundsResult, composite, exact_mi, lb_h, lb_w, ub_h, ub_w
from .entropy import (
    EntropyValue,
    MixtureSpec,
    NumericsConfig,
    gaussian_entropy,
    h_z_given_sh,
    h_z_given_sh_x,
    h_z_given_w,
    h_z_given_w_x,
    h_z_given_x,
    mixture_entropy_mc,
    mixture_entropy_quad,
)
from .model import (
    ChannelParams,
    Constellation,
    GaussianStat,
    make_constellation,
    moments_z_given_sh_x,
    moments_z_given_w_x,
    moments_z_given_x,
    stat_sh,
    stat_sn,
    stat_w,
)
from .sim import SampleBatch, empirical_mi_plugin, ks_distance_to_gaussian, simulate_exact

__version__ = "0.1.0"

__all__ = [
    "AdaptiveChoice",
    "AdaptiveConfig",
    "BoundsResult",
    "ChannelParams",
    "Constellation",
    "EntropyValue",
    "GaussianStat",
    "MixtureSpec",
    "NumericsConfig",
    "SampleBatch",
    "SimoParams",
    "composite",
    "empirical_mi_plugin",
    "exact_mi",
    "gaussian_entropy",
    "h_z_given_sh",
    "h_z_given_sh_x",
    "h_z_given_w",
    "h_z_given_w_x",
    "h_z_given_x",
    "ks_distance_to_gaussian",
    "lb_h",
    "lb_w",
    "make_constellation",
    "mixture_entropy_mc",
    "mixture_entropy_quad",
    "moments_z_given_sh_x",
    "moments_z_given_w_x",
    "moments_z_given_x",
    "select_constellation",
    "simo_capacity",
    "simulate_exact",
    "stat_sh",
    "stat_sn",
    "stat_w",
    "ub_h",
    "ub_w",
]
