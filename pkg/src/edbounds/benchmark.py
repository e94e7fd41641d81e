"""Benchmarks: SIMO fast-fading capacity and the adaptive alphabet selector.

The capacity of the memoryless Rayleigh-fading SIMO channel with an average
power constraint gives an absolute reference for any scheme on that channel.
Its normalization constant ``a`` comes from the capacity-achieving
distribution and is treated as an input here; structural properties (antenna
scaling, limits) do not depend on it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import List, Mapping, NamedTuple, Sequence, Tuple

from .entropy import LN2


@dataclass(frozen=True)
class SimoParams:
    """Normalization constant of the capacity-achieving input distribution.

    ``log_a_in_bits`` picks how the log(a) term is read: base 2 when True,
    natural log converted to bits otherwise (the default).
    """

    a_const: float = 1.0
    log_a_in_bits: bool = False

    def __post_init__(self) -> None:
        if self.a_const <= 0.0:
            raise ValueError(f"a_const must be positive, got {self.a_const}")


@dataclass(frozen=True)
class AdaptiveConfig:
    """Acceptable rate-loss fraction and the admissible alphabet sizes."""

    delta: float
    candidates: Tuple[int, ...]

    def __post_init__(self) -> None:
        if not 0.0 <= self.delta < 1.0:
            raise ValueError(f"delta must be in [0, 1), got {self.delta}")
        if len(self.candidates) == 0:
            raise ValueError("candidates must be nonempty")
        cand = tuple(int(p) for p in self.candidates)
        if any(p < 2 for p in cand):
            raise ValueError("candidates must all be >= 2")
        if list(cand) != sorted(set(cand)):
            raise ValueError("candidates must be strictly increasing")
        object.__setattr__(self, "candidates", cand)


class AdaptiveChoice(NamedTuple):
    order: int
    rate: float


def simo_capacity(
    antennas: float, rho: float, simo: SimoParams = SimoParams()
) -> float:
    """Average-power SIMO fast-fading capacity in bits/channel use.

    0.5*log2(M / (2*pi)) + log(a) + rho / (a * (1 + rho)), with the last term
    in nats converted to bits.  Doubling the antenna count adds exactly half
    a bit.
    """
    if antennas <= 0.0:
        raise ValueError(f"antennas must be positive, got {antennas}")
    if rho <= 0.0:
        raise ValueError(f"rho must be positive, got {rho}")
    if simo.log_a_in_bits:
        log_a = math.log2(simo.a_const)
    else:
        log_a = math.log(simo.a_const) / LN2
    rho_term = rho / (simo.a_const * (1.0 + rho)) / LN2
    return 0.5 * math.log2(antennas / (2.0 * math.pi)) + log_a + rho_term


def select_constellation(
    lower_bounds: Sequence[Mapping[int, float]],
    adaptive: AdaptiveConfig,
) -> List[AdaptiveChoice]:
    """Pick an alphabet size per grid point from precomputed lower bounds.

    For each point, the chosen size is the largest candidate whose lower
    bound achieves at least (1 - delta) of its maximal rate log2(P).  When no
    candidate qualifies, the candidate with the highest lower bound wins,
    smaller sizes breaking ties.  Returns the choice together with its lower
    bound (the adaptive-rate curve).
    """
    choices: List[AdaptiveChoice] = []
    for point in lower_bounds:
        missing = [p for p in adaptive.candidates if p not in point]
        if missing:
            raise ValueError(f"lower bounds missing for candidates {missing}")
        qualifying = [
            p
            for p in adaptive.candidates
            if point[p] / math.log2(p) >= 1.0 - adaptive.delta
        ]
        if qualifying:
            chosen = qualifying[-1]
        else:
            best = max(point[p] for p in adaptive.candidates)
            chosen = next(p for p in adaptive.candidates if point[p] == best)
        choices.append(AdaptiveChoice(chosen, point[chosen]))
    return choices
