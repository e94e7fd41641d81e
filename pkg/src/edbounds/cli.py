"""Command-line front end: reproducible bound sweeps and approximation checks.

``edbounds sweep`` evaluates the bound grid and writes one CSV row per
(antenna count, alphabet size, SNR) point; ``edbounds validate`` measures how
far the exact detector statistics are from their large-array Gaussian laws.
Configuration comes from flags, optionally backed by a key=value config file
(flags win).
"""

from __future__ import annotations

import argparse
import math
import sys
import time
from dataclasses import dataclass, replace
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from . import benchmark, bounds, sim
from .entropy import NumericsConfig
from .model import ChannelParams, make_constellation, stat_sh, stat_sn, stat_w

CSV_COLUMNS = (
    "snr_db", "M", "P",
    "lb_h", "lb_w", "ub_h", "ub_w", "lb", "ub", "exact_mi",
    "simo_capacity", "adaptive_P", "adaptive_rate",
)

EXIT_OK = 0
EXIT_RUNTIME = 1
EXIT_USAGE = 2
EXIT_VIOLATION = 3

_DEFAULTS = {
    "snr-db": "-20:30:2",
    "antennas": "50,200,400",
    "pam": "2,4,8,16",
    "sigma-h2": "1.0",
    "mean-energy": "1.0",
    "method": "quad",
    "seed": "1",
    "delta": "0.05",
    "a-const": "1.0",
    "out": "sweep.csv",
    "samples": "100000",
}

_METHODS = {"quad": "quadrature", "mc": "monte-carlo"}

# Margin multiplier on the KS sampling fluctuation (~1.36/sqrt(n)) added to
# the irreducible model distance when validating the Gaussian approximation.
_KS_MARGIN = 3.0


class UsageError(ValueError):
    """Bad flag/config values; maps to exit status 2."""


@dataclass(frozen=True)
class SweepSpec:
    """Full description of one sweep run."""

    snr_db: Tuple[float, float, float]
    antennas: Tuple[int, ...]
    pam_orders: Tuple[int, ...]
    sigma_h2: float = 1.0
    mean_energy: float = 1.0
    method: str = "quadrature"
    seed: int = 1
    delta: float = 0.05
    a_const: float = 1.0
    out: str = "sweep.csv"

    def __post_init__(self) -> None:
        start, stop, step = self.snr_db
        if step <= 0.0:
            raise UsageError(f"SNR step must be positive, got {step}")
        if stop < start:
            raise UsageError("SNR stop must not be below start")
        if not self.antennas or any(m < 1 for m in self.antennas):
            raise UsageError("antennas must be a nonempty list of positive integers")
        if not self.pam_orders or any(p < 1 for p in self.pam_orders):
            raise UsageError("pam orders must be a nonempty list of positive integers")
        if self.sigma_h2 <= 0.0 or self.mean_energy <= 0.0:
            raise UsageError("sigma-h2 and mean-energy must be positive")
        if self.method not in _METHODS.values():
            raise UsageError(f"method must be one of {sorted(_METHODS)}")
        if not 0.0 <= self.delta < 1.0:
            raise UsageError(f"delta must be in [0, 1), got {self.delta}")
        if self.a_const <= 0.0:
            raise UsageError("a-const must be positive")
        if not 0 <= self.seed < 2**64:
            raise UsageError("seed must fit in 64 unsigned bits")

    def snr_points(self) -> List[float]:
        start, stop, step = self.snr_db
        count = int(math.floor((stop - start) / step + 1e-9)) + 1
        return [start + i * step for i in range(count)]


@dataclass(frozen=True)
class SweepRow:
    """One CSV record of the sweep output."""

    snr_db: float
    antennas: int
    pam_order: int
    result: bounds.BoundsResult
    simo_capacity: float
    adaptive_order: int
    adaptive_rate: float

    def csv_values(self) -> List[str]:
        r = self.result
        floats = (
            r.lb_h, r.lb_w, r.ub_h, r.ub_w, r.lb, r.ub, r.exact_mi,
            self.simo_capacity,
        )
        return (
            [f"{self.snr_db:.9g}", str(self.antennas), str(self.pam_order)]
            + [f"{v:.9g}" for v in floats]
            + [str(self.adaptive_order), f"{self.adaptive_rate:.9g}"]
        )


def _derived_seed(seed: int, index: int) -> int:
    """Independent 64-bit stream key for one grid row; adding rows later does
    not disturb earlier streams."""
    state = np.random.SeedSequence(seed, spawn_key=(index,)).generate_state(2)
    return int(state[0]) | (int(state[1]) << 32)


def _evaluate_grid(spec: SweepSpec) -> List[SweepRow]:
    snrs = spec.snr_points()
    ms = sorted(spec.antennas)
    ps = sorted(spec.pam_orders)
    order = [(m, p, s) for m in ms for p in ps for s in snrs]
    results: Dict[Tuple[int, int, float], bounds.BoundsResult] = {}
    for idx, (m, p, s) in enumerate(order):
        params = ChannelParams.from_snr_db(s, m, spec.sigma_h2, spec.mean_energy)
        constellation = make_constellation(p, spec.mean_energy)
        cfg = NumericsConfig(seed=_derived_seed(spec.seed, idx))
        results[(m, p, s)] = bounds.composite(params, constellation, cfg, spec.method)

    candidates = tuple(p for p in ps if p >= 2)
    adaptive: Dict[Tuple[int, float], benchmark.AdaptiveChoice] = {}
    if candidates:
        config = benchmark.AdaptiveConfig(spec.delta, candidates)
        for m in ms:
            per_point = [
                {p: results[(m, p, s)].lb for p in candidates} for s in snrs
            ]
            for s, choice in zip(snrs, benchmark.select_constellation(per_point, config)):
                adaptive[(m, s)] = choice
    else:
        for m in ms:
            for s in snrs:
                adaptive[(m, s)] = benchmark.AdaptiveChoice(max(ps), 0.0)

    simo = benchmark.SimoParams(a_const=spec.a_const)
    rows = []
    for m, p, s in order:
        rho = 10.0 ** (s / 10.0)
        choice = adaptive[(m, s)]
        rows.append(
            SweepRow(
                snr_db=s,
                antennas=m,
                pam_order=p,
                result=results[(m, p, s)],
                simo_capacity=benchmark.simo_capacity(m, rho, simo),
                adaptive_order=choice.order,
                adaptive_rate=choice.rate,
            )
        )
    return rows


def run_sweep(spec: SweepSpec) -> int:
    """Evaluate the grid, write the CSV and print a one-line summary.

    Identical specs produce byte-identical files.  Returns a nonzero status
    when any point violates its bound bracket beyond tolerance.
    """
    started = time.perf_counter()
    rows = _evaluate_grid(spec)
    with open(spec.out, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(",".join(CSV_COLUMNS) + "\n")
        for row in rows:
            fh.write(",".join(row.csv_values()) + "\n")
    elapsed = time.perf_counter() - started
    worst = max((r.result.bracketing_violation for r in rows), default=0.0)
    excess = max(
        (r.result.bracketing_violation - r.result.tol for r in rows), default=0.0
    )
    print(
        f"sweep: {len(rows)} grid points in {elapsed:.1f} s; "
        f"max bracketing violation {worst:.3e} bits"
    )
    if excess > 0.0:
        offender = max(rows, key=lambda r: r.result.bracketing_violation - r.result.tol)
        print(
            f"ERROR: bracketing violated beyond tolerance at "
            f"M={offender.antennas} P={offender.pam_order} "
            f"SNR={offender.snr_db:g} dB "
            f"(violation {offender.result.bracketing_violation:.3e} bits, "
            f"tol {offender.result.tol:.3e})",
            file=sys.stderr,
        )
        return EXIT_VIOLATION
    return EXIT_OK


def validate_approximation(spec: SweepSpec, n: int) -> int:
    """Report KS distances of the exact detector statistics to their Gaussian
    laws for every antenna count in the spec.

    A statistic passes when its distance stays within the irreducible model
    distance plus a sampling margin.  Returns nonzero if any check fails.
    """
    if n < 100:
        raise UsageError(f"need at least 100 samples, got {n}")
    snr0 = spec.snr_points()[0]
    constellation = make_constellation(sorted(spec.pam_orders)[0], spec.mean_energy)
    sampling_margin = _KS_MARGIN * 1.36 / math.sqrt(n)
    all_ok = True
    for i, m in enumerate(sorted(spec.antennas)):
        params = ChannelParams.from_snr_db(snr0, m, spec.sigma_h2, spec.mean_energy)
        batch = sim.simulate_exact(
            params, constellation, n, _derived_seed(spec.seed, i)
        )
        threshold = sim.clt_gaussian_ks_limit(m) + sampling_margin
        distances = {
            "sh": sim.ks_distance_to_gaussian(batch.sh_values, stat_sh(params)),
            "sn": sim.ks_distance_to_gaussian(batch.sn_values, stat_sn(params)),
            "w": sim.ks_distance_to_gaussian(batch.w_values, stat_w(params)),
        }
        ok = all(d <= threshold for d in distances.values())
        all_ok &= ok
        print(
            f"M={m:5d}: KS(sh)={distances['sh']:.4f} KS(sn)={distances['sn']:.4f} "
            f"KS(w)={distances['w']:.4f} threshold={threshold:.4f} "
            f"{'PASS' if ok else 'FAIL'}"
        )
    return EXIT_OK if all_ok else EXIT_VIOLATION


def load_config_file(path: str) -> Dict[str, str]:
    """Read a key=value config file; ``#`` starts a comment line."""
    values: Dict[str, str] = {}
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise UsageError(f"{path}:{lineno}: expected key=value, got {line!r}")
            key, value = line.split("=", 1)
            key = key.strip()
            if key not in _DEFAULTS:
                raise UsageError(f"{path}:{lineno}: unknown key {key!r}")
            values[key] = value.strip()
    return values


def _parse_snr_range(text: str) -> Tuple[float, float, float]:
    parts = text.split(":")
    if len(parts) != 3:
        raise UsageError(f"expected START:STOP:STEP, got {text!r}")
    try:
        start, stop, step = (float(p) for p in parts)
    except ValueError as exc:
        raise UsageError(f"bad SNR range {text!r}") from exc
    return start, stop, step


def _parse_int_list(text: str) -> Tuple[int, ...]:
    try:
        return tuple(int(p) for p in text.split(",") if p.strip())
    except ValueError as exc:
        raise UsageError(f"bad integer list {text!r}") from exc


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="edbounds",
        description="Mutual-information bound sweeps for PAM energy detection "
        "with large antenna arrays.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_text in (
        ("sweep", "evaluate the bound grid and write a CSV"),
        ("validate", "check the Gaussian approximation of the detector statistics"),
    ):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--snr-db", help="SNR grid as START:STOP:STEP in dB")
        p.add_argument("--antennas", help="comma-separated antenna counts")
        p.add_argument("--pam", help="comma-separated PAM alphabet sizes")
        p.add_argument("--sigma-h2", help="channel power")
        p.add_argument("--mean-energy", help="average transmit energy")
        p.add_argument("--method", choices=sorted(_METHODS), help="quad or mc")
        p.add_argument("--seed", help="base RNG seed (64-bit unsigned)")
        p.add_argument("--delta", help="adaptive-selector acceptable rate loss")
        p.add_argument("--a-const", help="SIMO capacity normalization constant")
        p.add_argument("--out", help="output CSV path (sweep only)")
        p.add_argument("--config", help="key=value config file; flags override it")
        if name == "validate":
            p.add_argument("--samples", help="simulation rows per antenna count")
    return parser


def _effective(args: argparse.Namespace, config: Dict[str, str], key: str) -> str:
    flag = getattr(args, key.replace("-", "_"), None)
    if flag is not None:
        return str(flag)
    if key in config:
        return config[key]
    return _DEFAULTS[key]


def _spec_from_args(args: argparse.Namespace) -> SweepSpec:
    config = load_config_file(args.config) if args.config else {}

    def get(key: str) -> str:
        return _effective(args, config, key)

    try:
        seed = int(get("seed"))
        spec = SweepSpec(
            snr_db=_parse_snr_range(get("snr-db")),
            antennas=_parse_int_list(get("antennas")),
            pam_orders=_parse_int_list(get("pam")),
            sigma_h2=float(get("sigma-h2")),
            mean_energy=float(get("mean-energy")),
            method=_METHODS[get("method")] if get("method") in _METHODS
            else get("method"),
            seed=seed,
            delta=float(get("delta")),
            a_const=float(get("a-const")),
            out=get("out"),
        )
    except UsageError:
        raise
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    return spec


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        spec = _spec_from_args(args)
        if args.command == "sweep":
            return run_sweep(spec)
        config = load_config_file(args.config) if args.config else {}
        samples = int(_effective(args, config, "samples"))
        return validate_approximation(spec, samples)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
