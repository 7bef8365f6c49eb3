"""Seeded Monte Carlo estimation of PUPE and spoofing probability.

Each round draws its randomness from its own stream, keyed by (seed, round index),
so a round's outcome does not depend on how rounds are scheduled or split
across worker processes.
"""

from __future__ import annotations

import dataclasses
import math
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import NamedTuple, Sequence

import numpy as np

from .analytics import AnalyticalPoint, analyze
from .channel import ChannelParams, derive_params, observe, observe_dense, occupancy_from_indices
from .codec import _check_bits
from .receiver import Provenance, RffiModel, recover_round
from .rf import DevicePopulation, sample_parameters

IMPAIRMENT_MODES = ("ideal", "pa_nonlinear")


@dataclass(frozen=True)
class SystemConfig:
    B: int = 12
    D_L: int = 50
    D_I: int = 10
    ebn0_db: float = 0.0
    rffi: RffiModel = field(default_factory=RffiModel)
    impairment_mode: str = "ideal"
    rounds: int = 10_000
    seed: int = 0
    D_tot: int | None = None  # registry size; not used by any computation
    dense: bool = False  # materialise all N channel uses per round

    def __post_init__(self):
        _check_bits(self.B)
        if self.D_L < 0 or self.D_I < 0:
            raise ValueError("D_L and D_I must be >= 0")
        if self.rounds < 1:
            raise ValueError("rounds must be >= 1")
        if self.impairment_mode not in IMPAIRMENT_MODES:
            raise ValueError(f"impairment_mode must be one of {IMPAIRMENT_MODES}, got {self.impairment_mode!r}")
        if self.seed < 0:
            raise ValueError("seed must be non-negative")
        if self.D_tot is not None and self.D_tot < self.D_L:
            raise ValueError("D_tot cannot be smaller than D_L")
        if self.D_L + self.D_I > self.N:
            warnings.warn(f"D_L + D_I = {self.D_L + self.D_I} exceeds N = {self.N}; collisions dominate",
                          stacklevel=2)

    @property
    def N(self) -> int:
        return 1 << self.B

    @property
    def channel(self) -> ChannelParams:
        return derive_params(self.ebn0_db, self.B)

    def replace(self, **changes) -> "SystemConfig":
        return dataclasses.replace(self, **changes)


class RoundTally(NamedTuple):
    recovered: int  # legitimate messages present in the list
    spoofed: int  # illegitimate messages present in the list
    noise: int  # type-C entries in the list
    list_size: int


def round_rng(seed: int, round_index: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(round_index,)))


def _round(config: SystemConfig, params: ChannelParams, legit: np.ndarray, round_index: int) -> RoundTally:
    rng = round_rng(config.seed, round_index)
    K = len(legit)
    hot = rng.integers(0, config.N, size=K)
    if config.impairment_mode == "ideal":
        population = DevicePopulation(legit)
    else:
        # fresh device draw each round: activity is re-sampled every round
        alpha, beta = sample_parameters(K, rng)
        population = DevicePopulation(legit, alpha, beta)
    occupancy = occupancy_from_indices(config.B, hot)
    obs = (observe_dense if config.dense else observe)(occupancy, population, params, rng)
    lst = recover_round(obs, occupancy, params, config.rffi, config.D_L, population, rng)
    counts = np.bincount(lst.tag, minlength=3)
    return RoundTally(int(counts[Provenance.TYPE_A]), int(counts[Provenance.TYPE_B]),
                      int(counts[Provenance.TYPE_C]), len(lst))


def _legit_mask(config: SystemConfig) -> np.ndarray:
    return np.arange(config.D_L + config.D_I) < config.D_L


def run_round(config: SystemConfig, round_index: int) -> RoundTally:
    return _round(config, config.channel, _legit_mask(config), round_index)


def _run_block(config: SystemConfig, start: int, stop: int) -> np.ndarray:
    params, legit = config.channel, _legit_mask(config)
    total = np.zeros(4, dtype=np.int64)
    for r in range(start, stop):
        total += _round(config, params, legit, r)
    return total


@dataclass(frozen=True)
class EstimateReport:
    config: SystemConfig
    pupe_hat: float | None
    spoof_hat: float | None
    stderr_pupe: float | None
    stderr_spoof: float | None
    rounds_run: int
    analytical: AnalyticalPoint
    mean_list_size: float
    mean_noise_entries: float


def _binomial_se(p: float, n: int) -> float:
    return math.sqrt(p * (1.0 - p) / n)


def estimate(config: SystemConfig, workers: int = 1, chunk: int = 2_000) -> EstimateReport:
    """Monte Carlo PUPE and spoofing estimates with binomial standard errors.

    ``workers > 1`` spreads contiguous round blocks over processes; tallies are
    integer sums, so the result is identical for any worker count.
    """
    R = config.rounds
    if workers > 1 and R > chunk:
        bounds = [(s, min(s + chunk, R)) for s in range(0, R, chunk)]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = pool.map(_run_block, [config] * len(bounds), *zip(*bounds))
            total = np.sum(list(parts), axis=0)
    else:
        total = _run_block(config, 0, R)
    recovered, spoofed, noise, size = (int(v) for v in total)

    pupe = se_pupe = None
    if config.D_L > 0:
        n = R * config.D_L
        pupe = 1.0 - recovered / n
        se_pupe = _binomial_se(pupe, n)
    spoof, se_spoof = 0.0, 0.0
    if config.D_I > 0:
        n = R * config.D_I
        spoof = spoofed / n
        se_spoof = _binomial_se(spoof, n)

    point = analyze(config.D_L, config.D_I, config.B, config.ebn0_db, config.rffi.p_md, config.rffi.p_fa)
    return EstimateReport(config, pupe, spoof, se_pupe, se_spoof, R, point, size / R, noise / R)


SWEEP_AXES = {"D_L": "D_L", "dl": "D_L", "D_I": "D_I", "di": "D_I",
              "ebn0_db": "ebn0_db", "p_fa": "p_fa", "pfa": "p_fa"}


def derived_seed(seed: int, i: int) -> int:
    return int(np.random.SeedSequence(seed, spawn_key=(1 << 20, i)).generate_state(1, np.uint32)[0])


def sweep_configs(base: SystemConfig, axis: str, values: Sequence) -> list[SystemConfig]:
    if axis not in SWEEP_AXES:
        raise ValueError(f"unknown sweep axis {axis!r}; choose from {sorted(set(SWEEP_AXES.values()))}")
    values = list(values)
    if not values:
        raise ValueError("sweep needs at least one value")
    name = SWEEP_AXES[axis]
    out = []
    for i, v in enumerate(values):
        if name == "p_fa":
            change = {"rffi": RffiModel(base.rffi.p_md, float(v))}
        elif name == "ebn0_db":
            change = {"ebn0_db": float(v)}
        else:
            change = {name: int(v)}
        out.append(base.replace(seed=derived_seed(base.seed, i), **change))
    return out


def sweep(base: SystemConfig, axis: str, values: Sequence, workers: int = 1) -> list[EstimateReport]:
    """One report per value, in order, each with its own derived seed."""
    return [estimate(c, workers) for c in sweep_configs(base, axis, values)]
