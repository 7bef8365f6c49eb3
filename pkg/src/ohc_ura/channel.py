"""Channel-use occupancy and matched-filter observations over AWGN.

Normalisation: A = Ts = 1, so Es = 1 and Eb = 1/B. Each channel use is reduced to
its matched-filter output, value = sum of occupant amplitudes + N(0, N0/2).
Idle uses are only materialised by :func:`observe_dense`; the sparse path leaves
them to the receiver's statistical false-alarm draw.
"""

from __future__ import annotations

import math
from collections.abc import Sequence
from dataclasses import dataclass
from typing import Iterable, NamedTuple

import numpy as np

from .codec import MessagePayload, _check_bits
from .rf import DevicePopulation


@dataclass(frozen=True)
class ChannelParams:
    ebn0_db: float
    B: int
    A: float = 1.0
    Ts: float = 1.0

    def __post_init__(self):
        _check_bits(self.B)
        if math.isnan(self.ebn0_db):
            raise ValueError("ebn0_db is NaN")

    @property
    def N(self) -> int:
        return 1 << self.B

    @property
    def Es(self) -> float:
        return self.A ** 2 * self.Ts

    @property
    def Eb(self) -> float:
        return self.Es / self.B

    @property
    def ebn0(self) -> float:
        return 10.0 ** (self.ebn0_db / 10.0)

    @property
    def N0(self) -> float:
        if self.ebn0_db == math.inf:
            return 0.0
        if self.ebn0_db == -math.inf:
            return math.inf
        return self.Es / (self.B * self.ebn0)

    @property
    def sigma(self) -> float:
        return math.sqrt(self.N0 / 2.0)

    @property
    def threshold(self) -> float:
        return self.A / 2.0


def derive_params(ebn0_db: float, B: int, A: float = 1.0, Ts: float = 1.0) -> ChannelParams:
    return ChannelParams(float(ebn0_db), B, A, Ts)


@dataclass(frozen=True)
class RoundOccupancy:
    """Which devices transmit on which channel use in one round.

    ``indices`` are the occupied channel uses (sorted, unique) and ``counts`` the
    number of transmitters on each. ``slot[k]`` locates device ``device_ids[k]``
    in ``indices``.
    """

    B: int
    indices: np.ndarray
    counts: np.ndarray
    device_ids: np.ndarray
    slot: np.ndarray

    @property
    def N(self) -> int:
        return 1 << self.B

    @property
    def idle_count(self) -> int:
        return self.N - len(self.indices)

    def occupants(self, n: int) -> list[int]:
        pos = np.searchsorted(self.indices, n)
        if pos == len(self.indices) or self.indices[pos] != n:
            return []
        return self.device_ids[self.slot == pos].tolist()

    def as_dict(self) -> dict[int, list[int]]:
        return {int(n): self.device_ids[self.slot == i].tolist() for i, n in enumerate(self.indices)}


def occupancy_from_indices(B: int, hot_indices, device_ids=None) -> RoundOccupancy:
    hot = np.asarray(hot_indices, dtype=np.int64)
    ids = np.arange(len(hot)) if device_ids is None else np.asarray(device_ids, dtype=np.int64)
    if hot.size and (hot.min() < 0 or hot.max() >= (1 << B)):
        raise ValueError("hot index outside [0, 2**B)")
    indices, slot, counts = np.unique(hot, return_inverse=True, return_counts=True)
    return RoundOccupancy(B, indices, counts, ids, slot.reshape(-1))


def assign_round(messages: Iterable[tuple[int, MessagePayload]], B: int | None = None) -> RoundOccupancy:
    messages = list(messages)
    widths = {m.B for _, m in messages}
    if B is not None:
        widths.add(B)
    if len(widths) > 1:
        raise ValueError(f"messages in one round must share B, got {sorted(widths)}")
    if not widths:
        raise ValueError("B is required when the message list is empty")
    (B,) = widths
    return occupancy_from_indices(B, [m.index for _, m in messages], [d for d, _ in messages])


class ChannelUseObservation(NamedTuple):
    index: int
    value: float
    occupant_count: int


class ObservationBatch(Sequence):
    """Matched-filter outputs for a set of channel uses, stored as arrays."""

    def __init__(self, index, value, occupant_count):
        self.index = np.asarray(index, dtype=np.int64)
        self.value = np.asarray(value, dtype=float)
        self.occupant_count = np.asarray(occupant_count, dtype=np.int64)

    def __len__(self):
        return len(self.index)

    def __getitem__(self, i):
        return ChannelUseObservation(int(self.index[i]), float(self.value[i]), int(self.occupant_count[i]))


def _superposed(occupancy: RoundOccupancy, profiles: DevicePopulation, params: ChannelParams) -> np.ndarray:
    amps = profiles.tx_amplitude(params.A, occupancy.device_ids)
    return np.bincount(occupancy.slot, weights=amps, minlength=len(occupancy.indices))


def observe(occupancy: RoundOccupancy, profiles: DevicePopulation, params: ChannelParams,
            rng=None) -> ObservationBatch:
    """One noisy observation per occupied channel use."""
    rng = np.random.default_rng(rng)
    clean = _superposed(occupancy, profiles, params)
    noise = params.sigma * rng.standard_normal(len(clean)) if params.sigma > 0 else 0.0
    return ObservationBatch(occupancy.indices, clean + noise, occupancy.counts)


def observe_dense(occupancy: RoundOccupancy, profiles: DevicePopulation, params: ChannelParams,
                  rng=None) -> ObservationBatch:
    """Observations for all N channel uses, idle ones carrying noise only."""
    rng = np.random.default_rng(rng)
    N = occupancy.N
    clean = np.zeros(N)
    counts = np.zeros(N, dtype=np.int64)
    clean[occupancy.indices] = _superposed(occupancy, profiles, params)
    counts[occupancy.indices] = occupancy.counts
    noise = params.sigma * rng.standard_normal(N) if params.sigma > 0 else 0.0
    return ObservationBatch(np.arange(N), clean + noise, counts)
