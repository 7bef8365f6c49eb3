"""Per-channel-use detection, RFFI authentication and recovered-list assembly."""

from __future__ import annotations

import enum
from collections.abc import Sequence
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .analytics import q_function
from .channel import ChannelParams, ChannelUseObservation, ObservationBatch, RoundOccupancy
from .codec import MessagePayload, decode_index
from .rf import DevicePopulation


class Provenance(enum.IntEnum):
    """Origin of a recovered entry; evaluation metadata, invisible to a real receiver."""

    TYPE_A = 0  # legitimate device, collision-free
    TYPE_B = 1  # illegitimate device accepted by RFFI
    TYPE_C = 2  # noise on an idle channel use


@dataclass(frozen=True)
class RffiModel:
    p_md: float = 0.0
    p_fa: float = 0.0

    def __post_init__(self):
        for name in ("p_md", "p_fa"):
            p = getattr(self, name)
            if not 0.0 <= p <= 1.0:
                raise ValueError(f"{name} must lie in [0, 1], got {p}")


PERFECT_RFFI = RffiModel(0.0, 0.0)


class RecoveredList(Sequence):
    """Accepted (channel-use index, message, provenance) entries."""

    def __init__(self, B: int, index, tag, check: bool = True):
        self.B = B
        self.index = np.asarray(index, dtype=np.int64)
        self.tag = np.asarray(tag, dtype=np.int8)
        if check and len(np.unique(self.index)) != len(self.index):
            raise ValueError("recovered channel-use indices must be distinct")

    def __len__(self):
        return len(self.index)

    def __getitem__(self, i):
        n = int(self.index[i])
        return n, decode_index(n, self.B), Provenance(int(self.tag[i]))

    @property
    def messages(self) -> list[MessagePayload]:
        return [decode_index(int(n), self.B) for n in self.index]

    def count(self, tag: Provenance) -> int:
        return int(np.count_nonzero(self.tag == tag))


def demodulate_use(observation: ChannelUseObservation, params: ChannelParams) -> int:
    return int(observation.value > params.threshold)


def _authenticate(counts: np.ndarray, legitimate: np.ndarray, model: RffiModel, u: np.ndarray) -> np.ndarray:
    # collided uses always fail; empty uses behave like an unregistered transmitter
    p_accept = np.where(legitimate, 1.0 - model.p_md, model.p_fa)
    return (counts <= 1) & (u < p_accept)


def authenticate_use(occupant_count: int, occupant_legitimate: bool, model: RffiModel, rng=None) -> bool:
    if occupant_count < 0:
        raise ValueError("occupant_count must be >= 0")
    u = np.random.default_rng(rng).random()
    legit = occupant_legitimate and occupant_count == 1
    return bool(_authenticate(np.array([occupant_count]), np.array([legit]), model, np.array([u]))[0])


def _truncate(n_accepted: int, D_L: int, rng) -> np.ndarray | None:
    if n_accepted <= D_L:
        return None
    return np.sort(rng.choice(n_accepted, size=D_L, replace=False))


def build_list(accepted: Iterable[tuple[int, MessagePayload, Provenance]], D_L: int, rng=None,
               B: int | None = None) -> RecoveredList:
    """Cap the accepted entries at D_L by keeping a uniformly random subset."""
    accepted = list(accepted)
    if B is None:
        if not accepted:
            raise ValueError("B is required for an empty accepted list")
        B = accepted[0][1].B
    index = np.array([a[0] for a in accepted], dtype=np.int64)
    tag = np.array([int(a[2]) for a in accepted], dtype=np.int8)
    keep = _truncate(len(accepted), D_L, np.random.default_rng(rng))
    if keep is not None:
        index, tag = index[keep], tag[keep]
    return RecoveredList(B, index, tag, check=False)


def _draw_idle_indices(count: int, occupied: np.ndarray, N: int, rng) -> np.ndarray:
    """``count`` distinct channel uses drawn uniformly from the idle ones."""
    if count == 0:
        return np.empty(0, dtype=np.int64)
    n_idle = N - len(occupied)
    if count * 4 > n_idle:
        idle = np.setdiff1d(np.arange(N), occupied, assume_unique=True)
        return np.sort(rng.choice(idle, size=count, replace=False))
    taken = set(occupied.tolist())
    out: list[int] = []
    while len(out) < count:
        for n in rng.integers(0, N, size=2 * (count - len(out))).tolist():
            if n not in taken:
                taken.add(n)
                out.append(n)
                if len(out) == count:
                    break
    return np.sort(np.array(out, dtype=np.int64))


def recover_round(observations: ObservationBatch, occupancy: RoundOccupancy, params: ChannelParams,
                  rffi: RffiModel, D_L: int, registry: DevicePopulation, rng=None) -> RecoveredList:
    """Demodulate, authenticate and list one round.

    If ``observations`` only covers occupied uses, accepted false alarms on idle
    uses are drawn as Binomial(idle_count, P01 * p_fa) at uniformly chosen idle
    indices; otherwise idle observations are processed like any other.
    """
    rng = np.random.default_rng(rng)
    obs = observations
    B = occupancy.B

    # legitimacy of the single occupant of each observed use
    first_dev = np.empty(len(occupancy.indices), dtype=np.int64)
    first_dev[occupancy.slot] = occupancy.device_ids
    pos = np.searchsorted(occupancy.indices, obs.index)
    pos = np.minimum(pos, max(len(occupancy.indices) - 1, 0))
    occupied = (obs.occupant_count > 0)
    legit = np.zeros(len(obs), dtype=bool)
    if occupied.any():
        legit[occupied] = registry.legitimate[first_dev[pos[occupied]]]

    detected = obs.value > params.threshold
    u = rng.random(len(obs))
    ok = detected & _authenticate(obs.occupant_count, legit & (obs.occupant_count == 1), rffi, u)

    index = obs.index[ok]
    tag = np.where(obs.occupant_count[ok] == 0, Provenance.TYPE_C,
                   np.where(legit[ok], Provenance.TYPE_A, Provenance.TYPE_B)).astype(np.int8)

    if not np.any(obs.occupant_count == 0):
        p_idle = float(q_function(params.threshold / params.sigma)) * rffi.p_fa if params.sigma > 0 else 0.0
        n_c = int(rng.binomial(occupancy.idle_count, p_idle)) if p_idle > 0 else 0
        if n_c:
            index = np.concatenate([index, _draw_idle_indices(n_c, occupancy.indices, occupancy.N, rng)])
            tag = np.concatenate([tag, np.full(n_c, Provenance.TYPE_C, dtype=np.int8)])

    keep = _truncate(len(index), D_L, rng)
    if keep is not None:
        index, tag = index[keep], tag[keep]
    return RecoveredList(B, index, tag, check=False)
