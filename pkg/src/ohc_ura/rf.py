"""Device RF impairments: memoryless PA nonlinearity psi(s) = alpha*s / (1 + beta*s**2).

With a rectangular pulse and a memoryless amplifier, a transmitted "on" symbol of
amplitude A leaves the device as a constant pulse of height psi(A), so the model
is applied per symbol amplitude rather than to an oversampled waveform.
"""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np

DEFAULT_ALPHA = 2.1587
DEFAULT_BETA = 1.1417
DEFAULT_SPREAD = 0.05


@dataclass(frozen=True)
class DeviceProfile:
    device_id: int
    alpha: float = DEFAULT_ALPHA
    beta: float = DEFAULT_BETA
    legitimate: bool = True

    def __post_init__(self):
        if not (self.alpha > 0 and self.beta > 0):
            raise ValueError(f"alpha and beta must be positive, got ({self.alpha}, {self.beta})")


def pa_response(amplitude, alpha, beta):
    """Vectorised psi; broadcasts over any of its arguments."""
    a = np.asarray(amplitude, dtype=float)
    return alpha * a / (1.0 + beta * a * a)


def distort(amplitude: float, profile: DeviceProfile) -> float:
    return float(pa_response(amplitude, profile.alpha, profile.beta))


def ideal_passthrough(amplitude: float) -> float:
    return amplitude


class DevicePopulation(Sequence):
    """Array-backed registry of device profiles, indexed by device id.

    ``alpha``/``beta`` set to None means impairment-free devices (psi = identity).
    """

    def __init__(self, legitimate, alpha=None, beta=None):
        self.legitimate = np.asarray(legitimate, dtype=bool)
        if (alpha is None) != (beta is None):
            raise ValueError("alpha and beta must both be given or both omitted")
        if alpha is not None:
            alpha = np.asarray(alpha, dtype=float)
            beta = np.asarray(beta, dtype=float)
            if alpha.shape != self.legitimate.shape or beta.shape != self.legitimate.shape:
                raise ValueError("alpha, beta and legitimate must have equal length")
            if np.any(alpha <= 0) or np.any(beta <= 0):
                raise ValueError("alpha and beta must be positive")
        self.alpha = alpha
        self.beta = beta

    @property
    def ideal(self) -> bool:
        return self.alpha is None

    def __len__(self) -> int:
        return len(self.legitimate)

    def __getitem__(self, i):
        if isinstance(i, slice):
            return [self[j] for j in range(*i.indices(len(self)))]
        i = int(i)
        if not 0 <= i < len(self):
            raise IndexError(f"unknown device id {i}")
        if self.ideal:
            # passthrough is not expressible as (alpha, beta); expose nominal values
            return DeviceProfile(i, legitimate=bool(self.legitimate[i]))
        return DeviceProfile(i, float(self.alpha[i]), float(self.beta[i]), bool(self.legitimate[i]))

    def tx_amplitude(self, A: float = 1.0, device_ids=None) -> np.ndarray:
        """Per-device amplitude of an "on" symbol after the front end."""
        ids = np.arange(len(self)) if device_ids is None else np.asarray(device_ids, dtype=np.intp)
        if ids.size and (ids.min() < 0 or ids.max() >= len(self)):
            raise KeyError("occupant device id not present in the registry")
        if self.ideal:
            return np.full(ids.shape, float(A))
        return pa_response(A, self.alpha[ids], self.beta[ids])

    @classmethod
    def from_profiles(cls, profiles: Sequence[DeviceProfile]) -> "DevicePopulation":
        if [p.device_id for p in profiles] != list(range(len(profiles))):
            raise ValueError("device ids must be 0..count-1 in order")
        return cls([p.legitimate for p in profiles],
                   [p.alpha for p in profiles], [p.beta for p in profiles])


def sample_parameters(count: int, rng, spread: float = DEFAULT_SPREAD,
                      alpha0: float = DEFAULT_ALPHA, beta0: float = DEFAULT_BETA,
                      independent: bool = True) -> tuple[np.ndarray, np.ndarray]:
    """Draw (alpha, beta) uniformly within +-spread of the nominal values.

    With ``independent=False`` one uniform variate drives both parameters.
    """
    rng = np.random.default_rng(rng)
    u = rng.uniform(-spread, spread, size=(2, count))
    if not independent:
        u[1] = u[0]
    return alpha0 * (1.0 + u[0]), beta0 * (1.0 + u[1])


def sample_population(count: int, seed=None, legitimate=True, **kwargs) -> DevicePopulation:
    if count < 0:
        raise ValueError(f"count must be >= 0, got {count}")
    alpha, beta = sample_parameters(count, seed, **kwargs)
    legit = np.broadcast_to(np.asarray(legitimate, dtype=bool), (count,))
    return DevicePopulation(legit, alpha, beta)
