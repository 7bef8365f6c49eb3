"""One-hot message codec.

A B-bit message is mapped to a single occupied channel use out of N = 2**B.
Bits are read most-significant first. Codewords are kept sparse: only the hot
index is stored, the length-N vector is built on request.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

MAX_BITS = 24


def _check_bits(B: int) -> None:
    if not isinstance(B, (int, np.integer)) or isinstance(B, bool):
        raise TypeError(f"B must be an integer, got {type(B).__name__}")
    if not 1 <= B <= MAX_BITS:
        raise ValueError(f"B must lie in [1, {MAX_BITS}], got {B}")


@dataclass(frozen=True)
class MessagePayload:
    bits: tuple[int, ...]
    index: int

    def __post_init__(self):
        _check_bits(len(self.bits))
        if any(b not in (0, 1) for b in self.bits):
            raise ValueError(f"bits must be 0/1, got {self.bits}")
        value = 0
        for b in self.bits:
            value = (value << 1) | b
        if value != self.index:
            raise ValueError(f"index {self.index} inconsistent with bits {self.bits} (={value})")

    @property
    def B(self) -> int:
        return len(self.bits)

    @classmethod
    def from_bits(cls, bits: Sequence[int] | str) -> "MessagePayload":
        if isinstance(bits, str):
            bits = [int(c) for c in bits]
        bits = tuple(int(b) for b in bits)
        value = 0
        for b in bits:
            value = (value << 1) | b
        return cls(bits, value)

    @classmethod
    def from_index(cls, index: int, B: int) -> "MessagePayload":
        return decode_index(index, B)

    def __str__(self) -> str:
        return "".join(map(str, self.bits))


@dataclass(frozen=True)
class OneHotCodeword:
    length: int
    hot_index: int

    def __post_init__(self):
        if not 0 <= self.hot_index < self.length:
            raise ValueError(f"hot_index {self.hot_index} outside [0, {self.length})")

    def dense(self) -> np.ndarray:
        x = np.zeros(self.length, dtype=np.int8)
        x[self.hot_index] = 1
        return x


def encode(message: MessagePayload) -> OneHotCodeword:
    return OneHotCodeword(length=1 << message.B, hot_index=message.index)


def decode_index(n: int, B: int) -> MessagePayload:
    """Message carried by channel use ``n`` (its B-bit binary representation)."""
    _check_bits(B)
    n = int(n)
    if not 0 <= n < (1 << B):
        raise ValueError(f"channel-use index {n} outside [0, {1 << B}) for B={B}")
    bits = tuple((n >> (B - 1 - i)) & 1 for i in range(B))
    return MessagePayload(bits, n)


def code_rate(B: int) -> Fraction:
    """Rate per active device, B / 2**B, as an exact fraction."""
    if B < 1:
        raise ValueError(f"B must be >= 1, got {B}")
    return Fraction(B, 1 << B)
