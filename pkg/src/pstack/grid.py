"""Discrete grid of ``L + 1`` points and the quantization onto it.

Grid values are plain ``int`` indices ``0..L`` standing for ``idx / L``.
Everything downstream of ingestion works on these indices so that all
comparisons are exact.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import IntEnum
from fractions import Fraction
from numbers import Real


class GridError(ValueError):
    """A value does not lie on (or cannot be mapped onto) the grid."""


class Direction(IntEnum):
    NONE = 0
    RISING = 1
    FALLING = -1

    def opposite(self) -> "Direction":
        return Direction(-int(self))


@dataclass(frozen=True)
class Resolution:
    """Number of grid steps; the grid is ``{0, 1/L, ..., 1}``."""

    L: int

    def __post_init__(self):
        if isinstance(self.L, bool) or not isinstance(self.L, int):
            raise TypeError(f"L must be an int, got {type(self.L).__name__}")
        if self.L < 2:
            raise GridError(f"resolution L must be >= 2, got {self.L}")

    @property
    def delta(self) -> Fraction:
        return Fraction(1, self.L)

    @property
    def points(self) -> int:
        return self.L + 1

    @property
    def bits_per_sample(self) -> int:
        """Bits of a fixed-width raw sample, ``ceil(log2(L + 1))``."""
        return (self.L).bit_length()

    def contains(self, idx) -> bool:
        return isinstance(idx, int) and 0 <= idx <= self.L

    def check(self, idx) -> int:
        if not self.contains(idx):
            raise GridError(f"{idx!r} is not a grid index for L={self.L}")
        return idx

    def value(self, idx: int) -> Fraction:
        return Fraction(self.check(idx), self.L)


def as_resolution(L) -> Resolution:
    return L if isinstance(L, Resolution) else Resolution(int(L))


def _exact(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, str):
        return Fraction(x.strip())
    if isinstance(x, float):
        if not math.isfinite(x):
            raise GridError(f"cannot quantize non-finite value {x!r}")
        # shortest repr, so 0.35 means 7/20 and not its binary neighbour
        return Fraction(repr(x))
    if isinstance(x, Real):
        return Fraction(x)
    raise TypeError(f"cannot quantize {type(x).__name__}")


def quantize(x, L, clamp: bool = False) -> int:
    """Map a real ``x`` in ``[0, 1]`` to the nearest grid index.

    Ties round up (``0.25`` at ``L=10`` gives 3). Values outside ``[0, 1]``
    raise :class:`GridError` unless ``clamp`` is set, in which case they are
    pinned to the nearest boundary.
    """
    res = as_resolution(L)
    q = _exact(x)
    if q < 0 or q > 1:
        if not clamp:
            raise GridError(f"value {x!r} outside [0, 1]")
        q = min(max(q, Fraction(0)), Fraction(1))
    return math.floor(q * res.L + Fraction(1, 2))


def direction_of(prev: int, nxt: int) -> Direction:
    if nxt > prev:
        return Direction.RISING
    if nxt < prev:
        return Direction.FALLING
    return Direction.NONE
