"""Lossy baselines (PAA and Swinging Door) and the class-preservation check.

Both compressors work in grid units with exact rationals. Their
reconstructions are re-quantized (ties round up) before their extremum
stacks are compared with the original's.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .oracle import oracle_stack


@dataclass(frozen=True)
class PaaModel:
    w: int
    means: tuple
    length: int

    def bits(self, L: int) -> int:
        # each segment stores its exact integer sum
        return len(self.means) * (self.w * L).bit_length()


def paa_compress(u, w: int) -> PaaModel:
    if w < 1:
        raise ValueError(f"PAA window must be >= 1, got {w}")
    u = [int(x) for x in u]
    means = tuple(Fraction(sum(u[i:i + w]), len(u[i:i + w])) for i in range(0, len(u), w))
    return PaaModel(w, means, len(u))


def paa_reconstruct(model: PaaModel) -> list:
    out = []
    for mean in model.means:
        out += [mean] * model.w
    return out[: model.length]


@dataclass(frozen=True)
class SwingingDoorModel:
    eps: Fraction
    pivots: tuple  # (index, value)
    length: int

    def bits(self, L: int) -> int:
        idx_bits = max(1, (self.length - 1).bit_length())
        return len(self.pivots) * (idx_bits + L.bit_length())


def sdt_compress(u, eps) -> SwingingDoorModel:
    """Swinging-door trending.

    A sample is dropped while the chord from the last archived pivot to the
    newest sample stays within ``eps`` of every sample in between; the
    corridor is tracked as an interval of admissible slopes, so the pass is
    O(n) time and O(1) state.
    """
    eps = Fraction(eps) if not isinstance(eps, float) else Fraction(repr(eps))
    if eps < 0:
        raise ValueError("tolerance must be nonnegative")
    u = [int(x) for x in u]
    if not u:
        return SwingingDoorModel(eps, (), 0)
    pivots = [(0, u[0])]
    p, up = 0, u[0]
    lo = hi = None  # slope corridor from samples strictly between p and i
    for i in range(1, len(u)):
        chord = Fraction(u[i] - up, i - p)
        if lo is not None and not (lo <= chord <= hi):
            p, up = i - 1, u[i - 1]
            pivots.append((p, up))
            lo = hi = None
        dx = i - p
        s_lo = Fraction(u[i] - up, dx) - eps / dx
        s_hi = Fraction(u[i] - up, dx) + eps / dx
        lo = s_lo if lo is None else max(lo, s_lo)
        hi = s_hi if hi is None else min(hi, s_hi)
    if pivots[-1][0] != len(u) - 1:
        pivots.append((len(u) - 1, u[-1]))
    return SwingingDoorModel(eps, tuple(pivots), len(u))


def sdt_reconstruct(model: SwingingDoorModel, length: Optional[int] = None) -> list:
    length = model.length if length is None else length
    piv = model.pivots
    if not piv:
        return []
    out = []
    j = 0
    for t in range(length):
        while j + 1 < len(piv) and piv[j + 1][0] <= t:
            j += 1
        t0, v0 = piv[j]
        if j + 1 == len(piv):
            out.append(Fraction(v0))
        else:
            t1, v1 = piv[j + 1]
            out.append(Fraction(v0) + Fraction(v1 - v0, t1 - t0) * (t - t0))
    return out


def requantize(values, L: int) -> list:
    """Round grid-unit rationals half-up and clip to ``0..L``."""
    out = []
    for v in values:
        q = math.floor(Fraction(v) + Fraction(1, 2))
        out.append(min(max(q, 0), L))
    return out


@dataclass(frozen=True)
class PreservationResult:
    preserved: bool
    # (position, original item, reconstructed item); position is a vertex
    # index, or "pending" / "direction"
    witness: Optional[tuple] = None

    def __bool__(self):
        return self.preserved


def r_preservation_check(u, reconstructed, L: int) -> PreservationResult:
    """Do ``u`` and a reconstruction of it share one extremum stack?"""
    orig_v, orig_p, orig_d = oracle_stack([int(x) for x in u])
    rec_v, rec_p, rec_d = oracle_stack(requantize(reconstructed, L))
    for i in range(max(len(orig_v), len(rec_v))):
        a = orig_v[i] if i < len(orig_v) else None
        b = rec_v[i] if i < len(rec_v) else None
        if a != b:
            return PreservationResult(False, (i, a, b))
    if orig_p != rec_p:
        return PreservationResult(False, ("pending", orig_p, rec_p))
    if orig_d != rec_d:
        return PreservationResult(False, ("direction", orig_d, rec_d))
    return PreservationResult(True)
