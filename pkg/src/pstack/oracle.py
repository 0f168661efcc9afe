"""Brute-force extremum stack from the whole history.

Shares nothing with :mod:`pstack.engine`: the dominant extrema are read off
the sequence directly. A virtual 0 is prepended and flats are collapsed. The
final monotone run is not yet confirmed by a reversal, so only the history
up to its start takes part. On that history ``M1`` is the overall maximum
(last attainment), ``m1`` the minimum of what follows it (last attainment),
``M2`` the maximum of what follows that, and so on until nothing is left.
"""

from __future__ import annotations

from .engine import VertexPair
from .grid import Direction


def _last_index(seq, value, start):
    # last position >= start holding value
    tail = seq[start:]
    return start + len(tail) - 1 - tail[::-1].index(value)


def _collapse(seq):
    out = [seq[0]]
    for x in seq[1:]:
        if x != out[-1]:
            out.append(x)
    return out


def confirmed_history(u) -> list:
    """``[0] + u`` without flats, cut at the start of the final monotone run."""
    c = _collapse([0] + [int(x) for x in u])
    if len(c) < 3:
        return c[:1]
    rising = c[-1] > c[-2]
    i = len(c) - 2
    while i > 0 and (c[i] > c[i - 1]) == rising:
        i -= 1
    return c[: i + 1]


def dominant_extrema(u) -> list:
    """Confirmed dominant extrema of ``u``, alternating max, min, max, ..."""
    seq = confirmed_history(u)
    if len(seq) < 2:
        return []
    out = []
    start = 0
    want_max = True
    while start < len(seq):
        seg = seq[start:]
        v = max(seg) if want_max else min(seg)
        out.append(v)
        start = _last_index(seq, v, start) + 1
        want_max = not want_max
    return out


def trailing_direction(u) -> Direction:
    seq = [0] + [int(x) for x in u]
    cur = seq[-1]
    for v in reversed(seq[:-1]):
        if v != cur:
            return Direction.RISING if cur > v else Direction.FALLING
    return Direction.NONE


def oracle_stack(u) -> tuple:
    """``(vertices, pending, direction)`` of ``u`` under negative saturation."""
    if len(u) == 0:
        raise ValueError("oracle_stack needs a nonempty sequence")
    ext = dominant_extrema(u)
    vertices = tuple(VertexPair(ext[i], ext[i + 1]) for i in range(0, len(ext) - 1, 2))
    pending = ext[-1] if len(ext) % 2 == 1 else None
    return vertices, pending, trailing_direction(u)
