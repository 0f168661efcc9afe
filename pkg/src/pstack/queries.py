"""Indicator queries over the stack and the inverse map back to the stack.

``indicator_eval(state, (M, m))`` answers whether ``(M, m)`` is a completed
vertex. Asking every pair ``M >= m`` over the grid gives an answer table from
which :func:`reconstruct` recovers the stack exactly.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .engine import EngineState, StackInvariantError, VertexPair, check_stack
from .grid import GridError, as_resolution


class InconsistentAnswers(ValueError):
    """The positive answers do not form a valid extremum stack."""


class IndicatorQuery(NamedTuple):
    M: int
    m: int


def _query(q, L=None) -> IndicatorQuery:
    M, m = q
    if M < m:
        raise ValueError(f"indicator query needs M >= m, got ({M}, {m})")
    if L is not None and not (0 <= m <= M <= L):
        raise GridError(f"query ({M}, {m}) is off the grid for L={L}")
    return IndicatorQuery(M, m)


def indicator_eval(state: EngineState, q) -> int:
    q = _query(q, state.L)
    return int(q in set(state.vertices))


def enumerate_family(L) -> list:
    """All pairs ``M >= m``, ordered by M descending then m ascending."""
    L = as_resolution(L).L
    return [IndicatorQuery(M, m) for M in range(L, -1, -1) for m in range(M + 1)]


def family_size(L) -> int:
    L = as_resolution(L).L
    return (L + 1) * (L + 2) // 2


@dataclass(frozen=True)
class IndicatorAnswerTable:
    """One bit per pair of :func:`enumerate_family`, in that order."""

    L: int
    bits: tuple

    def __post_init__(self):
        if len(self.bits) != family_size(self.L):
            raise ValueError(
                f"answer table has {len(self.bits)} entries, family for L={self.L} has "
                f"{family_size(self.L)}"
            )

    def positives(self) -> list:
        fam = enumerate_family(self.L)
        return [q for q, b in zip(fam, self.bits) if b]

    @classmethod
    def from_oracle(cls, L, answer) -> "IndicatorAnswerTable":
        """Build a table by asking ``answer(query)`` for every family member."""
        return cls(L, tuple(int(bool(answer(q))) for q in enumerate_family(L)))


def answer_table(state: EngineState) -> IndicatorAnswerTable:
    members = set(state.vertices)
    return IndicatorAnswerTable.from_oracle(state.L, lambda q: q in members)


def reconstruct(answers: IndicatorAnswerTable) -> tuple:
    """Stack whose vertices are exactly the positively answered pairs."""
    pos = sorted(answers.positives(), key=lambda q: -q.M)
    stack = tuple(VertexPair(q.M, q.m) for q in pos)
    try:
        check_stack(stack, answers.L)
    except StackInvariantError as exc:
        raise InconsistentAnswers(str(exc)) from None
    return stack


def apply_dilation(u, repeats=None, inserts=None) -> list:
    """Apply an explicit dilation schedule to ``u``.

    ``repeats[i]`` extra copies of ``u[i]`` follow it; ``inserts[i]`` is a list
    of values placed between ``u[i-1]`` and ``u[i]``, which must run strictly
    monotonically between the two.
    """
    u = [int(x) for x in u]
    repeats = repeats or {}
    inserts = inserts or {}
    out = []
    for i, x in enumerate(u):
        mids = list(inserts.get(i, ()))
        if mids:
            if i == 0:
                raise ValueError("cannot insert before the first sample")
            path = [u[i - 1], *mids, x]
            steps = {(b > a) - (b < a) for a, b in zip(path, path[1:])}
            if len(steps) != 1 or 0 in steps:
                raise ValueError(f"inserted values {mids} not strictly between {u[i - 1]} and {x}")
            out += mids
        out.append(x)
        out += [x] * int(repeats.get(i, 0))
    return out


def dilate(u, seed, flat_rate: float = 0.3, refine_rate: float = 0.3, max_repeat: int = 3):
    """Stretch ``u`` in time without changing its extrema.

    Samples are randomly repeated (flats) and strictly intermediate grid
    values are inserted between consecutive samples that differ by at least
    2. Deterministic per ``seed``; zero rates give the identity.
    """
    u = [int(x) for x in u]
    if not u:
        raise ValueError("dilate needs a nonempty sequence")
    rng = np.random.default_rng(seed)
    repeats, inserts = {}, {}
    for i, x in enumerate(u):
        if i and refine_rate > 0 and abs(x - u[i - 1]) >= 2 and rng.random() < refine_rate:
            lo, hi = sorted((u[i - 1], x))
            count = int(rng.integers(1, min(hi - lo - 1, 3) + 1))
            mids = sorted(rng.choice(np.arange(lo + 1, hi), size=count, replace=False).tolist())
            inserts[i] = mids if x > u[i - 1] else mids[::-1]
        if flat_rate > 0 and rng.random() < flat_rate:
            repeats[i] = int(rng.integers(1, max_repeat + 1))
    return apply_dilation(u, repeats, inserts)
