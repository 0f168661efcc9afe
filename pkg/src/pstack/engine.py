"""Online extremum stack under the wiping-out rule.

The stack holds completed ``(M, m)`` vertices, oldest first: maxima strictly
decrease and minima strictly increase toward the top. A maximum that has
been confirmed by a reversal but not yet followed by a confirmed minimum is
kept aside as ``pending`` and only becomes part of a vertex once its minimum
is confirmed.

The signal is taken to start from a virtual sample at grid value 0 (negative
saturation), so the first confirmed extremum is always a maximum and no
infinite sentinels are required.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from numbers import Integral
from typing import Iterable, NamedTuple, Optional

from .grid import Direction, GridError, as_resolution


class StackInvariantError(ValueError):
    """A stack or engine state violates the ordering invariants."""


class VertexPair(NamedTuple):
    M: int
    m: int


@dataclass(frozen=True)
class StepEvent:
    pops: int = 0
    pushed: Optional[VertexPair] = None
    # (value, "max" | "min")
    confirmed: Optional[tuple] = None


@dataclass(frozen=True)
class EngineState:
    """Immutable snapshot of a stream's hysteresis memory.

    ``current`` is the last observed value (``e_prev`` in the update rule).
    ``samples_seen`` is bookkeeping only and takes no part in equality.
    """

    L: int
    vertices: tuple = ()
    pending: Optional[int] = None
    current: int = 0
    direction: Direction = Direction.NONE
    samples_seen: int = field(default=0, compare=False)

    @property
    def depth(self) -> int:
        return len(self.vertices)

    def validate(self) -> "EngineState":
        validate_state(self)
        return self


def check_stack(vertices, L: Optional[int] = None) -> None:
    """Raise :class:`StackInvariantError` unless ``vertices`` is a valid stack."""
    prev = None
    for i, (M, m) in enumerate(vertices):
        if L is not None and not (0 <= m < M <= L):
            raise StackInvariantError(f"vertex {i} ({M}, {m}) off grid or M <= m")
        if M <= m:
            raise StackInvariantError(f"vertex {i} has M={M} <= m={m}")
        if prev is not None:
            if M >= prev[0]:
                raise StackInvariantError(f"maxima not strictly decreasing at vertex {i}")
            if m <= prev[1]:
                raise StackInvariantError(f"minima not strictly increasing at vertex {i}")
        prev = (M, m)


def validate_state(state: EngineState) -> None:
    """Check that ``state`` is reachable from a stream under negative saturation."""
    L = state.L
    if isinstance(L, bool) or not isinstance(L, int) or L < 2:
        raise StackInvariantError(f"invalid resolution {L!r}")
    check_stack(state.vertices, L)
    cur, pend, d = state.current, state.pending, state.direction
    if not (isinstance(cur, int) and 0 <= cur <= L):
        raise StackInvariantError(f"current value {cur!r} off grid")
    top = state.vertices[-1] if state.vertices else None
    if d is Direction.NONE:
        if state.vertices or pend is not None or cur != 0:
            raise StackInvariantError("direction None is only valid for a constant-zero stream")
    elif d is Direction.RISING:
        if pend is not None:
            raise StackInvariantError("pending maximum while rising")
        floor = top[1] if top else 0
        if cur <= floor:
            raise StackInvariantError(f"rising current {cur} not above last minimum {floor}")
    elif d is Direction.FALLING:
        if pend is None:
            raise StackInvariantError("falling without a pending maximum")
        if not (0 < pend <= L):
            raise StackInvariantError(f"pending {pend} off grid")
        if top and not (top[1] < pend < top[0]):
            raise StackInvariantError(f"pending {pend} not inside top vertex {tuple(top)}")
        if cur >= pend:
            raise StackInvariantError(f"falling current {cur} not below pending {pend}")
    else:
        raise StackInvariantError(f"bad direction {d!r}")


def depth_bound(samples: int) -> int:
    """Largest admissible depth after ``samples`` (= n + 1) observations."""
    return (samples - 1) // 2 + 1


class StackEngine:
    """Mutable single-stream engine. Use :attr:`state` to take snapshots.

    ``record=True`` keeps the sequence of confirmed extrema in :attr:`log`.
    """

    # max-confirmation pops vertices with M <= new max (True) or M < new max
    pop_on_tie = True

    def __init__(self, u0: int, L, record: bool = False):
        res = as_resolution(L)
        self.L = res.L
        if not (isinstance(u0, Integral) and 0 <= u0 <= res.L):
            raise GridError(f"{u0!r} is not a grid index for L={res.L}")
        u0 = int(u0)
        self._vertices = []
        self.pending = None
        self.current = u0
        self.direction = Direction.RISING if u0 > 0 else Direction.NONE
        self.samples_seen = 1
        self.log = [] if record else None
        self.pushes = 0
        self.pops = 0

    @classmethod
    def from_state(cls, state: EngineState, record: bool = False) -> "StackEngine":
        validate_state(state)
        eng = cls.__new__(cls)
        eng.L = state.L
        eng._vertices = [VertexPair(*v) for v in state.vertices]
        eng.pending = state.pending
        eng.current = state.current
        eng.direction = state.direction
        eng.samples_seen = state.samples_seen
        eng.log = [] if record else None
        eng.pushes = 0
        eng.pops = 0
        return eng

    @property
    def vertices(self) -> tuple:
        return tuple(self._vertices)

    @property
    def depth(self) -> int:
        return len(self._vertices)

    @property
    def state(self) -> EngineState:
        return EngineState(
            L=self.L,
            vertices=tuple(self._vertices),
            pending=self.pending,
            current=self.current,
            direction=self.direction,
            samples_seen=self.samples_seen,
        )

    def _confirm_max(self, e: int) -> int:
        stack = self._vertices
        pops = 0
        if self.pop_on_tie:
            while stack and stack[-1][0] <= e:
                stack.pop()
                pops += 1
        else:
            while stack and stack[-1][0] < e:
                stack.pop()
                pops += 1
        self.pending = e
        return pops

    def _confirm_min(self, e: int):
        stack = self._vertices
        pops = 0
        outer = None
        while stack and stack[-1][1] >= e:
            outer = stack.pop()[0]
            pops += 1
        if outer is None:
            outer = self.pending
            if outer is None:
                raise StackInvariantError(
                    f"minimum {e} confirmed with neither a pending maximum nor a wiped vertex"
                )
        v = VertexPair(outer, e)
        stack.append(v)
        self.pending = None
        return pops, v

    def update(self, u: int) -> StepEvent:
        """Consume one sample and report what happened to the stack."""
        if not (isinstance(u, Integral) and 0 <= u <= self.L):
            raise GridError(f"{u!r} is not a grid index for L={self.L}")
        u = int(u)
        self.samples_seen += 1
        e = self.current
        if u == e:
            return StepEvent()
        d_new = Direction.RISING if u > e else Direction.FALLING
        d = self.direction
        self.current = u
        self.direction = d_new
        if d is Direction.NONE or d_new is d:
            return StepEvent()
        if d is Direction.RISING:
            pops = self._confirm_max(e)
            pushed = None
            kind = "max"
        else:
            pops, pushed = self._confirm_min(e)
            self.pushes += 1
            kind = "min"
        self.pops += pops
        if self.log is not None:
            self.log.append(e)
        return StepEvent(pops=pops, pushed=pushed, confirmed=(e, kind))

    def feed(self, values: Iterable[int]) -> "StackEngine":
        """Consume many samples; same result as repeated :meth:`update`."""
        L = self.L
        log = self.log
        e = self.current
        d = int(self.direction)
        count = 0
        for u in values:
            count += 1
            if u == e:
                continue
            if not (isinstance(u, Integral) and 0 <= u <= L):
                self.current, self.direction = e, Direction(d)
                self.samples_seen += count - 1
                raise GridError(f"{u!r} is not a grid index for L={L}")
            u = int(u)
            d_new = 1 if u > e else -1
            if d != 0 and d_new != d:
                if d == 1:
                    self.pops += self._confirm_max(e)
                else:
                    pops, _ = self._confirm_min(e)
                    self.pops += pops
                    self.pushes += 1
                if log is not None:
                    log.append(e)
            e = u
            d = d_new
        self.current = e
        self.direction = Direction(d)
        self.samples_seen += count
        return self


def init(u0: int, L) -> EngineState:
    return StackEngine(u0, L).state


def step(state: EngineState, u: int) -> tuple:
    """Functional form of :meth:`StackEngine.update`: ``(new_state, event)``."""
    eng = StackEngine.from_state(state)
    ev = eng.update(u)
    return eng.state, ev


def canonical_stack(state: EngineState) -> tuple:
    return tuple(state.vertices)


def run(values, L, record: bool = False) -> StackEngine:
    """Build an engine from the first sample and feed the rest."""
    it = iter(values)
    try:
        u0 = next(it)
    except StopIteration:
        raise ValueError("cannot run the engine on an empty stream") from None
    return StackEngine(u0, L, record=record).feed(it)


def pop_count_profile(values, L) -> dict:
    """Per-step pop counts and push/pop totals for ``values``.

    ``pops[t]`` is the number of vertices removed while consuming
    ``values[t]``; ``pops[0]`` is always 0.
    """
    it = iter(values)
    eng = StackEngine(next(it), L)
    pops = [0]
    for u in it:
        pops.append(eng.update(u).pops)
    return {
        "pops": pops,
        "total_pops": eng.pops,
        "total_pushes": eng.pushes,
        "max_pops": max(pops),
        "samples": len(pops),
    }
