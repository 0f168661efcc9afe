"""Bit-exact, self-delimiting serialization of engine state.

Layout::

    "PSTK"  version(0x01)  mode(0x00 final | 0x01 eventlog)  uleb128(L)
    MSB-first bitstream, zero padded to a byte boundary

Final-state payload::

    gamma(k+1)
    gamma(L - M1 + 1), gamma(M1 - M2), ..., gamma(M[k-1] - Mk)
    gamma(m1 + 1),     gamma(m2 - m1), ..., gamma(mk - m[k-1])
    pending flag bit [gamma(pending + 1)]
    gamma(current + 1)
    2 direction bits (00 none, 01 rising, 10 falling)

The vertex fields are omitted when ``k = 0``. Event-log payload::

    gamma(count + 1), gamma(e1 + 1), ..., gamma(e_count + 1)
    gamma(current + 1), 2 direction bits

Decoding is strict: nonzero padding, overlong LEB128 and inadmissible states
are rejected, so a blob that decodes is the unique encoding of its result.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .bits import (
    BitReader,
    BitWriter,
    CodecError,
    InvariantViolation,
    TruncatedBitstream,
    read_uleb128,
    write_uleb128,
)
from .engine import EngineState, StackEngine, StackInvariantError, VertexPair, validate_state
from .grid import Direction, as_resolution

__all__ = [
    "MAGIC",
    "VERSION",
    "MODE_FINAL",
    "MODE_EVENTLOG",
    "CodecError",
    "BadMagic",
    "BadVersion",
    "BadMode",
    "TrailingData",
    "TruncatedBitstream",
    "InvariantViolation",
    "EventLog",
    "encode_final",
    "encode_eventlog",
    "decode",
    "decode_prefix",
    "size_bits",
    "eventlog_size_bits",
    "decode_state",
    "raw_size_bits",
]

MAGIC = b"PSTK"
VERSION = 0x01
MODE_FINAL = 0x00
MODE_EVENTLOG = 0x01

_DIR_BITS = {Direction.NONE: 0b00, Direction.RISING: 0b01, Direction.FALLING: 0b10}
_BITS_DIR = {v: k for k, v in _DIR_BITS.items()}


class BadMagic(CodecError):
    pass


class BadVersion(CodecError):
    pass


class BadMode(CodecError):
    pass


class TrailingData(CodecError):
    pass


@dataclass(frozen=True)
class EventLog:
    """Every confirmed extremum of a stream, in order, plus where it ended.

    Extrema alternate starting with a maximum.
    """

    L: int
    extrema: tuple
    current: int
    direction: Direction

    def validate(self) -> "EventLog":
        L = as_resolution(self.L).L
        ext = self.extrema
        for i, e in enumerate(ext):
            if not (0 <= e <= L):
                raise ValueError(f"extremum {i} = {e} off the grid for L={L}")
            if i == 0 and e == 0:
                raise ValueError("the first confirmed extremum is a maximum above 0")
            if i and (e < ext[i - 1]) != (i % 2 == 1):
                raise ValueError(f"extrema do not alternate max/min at position {i}")
            if i and e == ext[i - 1]:
                raise ValueError(f"repeated extremum at position {i}")
        if not (0 <= self.current <= L):
            raise ValueError(f"current value {self.current} off the grid")
        if ext:
            last_is_max = len(ext) % 2 == 1
            want = Direction.FALLING if last_is_max else Direction.RISING
            ok = self.current < ext[-1] if last_is_max else self.current > ext[-1]
            if self.direction is not want or not ok:
                raise ValueError("current value/direction inconsistent with the last extremum")
        else:
            want = Direction.RISING if self.current > 0 else Direction.NONE
            if self.direction is not want:
                raise ValueError("direction inconsistent with an empty log")
        return self

    @classmethod
    def from_stream(cls, u, L) -> "EventLog":
        it = iter(u)
        eng = StackEngine(next(it), L, record=True).feed(it)
        return cls(eng.L, tuple(eng.log), eng.current, eng.direction)

    def replay(self, upto: Optional[int] = None) -> EngineState:
        """Engine state once the first ``upto`` extrema are confirmed.

        ``upto=None`` replays the whole log and ends at :attr:`current`.
        For a partial replay the stream is advanced to the next extremum,
        which is exactly what confirms the last one kept.
        """
        ext = list(self.extrema)
        if upto is None or upto >= len(ext):
            seq = ext + [self.current]
        elif upto < 0:
            raise ValueError("upto must be nonnegative")
        else:
            seq = ext[: upto + 1]
        if not seq:
            seq = [self.current]
        eng = StackEngine(seq[0], self.L).feed(seq[1:])
        return eng.state


# -- encoding ---------------------------------------------------------------


def _header(mode: int, L: int) -> bytes:
    return MAGIC + bytes([VERSION, mode]) + write_uleb128(L)


def _write_tail(w: BitWriter, current: int, direction: Direction) -> None:
    w.write_gamma(current + 1)
    w.write(_DIR_BITS[Direction(direction)], 2)


def _final_bits(state: EngineState) -> BitWriter:
    w = BitWriter()
    vs = state.vertices
    w.write_gamma(len(vs) + 1)
    if vs:
        w.write_gamma(state.L - vs[0][0] + 1)
        for (M0, _), (M1, _) in zip(vs, vs[1:]):
            w.write_gamma(M0 - M1)
        w.write_gamma(vs[0][1] + 1)
        for (_, m0), (_, m1) in zip(vs, vs[1:]):
            w.write_gamma(m1 - m0)
    if state.pending is None:
        w.write_bit(0)
    else:
        w.write_bit(1)
        w.write_gamma(state.pending + 1)
    _write_tail(w, state.current, state.direction)
    return w


def _eventlog_bits(log: EventLog) -> BitWriter:
    w = BitWriter()
    w.write_gamma(len(log.extrema) + 1)
    for e in log.extrema:
        w.write_gamma(e + 1)
    _write_tail(w, log.current, log.direction)
    return w


def encode_final(state: EngineState) -> bytes:
    validate_state(state)
    return _header(MODE_FINAL, state.L) + _final_bits(state).getvalue()


def encode_eventlog(log: EventLog) -> bytes:
    log.validate()
    return _header(MODE_EVENTLOG, log.L) + _eventlog_bits(log).getvalue()


def size_bits(state: EngineState) -> int:
    """Exact encoded length in bits, header included, before padding."""
    return 8 * len(_header(MODE_FINAL, state.L)) + _final_bits(state).nbits


def eventlog_size_bits(log: EventLog) -> int:
    return 8 * len(_header(MODE_EVENTLOG, log.L)) + _eventlog_bits(log).nbits


def raw_size_bits(n: int, L) -> int:
    """Fixed-width cost of samples ``u_0..u_n``."""
    return (n + 1) * as_resolution(L).bits_per_sample


# -- decoding ---------------------------------------------------------------


def _read_tail(r: BitReader, L: int) -> tuple:
    cur = r.read_gamma() - 1
    if cur > L:
        raise InvariantViolation(f"current value {cur} exceeds L={L}")
    bits = r.read(2)
    if bits not in _BITS_DIR:
        raise InvariantViolation(f"reserved direction code {bits:02b}")
    return cur, _BITS_DIR[bits]


def _read_final(r: BitReader, L: int) -> EngineState:
    k = r.read_gamma() - 1
    # each vertex spends at least two grid steps
    if k > (L + 1) // 2:
        raise InvariantViolation(f"stack depth {k} impossible for L={L}")
    vertices = ()
    if k:
        Ms = [L + 1 - r.read_gamma()]
        for _ in range(k - 1):
            Ms.append(Ms[-1] - r.read_gamma())
        ms = [r.read_gamma() - 1]
        for _ in range(k - 1):
            ms.append(ms[-1] + r.read_gamma())
        vertices = tuple(VertexPair(M, m) for M, m in zip(Ms, ms))
    pending = None
    if r.read_bit():
        pending = r.read_gamma() - 1
    cur, d = _read_tail(r, L)
    state = EngineState(L=L, vertices=vertices, pending=pending, current=cur, direction=d)
    try:
        validate_state(state)
    except StackInvariantError as exc:
        raise InvariantViolation(str(exc)) from None
    return state


def _read_eventlog(r: BitReader, L: int) -> EventLog:
    count = r.read_gamma() - 1
    if count > r.remaining:
        raise TruncatedBitstream(f"log claims {count} extrema, only {r.remaining} bits left")
    ext = tuple(r.read_gamma() - 1 for _ in range(count))
    cur, d = _read_tail(r, L)
    log = EventLog(L, ext, cur, d)
    try:
        log.validate()
    except ValueError as exc:
        raise InvariantViolation(str(exc)) from None
    return log


def decode_prefix(data: bytes) -> tuple:
    """Decode one blob from the front of ``data``: ``(obj, bytes_used)``."""
    data = bytes(data)
    if len(data) < 4 or data[:4] != MAGIC:
        raise BadMagic(f"expected magic {MAGIC!r}, got {data[:4]!r}")
    if len(data) < 6:
        raise TruncatedBitstream("header shorter than 6 bytes")
    if data[4] != VERSION:
        raise BadVersion(f"unsupported version 0x{data[4]:02x}")
    mode = data[5]
    if mode not in (MODE_FINAL, MODE_EVENTLOG):
        raise BadMode(f"unknown mode 0x{mode:02x}")
    L, off = read_uleb128(data, 6)
    if L < 2:
        raise InvariantViolation(f"resolution L={L} below 2")
    r = BitReader(data[off:])
    obj = _read_final(r, L) if mode == MODE_FINAL else _read_eventlog(r, L)
    nbytes = -(-r.pos // 8)
    if r.pos % 8 and r.read(8 - r.pos % 8):
        raise InvariantViolation("nonzero padding bits")
    return obj, off + nbytes


def decode(blob: bytes):
    """Decode a complete blob into an :class:`EngineState` or :class:`EventLog`."""
    obj, used = decode_prefix(blob)
    if used != len(blob):
        raise TrailingData(f"{len(blob) - used} bytes after the end of the blob")
    return obj


def decode_state(blob: bytes) -> EngineState:
    """Like :func:`decode` but always returns a state, replaying event logs."""
    obj = decode(blob)
    return obj.replay() if isinstance(obj, EventLog) else obj
