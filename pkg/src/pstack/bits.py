"""MSB-first bit streams and the Elias gamma code."""

from __future__ import annotations


class CodecError(ValueError):
    """Base class for every blob decoding failure."""


class TruncatedBitstream(CodecError):
    """The bit stream ended in the middle of a field."""


class InvariantViolation(CodecError):
    """A field decoded but its value is inadmissible."""


class BitWriter:
    def __init__(self):
        self._acc = 0
        self.nbits = 0

    def write(self, value: int, width: int) -> None:
        if width < 0 or value < 0 or value >> width:
            raise ValueError(f"{value} does not fit in {width} bits")
        self._acc = (self._acc << width) | value
        self.nbits += width

    def write_bit(self, bit) -> None:
        self.write(1 if bit else 0, 1)

    def write_gamma(self, v: int) -> None:
        if v < 1:
            raise ValueError(f"Elias gamma codes integers >= 1, got {v}")
        n = v.bit_length()
        # n-1 zeros, then v in n bits (leading 1 included)
        self.write(v, 2 * n - 1)

    def getvalue(self) -> bytes:
        """Contents zero-padded to a whole number of bytes."""
        pad = -self.nbits % 8
        return (self._acc << pad).to_bytes((self.nbits + pad) // 8, "big")


class BitReader:
    def __init__(self, data: bytes):
        self._val = int.from_bytes(data, "big")
        self.total = 8 * len(data)
        self.pos = 0

    @property
    def remaining(self) -> int:
        return self.total - self.pos

    def read(self, width: int) -> int:
        if width > self.remaining:
            raise TruncatedBitstream(f"need {width} bits at bit {self.pos}, {self.remaining} left")
        shift = self.total - self.pos - width
        self.pos += width
        return (self._val >> shift) & ((1 << width) - 1)

    def read_bit(self) -> int:
        return self.read(1)

    def read_gamma(self) -> int:
        zeros = 0
        while True:
            if self.pos >= self.total:
                raise TruncatedBitstream(f"unterminated gamma prefix at bit {self.pos}")
            if self.read(1):
                break
            zeros += 1
        return (1 << zeros) | self.read(zeros)


def gamma_length(v: int) -> int:
    if v < 1:
        raise ValueError(f"Elias gamma codes integers >= 1, got {v}")
    return 2 * v.bit_length() - 1


def write_uleb128(n: int) -> bytes:
    if n < 0:
        raise ValueError("LEB128 here is unsigned")
    out = bytearray()
    while True:
        b = n & 0x7F
        n >>= 7
        if n:
            out.append(b | 0x80)
        else:
            out.append(b)
            return bytes(out)


def read_uleb128(data: bytes, offset: int = 0) -> tuple:
    """``(value, new_offset)``; rejects overlong encodings."""
    result = 0
    shift = 0
    i = offset
    while True:
        if i >= len(data):
            raise TruncatedBitstream("LEB128 field runs past the end of the data")
        b = data[i]
        i += 1
        result |= (b & 0x7F) << shift
        shift += 7
        if not b & 0x80:
            if b == 0 and i - offset > 1:
                raise InvariantViolation("overlong LEB128 encoding")
            return result, i
