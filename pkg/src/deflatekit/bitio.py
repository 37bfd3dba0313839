"""Bit-granular reading and writing over byte buffers.

A deflate stream is a bit sequence laid over bytes least-significant bit
first: absolute bit k lives at bit (k mod 8) of byte (k div 8).  Two
packing orders coexist on top of that sequence and both are provided
here:

* fixed-width integer fields (block lengths, extra bits, header counts)
  are packed with their least significant bit first;
* prefix codes are emitted with their leftmost code bit first.

Readers are immutable cursors: every read returns the value together
with a fresh cursor, so two cursor positions can be subtracted to learn
exactly how many bits a parse consumed.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .errors import EndOfInput, ValueOutOfRange

# Widest fixed-width field in the format (stored-block LEN/NLEN).
MAX_FIELD_BITS = 16


@dataclass(frozen=True)
class BitCursor:
    """An immutable read position inside a byte buffer.

    ``bit_pos`` is the absolute bit index; 0 addresses the least
    significant bit of the first byte.  A cursor may sit exactly at the
    end of the buffer, where any further read raises ``EndOfInput``.
    """

    data: bytes
    bit_pos: int = 0

    def __post_init__(self):
        if not 0 <= self.bit_pos <= 8 * len(self.data):
            raise ValueOutOfRange(
                f"bit_pos {self.bit_pos} outside a {len(self.data)}-byte buffer"
            )

    @property
    def bits_left(self) -> int:
        return 8 * len(self.data) - self.bit_pos

    def read_bit(self) -> tuple[int, "BitCursor"]:
        """Read one bit; returns (bit, advanced cursor)."""
        pos = self.bit_pos
        if pos >= 8 * len(self.data):
            raise EndOfInput(pos, "a bit")
        bit = (self.data[pos >> 3] >> (pos & 7)) & 1
        return bit, BitCursor(self.data, pos + 1)

    def read_int_lsb(self, n: int) -> tuple[int, "BitCursor"]:
        """Read an n-bit integer packed least-significant bit first.

        n may be 0 (yields 0 and the unchanged position) up to
        ``MAX_FIELD_BITS``.
        """
        if not 0 <= n <= MAX_FIELD_BITS:
            raise ValueOutOfRange(f"field width {n} not in 0..{MAX_FIELD_BITS}")
        pos = self.bit_pos
        if pos + n > 8 * len(self.data):
            raise EndOfInput(pos, f"a {n}-bit integer")
        if n == 0:
            return 0, self
        first = pos >> 3
        nbytes = ((pos & 7) + n + 7) >> 3
        chunk = int.from_bytes(self.data[first : first + nbytes], "little")
        value = (chunk >> (pos & 7)) & ((1 << n) - 1)
        return value, BitCursor(self.data, pos + n)

    def align_to_byte(self) -> "BitCursor":
        """Skip forward to the next byte boundary (no-op when aligned)."""
        return BitCursor(self.data, (self.bit_pos + 7) & ~7)

    def read_bytes_aligned(self, count: int) -> tuple[bytes, "BitCursor"]:
        """Read ``count`` whole bytes; the cursor must be byte-aligned."""
        if self.bit_pos & 7:
            raise ValueOutOfRange("cursor is not byte-aligned")
        if count < 0:
            raise ValueOutOfRange(f"byte count {count} is negative")
        start = self.bit_pos >> 3
        if start + count > len(self.data):
            raise EndOfInput(self.bit_pos, f"{count} stored bytes")
        return self.data[start : start + count], BitCursor(self.data, self.bit_pos + 8 * count)


class BitSink:
    """Accumulates bits into a growing byte buffer, LSB of each byte first.

    ``bit_length`` stays exact until the buffer is finalized, so the
    number of meaningful bits is always recoverable even though
    ``to_bytes`` pads the last partial byte with zeros.
    """

    __slots__ = ("_buf", "_bitbuf", "_fill")

    def __init__(self):
        self._buf = bytearray()
        self._bitbuf = 0  # pending bits, LSB first
        self._fill = 0  # how many pending, 0..7

    @property
    def bit_length(self) -> int:
        return 8 * len(self._buf) + self._fill

    def write_bits_lsb(self, value: int, n: int) -> None:
        """Append an n-bit integer, least significant bit first."""
        if not 0 <= n <= MAX_FIELD_BITS:
            raise ValueOutOfRange(f"field width {n} not in 0..{MAX_FIELD_BITS}")
        if not 0 <= value < (1 << n) and not (n == 0 and value == 0):
            raise ValueOutOfRange(f"value {value} does not fit in {n} bits")
        self._bitbuf |= value << self._fill
        self._fill += n
        while self._fill >= 8:
            self._buf.append(self._bitbuf & 0xFF)
            self._bitbuf >>= 8
            self._fill -= 8

    def write_code_msb(self, code: Sequence[int]) -> None:
        """Append a prefix code, leftmost (most significant) bit first."""
        rev = 0
        for i, bit in enumerate(code):
            if bit not in (0, 1):
                raise ValueOutOfRange(f"code bit {bit!r} is not 0 or 1")
            rev |= bit << i
        self.write_bits_lsb(rev, len(code))

    def align_to_byte(self) -> None:
        """Pad the current partial byte (if any) with zero bits."""
        if self._fill:
            self._buf.append(self._bitbuf & 0xFF)
            self._bitbuf = 0
            self._fill = 0

    def write_bytes_aligned(self, data: bytes) -> None:
        """Append whole bytes; the sink must already be byte-aligned."""
        if self._fill:
            raise ValueOutOfRange("sink is not byte-aligned")
        self._buf += data

    def to_bytes(self) -> bytes:
        """Return the buffer with the final partial byte zero-padded.

        The sink itself is left untouched, so writing may continue and
        ``bit_length`` still reports the unpadded count.
        """
        out = bytes(self._buf)
        if self._fill:
            out += bytes([self._bitbuf & 0xFF])
        return out
