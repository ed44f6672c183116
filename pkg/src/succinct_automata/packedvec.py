"""Packed integer vectors over an arbitrary base.

Values are grouped into blocks of ``k`` entries; each block is a single
mixed-radix integer ``sum(v_r * b**r)``.  A block of ``k`` values occupies
``ceil(k * log2(b))`` bits, so the whole vector needs at most
``n * log2(b) + n / k`` bits.  When ``b`` is a power of two the radix
arithmetic reduces to shifts and the vector is plain fixed-width packing.

Positions are 1-based, as in the rest of the package.
"""

from __future__ import annotations

import struct
from typing import Iterable

from ._bitio import join_fields, split_fields, words_to_bytes
from .errors import IntegrityError, ValidationError

WORD_BITS = 64
# Blocks hold roughly BLOCK_WORDS machine words worth of values.
BLOCK_WORDS = 4

MAGIC = b"PVEC"
_HEADER = struct.Struct("<4sQQI")


def _values_per_word(base: int) -> int:
    """Largest k with base**k <= 2**64 (at least 1)."""
    if base <= 1:
        return WORD_BITS
    k = 0
    limit = 1 << WORD_BITS
    p = base
    while p <= limit:
        k += 1
        p *= base
    return max(k, 1)


def block_bits(base: int, count: int) -> int:
    """Exact number of bits needed for ``count`` digits in ``base``."""
    if base <= 1 or count == 0:
        return 0
    return (base ** count - 1).bit_length()


class PackedVector:
    """Fixed-length array of integers in ``[0, base)``."""

    __slots__ = ("_n", "_base", "_k", "_blocks", "_pow", "_width", "_mask")

    def __init__(self, values: Iterable[int] = (), base: int = 2):
        if base < 1:
            raise ValidationError(f"base must be >= 1, got {base}")
        vals = list(values)
        for v in vals:
            if not 0 <= v < base:
                raise ValidationError(f"value {v} outside [0, {base})")
        self._n = len(vals)
        self._base = base
        self._setup()
        k = self._k
        blocks = []
        if base > 1:
            for start in range(0, self._n, k):
                chunk = vals[start:start + k]
                if self._width:
                    acc = 0
                    for v in reversed(chunk):
                        acc = (acc << self._width) | v
                else:
                    acc = 0
                    for v in reversed(chunk):
                        acc = acc * base + v
                blocks.append(acc)
        self._blocks = blocks

    def _setup(self) -> None:
        base = self._base
        if base > 1 and base & (base - 1) == 0:
            self._width = base.bit_length() - 1
            self._mask = base - 1
        else:
            self._width = 0
            self._mask = 0
        self._k = max(1, _values_per_word(base) * BLOCK_WORDS)
        if self._width == 0 and base > 1:
            self._pow = [base ** r for r in range(self._k)]
        else:
            self._pow = []

    # -- access ------------------------------------------------------------

    def __len__(self) -> int:
        return self._n

    @property
    def base(self) -> int:
        return self._base

    @property
    def values_per_block(self) -> int:
        return self._k

    def get(self, i: int) -> int:
        """Value at 1-based position ``i``."""
        if not 1 <= i <= self._n:
            raise IndexError(f"position {i} outside [1, {self._n}]")
        return self._get0(i - 1)

    def _get0(self, i: int) -> int:
        if self._base == 1:
            return 0
        q, r = divmod(i, self._k)
        if self._width:
            return (self._blocks[q] >> (r * self._width)) & self._mask
        return (self._blocks[q] // self._pow[r]) % self._base

    def set(self, i: int, x: int) -> None:
        """Overwrite position ``i`` (1-based) with ``x``."""
        if not 1 <= i <= self._n:
            raise IndexError(f"position {i} outside [1, {self._n}]")
        if not 0 <= x < self._base:
            raise ValidationError(f"value {x} outside [0, {self._base})")
        if self._base == 1:
            return
        q, r = divmod(i - 1, self._k)
        old = self._get0(i - 1)
        if self._width:
            self._blocks[q] += (x - old) << (r * self._width)
        else:
            self._blocks[q] += (x - old) * self._pow[r]

    def __iter__(self):
        for i in range(self._n):
            yield self._get0(i)

    def to_list(self) -> list[int]:
        return list(self)

    def __eq__(self, other) -> bool:
        if not isinstance(other, PackedVector):
            return NotImplemented
        return (self._n, self._base, self._blocks) == (other._n, other._base, other._blocks)

    def __repr__(self) -> str:
        head = self.to_list()[:8]
        more = ", ..." if self._n > 8 else ""
        return f"PackedVector(n={self._n}, base={self._base}, [{', '.join(map(str, head))}{more}])"

    # -- space -------------------------------------------------------------

    def _block_sizes(self) -> list[int]:
        full, last = divmod(self._n, self._k)
        sizes = [self._k] * full
        if last:
            sizes.append(last)
        return sizes

    @property
    def payload_bits(self) -> int:
        """Bits taken by the packed data (no padding to words)."""
        if self._base == 1:
            return 0
        full, last = divmod(self._n, self._k)
        return full * block_bits(self._base, self._k) + block_bits(self._base, last)

    @property
    def size_in_bits(self) -> int:
        return self.payload_bits

    # -- serialization -----------------------------------------------------

    def to_bytes(self) -> bytes:
        widths = [block_bits(self._base, cnt) for cnt in self._block_sizes()] if self._base > 1 else []
        acc = join_fields(self._blocks, widths)
        head = _HEADER.pack(MAGIC, self._n, self._base, self._k)
        return head + words_to_bytes(acc, sum(widths))

    @classmethod
    def from_bytes(cls, data: bytes) -> "PackedVector":
        if len(data) < _HEADER.size:
            raise IntegrityError("truncated PVEC section")
        magic, n, base, k = _HEADER.unpack_from(data)
        if magic != MAGIC:
            raise IntegrityError(f"bad PVEC magic {magic!r}")
        if base < 1:
            raise IntegrityError("PVEC base must be >= 1")
        self = cls.__new__(cls)
        self._n = n
        self._base = base
        self._setup()
        if self._k != k:
            raise IntegrityError(f"PVEC block size {k} does not match {self._k}")
        payload = data[_HEADER.size:]
        if len(payload) % 8:
            raise IntegrityError("PVEC payload is not whole words")
        sizes = self._block_sizes() if base > 1 else []
        widths = [block_bits(base, cnt) for cnt in sizes]
        if len(payload) != (sum(widths) + WORD_BITS - 1) // WORD_BITS * 8:
            raise IntegrityError("PVEC payload length does not match its header")
        try:
            blocks = split_fields(int.from_bytes(payload, "little"), widths)
        except ValueError as exc:
            raise IntegrityError(f"PVEC payload: {exc}") from None
        limit = base ** self._k if sizes else 0
        for blk, cnt in zip(blocks, sizes):
            if blk >= (limit if cnt == self._k else base ** cnt):
                raise IntegrityError("PVEC block out of range")
        self._blocks = blocks
        return self
