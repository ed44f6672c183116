"""Static bitvectors with rank/select, monotone sequences, sparse bitvectors.

Layout: bit ``i`` (1-based) of a sequence lives at bit ``(i-1) % 64`` of
word ``(i-1) // 64``, least significant bit first.  In memory the words are
grouped four at a time into 256-bit Python ints so a block popcount is one
``int.bit_count`` call.

Rank directory is two-level: an absolute count every 2048 bits and a count
relative to the enclosing superblock every 256 bits.  Select samples the
superblock holding every 512th occurrence and finishes with a bisection
over the superblock counts followed by an in-block scan.
"""

from __future__ import annotations

import struct
from bisect import bisect_left
from typing import Iterable, Iterator

import numpy as np

from ._bitio import join_fields, split_fields, words_to_bytes
from .errors import IntegrityError, ValidationError
from .packedvec import PackedVector

BLOCK = 256
BLOCKS_PER_SUPER = 8
SUPER = BLOCK * BLOCKS_PER_SUPER
SAMPLE = 512
_REL_WIDTH = (SUPER - BLOCK).bit_length()

_MASKS = [(1 << k) - 1 for k in range(BLOCK + 1)]
_FULL = _MASKS[BLOCK]

MAGIC = b"SBIT"
VERSION = 1
KIND_PLAIN = 0
KIND_MONOTONE = 1
_HEADER = struct.Struct("<4sHBQQ")


def _select_in_block(x: int, r: int) -> int:
    """0-based offset of the r-th set bit of ``x`` (r >= 1, must exist)."""
    off = 0
    while True:
        c = (x & 0xFFFF).bit_count()
        if c >= r:
            break
        r -= c
        x >>= 16
        off += 16
    x &= 0xFFFF
    for _ in range(r - 1):
        x &= x - 1
    return off + (x & -x).bit_length() - 1


def _to_bool_array(bits) -> np.ndarray:
    if isinstance(bits, str):
        if set(bits) - {"0", "1"}:
            raise ValidationError("bit strings may only contain '0' and '1'")
        return np.frombuffer(bits.encode(), dtype=np.uint8) == ord("1")
    return np.asarray(list(bits) if not hasattr(bits, "__len__") else bits, dtype=bool).ravel()


class Bitvector:
    """Immutable bit sequence with O(1) rank and near-O(1) select."""

    __slots__ = ("_n", "_blocks", "_super", "_rel", "_ones", "_s1", "_s0")

    def __init__(self, bits: Iterable[bool] | str = ()):
        arr = _to_bool_array(bits)
        n = int(arr.size)
        raw = np.packbits(arr, bitorder="little").tobytes()
        nblocks = n // BLOCK + 1
        raw = raw + bytes(nblocks * (BLOCK // 8) - len(raw))
        step = BLOCK // 8
        blocks = [int.from_bytes(raw[i:i + step], "little") for i in range(0, len(raw), step)]
        self._init(n, blocks)

    @classmethod
    def from_int(cls, value: int, length: int) -> "Bitvector":
        """Build from an int whose bit ``i-1`` is logical bit ``i``."""
        if value < 0 or value >> length:
            raise ValidationError("value has bits beyond the declared length")
        self = cls.__new__(cls)
        nblocks = length // BLOCK + 1
        raw = value.to_bytes(nblocks * (BLOCK // 8), "little")
        step = BLOCK // 8
        self._init(length, [int.from_bytes(raw[i:i + step], "little") for i in range(0, len(raw), step)])
        return self

    def _init(self, n: int, blocks: list[int]) -> None:
        # One spare block past the end keeps rank(n) branch-free.
        self._n = n
        self._blocks = blocks
        sup = []
        rel = []
        total = 0
        base = 0
        for b, blk in enumerate(blocks):
            if b % BLOCKS_PER_SUPER == 0:
                sup.append(total)
                base = total
            rel.append(total - base)
            total += blk.bit_count()
        self._super = sup
        self._rel = rel
        self._ones = total
        self._s1 = self._sample(1)
        self._s0 = self._sample(0)

    def _sample(self, a: int) -> list[int]:
        count = self._ones if a else self._n - self._ones
        out = []
        s = 0
        sup = self._super
        nsup = len(sup)
        for target in range(1, count + 1, SAMPLE):
            while s + 1 < nsup and self._before_super(a, s + 1) < target:
                s += 1
            out.append(s)
        return out

    def _before_super(self, a: int, s: int) -> int:
        ones = self._super[s]
        return ones if a else s * SUPER - ones

    # -- basic -------------------------------------------------------------

    def __len__(self) -> int:
        return self._n

    @property
    def ones(self) -> int:
        return self._ones

    @property
    def zeros(self) -> int:
        return self._n - self._ones

    def bit(self, i: int) -> int:
        """Bit at 1-based position ``i``."""
        if not 1 <= i <= self._n:
            raise IndexError(f"position {i} outside [1, {self._n}]")
        i -= 1
        return (self._blocks[i >> 8] >> (i & 255)) & 1

    def __iter__(self) -> Iterator[int]:
        n = self._n
        for b, blk in enumerate(self._blocks):
            lo = b * BLOCK
            for off in range(min(BLOCK, n - lo)):
                yield (blk >> off) & 1

    def to_int(self) -> int:
        return join_fields(self._blocks, [BLOCK] * len(self._blocks))

    def to_string(self) -> str:
        return "".join("1" if b else "0" for b in self)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Bitvector):
            return NotImplemented
        return self._n == other._n and self._blocks == other._blocks

    def __repr__(self) -> str:
        s = self.to_string()
        if len(s) > 64:
            s = s[:64] + "..."
        return f"Bitvector({self._n}, '{s}')"

    # -- rank/select -------------------------------------------------------

    def rank1(self, i: int) -> int:
        """Number of ones among positions 1..i."""
        if not 0 <= i <= self._n:
            raise IndexError(f"rank position {i} outside [0, {self._n}]")
        b = i >> 8
        return self._super[b >> 3] + self._rel[b] + (self._blocks[b] & _MASKS[i & 255]).bit_count()

    def rank0(self, i: int) -> int:
        return i - self.rank1(i)

    def rank(self, a: int, i: int) -> int:
        return self.rank1(i) if a else self.rank0(i)

    def select1(self, k: int) -> int:
        """Position of the k-th one."""
        if not 1 <= k <= self._ones:
            raise IndexError(f"select_1 rank {k} outside [1, {self._ones}]")
        t = (k - 1) // SAMPLE
        s1 = self._s1
        lo = s1[t]
        hi = s1[t + 1] + 1 if t + 1 < len(s1) else len(self._super)
        s = bisect_left(self._super, k, lo, hi) - 1
        r = k - self._super[s]
        b = s * BLOCKS_PER_SUPER
        end = min(b + BLOCKS_PER_SUPER, len(self._blocks))
        rel = self._rel
        while b + 1 < end and rel[b + 1] < r:
            b += 1
        return b * BLOCK + _select_in_block(self._blocks[b], r - rel[b]) + 1

    def select0(self, k: int) -> int:
        """Position of the k-th zero."""
        zeros = self._n - self._ones
        if not 1 <= k <= zeros:
            raise IndexError(f"select_0 rank {k} outside [1, {zeros}]")
        t = (k - 1) // SAMPLE
        s0 = self._s0
        lo = s0[t]
        hi = s0[t + 1] if t + 1 < len(s0) else len(self._super) - 1
        sup = self._super
        # largest s in [lo, hi] with zeros-before(s) < k
        while lo < hi:
            mid = (lo + hi + 1) >> 1
            if mid * SUPER - sup[mid] < k:
                lo = mid
            else:
                hi = mid - 1
        s = lo
        r = k - (s * SUPER - sup[s])
        b = s * BLOCKS_PER_SUPER
        end = min(b + BLOCKS_PER_SUPER, len(self._blocks))
        rel = self._rel
        while b + 1 < end and (b + 1 - s * BLOCKS_PER_SUPER) * BLOCK - rel[b + 1] < r:
            b += 1
        r -= (b - s * BLOCKS_PER_SUPER) * BLOCK - rel[b]
        return b * BLOCK + _select_in_block(~self._blocks[b] & _FULL, r) + 1

    def select(self, a: int, k: int) -> int:
        return self.select1(k) if a else self.select0(k)

    # -- space -------------------------------------------------------------

    @property
    def payload_bits(self) -> int:
        return self._n

    @property
    def directory_bits(self) -> int:
        """Bits of rank/select directory entries that carry information.

        The first superblock count and the first block count of every
        superblock are always zero and are not stored.
        """
        nsup = len(self._super)
        wide = max(1, self._n.bit_length())
        wsup = max(1, nsup.bit_length())
        stored_rel = len(self._rel) - nsup
        return ((nsup - 1) * wide + stored_rel * _REL_WIDTH
                + (max(0, len(self._s1) - 1) + max(0, len(self._s0) - 1)) * wsup)

    @property
    def size_in_bits(self) -> int:
        return self.payload_bits + self.directory_bits

    # -- serialization -----------------------------------------------------

    def payload_bytes(self) -> bytes:
        return words_to_bytes(self.to_int(), self._n)

    @classmethod
    def from_payload(cls, payload: bytes, length: int) -> "Bitvector":
        if len(payload) != (length + 63) // 64 * 8:
            raise IntegrityError("bitvector payload length does not match its header")
        value = int.from_bytes(payload, "little")
        if value >> length:
            raise IntegrityError("bitvector payload has bits past its length")
        return cls.from_int(value, length)

    def to_bytes(self) -> bytes:
        head = _HEADER.pack(MAGIC, VERSION, KIND_PLAIN, self._n, self._ones)
        return head + self.payload_bytes()

    @classmethod
    def from_bytes(cls, data: bytes) -> "Bitvector":
        kind, length, ones, payload = read_header(data)
        if kind != KIND_PLAIN:
            raise IntegrityError(f"expected a plain bitvector section, got kind {kind}")
        bv = cls.from_payload(payload, length)
        if bv.ones != ones:
            raise IntegrityError("bitvector ones count does not match its header")
        return bv


def read_header(data: bytes) -> tuple[int, int, int, bytes]:
    if len(data) < _HEADER.size:
        raise IntegrityError("truncated SBIT section")
    magic, version, kind, length, ones = _HEADER.unpack_from(data)
    if magic != MAGIC:
        raise IntegrityError(f"bad SBIT magic {magic!r}")
    if version != VERSION:
        raise IntegrityError(f"unsupported SBIT version {version}")
    return kind, length, ones, data[_HEADER.size:]


def _low_width(n: int, u: int) -> int:
    if n == 0 or u <= n:
        return 0
    return (u // n).bit_length() - 1


class MonotoneSequence:
    """Non-decreasing integers ``0 <= a[0] <= ... < u`` in split high/low form.

    Each value keeps its ``l = floor(log2(u/n))`` low bits in a packed array;
    the high parts are written in unary into a bitvector of about
    ``n + u / 2**l`` bits.  Indices are 0-based.
    """

    __slots__ = ("_n", "_u", "_l", "_high", "_low")

    def __init__(self, values: Iterable[int], universe: int):
        vals = np.asarray(list(values) if not hasattr(values, "__len__") else values, dtype=np.int64).ravel()
        n = int(vals.size)
        if universe < 0:
            raise ValidationError("universe must be non-negative")
        if n:
            if vals[0] < 0 or int(vals[-1]) >= universe:
                raise ValidationError(f"values must lie in [0, {universe})")
            if np.any(np.diff(vals) < 0):
                raise ValidationError("values must be non-decreasing")
        self._n = n
        self._u = universe
        self._l = l = _low_width(n, universe)
        hlen = n + ((universe - 1) >> l) + 1 if universe else 0
        flags = np.zeros(hlen, dtype=bool)
        if n:
            flags[(vals >> l) + np.arange(n)] = True
        self._high = Bitvector(flags)
        self._low = PackedVector((vals & ((1 << l) - 1)).tolist(), 1 << l)

    def __len__(self) -> int:
        return self._n

    @property
    def universe(self) -> int:
        return self._u

    @property
    def low_width(self) -> int:
        return self._l

    def access(self, i: int) -> int:
        if not 0 <= i < self._n:
            raise IndexError(f"index {i} outside [0, {self._n})")
        high = self._high.select1(i + 1) - i - 1
        return (high << self._l) | self._low._get0(i)

    def __iter__(self) -> Iterator[int]:
        i = 0
        high = 0
        l = self._l
        low = self._low
        for bit in self._high:
            if bit:
                yield (high << l) | low._get0(i)
                i += 1
            else:
                high += 1

    def to_list(self) -> list[int]:
        return list(self)

    def rank_member(self, v: int) -> tuple[int, bool]:
        """``(|{j : a[j] < v}|, v in a)`` in one bucket probe."""
        if v <= 0:
            return 0, (v == 0 and self._n > 0 and self.access(0) == 0)
        if v >= self._u:
            return self._n, False
        l = self._l
        hb = v >> l
        high = self._high
        start = high.select0(hb) - hb if hb else 0
        end = high.select0(hb + 1) - hb - 1
        if start == end:
            return start, False
        if l == 0:
            return start, True
        target = v & ((1 << l) - 1)
        low = self._low
        lo, hi = start, end
        while lo < hi:
            mid = (lo + hi) >> 1
            if low._get0(mid) < target:
                lo = mid + 1
            else:
                hi = mid
        return lo, lo < end and low._get0(lo) == target

    def rank(self, v: int) -> int:
        """Number of entries strictly below ``v``."""
        if not 0 <= v <= self._u:
            raise IndexError(f"value {v} outside [0, {self._u}]")
        return self.rank_member(v)[0]

    def select(self, k: int) -> int:
        """k-th smallest entry, 1-based (same as ``access(k-1)``)."""
        return self.access(k - 1)

    @property
    def size_in_bits(self) -> int:
        return self._high.size_in_bits + self._low.payload_bits

    @property
    def payload_bits(self) -> int:
        return self._high.payload_bits + self._low.payload_bits

    @property
    def directory_bits(self) -> int:
        return self._high.directory_bits

    def __eq__(self, other) -> bool:
        if not isinstance(other, MonotoneSequence):
            return NotImplemented
        return self._u == other._u and self._high == other._high and self._low == other._low

    def __repr__(self) -> str:
        return f"MonotoneSequence(n={self._n}, u={self._u}, low_width={self._l})"

    def to_bytes(self) -> bytes:
        head = _HEADER.pack(MAGIC, VERSION, KIND_MONOTONE, self._u, self._n)
        hlen = len(self._high)
        widths = [hlen] + [self._l] * self._n
        acc = join_fields([self._high.to_int()] + self._low.to_list(), widths)
        return head + words_to_bytes(acc, sum(widths))

    @classmethod
    def from_bytes(cls, data: bytes) -> "MonotoneSequence":
        kind, universe, n, payload = read_header(data)
        if kind != KIND_MONOTONE:
            raise IntegrityError(f"expected a monotone section, got kind {kind}")
        l = _low_width(n, universe)
        hlen = n + ((universe - 1) >> l) + 1 if universe else 0
        widths = [hlen] + [l] * n
        if len(payload) != (sum(widths) + 63) // 64 * 8:
            raise IntegrityError("monotone payload length does not match its header")
        try:
            fields = split_fields(int.from_bytes(payload, "little"), widths)
        except ValueError as exc:
            raise IntegrityError(f"monotone payload: {exc}") from None
        high = Bitvector.from_int(fields[0], hlen)
        if high.ones != n:
            raise IntegrityError("monotone high part has the wrong number of ones")
        self = cls.__new__(cls)
        self._n, self._u, self._l = n, universe, l
        self._high = high
        self._low = PackedVector(fields[1:], 1 << l)
        return self


class SparseBitvector:
    """Bitvector stored as the sorted positions of its ones.

    ``partial_rank1(i)`` returns ``rank1(i)`` when bit ``i`` is set and
    ``None`` otherwise.
    """

    __slots__ = ("_n", "_pos")

    def __init__(self, bits: Iterable[bool] | str = ()):
        arr = _to_bool_array(bits)
        self._n = int(arr.size)
        self._pos = MonotoneSequence(np.flatnonzero(arr), self._n)

    @classmethod
    def from_positions(cls, positions: Iterable[int], length: int) -> "SparseBitvector":
        """``positions`` are 1-based and strictly increasing."""
        pos = np.asarray(list(positions), dtype=np.int64)
        if pos.size and (pos[0] < 1 or pos[-1] > length or np.any(np.diff(pos) <= 0)):
            raise ValidationError("positions must be strictly increasing within [1, length]")
        self = cls.__new__(cls)
        self._n = length
        self._pos = MonotoneSequence(pos - 1, length)
        return self

    @classmethod
    def _wrap(cls, seq: MonotoneSequence) -> "SparseBitvector":
        vals = seq.to_list()
        if any(a >= b for a, b in zip(vals, vals[1:])):
            raise IntegrityError("sparse bitvector positions must be strictly increasing")
        self = cls.__new__(cls)
        self._n = seq.universe
        self._pos = seq
        return self

    def __len__(self) -> int:
        return self._n

    @property
    def ones(self) -> int:
        return len(self._pos)

    @property
    def positions(self) -> MonotoneSequence:
        return self._pos

    def bit(self, i: int) -> int:
        if not 1 <= i <= self._n:
            raise IndexError(f"position {i} outside [1, {self._n}]")
        return int(self._pos.rank_member(i - 1)[1])

    def rank1(self, i: int) -> int:
        if not 0 <= i <= self._n:
            raise IndexError(f"rank position {i} outside [0, {self._n}]")
        return self._pos.rank_member(i)[0]

    def rank0(self, i: int) -> int:
        return i - self.rank1(i)

    def rank_and_bit(self, i: int) -> tuple[int, bool]:
        """``(rank1(i - 1), bit i is set)`` for 1-based ``i``."""
        return self._pos.rank_member(i - 1)

    def partial_rank1(self, i: int) -> int | None:
        if not 1 <= i <= self._n:
            raise IndexError(f"position {i} outside [1, {self._n}]")
        r, present = self._pos.rank_member(i - 1)
        return r + 1 if present else None

    def select1(self, k: int) -> int:
        if not 1 <= k <= len(self._pos):
            raise IndexError(f"select_1 rank {k} outside [1, {len(self._pos)}]")
        return self._pos.access(k - 1) + 1

    def __iter__(self) -> Iterator[int]:
        prev = 0
        for p in self._pos:
            yield from (0,) * (p - prev)
            yield 1
            prev = p + 1
        yield from (0,) * (self._n - prev)

    def to_string(self) -> str:
        return "".join("1" if b else "0" for b in self)

    @property
    def size_in_bits(self) -> int:
        return self._pos.size_in_bits

    @property
    def payload_bits(self) -> int:
        return self._pos.payload_bits

    @property
    def directory_bits(self) -> int:
        return self._pos.directory_bits

    def __eq__(self, other) -> bool:
        if not isinstance(other, SparseBitvector):
            return NotImplemented
        return self._n == other._n and self._pos == other._pos

    def __repr__(self) -> str:
        return f"SparseBitvector(length={self._n}, ones={self.ones})"

    def to_bytes(self) -> bytes:
        return self._pos.to_bytes()

    @classmethod
    def from_bytes(cls, data: bytes) -> "SparseBitvector":
        return cls._wrap(MonotoneSequence.from_bytes(data))
