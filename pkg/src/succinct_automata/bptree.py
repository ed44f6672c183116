"""Balanced-parentheses ordinal trees.

A tree on ``n`` nodes is the 2n-bit string of its preorder traversal
(1 = open, 0 = close).  Nodes are named by preorder rank, 1..n.  Navigation
runs on the excess ``E(p) = opens - closes`` over positions 1..p, through a
range min-max tree whose leaves are the 256-bit blocks of the bitvector:

* each node keeps the total excess of its span, the minimum prefix excess
  and how many prefixes attain it;
* ``findclose``/``enclose`` are forward/backward searches for the first
  position whose excess drops to a target;
* the i-th child is the (i-1)-th position after the node's open where the
  excess returns to the node's own level.

Searches walk at most one root-to-leaf path each way, O(log n) node visits;
inside a block they step a byte at a time through lookup tables.
"""

from __future__ import annotations

import struct
from typing import Iterable, Sequence

import numpy as np

from .bits import BLOCK, Bitvector
from .errors import IntegrityError, ValidationError


def _byte_tables():
    tot, mn, cnt = [], [], []
    for x in range(256):
        cur = 0
        best = 9
        c = 0
        for t in range(8):
            cur += 1 if (x >> t) & 1 else -1
            if cur < best:
                best, c = cur, 1
            elif cur == best:
                c += 1
        tot.append(cur)
        mn.append(best)
        cnt.append(c)
    return tot, mn, cnt


_TOT, _MN, _CNT = _byte_tables()
_INF = 1 << 40

_FOUND_NONE = -1
_FAIL = -2

PDIR_MAGIC = b"PDIR"
_PDIR_HEADER = struct.Struct("<4sI")


def _scan_fwd(x, off, end, cur, target):
    """First offset (1-based within the block) where the excess hits ``target``."""
    while off < end and off & 7:
        cur += ((x >> off) & 1) * 2 - 1
        off += 1
        if cur == target:
            return off, cur
    while off + 8 <= end:
        byte = (x >> off) & 255
        if cur + _MN[byte] <= target:
            for t in range(8):
                cur += ((byte >> t) & 1) * 2 - 1
                if cur == target:
                    return off + t + 1, cur
        cur += _TOT[byte]
        off += 8
    while off < end:
        cur += ((x >> off) & 1) * 2 - 1
        off += 1
        if cur == target:
            return off, cur
    return _FOUND_NONE, cur


def _scan_bwd(x, off, cur, target):
    """Walk left from offset ``off`` (excess ``cur`` there) to ``target``."""
    while off > 0 and off & 7:
        off -= 1
        cur -= ((x >> off) & 1) * 2 - 1
        if cur == target:
            return off, cur
    while off >= 8:
        byte = (x >> (off - 8)) & 255
        start = cur - _TOT[byte]
        if start + min(0, _MN[byte]) <= target:
            for t in range(7, -1, -1):
                cur -= ((byte >> t) & 1) * 2 - 1
                if cur == target:
                    return off - 8 + t, cur
        cur = start
        off -= 8
    return _FOUND_NONE, cur


def _scan_select(x, off, end, cur, m, k):
    """k-th offset where the excess equals ``m``; fails if it drops below ``m``."""
    while off < end and off & 7:
        cur += ((x >> off) & 1) * 2 - 1
        off += 1
        if cur == m:
            k -= 1
            if k == 0:
                return off, cur, k
        elif cur < m:
            return _FAIL, cur, k
    while off + 8 <= end:
        byte = (x >> off) & 255
        low = cur + _MN[byte]
        if low < m or (low == m and _CNT[byte] >= k):
            for t in range(8):
                cur += ((byte >> t) & 1) * 2 - 1
                if cur == m:
                    k -= 1
                    if k == 0:
                        return off + t + 1, cur, k
                elif cur < m:
                    return _FAIL, cur, k
        if low == m:
            k -= _CNT[byte]
        cur += _TOT[byte]
        off += 8
    while off < end:
        cur += ((x >> off) & 1) * 2 - 1
        off += 1
        if cur == m:
            k -= 1
            if k == 0:
                return off, cur, k
        elif cur < m:
            return _FAIL, cur, k
    return _FOUND_NONE, cur, k


def _scan_count(x, off, end, cur, m):
    count = 0
    while off < end and off & 7:
        cur += ((x >> off) & 1) * 2 - 1
        off += 1
        count += cur == m
    while off + 8 <= end:
        byte = (x >> off) & 255
        if cur + _MN[byte] == m:
            count += _CNT[byte]
        cur += _TOT[byte]
        off += 8
    while off < end:
        cur += ((x >> off) & 1) * 2 - 1
        off += 1
        count += cur == m
    return count


def _leaf_summary(x, length):
    cur = 0
    best = _INF
    c = 0
    off = 0
    while off + 8 <= length:
        byte = (x >> off) & 255
        low = cur + _MN[byte]
        if low < best:
            best, c = low, _CNT[byte]
        elif low == best:
            c += _CNT[byte]
        cur += _TOT[byte]
        off += 8
    while off < length:
        cur += ((x >> off) & 1) * 2 - 1
        off += 1
        if cur < best:
            best, c = cur, 1
        elif cur == best:
            c += 1
    return cur, best, c


def _to_paren_bits(parens) -> list[bool] | Bitvector:
    if isinstance(parens, Bitvector):
        return parens
    if isinstance(parens, str):
        if set(parens) <= {"(", ")"}:
            return Bitvector([ch == "(" for ch in parens])
        return Bitvector(parens)
    return Bitvector(list(parens))


class BpTree:
    """Static ordinal tree in balanced-parentheses form."""

    __slots__ = ("_bv", "_len", "_size", "_tot", "_mn", "_cnt", "_nleaves")

    def __init__(self, parens: str | Iterable[bool] | Bitvector):
        bv = _to_paren_bits(parens)
        self._bv = bv
        self._len = n2 = len(bv)
        if n2 == 0:
            raise ValidationError("a tree needs at least one node")
        if n2 % 2 or bv.ones * 2 != n2:
            raise ValidationError("parenthesis string is unbalanced")
        leaves = [
            _leaf_summary(bv._blocks[b], min(BLOCK, n2 - b * BLOCK))
            for b in range((n2 + BLOCK - 1) // BLOCK)
        ]
        self._validate(leaves)
        self._build_tree(leaves)

    def _validate(self, leaves) -> None:
        n2 = self._len
        # excess must stay positive strictly inside and reach 0 only at the end
        cur = 0
        for b, (tot, low, _) in enumerate(leaves):
            if cur + low < 0:
                raise ValidationError("parenthesis string is unbalanced")
            if cur + low == 0:
                # a zero before the last position would close the root early
                if self._first_zero(b, cur) < n2:
                    raise ValidationError("parenthesis string describes a forest, not a tree")
            cur += tot

    def _first_zero(self, b, cur):
        res, _ = _scan_fwd(self._bv._blocks[b], 0, min(BLOCK, self._len - b * BLOCK), cur, 0)
        return b * BLOCK + res

    def _build_tree(self, leaves: Sequence[tuple[int, int, int]]) -> None:
        nleaves = len(leaves)
        size = 1
        while size < nleaves:
            size <<= 1
        tot = [0] * (2 * size)
        mn = [_INF] * (2 * size)
        cnt = [0] * (2 * size)
        for i, (t, m, c) in enumerate(leaves):
            tot[size + i], mn[size + i], cnt[size + i] = t, m, c
        for node in range(size - 1, 0, -1):
            l, r = 2 * node, 2 * node + 1
            tl = tot[l]
            tot[node] = tl + tot[r]
            ml, mr = mn[l], tl + mn[r]
            if ml < mr:
                mn[node], cnt[node] = ml, cnt[l]
            elif mr < ml:
                mn[node], cnt[node] = mr, cnt[r]
            else:
                mn[node], cnt[node] = ml, cnt[l] + cnt[r]
        self._size = size
        self._tot, self._mn, self._cnt = tot, mn, cnt
        self._nleaves = nleaves

    # -- primitives --------------------------------------------------------

    def __len__(self) -> int:
        return self._len // 2

    @property
    def parens(self) -> Bitvector:
        return self._bv

    def to_string(self) -> str:
        return "".join("(" if b else ")" for b in self._bv)

    def excess(self, p: int) -> int:
        return 2 * self._bv.rank1(p) - p

    def _fwd(self, i: int, target: int) -> int | None:
        """Smallest j > i with E(j) = target, assuming E(i) > target."""
        n2 = self._len
        if i >= n2:
            return None
        blocks = self._bv._blocks
        cur = 2 * self._bv.rank1(i) - i
        b = i >> 8
        res, cur = _scan_fwd(blocks[b], i & 255, min(BLOCK, n2 - (b << 8)), cur, target)
        if res >= 0:
            return (b << 8) + res
        size = self._size
        mn, tot = self._mn, self._tot
        node = size + b
        while node > 1:
            if not node & 1:
                sib = node + 1
                if cur + mn[sib] <= target:
                    node = sib
                    break
                cur += tot[sib]
            node >>= 1
        else:
            return None
        while node < size:
            left = node << 1
            if cur + mn[left] <= target:
                node = left
            else:
                cur += tot[left]
                node = left + 1
        b = node - size
        res, _ = _scan_fwd(blocks[b], 0, min(BLOCK, n2 - (b << 8)), cur, target)
        return (b << 8) + res if res >= 0 else None

    def _bwd(self, i: int, target: int) -> int | None:
        """Largest j < i (j >= 0) with E(j) = target, assuming E(i) > target."""
        if i <= 0:
            return None
        blocks = self._bv._blocks
        cur = 2 * self._bv.rank1(i) - i
        b = (i - 1) >> 8
        res, cur = _scan_bwd(blocks[b], i - (b << 8), cur, target)
        if res >= 0:
            return (b << 8) + res
        size = self._size
        mn, tot = self._mn, self._tot
        node = size + b
        while node > 1:
            if node & 1:
                sib = node - 1
                start = cur - tot[sib]
                if start + min(0, mn[sib]) <= target:
                    node = sib
                    break
                cur = start
            node >>= 1
        else:
            return None
        while node < size:
            right = (node << 1) + 1
            start = cur - tot[right]
            if start + min(0, mn[right]) <= target:
                node = right
            else:
                cur = start
                node = right - 1
        b = node - size
        res, _ = _scan_bwd(blocks[b], BLOCK, cur, target)
        return (b << 8) + res if res >= 0 else None

    def _select_level(self, i: int, m: int, k: int) -> int | None:
        """k-th j > i with E(j) = m, provided the excess stays >= m until then."""
        n2 = self._len
        if i >= n2:
            return None
        blocks = self._bv._blocks
        cur = 2 * self._bv.rank1(i) - i
        b = i >> 8
        res, cur, k = _scan_select(blocks[b], i & 255, min(BLOCK, n2 - (b << 8)), cur, m, k)
        if res >= 0:
            return (b << 8) + res
        if res == _FAIL:
            return None
        size = self._size
        mn, tot, cnt = self._mn, self._tot, self._cnt
        node = size + b
        while node > 1:
            if not node & 1:
                sib = node + 1
                low = cur + mn[sib]
                if low < m or (low == m and cnt[sib] >= k):
                    node = sib
                    break
                if low == m:
                    k -= cnt[sib]
                cur += tot[sib]
            node >>= 1
        else:
            return None
        while node < size:
            left = node << 1
            low = cur + mn[left]
            if low < m or (low == m and cnt[left] >= k):
                node = left
            else:
                if low == m:
                    k -= cnt[left]
                cur += tot[left]
                node = left + 1
        b = node - size
        res, _, _ = _scan_select(blocks[b], 0, min(BLOCK, n2 - (b << 8)), cur, m, k)
        return (b << 8) + res if res >= 0 else None

    def _count_level(self, lo: int, hi: int, m: int) -> int:
        """Number of positions j, lo < j < hi, with E(j) = m (E >= m there)."""
        if hi - lo <= 1:
            return 0
        blocks = self._bv._blocks
        end = hi - 1  # exclusive 0-based end of the scanned bit range
        bl, bh = lo >> 8, (end - 1) >> 8
        cur = 2 * self._bv.rank1(lo) - lo
        if bl == bh:
            return _scan_count(blocks[bl], lo & 255, end - (bl << 8), cur, m)
        total = _scan_count(blocks[bl], lo & 255, BLOCK, cur, m)
        size = self._size
        mn, cnt = self._mn, self._cnt
        l, r = size + bl + 1, size + bh
        rank1 = self._bv.rank1
        while l < r:
            if l & 1:
                total += self._node_count(l, m, mn, cnt, rank1)
                l += 1
            if r & 1:
                r -= 1
                total += self._node_count(r, m, mn, cnt, rank1)
            l >>= 1
            r >>= 1
        start = bh << 8
        total += _scan_count(blocks[bh], 0, end - start, 2 * rank1(start) - start, m)
        return total

    def _node_count(self, node, m, mn, cnt, rank1):
        first = node
        while first < self._size:
            first <<= 1
        p = (first - self._size) << 8
        return cnt[node] if 2 * rank1(p) - p + mn[node] == m else 0

    # -- navigation --------------------------------------------------------

    def _check(self, v: int) -> None:
        if not 1 <= v <= self._len // 2:
            raise IndexError(f"node {v} outside [1, {self._len // 2}]")

    def open_position(self, v: int) -> int:
        self._check(v)
        return self._bv.select1(v)

    def close_position(self, v: int) -> int:
        o = self.open_position(v)
        return self._fwd(o, 2 * v - o - 1)

    def parent(self, v: int) -> int | None:
        """Parent of ``v``, or ``None`` for the root."""
        self._check(v)
        if v == 1:
            return None
        return self._parent_unchecked(v)

    def _parent_unchecked(self, v: int) -> int:
        o = self._bv.select1(v)
        j = self._bwd(o, 2 * v - o - 2)
        return self._bv.rank1(j) + 1

    def subtree_size(self, v: int) -> int:
        o = self.open_position(v)
        c = self._fwd(o, 2 * v - o - 1)
        return (c - o + 1) // 2

    def degree(self, v: int) -> int:
        o = self.open_position(v)
        level = 2 * v - o
        c = self._fwd(o, level - 1)
        return self._count_level(o, c, level)

    def child(self, v: int, i: int) -> int:
        """The i-th child of ``v`` (1-based, left to right)."""
        self._check(v)
        if i < 1:
            raise IndexError(f"child index {i} must be >= 1")
        c = self._child_unchecked(v, i)
        if c is None:
            raise IndexError(f"node {v} has fewer than {i} children")
        return c

    def _child_unchecked(self, v: int, i: int) -> int | None:
        bv = self._bv
        o = bv.select1(v)
        if i == 1:
            j = o
        else:
            j = self._select_level(o, 2 * v - o, i - 1)
            if j is None:
                return None
        if j >= self._len or not (bv._blocks[j >> 8] >> (j & 255)) & 1:
            return None
        return bv.rank1(j) + 1

    def children(self, v: int) -> list[int]:
        out = []
        i = 1
        while (c := self._child_unchecked(v, i)) is not None:
            out.append(c)
            i += 1
        return out

    # -- space / serialization -------------------------------------------------

    @property
    def payload_bits(self) -> int:
        return self._len

    @property
    def directory_bits(self) -> int:
        """Rank/select directory of the parentheses plus min-max tree fields."""
        bits = self._bv.directory_bits
        if self._nleaves > 1:
            size = self._size
            for node in range(1, 2 * size):
                first = node
                span = 1
                while first < size:
                    first <<= 1
                    span <<= 1
                leaf = first - size
                if leaf >= self._nleaves:
                    continue
                covered = min(span, self._nleaves - leaf) * BLOCK
                w = covered.bit_length() + 1
                bits += 3 * w
        return bits

    @property
    def size_in_bits(self) -> int:
        return self.payload_bits + self.directory_bits

    def directory_bytes(self) -> bytes:
        size = self._size
        n = self._nleaves
        rec = np.array(
            [self._tot[size:size + n], self._mn[size:size + n], self._cnt[size:size + n]],
            dtype="<i2",
        ).T
        return _PDIR_HEADER.pack(PDIR_MAGIC, n) + rec.tobytes()

    @classmethod
    def from_sections(cls, parens: Bitvector, directory: bytes) -> "BpTree":
        if len(directory) < _PDIR_HEADER.size:
            raise IntegrityError("truncated PDIR section")
        magic, n = _PDIR_HEADER.unpack_from(directory)
        if magic != PDIR_MAGIC:
            raise IntegrityError(f"bad PDIR magic {magic!r}")
        if n != (len(parens) + BLOCK - 1) // BLOCK:
            raise IntegrityError("PDIR leaf count does not match the parentheses")
        body = directory[_PDIR_HEADER.size:]
        if len(body) != 6 * n:
            raise IntegrityError("PDIR payload length does not match its header")
        rec = np.frombuffer(body, dtype="<i2").reshape(n, 3)
        self = cls.__new__(cls)
        self._bv = parens
        self._len = len(parens)
        if self._len == 0 or self._len % 2 or parens.ones * 2 != self._len:
            raise IntegrityError("stored parentheses are unbalanced")
        self._build_tree([tuple(int(v) for v in row) for row in rec])
        if self._tot[1] != 0 or self._mn[1] != 0 or self._cnt[1] != 1:
            raise IntegrityError("stored parentheses do not describe a single tree")
        return self


def from_children(children: Sequence[Sequence[int]], root: int) -> tuple[BpTree, list[int]]:
    """Encode a pointer tree; returns the tree and nodes listed in preorder.

    ``children[v]`` lists the children of ``v`` left to right.
    """
    bits: list[bool] = []
    order: list[int] = []
    stack = [(root, 0)]
    bits.append(True)
    order.append(root)
    while stack:
        v, i = stack[-1]
        kids = children[v]
        if i < len(kids):
            stack[-1] = (v, i + 1)
            c = kids[i]
            bits.append(True)
            order.append(c)
            stack.append((c, 0))
        else:
            stack.pop()
            bits.append(False)
    return BpTree(bits), order
