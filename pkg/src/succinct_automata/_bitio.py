"""Linear-time packing of variable-width integer fields into one bit string.

Repeated ``acc |= x << shift`` on a growing int is quadratic; going through a
binary string keeps both directions linear in the total bit count.
"""

from __future__ import annotations

from typing import Sequence


def join_fields(values: Sequence[int], widths: Sequence[int]) -> int:
    """Concatenate ``values`` LSB-first, field ``i`` taking ``widths[i]`` bits."""
    parts = [format(v, f"0{w}b") if w else "" for v, w in zip(values, widths)]
    parts.reverse()
    text = "".join(parts)
    return int(text, 2) if text else 0


def split_fields(acc: int, widths: Sequence[int]) -> list[int]:
    """Inverse of :func:`join_fields`; bits above the fields must be zero."""
    total = sum(widths)
    if acc >> total:
        raise ValueError("trailing bits beyond the declared fields")
    text = format(acc, f"0{total}b") if total else ""
    out = []
    end = total
    for w in widths:
        if w:
            out.append(int(text[end - w:end], 2))
            end -= w
        else:
            out.append(0)
    return out


def words_to_bytes(acc: int, nbits: int) -> bytes:
    """Little-endian u64 words covering ``nbits`` bits."""
    nwords = (nbits + 63) // 64
    return acc.to_bytes(nwords * 8, "little")
