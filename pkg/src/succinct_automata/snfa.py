"""Succinct NFA: one ``n``-bit characteristic row per (state, letter) pair.

Row ``(i, j)`` of ``H`` marks the states reachable from state ``i`` on
letter ``j``.  The matrix payload is exactly ``sigma * n**2`` bits; in
memory each row is padded to whole 64-bit words so row ORs are word-wise.
Acceptance keeps two ``n``-bit scratch vectors, the current and next set.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from ._bitio import words_to_bytes
from .automaton import ExplicitNfa, check_word, validate_nfa
from .bits import Bitvector


@dataclass
class WorkspaceAudit:
    """Records every scratch vector an acceptance call allocates."""

    vectors: list[int] = field(default_factory=list)

    def allocate(self, nbits: int, nwords: int) -> np.ndarray:
        self.vectors.append(nbits)
        return np.zeros(nwords, dtype=np.uint64)

    @property
    def total_bits(self) -> int:
        return sum(self.vectors)


class SuccinctNfa:
    def __init__(self, n: int, sigma: int, initial: int, H: np.ndarray, F: Bitvector,
                 letters: tuple[str, ...] | None = None):
        self.n = n
        self.sigma = sigma
        self.initial = initial
        self.H = H
        self.F = F
        self.letters = letters
        self._words = H.shape[1]
        self._final_words = _pack_rows([F.to_int()], self._words)[0]

    def row(self, i: int, j: int) -> np.ndarray:
        return self.H[(i - 1) * self.sigma + j - 1]

    def has_edge(self, i: int, j: int, k: int) -> bool:
        w, b = divmod(k - 1, 64)
        return bool((int(self.row(i, j)[w]) >> b) & 1)

    def _step(self, cur: np.ndarray, nxt: np.ndarray, c: int) -> None:
        nxt[:] = 0
        H, sigma = self.H, self.sigma
        for w in np.flatnonzero(cur):
            word = int(cur[w])
            base = int(w) * 64
            while word:
                low = word & -word
                i = base + low.bit_length() - 1
                np.bitwise_or(nxt, H[i * sigma + c - 1], out=nxt)
                word ^= low

    def step_set(self, states: set[int], c: int) -> set[int]:
        """One subset-simulation step on an explicit state set (for testing)."""
        cur = _pack_rows([sum(1 << (q - 1) for q in states)], self._words)[0]
        nxt = np.zeros_like(cur)
        self._step(cur, nxt, c)
        return _unpack(nxt, self.n)

    def accept(self, x: Sequence[int], audit: WorkspaceAudit | None = None) -> bool:
        check_word(x, self.sigma)
        audit = audit or WorkspaceAudit()
        cur = audit.allocate(self.n, self._words)
        nxt = audit.allocate(self.n, self._words)
        w, b = divmod(self.initial - 1, 64)
        cur[w] = np.uint64(1 << b)
        for c in x:
            self._step(cur, nxt, c)
            cur, nxt = nxt, cur
            if not cur.any():
                return False
        return bool(np.bitwise_and(cur, self._final_words).any())

    @property
    def alphabet(self) -> tuple[str, ...]:
        return self.letters or tuple(str(c) for c in range(1, self.sigma + 1))

    def space(self) -> dict[str, int]:
        return {"H": self.sigma * self.n * self.n, "F": self.F.payload_bits}

    def formulas(self) -> dict[str, float]:
        return {"sigma n^2 + n": self.sigma * self.n ** 2 + self.n}

    def h_payload_bytes(self) -> bytes:
        """Rows concatenated with no padding, LSB first."""
        n = self.n
        acc = 0
        for r in range(self.H.shape[0] - 1, -1, -1):
            acc = (acc << n) | _row_int(self.H[r])
        return words_to_bytes(acc, self.H.shape[0] * n)

    @classmethod
    def from_payload(cls, n: int, sigma: int, initial: int, payload: int, F: Bitvector,
                     letters=None) -> "SuccinctNfa":
        mask = (1 << n) - 1
        rows = [(payload >> (r * n)) & mask for r in range(n * sigma)]
        return cls(n, sigma, initial, _pack_rows(rows, (n + 63) // 64), F, letters)

    def to_explicit(self) -> ExplicitNfa:
        delta = [[frozenset(_unpack(self.row(i, j), self.n)) for j in range(1, self.sigma + 1)]
                 for i in range(1, self.n + 1)]
        finals = frozenset(q for q in range(1, self.n + 1) if self.F.bit(q))
        return ExplicitNfa(self.n, self.sigma, self.initial, finals, delta, self.letters)

    def __repr__(self) -> str:
        return f"SuccinctNfa(n={self.n}, sigma={self.sigma})"


def _pack_rows(rows: Sequence[int], nwords: int) -> np.ndarray:
    out = np.zeros((len(rows), nwords), dtype=np.uint64)
    for r, value in enumerate(rows):
        raw = value.to_bytes(nwords * 8, "little")
        out[r] = np.frombuffer(raw, dtype="<u8")
    return out


def _row_int(row: np.ndarray) -> int:
    return int.from_bytes(row.astype("<u8").tobytes(), "little")


def _unpack(row: np.ndarray, n: int) -> set[int]:
    value = _row_int(row)
    return {k for k in range(1, n + 1) if (value >> (k - 1)) & 1}


def build_snfa(nf: ExplicitNfa) -> SuccinctNfa:
    validate_nfa(nf)
    rows = []
    for i in range(nf.n):
        for targets in nf.delta[i]:
            rows.append(sum(1 << (k - 1) for k in targets))
    H = _pack_rows(rows, (nf.n + 63) // 64)
    F = Bitvector([q in nf.finals for q in range(1, nf.n + 1)])
    return SuccinctNfa(nf.n, nf.sigma, nf.initial, H, F, nf.letters)
