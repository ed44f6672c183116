"""Succinct DFA: finals ``F``, tree shape ``P``, edge flags ``T``, targets ``NewBoxed``.

States are relabelled by lexicographic-DFS preorder.  ``T`` has ``sigma``
bits per state; bit ``sigma(q-1) + c`` is set iff the edge ``(q, c)`` is a
DFS tree edge.  Tree edges are answered by a child query on ``P``, the
remaining ``(sigma-1)n + 1`` edges by ``NewBoxed`` indexed with ``rank_0``.
Only the ``n - 1`` one-positions of ``T`` are stored (as a monotone
sequence), so ranks on ``T`` cost ``O(log sigma)``.
"""

from __future__ import annotations

import math
from typing import Sequence

from .automaton import ExplicitDfa, check_word, lex_dfs, validate
from .bits import Bitvector, SparseBitvector
from .bptree import BpTree
from .errors import ValidationError
from .packedvec import PackedVector


class _SdfaBase:
    """Fields and queries shared by the plain and failure-compressed forms."""

    def __init__(self, n: int, sigma: int, initial_label: int, F: Bitvector, P: BpTree,
                 T: SparseBitvector, letters: tuple[str, ...] | None = None):
        self.n = n
        self.sigma = sigma
        self.initial_label = initial_label
        self.F = F
        self.P = P
        self.T = T
        self.letters = letters

    def _nontree(self, j: int) -> int:
        raise NotImplementedError

    def _check_state(self, q: int, c: int) -> None:
        if not 1 <= q <= self.n:
            raise IndexError(f"state {q} outside [1, {self.n}]")
        if not 1 <= c <= self.sigma:
            raise IndexError(f"letter {c} outside [1, {self.sigma}]")

    def delta(self, q: int, c: int) -> int:
        """Successor of state ``q`` on letter ``c``; 0 stands for the failure state."""
        self._check_state(q, c)
        return self._delta(q, c)

    def _delta(self, q: int, c: int) -> int:
        p = self.sigma * (q - 1) + c
        r, tree = self.T.rank_and_bit(p)
        if tree:
            j = r + 1 - self.T.rank1(p - c)
            return self.P._child_unchecked(q, j)
        return self._nontree(p - r)

    def run(self, x: Sequence[int]) -> int:
        check_word(x, self.sigma)
        q = self.initial_label
        step = self._delta
        for c in x:
            q = step(q, c)
            if q == 0:
                return 0
        return q

    def accept(self, x: Sequence[int]) -> bool:
        q = self.run(x)
        return q != 0 and bool(self.F.bit(q))

    def transitions(self, q: int) -> list[int]:
        """All ``sigma`` successors of ``q``, walking the flags of ``q`` once."""
        sigma = self.sigma
        start = sigma * (q - 1)
        ones = self.T.rank1(start)
        seq = self.T.positions
        total = len(seq)
        nxt = seq.access(ones) + 1 if ones < total else 0
        out = []
        t = 0
        for c in range(1, sigma + 1):
            p = start + c
            if p == nxt:
                t += 1
                out.append(self.P._child_unchecked(q, t))
                nxt = seq.access(ones + t) + 1 if ones + t < total else 0
            else:
                out.append(self._nontree(p - ones - t))
        return out

    @property
    def alphabet(self) -> tuple[str, ...]:
        return self.letters or tuple(str(c) for c in range(1, self.sigma + 1))

    def _common_space(self) -> dict[str, int]:
        return {
            "F": self.F.payload_bits,
            "P": self.P.size_in_bits,
            "T": self.T.size_in_bits,
        }


class SuccinctDfa(_SdfaBase):
    def __init__(self, n, sigma, initial_label, F, P, T, new_boxed: PackedVector, letters=None):
        super().__init__(n, sigma, initial_label, F, P, T, letters)
        self.new_boxed = new_boxed

    def _nontree(self, j: int) -> int:
        return self.new_boxed._get0(j - 1)

    @property
    def failure(self) -> bool:
        return False

    def complement(self) -> "SuccinctDfa":
        """Same ``P``, ``T`` and ``NewBoxed``; every bit of ``F`` flipped."""
        flipped = Bitvector.from_int(self.F.to_int() ^ ((1 << self.n) - 1), self.n)
        return SuccinctDfa(self.n, self.sigma, self.initial_label, flipped, self.P, self.T,
                           self.new_boxed, self.letters)

    def to_explicit(self) -> ExplicitDfa:
        delta = [self.transitions(q) for q in range(1, self.n + 1)]
        finals = frozenset(q for q in range(1, self.n + 1) if self.F.bit(q))
        return ExplicitDfa(self.n, self.sigma, self.initial_label, finals, delta, self.letters)

    def space(self) -> dict[str, int]:
        out = self._common_space()
        out["NewBoxed"] = self.new_boxed.payload_bits
        return out

    def formulas(self) -> dict[str, float]:
        n, s = self.n, self.sigma
        m = (s - 1) * n + 1
        return {
            "(sigma-1)n log n": (s - 1) * n * math.log2(n) if n > 1 else 0.0,
            "NewBoxed budget": (s - 1) * n * math.ceil(math.log2(n + 1)) + 64 * math.ceil(math.log2(m)) ** 2,
            "n(1+log sigma)": n * (1 + math.log2(s)),
        }

    def __repr__(self) -> str:
        return f"SuccinctDfa(n={self.n}, sigma={self.sigma})"


class SuccinctDfaFailure(_SdfaBase):
    """Failure-compressed form: ``Z`` marks the non-tree edges that are stored."""

    def __init__(self, n, sigma, initial_label, F, P, T, Z: SparseBitvector,
                 new_boxed_prime: PackedVector, letters=None):
        super().__init__(n, sigma, initial_label, F, P, T, letters)
        self.Z = Z
        self.new_boxed_prime = new_boxed_prime

    def _nontree(self, j: int) -> int:
        r, kept = self.Z.rank_and_bit(j)
        return self.new_boxed_prime._get0(r) if kept else 0

    @property
    def failure(self) -> bool:
        return True

    @property
    def non_failure_transitions(self) -> int:
        return self.n - 1 + self.Z.ones

    def new_boxed(self) -> list[int]:
        return [self._nontree(j) for j in range(1, len(self.Z) + 1)]

    def complement(self):
        raise ValidationError("the failure state is implicit and cannot become accepting; "
                              "complement the plain representation instead")

    def to_explicit(self) -> ExplicitDfa:
        """Explicit DFA with the failure state restored as state ``n + 1``."""
        sink = self.n + 1
        delta = [[t or sink for t in self.transitions(q)] for q in range(1, self.n + 1)]
        delta.append([sink] * self.sigma)
        finals = frozenset(q for q in range(1, self.n + 1) if self.F.bit(q))
        return ExplicitDfa(sink, self.sigma, self.initial_label, finals, delta, self.letters)

    def space(self) -> dict[str, int]:
        out = self._common_space()
        out["Z"] = self.Z.size_in_bits
        out["NewBoxedPrime"] = self.new_boxed_prime.payload_bits
        return out

    def formulas(self) -> dict[str, float]:
        n, s = self.n, self.sigma
        big_n = self.non_failure_transitions
        return {
            "(N-n) log n": max(0, big_n - n) * math.log2(n) if n > 1 else 0.0,
            "NewBoxedPrime budget": (big_n - n + 1) * math.ceil(math.log2(n + 1)),
            "N log sigma": big_n * math.log2(s) if s > 1 else 0.0,
        }

    def __repr__(self) -> str:
        return f"SuccinctDfaFailure(n={self.n}, sigma={self.sigma}, N={self.non_failure_transitions})"


def _shape(d: ExplicitDfa, failure: int | None):
    dfs = lex_dfs(d, failure)
    n, sigma = dfs.n, d.sigma
    P = BpTree(dfs.parens)
    ones = [i for i, f in enumerate(dfs.tree_flags, 1) if f]
    T = SparseBitvector.from_positions(ones, sigma * n)
    fin = [False] * n
    for q in d.finals:
        if q != failure:
            fin[dfs.relabel[q] - 1] = True
    return dfs, P, T, Bitvector(fin)


def build_sdfa(d: ExplicitDfa) -> SuccinctDfa:
    validate(d)
    dfs, P, T, F = _shape(d, None)
    nb = PackedVector(dfs.nontree_targets, dfs.n + 1)
    return SuccinctDfa(dfs.n, d.sigma, 1, F, P, T, nb, d.letters)


def build_sdfa_failure(d: ExplicitDfa, failure: int) -> SuccinctDfaFailure:
    """Build with ``failure`` (an absorbing non-final sink) left implicit."""
    validate(d)
    if not 1 <= failure <= d.n:
        raise ValidationError(f"failure state {failure} outside [1, {d.n}]")
    if any(t != failure for t in d.delta[failure - 1]):
        raise ValidationError(f"failure state {failure} is not absorbing")
    if failure in d.finals:
        raise ValidationError(f"failure state {failure} must not be final")
    if failure == d.initial:
        raise ValidationError("the failure state cannot be the initial state")
    dfs, P, T, F = _shape(d, failure)
    targets = dfs.nontree_targets
    Z = SparseBitvector([t != 0 for t in targets])
    nbp = PackedVector([t for t in targets if t], dfs.n + 1)
    return SuccinctDfaFailure(dfs.n, d.sigma, 1, F, P, T, Z, nbp, d.letters)
