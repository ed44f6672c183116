"""Succinct acyclic DFA.

The letter-``sigma`` transitions of the transient states form a tree ``W``
rooted at the dead state, so ``delta(q, sigma)`` is a parent query.  The
other ``sigma - 1`` letters go into a packed table ``L``.  Labels are
preorder ranks in ``W`` minus one: the dead state is 0, transient states
are ``1..n-1``.
"""

from __future__ import annotations

import math
from typing import Sequence

from .automaton import ExplicitDfa, check_word, classify_acyclic, validate
from .bits import Bitvector
from .bptree import BpTree, from_children
from .errors import AcyclicityError
from .packedvec import PackedVector


class SuccinctAcyclicDfa:
    def __init__(self, n: int, sigma: int, start_label: int, W: BpTree, L: PackedVector,
                 F: Bitvector, letters: tuple[str, ...] | None = None):
        self.n = n
        self.sigma = sigma
        self.start_label = start_label
        self.W = W
        self.L = L
        self.F = F
        self.letters = letters

    def delta(self, q: int, c: int) -> int:
        if not 0 <= q < self.n:
            raise IndexError(f"state {q} outside [0, {self.n - 1}]")
        if not 1 <= c <= self.sigma:
            raise IndexError(f"letter {c} outside [1, {self.sigma}]")
        return self._delta(q, c)

    def _delta(self, q: int, c: int) -> int:
        if q == 0:
            return 0
        s = self.sigma
        if c < s:
            return self.L._get0((q - 1) * (s - 1) + c - 1)
        return self.W._parent_unchecked(q + 1) - 1

    def accept(self, x: Sequence[int]) -> bool:
        check_word(x, self.sigma)
        q = self.start_label
        step = self._delta
        for c in x:
            q = step(q, c)
        return bool(self.F.bit(q + 1))

    def is_final(self, q: int) -> bool:
        return bool(self.F.bit(q + 1))

    def to_explicit(self) -> ExplicitDfa:
        """Explicit DFA with label ``q`` as state ``q + 1``."""
        delta = [[self._delta(q, c) + 1 for c in range(1, self.sigma + 1)] for q in range(self.n)]
        finals = frozenset(q + 1 for q in range(self.n) if self.is_final(q))
        return ExplicitDfa(self.n, self.sigma, self.start_label + 1, finals, delta, self.letters)

    @property
    def alphabet(self) -> tuple[str, ...]:
        return self.letters or tuple(str(c) for c in range(1, self.sigma + 1))

    def space(self) -> dict[str, int]:
        return {
            "W": self.W.size_in_bits,
            "L": self.L.payload_bits,
            "F": self.F.payload_bits,
            "start": max(1, (self.n - 1).bit_length()),
        }

    def formulas(self) -> dict[str, float]:
        n, s = self.n, self.sigma
        lead = (s - 1) * (n - 1) * math.log2(n) if n > 1 else 0.0
        return {"(sigma-1)(n-1) log n + 3n": lead + 3 * n}

    def __repr__(self) -> str:
        return f"SuccinctAcyclicDfa(n={self.n}, sigma={self.sigma})"


def build_sadfa(d: ExplicitDfa) -> SuccinctAcyclicDfa:
    validate(d)
    dead = classify_acyclic(d)
    if dead is None:
        raise AcyclicityError("automaton is not acyclic: it needs exactly one recurrent, "
                              "all-self-loop state")
    n, sigma = d.n, d.sigma
    children: list[list[int]] = [[] for _ in range(n + 1)]
    for q in range(1, n + 1):
        if q != dead:
            children[d.delta[q - 1][sigma - 1]].append(q)
    W, order = from_children(children, dead)
    if len(order) != n:
        raise AcyclicityError("letter-sigma transitions do not form a tree rooted at the dead state")
    label = [0] * (n + 1)
    for rank, q in enumerate(order):
        label[q] = rank
    table = []
    for q in order[1:]:
        row = d.delta[q - 1]
        table.extend(label[row[c]] for c in range(sigma - 1))
    L = PackedVector(table, n)
    fin = [False] * n
    for q in d.finals:
        fin[label[q]] = True
    return SuccinctAcyclicDfa(n, sigma, label[d.initial], W, L, Bitvector(fin), d.letters)
