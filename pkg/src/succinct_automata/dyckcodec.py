"""Translation between initially connected DFAs and sigma-Dyck boxed diagrams.

A DFA with ``n`` states over ``sigma >= 2`` letters has ``m = (sigma-1)n + 1``
non-tree edges under the lexicographic DFS.  Walking them in traversal order,
``Max[j]`` records how many states had been discovered when edge ``j`` was
explored and ``Boxed[j]`` the preorder label of its target.  The two arrays
determine the transition structure completely.

In the failure variant, targets equal to an implicit absorbing sink carry
the value 0 and ``n`` excludes that sink.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .automaton import ExplicitDfa, lex_dfs, validate
from .bits import Bitvector, MonotoneSequence, SparseBitvector
from .errors import AlphabetError, DecodeError, ValidationError
from .packedvec import PackedVector


@dataclass(eq=False)
class DyckBoxedDiagram:
    n: int
    sigma: int
    max: MonotoneSequence
    boxed: PackedVector
    finals: Bitvector
    failure: bool = False
    letters: tuple[str, ...] | None = None

    @property
    def width(self) -> int:
        return len(self.boxed)

    @classmethod
    def from_arrays(cls, max_values: Sequence[int], boxed_values: Sequence[int], n: int, sigma: int,
                    finals: Sequence[int] = (), failure: bool = False,
                    letters: tuple[str, ...] | None = None) -> "DyckBoxedDiagram":
        """Build from plain lists; ``finals`` holds preorder labels."""
        if n < 1:
            raise DecodeError("a diagram needs n >= 1")
        if len(max_values) != len(boxed_values):
            raise DecodeError("Max and Boxed must have the same length")
        try:
            mx = MonotoneSequence(max_values, n + 1)
            bx = PackedVector(boxed_values, n + 1)
        except ValidationError as exc:
            raise DecodeError(str(exc)) from None
        fin = [False] * n
        for q in finals:
            if not 1 <= q <= n:
                raise DecodeError(f"final label {q} outside [1, {n}]")
            fin[q - 1] = True
        diag = cls(n, sigma, mx, bx, Bitvector(fin), failure, letters)
        check_diagram(diag)
        return diag

    def max_list(self) -> list[int]:
        return self.max.to_list()

    def boxed_list(self) -> list[int]:
        return self.boxed.to_list()

    def final_labels(self) -> list[int]:
        return [q for q in range(1, self.n + 1) if self.finals.bit(q)]

    def __eq__(self, other) -> bool:
        if not isinstance(other, DyckBoxedDiagram):
            return NotImplemented
        return (
            (self.n, self.sigma, self.failure) == (other.n, other.sigma, other.failure)
            and self.max.to_bytes() == other.max.to_bytes()
            and self.boxed.to_bytes() == other.boxed.to_bytes()
            and self.finals.to_bytes() == other.finals.to_bytes()
        )

    def __repr__(self) -> str:
        return f"DyckBoxedDiagram(n={self.n}, sigma={self.sigma}, m={self.width})"


def check_diagram(diag: DyckBoxedDiagram) -> None:
    """Raise ``DecodeError`` unless the staircase and box invariants hold."""
    n, sigma = diag.n, diag.sigma
    if sigma < 2:
        raise AlphabetError("Dyck boxed diagrams need sigma >= 2")
    m = (sigma - 1) * n + 1
    if diag.width != m or len(diag.max) != m:
        raise DecodeError(f"diagram width must be (sigma-1)n+1 = {m}")
    if len(diag.finals) != n:
        raise DecodeError("finals vector must have n bits")
    mx = diag.max_list()
    bx = diag.boxed_list()
    if mx[0] < 1 or mx[-1] != n:
        raise DecodeError("Max must start at >= 1 and end at n")
    lo = 0 if diag.failure else 1
    for i, (x, y) in enumerate(zip(mx, bx), 1):
        if not lo <= y <= x:
            raise DecodeError(f"Boxed[{i}] = {y} outside [{lo}, Max[{i}] = {x}]")
        if i < m and x * (sigma - 1) < i:
            raise DecodeError(f"Max[{i}] = {x} breaks the Dyck condition")


def encode_dyck(d: ExplicitDfa, failure: int | None = None) -> DyckBoxedDiagram:
    """Encode ``d``; with ``failure`` set, edges into that sink become 0 boxes."""
    if d.sigma < 2:
        raise AlphabetError("Dyck encoding needs sigma >= 2; use the succinct DFA for sigma = 1")
    validate(d)
    dfs = lex_dfs(d, failure)
    mx = [cnt for _, _, _, cnt in dfs.dfs_order_nontree]
    bx = [t for _, _, t, _ in dfs.dfs_order_nontree]
    fin = [False] * dfs.n
    for q in d.finals:
        if q != failure:
            fin[dfs.relabel[q] - 1] = True
    return DyckBoxedDiagram(
        dfs.n, d.sigma, MonotoneSequence(mx, dfs.n + 1), PackedVector(bx, dfs.n + 1),
        Bitvector(fin), failure is not None, d.letters,
    )


def decode_dyck(diag: DyckBoxedDiagram) -> ExplicitDfa:
    """Rebuild the preorder-labelled DFA whose encoding is ``diag``.

    For a failure diagram the sink becomes an extra non-final state ``n + 1``.
    """
    check_diagram(diag)
    n, sigma, m = diag.n, diag.sigma, diag.width
    mx = diag.max_list()
    bx = diag.boxed_list()
    sink = n + 1 if diag.failure else None
    rows = n + 1 if diag.failure else n
    delta = [[0] * sigma for _ in range(rows)]
    c = 1
    j = 0
    stack = [[1, 0]]
    while stack:
        top = stack[-1]
        q, a = top
        if a == sigma:
            stack.pop()
            continue
        top[1] = a + 1
        if j < m and mx[j] == c:
            delta[q - 1][a] = bx[j] if bx[j] else sink
            j += 1
        else:
            if c == n:
                raise DecodeError("diagram asks for more than n states")
            c += 1
            delta[q - 1][a] = c
            stack.append([c, 0])
    if c != n or j != m:
        raise DecodeError(f"simulation ended with {c} states and {j} of {m} columns used")
    if sink is not None:
        delta[sink - 1] = [sink] * sigma
    d = ExplicitDfa(rows, sigma, 1, frozenset(diag.final_labels()), delta, diag.letters)
    validate(d)
    return d


@dataclass
class FailureCompressedBoxed:
    z: SparseBitvector
    boxed_prime: PackedVector

    def boxed(self, i: int) -> int:
        """Entry ``i`` (1-based) of the uncompressed Boxed array."""
        r, present = self.z.rank_and_bit(i)
        return self.boxed_prime._get0(r) if present else 0

    def to_list(self) -> list[int]:
        return [self.boxed(i) for i in range(1, len(self.z) + 1)]

    @property
    def size_in_bits(self) -> int:
        return self.z.size_in_bits + self.boxed_prime.payload_bits


def compress_failure(diag: DyckBoxedDiagram) -> FailureCompressedBoxed:
    """Drop the 0 boxes of ``diag`` into a sparse indicator ``Z``."""
    bx = diag.boxed_list()
    kept = [v for v in bx if v]
    z = SparseBitvector([v != 0 for v in bx])
    return FailureCompressedBoxed(z, PackedVector(kept, diag.n + 1))


# A 7-state, 3-letter example diagram used throughout the tests.
EXAMPLE_MAX = (3, 4, 4, 4, 4, 5, 6, 6, 6, 6, 6, 7, 7, 7, 7)
EXAMPLE_BOXED = (1, 2, 3, 1, 4, 3, 4, 2, 3, 1, 4, 4, 5, 3, 6)


def example_diagram() -> DyckBoxedDiagram:
    return DyckBoxedDiagram.from_arrays(EXAMPLE_MAX, EXAMPLE_BOXED, 7, 3, letters=("a", "b", "c"))
