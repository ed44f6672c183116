"""Direct construction of the succinct product of two succinct DFAs.

Pass 1 runs a lexicographic DFS over reachable state pairs, writing the
parentheses ``P`` and the tree-edge flags ``T``.  Pass 2 repeats the DFS,
now steering by the finished ``T``, and writes every non-tree target into
``NewBoxed`` at position ``rank_0(T, sigma(k-1) + c)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

from .automaton import ExplicitDfa
from .bits import Bitvector, SparseBitvector
from .bptree import BpTree
from .errors import AlphabetError, ValidationError
from .packedvec import PackedVector
from .sdfa import SuccinctDfa, build_sdfa


class ProductOp(str, Enum):
    UNION = "union"
    INTERSECTION = "intersect"

    def final(self, a: bool, b: bool) -> bool:
        return (a or b) if self is ProductOp.UNION else (a and b)


@dataclass
class ProductBuildState:
    """Working data of the builder; ``pair_map`` maps a packed pair key to
    ``[preorder, parent preorder or 0]``."""

    pair_map: dict[int, list[int]] = field(default_factory=dict)
    p_buf: list[bool] = field(default_factory=list)
    t_ones: list[int] = field(default_factory=list)
    discovered: int = 0
    max_stack: int = 0


def product_delta_lookup(s: SuccinctDfa, i: int, c: int) -> int:
    """``delta(i, c)`` of ``s`` by the two-case rule on ``T``."""
    s._check_state(i, c)
    p = s.sigma * (i - 1) + c
    if s.T.bit(p):
        t = s.T.rank1(p) - s.T.rank1(p - c)
        return s.P.child(i, t)
    return s.new_boxed.get(s.T.rank0(p))


def _check_inputs(s1, s2):
    if s1.sigma != s2.sigma:
        raise AlphabetError(f"alphabet sizes differ: {s1.sigma} and {s2.sigma}")
    if s1.failure or s2.failure:
        raise ValidationError("product needs plain succinct DFAs, not failure-compressed ones")
    if s1.letters and s2.letters and s1.letters != s2.letters:
        raise AlphabetError("letter names of the two automata differ")


def build_product_with_state(s1: SuccinctDfa, s2: SuccinctDfa,
                             op: ProductOp | str) -> tuple[SuccinctDfa, ProductBuildState]:
    op = ProductOp(op)
    _check_inputs(s1, s2)
    sigma = s1.sigma
    n2 = s2.n
    st = ProductBuildState()
    pmap = st.pair_map
    # component successor rows are read once per product state
    rows1: dict[int, list[int]] = {}
    rows2: dict[int, list[int]] = {}

    def succ(q1, q2):
        r1 = rows1.get(q1)
        if r1 is None:
            r1 = rows1[q1] = s1.transitions(q1)
        r2 = rows2.get(q2)
        if r2 is None:
            r2 = rows2[q2] = s2.transitions(q2)
        return r1, r2

    def key(q1, q2):
        return (q1 - 1) * n2 + (q2 - 1)

    # pass 1: P and T
    q1, q2 = s1.initial_label, s2.initial_label
    pmap[key(q1, q2)] = [1, 0]
    st.discovered = 1
    st.p_buf.append(True)
    stack = [[q1, q2, 1, 0]]
    while stack:
        top = stack[-1]
        a, b, k, c = top
        if c == sigma:
            stack.pop()
            st.p_buf.append(False)
            continue
        top[3] = c + 1
        r1, r2 = succ(a, b)
        t1, t2 = r1[c], r2[c]
        kk = key(t1, t2)
        if kk not in pmap:
            st.discovered += 1
            pmap[kk] = [st.discovered, k]
            st.p_buf.append(True)
            st.t_ones.append(sigma * (k - 1) + c + 1)
            stack.append([t1, t2, st.discovered, 0])
            st.max_stack = max(st.max_stack, len(stack))
    n = st.discovered
    P = BpTree(st.p_buf)
    T = SparseBitvector.from_positions(sorted(st.t_ones), sigma * n)

    # pass 2: NewBoxed, steered by the finished T
    m = (sigma - 1) * n + 1
    boxed = [1] * m
    written = bytearray(m)
    stack = [[q1, q2, 1, 0]]
    while stack:
        top = stack[-1]
        a, b, k, c = top
        if c == sigma:
            stack.pop()
            continue
        top[3] = c + 1
        r1, r2 = succ(a, b)
        t1, t2 = r1[c], r2[c]
        pos = sigma * (k - 1) + c + 1
        r, tree = T.rank_and_bit(pos)
        d = pmap[key(t1, t2)][0]
        if tree:
            stack.append([t1, t2, d, 0])
        else:
            # rank_0(T, pos) with bit pos clear
            ell = pos - r
            boxed[ell - 1] = d
            written[ell - 1] = 1
    if not all(written):
        raise AssertionError("product construction left a NewBoxed slot unwritten")

    fin = [False] * n
    for kk, (pre, _) in pmap.items():
        a, b = divmod(kk, n2)
        fin[pre - 1] = op.final(bool(s1.F.bit(a + 1)), bool(s2.F.bit(b + 1)))
    out = SuccinctDfa(n, sigma, 1, Bitvector(fin), P, T, PackedVector(boxed, n + 1),
                      s1.letters or s2.letters)
    return out, st


def build_product(s1: SuccinctDfa, s2: SuccinctDfa, op: ProductOp | str) -> SuccinctDfa:
    return build_product_with_state(s1, s2, op)[0]


def explicit_product(d1: ExplicitDfa, d2: ExplicitDfa, op: ProductOp | str) -> ExplicitDfa:
    """Reachable product over explicit tables, states numbered in BFS order."""
    op = ProductOp(op)
    if d1.sigma != d2.sigma:
        raise AlphabetError(f"alphabet sizes differ: {d1.sigma} and {d2.sigma}")
    start = (d1.initial, d2.initial)
    index = {start: 1}
    order = [start]
    i = 0
    while i < len(order):
        a, b = order[i]
        i += 1
        for c in range(d1.sigma):
            t = (d1.delta[a - 1][c], d2.delta[b - 1][c])
            if t not in index:
                index[t] = len(order) + 1
                order.append(t)
    delta = [[index[(d1.delta[a - 1][c], d2.delta[b - 1][c])] for c in range(d1.sigma)]
             for a, b in order]
    finals = frozenset(index[p] for p in order if op.final(p[0] in d1.finals, p[1] in d2.finals))
    return ExplicitDfa(len(order), d1.sigma, 1, finals, delta, d1.letters or d2.letters)


def reencode_product(s1: SuccinctDfa, s2: SuccinctDfa, op: ProductOp | str) -> SuccinctDfa:
    """Product through explicit tables and a fresh build, for cross-checking."""
    return build_sdfa(explicit_product(s1.to_explicit(), s2.to_explicit(), op))


def ends_with_dfas() -> tuple[ExplicitDfa, ExplicitDfa]:
    """Two 2-state DFAs over {a, b, c}: words ending in 'a', words ending in 'b'."""
    letters = ("a", "b", "c")
    d1 = ExplicitDfa(2, 3, 1, frozenset({2}), [[2, 1, 1], [2, 1, 1]], letters)
    d2 = ExplicitDfa(2, 3, 1, frozenset({2}), [[1, 2, 1], [1, 2, 1]], letters)
    return d1, d2
