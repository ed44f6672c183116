"""Independent reference implementations used by the tests.

Nothing here imports the structures under test; each oracle works from
plain Python lists so a bug in the package cannot hide in its own check.
"""

from __future__ import annotations

import random
from functools import lru_cache
from itertools import product as cartesian

from succinct_automata.automaton import random_connected_dfa


# -- bit sequences ----------------------------------------------------------------


def rank(bits, a, i):
    return sum(1 for b in bits[:i] if b == a)


def select(bits, a, k):
    seen = 0
    for p, b in enumerate(bits, 1):
        if b == a:
            seen += 1
            if seen == k:
                return p
    raise IndexError(k)


def prefix_ranks(bits):
    """``out[i]`` = number of ones among the first ``i`` bits."""
    out = [0]
    for b in bits:
        out.append(out[-1] + b)
    return out


def positions(bits, a):
    return [p for p, b in enumerate(bits, 1) if b == a]


# -- pointer trees ----------------------------------------------------------------


class PointerTree:
    """Explicit tree decoded from a parenthesis sequence; nodes in preorder."""

    def __init__(self, parens):
        self.parent = [None, None]
        self.kids = [None, []]
        self.size = [0, 0]
        stack = []
        label = 0
        for b in parens:
            if b:
                label += 1
                if label > 1:
                    self.parent.append(stack[-1])
                    self.kids.append([])
                    self.size.append(0)
                    self.kids[stack[-1]].append(label)
                stack.append(label)
            else:
                v = stack.pop()
                self.size[v] = label - v + 1
        self.n = label


def random_tree_parens(n, rng):
    """Parentheses of a random ordinal tree with ``n`` nodes."""
    parents = [None] + [rng.randint(1, v - 1) for v in range(2, n + 1)]
    kids = [[] for _ in range(n + 1)]
    for v in range(2, n + 1):
        kids[parents[v - 1]].append(v)
    out = []
    stack = [(1, 0)]
    out.append(True)
    while stack:
        v, i = stack[-1]
        if i < len(kids[v]):
            stack[-1] = (v, i + 1)
            out.append(True)
            stack.append((kids[v][i], 0))
        else:
            stack.pop()
            out.append(False)
    return out


# -- automata ---------------------------------------------------------------------


def subset_construction(nf):
    """Deterministic table over reachable subsets; subsets are frozensets."""
    start = frozenset({nf.initial})
    table = {}
    todo = [start]
    while todo:
        s = todo.pop()
        if s in table:
            continue
        row = []
        for c in range(nf.sigma):
            nxt = set()
            for q in s:
                nxt |= nf.delta[q - 1][c]
            row.append(frozenset(nxt))
        table[s] = row
        todo.extend(t for t in row if t not in table)
    return table, start


def subset_accept(table, start, finals, word):
    s = start
    for c in word:
        s = table[s][c - 1]
    return not s.isdisjoint(finals)


def run_dfa(d, word):
    q = d.initial
    for c in word:
        q = d.delta[q - 1][c - 1]
    return q in d.finals


def has_cycle_outside(d, dead):
    """DFS cycle search over transitions not touching ``dead``."""
    color = [0] * (d.n + 1)
    for root in range(1, d.n + 1):
        if root == dead or color[root]:
            continue
        stack = [(root, iter(d.delta[root - 1]))]
        color[root] = 1
        while stack:
            v, it = stack[-1]
            for t in it:
                if t == dead:
                    continue
                if color[t] == 1:
                    return True
                if color[t] == 0:
                    color[t] = 1
                    stack.append((t, iter(d.delta[t - 1])))
                    break
            else:
                color[v] = 2
                stack.pop()
    return False


def isomorphic_by(a, b, mapping):
    """``mapping[q]`` sends state ``q`` of ``a`` to a state of ``b``."""
    if a.n != b.n or a.sigma != b.sigma or mapping[a.initial] != b.initial:
        return False
    if {mapping[q] for q in a.finals} != set(b.finals):
        return False
    return all(
        mapping[a.delta[q - 1][c]] == b.delta[mapping[q] - 1][c]
        for q in range(1, a.n + 1)
        for c in range(a.sigma)
    )


def all_words(sigma, max_len):
    for length in range(max_len + 1):
        for w in cartesian(range(1, sigma + 1), repeat=length):
            yield list(w)


def random_words(sigma, count, max_len, rng):
    return [[rng.randint(1, sigma) for _ in range(rng.randint(0, max_len))] for _ in range(count)]


SIGMAS = (1, 2, 4, 16)


@lru_cache(maxsize=None)
def dfa_corpus(count=1000, max_n=200):
    """Deterministic corpus: ``(seed, dfa)`` pairs, sigma cycling over SIGMAS."""
    out = []
    for k in range(count):
        rng = random.Random(10_000 + k)
        n = rng.randint(1, max_n)
        sigma = SIGMAS[k % len(SIGMAS)]
        out.append((k, random_connected_dfa(n, sigma, rng.uniform(0.1, 0.9), 10_000 + k)))
    return tuple(out)


def with_failure_state(d, frac, rng):
    """Redirect a fraction of the transitions of ``d`` to a new sink, keeping
    the part still reachable; returns ``(dfa, sink)`` or ``None`` if the sink
    became unreachable."""
    from succinct_automata.automaton import ExplicitDfa

    sink = d.n + 1
    delta = [row[:] for row in d.delta] + [[sink] * d.sigma]
    for q in range(d.n):
        for c in range(d.sigma):
            if rng.random() < frac:
                delta[q][c] = sink
    seen = {d.initial}
    todo = [d.initial]
    while todo:
        q = todo.pop()
        for t in delta[q - 1]:
            if t not in seen:
                seen.add(t)
                todo.append(t)
    if sink not in seen:
        return None
    keep = sorted(seen)
    new = {q: i for i, q in enumerate(keep, 1)}
    out = ExplicitDfa(
        len(keep), d.sigma, new[d.initial],
        frozenset(new[q] for q in d.finals if q in new),
        [[new[t] for t in delta[q - 1]] for q in keep],
    )
    return out, new[sink]
