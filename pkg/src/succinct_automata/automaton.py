"""Explicit transition-table automata: the ground truth for every other module.

States are numbered ``1..n`` and letters ``1..sigma``.  ``delta[q - 1][c - 1]``
is the successor (DFA) or successor set (NFA) of state ``q`` on letter ``c``.
"""

from __future__ import annotations

import random
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .errors import (
    AlphabetError,
    CompletenessError,
    ConnectivityError,
    ParseError,
    ValidationError,
)


def default_letters(sigma: int) -> tuple[str, ...]:
    return tuple(str(c) for c in range(1, sigma + 1))


@dataclass
class ExplicitDfa:
    n: int
    sigma: int
    initial: int
    finals: frozenset[int]
    delta: list[list[int]]
    letters: tuple[str, ...] | None = None

    def __post_init__(self):
        self.finals = frozenset(self.finals)

    def step(self, q: int, c: int) -> int:
        return self.delta[q - 1][c - 1]

    @property
    def alphabet(self) -> tuple[str, ...]:
        return self.letters or default_letters(self.sigma)


@dataclass
class ExplicitNfa:
    n: int
    sigma: int
    initial: int
    finals: frozenset[int]
    delta: list[list[frozenset[int]]]
    letters: tuple[str, ...] | None = None

    def __post_init__(self):
        self.finals = frozenset(self.finals)
        self.delta = [[frozenset(t) for t in row] for row in self.delta]

    def step(self, q: int, c: int) -> frozenset[int]:
        return self.delta[q - 1][c - 1]

    @property
    def alphabet(self) -> tuple[str, ...]:
        return self.letters or default_letters(self.sigma)


# -- validation -----------------------------------------------------------


def _check_header(n, sigma, initial, finals):
    if n < 1:
        raise ValidationError("an automaton needs at least one state")
    if sigma < 1:
        raise AlphabetError("the alphabet needs at least one letter")
    if not 1 <= initial <= n:
        raise ValidationError(f"initial state {initial} outside [1, {n}]")
    bad = [q for q in finals if not 1 <= q <= n]
    if bad:
        raise ValidationError(f"final state {bad[0]} outside [1, {n}]")


def _reachable(n, initial, successors) -> list[bool]:
    seen = [False] * (n + 1)
    seen[initial] = True
    queue = deque([initial])
    while queue:
        q = queue.popleft()
        for t in successors(q):
            if not seen[t]:
                seen[t] = True
                queue.append(t)
    return seen


def validate(d: ExplicitDfa) -> None:
    """Raise unless ``d`` is complete and initially connected."""
    _check_header(d.n, d.sigma, d.initial, d.finals)
    if len(d.delta) != d.n:
        raise CompletenessError(f"transition table has {len(d.delta)} rows, expected {d.n}")
    for q, row in enumerate(d.delta, 1):
        if len(row) != d.sigma:
            raise CompletenessError(f"state {q} has {len(row)} transitions, expected {d.sigma}")
        for c, t in enumerate(row, 1):
            if t is None:
                raise CompletenessError(f"missing transition ({q}, {c})")
            if not 1 <= t <= d.n:
                raise ValidationError(f"transition ({q}, {c}) targets {t}, outside [1, {d.n}]")
    seen = _reachable(d.n, d.initial, lambda q: d.delta[q - 1])
    missing = [q for q in range(1, d.n + 1) if not seen[q]]
    if missing:
        raise ConnectivityError(f"state {missing[0]} is unreachable from the initial state")


def validate_nfa(nf: ExplicitNfa) -> None:
    _check_header(nf.n, nf.sigma, nf.initial, nf.finals)
    if len(nf.delta) != nf.n or any(len(row) != nf.sigma for row in nf.delta):
        raise CompletenessError("NFA transition table must have n rows of sigma sets")
    for q, row in enumerate(nf.delta, 1):
        for c, targets in enumerate(row, 1):
            bad = [t for t in targets if not 1 <= t <= nf.n]
            if bad:
                raise ValidationError(f"transition ({q}, {c}) targets {bad[0]}, outside [1, {nf.n}]")
    seen = _reachable(nf.n, nf.initial, lambda q: set().union(*nf.delta[q - 1]))
    missing = [q for q in range(1, nf.n + 1) if not seen[q]]
    if missing:
        raise ConnectivityError(f"state {missing[0]} is unreachable from the initial state")


def check_word(x: Sequence[int], sigma: int) -> None:
    for c in x:
        if not 1 <= c <= sigma:
            raise AlphabetError(f"letter {c} outside [1, {sigma}]")


# -- oracles --------------------------------------------------------------


def oracle_run(d: ExplicitDfa, x: Sequence[int], start: int | None = None) -> int:
    check_word(x, d.sigma)
    q = d.initial if start is None else start
    delta = d.delta
    for c in x:
        q = delta[q - 1][c - 1]
    return q


def oracle_accept(d: ExplicitDfa, x: Sequence[int]) -> bool:
    return oracle_run(d, x) in d.finals


def oracle_accept_nfa(nf: ExplicitNfa, x: Sequence[int]) -> bool:
    check_word(x, nf.sigma)
    current = {nf.initial}
    for c in x:
        current = set().union(*(nf.delta[q - 1][c - 1] for q in current))
        if not current:
            return False
    return not current.isdisjoint(nf.finals)


# -- lexicographic DFS ----------------------------------------------------


@dataclass
class LexDfsResult:
    """Outcome of a letter-ordered DFS from the initial state.

    Labels are preorder ranks.  ``order[i - 1]`` is the original state with
    label ``i``; ``relabel[q]`` maps original ``q`` to its label (index 0 is
    unused, and the failure state, if any, maps to 0).
    """

    n: int
    sigma: int
    relabel: list[int]
    order: list[int]
    tree_edges: frozenset[tuple[int, int]]
    tree_flags: list[bool]
    nontree_targets: list[int]
    dfs_order_nontree: list[tuple[int, int, int, int]]
    parens: list[bool]
    children: list[list[int]] = field(repr=False)


def lex_dfs(d: ExplicitDfa, failure: int | None = None) -> LexDfsResult:
    """Letter-ordered DFS; ``failure`` names an implicit sink to leave out.

    ``dfs_order_nontree`` holds ``(state, letter, target, discovered)``
    tuples in traversal order, where ``discovered`` counts the states seen
    when the edge was explored.  Edges into ``failure`` are non-tree edges
    with target 0.
    """
    n, sigma, delta = d.n, d.sigma, d.delta
    label = [0] * (n + 1)
    label[d.initial] = 1
    order = [d.initial]
    count = 1
    parens = [True]
    tree_edges = set()
    dfs_nontree = []
    children: list[list[int]] = [[], []]
    stack = [[d.initial, 1]]
    while stack:
        top = stack[-1]
        q, c = top
        if c > sigma:
            stack.pop()
            parens.append(False)
            continue
        top[1] = c + 1
        t = delta[q - 1][c - 1]
        if t == failure:
            dfs_nontree.append((label[q], c, 0, count))
        elif label[t] == 0:
            count += 1
            label[t] = count
            order.append(t)
            children.append([])
            children[label[q]].append(count)
            tree_edges.add((label[q], c))
            parens.append(True)
            stack.append([t, 1])
        else:
            dfs_nontree.append((label[q], c, label[t], count))
    n_eff = count
    flags = [False] * (sigma * n_eff)
    for q, c in tree_edges:
        flags[sigma * (q - 1) + c - 1] = True
    by_pos = {sigma * (q - 1) + c - 1: t for q, c, t, _ in dfs_nontree}
    nontree_targets = [by_pos[p] for p in sorted(by_pos)]
    return LexDfsResult(
        n=n_eff,
        sigma=sigma,
        relabel=label,
        order=order,
        tree_edges=frozenset(tree_edges),
        tree_flags=flags,
        nontree_targets=nontree_targets,
        dfs_order_nontree=dfs_nontree,
        parens=parens,
        children=children,
    )


def relabel(d: ExplicitDfa, dfs: LexDfsResult | None = None) -> ExplicitDfa:
    """The same DFA with states renamed to lex-DFS preorder ranks."""
    dfs = dfs or lex_dfs(d)
    lab = dfs.relabel
    delta = [[lab[t] for t in d.delta[q - 1]] for q in dfs.order]
    return ExplicitDfa(
        n=d.n,
        sigma=d.sigma,
        initial=1,
        finals=frozenset(lab[q] for q in d.finals),
        delta=delta,
        letters=d.letters,
    )


# -- acyclicity -----------------------------------------------------------


def classify_acyclic(d: ExplicitDfa) -> int | None:
    """The dead state if ``d`` is acyclic, else ``None``.

    Acyclic means exactly one recurrent state, which then must loop to
    itself on every letter.
    """
    sinks = [q for q in range(1, d.n + 1) if all(t == q for t in d.delta[q - 1])]
    if len(sinks) != 1:
        return None
    dead = sinks[0]
    indeg = [0] * (d.n + 1)
    for q in range(1, d.n + 1):
        if q != dead:
            for t in d.delta[q - 1]:
                if t != dead:
                    indeg[t] += 1
    queue = deque(q for q in range(1, d.n + 1) if q != dead and indeg[q] == 0)
    removed = 0
    while queue:
        q = queue.popleft()
        removed += 1
        for t in d.delta[q - 1]:
            if t != dead:
                indeg[t] -= 1
                if indeg[t] == 0:
                    queue.append(t)
    return dead if removed == d.n - 1 else None


# -- random instances -----------------------------------------------------


def _finals(rng, candidates, density):
    finals = {q for q in candidates if rng.random() < density}
    if not finals:
        finals = {rng.choice(list(candidates))}
    return frozenset(finals)


def random_connected_dfa(n: int, sigma: int, final_density: float = 0.5, seed=None) -> ExplicitDfa:
    """Complete, initially connected DFA with exactly ``n`` states."""
    if n < 1 or sigma < 1 or not 0.0 <= final_density <= 1.0:
        raise ValidationError("need n >= 1, sigma >= 1 and a density in [0, 1]")
    rng = random.Random(seed)
    delta: list[list[int | None]] = [[None] * sigma for _ in range(n)]
    # a random spanning arborescence rooted at state 1 makes every state reachable
    free = [(1, c) for c in range(1, sigma + 1)]
    for v in range(2, n + 1):
        slot = rng.randrange(len(free))
        free[slot], free[-1] = free[-1], free[slot]
        q, c = free.pop()
        delta[q - 1][c - 1] = v
        free.extend((v, c) for c in range(1, sigma + 1))
    for q, c in free:
        delta[q - 1][c - 1] = rng.randint(1, n)
    perm = list(range(1, n + 1))
    rng.shuffle(perm)
    new = [0] + perm
    table = [[0] * sigma for _ in range(n)]
    for q in range(1, n + 1):
        table[new[q] - 1] = [new[t] for t in delta[q - 1]]
    d = ExplicitDfa(n, sigma, new[1], _finals(rng, range(1, n + 1), final_density), table)
    validate(d)
    return d


def random_acyclic_dfa(n: int, sigma: int, final_density: float = 0.3, seed=None) -> ExplicitDfa:
    """Initially connected acyclic DFA: ``n - 1`` transient states plus a dead state."""
    if n < 1 or sigma < 1:
        raise ValidationError("need n >= 1 and sigma >= 1")
    rng = random.Random(seed)
    dead = n
    if n == 1:
        return ExplicitDfa(1, sigma, 1, frozenset(), [[1] * sigma])
    # transient states in topological order 1..n-1; edges only go forward or to dead
    delta: list[list[int | None]] = [[None] * sigma for _ in range(n)]
    delta[dead - 1] = [dead] * sigma
    free = [(1, c) for c in range(1, sigma + 1)]
    for v in range(2, n):
        slot = rng.randrange(len(free))
        free[slot], free[-1] = free[-1], free[slot]
        q, c = free.pop()
        delta[q - 1][c - 1] = v
        free.extend((v, c) for c in range(1, sigma + 1))
    for q, c in free:
        delta[q - 1][c - 1] = rng.choice(range(q + 1, n + 1))
    perm = list(range(1, n + 1))
    rng.shuffle(perm)
    new = [0] + perm
    table = [[0] * sigma for _ in range(n)]
    for q in range(1, n + 1):
        table[new[q] - 1] = [new[t] for t in delta[q - 1]]
    finals = _finals(rng, [new[q] for q in range(1, n)], final_density)
    d = ExplicitDfa(n, sigma, new[1], finals, table)
    validate(d)
    return d


def random_connected_nfa(n: int, sigma: int, density: float = 0.2, final_density: float = 0.3,
                         seed=None) -> ExplicitNfa:
    """Initially connected NFA; each (q, c, q') edge present with ``density``."""
    rng = random.Random(seed)
    delta = [[set() for _ in range(sigma)] for _ in range(n)]
    for v in range(2, n + 1):
        delta[rng.randint(1, v - 1) - 1][rng.randrange(sigma)].add(v)
    for q in range(n):
        for c in range(sigma):
            for t in range(1, n + 1):
                if rng.random() < density:
                    delta[q][c].add(t)
    perm = list(range(1, n + 1))
    rng.shuffle(perm)
    new = [0] + perm
    table = [[frozenset()] * sigma for _ in range(n)]
    for q in range(1, n + 1):
        table[new[q] - 1] = [frozenset(new[t] for t in s) for s in delta[q - 1]]
    nf = ExplicitNfa(n, sigma, new[1], _finals(rng, range(1, n + 1), final_density), table)
    validate_nfa(nf)
    return nf


def random_words(sigma: int, count: int, max_len: int, rng: random.Random) -> list[list[int]]:
    return [[rng.randint(1, sigma) for _ in range(rng.randint(0, max_len))] for _ in range(count)]


# -- text format ----------------------------------------------------------


def parse_automaton(text: str) -> ExplicitDfa | ExplicitNfa:
    """Parse the line-oriented ``dfa``/``nfa`` text format."""
    header = None
    letters: list[str] | None = None
    initial = None
    finals: set[int] = set()
    trans: list[tuple[int, int, int, int]] = []
    raw_trans: list[tuple[int, str, str, str]] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        words = line.split()
        key, args = words[0], words[1:]
        if header is None:
            if key not in ("dfa", "nfa") or len(args) != 2:
                raise ParseError("first line must be 'dfa <n> <sigma>' or 'nfa <n> <sigma>'", lineno)
            n, sigma = (_int(a, lineno) for a in args)
            if n < 1 or sigma < 1:
                raise ParseError("n and sigma must be positive", lineno)
            header = (key, n, sigma)
        elif key == "alphabet":
            if letters is not None:
                raise ParseError("duplicate alphabet line", lineno)
            if len(args) != header[2] or len(set(args)) != len(args):
                raise ParseError(f"alphabet must list {header[2]} distinct letters", lineno)
            if raw_trans:
                raise ParseError("alphabet must precede trans lines", lineno)
            letters = args
        elif key == "initial":
            if len(args) != 1 or initial is not None:
                raise ParseError("exactly one 'initial <q>' line is required", lineno)
            initial = _state(args[0], header[1], lineno)
        elif key == "final":
            finals.update(_state(a, header[1], lineno) for a in args)
        elif key == "trans":
            if len(args) != 3:
                raise ParseError("expected 'trans <q> <letter> <q2>'", lineno)
            raw_trans.append((lineno, *args))
        else:
            raise ParseError(f"unknown directive {key!r}", lineno)
    if header is None:
        raise ParseError("empty automaton file")
    kind, n, sigma = header
    if initial is None:
        raise ParseError("missing 'initial' line")
    names = letters or list(default_letters(sigma))
    index = {name: i for i, name in enumerate(names, 1)}
    for lineno, q, a, t in raw_trans:
        if a not in index:
            raise ParseError(f"unknown letter {a!r}", lineno)
        trans.append((lineno, _state(q, n, lineno), index[a], _state(t, n, lineno)))
    lets = tuple(letters) if letters else None
    if kind == "dfa":
        table: list[list[int | None]] = [[None] * sigma for _ in range(n)]
        for lineno, q, c, t in trans:
            if table[q - 1][c - 1] is not None:
                raise ParseError(f"duplicate transition for ({q}, {names[c - 1]})", lineno)
            table[q - 1][c - 1] = t
        for q in range(1, n + 1):
            for c in range(1, sigma + 1):
                if table[q - 1][c - 1] is None:
                    raise CompletenessError(f"missing transition ({q}, {names[c - 1]})")
        d = ExplicitDfa(n, sigma, initial, frozenset(finals), table, lets)
        validate(d)
        return d
    sets = [[set() for _ in range(sigma)] for _ in range(n)]
    for _, q, c, t in trans:
        sets[q - 1][c - 1].add(t)
    nf = ExplicitNfa(n, sigma, initial, frozenset(finals), sets, lets)
    validate_nfa(nf)
    return nf


def _int(text, lineno):
    try:
        return int(text)
    except ValueError:
        raise ParseError(f"expected an integer, got {text!r}", lineno) from None


def _state(text, n, lineno):
    q = _int(text, lineno)
    if not 1 <= q <= n:
        raise ParseError(f"state {q} outside [1, {n}]", lineno)
    return q


def format_automaton(a: ExplicitDfa | ExplicitNfa) -> str:
    kind = "dfa" if isinstance(a, ExplicitDfa) else "nfa"
    names = a.alphabet
    lines = [f"{kind} {a.n} {a.sigma}"]
    if a.letters:
        lines.append("alphabet " + " ".join(a.letters))
    lines.append(f"initial {a.initial}")
    lines.append("final " + " ".join(str(q) for q in sorted(a.finals)) if a.finals else "final")
    for q in range(1, a.n + 1):
        for c in range(1, a.sigma + 1):
            targets = a.delta[q - 1][c - 1]
            for t in ([targets] if kind == "dfa" else sorted(targets)):
                lines.append(f"trans {q} {names[c - 1]} {t}")
    return "\n".join(lines) + "\n"


def parse_word(line: str, letters: Sequence[str]) -> list[int]:
    """Letters of ``line``: whitespace-separated tokens, or characters when
    every letter is one character and the line has no whitespace."""
    index = {name: i for i, name in enumerate(letters, 1)}
    if any(ch.isspace() for ch in line) or any(len(a) != 1 for a in letters):
        tokens = line.split()
    else:
        tokens = list(line)
    try:
        return [index[t] for t in tokens]
    except KeyError as exc:
        raise AlphabetError(f"unknown letter {exc.args[0]!r}") from None


def parity_dfa() -> ExplicitDfa:
    """Two-state parity DFA over {0, 1}: accepts words with an even number of 0s.

    Letter '0' is 1 and '1' is 2; state q0 is 1 and q1 is 2.
    """
    return ExplicitDfa(2, 2, 1, frozenset({1}), [[2, 1], [1, 2]], ("0", "1"))


def words_upto(sigma: int, max_len: int) -> Iterable[list[int]]:
    """All words of length 0..max_len in length-then-lexicographic order."""
    level: list[list[int]] = [[]]
    yield []
    for _ in range(max_len):
        level = [w + [c] for w in level for c in range(1, sigma + 1)]
        yield from level
