import random

import pytest
from hypothesis import given, settings, strategies as st

from oracles import has_cycle_outside, isomorphic_by, random_words, run_dfa, subset_accept, subset_construction
from succinct_automata.automaton import (
    ExplicitDfa,
    ExplicitNfa,
    classify_acyclic,
    format_automaton,
    lex_dfs,
    oracle_accept,
    oracle_accept_nfa,
    parity_dfa,
    parse_automaton,
    parse_word,
    random_acyclic_dfa,
    random_connected_dfa,
    random_connected_nfa,
    relabel,
    validate,
    validate_nfa,
    words_upto,
)
from succinct_automata.errors import (
    AlphabetError,
    CompletenessError,
    ConnectivityError,
    ParseError,
)

LOOP = ExplicitDfa(1, 1, 1, frozenset({1}), [[1]])


def test_validate_examples():
    validate(parity_dfa())
    validate(LOOP)
    with pytest.raises(ConnectivityError):
        validate(ExplicitDfa(2, 1, 1, frozenset(), [[1], [1]]))
    with pytest.raises(CompletenessError):
        validate(ExplicitDfa(2, 2, 1, frozenset(), [[2], [1, 1]]))
    with pytest.raises(CompletenessError):
        validate(ExplicitDfa(1, 2, 1, frozenset(), [[1, None]]))


def test_parity_language():
    d = parity_dfa()
    assert oracle_accept(d, [])
    assert not oracle_accept(d, [1])
    assert oracle_accept(d, [1, 1])
    assert oracle_accept(d, [2, 1, 2, 1])
    with pytest.raises(AlphabetError):
        oracle_accept(d, [3])


def test_nfa_oracle_examples():
    nf = ExplicitNfa(2, 1, 1, frozenset({1}), [[{2}], [set()]])
    assert oracle_accept_nfa(nf, [])
    assert not oracle_accept_nfa(nf, [1, 1])
    with pytest.raises(AlphabetError):
        oracle_accept_nfa(nf, [2])


@pytest.mark.parametrize("seed", range(40))
def test_nfa_oracle_matches_subset_construction(seed):
    rng = random.Random(seed)
    nf = random_connected_nfa(rng.randint(1, 6), 2, 0.25, 0.3, seed)
    table, start = subset_construction(nf)
    for w in words_upto(2, 6):
        assert oracle_accept_nfa(nf, w) == subset_accept(table, start, nf.finals, w)


def test_lex_dfs_examples():
    r = lex_dfs(parity_dfa())
    assert r.tree_edges == {(1, 1)}
    assert r.nontree_targets == [1, 1, 2]
    assert r.parens == [True, True, False, False]
    r = lex_dfs(LOOP)
    assert r.tree_edges == frozenset() and r.nontree_targets == [1]


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 80), st.sampled_from([1, 2, 3, 4, 8]), st.integers(0, 10**6))
def test_edge_count_law_and_relabel(n, sigma, seed):
    d = random_connected_dfa(n, sigma, 0.4, seed)
    r = lex_dfs(d)
    assert len(r.tree_edges) == n - 1
    assert len(r.nontree_targets) == (sigma - 1) * n + 1
    assert r.relabel[d.initial] == 1
    assert sorted(r.relabel[1:]) == list(range(1, n + 1))
    e = relabel(d, r)
    assert isomorphic_by(d, e, r.relabel)
    # preorder: every tree edge goes to the next unused label at its discovery
    for q, c in r.tree_edges:
        assert e.delta[q - 1][c - 1] > q
    rng = random.Random(seed)
    for w in random_words(sigma, 100, 30, rng):
        assert oracle_accept(d, w) == oracle_accept(e, w) == run_dfa(d, w)


def test_classify_examples():
    assert classify_acyclic(LOOP) == 1
    assert classify_acyclic(parity_dfa()) is None
    chain = ExplicitDfa(3, 2, 1, frozenset({2}), [[2, 2], [3, 3], [3, 3]])
    assert classify_acyclic(chain) == 3


@pytest.mark.parametrize("seed", range(60))
def test_classify_agrees_with_cycle_search(seed):
    rng = random.Random(seed)
    n, sigma = rng.randint(1, 25), rng.randint(1, 3)
    if seed % 2:
        d = random_acyclic_dfa(n, sigma, 0.3, seed)
    else:
        d = random_connected_dfa(n, sigma, 0.3, seed)
    dead = classify_acyclic(d)
    sinks = [q for q in range(1, n + 1) if all(t == q for t in d.delta[q - 1])]
    expected = sinks[0] if len(sinks) == 1 and not has_cycle_outside(d, sinks[0]) else None
    assert dead == expected
    if seed % 2:
        assert dead is not None and dead not in d.finals


def test_generators_are_deterministic():
    assert random_connected_dfa(1, 1, 1.0, 4) == LOOP
    a = random_connected_dfa(50, 4, 0.3, 11)
    assert a == random_connected_dfa(50, 4, 0.3, 11)
    assert a.n == 50 and a.finals
    validate(a)
    nf = random_connected_nfa(8, 2, 0.2, 0.3, 5)
    validate_nfa(nf)
    assert nf == random_connected_nfa(8, 2, 0.2, 0.3, 5)


def test_text_round_trip():
    for a in (parity_dfa(), random_connected_dfa(30, 3, 0.4, 1), random_connected_nfa(7, 2, 0.3, 0.3, 2)):
        assert parse_automaton(format_automaton(a)) == a


def test_parse_errors_name_the_line():
    with pytest.raises(ParseError, match="line 1"):
        parse_automaton("dfa x 2\n")
    text = "dfa 1 1\ninitial 1\ntrans 1 1 1\ntrans 1 1 1\n"
    with pytest.raises(ParseError, match="line 4"):
        parse_automaton(text)
    with pytest.raises(CompletenessError):
        parse_automaton("dfa 1 2\ninitial 1\ntrans 1 1 1\n")
    with pytest.raises(ParseError, match="unknown letter"):
        parse_automaton("dfa 1 1\nalphabet a\ninitial 1\ntrans 1 b 1\n")
    with pytest.raises(ParseError, match="outside"):
        parse_automaton("dfa 1 1\ninitial 2\n")


def test_parse_word():
    assert parse_word("0110", ("0", "1")) == [1, 2, 2, 1]
    assert parse_word("", ("0", "1")) == []
    assert parse_word("ab cd", ("ab", "cd")) == [1, 2]
    with pytest.raises(AlphabetError):
        parse_word("012", ("0", "1"))
