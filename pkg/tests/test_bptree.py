import random

import pytest
from hypothesis import given, settings, strategies as st

from oracles import PointerTree, random_tree_parens
from succinct_automata.bits import Bitvector
from succinct_automata.bptree import BpTree, from_children
from succinct_automata.errors import IntegrityError, ValidationError


def check_against_pointer_tree(parens):
    t = BpTree(parens)
    ref = PointerTree(parens)
    assert len(t) == ref.n
    for v in range(1, ref.n + 1):
        assert t.parent(v) == ref.parent[v]
        assert t.subtree_size(v) == ref.size[v]
        assert t.degree(v) == len(ref.kids[v])
        assert t.children(v) == ref.kids[v]
        for i, c in enumerate(ref.kids[v], 1):
            assert t.child(v, i) == c
        with pytest.raises(IndexError):
            t.child(v, len(ref.kids[v]) + 1)


def test_tiny_trees():
    t = BpTree("()")
    assert len(t) == 1 and t.parent(1) is None and t.degree(1) == 0
    t = BpTree("(())")
    assert t.parent(2) == 1 and t.subtree_size(1) == 2
    t = BpTree("(()())")
    assert t.child(1, 1) == 2 and t.child(1, 2) == 3 and t.degree(1) == 2


@pytest.mark.parametrize("bad", ["", "(()", "())(", "()()", ")(", "(()))("])
def test_rejects_non_trees(bad):
    with pytest.raises(ValidationError):
        BpTree(bad)


def _shaped(n, shape, rng):
    kids = [[] for _ in range(n + 1)]
    for v in range(2, n + 1):
        if shape == "path":
            p = v - 1
        elif shape == "star":
            p = 1
        else:
            p = rng.randint(max(1, v - rng.choice([1, 3, 50, n])), v - 1)
        kids[p].append(v)
    return kids


@pytest.mark.parametrize("shape", ["path", "star", "random"])
@pytest.mark.parametrize("n", [1, 2, 3, 127, 128, 129, 1000, 5000])
def test_navigation_matches_pointer_tree(shape, n):
    rng = random.Random(n)
    t, order = from_children(_shaped(n, shape, rng), 1)
    check_against_pointer_tree([b == "(" for b in t.to_string()])


@settings(max_examples=80, deadline=None)
@given(st.integers(1, 600), st.integers(0, 10**6))
def test_random_trees_property(n, seed):
    check_against_pointer_tree(random_tree_parens(n, random.Random(seed)))


def test_from_children_preorder():
    kids = [[], [3, 2], [], [4], []]
    t, order = from_children(kids, 1)
    assert order == [1, 3, 4, 2]
    assert t.to_string() == "((())())"


def test_directory_round_trip_and_tamper():
    parens = random_tree_parens(2000, random.Random(3))
    t = BpTree(parens)
    again = BpTree.from_sections(t.parens, t.directory_bytes())
    assert again.to_string() == t.to_string()
    assert [again.parent(v) for v in range(2, 2001)] == [t.parent(v) for v in range(2, 2001)]
    with pytest.raises(IntegrityError):
        BpTree.from_sections(t.parens, t.directory_bytes()[:-2])
    with pytest.raises(IntegrityError):
        BpTree.from_sections(Bitvector("1100"), t.directory_bytes())


def test_space_is_about_two_bits_per_node():
    t = BpTree(random_tree_parens(50_000, random.Random(9)))
    assert t.payload_bits == 100_000
    assert t.directory_bits < 0.5 * t.payload_bits
