import random

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from oracles import positions, prefix_ranks, rank, select
from succinct_automata.bits import Bitvector, MonotoneSequence, SparseBitvector
from succinct_automata.errors import IntegrityError, ValidationError


def as_bits(s):
    return [int(ch) for ch in s]


# -- documented examples ------------------------------------------------------------


def test_empty_vector():
    bv = Bitvector([])
    assert len(bv) == 0 and bv.rank1(0) == 0


def test_saturated_word():
    bv = Bitvector([1] * 64)
    assert bv.rank1(64) == 64 and bv.select1(64) == 64


def test_small_examples():
    bv = Bitvector("10110")
    assert bv.rank1(3) == 2
    assert bv.rank1(0) == 0
    assert bv.rank0(5) == 2
    assert bv.rank1(5) == 3
    assert bv.select1(1) == 1
    assert bv.select1(3) == 4
    # positions of zeros are 2 and 5
    assert bv.select0(1) == 2
    assert bv.select0(2) == 5


def test_out_of_range():
    bv = Bitvector("10110")
    with pytest.raises(IndexError):
        bv.rank1(6)
    with pytest.raises(IndexError):
        bv.select1(4)
    with pytest.raises(IndexError):
        bv.select0(0)


def test_sparse_examples():
    z = SparseBitvector("000000")
    assert z.ones == 0
    assert all(z.partial_rank1(i) is None for i in range(1, 7))
    z = SparseBitvector("010010")
    assert z.partial_rank1(5) == 2
    assert z.partial_rank1(3) is None


def test_mono_examples():
    s = MonotoneSequence([0, 0, 0], 8)
    assert s.access(2) == 0 and s.rank(1) == 3
    assert MonotoneSequence([2, 2, 2], 3).rank(3) == 3
    s = MonotoneSequence([1, 4, 9], 16)
    assert s.access(1) == 4 and s.rank(5) == 2
    assert s.access(2) == 9 and s.rank(0) == 0 and s.rank(10) == 3


def test_mono_rejects_bad_input():
    with pytest.raises(ValidationError):
        MonotoneSequence([3, 1], 8)
    with pytest.raises(ValidationError):
        MonotoneSequence([1, 8], 8)
    with pytest.raises(IndexError):
        MonotoneSequence([1, 2], 8).access(2)


# -- exhaustive against a linear scan ----------------------------------------------


@pytest.mark.parametrize("n", [1, 63, 64, 65, 255, 256, 257, 2047, 2048, 2049, 5000])
@pytest.mark.parametrize("density", [0.01, 0.5, 0.99])
def test_bitvector_exhaustive(n, density):
    rng = random.Random(n * 7 + int(density * 100))
    bits = [int(rng.random() < density) for _ in range(n)]
    bv = Bitvector(bits)
    pr = prefix_ranks(bits)
    assert [bv.rank1(i) for i in range(n + 1)] == pr
    assert [bv.rank0(i) for i in range(n + 1)] == [i - r for i, r in enumerate(pr)]
    assert [bv.select1(k) for k in range(1, bv.ones + 1)] == positions(bits, 1)
    assert [bv.select0(k) for k in range(1, bv.zeros + 1)] == positions(bits, 0)
    assert list(bv) == bits


@pytest.mark.parametrize("n", [1, 10, 300, 3000])
@pytest.mark.parametrize("density", [0.01, 0.5, 0.99])
def test_sparse_exhaustive(n, density):
    rng = random.Random(n + int(density * 1000))
    bits = [int(rng.random() < density) for _ in range(n)]
    z = SparseBitvector(bits)
    pr = prefix_ranks(bits)
    for i in range(1, n + 1):
        assert z.bit(i) == bits[i - 1]
        assert z.rank1(i) == pr[i]
        assert z.partial_rank1(i) == (pr[i] if bits[i - 1] else None)
        assert z.rank_and_bit(i) == (pr[i - 1], bool(bits[i - 1]))
    assert [z.select1(k) for k in range(1, z.ones + 1)] == positions(bits, 1)
    assert list(z) == bits


def test_rank_select_small_oracle():
    bits = as_bits("1101000111010")
    bv = Bitvector(bits)
    for a in (0, 1):
        for i in range(len(bits) + 1):
            assert bv.rank(a, i) == rank(bits, a, i)
        for k in range(1, rank(bits, a, len(bits)) + 1):
            assert bv.select(a, k) == select(bits, a, k)


# -- properties -------------------------------------------------------------------


bit_lists = st.lists(st.integers(0, 1), max_size=3000)


@settings(max_examples=60, deadline=None)
@given(bit_lists)
def test_rank_select_laws(bits):
    bv = Bitvector(bits)
    n = len(bits)
    for i in range(n + 1):
        assert bv.rank1(i) + bv.rank0(i) == i
    for a in (0, 1):
        total = bv.rank(a, n)
        for k in range(1, total + 1):
            p = bv.select(a, k)
            assert bv.rank(a, p) == k and bits[p - 1] == a
        for i in range(1, n + 1):
            r = bv.rank(a, i)
            if r:
                assert bv.select(a, r) <= i


@settings(max_examples=60, deadline=None)
@given(st.lists(st.integers(0, 5000), max_size=400), st.integers(1, 5000))
def test_monotone_round_trip(vals, extra):
    vals = sorted(vals)
    u = (vals[-1] + extra) if vals else extra
    s = MonotoneSequence(vals, u)
    assert s.to_list() == vals
    assert [s.access(i) for i in range(len(vals))] == vals
    for v in sorted({0, u, *vals, *(x + 1 for x in vals)}):
        if v <= u:
            r = s.rank(v)
            assert r == sum(1 for x in vals if x < v)
            if r < len(vals):
                assert s.access(r) >= v
    assert MonotoneSequence.from_bytes(s.to_bytes()) == s


@settings(max_examples=40, deadline=None)
@given(bit_lists)
def test_serialization_round_trip(bits):
    bv = Bitvector(bits)
    assert Bitvector.from_bytes(bv.to_bytes()) == bv
    z = SparseBitvector(bits)
    assert SparseBitvector.from_bytes(z.to_bytes()) == z


def test_truncated_section_is_integrity_error():
    data = Bitvector("1011").to_bytes()
    with pytest.raises(IntegrityError):
        Bitvector.from_bytes(data[:-1])
    with pytest.raises(IntegrityError):
        Bitvector.from_bytes(b"XXXX" + data[4:])


def test_bit_order_is_lsb_first():
    bits = [0] * 70
    bits[0] = 1
    bits[65] = 1
    payload = Bitvector(bits).payload_bytes()
    assert payload[0] == 1 and payload[8] == 2


def test_million_bits_sampled():
    rng = np.random.default_rng(5)
    for density in (0.01, 0.5, 0.99):
        bits = (rng.random(1_000_000) < density).astype(np.int64)
        bv = Bitvector(bits.astype(bool))
        pr = np.concatenate([[0], np.cumsum(bits)])
        ones = np.flatnonzero(bits) + 1
        zeros = np.flatnonzero(bits == 0) + 1
        for i in rng.integers(0, 1_000_001, 2000):
            assert bv.rank1(int(i)) == pr[i]
        for k in rng.integers(1, len(ones) + 1, 2000):
            assert bv.select1(int(k)) == ones[k - 1]
        for k in rng.integers(1, len(zeros) + 1, 2000):
            assert bv.select0(int(k)) == zeros[k - 1]
