import math
import random

import pytest
from hypothesis import given, settings, strategies as st

from succinct_automata.errors import IntegrityError, ValidationError
from succinct_automata.packedvec import PackedVector, block_bits


@pytest.mark.parametrize("base", [1, 2, 3, 7, 8, 10, 201, 256, 1000, 2**20 + 1])
def test_get_set_against_list(base):
    rng = random.Random(base)
    vals = [rng.randrange(base) for _ in range(777)]
    pv = PackedVector(vals, base)
    assert pv.to_list() == vals
    assert [pv.get(i) for i in range(1, 778)] == vals
    for _ in range(500):
        i = rng.randint(1, 777)
        x = rng.randrange(base)
        pv.set(i, x)
        vals[i - 1] = x
    assert pv.to_list() == vals
    assert PackedVector.from_bytes(pv.to_bytes()) == pv


def test_payload_close_to_entropy():
    n, base = 10_000, 201
    pv = PackedVector([0] * n, base)
    ideal = n * math.log2(base)
    assert ideal <= pv.payload_bits <= ideal + n / pv.values_per_block + 1


def test_power_of_two_is_fixed_width():
    pv = PackedVector(range(16), 16)
    assert pv.payload_bits == 64


def test_block_bits():
    assert block_bits(3, 1) == 2
    assert block_bits(3, 5) == (3**5 - 1).bit_length()
    assert block_bits(1, 99) == 0


def test_range_errors():
    with pytest.raises(ValidationError):
        PackedVector([5], 5)
    pv = PackedVector([1, 2], 3)
    with pytest.raises(IndexError):
        pv.get(0)
    with pytest.raises(IndexError):
        pv.get(3)
    with pytest.raises(ValidationError):
        pv.set(1, 3)


def test_corrupt_bytes():
    data = PackedVector([1, 2, 0, 2], 3).to_bytes()
    with pytest.raises(IntegrityError):
        PackedVector.from_bytes(data[:-8])
    with pytest.raises(IntegrityError):
        PackedVector.from_bytes(b"NOPE" + data[4:])


@settings(max_examples=80, deadline=None)
@given(st.integers(1, 10**6).flatmap(
    lambda b: st.tuples(st.just(b), st.lists(st.integers(0, b - 1), max_size=300))))
def test_round_trip_property(case):
    base, vals = case
    pv = PackedVector(vals, base)
    assert list(pv) == vals
    assert PackedVector.from_bytes(pv.to_bytes()).to_list() == vals
