import itertools

import pytest
from hypothesis import given, settings, strategies as st

from hsgcompress.compress import (
    CompressedDatabase,
    compress,
    lookup,
    reconstruct,
    reconstruction_cost,
)
from hsgcompress.groups import FunctionTable, GroupSpec, planted_table
from hsgcompress.hsg import SymmetryHypothesis

GROUPS = [(2,), (4,), (2, 2), (8,), (4, 2), (2, 4), (2, 2, 2)]


def hyp(factors, period):
    return SymmetryHypothesis(GroupSpec(factors), period, 1.0)


def test_toy_compression(toy):
    cdb = compress(toy, hyp((2, 2), "01"))
    assert cdb.representatives == ((0b00, 1), (0b10, 0))
    assert len(toy) == 4 and len(cdb) == 2


def test_constant_db():
    f = FunctionTable(2, 1, (1,) * 4)
    assert compress(f, hyp((2, 2), "01")).representatives == ((0, 1), (2, 1))


def test_period_11():
    a, b = 1, 0
    f = FunctionTable(2, 1, (a, b, b, a))
    assert compress(f, hyp((2, 2), "11")).representatives == ((0b00, a), (0b01, b))


def test_round_trip_toy(toy):
    assert reconstruct(compress(toy, hyp((2, 2), "01"))) == toy


def test_wrong_hypothesis(toy):
    rec = reconstruct(compress(toy, hyp((4,), "01")))
    assert rec.entries == (1, 1, 1, 1)
    assert reconstruction_cost(toy, rec) == 2


def test_single_coset_constant():
    f = FunctionTable(2, 2, (3,) * 4)
    assert reconstruct(compress(f, hyp((4,), "01"))) == f


def test_lookup_toy(toy):
    cdb = compress(toy, hyp((2, 2), "01"))
    assert lookup(cdb, "01") == 1
    assert lookup(cdb, "11") == 0
    for x, v in cdb.representatives:
        assert lookup(cdb, x) == v


def test_compress_errors(toy):
    with pytest.raises(ValueError):
        compress(toy, SymmetryHypothesis(GroupSpec((2, 2)), None, 0.0))
    with pytest.raises(ValueError):
        compress(toy, hyp((2, 2, 2), "001"))


def test_malformed_cover():
    g = GroupSpec((2, 2))
    with pytest.raises(ValueError):
        CompressedDatabase(g, "01", 2, 1, ((0, 1), (1, 0)))
    with pytest.raises(ValueError):
        CompressedDatabase(g, "01", 2, 1, ((0, 1),))


@given(st.sampled_from(GROUPS), st.integers(1, 3), st.integers(0, 2**32 - 1), st.data())
@settings(max_examples=150)
def test_round_trip_and_ratio(factors, m, seed, data):
    g = GroupSpec(factors)
    r = data.draw(st.integers(1, g.order - 1))
    f = planted_table(g, g.bits(r), m, seed)
    cdb = compress(f, hyp(factors, g.bits(r)))
    assert reconstruct(cdb) == f
    assert len(cdb) * len(g.cyclic(r)) == len(f)


@pytest.mark.parametrize("factors", GROUPS)
def test_lookup_equals_reconstruct_exhaustive(factors):
    g = GroupSpec(factors)
    for r in range(1, g.order):
        for seed in range(3):
            f = FunctionTable(g.n_bits, 2, tuple((x * 7 + seed) % 4 for x in range(g.order)))
            cdb = compress(f, hyp(factors, g.bits(r)))
            full = reconstruct(cdb)
            assert [lookup(cdb, x) for x in range(g.order)] == list(full.entries)


def test_reconstruct_total_for_any_hypothesis():
    g = GroupSpec((2, 2))
    for values in itertools.product(range(2), repeat=4):
        f = FunctionTable(2, 1, values)
        for r in ("01", "10", "11"):
            assert len(reconstruct(compress(f, hyp((2, 2), r)))) == 4


def test_file_format_round_trip(toy):
    cdb = compress(toy, hyp((2, 2), "01"))
    text = cdb.to_text()
    assert text == "group=2,2\nperiod=01\nn=2\nm=1\n00,1\n10,0\n"
    assert CompressedDatabase.from_text(text) == cdb


def test_file_format_missing_header():
    with pytest.raises(ValueError):
        CompressedDatabase.from_text("group=2,2\nn=2\nm=1\n00,1\n10,0\n")
