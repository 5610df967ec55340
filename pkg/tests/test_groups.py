import itertools

import pytest
from hypothesis import given, strategies as st

from hsgcompress.groups import (
    FunctionTable,
    GroupSpec,
    all_periods,
    brute_force_period,
    element_order,
    group_add,
    is_period,
    planted_table,
    subgroup_generated,
)

SMALL_GROUPS = [(2,), (4,), (2, 2), (8,), (2, 4), (4, 2), (2, 2, 2)]


def test_add_xor_case(z2z2):
    assert group_add(z2z2, "01", "11") == "10"


def test_add_mod4_case(z4):
    assert group_add(z4, "11", "01") == "00"


def test_identity(z2z2):
    for x in ("00", "01", "10", "11"):
        assert group_add(z2z2, "00", x) == x


def test_mixed_radix_msb_first():
    g = GroupSpec((4, 2))
    # "10" + "1" is digit (2, 1); adding (3, 1) gives (1, 0)
    assert group_add(g, "101", "111") == "010"


def test_width_mismatch(z2z2):
    with pytest.raises(ValueError):
        group_add(z2z2, "0", "01")
    with pytest.raises(ValueError):
        group_add(z2z2, "001", "01")


@pytest.mark.parametrize("factors", [(3,), (1,), (2, 6), ()])
def test_rejects_bad_factors(factors):
    with pytest.raises(ValueError):
        GroupSpec(factors)


@pytest.mark.parametrize("factors", SMALL_GROUPS)
def test_group_laws_exhaustive(factors):
    g = GroupSpec(factors)
    assert g.order == 2 ** g.n_bits
    els = range(g.order)
    for a, b in itertools.product(els, els):
        assert g.add(a, b) == g.add(b, a)
        assert g.add(a, g.neg(a)) == 0
        for c in els:
            assert g.add(g.add(a, b), c) == g.add(a, g.add(b, c))


@pytest.mark.parametrize(
    "factors,r,expected",
    [
        ((2, 2), "01", {"00", "01"}),
        ((4,), "10", {"00", "10"}),
        ((4,), "01", {"00", "01", "10", "11"}),
    ],
)
def test_subgroup_generated(factors, r, expected):
    assert subgroup_generated(GroupSpec(factors), r) == expected


@pytest.mark.parametrize("factors", SMALL_GROUPS)
def test_subgroup_size_is_order(factors):
    g = GroupSpec(factors)
    for r in range(g.order):
        bits = g.bits(r)
        sub = subgroup_generated(g, bits)
        # order by repeated addition, counted independently
        k, x = 1, r
        while x:
            x, k = g.add(x, r), k + 1
        assert len(sub) == k == element_order(g, bits)
        assert g.order % len(sub) == 0
        assert "0" * g.n_bits in sub


def test_brute_force_toy(toy, z2z2, z4):
    assert brute_force_period(z2z2, toy) == "01"
    assert brute_force_period(z4, toy) is None


def test_brute_force_constant():
    for factors in SMALL_GROUPS:
        g = GroupSpec(factors)
        f = FunctionTable(g.n_bits, 1, (0,) * g.order)
        assert brute_force_period(g, f) == "0" * (g.n_bits - 1) + "1"


def test_brute_force_width_check(toy):
    with pytest.raises(ValueError):
        brute_force_period(GroupSpec((2, 2, 2)), toy)


@given(
    st.sampled_from(SMALL_GROUPS),
    st.integers(1, 3),
    st.integers(0, 2**32 - 1),
)
def test_returned_period_satisfies_definition(factors, m, seed):
    g = GroupSpec(factors)
    f = planted_table(g, None, m, seed)
    r = brute_force_period(g, f)
    assert r is not None
    x_all = range(g.order)
    assert all(f[x] == f[g.add(x, int(r, 2))] for x in x_all)
    # smallest: nothing below it works
    assert not any(is_period(g, f, s) for s in range(1, int(r, 2)))


def test_periods_form_subgroup_with_identity():
    g = GroupSpec((2, 2, 2))
    f = planted_table(g, "011", 2, 5)
    periods = set(all_periods(g, f)) | {0}
    for a, b in itertools.product(periods, periods):
        assert g.add(a, b) in periods


def test_table_text_round_trip(toy):
    text = "# toy\n" + toy.to_text()
    assert FunctionTable.from_text(text) == toy
    assert toy.to_text().splitlines()[1] == "01,1"


def test_table_text_errors():
    with pytest.raises(ValueError):
        FunctionTable.from_text("01,1\n00,1\n10,0\n11,0\n")
    with pytest.raises(ValueError):
        FunctionTable.from_text("00,1\n01,1\n10,0\n")
    with pytest.raises(ValueError):
        FunctionTable(2, 1, (0, 1, 2, 0))
