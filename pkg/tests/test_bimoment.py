from fractions import Fraction as F

from hypothesis import given, strategies as st

from biorth import WordPoly, bimoment_block, bimoment_table, functional
from biorth.bimoment import check_recurrences, check_transpose_symmetry

from conftest import make_params


def test_first_moments_against_linear_system(canonical):
    # Independent oracle: with B00 = L(1) = 1, the two length-1 defining
    # relations L(d - e) = (b10 - b01) and L(beta' d + delta' e) = ... reduce
    # to a 2x2 linear system for (L(d), L(e)).  Solved by hand once:
    m = bimoment_block(canonical, 1)
    assert m.entry(0, 0) == 1
    assert m.entry(1, 0) == F(8, 23)
    assert m.entry(0, 1) == F(18, 23)


def test_fill_routes_agree(grid):
    for p in grid:
        cols = bimoment_block(p, 6, fill="columns")
        rows = bimoment_block(p, 6, fill="rows")
        assert cols.rows() == rows.rows()


def test_transpose_swaps(grid):
    for p in grid:
        assert check_transpose_symmetry(p, 6)


def test_recurrences_hold(grid):
    for p in grid:
        assert check_recurrences(p, 6)


def test_entries_match_functional(canonical):
    # the table must agree with direct evaluation of L(d^n e^m)
    table = bimoment_table(canonical)
    for n in range(4):
        for m in range(4):
            word = WordPoly({"d" * n + "e" * m: 1})
            assert table.entry(n, m) == functional(word, canonical)


@given(st.integers(min_value=0, max_value=5), st.integers(min_value=0, max_value=5))
def test_table_auto_extends(i, j):
    table = bimoment_table(make_params(("1", "1/2", "-1/3", "-1/4", "1/2")))
    value = table.entry(i, j)  # must not raise regardless of fill order
    assert value == bimoment_block(table.params, max(i, j)).entry(i, j)


def test_csv_and_json_shapes(canonical):
    m = bimoment_block(canonical, 0)
    assert m.to_csv() == "1\n"
    m2 = bimoment_block(canonical, 2)
    lines = m2.to_csv().splitlines()
    assert len(lines) == 3
    assert lines[0].split(",")[0] == "1"
    payload = m2.to_json_dict()
    assert payload["n"] == 2
    assert payload["entries"][1][0] == "8/23"


def test_table_is_shared_per_params(canonical):
    assert bimoment_table(canonical) is bimoment_table(canonical)
