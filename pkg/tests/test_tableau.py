from fractions import Fraction
from math import prod

import pytest
from hypothesis import given, settings, strategies as st

from gt_modules.tableau import (
    AnchorError,
    AnchorTable,
    Entry,
    InfiniteEnumeration,
    IntegerDiff,
    NonIntegerDiff,
    Position,
    ShapeError,
    ShiftVector,
    Tableau,
    apply_permutation,
    compose_permutations,
    critical_pairs,
    enumerate_standard,
    fresh_anchor_table,
    identity_permutation,
    invert_permutation,
    is_noncritical_tableau,
    is_standard,
    top_row_from_weight,
)


def weyl_dimension(top):
    n = len(top)
    return prod(Fraction(top[i] - top[j], j - i) for i in range(n) for j in range(i + 1, n))


@st.composite
def dominant_weights(draw, max_n=3, max_part=3):
    n = draw(st.integers(min_value=2, max_value=max_n))
    parts = draw(st.lists(st.integers(min_value=0, max_value=max_part), min_size=n, max_size=n))
    return sorted(parts, reverse=True)


@st.composite
def shifts(draw, n=3):
    z = {}
    for k in range(1, n):
        for i in range(1, k + 1):
            z[(k, i)] = draw(st.integers(min_value=-3, max_value=3))
    return ShiftVector(n, z)


def test_position_and_entry_rendering():
    assert str(Position(2, 1)) == "(2,1)"
    assert str(Entry("0", 3)) == "3"
    assert str(Entry("a", 0)) == "a"
    assert str(Entry("a", 3)) == "a+3"
    assert str(Entry("a", -2)) == "a-2"


def test_tableau_from_rows():
    T = Tableau.from_rows([[2, 0, -2], [2, 0], [1]])
    assert T.n == 3
    assert str(T) == "(2,0,-2|2,0|1)"
    assert T.row(1) == (Entry("0", 1),)
    assert T.values(3) == (2, 0, -2)
    assert T.value(Position(2, 2)) == 0
    assert len(T.render().splitlines()) == 3


def test_rational_entries_open_anchor_classes():
    T = Tableau.from_rows([["1/2", 0], ["3/2"]])
    assert T[Position(2, 1)] == Entry("1/2", 0)
    assert T[Position(1, 1)] == Entry("1/2", 1)
    assert T.diff(Position(1, 1), Position(2, 1)) == IntegerDiff(1)
    assert T.diff(Position(2, 2), Position(2, 1)) == NonIntegerDiff(Fraction(-1, 2))


@pytest.mark.parametrize("rows", [[[1]], [[1, 0], [1, 0]], [[1, 0, 0], [1], [0]]])
def test_bad_shapes(rows):
    with pytest.raises(ShapeError):
        Tableau.from_rows(rows)


def test_anchor_table_rejects_integral_differences():
    assert set(AnchorTable({"a": "1/2"})) == {"0", "a"}
    with pytest.raises(AnchorError):
        AnchorTable({"a": "1/2", "b": "3/2"})
    with pytest.raises(AnchorError):
        AnchorTable({"a": 1})


def test_fresh_anchor_table():
    table = fresh_anchor_table(["a", "b", "c"], rng=0)
    assert set(table) == {"0", "a", "b", "c"}
    assert all(table[a].denominator > 1 for a in "abc")


def test_top_row_never_moves():
    T = Tableau.from_rows([[1, -1], [0]])
    with pytest.raises(ShapeError):
        T.moved(Position(2, 1), 1)
    with pytest.raises(ShapeError):
        ShiftVector(2, {(2, 1): 1})
    assert len(ShiftVector(2, {(2, 1): 0})) == 0


@given(shifts(), shifts())
def test_shifts_compose(a, b):
    T = Tableau.from_rows([["1/3", 0, -2], [1, "1/3"], [5]])
    assert T.shifted(a).shifted(b) == T.shifted(a + b)
    assert T.shifted(a).shift_from(T) == a
    assert T.shifted(a).shifted(-a) == T


@given(st.lists(st.integers(min_value=-5, max_value=5), min_size=6, max_size=6))
def test_diff_antisymmetry(values):
    T = Tableau.from_rows([values[:3], values[3:5], values[5:]])
    for p in [Position(3, 1), Position(2, 2), Position(1, 1)]:
        for q in [Position(3, 3), Position(2, 1)]:
            assert T.diff(p, q).value == -T.diff(q, p).value


def test_shift_from_unrelated():
    T = Tableau.from_rows([[1, -1], [0]])
    assert Tableau.from_rows([[2, -1], [0]]).shift_from(T) is None
    assert Tableau.from_rows([[1, -1], ["1/2"]]).shift_from(T) is None


def test_critical_pairs():
    T = Tableau.from_rows([[3, 1, 0], [1, 1], [0]])
    assert not is_noncritical_tableau(T)
    assert critical_pairs(T) == [(Position(2, 1), Position(2, 2))]
    # equal top entries are allowed
    assert is_noncritical_tableau(Tableau.from_rows([[1, 1], [0]]))


def test_adjoint_has_eight_standard_tableaux():
    tableaux = enumerate_standard([2, 0, -2])
    assert len(tableaux) == 8
    assert all(is_standard(T) for T in tableaux)
    assert tableaux == sorted(tableaux)


@settings(max_examples=30, deadline=None)
@given(dominant_weights())
def test_standard_count_matches_weyl_dimension(weight):
    top = top_row_from_weight(weight)
    assert len(enumerate_standard(top)) == weyl_dimension(top)


def test_weight_zero_gives_one_tableau():
    top = top_row_from_weight((0, 0))
    assert top == [0, -1]
    tableaux = enumerate_standard(top)
    assert [str(T) for T in tableaux] == ["(0,-1|0)"]


def test_non_decreasing_top_row_has_no_standard_tableaux():
    assert enumerate_standard([0, 0]) == []


def test_enumeration_needs_one_anchor_class():
    with pytest.raises(InfiniteEnumeration):
        enumerate_standard(["1/2", 0])


def test_permutations():
    sigma = ((1,), (2, 1), (2, 3, 1))
    identity = identity_permutation(3)
    assert compose_permutations(sigma, invert_permutation(sigma)) == identity
    assert compose_permutations(invert_permutation(sigma), sigma) == identity

    T = Tableau.from_rows([[2, 0, -2], [2, 0], [1]])
    swapped = apply_permutation(((1,), (2, 1), (1, 2, 3)), T)
    assert str(swapped) == "(2,0,-2|0,2|1)"
    assert apply_permutation(identity, T) == T
