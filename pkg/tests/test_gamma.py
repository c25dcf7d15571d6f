from fractions import Fraction

import pytest
import sympy as sp
from hypothesis import given, strategies as st

from gt_modules.action import FormalVector, TableauBasis
from gt_modules.gamma import (
    GammaBudgetExceeded,
    SingularRow,
    check_gamma_action,
    cmk_expression,
    fingerprint,
    fingerprints_equal,
    gamma_expression,
    gamma_value,
    multiplicity_one_check,
    repeated_fingerprints,
)
from gt_modules.tableau import Tableau, enumerate_standard


@given(st.lists(st.integers(min_value=-6, max_value=6), min_size=1, max_size=4, unique=True))
def test_first_gamma_is_the_shifted_trace(row):
    m = len(row)
    assert gamma_value(m, 1, row) == sum(row) + Fraction(m * (m - 1), 2)


def test_gamma_values():
    assert gamma_value(2, 2, [1, -1]) == 2
    assert gamma_value(2, 2, [3, 0]) == 12
    assert gamma_value(4, 2, [4, 3, 0, -1]) == 48
    assert gamma_value(2, 1, ["1/2", "-1/3"]) == Fraction(7, 6)


def test_gamma_rejects_bad_rows():
    with pytest.raises(SingularRow):
        gamma_value(2, 1, [1, 1])
    with pytest.raises(ValueError):
        gamma_value(2, 1, [1])
    with pytest.raises(ValueError):
        gamma_value(2, 0, [1, 0])


def test_gamma_expression_is_a_polynomial():
    l1, l2 = sp.symbols("l1:3")
    assert sp.expand(gamma_expression(2, 1) - (l1 + l2 + 1)) == 0
    assert gamma_expression(2, 2).subs({l1: 1, l2: -1}) == 2
    assert gamma_expression(3, 2).is_polynomial()


def test_cmk_words():
    assert cmk_expression(2, 2) == [((1, 1), (1, 1)), ((1, 2), (2, 1)), ((2, 1), (1, 2)), ((2, 2), (2, 2))]
    assert len(cmk_expression(3, 3)) == 27
    with pytest.raises(GammaBudgetExceeded):
        cmk_expression(5, 1)
    with pytest.raises(ValueError):
        cmk_expression(2, 0)


def test_central_elements_act_by_gamma_on_the_vector_representation(vector_basis):
    for T in (Tableau.from_rows([[1, -1], [1]]), Tableau.from_rows([[1, -1], [0]])):
        for m, k in [(1, 1), (2, 1), (2, 2)]:
            assert check_gamma_action(vector_basis, T, m, k).passed


def test_central_elements_act_by_gamma_on_the_adjoint(adjoint_basis):
    for T in enumerate_standard([2, 0, -2]):
        for m in (1, 2, 3):
            for k in range(1, m + 1):
                check = check_gamma_action(adjoint_basis, T, m, k)
                assert check, (str(T), m, k, str(check.defect))


def test_single_tableau_basis_misses_gamma():
    T = Tableau.from_rows([[3, 0], [2]])
    check = check_gamma_action(TableauBasis([T]), T, 2, 2)
    assert check.eigenvalue == 12
    assert check.defect == FormalVector({T: -4})

    T = Tableau.from_rows([[4, 3, 0, -1], [3, 2, 1], [3, 2], [3]])
    check = check_gamma_action(TableauBasis([T]), T, 4, 2)
    assert check.eigenvalue == 48
    assert check.defect == FormalVector({T: -12})
    assert not check


def test_fingerprints_separate_the_adjoint(adjoint_basis):
    assert repeated_fingerprints(enumerate_standard([2, 0, -2])) == []
    assert multiplicity_one_check(adjoint_basis, 2)


def test_fingerprint_of_a_singular_top_row():
    F = fingerprint(Tableau.from_rows([[1, 1], [0]]))
    assert F.row_multisets == {2: (1, 1)}
    assert F.values[2, 1] is None
    assert fingerprints_equal(F, fingerprint(Tableau.from_rows([[1, 1], [0]])))
    assert not fingerprints_equal(F, fingerprint(Tableau.from_rows([[1, 1], [1]])))
