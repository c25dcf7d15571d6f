import pytest

from gt_modules.action import BasisSpec
from gt_modules.relations import RelationSet, ge, gt, standard_set
from gt_modules.tableau import Tableau


@pytest.fixture
def adjoint_seed():
    # highest weight (2,1,0) of gl_3
    return Tableau.from_rows([[2, 0, -2], [2, 0], [1]])


@pytest.fixture
def adjoint_basis(adjoint_seed):
    return BasisSpec(standard_set(3), adjoint_seed)


@pytest.fixture
def vector_basis():
    # standard representation of gl_2: top (1,-1), bottom entry 1 or 0
    return BasisSpec(standard_set(2), Tableau.from_rows([[1, -1], [1]]))


@pytest.fixture
def sandwiched_above():
    # one row-3 entry between the pair, nothing below
    return RelationSet(3, [gt((2, 1), (3, 2)), ge((3, 2), (2, 2))])


@pytest.fixture
def sandwiched_below():
    # one row-1 entry between the pair, nothing above
    return RelationSet(3, [ge((2, 1), (1, 1)), gt((1, 1), (2, 2))])
