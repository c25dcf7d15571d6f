from math import inf

from hypothesis import given, strategies as st

from gt_modules.constraints import DifferenceSystem


def chain():
    system = DifferenceSystem("abc")
    system.add_constraint("a", "b", 1)
    system.add_constraint("b", "c", 0)
    return system


def test_bounds_follow_paths():
    system = chain()
    assert system.is_feasible()
    assert system.lower("a", "c") == 1
    assert system.upper("a", "c") == inf
    assert system.implies("a", "c", 1)
    assert not system.implies("a", "c", 2)
    assert not system.can_equal("a", "c")
    assert system.can_equal("b", "c")


def test_negative_cycle_is_infeasible():
    system = chain().with_constraint("c", "a", 0)
    assert not system.is_feasible()
    assert system.solution() is None
    assert chain().is_feasible()


def test_equality_pins_difference():
    system = DifferenceSystem()
    system.add_equality("p", "q", 3)
    assert system.lower("p", "q") == 3
    assert system.upper("p", "q") == 3


def test_unknown_nodes_are_unbounded():
    system = chain()
    assert system.lower("a", "z") == -inf
    assert system.upper("a", "z") == inf
    assert system.lower("z", "z") == 0


def test_strongest_constraint_wins():
    system = DifferenceSystem()
    system.add_constraint("p", "q", 1)
    system.add_constraint("p", "q", 4)
    system.add_constraint("p", "q", 2)
    assert system.lower("p", "q") == 4


@given(st.lists(st.tuples(st.integers(0, 4), st.integers(0, 4), st.integers(-3, 3)), max_size=10))
def test_solution_satisfies_every_constraint(constraints):
    system = DifferenceSystem(range(5))
    for p, q, c in constraints:
        if p != q:
            system.add_constraint(p, q, c)
    x = system.solution()
    if x is None:
        assert not system.is_feasible()
        return
    for p, q, c in constraints:
        if p != q:
            assert x[p] - x[q] >= c
