import pytest
from hypothesis import HealthCheck, assume, given, settings, strategies as st

from gt_modules.action import BasisSpec, enumerate_ball
from gt_modules.realization import sample_realization

from gt_modules.relations import (
    CriticalSet,
    Cross,
    InvalidRelation,
    NotReleasable,
    OrderUndetermined,
    RelationSet,
    admissibility_defects,
    critical_pairs_of,
    decompose,
    detect_crosses,
    equivalent,
    forced_order,
    ge,
    gt,
    implied_relations,
    implies,
    is_admissible,
    is_noncritical_set,
    is_pre_admissible,
    is_reduced,
    is_satisfiable,
    matching_neighbors,
    orient,
    parse_relations,
    reduce,
    relabel,
    relation_universe,
    rr_reachable,
    rr_step,
    sandwiched,
    sigma_action,
    standard_set,
    standard_top_chain,
)
from gt_modules.tableau import IntegerDiff, Position, Tableau, identity_permutation, permutation_group

S3 = standard_set(3)


@st.composite
def standard_subsets(draw):
    return RelationSet(3, draw(st.sets(st.sampled_from(list(S3)))))


@st.composite
def row_permutations(draw, n=3):
    return tuple(tuple(draw(st.permutations(range(1, k + 1)))) for k in range(1, n + 1))


def test_parse_relations():
    assert parse_relations("(2,1)>=(1,1), (1,1)>(2,2)", 2) == standard_set(2)
    assert parse_relations("(1,1) < (2,1)", 2) == RelationSet(2, [gt((2, 1), (1, 1))])
    assert parse_relations("{(2,1)≥(1,1)}", 2) == RelationSet(2, [ge((2, 1), (1, 1))])
    with pytest.raises(InvalidRelation):
        parse_relations("(2,1)>=(1,1) and more", 2)


def test_relation_set_validation():
    with pytest.raises(InvalidRelation):
        RelationSet(2, [ge((3, 1), (1, 1))])
    with pytest.raises(InvalidRelation):
        RelationSet(2, [ge((2, 1), (2, 1))])
    with pytest.raises(InvalidRelation):
        RelationSet(1)


def test_set_sizes():
    assert len(standard_set(3)) == 6
    assert len(relation_universe(2)) == 6
    assert len(relation_universe(3)) == 22
    assert str(standard_set(2)) == "{(1,1)>(2,2), (2,1)>=(1,1)}"


def test_satisfiability():
    assert is_satisfiable(S3)
    assert not is_satisfiable(RelationSet(2, [gt((2, 1), (1, 1)), gt((1, 1), (2, 1))]))


def test_critical_sets():
    assert is_noncritical_set(S3)
    C = RelationSet(3, [ge((3, 1), (2, 1)), ge((3, 1), (2, 2))])
    assert critical_pairs_of(C) == [(Position(2, 1), Position(2, 2))]
    with pytest.raises(CriticalSet):
        reduce(C)
    with pytest.raises(OrderUndetermined):
        forced_order(C, 2)


def test_forced_orders_of_standard_set():
    assert forced_order(S3, 2) == [[(2, 1), (2, 2)]]
    assert forced_order(S3, 3) == [[(3, 1), (3, 2), (3, 3)]]


def test_reduce_drops_implied_relations():
    C = S3 | [ge((3, 1), (2, 2))]
    assert equivalent(C, S3)
    assert implies(S3, C)
    assert not is_reduced(C)
    assert reduce(C) == S3
    assert is_reduced(S3)


@given(standard_subsets())
def test_reduce_is_idempotent(C):
    reduced = reduce(C)
    assert reduce(reduced) == reduced
    assert equivalent(C, reduced)
    assert is_reduced(reduced)


@settings(deadline=None)
@given(standard_subsets(), row_permutations())
def test_admissibility_is_invariant_under_relabeling(C, sigma):
    assert is_admissible(sigma_action(sigma, C)) == is_admissible(C)


def test_crosses():
    C = RelationSet(3, [gt((2, 1), (3, 2)), ge((3, 1), (2, 2))])
    assert detect_crosses(C) == [Cross(2, 1, 1, 2, 2)]
    assert set(Cross(2, 1, 1, 2, 2).relations()) == set(C)
    assert len(decompose(C)) == 2


def test_standard_set_is_admissible():
    assert is_pre_admissible(S3)
    assert is_admissible(S3)
    assert orient(S3) == identity_permutation(3)
    assert sandwiched(S3, Position(2, 1), Position(2, 2)) == ([(3, 2)], [(1, 1)])


def test_one_sided_pairs_are_not_admissible(sandwiched_above, sandwiched_below):
    for C in (sandwiched_above, sandwiched_below):
        assert is_pre_admissible(C)
        assert not is_admissible(C)
        assert admissibility_defects(C) == [(Position(2, 1), Position(2, 2))]


def test_two_positions_above_suffice():
    # (2,1) > (3,2) >= (3,3) >= (2,2)
    C = RelationSet(3, [gt((2, 1), (3, 2)), ge((3, 2), (3, 3)), ge((3, 3), (2, 2))])
    assert sandwiched(C, Position(2, 1), Position(2, 2))[0] == [(3, 2), (3, 3)]
    assert is_admissible(C)


def test_orientation_and_top_ties():
    flipped = RelationSet(2, [ge((2, 2), (1, 1)), gt((1, 1), (2, 1))])
    assert is_admissible(flipped)
    tie = RelationSet(2, [ge((2, 1), (2, 2)), ge((2, 2), (2, 1))])
    assert is_admissible(tie)


def test_relations_removal():
    S2 = standard_set(2)
    assert rr_step(S2, (2, 1)) == RelationSet(2, [gt((1, 1), (2, 2))])
    with pytest.raises(NotReleasable):
        rr_step(S2, (1, 1))
    with pytest.raises(NotReleasable):
        rr_step(RelationSet(2), (1, 1))

    reached = rr_reachable(2, 100)
    assert len(reached) == 4
    assert RelationSet(2) in reached


@pytest.mark.parametrize("n,limit", [(2, 100), (3, 60)])
def test_relations_removal_keeps_admissibility(n, limit):
    assert all(is_admissible(C) for C in rr_reachable(n, limit))


def test_matching_neighbors():
    T = Tableau.from_rows([[2, 0, -2], [2, 0], [1]])
    assert matching_neighbors(T, Position(2, 1), Position(2, 2)) == 1


def test_top_chain():
    assert standard_top_chain(3) == RelationSet(3, [ge((3, 1), (3, 2)), ge((3, 2), (3, 3))])


def test_relations_removal_steps():
    second = rr_step(S3, (3, 3))
    assert second == S3 - [gt((2, 2), (3, 3))]
    third = rr_step(second, (2, 2))
    assert third == RelationSet(3, [ge((3, 1), (2, 1)), gt((2, 1), (3, 2)), ge((2, 1), (1, 1))])
    fourth = rr_step(third, (3, 1))
    assert fourth == RelationSet(3, [gt((2, 1), (3, 2)), ge((2, 1), (1, 1))])
    assert all(is_admissible(C) for C in (S3, second, third, fourth))
    with pytest.raises(NotReleasable):
        rr_step(third, (2, 1))


@settings(max_examples=30, deadline=None)
@given(standard_subsets(), st.integers(min_value=0, max_value=2**16))
def test_adjacent_entries_have_matching_neighbors(C, seed):
    assume(is_admissible(C))
    B = BasisSpec(C, sample_realization(C, rng=seed))
    for R in enumerate_ball(B, 1):
        for k in range(2, C.n):
            for i in range(1, k + 1):
                for j in range(1, k + 1):
                    p, q = Position(k, i), Position(k, j)
                    d = R.diff(p, q)
                    if isinstance(d, IntegerDiff) and d.value == 1:
                        assert matching_neighbors(R, p, q) >= 2, (str(R), p, q)


def test_relabeling_a_relation():
    sigma = ((1,), (2, 1), (3, 1, 2))
    assert relabel(sigma, gt((2, 1), (3, 2))) == gt((2, 2), (3, 1))
    assert sigma_action(sigma, S3) == RelationSet(3, (relabel(sigma, r) for r in S3))


def test_implied_relations_decide_equivalence():
    C = RelationSet(3, [ge((3, 1), (2, 1)), gt((2, 1), (3, 2))])
    implied = implied_relations(C)
    assert set(C) <= implied
    assert ge((3, 1), (3, 2)) in implied
    assert implied_relations(C | [ge((3, 1), (3, 2))]) == implied
    assert implied_relations(S3) != implied


@st.composite
def noncritical_sets(draw, n=None):
    n = draw(st.integers(min_value=2, max_value=4)) if n is None else n
    adjacent = [r for r in relation_universe(n) if r.high.row != r.low.row]
    relations = draw(st.sets(st.sampled_from(adjacent), max_size=5))
    C = RelationSet(n, relations) | standard_top_chain(n)
    assume(is_satisfiable(C) and is_noncritical_set(C))
    return C


@settings(max_examples=200, deadline=None, suppress_health_check=[HealthCheck.filter_too_much, HealthCheck.too_slow])
@given(noncritical_sets())
def test_reduction_of_noncritical_sets(C):
    reduced = reduce(C)
    assert reduce(reduced) == reduced
    assert equivalent(C, reduced)
    assert is_reduced(reduced)


@settings(max_examples=100, deadline=None, suppress_health_check=[HealthCheck.filter_too_much, HealthCheck.too_slow])
@given(noncritical_sets(), st.data())
def test_equivalent_sets_share_their_reduction(C, data):
    extra = data.draw(st.sets(st.sampled_from(sorted(implied_relations(C)))))
    D = reduce(C) | extra
    assert equivalent(C, D)
    assert reduce(D) == reduce(C)

    other = data.draw(noncritical_sets(C.n))
    assert (reduce(other) == reduce(C)) == equivalent(other, C)


@pytest.mark.slow
def test_relations_removal_reaches_only_admissible_sets():
    group = permutation_group(3)
    for C in rr_reachable(3, 500):
        assert is_admissible(C)
        for sigma in group:
            assert is_admissible(sigma_action(sigma, C)), (str(C), sigma)
