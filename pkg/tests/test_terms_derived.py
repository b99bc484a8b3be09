import pytest
from hypothesis import given, settings

from conftest import family_trees, trees
from scattered.derived import (
    DomainError, FamilyShapeError, derived_forest, homeo_countable, level_size,
    ms_invariant, ordinal_tree, point_count, rep_complexity, sch_height, van_rank,
    validate_family,
)
from scattered.dsl import parse_expr
from scattered.generators import enumerate_finite_trees
from scattered.oracles import FiniteSpace, StageOracle, derivative_chain
from scattered.ordinal import OMEGA, add_ord, omega_power
from scattered.terms import (
    ALEPH0, HOLE, LEAF, Aleph, Concrete, Family, Forest, TermError, Tree,
    aleksandrov, is_isolated_root,
)

A_W = Tree([Concrete(LEAF, ALEPH0)])
TOWER = Tree([Family(Tree([Concrete(HOLE, ALEPH0)]), LEAF)])


def T(src):
    return parse_expr(src)


def test_aleksandrov():
    assert aleksandrov([Concrete(LEAF, ALEPH0)]) == A_W
    assert aleksandrov(Forest([(LEAF, 3)])) == Forest([(LEAF, 3)])
    fam = aleksandrov([Family(Tree([Concrete(HOLE, ALEPH0)]), LEAF)])
    assert isinstance(fam, Tree) and not is_isolated_root(fam)


def test_isolated_root():
    assert is_isolated_root(LEAF)
    assert not is_isolated_root(A_W)
    assert is_isolated_root(Tree([Concrete(A_W, 2)]))


def test_derivative_examples():
    assert derived_forest(A_W) == Forest([(LEAF, 1)])
    assert derived_forest(Forest([(LEAF, 5)])) == Forest()
    assert derived_forest(T("A(A(1^w)^w)")) == Forest([(A_W, 1)])


def test_rank_examples():
    assert van_rank(LEAF) == 1 and van_rank(A_W) == 2
    assert van_rank(TOWER) == add_ord(OMEGA, 1)
    assert sch_height(LEAF) == 0 and sch_height(A_W) == 1
    assert sch_height(ordinal_tree(OMEGA)) == OMEGA
    assert level_size(A_W, 0) == ALEPH0 and level_size(A_W, 1) == 1
    assert level_size(ordinal_tree(2, 3), 2) == 3
    assert point_count(LEAF) == 1 and point_count(A_W) == ALEPH0
    assert point_count(Tree([Concrete(LEAF, Aleph(1))])) == Aleph(1)


def test_tower_members_grow_by_one():
    f = TOWER.children[0]
    assert [van_rank(f.member(k)) for k in range(5)] == [1, 2, 3, 4, 5]


def test_rep_complexity_examples():
    assert rep_complexity(LEAF) == 0 and rep_complexity(A_W) == 1
    padded = Tree([Concrete(A_W, 1)])
    assert rep_complexity(padded) == 2 and sch_height(padded) == 1
    assert rep_complexity(Forest([(LEAF, 2)])) == 1


def test_ms_examples():
    inv = ms_invariant(A_W)
    assert (inv.rank, inv.top_count) == (1, 1)
    inv = ms_invariant(Forest([(LEAF, 3)]))
    assert (inv.rank, inv.top_count) == (0, 3)
    inv = ms_invariant(T("A(A(1^w)^w)"))
    assert (inv.rank, inv.top_count) == (2, 1)


def test_homeo_examples():
    assert homeo_countable(A_W, Tree([Concrete(A_W, 1)]))
    assert not homeo_countable(LEAF, Forest([(LEAF, 2)]))


def test_domain_errors():
    big = Tree([Concrete(LEAF, Aleph(1))])
    with pytest.raises(DomainError):
        ms_invariant(big)
    with pytest.raises(DomainError):
        homeo_countable(big, big)
    with pytest.raises(DomainError):
        ms_invariant(Forest())
    with pytest.raises(DomainError):
        ordinal_tree(omega_power(2))


def test_family_validation():
    with pytest.raises(TermError):
        Family(Tree([Concrete(LEAF, 1)]), LEAF)          # no hole
    with pytest.raises(FamilyShapeError):
        validate_family(Family(Tree([Concrete(HOLE, 1), Concrete(LEAF, 1)]), LEAF))


def test_ordinal_trees():
    assert ordinal_tree(0) == LEAF
    assert ordinal_tree(1) == A_W
    assert ordinal_tree(OMEGA) == TOWER
    assert ordinal_tree(2, 3) == Forest([(T("A(A(1^w)^w)"), 3)])


def test_finite_space_oracle_small():
    for t in enumerate_finite_trees(3, 2, 2):
        fs = FiniteSpace.from_term(t)
        assert fs.van() == int(van_rank(t))
        assert fs.sch() == int(sch_height(t))


def test_finite_space_sees_convergence():
    # finitely many children never accumulate at their parent
    fs = FiniteSpace.from_term(T("A(1^3)"))
    assert fs.van() == 1 and len(fs.points) == 4


@settings(max_examples=200, deadline=None)
@given(trees)
def test_derivative_shifts_rank(t):
    # 1 + van(D x) = van(x): at infinite ranks the derivative does not lower van
    assert add_ord(1, van_rank(derived_forest(t))) == van_rank(t)


@settings(max_examples=100, deadline=None)
@given(family_trees)
def test_derivative_shifts_rank_with_families(t):
    assert add_ord(1, van_rank(derived_forest(t))) == van_rank(t)


@settings(max_examples=200, deadline=None)
@given(trees)
def test_derivative_chain_matches_finite_rank(t):
    v = van_rank(t)
    if v.is_finite():
        assert derivative_chain(t) == int(v)


@settings(max_examples=200, deadline=None)
@given(family_trees)
def test_stage_oracle_agrees(t):
    st = StageOracle()
    assert st.van(t) == van_rank(t)
    assert st.sch(t) == sch_height(t)


@settings(max_examples=200, deadline=None)
@given(family_trees)
def test_sch_bounded_by_term_complexity(t):
    assert not sch_height(t) > rep_complexity(t)
    assert not sch_height(t) > van_rank(t)
