from hypothesis import given, settings

from conftest import family_trees, trees
from scattered.derived import homeo_countable, rep_complexity, sch_height, van_rank
from scattered.dsl import parse_expr
from scattered.normalize import normalize, pieces
from scattered.terms import Forest, is_countable


def T(src):
    return parse_expr(src)


def test_examples():
    assert normalize(T("A(A(1^w)^1)")) == T("A(1^w)")
    assert normalize(T("A(1^w)")) == T("A(1^w)")
    assert normalize(T("A(1^3, 1^w)")) == T("A(1^w)")
    assert normalize(T("1")) == T("1")
    assert normalize(Forest([(T("1"), 2)])) == Forest([(T("1"), 2)])


def test_hoisting_splits_off_heavy_children():
    # the padded root is isolated, so it becomes a loose point beside its child
    ps = pieces(T("A(A(1^w)^1)"))
    assert {(t.key, n) for t, n in ps} == {("1", 1), ("A(1^w)", 1)}


def test_forest_with_single_top_becomes_a_tree():
    assert normalize(Forest([(T("A(1^w)"), 1), (T("1"), 2)])) == Forest([(T("A(1^w)"), 1)])
    assert normalize(Forest([(T("A(1^w)"), 2)])) == Forest([(T("A(1^w)"), 2)])


@settings(max_examples=300, deadline=None)
@given(trees)
def test_normal_form_reaches_height(t):
    n = normalize(t)
    assert rep_complexity(n) == sch_height(t)
    assert normalize(n) == n
    assert homeo_countable(t, n)


@settings(max_examples=150, deadline=None)
@given(family_trees)
def test_normal_form_with_families(t):
    n = normalize(t)
    assert rep_complexity(n) == sch_height(t)
    assert van_rank(n) == van_rank(t) and sch_height(n) == sch_height(t)
    assert normalize(n) == n
    if is_countable(t):
        assert homeo_countable(t, n)
