"""Cantor-Bendixson calculus on tree terms.

Ranks are computed by structural recursion instead of transfinite iteration.
For a node with child specs, let ``N(g)`` be the number of child instances
whose vanishing rank exceeds ``g``. The node's own rank is the least ``g``
with ``N(g)`` finite, which is the maximum of the vanishing ranks of the
infinitely repeated children and of the family limits.

Family limits rely on the shape of iterated contexts: with one hole,
``van(C(t)) = max(c, van(t) + m)`` where ``m`` counts the infinite
multiplicities on the path to the hole, so member ranks form an arithmetic
progression from member 1 on. The progression is checked on members 1..3.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, List, Tuple, Union

from .ordinal import (
    ONE, ZERO, Ordinal, add_ord, as_ordinal, left_difference, mul_by_omega,
    predecessor, sup_ord,
)
from .terms import (
    ALEPH0, HOLE, Aleph, Cardinal, Concrete, Family, Forest, Space, Tree,
    TermError, as_forest, card_add, card_mul, card_sum, contains_hole,
    is_countable, is_infinite, is_isolated_root, splice,
)


class FamilyShapeError(TermError):
    """Member values of a family do not form the expected progression."""


class DomainError(ValueError):
    """Operation undefined on this input (uncountable, empty, ...)."""


def progression_limit(values: Callable[[int], Ordinal], strict: bool = False) -> Ordinal:
    """Limit of ``values(k)`` assuming an arithmetic progression from ``k = 1``.

    Returns the eventual value for a constant progression, else
    ``values(1) + d*w``. With ``strict`` the supremum over all ``k`` is taken
    (the constant case then includes ``values(0)``).
    """
    v0, v1, v2, v3 = (values(k) for k in range(4))
    if v2 < v1 or v3 < v2:
        raise FamilyShapeError(f"member values decrease: {v0}, {v1}, {v2}, {v3}")
    d = left_difference(v1, v2)
    if left_difference(v2, v3) != d:
        raise FamilyShapeError(f"member values are not a progression: {v0}, {v1}, {v2}, {v3}")
    if d.is_zero():
        return sup_ord([v0, v1]) if strict else v1
    return add_ord(v1, mul_by_omega(d))


def family_increment(f: Family) -> Ordinal:
    """Per-member growth of the vanishing rank (from member 1 on)."""
    return left_difference(van_rank(f.member(1)), van_rank(f.member(2)))


def validate_family(f: Family) -> Family:
    """Reject families whose members stop growing in height."""
    if family_increment(f).is_zero():
        raise FamilyShapeError(f"{f.key}: members do not grow in height")
    family_limit(f)
    return f


# -- ranks -------------------------------------------------------------------

@lru_cache(maxsize=None)
def family_limit(f: Family) -> Ordinal:
    """Least g such that only finitely many members have vanishing rank above g."""
    return progression_limit(lambda k: van_rank(f.member(k)))


@lru_cache(maxsize=None)
def root_rank(t: Tree) -> Ordinal:
    """Cantor-Bendixson rank of the root node."""
    vals = []
    for s in t.children:
        if isinstance(s, Family):
            vals.append(family_limit(s))
        elif is_infinite(s.mult):
            vals.append(_van_slot(s.subtree))
    return sup_ord(vals)


def _van_slot(sub) -> Ordinal:
    if sub is HOLE:
        raise TermError("rank of an open context is undefined")
    return van_rank(sub)


@lru_cache(maxsize=None)
def _van_tree(t: Tree) -> Ordinal:
    best = add_ord(root_rank(t), 1)
    for s in t.children:
        if isinstance(s, Concrete) and not is_infinite(s.mult):
            v = _van_slot(s.subtree)
            if v > best:
                best = v
    return best


def van_rank(x: Space) -> Ordinal:
    """Least g with X^(g) empty."""
    if isinstance(x, Tree):
        return _van_tree(x)
    return sup_ord(_van_tree(t) for t, _ in x.items)


@lru_cache(maxsize=None)
def _level_tree(t: Tree, a: Ordinal) -> Cardinal:
    total: Cardinal = 1 if root_rank(t) >= a else 0
    for s in t.children:
        if isinstance(s, Family):
            total = card_add(total, _level_family(s, a))
        else:
            total = card_add(total, card_mul(s.mult, _level_tree(s.subtree, a)))
    return total


def _level_family(f: Family, a: Ordinal) -> Cardinal:
    if not a < family_limit(f):
        return 0
    level = 0
    for k in range(4):
        c = _level_tree(f.member(k), a)
        if isinstance(c, Aleph):
            level = max(level, c.level)
    return Aleph(level)


def level_size(x: Space, a=ZERO) -> Cardinal:
    """Cardinality of the derived set X^(a)."""
    a = as_ordinal(a)
    if isinstance(x, Tree):
        return _level_tree(x, a)
    return card_sum(card_mul(n, _level_tree(t, a)) for t, n in x.items)


def point_count(x: Space) -> Cardinal:
    return level_size(x, ZERO)


def sch_height(x: Space) -> Ordinal:
    """Scattered height: least a with |X^(a)| <= 1."""
    v = van_rank(x)
    if v.is_zero():
        return ZERO
    top = predecessor(v)
    return top if level_size(x, top) == 1 else v


# -- complexity of a representation ------------------------------------------

@lru_cache(maxsize=None)
def _rc_tree(t: Tree) -> Ordinal:
    vals = []
    for s in t.children:
        if isinstance(s, Family):
            vals.append(progression_limit(lambda k, s=s: add_ord(_rc_tree(s.member(k)), 1), strict=True))
        else:
            vals.append(add_ord(_rc_tree(s.subtree), 1))
    return sup_ord(vals)


def rep_complexity(x: Space) -> Ordinal:
    """Stage of the construction hierarchy reached by this particular term.

    A forest with two or more instances is the (point-free) Aleksandrov
    compactification of the sum of its trees, so it costs one more stage.
    """
    if isinstance(x, Tree):
        return _rc_tree(x)
    if x.instance_count() == 0:
        return ZERO
    if x.instance_count() == 1:
        return _rc_tree(x.items[0][0])
    return sup_ord(add_ord(_rc_tree(t), 1) for t, _ in x.items)


# -- first derivative --------------------------------------------------------

Item = Tuple[Union[Tree, object], Cardinal]


@lru_cache(maxsize=None)
def _derive(t) -> Tuple[Item, ...]:
    """Derived set of ``t`` as forest items; a context yields exactly one hole-bearing item."""
    if t is HOLE:
        return ((HOLE, 1),)
    pieces: List = []
    for s in t.children:
        if isinstance(s, Family):
            pieces.extend(_derive_family(s))
        else:
            for sub, n in _derive(s.subtree):
                pieces.append(Concrete(sub, card_mul(s.mult, n)))
    if not is_isolated_root(t):
        return ((Tree(pieces), 1),)
    return tuple((p.subtree, p.mult) for p in pieces)


def _derive_family(f: Family) -> List:
    first = _derive(f.base)
    step = _derive(f.context)
    carrier = [it for it in step if contains_hole(it[0])]
    assert len(carrier) == 1
    hole_item, lam = carrier[0]
    rest = [it for it in step if not contains_hole(it[0])]
    if hole_item is HOLE:
        # every derived piece recurs in infinitely many members
        return [Concrete(t, ALEPH0) for t, _ in list(first) + rest]
    out = [Concrete(t, n) for t, n in first]
    out += [Concrete(t, ALEPH0) for t, _ in rest]
    nxt = splice(hole_item, rest + [(HOLE, lam)])
    start = splice(hole_item, list(first))
    out += [Family(nxt, start)] * lam
    return out


def derived_forest(x: Space) -> Forest:
    """X' (the non-isolated points) re-encoded as a forest."""
    items = []
    for t, n in as_forest(x).items:
        items += [(sub, n * m) for sub, m in _derive(t)]
    return Forest(items)


# -- countable classification -----------------------------------------------

@dataclass(frozen=True)
class MSInvariant:
    rank: Ordinal
    top_count: int


def ms_invariant(x: Space) -> MSInvariant:
    """(rank, top count): X is homeomorphic to the ordinal segment w^rank*top_count + 1."""
    if not is_countable(x):
        raise DomainError("classification by ordinal segments needs a countable space")
    v = van_rank(x)
    if v.is_zero():
        raise DomainError("empty space has no invariant")
    rank = predecessor(v)
    count = level_size(x, rank)
    assert isinstance(count, int)
    return MSInvariant(rank, count)


def homeo_countable(a: Space, b: Space) -> bool:
    for x in (a, b):
        if not is_countable(x):
            raise DomainError("homeomorphism test needs countable spaces")
    ea, eb = van_rank(a).is_zero(), van_rank(b).is_zero()
    if ea or eb:
        return ea and eb
    return ms_invariant(a) == ms_invariant(b)


# -- ordinal segments --------------------------------------------------------

_SHIFT = Tree([Concrete(HOLE, ALEPH0)])


@lru_cache(maxsize=None)
def _segment(a: Ordinal) -> Tree:
    """Tree for w^a + 1."""
    if a.is_zero():
        return Tree()
    last_exp, last_coeff = a.terms[-1]
    if last_exp.is_zero():
        return Tree([Concrete(_segment(predecessor(a)), ALEPH0)])
    if last_exp == ONE:
        head = list(a.terms[:-1]) + ([(ONE, last_coeff - 1)] if last_coeff > 1 else [])
        return Tree([Family(_SHIFT, _segment(Ordinal(head)))])
    raise DomainError(f"w^{a}+1 needs a family whose limit is not of the form b + w")


def ordinal_tree(a, n: int = 1) -> Space:
    """Encoding of the segment w^a*n + 1; a tree when n == 1, else a forest."""
    a = as_ordinal(a)
    if n < 1:
        raise DomainError("n must be positive")
    t = _segment(a)
    return t if n == 1 else Forest([(t, n)])
