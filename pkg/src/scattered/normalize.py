"""Complexity-minimising rewriting of tree terms.

Rules, applied bottom-up until nothing changes:

* merge: equal concrete children are merged, multiplicities added with
  cardinal absorption (``n + w = w``);
* hoist: a child subtree whose vanishing rank exceeds its parent's node rank
  occurs only finitely often and is clopen, so it is moved up beside the
  parent. An isolated root thereby becomes a bare leaf next to its former
  children;
* regroup: at the top, the pieces are reattached under the piece with the
  largest rank (ties broken by the canonical term order).

Every node of the result is *pure*: all of its children vanish no later
than the node's own rank, which is what makes the representation's
complexity equal to the scattered height.
"""

from __future__ import annotations

from typing import Dict, List, Tuple

from .derived import root_rank, validate_family, van_rank
from .terms import (
    Concrete, Family, Forest, HOLE, Space, Tree, card_add, card_mul,
    contains_hole,
)

Piece = Tuple[Tree, object]


def _merge(specs) -> List:
    """Merge concrete specs with identical subtrees; families are left alone."""
    merged: Dict[str, Concrete] = {}
    out = []
    for s in specs:
        if isinstance(s, Family) or contains_hole(s.subtree):
            out.append(s)
            continue
        prev = merged.get(s.subtree.key)
        merged[s.subtree.key] = s if prev is None else Concrete(s.subtree, card_add(prev.mult, s.mult))
    return out + list(merged.values())


def _merge_pieces(pieces: List[Piece]) -> List[Piece]:
    acc: Dict[str, Piece] = {}
    for t, n in pieces:
        prev = acc.get(t.key)
        acc[t.key] = (t, n if prev is None else card_add(prev[1], n))
    return sorted(acc.values(), key=lambda p: p[0].key)


def pieces(t: Tree) -> List[Piece]:
    """Pure normalised trees whose disjoint sum is homeomorphic to ``t``."""
    specs = []
    for s in t.children:
        if isinstance(s, Family):
            specs.append(_normalize_family(s))
        else:
            specs.extend(Concrete(p, card_mul(s.mult, n)) for p, n in pieces(s.subtree))
    node = Tree(_merge(specs))
    g = root_rank(node)
    heavy = [s for s in node.children if isinstance(s, Concrete) and van_rank(s.subtree) > g]
    light = [s for s in node.children if s not in heavy]
    return [(Tree(light), 1)] + [(s.subtree, s.mult) for s in heavy]


def _normalize_context(t: Tree) -> Tree:
    specs = []
    for s in t.children:
        if isinstance(s, Family):
            specs.append(_normalize_family(s))
        elif s.subtree is HOLE:
            specs.append(s)
        elif contains_hole(s.subtree):
            specs.append(Concrete(_normalize_context(s.subtree), s.mult))
        else:
            specs.extend(Concrete(p, card_mul(s.mult, n)) for p, n in pieces(s.subtree))
    return Tree(_merge(specs))


def _normalize_family(f: Family) -> Family:
    validate_family(f)
    return Family(_normalize_context(f.context), _regroup(_merge_pieces(pieces(f.base))))


def _regroup(ps: List[Piece]) -> Tree:
    """Reassemble pure pieces into a single tree homeomorphic to their sum."""
    inner = [p for p in ps if not p[0].is_leaf()]
    if not inner:
        n = sum(m for _, m in ps)
        return Tree() if n == 1 else Tree([Concrete(Tree(), n - 1)])
    top = max(van_rank(t) for t, _ in inner)
    q = min((t for t, _ in inner if van_rank(t) == top), key=lambda t: t.key)
    rest = []
    for t, n in ps:
        if t == q:
            if n == 1:
                continue
            n -= 1
        rest.append(Concrete(t, n))
    return Tree(_merge(list(q.children) + rest))


def _step(x: Space) -> Space:
    if isinstance(x, Tree):
        return _regroup(_merge_pieces(pieces(x)))
    ps = _merge_pieces([(p, n * m) for t, n in x.items for p, m in pieces(t)])
    if not ps:
        return Forest()
    top = max(van_rank(t) for t, _ in ps)
    tops = sum(n for t, n in ps if van_rank(t) == top)
    total = sum(n for _, n in ps)
    if tops == 1 and total > 1:
        return Forest([(_regroup(ps), 1)])
    return Forest(ps)


def normalize(x: Space, max_rounds: int = 16) -> Space:
    """Rewrite to a fixed point; the result encodes a homeomorphic space."""
    for _ in range(max_rounds):
        y = _step(x)
        if y == x:
            return y
        x = y
    raise RuntimeError("normalization did not reach a fixed point")
