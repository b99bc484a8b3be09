"""Slow reference computations used to cross-check :mod:`scattered.derived`.

Two oracles live here:

* ``FiniteSpace`` materialises a finite term as an explicit point set with
  minimal open neighbourhoods and iterates the literal derived-set operator.
* ``StageOracle`` scans candidate stages node by node. Family members are
  materialised one by one and their heights are extrapolated only after the
  observed differences have stabilised over a window; limits of the
  resulting progressions are read off the Cantor normal form directly.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, FrozenSet, List, Optional

from .ordinal import ZERO, Ordinal, cmp_ord, left_difference
from .terms import (
    Aleph, Cardinal, Family, Forest, Space, Tree, as_forest,
    card_add, card_mul, is_infinite,
)


# -- finite spaces -----------------------------------------------------------

@dataclass
class FiniteSpace:
    points: List[int]
    nbhd: Dict[int, FrozenSet[int]]  # minimal open neighbourhood of each point

    @classmethod
    def from_term(cls, x: Space) -> "FiniteSpace":
        """Materialise a family-free term with finite multiplicities."""
        points: List[int] = []
        subtree: Dict[int, set] = {}
        child_blocks: Dict[int, List[set]] = {}

        def build(t: Tree) -> int:
            p = len(points)
            points.append(p)
            blocks = []
            for s in t.children:
                if isinstance(s, Family) or is_infinite(s.mult):
                    raise ValueError("not a finite space")
                for _ in range(s.mult):
                    q = build(s.subtree)
                    blocks.append(subtree[q])
            subtree[p] = {p}.union(*blocks) if blocks else {p}
            child_blocks[p] = blocks
            return p

        for t, n in as_forest(x).items:
            for _ in range(n):
                build(t)
        # smallest basic neighbourhood: the subtree minus every (finitely many) child block
        nbhd = {}
        for p in points:
            u = set(subtree[p])
            for b in child_blocks[p]:
                u -= b
            nbhd[p] = frozenset(u)
        # intersect with the smallest basic set of every ancestor that still contains p
        for q in points:
            for p in subtree[q]:
                if p == q:
                    continue
                u = set(subtree[q])
                for b in child_blocks[q]:
                    if p not in b:
                        u -= b
                nbhd[p] = nbhd[p] & frozenset(u)
        return cls(points, nbhd)

    def derived(self, a: FrozenSet[int]) -> FrozenSet[int]:
        return frozenset(p for p in a if len(self.nbhd[p] & a) > 1)

    def levels(self) -> List[FrozenSet[int]]:
        """X^(0), X^(1), ... up to and including the first empty level."""
        cur = frozenset(self.points)
        out = [cur]
        while cur:
            nxt = self.derived(cur)
            if nxt == cur:
                raise AssertionError("a finite T1 space is scattered")
            cur = nxt
            out.append(cur)
        return out

    def van(self) -> int:
        return len(self.levels()) - 1

    def sch(self) -> int:
        for i, lev in enumerate(self.levels()):
            if len(lev) <= 1:
                return i
        raise AssertionError("unreachable")

    def level_size(self, a: int) -> int:
        levels = self.levels()
        return len(levels[a]) if a < len(levels) else 0


# -- stage scanning ----------------------------------------------------------

def _progression_sup(start: Ordinal, step: Ordinal) -> Ordinal:
    """sup_n (start + step*n) for step > 0, computed on CNF terms."""
    top = step.terms[0][0] + 1
    kept = [(x, c) for x, c in start.terms if cmp_ord(x, top) > 0]
    same = [c for x, c in start.terms if cmp_ord(x, top) == 0]
    return Ordinal(kept + [(top, same[0] + 1 if same else 1)])


@dataclass
class FamilyProfile:
    early: List[Ordinal]          # member heights before the progression settles
    eventual: Ordinal             # constant value, or the supremum when growing
    growing: bool


@dataclass
class StageOracle:
    window: int = 3
    max_members: int = 8
    _cache: Dict[str, Ordinal] = field(default_factory=dict)

    def profile(self, f: Family) -> FamilyProfile:
        vals = [self.van(f.member(k)) for k in range(self.max_members)]
        diffs = []
        for a, b in zip(vals, vals[1:]):
            if cmp_ord(b, a) < 0:
                diffs.append(None)
            else:
                diffs.append(left_difference(a, b))
        for k0 in range(len(diffs) - self.window + 1):
            tail = diffs[k0:]
            if tail[0] is not None and all(d == tail[0] for d in tail):
                d = tail[0]
                if d.is_zero():
                    return FamilyProfile(vals[:k0], vals[k0], False)
                return FamilyProfile(vals[:k0], _progression_sup(vals[k0], d), True)
        raise ValueError(f"member heights of {f.key} never settle: {vals}")

    def node_rank(self, t: Tree) -> Ordinal:
        cands = {ZERO.terms: ZERO}
        infinite: List[Ordinal] = []  # infinitely many child instances exceed g iff g < value
        for s in t.children:
            if isinstance(s, Family):
                p = self.profile(s)
                infinite.append(p.eventual)
                cands[p.eventual.terms] = p.eventual
            else:
                v = self.van(s.subtree)
                cands[v.terms] = v
                if is_infinite(s.mult):
                    infinite.append(v)
        for g in sorted(cands.values(), key=_SortKey):
            if not any(cmp_ord(g, v) < 0 for v in infinite):
                return g
        raise AssertionError("the largest candidate always qualifies")

    def van(self, x: Space) -> Ordinal:
        if isinstance(x, Forest):
            best = ZERO
            for t, _ in x.items:
                v = self.van(t)
                if cmp_ord(v, best) > 0:
                    best = v
            return best
        hit = self._cache.get(x.key)
        if hit is not None:
            return hit
        best = self.node_rank(x) + 1
        for s in x.children:
            vals = self.profile(s).early if isinstance(s, Family) else [self.van(s.subtree)]
            for v in vals:
                if cmp_ord(v, best) > 0:
                    best = v
        self._cache[x.key] = best
        return best

    def count_at_least(self, x: Space, a: Ordinal) -> Cardinal:
        """Number of points of rank >= a."""
        if isinstance(x, Forest):
            total: Cardinal = 0
            for t, n in x.items:
                total = card_add(total, card_mul(n, self.count_at_least(t, a)))
            return total
        total = 1 if cmp_ord(self.node_rank(x), a) >= 0 else 0
        for s in x.children:
            if isinstance(s, Family):
                p = self.profile(s)
                if cmp_ord(a, p.eventual) < 0:
                    total = card_add(total, Aleph(0))
                else:
                    for k in range(len(p.early)):
                        total = card_add(total, self.count_at_least(s.member(k), a))
            else:
                total = card_add(total, card_mul(s.mult, self.count_at_least(s.subtree, a)))
        return total

    def sch(self, x: Space) -> Ordinal:
        v = self.van(x)
        if v.is_zero():
            return ZERO
        lim, n = (Ordinal(v.terms[:-1]), v.terms[-1][1]) if v.terms[-1][0].is_zero() else (v, 0)
        assert n > 0, "compact spaces vanish at a successor stage"
        top = lim + (n - 1)
        c = self.count_at_least(x, top)
        return top if c == 1 else v


class _SortKey:
    __slots__ = ("o",)

    def __init__(self, o: Ordinal):
        self.o = o

    def __lt__(self, other: "_SortKey") -> bool:
        return cmp_ord(self.o, other.o) < 0


def derivative_chain(x: Space, limit: int = 64) -> Optional[int]:
    """Number of derivatives until the space is empty, or None beyond ``limit``."""
    from .derived import derived_forest

    cur = as_forest(x)
    for n in range(limit + 1):
        if cur.is_empty():
            return n
        cur = derived_forest(cur)
    return None
