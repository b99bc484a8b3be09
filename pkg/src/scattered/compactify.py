"""Presentations of scattered metrizable spaces and their compactifications.

A presentation is built from ``empty``, ``pt`` (a single point), ``sum``
(a topological sum over a discrete clopen cover, possibly with iterate
families of pieces) and ``pwb`` (a point ``a`` with a decreasing clopen base
whose successive differences are the prefix pieces followed by the tail
pieces repeated forever).

:func:`compactify` turns a presentation into a tree term by compactifying
the pieces and taking the Aleksandrov compactification of their sum; for
``pwb`` the point ``a`` becomes the root. The result carries a
:class:`DensityWitness` that records which tree positions are images of
presentation points.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Set, Tuple, Union

from .derived import DomainError, FamilyShapeError, progression_limit, sch_height
from .ordinal import (
    ZERO, Ordinal, add_ord, is_limit, left_difference, predecessor,
    split_limit_finite, sup_ord,
)
from .terms import (
    ALEPH0, HOLE, Aleph, Cardinal, Concrete, Family, Forest, Space, Tree,
    card_add, card_mul, child_instances, is_infinite, max_aleph_level,
)


# -- presentation AST --------------------------------------------------------

class Pres:
    key: str

    def __eq__(self, other):
        return isinstance(other, Pres) and self.key == other.key

    def __hash__(self):
        return hash(self.key)

    def __repr__(self):
        return f"<{self.key}>"

    def __str__(self):
        return self.key


class Empty(Pres):
    key = "empty"


class Point(Pres):
    key = "pt"


class PHole(Pres):
    key = "_"


EMPTY, PT, PHOLE = Empty(), Point(), PHole()


class PFamily:
    """Sum part ``{context^k(base) : k in omega}``, one copy of each member."""

    def __init__(self, context: Pres, base: Pres):
        if _holes(base):
            raise DomainError("family base may not contain a hole")
        if _holes(context) != 1:
            raise DomainError("family context must contain exactly one hole")
        if not isinstance(context, (Sum, PWB)):
            raise DomainError("family context must be a sum or a pwb")
        self.context, self.base = context, base
        self.key = f"fam({context.key}, {base.key})"

    def member(self, k: int) -> Pres:
        p = self.base
        for _ in range(k):
            p = substitute(self.context, p)
        return p

    def __eq__(self, other):
        return isinstance(other, PFamily) and self.key == other.key

    def __hash__(self):
        return hash(self.key)


class Sum(Pres):
    def __init__(self, parts=()):
        built = []
        for part in parts:
            if isinstance(part, PFamily):
                built.append(part)
            else:
                q, m = part
                if not isinstance(q, Pres):
                    raise DomainError(f"not a presentation: {q!r}")
                if not (isinstance(m, Aleph) or (isinstance(m, int) and m >= 1)):
                    raise DomainError(f"bad multiplicity {m!r}")
                built.append((q, m))
        built.sort(key=_part_key)
        self.parts = tuple(built)
        self.key = "sum(" + ", ".join(_part_key(p) for p in self.parts) + ")"


class PWB(Pres):
    def __init__(self, prefix=(), tail=()):
        self.prefix = tuple(prefix)
        self.tail = tuple(tail)
        pre = ", ".join(p.key for p in self.prefix)
        tl = ", ".join(p.key for p in self.tail)
        self.key = f"pwb([{pre} ; {tl}])"


def _part_key(part) -> str:
    if isinstance(part, PFamily):
        return part.key
    q, m = part
    return f"{q.key}^{m}"


def _holes(p: Pres) -> int:
    if isinstance(p, PHole):
        return 1
    if isinstance(p, Sum):
        return sum(_holes(q) for q, _ in (x for x in p.parts if not isinstance(x, PFamily)))
    if isinstance(p, PWB):
        return sum(_holes(q) for q in p.prefix + p.tail)
    return 0


def substitute(ctx: Pres, t: Pres) -> Pres:
    if isinstance(ctx, PHole):
        return t
    if isinstance(ctx, Sum):
        return Sum(x if isinstance(x, PFamily) else (substitute(x[0], t), x[1]) for x in ctx.parts)
    if isinstance(ctx, PWB):
        return PWB([substitute(q, t) for q in ctx.prefix], [substitute(q, t) for q in ctx.tail])
    return ctx


# -- topology of presentations ----------------------------------------------

_VAN: Dict[str, Ordinal] = {}


def _family_sup(f: PFamily) -> Ordinal:
    return progression_limit(lambda k: pres_van(f.member(k)), strict=True)


def _family_lim(f: PFamily) -> Ordinal:
    return progression_limit(lambda k: pres_van(f.member(k)))


def _base_rank(p: "PWB") -> Ordinal:
    return sup_ord(pres_van(q) for q in p.tail)


def pres_van(p: Pres) -> Ordinal:
    """Least g with X^(g) empty for the denoted space."""
    hit = _VAN.get(p.key)
    if hit is not None:
        return hit
    if isinstance(p, (Empty, PHole)):
        v = ZERO
    elif isinstance(p, Point):
        v = Ordinal.finite(1)
    elif isinstance(p, Sum):
        v = sup_ord(_family_sup(x) if isinstance(x, PFamily) else pres_van(x[0]) for x in p.parts)
    else:
        v = sup_ord([add_ord(_base_rank(p), 1)] + [pres_van(q) for q in p.prefix + p.tail])
    _VAN[p.key] = v
    return v


def pres_level(p: Pres, a: Ordinal) -> Cardinal:
    """Number of points of rank >= a."""
    if isinstance(p, (Empty, PHole)):
        return 0
    if isinstance(p, Point):
        return 1 if a.is_zero() else 0
    if isinstance(p, Sum):
        total: Cardinal = 0
        for x in p.parts:
            if isinstance(x, PFamily):
                if a < _family_lim(x):
                    total = card_add(total, ALEPH0)
            else:
                total = card_add(total, card_mul(x[1], pres_level(x[0], a)))
        return total
    total = 1 if _base_rank(p) >= a else 0
    for q in p.prefix:
        total = card_add(total, pres_level(q, a))
    for q in p.tail:
        total = card_add(total, card_mul(ALEPH0, pres_level(q, a)))
    return total


def sch_presentation(p: Pres) -> Ordinal:
    v = pres_van(p)
    if v.is_zero() or is_limit(v):
        return v
    top = predecessor(v)
    return top if pres_level(p, top) == 1 else v


def validate_presentation(p: Pres) -> Pres:
    """Check every family of pieces grows in height."""
    if isinstance(p, Sum):
        for x in p.parts:
            if isinstance(x, PFamily):
                v1, v2 = pres_van(x.member(1)), pres_van(x.member(2))
                if left_difference(v1, v2).is_zero():
                    raise FamilyShapeError(f"{x.key}: pieces do not grow in height")
                validate_presentation(x.base)
            else:
                validate_presentation(x[0])
    elif isinstance(p, PWB):
        for q in p.prefix + p.tail:
            validate_presentation(q)
    return p


def proof_case(p: Pres) -> int:
    """Which case of the compactification argument applies.

    0: at most one point; 1: limit height, empty top level; 2: successor
    height, empty top level; 3: the top level is a single point.
    """
    alpha = sch_presentation(p)
    if alpha.is_zero():
        return 0
    if pres_level(p, alpha) == 1:
        return 3
    return 1 if is_limit(alpha) else 2


def is_compact(p: Pres) -> bool:
    if isinstance(p, (Empty, Point)):
        return True
    if isinstance(p, Sum):
        return all(not isinstance(x, PFamily) and not is_infinite(x[1]) and is_compact(x[0]) for x in p.parts)
    if isinstance(p, PWB):
        return all(is_compact(q) for q in p.prefix + p.tail)
    return False


# -- compactification --------------------------------------------------------

Addr = Tuple


@dataclass
class DensityWitness:
    point_map: Dict[Addr, Addr] = field(default_factory=dict)
    added: Set[Addr] = field(default_factory=set)

    def to_json(self):
        return {
            "point_map": sorted([_addr_text(a), _addr_text(b)] for a, b in self.point_map.items()),
            "added": sorted(_addr_text(a) for a in self.added),
        }


def _addr_text(a: Addr) -> str:
    return "/" + "/".join(str(x) for x in a)


@dataclass
class _Piece:
    tree: Union[Tree, object]   # a Tree or HOLE
    mult: Cardinal
    wit: DensityWitness
    wrapped: bool = False   # an infinite sum wrapped with an added root


def _shift(w: DensityWitness, pres_prefix: Addr, tree_prefix: Addr) -> DensityWitness:
    return DensityWitness(
        {pres_prefix + a: tree_prefix + b for a, b in w.point_map.items()},
        {tree_prefix + b for b in w.added},
    )


def _attach(specs_with_wits) -> Tuple[List, List[DensityWitness]]:
    """Order specs canonically, remembering which witness lands at which index."""
    order = sorted(range(len(specs_with_wits)), key=lambda i: specs_with_wits[i][0].key)
    return [specs_with_wits[i][0] for i in order], [specs_with_wits[i][1] for i in order]


def _comp(p: Pres) -> List[_Piece]:
    if isinstance(p, Empty):
        return []
    if isinstance(p, Point):
        return [_Piece(Tree(), 1, DensityWitness({(): ()}))]
    if isinstance(p, PHole):
        return [_Piece(HOLE, 1, DensityWitness())]
    entries = []   # (spec, witness relative to the spec, pres prefix)
    if isinstance(p, Sum):
        for x, m, at in _flat_parts(p, 1, ()):
            if isinstance(x, PFamily):
                spec, w = _comp_family(x)
                if is_infinite(m):
                    if max_aleph_level(spec.context) > 0 or max_aleph_level(spec.base) > 0:
                        raise DomainError("an infinitely repeated family needs countable members")
                    m = 1  # one copy has a homeomorphic compactification
                copies = [at + ("c", r) for r in range(m)] if m > 1 else [at]
                entries.extend((spec, _shift(w, c, ())) for c in copies)
            else:
                for piece in _comp(x):
                    entries.append((Concrete(piece.tree, card_mul(m, piece.mult)), _shift(piece.wit, at, ())))
        total: Cardinal = 0
        for spec, _ in entries:
            total = card_add(total, ALEPH0 if isinstance(spec, Family) else spec.mult)
        if not is_infinite(total):
            specs, wits = _attach(entries)
            return [_Piece(s.subtree, s.mult, w) for s, w in zip(specs, wits)]
        specs, wits = _attach(entries)
        node = Tree(specs)
        wit = DensityWitness(added={()})
        for j, w in enumerate(wits):
            _merge_into(wit, _shift(w, (), (j,)))
        return [_Piece(node, 1, wit, True)]
    # pwb: the base point is the root
    for j, q in enumerate(p.prefix):
        for piece in _comp(q):
            entries.append((Concrete(piece.tree, piece.mult), _shift(piece.wit, ("p", j), ())))
    for j, q in enumerate(p.tail):
        for piece in _comp(q):
            entries.append((Concrete(piece.tree, card_mul(ALEPH0, piece.mult)), _shift(piece.wit, ("t", j), ())))
    specs, wits = _attach(entries)
    wit = DensityWitness({(): ()})
    for j, w in enumerate(wits):
        _merge_into(wit, _shift(w, (), (j,)))
    return [_Piece(Tree(specs), 1, wit)]


def _flat_parts(p: "Sum", m: Cardinal, at: Addr):
    """Clopen pieces of a sum with multiplicities multiplied out.

    A sum of sums is one sum, and the prefix pieces of a pwb are clopen, so
    ``pwb([p ; t])`` splits as ``p`` plus ``pwb([ ; t])``.
    """
    for i, x in enumerate(p.parts):
        if isinstance(x, PFamily):
            yield x, m, at + ("s", i)
        else:
            yield from _flat_piece(x[0], card_mul(m, x[1]), at + ("s", i))


def _flat_piece(q: Pres, m: Cardinal, at: Addr):
    if isinstance(q, Sum):
        yield from _flat_parts(q, m, at)
    elif isinstance(q, PWB) and q.prefix and not _holes(q):
        for j, r in enumerate(q.prefix):
            yield from _flat_piece(r, m, at + ("p", j))
        yield PWB([], q.tail), m, at
    else:
        yield q, m, at


def _merge_into(acc: DensityWitness, w: DensityWitness) -> None:
    for a, b in w.point_map.items():
        if a in acc.point_map:
            raise AssertionError(f"presentation address {a} mapped twice")
        acc.point_map[a] = b
    acc.added |= w.added


def _single(pieces: List[_Piece], what: str) -> _Piece:
    if len(pieces) != 1 or pieces[0].mult != 1:
        raise DomainError(f"{what} must compactify to a single tree")
    return pieces[0]


def _comp_family(f: PFamily) -> Tuple[Family, DensityWitness]:
    ctx = _single(_comp(f.context), "family context")
    base_pieces = _comp(f.base)
    if len(base_pieces) == 1 and base_pieces[0].mult == 1 and isinstance(base_pieces[0].tree, Tree):
        base = base_pieces[0]
    else:
        raise DomainError("family base must compactify to a single tree")
    w = DensityWitness()
    _merge_into(w, _shift(ctx.wit, ("ctx",), ("ctx",)))
    _merge_into(w, _shift(base.wit, ("base",), ("base",)))
    return Family(ctx.tree, base.tree), w


@dataclass
class Compactification:
    presentation: Pres
    space: Space
    witness: DensityWitness
    alpha: Ordinal
    case: int


def compactify(p: Pres) -> Compactification:
    pieces = _comp(p)
    # an infinite sum or a pwb comes back as one rooted tree; a finite sum stays a forest
    if isinstance(p, (Point, PWB)) or (len(pieces) == 1 and pieces[0].wrapped):
        space: Space = pieces[0].tree
        wit = pieces[0].wit
    else:
        order = sorted(range(len(pieces)), key=lambda i: (pieces[i].tree.key, pieces[i].mult))
        space = Forest((pieces[i].tree, pieces[i].mult) for i in order)
        wit = DensityWitness()
        for j, i in enumerate(order):
            _merge_into(wit, _shift(pieces[i].wit, (), (j,)))
    return Compactification(p, space, wit, sch_presentation(p), proof_case(p))


def bound(alpha: Ordinal) -> Ordinal:
    """alpha + n(alpha) + 1."""
    _, n = split_limit_finite(alpha)
    return add_ord(add_ord(alpha, n), 1)


def check_bound(c: Compactification) -> bool:
    return not sch_height(c.space) > bound(c.alpha)


# -- density -----------------------------------------------------------------

def tree_positions(x: Space) -> Dict[Addr, Tree]:
    """Every node position of the term (families expanded into context and base)."""
    out: Dict[Addr, Tree] = {}

    def walk(t: Tree, at: Addr) -> None:
        out[at] = t
        for j, s in enumerate(t.children):
            if isinstance(s, Family):
                walk(s.context, at + (j, "ctx"))
                walk(s.base, at + (j, "base"))
            elif isinstance(s.subtree, Tree):
                walk(s.subtree, at + (j,))

    if isinstance(x, Tree):
        walk(x, ())
    else:
        for i, (t, _) in enumerate(x.items):
            walk(t, (i,))
    return out


def check_dense(w: DensityWitness, x: Space) -> bool:
    """Injective point map, leaves all hit, every added node a limit of image points."""
    positions = tree_positions(x)
    images = list(w.point_map.values())
    if len(set(images)) != len(images):
        return False
    image = set(images)
    if not image.isdisjoint(w.added) or (image | w.added) != set(positions):
        return False
    for at, t in positions.items():
        if t.is_leaf() and at not in image:
            return False
    return all(is_infinite(child_instances(positions[at])) for at in w.added)


def direct_tree(p: Pres) -> Space:
    """Encoding of an already-compact presentation without any added points."""
    if not is_compact(p):
        raise DomainError("presentation is not compact")
    if isinstance(p, Empty):
        return Forest()
    if isinstance(p, Point):
        return Tree()
    if isinstance(p, PWB):
        specs = [Concrete(t, n) for q in p.prefix for t, n in _items(q)]
        specs += [Concrete(t, ALEPH0) for q in p.tail for t, _ in _items(q)]
        return Tree(specs)
    return Forest((t, card_mul(m, n)) for q, m in p.parts for t, n in _items(q))


def _items(p: Pres) -> List[Tuple[Tree, int]]:
    d = direct_tree(p)
    return [(d, 1)] if isinstance(d, Tree) else list(d.items)
