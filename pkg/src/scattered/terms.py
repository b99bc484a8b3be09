"""Term encoding of the compacta in the class A.

A :class:`Tree` is a node together with a finite multiset of child specs; the
node is the compactifying point of the topological sum of its children. A
child spec is either :class:`Concrete` (one subtree repeated ``mult`` times)
or :class:`Family` (the omega-indexed sequence ``context^k(base)``, one copy
each). A :class:`Forest` is a finite disjoint sum of trees.

Points of the encoded space are the node instances. Basic neighbourhoods of a
node are its subtree minus finitely many child-subtree instances, so a node
is isolated iff it has finitely many child instances.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, List, Sequence, Tuple, Union


class TermError(ValueError):
    """Malformed term (bad multiplicity, misplaced hole, ...)."""


# -- cardinals ---------------------------------------------------------------

@dataclass(frozen=True, order=True)
class Aleph:
    level: int = 0

    def __post_init__(self):
        if self.level < 0:
            raise TermError("aleph level must be a natural number")

    def __str__(self):
        return "w" if self.level == 0 else f"a{self.level}"


ALEPH0 = Aleph(0)
Cardinal = Union[int, Aleph]
Mult = Cardinal


def is_infinite(c: Cardinal) -> bool:
    return isinstance(c, Aleph)


def card_add(a: Cardinal, b: Cardinal) -> Cardinal:
    if isinstance(a, Aleph) or isinstance(b, Aleph):
        return Aleph(max(_level(a), _level(b)))
    return a + b


def card_mul(a: Cardinal, b: Cardinal) -> Cardinal:
    if a == 0 or b == 0:
        return 0
    if isinstance(a, Aleph) or isinstance(b, Aleph):
        return Aleph(max(_level(a), _level(b)))
    return a * b


def _level(c: Cardinal) -> int:
    return c.level if isinstance(c, Aleph) else -1


def card_sum(cs: Iterable[Cardinal]) -> Cardinal:
    total: Cardinal = 0
    for c in cs:
        total = card_add(total, c)
    return total


def card_text(c: Cardinal) -> str:
    return str(c)


def card_json(c: Cardinal):
    return c if isinstance(c, int) else str(c)


def _check_mult(m) -> Mult:
    if isinstance(m, Aleph):
        return m
    if isinstance(m, int) and not isinstance(m, bool) and m >= 1:
        return m
    raise TermError(f"multiplicity must be a positive integer or an aleph, got {m!r}")


# -- terms -------------------------------------------------------------------

class _Hole:
    """The hole of a tree context. Printed as ``_``."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    key = "_"

    def __repr__(self):
        return "HOLE"

    def __reduce__(self):
        return (_Hole, ())


HOLE = _Hole()


class Tree:
    """Rooted tree term; children are kept in canonical (key) order."""

    __slots__ = ("children", "key", "_hash")

    def __init__(self, children: Iterable["Spec"] = ()):
        specs = list(children)
        for s in specs:
            if not isinstance(s, (Concrete, Family)):
                raise TermError(f"not a child spec: {s!r}")
        specs.sort(key=lambda s: s.key)
        self.children: Tuple[Spec, ...] = tuple(specs)
        if self.children:
            self.key = "A(" + ", ".join(s.key for s in self.children) + ")"
        else:
            self.key = "1"
        self._hash = hash(self.key)

    def is_leaf(self) -> bool:
        return not self.children

    def __eq__(self, other):
        return isinstance(other, Tree) and self.key == other.key

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"Tree({self.key})"

    def __str__(self):
        return self.key


LEAF = Tree()


class Concrete:
    __slots__ = ("subtree", "mult", "key")

    def __init__(self, subtree: Union[Tree, _Hole], mult: Mult = 1):
        if not isinstance(subtree, (Tree, _Hole)):
            raise TermError(f"not a tree: {subtree!r}")
        self.subtree = subtree
        self.mult = _check_mult(mult)
        self.key = f"{subtree.key}^{self.mult}"

    def __eq__(self, other):
        return isinstance(other, Concrete) and self.key == other.key

    def __hash__(self):
        return hash(self.key)

    def __repr__(self):
        return f"Concrete({self.key})"


class Family:
    """Iterate family ``{context^k(base) : k in omega}``; the context holds exactly one hole."""

    __slots__ = ("context", "base", "key")

    def __init__(self, context: Tree, base: Tree):
        if not isinstance(context, Tree) or not isinstance(base, Tree):
            raise TermError("family context and base must be trees")
        if hole_count(base):
            raise TermError("family base may not contain a hole")
        if hole_count(context) != 1:
            raise TermError("family context must contain exactly one hole")
        self.context = context
        self.base = base
        self.key = f"fam({context.key}, {base.key})"

    def member(self, k: int) -> Tree:
        return _member(self.context, self.base, k)

    def __eq__(self, other):
        return isinstance(other, Family) and self.key == other.key

    def __hash__(self):
        return hash(self.key)

    def __repr__(self):
        return f"Family({self.key})"


Spec = Union[Concrete, Family]


class Forest:
    """Finite disjoint sum; ``items`` are ``(tree, n)`` with ``n`` a positive integer."""

    __slots__ = ("items", "key", "_hash")

    def __init__(self, items: Iterable[Tuple[Tree, int]] = ()):
        built = []
        for t, n in items:
            if not isinstance(t, Tree):
                raise TermError(f"forest item is not a tree: {t!r}")
            if hole_count(t):
                raise TermError("forest trees may not contain holes")
            if isinstance(n, Aleph) or not isinstance(n, int) or n < 1:
                raise TermError(f"forest multiplicities must be positive integers, got {n!r}")
            built.append((t, n))
        built.sort(key=lambda it: (it[0].key, it[1]))
        self.items: Tuple[Tuple[Tree, int], ...] = tuple(built)
        self.key = "F[" + ", ".join(f"({t.key},{n})" for t, n in self.items) + "]"
        self._hash = hash(self.key)

    def is_empty(self) -> bool:
        return not self.items

    def instance_count(self) -> int:
        return sum(n for _, n in self.items)

    def __eq__(self, other):
        return isinstance(other, Forest) and self.key == other.key

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"Forest({self.key})"

    def __str__(self):
        return self.key


Space = Union[Tree, Forest]


# -- structural helpers ------------------------------------------------------

@lru_cache(maxsize=None)
def hole_count(t: Tree) -> int:
    n = 0
    for s in t.children:
        if isinstance(s, Family):
            continue  # validated on construction to be hole-free in base
        if s.subtree is HOLE:
            n += 1
        else:
            n += hole_count(s.subtree)
    return n


def contains_hole(t) -> bool:
    return t is HOLE or (isinstance(t, Tree) and hole_count(t) > 0)


def splice(context: Tree, items: Sequence[Tuple[Union[Tree, _Hole], Mult]]) -> Tree:
    """Replace the hole slot ``_^v`` of ``context`` by ``T^(v*n)`` for each ``(T, n)`` in ``items``."""
    specs: List[Spec] = []
    for s in context.children:
        if isinstance(s, Concrete) and s.subtree is HOLE:
            specs.extend(Concrete(t, card_mul(s.mult, n)) for t, n in items)
        elif isinstance(s, Concrete) and contains_hole(s.subtree):
            specs.append(Concrete(splice(s.subtree, items), s.mult))
        else:
            specs.append(s)
    return Tree(specs)


def substitute(context: Tree, t: Tree) -> Tree:
    return splice(context, [(t, 1)])


@lru_cache(maxsize=None)
def _member(context: Tree, base: Tree, k: int) -> Tree:
    if k == 0:
        return base
    return substitute(context, _member(context, base, k - 1))


def child_instances(t: Tree) -> Cardinal:
    total: Cardinal = 0
    for s in t.children:
        total = card_add(total, ALEPH0 if isinstance(s, Family) else s.mult)
    return total


def is_isolated_root(t: Tree) -> bool:
    """True iff the root has finitely many child instances."""
    return not is_infinite(child_instances(t))


def aleksandrov(parts: Union[Forest, Iterable[Spec]]) -> Space:
    """One-point compactification of a sum; adds no point when the sum is already compact."""
    if isinstance(parts, Forest):
        specs = [Concrete(t, n) for t, n in parts.items]
    else:
        specs = list(parts)
    node = Tree(specs)
    if is_isolated_root(node):
        return Forest((s.subtree, s.mult) for s in specs)
    return node


def as_forest(x: Space) -> Forest:
    return x if isinstance(x, Forest) else Forest([(x, 1)])


@lru_cache(maxsize=None)
def max_aleph_level(t: Tree) -> int:
    """Largest aleph level anywhere in the term, -1 if none."""
    best = -1
    for s in t.children:
        if isinstance(s, Family):
            best = max(best, max_aleph_level(s.context), max_aleph_level(s.base), 0)
        else:
            if isinstance(s.mult, Aleph):
                best = max(best, s.mult.level)
            if isinstance(s.subtree, Tree):
                best = max(best, max_aleph_level(s.subtree))
    return best


def is_countable(x: Space) -> bool:
    return all(max_aleph_level(t) <= 0 for t, _ in as_forest(x).items)


def has_family(t: Tree) -> bool:
    return any(isinstance(s, Family) or (isinstance(s.subtree, Tree) and has_family(s.subtree))
               for s in t.children)


def depth(t: Tree) -> int:
    """Number of levels: a leaf has depth 1."""
    best = 0
    for s in t.children:
        if isinstance(s, Family):
            best = max(best, depth(s.base), depth(s.context))
        elif isinstance(s.subtree, Tree):
            best = max(best, depth(s.subtree))
        else:
            best = max(best, 1)
    return best + 1


def find_leaf(x: Space):
    """Path to some leaf (an isolated point), or None for the empty space."""
    for i, (t, _) in enumerate(as_forest(x).items):
        path = [i]
        while t.children:
            s = t.children[0]
            path.append(0)
            t = s.member(0) if isinstance(s, Family) else s.subtree
        return tuple(path)
    return None
