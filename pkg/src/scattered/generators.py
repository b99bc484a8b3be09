"""Seeded random and exhaustive generators for terms, ordinals and presentations."""

from __future__ import annotations

import itertools
import os
import random
from typing import Iterator, List, Sequence

from .ordinal import Ordinal
from .terms import ALEPH0, Aleph, Concrete, Family, Forest, HOLE, Tree

DEFAULT_MAX_DEPTH = 4


def max_depth(default: int = DEFAULT_MAX_DEPTH) -> int:
    """Generator depth cap, overridable through ``SC_MAX_DEPTH``."""
    raw = os.environ.get("SC_MAX_DEPTH")
    return int(raw) if raw else default


def random_ordinal(rng: random.Random, depth: int = 2, max_terms: int = 3, max_coeff: int = 5) -> Ordinal:
    if depth <= 0:
        return Ordinal.finite(rng.randint(0, max_coeff))
    exps = {random_ordinal(rng, depth - 1, max_terms, max_coeff) for _ in range(rng.randint(0, max_terms))}
    exps = sorted(exps, reverse=True)
    return Ordinal([(e, rng.randint(1, max_coeff)) for e in exps])


def random_tree(rng: random.Random, depth: int = 4, mults: Sequence = (1, 2, ALEPH0),
                branching: int = 3, families: bool = False) -> Tree:
    """Random family-free (unless ``families``) tree with at most ``depth`` levels."""
    if depth <= 1 or rng.random() < 0.25:
        return Tree()
    specs = []
    for _ in range(rng.randint(1, branching)):
        if families and depth >= 3 and rng.random() < 0.15:
            specs.append(random_family(rng, depth - 1))
        else:
            specs.append(Concrete(random_tree(rng, depth - 1, mults, branching, families), rng.choice(mults)))
    return Tree(specs)


_CONTEXTS = (
    Tree([Concrete(HOLE, ALEPH0)]),
    Tree([Concrete(HOLE, ALEPH0), Concrete(Tree(), ALEPH0)]),
    Tree([Concrete(HOLE, ALEPH0), Concrete(Tree(), 2)]),
    Tree([Concrete(Tree([Concrete(HOLE, 1), Concrete(Tree(), 1)]), ALEPH0)]),
    Tree([Concrete(Tree([Concrete(HOLE, ALEPH0)]), 2), Concrete(Tree(), ALEPH0)]),
)


def random_family(rng: random.Random, depth: int = 3) -> Family:
    ctx = rng.choice(_CONTEXTS)
    base = random_tree(rng, max(1, depth - 1), (1, ALEPH0), 2)
    return Family(ctx, base)


def random_forest(rng: random.Random, depth: int = 3, **kw) -> Forest:
    return Forest((random_tree(rng, depth, **kw), rng.randint(1, 3)) for _ in range(rng.randint(0, 3)))


def enumerate_finite_trees(depth: int, branching: int, max_mult: int) -> List[Tree]:
    """All family-free trees with finite multiplicities up to the given bounds.

    Children form a multiset of between 1 and ``branching`` specs.
    """
    if depth <= 1:
        return [Tree()]
    smaller = enumerate_finite_trees(depth - 1, branching, max_mult)
    specs = [Concrete(t, m) for t in smaller for m in range(1, max_mult + 1)]
    out = [Tree()]
    seen = {Tree().key}
    for k in range(1, branching + 1):
        for combo in itertools.combinations_with_replacement(range(len(specs)), k):
            t = Tree(specs[i] for i in combo)
            if t.key not in seen:
                seen.add(t.key)
                out.append(t)
    return out


def iter_random_trees(seed: int, count: int, **kw) -> Iterator[Tree]:
    rng = random.Random(seed)
    for _ in range(count):
        yield random_tree(rng, **kw)


def aleph_tree(rng: random.Random, depth: int = 3) -> Tree:
    return random_tree(rng, depth, (1, 2, ALEPH0, Aleph(1)))



# -- presentations -----------------------------------------------------------

def _pres_contexts():
    from .compactify import PHOLE, PT, PWB, Sum

    return (
        PWB([], [PHOLE]),
        PWB([PT], [PHOLE]),
        PWB([], [PHOLE, PT]),
        PWB([], [Sum([(PHOLE, 2)])]),
    )


def random_presentation(rng: random.Random, depth: int = 3, families: bool = True):
    """Random presentation; families of pieces use contexts that grow in height."""
    from .compactify import EMPTY, PT, PFamily, PWB, Sum

    if depth <= 1:
        return PT if rng.random() < 0.9 else EMPTY
    r = rng.random()
    if r < 0.15:
        return PT
    if r < 0.6:
        parts = []
        for _ in range(rng.randint(1, 3)):
            if families and rng.random() < 0.25:
                parts.append(PFamily(rng.choice(_pres_contexts()), _single_tree_presentation(rng, depth - 2)))
            else:
                parts.append((random_presentation(rng, depth - 1, families), rng.choice((1, 2, ALEPH0))))
        return Sum(parts)
    prefix = [random_presentation(rng, depth - 1, families) for _ in range(rng.randint(0, 2))]
    tail = [random_presentation(rng, depth - 1, families) for _ in range(rng.randint(1, 2))]
    return PWB(prefix, tail)


def _single_tree_presentation(rng: random.Random, depth: int):
    """A presentation whose compactification is one rooted tree (a family base)."""
    from .compactify import PT, PWB

    if depth <= 1 or rng.random() < 0.4:
        return PT
    return PWB([random_presentation(rng, depth - 1, False) for _ in range(rng.randint(0, 1))],
               [random_presentation(rng, depth - 1, False)])


def case_presentations():
    """Fixed presentations hitting every compactification case, including height w."""
    from .compactify import EMPTY, PT, PFamily, PHOLE, PWB, Sum

    return [
        EMPTY,
        PT,
        Sum([(PT, ALEPH0)]),
        Sum([(PT, 2)]),
        PWB([], [PT]),
        Sum([PFamily(PWB([], [PHOLE]), PT)]),
        Sum([PFamily(PWB([PT], [PHOLE]), PT), (PT, 3)]),
        PWB([PT], [Sum([PFamily(PWB([], [PHOLE]), PT)])]),
    ]
