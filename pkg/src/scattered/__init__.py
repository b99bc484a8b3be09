"""Scattered compacta: ordinals, tree-encoded spaces, compactifications and embeddings."""

from .compactify import (
    EMPTY, PHOLE, PT, Compactification, DensityWitness, PFamily, PWB, Sum,
    check_bound, check_dense, compactify, proof_case, sch_presentation,
)
from .derived import (
    DomainError, FamilyShapeError, MSInvariant, derived_forest, homeo_countable,
    level_size, ms_invariant, ordinal_tree, point_count, rep_complexity,
    sch_height, van_rank,
)
from .dsl import ParseError, parse_expr, print_expr
from .embeddings import (
    HedgehogPoint, SymbolicSequence, cantor_phi, closure_check_hedgehog,
    hedgehog_embed, hilbert_embed, sigma_embed, weak_limit,
)
from .normalize import normalize
from .ordinal import (
    OMEGA, ONE, ZERO, Ordinal, add_ord, cmp_ord, is_limit, mul_by_omega,
    split_limit_finite, sup_ord,
)
from .terms import ALEPH0, HOLE, LEAF, Aleph, Concrete, Family, Forest, Tree, aleksandrov

__all__ = [name for name in dir() if not name.startswith("_")]
