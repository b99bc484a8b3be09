"""Explicit embeddings: sigma-product, weighted Hilbert paths and the hedgehog.

Vectors are finitely supported and stored as plain dicts ``coordinate ->
value``; absent coordinates are zero. Tree nodes are addressed by tuples of
steps ``(spec_index, copy_or_member_index)`` from the root.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, Hashable, Iterator, List, Optional, Sequence, Tuple

from .terms import Aleph, Family, Tree

Vector = Dict[Hashable, object]
Address = Tuple[Tuple[int, int], ...]


class EmbeddingError(ValueError):
    pass


# -- vector helpers ----------------------------------------------------------

def sq_norm(v: Vector):
    return sum(x * x for x in v.values())


def norm(v: Vector) -> float:
    return math.sqrt(sq_norm(v))


def sq_dist(u: Vector, v: Vector):
    return sum((u.get(k, 0) - v.get(k, 0)) ** 2 for k in set(u) | set(v))


# -- tree navigation ---------------------------------------------------------

def child_tree(t: Tree, step: Tuple[int, int]) -> Tree:
    j, i = step
    if not 0 <= j < len(t.children):
        raise EmbeddingError(f"no child spec {j}")
    s = t.children[j]
    if isinstance(s, Family):
        if i < 0:
            raise EmbeddingError("member index must be non-negative")
        return s.member(i)
    if i < 0 or (not isinstance(s.mult, Aleph) and i >= s.mult):
        raise EmbeddingError(f"copy {i} out of range for multiplicity {s.mult}")
    return s.subtree


def node_at(t: Tree, addr: Address) -> Tree:
    for step in addr:
        t = child_tree(t, step)
    return t


def truncated_nodes(t: Tree, copies: int = 2, members: int = 3, max_depth: int = 8) -> List[Address]:
    """Addresses of a finite truncation: at most ``copies`` per infinite spec, ``members`` per family."""
    out: List[Address] = []

    def walk(node: Tree, at: Address) -> None:
        out.append(at)
        if len(at) >= max_depth:
            return
        for j, s in enumerate(node.children):
            if isinstance(s, Family):
                n = members
            else:
                n = copies if isinstance(s.mult, Aleph) else min(s.mult, copies)
            for i in range(n):
                walk(child_tree(node, (j, i)), at + ((j, i),))

    walk(t, ())
    return out


def infinite_steps(t: Tree) -> List[int]:
    """Indices of child specs with infinitely many instances."""
    return [j for j, s in enumerate(t.children) if isinstance(s, Family) or isinstance(s.mult, Aleph)]


def random_descent(t: Tree, at: Address, rng: random.Random, stop: float = 0.5, max_depth: int = 6) -> Address:
    node = node_at(t, at)
    while node.children and len(at) < max_depth and rng.random() > stop:
        j = rng.randrange(len(node.children))
        s = node.children[j]
        bound = 4 if isinstance(s, Family) or isinstance(s.mult, Aleph) else s.mult
        step = (j, rng.randrange(bound))
        at = at + (step,)
        node = child_tree(node, step)
    return at


def sample_through_children(t: Tree, at: Address, rng: random.Random, length: int = 20) -> List[Address]:
    """Points taken from pairwise distinct child instances of the node at ``at``."""
    node = node_at(t, at)
    inf = infinite_steps(node)
    if not inf:
        raise EmbeddingError("node has finitely many child instances")
    j = rng.choice(inf)
    start = rng.randrange(5)
    return [random_descent(t, at + ((j, start + n),), rng) for n in range(length)]


# -- sigma product and Hilbert paths ----------------------------------------

def sigma_embed(t: Tree, addr: Address) -> Vector:
    """0/1 indicator of the ancestors of the node (itself included)."""
    node_at(t, addr)
    return {addr[:i]: 1 for i in range(len(addr) + 1)}


def hilbert_embed(t: Tree, addr: Address, weight_base=Fraction(1, 2)) -> Vector:
    """Weighted path vector: ``weight_base**depth(u)`` on every non-root ancestor ``u``.

    The root goes to the origin and every other node lands in the open ball
    of radius ``weight_base / sqrt(1 - weight_base**2)``.
    """
    if not 0 < weight_base < 1:
        raise EmbeddingError("weight_base must lie in (0, 1)")
    node_at(t, addr)
    return {addr[:i]: weight_base ** i for i in range(1, len(addr) + 1)}


def hilbert_bound(weight_base=Fraction(1, 2)) -> float:
    w = float(weight_base)
    return w / math.sqrt(1 - w * w)


def converges_to(points: Sequence[Vector], target: Vector, bound: Optional[float] = None) -> bool:
    """Finite-sample weak convergence check for a sequence through distinct child instances.

    Each coordinate may disagree with the target at no more than one index
    (it lives inside a single child instance), and norms stay bounded.
    """
    coords = set(target).union(*points) if points else set(target)
    for c in coords:
        want = target.get(c, 0)
        if sum(1 for p in points if p.get(c, 0) != want) > 1:
            return False
    if bound is not None and any(norm(p) > bound + 1e-12 for p in points):
        return False
    return True


# -- hedgehog ----------------------------------------------------------------

LEFT, RIGHT = math.pi / 6, math.pi / 3


def cantor_phi(bits: str) -> float:
    """Middle-thirds coding of a binary string into [pi/6, pi/3]."""
    total = 0.0
    for i, b in enumerate(bits, start=1):
        if b not in "01":
            raise EmbeddingError(f"not a binary string: {bits!r}")
        total += 2 * int(b) * 3.0 ** (-i)
    return LEFT + (math.pi / 6) * total


def spine_code(spine: int, kappa: int) -> str:
    width = max(1, (kappa - 1).bit_length())
    return format(spine, f"0{width}b")


def spine_angle(spine: int, kappa: int) -> float:
    return cantor_phi(spine_code(spine, kappa))


def in_cantor_angles(phi: float, tol: float = 1e-9, depth: int = 15) -> bool:
    x = (phi - LEFT) / (math.pi / 6)
    if x < -tol or x > 1 + tol:
        return False
    for _ in range(depth):
        if x <= 1 / 3 + tol:
            x = 3 * x
        elif x >= 2 / 3 - tol:
            x = 3 * x - 2
        else:
            return False
        tol *= 3
    return True


@dataclass(frozen=True)
class HedgehogPoint:
    t: float
    spine: int


def hedgehog_embed(p: HedgehogPoint, kappa: int) -> Vector:
    """cos(t) e_{k+1} + sin(t) (cos(phi) e_k + sin(phi) e_spine), coordinates k = kappa."""
    if not 0 <= p.t <= 1:
        raise EmbeddingError(f"t={p.t} outside [0, 1]")
    if not 0 <= p.spine < kappa:
        raise EmbeddingError(f"spine {p.spine} outside 0..{kappa - 1}")
    phi = spine_angle(p.spine, kappa)
    s = math.sin(p.t)
    v = {kappa + 1: math.cos(p.t), kappa: s * math.cos(phi), p.spine: s * math.sin(phi)}
    return {k: x for k, x in v.items() if x != 0.0}


def hedgehog_matrix(points: Sequence[HedgehogPoint], kappa: int):
    import numpy as np

    m = np.zeros((len(points), kappa + 2))
    for i, p in enumerate(points):
        for k, x in hedgehog_embed(p, kappa).items():
            m[i, k] = x
    return m


def sample_hedgehog(kappa: int, n: int, seed: int) -> List[HedgehogPoint]:
    """Distinct points with t in (0, 1]."""
    rng = random.Random(seed)
    seen = set()
    out = []
    while len(out) < n:
        p = HedgehogPoint(1.0 - rng.random(), rng.randrange(kappa))
        if p not in seen:
            seen.add(p)
            out.append(p)
    return out


def min_pairwise_distance(m, chunk: int = 1000) -> float:
    """Smallest distance between distinct rows (Gram form, exact recheck of near ties)."""
    import numpy as np

    sq = (m * m).sum(axis=1)
    best = math.inf
    for lo in range(0, len(m), chunk):
        block = m[lo:lo + chunk]
        d2 = sq[lo:lo + chunk, None] + sq[None, :] - 2.0 * block @ m.T
        for r in range(block.shape[0]):
            d2[r, lo + r] = np.inf
        i, j = np.unravel_index(np.argmin(d2), d2.shape)
        exact = float(np.sqrt(((block[i] - m[j]) ** 2).sum()))
        near = np.argwhere(d2 < 1e-8)
        for a, b in near:
            exact = min(exact, float(np.sqrt(((block[a] - m[b]) ** 2).sum())))
        best = min(best, exact)
    return best


# -- symbolic sequences and weak limits --------------------------------------

class IllFormedSequence(ValueError):
    pass


@dataclass(frozen=True)
class Coeff:
    """A scalar sequence described by a rule, its limit (None if divergent) and a bound on |value|."""

    fn: Callable[[int], float]
    limit: Optional[float]
    bound: float

    @classmethod
    def const(cls, c: float) -> "Coeff":
        return cls(lambda n, c=c: c, c, abs(c))

    @classmethod
    def converging(cls, fn: Callable[[int], float], limit: float, bound: float) -> "Coeff":
        return cls(fn, limit, bound)

    @classmethod
    def cycle(cls, values: Sequence[float]) -> "Coeff":
        vals = tuple(values)
        lim = vals[0] if len(set(vals)) == 1 else None
        return cls(lambda n, vals=vals: vals[n % len(vals)], lim, max(abs(v) for v in vals))

    @classmethod
    def unbounded(cls, fn: Callable[[int], float]) -> "Coeff":
        return cls(fn, None, math.inf)


@dataclass
class SymbolicSequence:
    """x_n = sum of fixed coordinates plus drift terms placed on a fresh coordinate at each n."""

    fixed: Dict[Hashable, Coeff] = field(default_factory=dict)
    drift: List[Coeff] = field(default_factory=list)
    norm_bound: float = 1.0

    def check(self) -> None:
        total = sum(c.bound ** 2 for c in self.fixed.values()) + sum(c.bound ** 2 for c in self.drift)
        if not math.isfinite(total) or math.sqrt(total) > self.norm_bound + 1e-12:
            raise IllFormedSequence("norms are not bounded by the declared bound")

    def term(self, n: int, drift_until: Optional[int] = None) -> Vector:
        v: Vector = {c: k.fn(n) for c, k in self.fixed.items()}
        if drift_until is None or n < drift_until:
            for j, k in enumerate(self.drift):
                v[("fresh", j, n)] = k.fn(n)
        return {c: x for c, x in v.items() if x != 0}


DIVERGENT = None


def weak_limit(s: SymbolicSequence) -> Optional[Vector]:
    """Coordinatewise limit of a bounded sequence; ``None`` when some coordinate diverges.

    Drift terms move to a new coordinate at every index, so each fixed
    coordinate sees them at most once and they vanish in the limit.
    """
    s.check()
    out: Vector = {}
    for c, k in s.fixed.items():
        if k.limit is None:
            return DIVERGENT
        if k.limit != 0:
            out[c] = k.limit
    return out


def brute_force_limit(s: SymbolicSequence, drift_until: int = 1000, length: int = 4000,
                      tail: int = 50, tol: float = 1e-3) -> Optional[Vector]:
    """Materialise the truncated sequence and read off coordinatewise limits numerically."""
    terms = [s.term(n, drift_until) for n in range(length)]
    coords = set().union(*terms)
    out: Vector = {}
    for c in coords:
        vals = [t.get(c, 0.0) for t in terms[-tail:]]
        if max(vals) - min(vals) > tol:
            return DIVERGENT
        if abs(vals[-1]) > tol:
            out[c] = vals[-1]
    return out


def hedgehog_fixed_spine(kappa: int, spine: int, t: float, start: float) -> SymbolicSequence:
    """t_n = t + (start - t)/(n+1) along one spine."""
    phi = spine_angle(spine, kappa)
    tn = lambda n: t + (start - t) / (n + 1)
    return SymbolicSequence({
        kappa + 1: Coeff.converging(lambda n: math.cos(tn(n)), math.cos(t), 1.0),
        kappa: Coeff.converging(lambda n: math.sin(tn(n)) * math.cos(phi), math.sin(t) * math.cos(phi), 1.0),
        spine: Coeff.converging(lambda n: math.sin(tn(n)) * math.sin(phi), math.sin(t) * math.sin(phi), 1.0),
    }, norm_bound=math.sqrt(3.0))


def hedgehog_drifting(kappa: int, bits: str, t: float, start: float, rng_seed: int) -> SymbolicSequence:
    """Pairwise distinct spines whose codes agree with ``bits`` on ever longer prefixes.

    The spine coordinate is fresh at every index (as in the uncountable
    hedgehog); its angle tends to ``cantor_phi(bits)``.
    """
    rng = random.Random(rng_seed)
    tails = ["".join(rng.choice("01") for _ in range(8)) for _ in range(64)]

    def phi(n: int) -> float:
        k = min(n, len(bits))
        return cantor_phi(bits[:k] + tails[n % len(tails)])

    tn = lambda n: t + (start - t) / (n + 1)
    lim = cantor_phi(bits)
    return SymbolicSequence(
        {
            kappa + 1: Coeff.converging(lambda n: math.cos(tn(n)), math.cos(t), 1.0),
            kappa: Coeff.converging(lambda n: math.sin(tn(n)) * math.cos(phi(n)), math.sin(t) * math.cos(lim), 1.0),
        },
        drift=[Coeff.converging(lambda n: math.sin(tn(n)) * math.sin(phi(n)), 0.0, 1.0)],
        norm_bound=math.sqrt(3.0),
    )


def classify_hedgehog_limit(v: Vector, kappa: int, tol: float = 1e-9) -> str:
    """'image' (a point f(t e_a)), 'added-part' (cos t e_{k+1} + sin t cos phi e_k), or 'fail'."""
    top = v.get(kappa + 1, 0.0)
    mid = v.get(kappa, 0.0)
    others = {c: x for c, x in v.items() if c not in (kappa, kappa + 1) and abs(x) > tol}
    if not -1 - tol <= top <= 1 + tol:
        return "fail"
    t = math.acos(max(-1.0, min(1.0, top)))
    if t > 1 + tol:
        return "fail"
    if len(others) == 1:
        (c, _), = others.items()
        if not isinstance(c, int) or not 0 <= c < kappa:
            return "fail"
        want = hedgehog_embed(HedgehogPoint(min(t, 1.0), c), kappa)
        return "image" if sq_dist(want, v) <= tol else "fail"
    if others:
        return "fail"
    if math.sin(t) < tol:
        return "image" if abs(mid) <= tol else "fail"
    c = mid / math.sin(t)
    if not -1 <= c <= 1:
        return "fail"
    return "added-part" if in_cantor_angles(math.acos(c), tol=1e-7) else "fail"


def closure_check_hedgehog(kappa: int, trials: int, seed: int = 0) -> dict:
    """Weak limits of sampled hedgehog sequences, each classified into the closure set."""
    rng = random.Random(seed)
    width = 40
    report = []
    kinds = ("fixed-spine", "drifting", "center", "witness")
    for i in range(trials):
        kind = kinds[i % len(kinds)]
        t, start = rng.random(), rng.random()
        bits = "".join(rng.choice("01") for _ in range(width))
        if kind == "fixed-spine":
            seq = hedgehog_fixed_spine(kappa, rng.randrange(kappa), t, start)
        elif kind == "drifting":
            seq = hedgehog_drifting(kappa, bits, t, start, rng.randrange(10 ** 9))
        elif kind == "center":
            seq = hedgehog_drifting(kappa, bits, 0.0, start, rng.randrange(10 ** 9))
        else:
            # a listed added point and an explicit sequence reaching it
            seq = hedgehog_drifting(kappa, bits, t, t, rng.randrange(10 ** 9))
        lim = weak_limit(seq)
        cls = "fail" if lim is None else classify_hedgehog_limit(lim, kappa)
        entry = {"trial": i, "kind": kind, "classification": cls,
                 "limit": None if lim is None else {str(k): v for k, v in sorted(lim.items(), key=lambda kv: str(kv[0]))}}
        if kind == "witness":
            target = {kappa + 1: math.cos(t), kappa: math.sin(t) * math.cos(cantor_phi(bits))}
            entry["witness_ok"] = lim is not None and sq_dist(lim, {k: x for k, x in target.items() if x}) < 1e-24
        report.append(entry)
    counts: Dict[str, int] = {}
    for e in report:
        counts[e["classification"]] = counts.get(e["classification"], 0) + 1
    return {"kappa": kappa, "trials": report, "counts": counts}


def iter_hedgehog_csv(points: Sequence[HedgehogPoint], kappa: int) -> Iterator[str]:
    yield "t,spine,phi,x_top,x_mid,x_spine"
    for p in points:
        v = hedgehog_embed(p, kappa)
        yield f"{p.t!r},{p.spine},{spine_angle(p.spine, kappa)!r},{v.get(kappa + 1, 0.0)!r},{v.get(kappa, 0.0)!r},{v.get(p.spine, 0.0)!r}"


def coeff_from_json(obj: dict) -> Coeff:
    """``{"kind": "const"|"converging"|"cycle"|"unbounded", ...}``.

    converging: value(n) = limit + amp/(n+1).
    """
    kind = obj.get("kind")
    if kind == "const":
        return Coeff.const(float(obj["value"]))
    if kind == "converging":
        lim, amp = float(obj["limit"]), float(obj.get("amp", 1.0))
        return Coeff.converging(lambda n: lim + amp / (n + 1), lim, abs(lim) + abs(amp))
    if kind == "cycle":
        vals = [float(v) for v in obj["values"]]
        if not vals:
            raise IllFormedSequence("empty cycle")
        return Coeff.cycle(vals)
    if kind == "unbounded":
        scale = float(obj.get("scale", 1.0))
        return Coeff.unbounded(lambda n: scale * n)
    raise IllFormedSequence(f"unknown coefficient kind {kind!r}")


def sequence_from_json(obj: dict) -> SymbolicSequence:
    try:
        fixed = {str(k): coeff_from_json(v) for k, v in obj.get("fixed", {}).items()}
        drift = [coeff_from_json(v) for v in obj.get("drift", [])]
        return SymbolicSequence(fixed, drift, float(obj.get("norm_bound", 1.0)))
    except (KeyError, TypeError, AttributeError) as e:
        raise IllFormedSequence(f"malformed sequence: {e}") from None
