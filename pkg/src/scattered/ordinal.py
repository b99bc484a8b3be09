"""Countable ordinals below epsilon_0 in Cantor normal form.

An ordinal is a strictly decreasing sum ``w^e1*c1 + ... + w^ek*ck`` whose
exponents are again ordinals. Only the operations needed for scattered
heights are provided: comparison, addition, right multiplication by omega,
suprema of finite sets and the limit/finite split.
"""

from __future__ import annotations

from functools import total_ordering
from typing import Iterable, Tuple, Union

OrdLike = Union["Ordinal", int]


@total_ordering
class Ordinal:
    """Immutable CNF ordinal. ``terms`` is a tuple of ``(exponent, coefficient)``."""

    __slots__ = ("terms", "_hash")

    def __init__(self, terms: Iterable[Tuple[OrdLike, int]] = ()):
        built = []
        for exp, coeff in terms:
            exp = as_ordinal(exp)
            coeff = int(coeff)
            if coeff < 1:
                raise ValueError(f"coefficient must be positive, got {coeff}")
            if built and not exp < built[-1][0]:
                raise ValueError("exponents must be strictly decreasing")
            built.append((exp, coeff))
        self.terms = tuple(built)
        self._hash = hash(self.terms)

    @classmethod
    def finite(cls, n: int) -> "Ordinal":
        if n < 0:
            raise ValueError("ordinals are non-negative")
        return cls() if n == 0 else cls([(ZERO, n)])

    # -- queries -----------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def is_finite(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and self.terms[0][0].is_zero())

    def __int__(self) -> int:
        if not self.is_finite():
            raise ValueError(f"{self} is infinite")
        return self.terms[0][1] if self.terms else 0

    @property
    def leading_exponent(self) -> "Ordinal":
        if not self.terms:
            raise ValueError("0 has no leading exponent")
        return self.terms[0][0]

    # -- protocol ----------------------------------------------------------
    def __eq__(self, other):
        if isinstance(other, int):
            other = Ordinal.finite(other) if other >= 0 else None
        if not isinstance(other, Ordinal):
            return NotImplemented
        return self.terms == other.terms

    def __lt__(self, other):
        if isinstance(other, int):
            if other < 0:
                return False
            other = Ordinal.finite(other)
        if not isinstance(other, Ordinal):
            return NotImplemented
        return cmp_ord(self, other) < 0

    def __hash__(self):
        return self._hash

    def __add__(self, other):
        if isinstance(other, (int, Ordinal)):
            return add_ord(self, other)
        return NotImplemented

    def __radd__(self, other):
        if isinstance(other, int):
            return add_ord(other, self)
        return NotImplemented

    def __repr__(self):
        return f"Ordinal({to_short_text(self)!r})"

    def __str__(self):
        return to_short_text(self)


def as_ordinal(x: OrdLike) -> Ordinal:
    if isinstance(x, Ordinal):
        return x
    if isinstance(x, int) and not isinstance(x, bool):
        return Ordinal.finite(x)
    raise TypeError(f"cannot interpret {x!r} as an ordinal")


ZERO = Ordinal()
ONE = Ordinal([(ZERO, 1)])
OMEGA = Ordinal([(ONE, 1)])


def cmp_ord(a: OrdLike, b: OrdLike) -> int:
    """Three-way comparison: -1, 0 or 1."""
    a, b = as_ordinal(a), as_ordinal(b)
    for (ea, ca), (eb, cb) in zip(a.terms, b.terms):
        c = cmp_ord(ea, eb)
        if c:
            return c
        if ca != cb:
            return -1 if ca < cb else 1
    la, lb = len(a.terms), len(b.terms)
    return (la > lb) - (la < lb)


def add_ord(a: OrdLike, b: OrdLike) -> Ordinal:
    a, b = as_ordinal(a), as_ordinal(b)
    if b.is_zero():
        return a
    lead = b.terms[0][0]
    kept = [t for t in a.terms if cmp_ord(t[0], lead) > 0]
    same = [t for t in a.terms if cmp_ord(t[0], lead) == 0]
    if same:
        head = [(lead, same[0][1] + b.terms[0][1])]
        return Ordinal(kept + head + list(b.terms[1:]))
    return Ordinal(kept + list(b.terms))


def mul_by_omega(d: OrdLike) -> Ordinal:
    """Right multiplication ``d * w`` for ``d > 0``."""
    d = as_ordinal(d)
    if d.is_zero():
        raise ValueError("mul_by_omega requires a positive ordinal")
    return Ordinal([(add_ord(d.leading_exponent, 1), 1)])


def sup_ord(xs: Iterable[OrdLike]) -> Ordinal:
    best = ZERO
    for x in xs:
        x = as_ordinal(x)
        if x > best:
            best = x
    return best


def split_limit_finite(a: OrdLike) -> Tuple[Ordinal, int]:
    """Return ``(limit_part, n)`` with ``a = limit_part + n``; ``limit_part`` is 0 for finite ``a``."""
    a = as_ordinal(a)
    if a.terms and a.terms[-1][0].is_zero():
        return Ordinal(a.terms[:-1]), a.terms[-1][1]
    return a, 0


def is_limit(a: OrdLike) -> bool:
    a = as_ordinal(a)
    return bool(a.terms) and not a.terms[-1][0].is_zero()


def is_successor(a: OrdLike) -> bool:
    a = as_ordinal(a)
    return bool(a.terms) and a.terms[-1][0].is_zero()


def predecessor(a: OrdLike) -> Ordinal:
    lim, n = split_limit_finite(a)
    if n == 0:
        raise ValueError(f"{a} is not a successor")
    return add_ord(lim, n - 1)


def left_difference(a: OrdLike, b: OrdLike) -> Ordinal:
    """The unique ``d`` with ``a + d = b``; requires ``a <= b``."""
    a, b = as_ordinal(a), as_ordinal(b)
    if a > b:
        raise ValueError(f"{a} > {b}: left difference undefined")
    for i, (ta, tb) in enumerate(zip(a.terms, b.terms)):
        if ta == tb:
            continue
        (ea, ca), (eb, cb) = ta, tb
        if eb > ea:
            return Ordinal(b.terms[i:])
        return Ordinal([(eb, cb - ca)] + list(b.terms[i + 1:]))
    return Ordinal(b.terms[len(a.terms):])


# -- serialisation ---------------------------------------------------------

def _exp_text(e: Ordinal) -> str:
    if e.is_finite():
        return str(int(e))
    return f"({to_text(e)})"


def to_text(a: Ordinal) -> str:
    """Canonical full form, e.g. ``w^2*3 + w^1*1 + w^0*4``; zero prints as ``0``."""
    if a.is_zero():
        return "0"
    return " + ".join(f"w^{_exp_text(e)}*{c}" for e, c in a.terms)


def to_short_text(a: Ordinal) -> str:
    """Compact human form: ``w^2*3 + w + 4``."""
    if a.is_zero():
        return "0"
    parts = []
    for e, c in a.terms:
        if e.is_zero():
            parts.append(str(c))
            continue
        base = "w" if e == ONE else f"w^{_exp_short(e)}"
        parts.append(base if c == 1 else f"{base}*{c}")
    return " + ".join(parts)


def _exp_short(e: Ordinal) -> str:
    return str(int(e)) if e.is_finite() else f"({to_short_text(e)})"


def to_json(a: Ordinal):
    if a.is_zero():
        return 0
    return [[to_json(e), c] for e, c in a.terms]


def from_json(obj) -> Ordinal:
    if obj == 0:
        return ZERO
    if not isinstance(obj, list):
        raise ValueError(f"bad ordinal encoding: {obj!r}")
    return Ordinal([(from_json(e), c) for e, c in obj])


def omega_power(e: OrdLike, c: int = 1) -> Ordinal:
    return Ordinal([(as_ordinal(e), c)])
