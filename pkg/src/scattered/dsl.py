"""Hand-written recursive-descent parser and canonical printer.

Grammar (whitespace is insignificant)::

    ord    := term ('+' term)*
    term   := 'w' ('^' expo)? ('*' nat)? | nat
    expo   := nat | 'w' ('^' expo)? | '(' ord ')'
    tree   := '1' | 'A(' spec (',' spec)* ')'
    spec   := (tree | '_') '^' mult | 'fam(' tree ',' tree ')'
    mult   := nat | 'w' | 'a' nat
    forest := 'F[' ('(' tree ',' nat ')' (',' ...)*)? ']'
    pres   := 'empty' | 'pt' | '_' | 'sum(' (part (',' part)*)? ')'
            | 'pwb([' pres* ';' pres* '])'
    part   := pres '^' mult | 'fam(' pres ',' pres ')'

A bare ``1`` is read as the one-point tree; use ``kind="ord"`` to force an
ordinal.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import FrozenSet, List, Optional, Union

from .compactify import EMPTY, PHOLE, PT, PFamily, PWB, Pres, Sum, validate_presentation
from .derived import validate_family
from .ordinal import ZERO, Ordinal, add_ord, omega_power, to_text
from .terms import HOLE, Aleph, Concrete, Family, Forest, TermError, Tree

Expr = Union[Ordinal, Tree, Forest, Pres]


class ParseError(ValueError):
    def __init__(self, msg: str, line: int, column: int, expected: FrozenSet[str]):
        self.line, self.column, self.expected = line, column, expected
        exp = ", ".join(sorted(expected))
        super().__init__(f"{line}:{column}: {msg}" + (f" (expected one of: {exp})" if exp else ""))


@dataclass
class _Tok:
    kind: str   # 'nat', 'name', 'sym', 'end'
    text: str
    pos: int


_SYMS = set("()[],;^*+_")


def _lex(src: str) -> List[_Tok]:
    out, i = [], 0
    while i < len(src):
        c = src[i]
        if c.isspace():
            i += 1
        elif c.isdigit():
            j = i
            while j < len(src) and src[j].isdigit():
                j += 1
            out.append(_Tok("nat", src[i:j], i))
            i = j
        elif c.isalpha():
            j = i
            while j < len(src) and src[j].isalpha():
                j += 1
            out.append(_Tok("name", src[i:j], i))
            i = j
        elif c in _SYMS:
            out.append(_Tok("sym", c, i))
            i += 1
        else:
            raise _error(src, i, f"unexpected character {c!r}", frozenset())
    out.append(_Tok("end", "", len(src)))
    return out


def _error(src: str, pos: int, msg: str, expected) -> ParseError:
    line = src.count("\n", 0, pos) + 1
    col = pos - (src.rfind("\n", 0, pos) + 1) + 1
    return ParseError(msg, line, col, frozenset(expected))


class _Parser:
    def __init__(self, src: str):
        self.src = src
        self.toks = _lex(src)
        self.i = 0

    # token helpers
    @property
    def cur(self) -> _Tok:
        return self.toks[self.i]

    def peek(self, k: int = 1) -> _Tok:
        return self.toks[min(self.i + k, len(self.toks) - 1)]

    def at(self, text: str) -> bool:
        return self.cur.text == text and self.cur.kind != "end"

    def fail(self, expected, tok: Optional[_Tok] = None):
        tok = tok or self.cur
        what = "end of input" if tok.kind == "end" else repr(tok.text)
        raise _error(self.src, tok.pos, f"unexpected {what}", expected)

    def eat(self, text: str) -> _Tok:
        if not self.at(text):
            self.fail({text})
        tok = self.cur
        self.i += 1
        return tok

    def nat(self) -> int:
        if self.cur.kind != "nat":
            self.fail({"<nat>"})
        tok = self.cur
        self.i += 1
        return int(tok.text)

    def end(self) -> None:
        if self.cur.kind != "end":
            self.fail({"<end>"})

    # ordinals
    def ordinal(self) -> Ordinal:
        acc = self.ord_term()
        while self.at("+"):
            self.i += 1
            acc = add_ord(acc, self.ord_term())
        return acc

    def ord_term(self) -> Ordinal:
        if self.cur.kind == "nat":
            n = self.nat()
            return Ordinal([(ZERO, n)]) if n else ZERO
        if not self.at("w"):
            self.fail({"w", "<nat>"})
        self.i += 1
        e = Ordinal([(ZERO, 1)])
        if self.at("^"):
            self.i += 1
            e = self.expo()
        c = 1
        if self.at("*"):
            self.i += 1
            c = self.nat()
        return omega_power(e, c) if c else ZERO

    def expo(self) -> Ordinal:
        if self.cur.kind == "nat":
            n = self.nat()
            return Ordinal([(ZERO, n)]) if n else ZERO
        if self.at("("):
            self.i += 1
            e = self.ordinal()
            self.eat(")")
            return e
        if self.at("w"):
            self.i += 1
            inner = Ordinal([(ZERO, 1)])
            if self.at("^"):
                self.i += 1
                inner = self.expo()
            return omega_power(inner)
        self.fail({"<nat>", "w", "("})

    # cardinals
    def mult(self):
        if self.cur.kind == "nat":
            tok = self.cur
            n = self.nat()
            if n < 1:
                self.fail({"<positive nat>", "w", "a<nat>"}, tok)
            return n
        if self.cur.kind == "name":
            t = self.cur.text
            if t == "w":
                self.i += 1
                return Aleph(0)
            if t == "a":
                self.i += 1
                return Aleph(self.nat())
        self.fail({"<positive nat>", "w", "a<nat>"})

    # trees
    def tree(self, holes: bool = False):
        if holes and self.at("_"):
            self.i += 1
            return HOLE
        if self.cur.kind == "nat" and self.cur.text == "1":
            self.i += 1
            return Tree()
        if self.at("A"):
            self.i += 1
            self.eat("(")
            specs = [self.spec(holes)]
            while self.at(","):
                self.i += 1
                specs.append(self.spec(holes))
            self.eat(")")
            return Tree(specs)
        self.fail({"1", "A("} | ({"_"} if holes else set()))

    def spec(self, holes: bool):
        if self.at("fam"):
            tok = self.cur
            self.i += 1
            self.eat("(")
            ctx = self.tree(holes=True)
            self.eat(",")
            base = self.tree()
            self.eat(")")
            try:
                return validate_family(Family(ctx, base))
            except (TermError, ValueError) as e:
                raise _error(self.src, tok.pos, f"invalid family: {e}", frozenset())
        sub = self.tree(holes)
        self.eat("^")
        return Concrete(sub, self.mult())

    def forest(self) -> Forest:
        self.eat("F")
        self.eat("[")
        items = []
        if self.at("("):
            items.append(self.forest_item())
            while self.at(","):
                self.i += 1
                items.append(self.forest_item())
        self.eat("]")
        return Forest(items)

    def forest_item(self):
        self.eat("(")
        t = self.tree()
        self.eat(",")
        tok = self.cur
        n = self.nat()
        if n < 1:
            self.fail({"<positive nat>"}, tok)
        self.eat(")")
        return (t, n)

    # presentations
    def pres(self, holes: bool = False) -> Pres:
        if self.at("empty"):
            self.i += 1
            return EMPTY
        if self.at("pt"):
            self.i += 1
            return PT
        if holes and self.at("_"):
            self.i += 1
            return PHOLE
        if self.at("sum"):
            self.i += 1
            self.eat("(")
            parts = []
            if not self.at(")"):
                parts.append(self.part(holes))
                while self.at(","):
                    self.i += 1
                    parts.append(self.part(holes))
            self.eat(")")
            return Sum(parts)
        if self.at("pwb"):
            self.i += 1
            self.eat("(")
            self.eat("[")
            prefix = self.pres_list(holes, ";")
            self.eat(";")
            tail = self.pres_list(holes, "]")
            self.eat("]")
            self.eat(")")
            return PWB(prefix, tail)
        self.fail({"empty", "pt", "sum(", "pwb("} | ({"_"} if holes else set()))

    def pres_list(self, holes: bool, stop: str) -> List[Pres]:
        out = []
        if self.at(stop):
            return out
        out.append(self.pres(holes))
        while self.at(","):
            self.i += 1
            out.append(self.pres(holes))
        return out

    def part(self, holes: bool):
        if self.at("fam"):
            tok = self.cur
            self.i += 1
            self.eat("(")
            ctx = self.pres(holes=True)
            self.eat(",")
            base = self.pres()
            self.eat(")")
            try:
                return PFamily(ctx, base)
            except ValueError as e:
                raise _error(self.src, tok.pos, f"invalid family: {e}", frozenset())
        q = self.pres(holes)
        self.eat("^")
        return (q, self.mult())


_KINDS = ("ord", "tree", "forest", "pres")


def detect_kind(src: str) -> str:
    toks = _lex(src)
    first = toks[0]
    if first.kind == "name":
        if first.text == "A":
            return "tree"
        if first.text == "F":
            return "forest"
        if first.text in ("empty", "pt", "sum", "pwb"):
            return "pres"
        if first.text == "w":
            return "ord"
    if first.kind == "nat":
        if first.text == "1" and toks[1].kind == "end":
            return "tree"
        return "ord"
    return "unknown"


def parse_expr(src: str, kind: Optional[str] = None) -> Expr:
    """Parse an ordinal, tree, forest or presentation (auto-detected unless ``kind`` is given)."""
    kind = kind or detect_kind(src)
    p = _Parser(src)
    if kind == "ord":
        out = p.ordinal()
    elif kind == "tree":
        out = p.tree()
    elif kind == "forest":
        out = p.forest()
    elif kind == "pres":
        out = p.pres()
        try:
            validate_presentation(out)
        except ValueError as e:
            raise _error(src, 0, f"invalid presentation: {e}", frozenset())
    else:
        p.fail({"w", "<nat>", "1", "A(", "F[", "empty", "pt", "sum(", "pwb("})
    p.end()
    return out


def parse_space(src: str) -> Union[Tree, Forest]:
    """A tree or a forest; anything else is a syntax error."""
    kind = detect_kind(src)
    if kind not in ("tree", "forest"):
        kind = "tree"
    return parse_expr(src, kind)


def print_expr(e: Expr) -> str:
    if isinstance(e, Ordinal):
        return to_text(e)
    if isinstance(e, (Tree, Forest, Pres)):
        return e.key
    raise TypeError(f"cannot print {type(e).__name__}")
