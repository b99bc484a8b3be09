"""Batch command line: every operation prints one JSON object.

Exit codes: 0 success, 1 domain error (or failed verification), 2 syntax error.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from fractions import Fraction
from typing import List, Optional

from .compactify import (
    bound, check_bound, check_dense, compactify, direct_tree, is_compact,
    sch_presentation,
)
from .derived import (
    DomainError, derived_forest, homeo_countable, ms_invariant, rep_complexity,
    sch_height, van_rank,
)
from .dsl import ParseError, parse_expr, parse_space
from .embeddings import (
    EmbeddingError, HedgehogPoint, IllFormedSequence, brute_force_limit,
    closure_check_hedgehog, hedgehog_embed, hilbert_embed, sequence_from_json,
    sigma_embed, truncated_nodes,
)
from .generators import (
    case_presentations, max_depth, random_ordinal, random_presentation, random_tree,
)
from .normalize import normalize
from .oracles import FiniteSpace, StageOracle
from .ordinal import Ordinal, add_ord, cmp_ord, split_limit_finite, to_text
from .terms import Forest, TermError, Tree, has_family, is_countable, is_infinite


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


# -- rendering ---------------------------------------------------------------

def addr_text(addr) -> str:
    return "/" + "/".join(f"{j}.{i}" for j, i in addr)


def parse_addr(text: str):
    text = text.strip()
    if text in ("", "/"):
        return ()
    steps = []
    for part in text.strip("/").split("/"):
        try:
            j, i = part.split(".")
            steps.append((int(j), int(i)))
        except ValueError:
            raise ParseError(f"bad node address {text!r}", 1, 1, frozenset({"/<spec>.<copy>"})) from None
    return tuple(steps)


def _num(x):
    if isinstance(x, Fraction):
        return str(x) if x.denominator != 1 else x.numerator
    return x


def _vector(v) -> dict:
    return {addr_text(k) if isinstance(k, tuple) else str(k): _num(x) for k, x in v.items()}


def _ord_or_int(a: Ordinal):
    return int(a) if a.is_finite() else to_text(a)


def emit(data: dict, pretty: bool) -> str:
    if pretty:
        return json.dumps(data, sort_keys=True, indent=2)
    return json.dumps(data, sort_keys=True, separators=(",", ":"))


# -- commands ----------------------------------------------------------------

def _with_oracle(out: dict, x, args) -> dict:
    if not args.oracle:
        return out
    st = StageOracle()
    rep = {"van": to_text(st.van(x)), "sch": to_text(st.sch(x))}
    rep["agrees"] = st.van(x) == van_rank(x) and st.sch(x) == sch_height(x)
    items = x.items if isinstance(x, Forest) else [(x, 1)]
    if all(not has_family(t) for t, _ in items) and all(
            not is_infinite(s.mult) for t, _ in items for s in _all_specs(t)):
        fs = FiniteSpace.from_term(x)
        rep["finite_space_agrees"] = fs.van() == int(van_rank(x)) and fs.sch() == int(sch_height(x))
    out["oracle"] = rep
    return out


def _all_specs(t: Tree):
    for s in t.children:
        yield s
        if isinstance(s.subtree, Tree):
            yield from _all_specs(s.subtree)


def cmd_sch(args):
    x = parse_space(args.expr)
    return _with_oracle({"sch": to_text(sch_height(x))}, x, args)


def cmd_van(args):
    x = parse_space(args.expr)
    return _with_oracle({"van": to_text(van_rank(x))}, x, args)


def cmd_ms(args):
    inv = ms_invariant(parse_space(args.expr))
    return {"rank": _ord_or_int(inv.rank), "count": inv.top_count}


def cmd_com(args):
    x = parse_space(args.expr)
    return {"com": to_text(rep_complexity(normalize(x))), "term_complexity": to_text(rep_complexity(x))}


def cmd_normalize(args):
    return {"normal": normalize(parse_space(args.expr)).key}


def cmd_homeo(args):
    return {"homeomorphic": homeo_countable(parse_space(args.a), parse_space(args.b))}


def cmd_compactify(args):
    p = parse_expr(args.expr, "pres")
    c = compactify(p)
    _, n = split_limit_finite(c.alpha)
    out = {
        "tree": c.space.key,
        "witness": c.witness.to_json(),
        "alpha": to_text(c.alpha),
        "n_alpha": n,
        "bound": to_text(bound(c.alpha)),
        "sch": to_text(sch_height(c.space)),
        "case": c.case,
        "check_bound": check_bound(c),
        "check_dense": check_dense(c.witness, c.space),
    }
    if is_compact(p) and is_countable(c.space):
        out["homeomorphic_to_input"] = homeo_countable(c.space, direct_tree(p))
    return out


def _embed_nodes(args, fn):
    t = parse_expr(args.expr, "tree")
    addrs = [parse_addr(a) for a in args.nodes] if args.nodes else truncated_nodes(t, args.copies, args.members)
    return {"nodes": [{"node": addr_text(a), "vector": _vector(fn(t, a))} for a in addrs]}


def cmd_embed_sigma(args):
    return _embed_nodes(args, sigma_embed)


def cmd_embed_hilbert(args):
    try:
        w = Fraction(args.weight)
    except (ValueError, ZeroDivisionError):
        raise EmbeddingError(f"bad weight {args.weight!r}") from None
    return _embed_nodes(args, lambda t, a: hilbert_embed(t, a, w))


def cmd_hedgehog(args):
    if args.t is not None or args.spine is not None:
        if args.t is None or args.spine is None:
            raise EmbeddingError("give both --t and --spine")
        v = hedgehog_embed(HedgehogPoint(args.t, args.spine), args.kappa)
        return {"vector": _vector(v)}
    rep = closure_check_hedgehog(args.kappa, args.trials, args.seed)
    return rep


def cmd_weaklimit(args):
    from .embeddings import weak_limit

    try:
        obj = json.loads(args.sequence)
    except json.JSONDecodeError as e:
        raise ParseError(f"bad JSON: {e.msg}", e.lineno, e.colno, frozenset()) from None
    if not isinstance(obj, dict):
        raise IllFormedSequence("a sequence is a JSON object")
    s = sequence_from_json(obj)
    lim = weak_limit(s)
    out = {"divergent": True} if lim is None else {"limit": _vector(lim)}
    if args.oracle:
        bf = brute_force_limit(s)
        out["brute_force_agrees"] = (bf is None) == (lim is None) and (
            lim is None or all(abs(bf.get(k, 0.0) - lim.get(k, 0.0)) < 1e-2 for k in set(bf) | set(lim)))
    return out


def verify_all(seed: int, trials: int, oracle: bool = False) -> dict:
    """Invariant suite over generated inputs; counts checks and failures per group."""
    rng = random.Random(seed)
    report = {}

    fails = 0
    for _ in range(trials):
        a, b, c = (random_ordinal(rng) for _ in range(3))
        ok = add_ord(add_ord(a, b), c) == add_ord(a, add_ord(b, c))
        lim, n = split_limit_finite(a)
        ok = ok and add_ord(lim, n) == a and add_ord(1, a) == (a if not a.is_finite() else a + 1)
        ok = ok and (cmp_ord(a, b) == -cmp_ord(b, a))
        fails += not ok
    report["ordinals"] = {"checked": trials, "failures": fails}

    fails = 0
    st = StageOracle()
    depth = max_depth()
    for i in range(trials):
        t = random_tree(rng, depth=min(depth, 4), families=i % 2 == 1)
        n = normalize(t)
        ok = rep_complexity(n) == sch_height(t) and normalize(n) == n
        ok = ok and not sch_height(t) > rep_complexity(t)
        ok = ok and add_ord(1, van_rank(derived_forest(t))) == van_rank(t)
        if is_countable(t):
            ok = ok and homeo_countable(t, n)
        if oracle:
            ok = ok and st.van(t) == van_rank(t) and st.sch(t) == sch_height(t)
        fails += not ok
    report["trees"] = {"checked": trials, "failures": fails}

    fails, cases = 0, {}
    pres = case_presentations() + [random_presentation(rng, 4) for _ in range(trials)]
    for p in pres:
        c = compactify(p)
        cases[str(c.case)] = cases.get(str(c.case), 0) + 1
        ok = check_bound(c) and check_dense(c.witness, c.space)
        ok = ok and not sch_presentation(p) > sch_height(c.space)
        fails += not ok
    report["presentations"] = {"checked": len(pres), "failures": fails, "cases": cases}

    rep = closure_check_hedgehog(16, max(4, trials // 10), seed)
    report["hedgehog"] = {"checked": len(rep["trials"]), "failures": rep["counts"].get("fail", 0)}
    report["ok"] = all(g["failures"] == 0 for g in report.values())
    return report


def cmd_verify_all(args):
    return verify_all(args.seed, args.trials, args.oracle)


# -- entry point -------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--trials", type=int, default=100)
    common.add_argument("--kappa", type=int, default=256)
    common.add_argument("--pretty", action="store_true")
    common.add_argument("--oracle", action="store_true", help="cross-check with the slow oracles")

    ap = _Parser(prog="scattered", description="Scattered compacta toolkit (JSON output)")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, fn, *pos, help=None):
        p = sub.add_parser(name, parents=[common], help=help)
        for arg in pos:
            p.add_argument(arg)
        p.set_defaults(fn=fn)
        return p

    add("sch", cmd_sch, "expr", help="scattered height")
    add("van", cmd_van, "expr", help="vanishing rank")
    add("ms", cmd_ms, "expr", help="ordinal-segment invariant (rank, count)")
    add("com", cmd_com, "expr", help="construction complexity after normalisation")
    add("normalize", cmd_normalize, "expr")
    add("homeo", cmd_homeo, "a", "b", help="homeomorphism test for countable terms")
    add("compactify", cmd_compactify, "expr", help="compactify a presentation")
    for name, fn in (("embed-sigma", cmd_embed_sigma), ("embed-hilbert", cmd_embed_hilbert)):
        p = add(name, fn, "expr")
        p.add_argument("nodes", nargs="*", help="node addresses like /0.1/0.0 (default: a truncation)")
        p.add_argument("--copies", type=int, default=2)
        p.add_argument("--members", type=int, default=3)
        if name == "embed-hilbert":
            p.add_argument("--weight", default="1/2")
    p = add("hedgehog", cmd_hedgehog, help="embed one point, or run the closure check")
    p.add_argument("--t", type=float)
    p.add_argument("--spine", type=int)
    add("weaklimit", cmd_weaklimit, "sequence", help="weak limit of a JSON-described sequence")
    add("verify-all", cmd_verify_all, help="run the invariant suite on generated inputs")
    return ap


def run(argv: Optional[List[str]] = None):
    """Returns ``(json_text, exit_code)``."""
    pretty = "--pretty" in (argv or [])
    try:
        args = build_parser().parse_args(argv)
        pretty = args.pretty
        out = args.fn(args)
        code = 1 if out.get("ok") is False else 0
        return emit(out, pretty), code
    except ParseError as e:
        err = {"kind": "syntax", "message": str(e), "line": e.line, "column": e.column,
               "expected": sorted(e.expected)}
        return emit({"error": err}, pretty), 2
    except UsageError as e:
        return emit({"error": {"kind": "usage", "message": str(e)}}, pretty), 2
    except (DomainError, TermError, EmbeddingError, IllFormedSequence, ValueError) as e:
        return emit({"error": {"kind": "domain", "message": str(e)}}, pretty), 1


def main(argv: Optional[List[str]] = None) -> int:
    text, code = run(argv)
    print(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
