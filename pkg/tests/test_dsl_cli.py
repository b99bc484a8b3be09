import json
import random
import subprocess
import sys

import pytest

from scattered.cli import run
from scattered.dsl import ParseError, parse_expr, print_expr
from scattered.generators import random_forest, random_ordinal, random_presentation, random_tree
from scattered.ordinal import omega_power
from scattered.terms import ALEPH0, Aleph, Concrete, LEAF, Tree


def generated_exprs(n=1000, seed=0):
    rng = random.Random(seed)
    makers = (
        lambda: random_ordinal(rng, 2),
        lambda: random_tree(rng, 4, mults=(1, 2, ALEPH0, Aleph(1))),
        lambda: random_tree(rng, 4, families=True),
        lambda: random_forest(rng, 3),
        lambda: random_presentation(rng, 4),
    )
    return [makers[i % len(makers)]() for i in range(n)]


def kind_of(e):
    return {"Ordinal": "ord", "Tree": "tree", "Forest": "forest"}.get(type(e).__name__, "pres")


def test_parse_examples():
    assert parse_expr("A(1^w)") == Tree([Concrete(LEAF, ALEPH0)])
    assert print_expr(parse_expr("A(1^w)")) == "A(1^w)"
    assert parse_expr("w^2*3 + 4") == omega_power(2, 3) + 4
    assert print_expr(parse_expr("F[(1,3)]")) == "F[(1,3)]"
    assert parse_expr("1") == LEAF
    assert parse_expr("1", "ord") == 1
    assert parse_expr(" A( 1^w ,1^2 ) ") == parse_expr("A(1^2, 1^w)")


def test_syntax_errors_carry_positions():
    with pytest.raises(ParseError) as e:
        parse_expr("A(1^w")
    assert (e.value.line, e.value.column) == (1, 6) and e.value.expected == {")"}
    with pytest.raises(ParseError) as e:
        parse_expr("A(1^w,\n 1^0)")
    assert (e.value.line, e.value.column) == (2, 4)
    with pytest.raises(ParseError):
        parse_expr("A(_^w)")
    with pytest.raises(ParseError):
        parse_expr("A(fam(A(_^2), 1))")       # members never grow
    with pytest.raises(ParseError):
        parse_expr("w^2 +")
    with pytest.raises(ParseError):
        parse_expr("A(1^w) junk")


def test_round_trip_on_generated_expressions():
    for e in generated_exprs():
        text = print_expr(e)
        back = parse_expr(text, kind_of(e))
        assert back == e, text
        assert print_expr(back) == text


def test_printing_is_idempotent_after_one_round():
    src = "w + w^2 + 3"
    once = print_expr(parse_expr(src))
    assert once == "w^2*1 + w^0*3"
    assert print_expr(parse_expr(once, "ord")) == once


GOLDEN = {
    ("sch", "A(1^w)"): '{"sch":"w^0*1"}',
    ("ms", "A(1^w)"): '{"count":1,"rank":1}',
    ("homeo", "A(1^w)", "A(A(1^w)^1)"): '{"homeomorphic":true}',
    ("van", "A(fam(A(_^w),1))"): '{"van":"w^1*1 + w^0*1"}',
    ("com", "A(A(1^w)^1)"): '{"com":"w^0*1","term_complexity":"w^0*2"}',
    ("normalize", "A(1^3,1^w)"): '{"normal":"A(1^w)"}',
    ("ms", "A(fam(A(_^w),A(1^w)))"): '{"count":1,"rank":"w^1*1"}',
    ("compactify", "sum(pt^w)"): '{"alpha":"w^0*1","bound":"w^0*3","case":2,"check_bound":true,'
                                 '"check_dense":true,"n_alpha":1,"sch":"w^0*1","tree":"A(1^w)",'
                                 '"witness":{"added":["/"],"point_map":[["/s/0","/0"]]}}',
    ("embed-sigma", "A(1^2)"): '{"nodes":[{"node":"/","vector":{"/":1}},{"node":"/0.0","vector":'
                               '{"/":1,"/0.0":1}},{"node":"/0.1","vector":{"/":1,"/0.1":1}}]}',
    ("embed-hilbert", "A(1^w)", "/0.7"): '{"nodes":[{"node":"/0.7","vector":{"/0.7":"1/2"}}]}',
}


@pytest.mark.parametrize("argv", sorted(GOLDEN))
def test_golden_outputs(argv):
    text, code = run(list(argv))
    assert code == 0 and text == GOLDEN[argv]


def test_seeded_output_is_byte_identical():
    for argv in (["verify-all", "--seed", "4", "--trials", "30"],
                 ["hedgehog", "--kappa", "16", "--trials", "8", "--seed", "9"]):
        assert run(argv) == run(list(argv))


EXIT_CASES = [
    (["sch", "A(1^w)"], 0),
    (["van", "F[(1,2), (A(1^w),1)]"], 0),
    (["ms", "F[(1,3)]"], 0),
    (["com", "A(A(1^w)^w)"], 0),
    (["normalize", "A(A(1^w)^1)"], 0),
    (["homeo", "1", "F[(1,2)]"], 0),
    (["compactify", "pwb([pt ; sum(pt^w)])"], 0),
    (["embed-hilbert", "A(1^w)", "--weight", "1/3"], 0),
    (["hedgehog", "--kappa", "8", "--t", "0.25", "--spine", "7"], 0),
    (["weaklimit", '{"fixed": {"x": {"kind": "const", "value": 0.5}}}'], 0),
    (["sch", "A(1^w"], 2),
    (["sch", "B(1)"], 2),
    (["compactify", "sum(pt^0)"], 2),
    (["weaklimit", "{not json"], 2),
    (["nosuchcommand"], 2),
    (["ms", "A(1^a1)"], 1),
    (["ms", "F[]"], 1),
    (["embed-hilbert", "A(1^w)", "--weight", "2"], 1),
    (["hedgehog", "--kappa", "8", "--t", "0.5", "--spine", "8"], 1),
    (["weaklimit", '{"fixed": {"x": {"kind": "unbounded"}}}'], 1),
]


def test_exit_code_contract():
    assert len(EXIT_CASES) == 20
    for argv, want in EXIT_CASES:
        text, code = run(argv)
        assert code == want, (argv, text)
        obj = json.loads(text)
        if want:
            assert obj["error"]["kind"] in ("syntax", "usage", "domain")


def test_syntax_error_json():
    obj = json.loads(run(["sch", "A(1^w"])[0])
    assert obj["error"]["line"] == 1 and obj["error"]["column"] == 6 and obj["error"]["expected"] == [")"]


def test_console_script():
    out = subprocess.run([sys.executable, "-m", "scattered.cli", "ms", "A(1^w)"], capture_output=True, text=True)
    assert out.returncode == 0 and json.loads(out.stdout) == {"rank": 1, "count": 1}
    out = subprocess.run([sys.executable, "-m", "scattered.cli", "sch", "A("], capture_output=True, text=True)
    assert out.returncode == 2


def test_pretty_is_the_same_data():
    a, _ = run(["compactify", "sum(pt^w)"])
    b, _ = run(["compactify", "sum(pt^w)", "--pretty"])
    assert json.loads(a) == json.loads(b) and "\n" in b
