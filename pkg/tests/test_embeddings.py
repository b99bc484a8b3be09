import math
import random
from fractions import Fraction

import pytest

from scattered.derived import ordinal_tree
from scattered.dsl import parse_expr
from scattered.embeddings import (
    Coeff, EmbeddingError, HedgehogPoint, IllFormedSequence, SymbolicSequence,
    brute_force_limit, cantor_phi, classify_hedgehog_limit, closure_check_hedgehog,
    converges_to, hedgehog_drifting, hedgehog_embed, hedgehog_fixed_spine, hedgehog_matrix,
    hilbert_bound, hilbert_embed, in_cantor_angles, min_pairwise_distance, norm,
    sample_hedgehog, sample_through_children, sequence_from_json, sigma_embed,
    truncated_nodes, weak_limit,
)
from scattered.generators import random_tree


def test_sigma_support_is_the_ancestor_chain():
    t = parse_expr("A(A(1^w)^2)")
    v = sigma_embed(t, ((0, 1), (0, 5)))
    assert v == {(): 1, ((0, 1),): 1, ((0, 1), (0, 5)): 1}
    assert sigma_embed(t, ()) == {(): 1}


def test_hilbert_weights():
    t = parse_expr("A(A(1^w)^2)")
    assert hilbert_embed(t, ()) == {}
    v = hilbert_embed(t, ((0, 0), (0, 3)))
    assert v == {((0, 0),): Fraction(1, 2), ((0, 0), (0, 3)): Fraction(1, 4)}
    with pytest.raises(EmbeddingError):
        hilbert_embed(t, (), Fraction(1))
    with pytest.raises(EmbeddingError):
        hilbert_embed(t, ((0, 2),))     # only two copies


def test_hilbert_norm_stays_in_ball():
    t = ordinal_tree(3)
    b = hilbert_bound()
    for a in truncated_nodes(t):
        assert norm(hilbert_embed(t, a)) < b


def test_family_members_are_addressable():
    t = ordinal_tree(parse_expr("w", "ord"))
    assert len(sigma_embed(t, ((0, 4), (0, 0)))) == 3


def test_transport_on_a_convergent_sequence():
    t = parse_expr("A(1^w)")
    seq = [sigma_embed(t, ((0, n),)) for n in range(30)]
    assert converges_to(seq, sigma_embed(t, ()))
    # a constant sequence away from the root does not converge to it
    assert not converges_to([sigma_embed(t, ((0, 0),))] * 3, sigma_embed(t, ()))


def test_transport_on_random_trees():
    rng = random.Random(11)
    done = 0
    while done < 20:
        t = random_tree(rng, 4, families=True)
        for a in truncated_nodes(t):
            try:
                pts = sample_through_children(t, a, rng)
            except EmbeddingError:
                continue
            assert converges_to([sigma_embed(t, p) for p in pts], sigma_embed(t, a))
            assert converges_to([hilbert_embed(t, p) for p in pts], hilbert_embed(t, a), hilbert_bound())
            done += 1


def test_cantor_phi():
    assert cantor_phi("") == pytest.approx(math.pi / 6)
    assert cantor_phi("1" * 40) == pytest.approx(math.pi / 3)
    assert cantor_phi("01") == pytest.approx(math.pi / 6 + (math.pi / 6) * 2 / 9)
    assert in_cantor_angles(cantor_phi("0110"))
    assert not in_cantor_angles(math.pi / 4)
    with pytest.raises(EmbeddingError):
        cantor_phi("012")


def test_hedgehog_point():
    v = hedgehog_embed(HedgehogPoint(0.5, 3), 4)
    assert set(v) == {3, 4, 5}
    assert math.isclose(norm(v), 1.0, abs_tol=1e-12)
    assert hedgehog_embed(HedgehogPoint(0.0, 2), 4) == {5: 1.0}
    for bad in (HedgehogPoint(1.5, 0), HedgehogPoint(0.5, 4), HedgehogPoint(-0.1, 0)):
        with pytest.raises(EmbeddingError):
            hedgehog_embed(bad, 4)


def test_hedgehog_injective_on_a_sample():
    m = hedgehog_matrix(sample_hedgehog(32, 500, 1), 32)
    assert min_pairwise_distance(m, chunk=128) > 0


def test_weak_limits():
    s = SymbolicSequence({"x": Coeff.const(0.5), "y": Coeff.converging(lambda n: 1 / (n + 1), 0.0, 1.0)},
                         [Coeff.const(0.25)], norm_bound=2.0)
    assert weak_limit(s) == {"x": 0.5}
    assert weak_limit(SymbolicSequence({"x": Coeff.cycle([0, 1])}, norm_bound=2.0)) is None
    with pytest.raises(IllFormedSequence):
        weak_limit(SymbolicSequence({"x": Coeff.unbounded(float)}, norm_bound=2.0))
    with pytest.raises(IllFormedSequence):
        weak_limit(SymbolicSequence({"x": Coeff.const(3.0)}, norm_bound=1.0))


def test_weak_limit_matches_brute_force():
    rng = random.Random(3)
    for _ in range(10):
        kappa = 8
        bits = "".join(rng.choice("01") for _ in range(30))
        for s in (hedgehog_fixed_spine(kappa, rng.randrange(kappa), rng.random(), rng.random()),
                  hedgehog_drifting(kappa, bits, rng.random(), rng.random(), rng.randrange(99))):
            sym, bf = weak_limit(s), brute_force_limit(s)
            for k in set(sym) | set(bf):
                assert abs(sym.get(k, 0.0) - bf.get(k, 0.0)) < 1e-3
    assert brute_force_limit(SymbolicSequence({"x": Coeff.cycle([0.0, 1.0])}, norm_bound=2.0)) is None


def test_sequence_json():
    s = sequence_from_json({"fixed": {"a": {"kind": "converging", "limit": 0.5, "amp": 0.25}},
                            "drift": [{"kind": "const", "value": 0.1}], "norm_bound": 1.0})
    assert weak_limit(s) == {"a": 0.5}
    with pytest.raises(IllFormedSequence):
        sequence_from_json({"fixed": {"a": {"kind": "nope"}}})


def test_closure_classification():
    kappa = 8
    assert classify_hedgehog_limit(hedgehog_embed(HedgehogPoint(0.7, 5), kappa), kappa) == "image"
    added = {kappa + 1: math.cos(0.4), kappa: math.sin(0.4) * math.cos(cantor_phi("0101"))}
    assert classify_hedgehog_limit(added, kappa) == "added-part"
    off = {kappa + 1: math.cos(0.4), kappa: math.sin(0.4) * math.cos(math.pi / 4)}
    assert classify_hedgehog_limit(off, kappa) == "fail"
    rep = closure_check_hedgehog(kappa, 24, seed=2)
    assert rep["counts"].get("fail", 0) == 0
    assert all(e["witness_ok"] for e in rep["trials"] if e["kind"] == "witness")
