from __future__ import annotations

import random

import pytest

from partinv import (
    LieAlgebraError,
    ModelError,
    Subalgebra,
    builtin_model,
    enumerate_candidate_ideals,
    ideal_closure,
    is_ideal,
    is_subalgebra,
    normalizer,
    parse_span,
    subalgebra_closure,
)

SW = builtin_model("shallow-water")
MHD = builtin_model("mhd")


def test_is_subalgebra_closed_pair():
    assert is_subalgebra(SW, [SW.generator("X1"), SW.generator("X4")])


def test_is_subalgebra_with_combination():
    n = parse_span(SW, "X1, X4, X10+X12")
    assert n.dim == 3
    assert is_subalgebra(SW, n.fields)


def test_is_subalgebra_rejects_open_span():
    # [X4, X10] = -X1 leaves the span
    assert not is_subalgebra(SW, [SW.generator("X4"), SW.generator("X10")])


def test_parse_span_rejects_open_span():
    with pytest.raises(LieAlgebraError):
        parse_span(SW, "X4, X10")


def test_parse_span_rejects_unknown_generator():
    with pytest.raises(ModelError):
        parse_span(SW, "X1, X99")


def test_parse_span_rejects_empty_element():
    with pytest.raises(LieAlgebraError):
        parse_span(SW, "")


def test_is_ideal_translation_pair():
    H = parse_span(SW, "X1, X4")
    N = parse_span(SW, "X1, X4, X10+X12")
    assert is_ideal(H, N)


def test_is_ideal_mhd_translations():
    H = parse_span(MHD, "X2, X3")
    N = parse_span(MHD, "X2, X3, X5, X6, X7")
    assert is_ideal(H, N)


def test_is_ideal_rejects_rotation_axis():
    # [X5, X7] and [X6, X7] land outside span{X7}
    H = parse_span(MHD, "X7")
    N = parse_span(MHD, "X5, X6, X7")
    assert not is_ideal(H, N)
    assert is_ideal(parse_span(MHD, "X5, X6"), N)


def test_ideal_closure_fixed_seed():
    N = parse_span(SW, "X1, X4, X10")
    cl = ideal_closure(N, [SW.generator("X1")])
    assert cl.dim == 1 and cl.contains(SW.generator("X1"))
    assert is_ideal(cl, N)


def test_ideal_closure_pulls_in_commutators():
    N = parse_span(SW, "X1, X4, X10")
    cl = ideal_closure(N, [SW.generator("X10")])
    # [X4, X10] = -X1 forces X1 into the closure
    assert cl.dim == 2
    assert cl.contains(SW.generator("X1")) and cl.contains(SW.generator("X10"))


def test_ideal_closure_in_mhd_five():
    N = parse_span(MHD, "X2, X3, X5, X6, X7")
    cl = ideal_closure(N, [MHD.generator("X6")])
    assert cl.describe() == "span{X5, X6}"


def test_ideal_closure_of_whole_algebra_is_identity():
    N = parse_span(SW, "X1, X4, X10+X12")
    cl = ideal_closure(N, N.fields)
    assert cl.dim == N.dim and all(cl.contains(f) for f in N.fields)


def test_normalizer_of_translation_pair():
    H = parse_span(SW, "X1, X4")
    nor = normalizer(SW, H)
    assert nor.dim == 8
    for name in ("X1", "X2", "X4", "X5", "X10", "X11", "X12", "X13"):
        assert nor.contains(SW.generator(name))
    assert not nor.contains(SW.generator("X9"))


def test_normalizer_contains_subalgebra_and_closes():
    H = parse_span(MHD, "X2, X3, X5, X6")
    nor = normalizer(MHD, H)
    assert nor.contains(H)
    assert nor.contains(MHD.generator("X7"))
    assert is_subalgebra(MHD, nor.fields)
    assert is_ideal(H, subalgebra_closure(MHD, list(H.fields) + [MHD.generator("X7")]))


def test_normalizer_of_full_algebra():
    full = subalgebra_closure(SW, SW.basis)
    assert normalizer(SW, full).dim == SW.dim


def test_enumerate_candidates_contains_translation_pair():
    N = parse_span(SW, "X1, X4, X10+X12")
    cands = enumerate_candidate_ideals(N)
    assert cands
    assert all(is_ideal(c, N) for c in cands)
    assert any(c.describe() == "span{X1, X4}" for c in cands)


def test_enumerate_candidates_abelian_case():
    N = parse_span(MHD, "X2, X3, X5, X6")
    cands = enumerate_candidate_ideals(N, coeff_bound=1)
    # every proper subspace of an abelian algebra is an ideal
    assert all(is_ideal(c, N) for c in cands)
    want = subalgebra_closure(MHD, [MHD.generator("X2"), MHD.generator("X5")])
    assert any(c.dim == 2 and c.contains(want) for c in cands)


def test_enumerate_candidates_one_dimensional():
    assert enumerate_candidate_ideals(parse_span(SW, "X1")) == []


def test_closure_idempotent_and_monotone():
    rng = random.Random(42)
    for _ in range(10):
        seeds = [SW.generator(n) for n in rng.sample(SW.names, 2)]
        cl = subalgebra_closure(SW, seeds)
        assert all(cl.contains(f) for f in seeds)
        again = subalgebra_closure(SW, cl.fields)
        assert again.dim == cl.dim
        assert all(again.contains(f) for f in cl.fields)


def test_subalgebra_contains_subalgebra():
    N = parse_span(SW, "X1, X4, X10+X12")
    H = parse_span(SW, "X1, X4")
    assert N.contains(H)
    assert not H.contains(N)
