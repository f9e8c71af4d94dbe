from __future__ import annotations

import itertools
import random

import pytest

from partinv import (
    ClassifyError,
    PisType,
    admits_invariant_solution,
    build_hierarchy,
    build_representation,
    builtin_model,
    characteristics,
    classify_subalgebra,
    decomposition_witness,
    is_ideal,
    parse_span,
    pis_types,
    regular_type,
    subalgebra_closure,
    two_step_condition,
)

SW = builtin_model("shallow-water")
MHD = builtin_model("mhd")


def _random_subalgebras(model, count, seed=42, max_seeds=3):
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        k = rng.randint(1, max_seeds)
        vecs = []
        for _ in range(k):
            vec = [rng.randint(-1, 1) for _ in range(model.dim)]
            if any(vec):
                vecs.append(vec)
        if not vecs:
            continue
        try:
            out.append(subalgebra_closure(model, vecs))
        except Exception:
            continue
    return out


def test_characteristics_translation_pair():
    ch = characteristics(parse_span(SW, "X1, X4"))
    assert (ch.n, ch.m, ch.dim) == (3, 3, 2)
    assert (ch.rank_xi, ch.rank_xieta) == (1, 2)
    assert (ch.invariants, ch.sigma, ch.mu) == (4, 2, 2)
    assert not ch.admits_invariant_solution


def test_characteristics_mhd_translation_pair():
    ch = characteristics(parse_span(MHD, "X1, X4"))
    assert (ch.rank_xi, ch.rank_xieta) == (1, 2)
    assert (ch.invariants, ch.sigma, ch.mu) == (10, 3, 7)


def test_characteristics_mhd_five():
    ch = characteristics(parse_span(MHD, "X2, X3, X5, X6, X7"))
    assert (ch.dim, ch.rank_xi, ch.rank_xieta) == (5, 2, 5)
    assert (ch.invariants, ch.sigma, ch.mu) == (7, 2, 5)


def test_admits_invariant_solution_cases():
    assert admits_invariant_solution(parse_span(MHD, "X5, X6"))
    assert not admits_invariant_solution(parse_span(SW, "X1, X4"))
    # a single generator with nonzero xi always admits
    assert admits_invariant_solution(parse_span(SW, "X10"))
    assert admits_invariant_solution(parse_span(MHD, "X7"))


def test_pis_types_translation_pair():
    assert pis_types(parse_span(SW, "X1, X4")) == (PisType(rho=2, delta=1, regular=True),)


def test_pis_types_mhd_translation_pair():
    assert pis_types(parse_span(MHD, "X1, X4")) == (PisType(rho=3, delta=1, regular=True),)


def test_pis_types_mhd_towers():
    assert pis_types(parse_span(MHD, "X2, X3, X5, X6")) == (
        PisType(rho=2, delta=2, regular=True),
        PisType(rho=3, delta=3, regular=False),
    )
    assert pis_types(parse_span(MHD, "X2, X3, X5, X6, X7")) == (
        PisType(rho=2, delta=3, regular=True),
        PisType(rho=3, delta=4, regular=False),
    )


def test_pis_types_empty_when_admits():
    assert pis_types(parse_span(MHD, "X7")) == ()


def test_regular_type_is_first():
    sub = parse_span(MHD, "X2, X3, X5, X6")
    assert regular_type(sub) == pis_types(sub)[0]
    assert regular_type(sub).regular


def test_two_step_positive_fixture():
    N = parse_span(SW, "X1, X4, X10+X12")
    H = parse_span(SW, "X1, X4")
    assert is_ideal(H, N)
    assert two_step_condition(N, H)


def test_two_step_trivial_when_equal():
    N = parse_span(SW, "X1, X4, X2")
    assert two_step_condition(N, N)


def test_two_step_negative_fixture():
    N = parse_span(MHD, "X2, X3, X5, X6")
    H = parse_span(MHD, "X2, X5")
    assert is_ideal(H, N)
    assert not two_step_condition(N, H)


def test_two_step_requires_ideal():
    N = parse_span(MHD, "X5, X6, X7")
    H = parse_span(MHD, "X7")
    assert not is_ideal(H, N)
    with pytest.raises(ClassifyError):
        two_step_condition(N, H)


def test_witness_on_decomposable_span():
    w = decomposition_witness(parse_span(SW, "X1, X4, X2"))
    assert w.found
    assert w.ideal.describe() == "span{X1, X4}"
    assert w.verdict == "decomposable"
    assert w.candidates_checked >= 1


def test_witness_absent_on_indecomposable_spans():
    for text in ("X2, X3, X5, X6", "X2, X3, X7"):
        w = decomposition_witness(parse_span(MHD, text))
        assert not w.found
        assert w.ideal is None
        assert w.verdict == "indecomposable within coeff_bound 2"


def test_witness_rejects_admitting_span():
    with pytest.raises(ClassifyError):
        decomposition_witness(parse_span(MHD, "X7"))


def test_witness_respects_two_step_condition():
    w = decomposition_witness(parse_span(SW, "X1, X4, X2"))
    N = parse_span(SW, "X1, X4, X2")
    assert is_ideal(w.ideal, N)
    assert two_step_condition(N, w.ideal)
    assert not admits_invariant_solution(w.ideal)


def test_hierarchy_small_fixture():
    subs = [parse_span(SW, s) for s in ("X1, X4", "X1, X4, X2", "X1, X4, X11")]
    h = build_hierarchy(subs)
    assert h.edges == ((1, 0), (2, 0))
    assert h.indecomposable == (0,)
    assert len(h.reports) == 3


def test_hierarchy_singleton():
    h = build_hierarchy([parse_span(SW, "X1, X4")])
    assert h.edges == ()
    assert h.indecomposable == (0,)


def test_hierarchy_empty():
    h = build_hierarchy([])
    assert h.nodes == () and h.edges == () and h.indecomposable == ()


def test_hierarchy_edges_decrease_dimension():
    subs = [parse_span(SW, s) for s in ("X1, X4", "X1, X4, X2", "X1, X4, X10", "X1, X4, X11")]
    h = build_hierarchy(subs)
    for child, parent in h.edges:
        assert h.nodes[child].dim > h.nodes[parent].dim


def test_classification_report_fields():
    r = classify_subalgebra(parse_span(SW, "X1, X4"), witness_bound=2)
    assert not r.admits_invariant
    assert r.regular == PisType(rho=2, delta=1, regular=True)
    assert r.decomposition is not None
    assert r.decomposition.verdict == "indecomposable within coeff_bound 2"
    assert any("necessary" in n for n in r.notes)
    d = r.as_dict()
    assert d["admits_invariant"] is False
    assert d["types"][0]["rho"] == 2


def test_classification_report_mu_zero_note():
    # xi-rank equals full rank but mu = 0: no dependent variable is constrained
    r = classify_subalgebra(parse_span(MHD, "X7"))
    assert r.admits_invariant
    assert r.types == ()


def test_representation_translation_pair():
    r = build_representation(parse_span(SW, "X1, X4"))
    assert (r.rho, r.delta, r.regular) == (2, 1, True)
    assert r.similarity_variables == (("lam1", "t"), ("lam2", "y"))
    assert [str(e) for _, e in r.invariant_functions] == ["h", "v"]
    assert r.free_functions == ("u",)
    assert r.unresolved_choices == 0


def test_representation_mhd_translation_pair():
    r = build_representation(parse_span(MHD, "X1, X4"))
    assert (r.rho, r.delta) == (3, 1)
    assert len(r.similarity_variables) == 3
    assert len(r.invariant_functions) == 7
    assert r.free_functions == ("u",)


def test_representation_rejects_bad_rho():
    with pytest.raises(ClassifyError):
        build_representation(parse_span(SW, "X1, X4"), rho=1)


def test_admits_iff_mu_equals_m():
    for model in (SW, MHD):
        for sub in _random_subalgebras(model, 25, seed=7):
            ch = characteristics(sub)
            assert ch.admits_invariant_solution == (ch.mu == model.m)


def test_defect_complements_invariant_count():
    # for the regular type, rho = sigma and delta = m - mu
    for model in (SW, MHD):
        for sub in _random_subalgebras(model, 25, seed=9):
            ch = characteristics(sub)
            types = pis_types(sub)
            if ch.admits_invariant_solution:
                assert types == ()
                continue
            if types and types[0].regular:
                assert types[0].rho == ch.sigma
                assert types[0].delta == model.m - ch.mu


def test_type_window_bounds():
    for model in (SW, MHD):
        for sub in _random_subalgebras(model, 25, seed=11):
            ch = characteristics(sub)
            for ty in pis_types(sub):
                assert ch.sigma <= ty.rho < min(model.n, ch.invariants)
                assert ty.delta == model.m - ch.invariants + ty.rho
                assert ty.delta >= 1
