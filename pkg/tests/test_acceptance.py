from __future__ import annotations

import itertools
import random
import time

from partinv import (
    PisType,
    builtin_model,
    catalog,
    characteristics,
    commutator,
    decomposition_witness,
    enumerate_candidate_ideals,
    functional_rank,
    invariant_basis,
    is_ideal,
    normalizer,
    parse_expr,
    parse_span,
    pis_types,
    subalgebra_closure,
    two_step_condition,
    verify,
)

SW = builtin_model("shallow-water")
MHD = builtin_model("mhd")


def _report(num: int, label: str, ok: bool, elapsed: float, budget: float) -> None:
    in_time = elapsed < budget
    verdict = "PASS" if ok and in_time else "FAIL"
    print(f"{verdict} criterion {num}: {label} ({elapsed:.2f}s, budget {budget:g}s)")
    assert ok, f"criterion {num} failed: {label}"
    assert in_time, f"criterion {num} exceeded {budget:g}s: {elapsed:.2f}s"


def test_criterion_1_shallow_water_characteristics():
    t0 = time.perf_counter()
    ch = characteristics(parse_span(SW, "X1, X4"))
    ok = (
        (ch.n, ch.m) == (3, 3)
        and (ch.invariants, ch.sigma, ch.mu) == (4, 2, 2)
        and pis_types(parse_span(SW, "X1, X4")) == (PisType(rho=2, delta=1, regular=True),)
    )
    _report(1, "shallow-water {X1,X4} characteristics and regular type (2,1)", ok, time.perf_counter() - t0, 1.0)


def test_criterion_2_two_step_fixture():
    t0 = time.perf_counter()
    H = parse_span(SW, "X1, X4")
    N = parse_span(SW, "X1, X4, X10+X12")
    ok = is_ideal(H, N) and two_step_condition(N, H)
    _report(2, "H ideal in N and two-step condition on the printed pair", ok, time.perf_counter() - t0, 1.0)


def test_criterion_3_normalizer():
    t0 = time.perf_counter()
    H = parse_span(SW, "X1, X4")
    nor = normalizer(SW, H)
    quotient = ("X2", "X5", "X10", "X11", "X12", "X13")
    spanned = subalgebra_closure(SW, [SW.generator(n) for n in ("X1", "X4") + quotient])
    ok = (
        nor.dim == 8
        and spanned.dim == 8
        and all(nor.contains(SW.generator(n)) for n in quotient)
        and all(spanned.contains(f) for f in nor.fields)
    )
    _report(3, "normalizer of {X1,X4} is 8-dimensional with the printed quotient basis", ok, time.perf_counter() - t0, 1.0)


def test_criterion_4_shallow_water_reduction_operators():
    t0 = time.perf_counter()
    ok = True
    for span in catalog("sw.reduction_ops").spans:
        N = parse_span(SW, f"X1, X4, {span}")
        w = decomposition_witness(N)
        ok = ok and w.found and w.ideal.describe() == "span{X1, X4}"
    _report(4, "all 8 shallow-water reduction operators decompose through {X1,X4}", ok, time.perf_counter() - t0, 5.0)


def test_criterion_5_mhd_classification():
    t0 = time.perf_counter()
    expected = [("X1, X4", (3, 1))]
    expected += [(span, (2, 1)) for span in catalog("mhd.defect1rank2").spans]
    expected += [("X2, X3, X5, X6", (2, 2)), ("X2, X3, X5, X6, X7", (2, 3))]
    ok = len(expected) == 8
    for span, (rho, delta) in expected:
        sub = parse_span(MHD, span)
        types = pis_types(sub)
        ok = ok and bool(types) and (types[0].rho, types[0].delta) == (rho, delta) and types[0].regular
        w = decomposition_witness(sub)
        ok = ok and not w.found and w.verdict == "indecomposable within coeff_bound 2"
    _report(5, "the 8 MHD submodels have the printed types and are indecomposable", ok, time.perf_counter() - t0, 30.0)


def test_criterion_6_mhd_reduction_operators():
    t0 = time.perf_counter()
    ok = True
    for span in catalog("mhd.reduction_ops").spans:
        N = parse_span(MHD, f"X1, X4, {span}")
        w = decomposition_witness(N)
        ok = ok and w.found and w.ideal.describe() == "span{X1, X4}"
    _report(6, "all 8 MHD reduction operators decompose through {X1,X4}", ok, time.perf_counter() - t0, 10.0)


def test_criterion_7_invariant_finder():
    t0 = time.perf_counter()
    sub = parse_span(SW, "X1, X4")
    ib = invariant_basis(sub)
    reference = [parse_expr(n, SW.space.all_vars) for n in ("t", "y", "v", "h")]
    union = [i.expr for i in ib.invariants] + reference
    ok = ib.complete and len(ib.invariants) == 4 and functional_rank(union) == 4
    _report(7, "invariant basis of {X1,X4} is functionally {t,y,v,h}", ok, time.perf_counter() - t0, 1.0)


def _random_subalgebras(model, count, seed):
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        vecs = []
        for _ in range(rng.randint(1, 3)):
            vec = [rng.randint(-1, 1) for _ in range(model.dim)]
            if any(vec):
                vecs.append(vec)
        if not vecs:
            continue
        out.append(subalgebra_closure(model, vecs))
    return out


def test_criterion_8_property_suites():
    t0 = time.perf_counter()
    ok = True

    # Jacobi identity over every basis triple of both fixtures
    for model in (SW, MHD):
        for a, b, c in itertools.combinations(model.basis, 3):
            s = commutator(commutator(a, b), c)
            s = s + commutator(commutator(b, c), a)
            s = s + commutator(commutator(c, a), b)
            ok = ok and s.is_zero

    # counting identity on 200 random subalgebras
    for model, seed in ((SW, 42), (MHD, 43)):
        for sub in _random_subalgebras(model, 100, seed):
            ch = characteristics(sub)
            ok = ok and ch.invariants + ch.rank_xieta == model.n + model.m

    # two-step condition is exactly the mu equality; bookkeeping follows
    for key, model in (("sw.hierarchy", SW), ("mhd.hierarchy", MHD)):
        for N in catalog(key).subalgebras:
            for H in enumerate_candidate_ideals(N):
                chn, chh = characteristics(N), characteristics(H)
                passes = two_step_condition(N, H)
                ok = ok and passes == (chn.mu == chh.mu)
                if passes:
                    ok = ok and chn.invariants == chh.invariants - (chn.rank_xieta - chh.rank_xieta)
    _report(8, "Jacobi, counting identity, and two-step bookkeeping properties", ok, time.perf_counter() - t0, 60.0)


def test_criterion_9_numeric_submodel():
    t0 = time.perf_counter()
    rep = verify("default", h_fd=1e-4)
    checks = rep.checks
    ok = (
        rep.ok
        and checks["bernoulli_drift"]["value"] <= 1e-8
        and checks["first_integral"]["value"] <= 1e-10
        and checks["k_identity"]["value"] <= 1e-12
        and checks["pde_residual"]["value"] <= 1e-5
        and 3.2 <= checks["convergence_ratio"]["value"] <= 4.8
    )
    _report(9, "numeric submodel drifts, residual, and convergence order", ok, time.perf_counter() - t0, 30.0)
