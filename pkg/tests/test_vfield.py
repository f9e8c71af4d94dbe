from __future__ import annotations

import itertools
import random

import pytest

from partinv import (
    ModelError,
    SymmetryModel,
    VarSpace,
    VectorField,
    apply_field,
    builtin_model,
    coefficient_matrices,
    commutator,
    parse_expr,
)

SW = builtin_model("shallow-water")
MHD = builtin_model("mhd")


def _random_expr(rng: random.Random, space: VarSpace):
    vars = space.all_vars
    terms = []
    for _ in range(rng.randint(1, 3)):
        factors = [str(rng.randint(1, 3))]
        for v in rng.sample(vars, k=min(2, len(vars))):
            factors.append(v)
        terms.append("*".join(factors))
    return parse_expr(" + ".join(terms), vars)


def test_translation_applied_to_galilean_combination():
    X1 = SW.generator("X1")
    e = parse_expr("x - t*u", SW.space.all_vars)
    assert apply_field(X1, e) == parse_expr("1", SW.space.all_vars)


def test_boost_annihilates_its_invariants():
    X4 = SW.generator("X4")
    for name in ("t", "y", "v", "h"):
        e = parse_expr(name, SW.space.all_vars)
        assert apply_field(X4, e).is_zero


def test_scaling_weight_of_depth():
    X11 = SW.generator("X11")
    h = parse_expr("h", SW.space.all_vars)
    assert apply_field(X11, h) == parse_expr("2*h", SW.space.all_vars)


def test_commutator_translation_boost():
    assert commutator(SW.generator("X1"), SW.generator("X4")).is_zero


def test_commutator_produces_translation():
    c = commutator(SW.generator("X10"), SW.generator("X4"))
    assert c == SW.generator("X1")


def test_commutator_mhd_rotation_pair():
    c = commutator(MHD.generator("X2"), MHD.generator("X7"))
    assert c == MHD.generator("X3")


def test_commutator_antisymmetry():
    rng = random.Random(42)
    names = [f.name for f in SW.basis]
    for _ in range(10):
        a, b = rng.sample(names, 2)
        ab = commutator(SW.generator(a), SW.generator(b))
        ba = commutator(SW.generator(b), SW.generator(a))
        assert ab == ba.scale(-1)


def test_commutator_acts_as_bracket_of_derivations():
    rng = random.Random(3)
    names = [f.name for f in MHD.basis]
    for _ in range(8):
        a, b = (MHD.generator(n) for n in rng.sample(names, 2))
        e = _random_expr(rng, MHD.space)
        lhs = apply_field(commutator(a, b), e)
        rhs = apply_field(a, apply_field(b, e)) - apply_field(b, apply_field(a, e))
        assert lhs == rhs


def test_jacobi_identity_all_triples_both_models():
    for model in (SW, MHD):
        for a, b, c in itertools.combinations(model.basis, 3):
            s = commutator(commutator(a, b), c)
            s = s + commutator(commutator(b, c), a)
            s = s + commutator(commutator(c, a), b)
            assert s.is_zero


def test_coefficient_matrices_shapes_and_entries():
    fields = [SW.generator("X1"), SW.generator("X4")]
    xi, xi_eta = coefficient_matrices(fields, SW.space)
    assert xi.nrows == 2 and xi.ncols == 3
    assert xi_eta.nrows == 2 and xi_eta.ncols == 6
    vars = SW.space.all_vars
    assert [str(e) for e in xi.rows[0]] == ["0", "1", "0"]
    assert [str(e) for e in xi.rows[1]] == ["0", "t", "0"]
    # eta block of the boost is the unit u-column
    assert [str(e) for e in xi_eta.rows[1][3:]] == ["1", "0", "0"]


def test_from_strings_builds_prolonged_operator():
    space = VarSpace(("t", "y"), ("v",))
    Z = VectorField.from_strings(space, "Z", xi={"t": "t^2 + 1", "y": "t*y"}, eta={"v": "y - t*v"})
    lam_sq = parse_expr("y^2/(t^2 + 1)", space.all_vars)
    assert apply_field(Z, lam_sq).is_zero


def test_unknown_generator_name():
    with pytest.raises(ModelError):
        SW.generator("X99")


def test_model_dimensions():
    assert (SW.n, SW.m, SW.dim) == (3, 3, 9)
    assert (MHD.n, MHD.m, MHD.dim) == (4, 8, 11)
