from __future__ import annotations

import random
from fractions import Fraction

import pytest

from partinv import (
    DenominatorVanishesError,
    Expression,
    ParseError,
    UndeclaredVariableError,
    ZeroDenominatorError,
    differentiate,
    evaluate_at,
    parse_expr,
)

VARS = ("t", "x", "u")


def _poly_text(rng: random.Random, vars=VARS, nterms=3, degree=2) -> str:
    parts = []
    for _ in range(rng.randint(1, nterms)):
        factors = [str(rng.randint(1, 3))]
        for v in vars:
            p = rng.randint(0, degree)
            if p == 1:
                factors.append(v)
            elif p > 1:
                factors.append(f"{v}^{p}")
        parts.append("*".join(factors))
    text = parts[0]
    for part in parts[1:]:
        text += rng.choice([" + ", " - "]) + part
    return text


def _random_poly(rng: random.Random, vars=VARS, **kw) -> Expression:
    return parse_expr(_poly_text(rng, vars, **kw), vars)


def _random_rational(rng: random.Random, vars=VARS) -> Expression:
    num = _poly_text(rng, vars)
    den = _poly_text(rng, vars, nterms=2, degree=1)
    return parse_expr(f"({num}) / (1 + ({den})^2)", vars)


def test_parse_polynomial():
    e = parse_expr("t^2 + 1", ("t",))
    assert str(e) == "t^2 + 1"
    assert e.is_polynomial
    assert e.total_degree() == 2


def test_parse_mixed_terms():
    e = parse_expr("x - t*u", VARS)
    assert e.free_variables() == {"t", "x", "u"}
    assert str(e) == "-t*u + x"
    assert parse_expr(str(e), VARS) == e


def test_parse_cancels_common_factor():
    e = parse_expr("(t^2 - 1)/(t - 1)", ("t",))
    assert e == parse_expr("t + 1", ("t",))
    assert e.is_polynomial


def test_diff_product():
    e = parse_expr("t*x", VARS)
    assert differentiate(e, "t") == parse_expr("x", VARS)


def test_diff_power():
    assert str(differentiate(parse_expr("t^2 + 1", ("t",)), "t")) == "2*t"


def test_diff_second_variable():
    vars = ("t", "y")
    e = parse_expr("y^2*(t^2 + 1)", vars)
    assert differentiate(e, "y") == parse_expr("2*y*(t^2 + 1)", vars)


def test_diff_quotient():
    vars = ("t", "y")
    e = parse_expr("y/(t^2 + 1)", vars)
    expected = parse_expr("-2*t*y/(t^2 + 1)^2", vars)
    assert differentiate(e, "t") == expected


def test_eval_polynomial():
    e = parse_expr("t^2 + 1", ("t",))
    assert evaluate_at(e, {"t": 2}) == Fraction(5)


def test_eval_vanishing_combination():
    e = parse_expr("x - t*u", VARS)
    assert evaluate_at(e, {"t": 1, "x": 3, "u": 3}) == 0


def test_eval_after_cancellation():
    # removable singularity: the canonical form is t + 1
    e = parse_expr("(t^2 - 1)/(t - 1)", ("t",))
    assert evaluate_at(e, {"t": 1}) == Fraction(2)


def test_eval_rational_point():
    e = parse_expr("u/(t + 1)", VARS)
    val = evaluate_at(e, {"t": Fraction(1, 2), "x": 0, "u": 3})
    assert val == Fraction(2)


def test_parse_error_reports_position():
    with pytest.raises(ParseError) as err:
        parse_expr("t + * x", ("t", "x"))
    assert "position" in str(err.value)


def test_unknown_variable_rejected():
    with pytest.raises(UndeclaredVariableError):
        parse_expr("q + 1", ("t",))


def test_syntactic_zero_denominator_rejected():
    with pytest.raises(ZeroDenominatorError):
        parse_expr("1/(t - t)", ("t",))


def test_eval_on_vanishing_denominator():
    e = parse_expr("(t + 1)/(t - 1)", ("t",))
    with pytest.raises(DenominatorVanishesError):
        evaluate_at(e, {"t": 1})


def test_roundtrip_random_rationals():
    rng = random.Random(42)
    for _ in range(25):
        e = _random_rational(rng)
        assert parse_expr(str(e), VARS) == e


def test_diff_is_linear():
    rng = random.Random(7)
    for _ in range(20):
        a, b = _random_poly(rng), _random_poly(rng)
        for v in VARS:
            assert differentiate(a + b, v) == differentiate(a, v) + differentiate(b, v)


def test_diff_leibniz_rule():
    rng = random.Random(11)
    for _ in range(20):
        a, b = _random_poly(rng), _random_rational(rng)
        for v in VARS:
            lhs = differentiate(a * b, v)
            assert lhs == differentiate(a, v) * b + a * differentiate(b, v)


def test_eval_is_multiplicative():
    rng = random.Random(5)
    for _ in range(20):
        a, b = _random_poly(rng), _random_poly(rng)
        point = {v: rng.randint(-3, 3) for v in VARS}
        assert evaluate_at(a * b, point) == evaluate_at(a, point) * evaluate_at(b, point)


def test_arithmetic_with_constants():
    t = Expression.variable("t", ("t",))
    three = Expression.constant(3, ("t",))
    assert str(three * t + t) == "4*t"
    assert (t - t).is_zero
    assert ((t * t - Expression.constant(1, ("t",))) / (t - Expression.constant(1, ("t",)))) == t + three / 3
