"""Expression DSL and problem-file parsing."""

from fractions import Fraction

import pytest

from dvarkit.algebra import ROLE_FIBER, ROLE_TIME, Polynomial, VariableRegistry
from dvarkit.errors import ExpressionSyntaxError, UnknownVariable
from dvarkit.parsing import (
    MODE_DVARIETY,
    MODE_EXPLICIT,
    MODE_IMPLICIT,
    emit_problem_file,
    parse_expression,
    parse_polynomial,
    parse_problem_file,
    rewrite_derivative_powers,
)


def reg():
    return VariableRegistry(("t", "y", "y'"), (ROLE_TIME, ROLE_FIBER, ROLE_FIBER))


def test_precedence_and_unary():
    r = reg()
    t = Polynomial.variable(r, "t")
    assert parse_expression("-t^2", r) == -(t * t)
    assert parse_expression("2 - 3 - 4", r).num.constant_value() == -5
    assert parse_expression("2*3^2", r).num.constant_value() == 18
    assert parse_expression("12/3/2", r).num.constant_value() == 2


def test_primes_and_rewrite():
    r = reg()
    yp = Polynomial.variable(r, "y'")
    assert parse_expression("y'", r) == yp
    assert rewrite_derivative_powers("y^(2) + y^2") == "y'' + y^2"


def test_division_makes_rational():
    r = reg()
    f = parse_expression("(y + 1)/(y - 1)", r)
    assert not f.is_polynomial()
    assert parse_expression("1/2 * y", r) == Fraction(1, 2) * Polynomial.variable(r, "y")


def test_errors_carry_position():
    r = reg()
    with pytest.raises(ExpressionSyntaxError):
        parse_expression("y + ", r)
    with pytest.raises(UnknownVariable):
        parse_expression("z + 1", r)
    with pytest.raises(ExpressionSyntaxError):
        parse_expression("y^(-2)", r)
    with pytest.raises(ExpressionSyntaxError):
        parse_polynomial("1/y", r)


def test_explicit_ode_file():
    spec = parse_problem_file("ode: y'' = 4*y' - 4*y\n")
    assert spec.mode == MODE_EXPLICIT
    assert spec.ode_order == 2
    assert set(spec.registry.names) >= {"t", "y", "y'"}


def test_implicit_ode_file():
    spec = parse_problem_file("ode: y'^2 = 4*y^3 + 4*y + 1\n")
    assert spec.mode == MODE_IMPLICIT


def test_dvariety_file():
    text = "vars: x, y\nideal: x^2 + y^2 - 1\nsection: x' = -y; y' = x\n"
    spec = parse_problem_file(text)
    assert spec.mode == MODE_DVARIETY
    assert len(spec.ideal_gens) == 1


def test_file_errors():
    with pytest.raises(ExpressionSyntaxError):
        parse_problem_file("nonsense: 1\n")
    with pytest.raises(ExpressionSyntaxError):
        parse_problem_file("ode: y' = y\nideal: y - 1\n")
    with pytest.raises(ExpressionSyntaxError):
        parse_problem_file("# only a comment\n")
    # aux rules may not mention fiber variables
    with pytest.raises(ExpressionSyntaxError):
        parse_problem_file("aux: a' = y\node: y' = a\n")


def test_emit_round_trip():
    texts = [
        "ode: y'' = 6*y^2 + t\n",
        "aux: a' = 2*a\node: y'' = 4*y' - 4*y\nintegrals: (y' - 2*y)/a\n",
        "ode: y'^2 = 4*y^3 + 4*y + 1\n",
        "vars: x, y\nideal: x^2 + y^2 - 1\nsection: x' = -y; y' = x\n",
    ]
    for text in texts:
        spec = parse_problem_file(text)
        again = parse_problem_file(emit_problem_file(spec))
        assert again == spec
