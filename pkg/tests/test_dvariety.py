"""Compilation to D-varieties, sections, and fibered products."""

import pytest

from dvarkit.algebra import RationalFunction
from dvarkit.dvariety import (
    build_system,
    fibered_product,
    lie_derivative,
    shifted_tangent_residual,
    v_direction_names,
    verify_section,
)
from dvarkit.errors import (
    DegenerateLeadingDerivative,
    DenominatorVanishesOnVariety,
    NotSolvable,
)
from dvarkit.parsing import parse_expression, parse_problem_file


def system_of(text):
    return build_system(parse_problem_file(text))


def test_explicit_compile_first_order():
    sys_ = system_of("ode: y' = -1/2*y^3\n")
    assert sys_.fiber_names == ("y",)
    assert not sys_.ideal.generators
    s = sys_.section["y"]
    assert str(s) == "(-y^3)/2"
    assert verify_section(sys_).passed


def test_explicit_compile_second_order():
    sys_ = system_of("ode: y'' = 6*y^2 + t\n")
    assert sys_.fiber_names == ("y", "y'")
    assert sys_.section["y"] == parse_expression("y'", sys_.registry)
    assert sys_.section["y'"] == parse_expression("6*y^2 + t", sys_.registry)


def test_implicit_compile_elliptic():
    sys_ = system_of("ode: y'^2 = 4*y^3 + 4*y + 1\n")
    # one generator (the relation), section solved by one differentiation
    assert len(sys_.ideal.generators) == 1
    assert sys_.section["y'"] == parse_expression("6*y^2 + 2", sys_.registry)
    assert sys_.excluded_locus
    rep = verify_section(sys_)
    assert rep.passed
    for _, r in rep.residuals:
        assert r.is_zero()


def test_implicit_degenerate_cases():
    # relation free of the top derivative
    with pytest.raises(DegenerateLeadingDerivative):
        system_of("ode: y'^2 = y'^2 + y\n")
    # dF/dy' = 2y' lies in the ideal <y'^2>: cannot solve on the variety
    with pytest.raises(NotSolvable):
        system_of("ode: y'^2 = 0\n")


def test_product_system_and_w_split():
    sys_ = system_of("aux: a' = 2*a\node: y'' = 4*y' - 4*y\n")
    assert sys_.w_vars == ("a",)
    assert set(sys_.v_vars) == {"y", "y'"}
    assert v_direction_names(sys_) == ("y", "y'")
    assert sys_.section["a"] == parse_expression("2*a", sys_.registry)
    assert verify_section(sys_).passed


def test_fibered_product_name_collision():
    a = system_of("ode: y' = y\n")
    b = system_of("ode: y' = 2*y\n")
    prod = fibered_product(a, b)
    # the W-side copy of y is renamed so the V variable keeps its name
    assert prod.w_vars == ("y_1",)
    assert prod.v_vars == ("y",)
    assert verify_section(prod).passed


def test_shifted_tangent_residual_detects_bad_section():
    sys_ = system_of("ode: y'^2 = 4*y^3 + 4*y + 1\n")
    g = sys_.ideal.generators[0]
    assert shifted_tangent_residual(g, sys_).is_zero()
    bad = dict(sys_.section)
    bad["y'"] = parse_expression("y", sys_.registry)
    broken = type(sys_)(sys_.registry, sys_.ideal, bad, sys_.excluded_locus)
    assert not shifted_tangent_residual(g, broken).is_zero()


def test_lie_derivative_basics():
    sys_ = system_of("ode: y' = -1/2*y^3\n")
    h = parse_expression("t - 1/y^2", sys_.registry)
    assert lie_derivative(h, sys_).is_zero()
    t = parse_expression("t", sys_.registry)
    assert lie_derivative(t, sys_) == RationalFunction.constant(sys_.registry, 1)


def test_lie_derivative_denominator_on_variety():
    sys_ = system_of("vars: x, y\nideal: x^2 + y^2 - 1\nsection: x' = -y; y' = x\n")
    h = parse_expression("x / (x^2 + y^2 - 1)", sys_.registry)
    with pytest.raises(DenominatorVanishesOnVariety):
        lie_derivative(h, sys_)


def test_dimension_of_v(cubic_system, linear_system, elliptic_system):
    assert cubic_system[1].dimension_of_v() == 1
    assert linear_system[1].dimension_of_v() == 2
    assert elliptic_system[1].dimension_of_v() == 1
