"""Exact-arithmetic core: polynomials, gcd, Groebner bases, ranks."""

from fractions import Fraction

import pytest

from dvarkit.algebra import (
    ROLE_CONST,
    ROLE_FIBER,
    ROLE_PARAM,
    ROLE_TIME,
    IdealBasis,
    Polynomial,
    RationalFunction,
    VariableRegistry,
    groebner_basis,
    ideal_dimension,
    in_ideal,
    matrix_rank_mod_ideal,
    normal_form,
    nullspace,
    poly_gcd,
    rref,
    standard_monomials,
)
from dvarkit.errors import DuplicateVariable, ZeroDenominator


def reg_xy():
    return VariableRegistry(("t", "x", "y"), (ROLE_TIME, ROLE_FIBER, ROLE_FIBER))


def var(reg, name):
    return Polynomial.variable(reg, name)


def test_registry_rejects_duplicates():
    with pytest.raises(DuplicateVariable):
        VariableRegistry(("x", "x"), (ROLE_FIBER, ROLE_FIBER))


def test_polynomial_arithmetic_exact():
    reg = reg_xy()
    x, y = var(reg, "x"), var(reg, "y")
    p = (x + y) ** 2
    assert p == x * x + 2 * x * y + y * y
    assert (p - p).is_zero()
    # [TRIVIAL] binomial coefficients stay Fractions
    q = (x + Fraction(1, 3)) * (x - Fraction(1, 3))
    assert q == x * x - Fraction(1, 9)


def test_diff_and_coefficient_derivation():
    reg = reg_xy()
    t, x = var(reg, "t"), var(reg, "x")
    p = t * t * x + x ** 3
    assert p.diff("x") == t * t + 3 * x * x
    assert p.coefficient_derivation() == 2 * t * x


def test_str_round_trips_through_parser():
    from dvarkit.parsing import parse_expression

    reg = reg_xy()
    t, x, y = (var(reg, n) for n in "txy")
    cases = [
        RationalFunction(x * y - 2 * t, 4 * x),
        RationalFunction(x + 1, y * y),
        RationalFunction(Polynomial.constant(reg, Fraction(-3, 7))),
        RationalFunction(4 * t * x - y, 4 * x * y + 1),
    ]
    for rf in cases:
        assert parse_expression(str(rf), reg) == rf


def test_poly_gcd_multivariate():
    reg = reg_xy()
    x, y = var(reg, "x"), var(reg, "y")
    a = (x + y) * (x - y) * 3
    b = (x + y) * (x * x + 1) * 5
    g = poly_gcd(a, b)
    assert g == x + y


def test_rational_function_canonical():
    reg = reg_xy()
    x, y = var(reg, "x"), var(reg, "y")
    rf = RationalFunction((x * x - y * y) * 2, (x + y) * 4)
    # [TRIVIAL] common factor and integer content are removed
    assert rf == RationalFunction(x - y, Polynomial.constant(reg, 2))
    with pytest.raises(ZeroDenominator):
        RationalFunction(x, Polynomial.zero(reg))


def test_groebner_katsura_like():
    # [DERIVED] <x^2 - y, y^2 - x> has the four intersection points of two
    # parabolas: standard monomials 1, x, y, xy
    reg = VariableRegistry(("x", "y"), (ROLE_FIBER, ROLE_FIBER))
    x, y = var(reg, "x"), var(reg, "y")
    gb = groebner_basis(IdealBasis(reg, [x * x - y, y * y - x]))
    monos = standard_monomials(gb, {0, 1})
    assert monos is not None and len(monos) == 4
    assert in_ideal(x ** 4 - x, gb)
    assert not in_ideal(x ** 3 - x, gb)


def test_normal_form_is_projection():
    reg = reg_xy()
    x, y = var(reg, "x"), var(reg, "y")
    gb = groebner_basis(IdealBasis(reg, [x * x + y * y - 1]))
    f = RationalFunction(x ** 4 + 2 * x * x * y * y + y ** 4)
    nf = normal_form(f, gb)
    # [DERIVED] (x^2+y^2)^2 = 1 on the circle
    assert nf == RationalFunction(Polynomial.constant(reg, 1))
    assert normal_form(nf, gb) == nf


def test_ideal_dimension_cases():
    reg = reg_xy()
    t, x, y = (var(reg, n) for n in "txy")
    # hypersurface in (t,x,y): dimension 2
    assert ideal_dimension(IdealBasis(reg, [x * x + y * y - t]), {0, 1, 2}) == 2
    # unit ideal: -1
    one = Polynomial.constant(reg, 1)
    assert ideal_dimension(IdealBasis(reg, [one]), {0, 1, 2}) == -1
    # zero ideal: full dimension
    assert ideal_dimension(IdealBasis(reg, []), {0, 1, 2}) == 3


def test_dimension_with_parameter_treated_as_scalar():
    reg = VariableRegistry(("y", "c"), (ROLE_FIBER, ROLE_CONST))
    y, c = var(reg, "y"), var(reg, "c")
    # y^2 = c is zero-dimensional over Q(c): dimension 0 counted in y
    assert ideal_dimension(IdealBasis(reg, [y * y - c]), {0}) == 0


def test_matrix_rank_mod_ideal():
    reg = reg_xy()
    x, y = var(reg, "x"), var(reg, "y")
    gb = groebner_basis(IdealBasis(reg, [x * y - 1]))
    rx, ry = RationalFunction(x), RationalFunction(y)
    # second row is x^2 * first row modulo xy = 1
    rows = [[rx, ry], [rx * rx * rx, rx * rx * ry]]
    assert matrix_rank_mod_ideal(rows, gb) == 1
    rows.append([ry, rx])
    assert matrix_rank_mod_ideal(rows, gb) == 2


def test_rref_and_nullspace():
    rows = [
        [Fraction(1), Fraction(2), Fraction(3)],
        [Fraction(2), Fraction(4), Fraction(6)],
        [Fraction(0), Fraction(1), Fraction(1)],
    ]
    pivots = rref(rows)
    assert pivots == [0, 1]
    ker = nullspace(
        [[Fraction(1), Fraction(2), Fraction(3)], [Fraction(0), Fraction(1), Fraction(1)]], 3
    )
    assert len(ker) == 1
    v = ker[0]
    assert v[0] + 2 * v[1] + 3 * v[2] == 0 and v[1] + v[2] == 0


def test_block_order_main_block_dominates():
    reg = VariableRegistry(("t", "y"), (ROLE_TIME, ROLE_FIBER))
    key = reg.order_key()
    # y (fiber block) outranks any power of t (tail block)
    assert key((0, 1)) > key((5, 0))
