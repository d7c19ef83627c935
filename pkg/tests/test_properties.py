"""Property suites: derivation laws, normal forms, random compilation."""

import random
from fractions import Fraction

from hypothesis import given, settings
from hypothesis import strategies as st

from dvarkit.algebra import (
    IdealBasis,
    Polynomial,
    RationalFunction,
    groebner_basis,
    normal_form,
)
from dvarkit.dvariety import build_system, lie_derivative, verify_section
from dvarkit.parsing import parse_problem_file

coeffs = st.fractions(
    min_value=-9, max_value=9, max_denominator=9
).filter(lambda q: q != 0)


def poly_strategy(registry, max_degree=3, max_terms=4):
    exps = st.tuples(
        *[st.integers(min_value=0, max_value=max_degree) for _ in registry.names]
    ).filter(lambda e: sum(e) <= max_degree)
    return st.dictionaries(exps, coeffs, min_size=0, max_size=max_terms).map(
        lambda terms: Polynomial(registry, terms)
    )


def elliptic():
    return build_system(parse_problem_file("ode: y'^2 = 4*y^3 + 4*y + 1\n"))


ELLIPTIC = elliptic()
POLYS = poly_strategy(ELLIPTIC.registry)


@settings(max_examples=200, deadline=None)
@given(POLYS, POLYS)
def test_lie_derivative_leibniz(f, g):
    lhs = lie_derivative(f * g, ELLIPTIC)
    rhs = normal_form(
        RationalFunction(f) * lie_derivative(g, ELLIPTIC)
        + RationalFunction(g) * lie_derivative(f, ELLIPTIC),
        ELLIPTIC.ideal,
    )
    assert lhs == rhs


@settings(max_examples=200, deadline=None)
@given(POLYS, POLYS, coeffs, coeffs)
def test_lie_derivative_linear(f, g, a, b):
    lhs = lie_derivative(a * f + b * g, ELLIPTIC)
    rhs = a * lie_derivative(f, ELLIPTIC) + b * lie_derivative(g, ELLIPTIC)
    assert lhs == normal_form(rhs, ELLIPTIC.ideal)


@settings(max_examples=200, deadline=None)
@given(POLYS)
def test_normal_form_idempotent(f):
    nf = normal_form(f, ELLIPTIC.ideal)
    assert normal_form(nf, ELLIPTIC.ideal) == nf
    # the residue is in the ideal
    assert normal_form(f - nf, ELLIPTIC.ideal).is_zero()


@settings(max_examples=50, deadline=None)
@given(POLYS, POLYS)
def test_groebner_generator_order_irrelevant(f, g):
    reg = ELLIPTIC.registry
    a = groebner_basis(IdealBasis(reg, [f, g]))
    b = groebner_basis(IdealBasis(reg, [g, f]))
    assert a.generators == b.generators


def random_rhs(rng, names, max_degree):
    terms = {}
    for _ in range(rng.randint(1, 5)):
        e = [0] * len(names)
        for _ in range(rng.randint(0, max_degree)):
            e[rng.randrange(len(names))] += 1
        terms[tuple(e)] = terms.get(tuple(e), 0) + Fraction(
            rng.randint(-9, 9), rng.randint(1, 9)
        )
    parts = []
    for e, c in terms.items():
        if not c:
            continue
        factors = [f"({c})"] + [f"{n}^{k}" for n, k in zip(names, e) if k]
        parts.append("*".join(factors))
    return " + ".join(parts) if parts else "0"


def test_random_explicit_odes_compile_and_verify():
    # 50 random explicit equations of order <= 3, rhs degree <= 4
    rng = random.Random(61)
    for _ in range(50):
        order = rng.randint(1, 3)
        lhs = "y" + "'" * order
        names = ["t", "y"] + ["y" + "'" * k for k in range(1, order)]
        rhs = random_rhs(rng, names, 4)
        sys_ = build_system(parse_problem_file(f"ode: {lhs} = {rhs}\n"))
        assert verify_section(sys_).passed


def test_random_implicit_odes_compile_and_verify():
    # degree-2 relations in the top derivative, checked the same way
    rng = random.Random(62)
    checked = 0
    while checked < 20:
        rhs = random_rhs(rng, ["t", "y"], 3)
        text = f"ode: y'^2 = {rhs}\n"
        try:
            sys_ = build_system(parse_problem_file(text))
        except Exception:
            continue
        assert verify_section(sys_).passed
        checked += 1


@settings(max_examples=50, deadline=None)
@given(POLYS, POLYS, POLYS)
def test_poly_gcd_divides_both(p, q, r):
    from dvarkit.algebra import poly_divmod, poly_gcd

    if p.is_zero() or q.is_zero() or r.is_zero():
        return
    g = poly_gcd(p * q, p * r)
    for prod in (p * q, p * r):
        _, rem = poly_divmod(prod, [g])
        assert rem.is_zero()
