"""First integrals: verification, degree-bounded polynomial/rational
search, Darboux polynomials, (W-)independence, level-set dimensions,
generic fiber degree, and the integrability verdict.

Independence is decided by the characteristic-0 Jacobian criterion,
computed modulo the ideal: k first integrals are independent iff
stacking their gradients under the gradients of the ideal generators
raises the rank by k.  W-independence restricts the gradient columns to
the V-part directions, so relations with coefficients rational in t and
the auxiliary coordinates are caught as well.
"""

from fractions import Fraction

from .algebra import (
    ROLE_AUX,
    ROLE_CONST,
    ROLE_FIBER,
    ROLE_PARAM,
    ROLE_TIME,
    IdealBasis,
    Polynomial,
    RationalFunction,
    groebner_basis,
    ideal_dimension,
    matrix_rank_mod_ideal,
    normal_form,
    nullspace,
    poly_exact_div,
    poly_gcd,
    standard_monomials,
)
from .dvariety import ProductSystem, lie_derivative, v_direction_names
from .errors import DenominatorVanishesOnVariety, InconsistentIdeal
from fractions import Fraction as _F


class FirstIntegral:
    """A rational function with its verification status and provenance."""

    def __init__(self, h, verified, residual=None, excluded_locus=(), provenance="user"):
        self.h = h
        self.verified = verified
        self.residual = residual
        self.excluded_locus = list(excluded_locus)
        self.provenance = provenance

    def __repr__(self):
        state = "verified" if self.verified else "unverified"
        return f"FirstIntegral({self.h}, {state}, {self.provenance})"


class IndependenceReport:
    def __init__(self, rank_all, rank_v, independent, w_independent):
        self.rank_all = rank_all
        self.rank_v = rank_v
        self.independent = independent
        self.w_independent = w_independent

    def __repr__(self):
        return (
            f"IndependenceReport(rank_all={self.rank_all}, rank_v={self.rank_v}, "
            f"independent={self.independent}, w_independent={self.w_independent})"
        )


class IntegrabilityReport:
    def __init__(self, degree_bound, integrals, independence, fiber_degree, verdict, n):
        self.degree_bound = degree_bound
        self.integrals = integrals
        self.independence = independence
        self.fiber_degree = fiber_degree
        self.verdict = verdict
        self.n = n

    def __repr__(self):
        return f"IntegrabilityReport({self.verdict}, {len(self.integrals)} integrals)"


def _as_rf(h, sys):
    if isinstance(h, FirstIntegral):
        h = h.h
    if isinstance(h, Polynomial):
        h = RationalFunction(h)
    if h.registry != sys.registry:
        h = h.relabel(sys.registry)
    return h


def verify_first_integral(h, sys, provenance="user"):
    """Check lie_derivative(h) = 0 on the variety; keeps the residual."""
    h = _as_rf(h, sys)
    residual = lie_derivative(h, sys)
    verified = residual.is_zero()
    locus = [h.den] if not h.den.is_constant() else []
    return FirstIntegral(h, verified, None if verified else residual, locus, provenance)


# ---------------------------------------------------------------------------
# ansatz searches
# ---------------------------------------------------------------------------


def _ansatz_indices(registry):
    return [i for i, r in enumerate(registry.roles) if r != ROLE_CONST]


def _monomials_up_to(registry, indices, degree):
    """Exponent tuples of total degree <= degree over the given indices,
    sorted descending under the registry order."""
    width = len(registry)
    out = []

    def rec(pos, remaining, current):
        if pos == len(indices):
            out.append(tuple(current))
            return
        i = indices[pos]
        for k in range(remaining + 1):
            current[i] = k
            rec(pos + 1, remaining - k, current)
        current[i] = 0

    rec(0, degree, [0] * width)
    key = registry.order_key()
    out.sort(key=key, reverse=True)
    return out


def _section_denominator(sys):
    """Least common multiple of the section denominators."""
    reg = sys.registry
    Q = Polynomial.constant(reg, 1)
    for s in sys.section.values():
        d = s.den
        g = poly_gcd(Q, d)
        Q = poly_exact_div(Q * d, g)
    return Q


def _lie_numerator(p, sys, Qs):
    """Qs * L(p) as a polynomial (Qs clears every section denominator)."""
    total = Qs * p.coefficient_derivation()
    for name, s in sys.section.items():
        factor = poly_exact_div(Qs, s.den) * s.num
        total = total + factor * p.diff(name)
    return total


def _is_constant_function(p, registry):
    """True when p only involves parameters/adjoined constants (a constant
    of the motion for trivial reasons)."""
    scalar_roles = (ROLE_PARAM, ROLE_CONST)
    scalar = set(registry.indices_with_role(*scalar_roles))
    return p.variables_used() <= scalar


def _solve_linear_condition(sys, monomials, condition):
    """Shared nullspace step: condition(mono) -> Polynomial that must vanish
    mod the ideal; returns coefficient vectors in reduced echelon form."""
    columns = []
    row_index = {}
    rows_sparse = []
    for m in monomials:
        poly = condition(Polynomial(sys.registry, {m: Fraction(1)}))
        poly = normal_form(poly, sys.ideal)
        col = {}
        for e, c in poly.terms.items():
            r = row_index.setdefault(e, len(row_index))
            col[r] = c
        columns.append(col)
    nrows = len(row_index)
    matrix = [[Fraction(0)] * len(monomials) for _ in range(nrows)]
    for j, col in enumerate(columns):
        for r, c in col.items():
            matrix[r][j] = c
    return nullspace(matrix, len(monomials))


def _vector_to_poly(vec, monomials, registry):
    return Polynomial(registry, {m: c for m, c in zip(monomials, vec) if c})


def search_polynomial_integrals(sys, degree):
    """Echelon basis of polynomial first integrals of total degree <= degree
    (plain constants filtered out)."""
    if degree < 0:
        raise ValueError("degree must be nonnegative")
    reg = sys.registry
    monomials = _monomials_up_to(reg, _ansatz_indices(reg), degree)
    Qs = _section_denominator(sys)
    vectors = _solve_linear_condition(sys, monomials, lambda p: _lie_numerator(p, sys, Qs))
    found = []
    for vec in vectors:
        p = _vector_to_poly(vec, monomials, reg)
        if p.is_zero() or _is_constant_function(p, reg):
            continue
        fi = verify_first_integral(RationalFunction(p), sys, provenance="polynomial-search")
        if not fi.verified:
            raise AssertionError(f"search produced a non-integral {p}; this is a bug")
        found.append(fi)
    return found


def search_rational_integrals(sys, denominator, num_degree):
    """First integrals P/denominator with deg P <= num_degree, found from
    the linear condition Q*L(P) - P*L(Q) = 0 mod the ideal."""
    reg = sys.registry
    Q = denominator
    if isinstance(Q, RationalFunction):
        if not Q.is_polynomial():
            raise ValueError("denominator proposal must be a polynomial")
        Q = Q.num
    if Q.registry != reg:
        Q = Q.relabel(reg)
    if normal_form(Q, sys.ideal).is_zero():
        raise DenominatorVanishesOnVariety(f"denominator {Q} lies in the ideal")
    Qs = _section_denominator(sys)
    LQ = _lie_numerator(Q, sys, Qs)

    def condition(p):
        return Q * _lie_numerator(p, sys, Qs) - p * LQ

    monomials = _monomials_up_to(reg, _ansatz_indices(reg), num_degree)
    vectors = _solve_linear_condition(sys, monomials, condition)
    found = []
    for vec in vectors:
        p = _vector_to_poly(vec, monomials, reg)
        if p.is_zero():
            continue
        h = RationalFunction(p, Q)
        if h.is_constant() or _is_constant_function(h.num, reg) and h.den.is_constant():
            continue
        fi = verify_first_integral(h, sys, provenance="rational-search")
        if not fi.verified:
            raise AssertionError(f"search produced a non-integral {h}; this is a bug")
        found.append(fi)
    return found


# ---------------------------------------------------------------------------
# Darboux polynomials
# ---------------------------------------------------------------------------


def darboux_polynomials(sys, degree, cofactor_degree=None):
    """All D with deg <= degree and L(D) = K*D mod the ideal (constant D
    excluded).  The bilinear coefficient system is solved with sympy,
    one leading-monomial normalization at a time; every hit is
    re-verified with the exact machinery before being returned."""
    import sympy

    if degree < 1:
        raise ValueError("degree must be >= 1")
    reg = sys.registry
    indices = _ansatz_indices(reg)
    monomials = _monomials_up_to(reg, indices, degree)
    Qs = _section_denominator(sys)
    if cofactor_degree is None:
        cofactor_degree = 0
        for name in sys.section:
            ln = _lie_numerator(Polynomial.variable(reg, name), sys, Qs)
            cofactor_degree = max(cofactor_degree, ln.total_degree() - 1)
        cofactor_degree = max(cofactor_degree, 0)
    kmonos = _monomials_up_to(reg, indices, cofactor_degree)

    syms = [sympy.Symbol(n) for n in reg.names]

    def to_sympy(p):
        expr = sympy.Integer(0)
        for e, c in p.terms.items():
            term = sympy.Rational(c.numerator, c.denominator)
            for i, x in enumerate(e):
                if x:
                    term *= syms[i] ** x
            expr += term
        return expr

    # L-images of the ansatz monomials, reduced mod the ideal
    lie_images = []
    for m in monomials:
        p = Polynomial(reg, {m: Fraction(1)})
        lie_images.append(to_sympy(normal_form(_lie_numerator(p, sys, Qs), sys.ideal)))
    gen_exprs = [to_sympy(g) for g in sys.ideal.generators]

    d_syms = [sympy.Symbol(f"_d{j}") for j in range(len(monomials))]
    k_syms = [sympy.Symbol(f"_k{j}") for j in range(len(kmonos))]
    mono_exprs = [to_sympy(Polynomial(reg, {m: Fraction(1)})) for m in monomials]
    kmono_exprs = [to_sympy(Polynomial(reg, {m: Fraction(1)})) for m in kmonos]

    found = []
    seen = set()
    for lead in range(len(monomials)):
        me = monomials[lead]
        if not any(me[i] for i in indices):
            continue  # constant leading monomial: D would be constant
        subs = {d_syms[j]: sympy.Integer(0) for j in range(lead)}
        subs[d_syms[lead]] = sympy.Integer(1)
        D_expr = sum(
            subs.get(d_syms[j], d_syms[j]) * mono_exprs[j] for j in range(len(monomials))
        )
        LD_expr = sum(
            subs.get(d_syms[j], d_syms[j]) * lie_images[j] for j in range(len(monomials))
        )
        K_expr = sum(k_syms[b] * kmono_exprs[b] for b in range(len(kmonos)))
        residual = sympy.expand(LD_expr - K_expr * D_expr)
        if gen_exprs:
            residual = sympy.reduced(residual, gen_exprs, syms)[1]
        unknowns = d_syms[lead + 1 :] + k_syms
        eqs = sympy.Poly(residual, *syms).coeffs() if residual != 0 else []
        try:
            sols = sympy.solve(eqs, unknowns, dict=True) if eqs else [{}]
        except Exception:
            continue
        for sol in sols:
            values = {}
            ok = True
            for j in range(lead + 1, len(monomials)):
                v = sol.get(d_syms[j], sympy.Integer(0))
                v = v.subs({u: 0 for u in unknowns if u not in sol})
                if not v.is_rational:
                    ok = False
                    break
                values[j] = _F(int(sympy.fraction(v)[0]), int(sympy.fraction(v)[1]))
            if not ok:
                continue
            terms = {monomials[lead]: Fraction(1)}
            for j, v in values.items():
                if v:
                    terms[monomials[j]] = v
            D = Polynomial(reg, terms)
            nf_D = normal_form(D, sys.ideal)
            if nf_D.is_zero() or _is_constant_function(D, reg):
                continue
            LD = lie_derivative(D, sys)
            cof = _cofactor_of(D, LD, sys)
            if cof is None:
                continue
            key = str(D)
            if key in seen:
                continue
            seen.add(key)
            found.append((D, cof))
    return found


def _cofactor_of(D, LD, sys):
    """Exact cofactor K with L(D) = K*D mod the ideal, or None."""
    if LD.is_zero():
        return RationalFunction(Polynomial.zero(sys.registry))
    K = LD / RationalFunction(D)
    check = lie_derivative(D, sys) - K * RationalFunction(D)
    if not normal_form(check, sys.ideal).is_zero():
        return None
    return K


# ---------------------------------------------------------------------------
# independence and dimensions
# ---------------------------------------------------------------------------


def _gradient(rf, names, registry):
    return [rf.diff(n) for n in names]


def _direction_names(sys, v_only):
    reg = sys.registry
    if v_only:
        return list(v_direction_names(sys))
    names = [reg.names[i] for i in reg.indices_with_role(ROLE_FIBER, ROLE_AUX)]
    t = reg.time_name
    return ([t] if t is not None else []) + names


def _jacobian_rank(hs, sys, v_only):
    names = _direction_names(sys, v_only)
    gen_rows = [
        _gradient(RationalFunction(g), names, sys.registry) for g in sys.ideal.generators
    ]
    h_rows = [_gradient(_as_rf(h, sys), names, sys.registry) for h in hs]
    base = matrix_rank_mod_ideal(gen_rows, sys.ideal) if gen_rows else 0
    full = matrix_rank_mod_ideal(gen_rows + h_rows, sys.ideal) if gen_rows + h_rows else 0
    return base, full


def independence_test(hs, sys):
    """Jacobian-criterion independence over all directions (incl. t) and
    over the V-part directions only."""
    hs = list(hs)
    base_all, full_all = _jacobian_rank(hs, sys, v_only=False)
    base_v, full_v = _jacobian_rank(hs, sys, v_only=True)
    return IndependenceReport(
        rank_all=full_all,
        rank_v=full_v,
        independent=full_all == base_all + len(hs),
        w_independent=full_v == base_v + len(hs),
    )


def w_independence_test(hs, sys):
    """Independence with coefficients allowed to be rational in t and the
    auxiliary coordinates: rank over V-part directions only."""
    return independence_test(hs, sys)


def _adjoin_constants(sys, hs):
    """Extend the registry by fresh constants c_i and return the level-set
    generators ideal + <num(h_i - c_i)>."""
    reg = sys.registry
    names = []
    i = 1
    while len(names) < len(hs):
        cand = f"c{i}"
        if cand not in reg and cand not in names:
            names.append(cand)
        i += 1
    ext = reg.extend(names, ROLE_CONST)
    gens = [g.relabel(ext) for g in sys.ideal.generators]
    for name, h in zip(names, hs):
        h = _as_rf(h, sys)
        c = Polynomial.variable(ext, name)
        gens.append(h.num.relabel(ext) - c * h.den.relabel(ext))
    return ext, gens


def level_set_dimension(hs, sys, restrict_to_v=False):
    """Dimension of the joint level set of the integrals at generic values,
    counted in the (t, fiber[, aux]) directions."""
    hs = list(hs)
    for h in hs:
        if isinstance(h, FirstIntegral) and not h.verified:
            raise ValueError("level_set_dimension expects verified integrals")
    ext, gens = _adjoin_constants(sys, hs)
    counted = set(ext.indices_with_role(ROLE_FIBER))
    t = ext.time_index
    if t is not None:
        counted.add(t)
    if not restrict_to_v:
        counted |= set(ext.indices_with_role(ROLE_AUX))
    dim = ideal_dimension(IdealBasis(ext, gens), counted)
    if dim < 0:
        raise InconsistentIdeal("level-set system has no solutions")
    return dim


def generic_fiber_degree(hs, sys):
    """Multiplicity-counted number of V-points above a generic tuple of
    constant values of the integrals; "infinite" when the level system is
    not zero-dimensional over the base."""
    hs = list(hs)
    ext, gens = _adjoin_constants(sys, hs)
    v_names = v_direction_names(sys)
    counted = tuple(ext.index(n) for n in v_names)
    rest = tuple(i for i in range(len(ext)) if i not in counted)
    gb = groebner_basis(IdealBasis(ext, gens, (counted, rest)))
    monos = standard_monomials(gb, set(counted))
    if monos is None:
        return "infinite"
    if not monos:
        raise InconsistentIdeal("level-set system has no solutions")
    return len(monos)


# ---------------------------------------------------------------------------
# the verdict pipeline
# ---------------------------------------------------------------------------


def integrability_report(sys, degree_bound=4, user_integrals=(), denominators=()):
    """Search, filter to a maximal W-independent subset (greedy in echelon
    order), and classify: internal / almost_internal / not determined."""
    candidates = []
    for h in user_integrals:
        fi = h if isinstance(h, FirstIntegral) else verify_first_integral(h, sys)
        if fi.verified:
            candidates.append(fi)
    candidates.extend(search_polynomial_integrals(sys, degree_bound))
    # denominators of known integrals are natural search denominators too
    dens = list(denominators)
    for fi in candidates:
        Q = fi.h.den
        if not Q.is_constant() and all(Q != R for R in dens):
            dens.append(Q)
    for Q in dens:
        candidates.extend(search_rational_integrals(sys, Q, degree_bound))

    n = sys.dimension_of_v()
    v_names = _direction_names(sys, v_only=True)
    gen_rows = [
        _gradient(RationalFunction(g), v_names, sys.registry) for g in sys.ideal.generators
    ]
    base = matrix_rank_mod_ideal(gen_rows, sys.ideal) if gen_rows else 0
    selected = []
    rows = list(gen_rows)
    for fi in candidates:
        cand_rows = rows + [_gradient(fi.h, v_names, sys.registry)]
        if matrix_rank_mod_ideal(cand_rows, sys.ideal) == base + len(selected) + 1:
            selected.append(fi)
            rows = cand_rows
        if len(selected) == n:
            break

    fiber_degree = None
    if len(selected) == n and n > 0:
        fiber_degree = generic_fiber_degree(selected, sys)
    if fiber_degree == 1:
        verdict = "internal"
    elif isinstance(fiber_degree, int) and fiber_degree > 1:
        verdict = "almost_internal"
    else:
        verdict = f"not_determined_at_degree_{degree_bound}"
    independence = independence_test(selected, sys) if selected else IndependenceReport(0, 0, True, True)
    return IntegrabilityReport(degree_bound, selected, independence, fiber_degree, verdict, n)
