"""D-varieties: ODE compilation, section verification, fibered products,
and Lie derivatives along the section.

A system is a variety (ideal generators in Groebner form) together with
a rational section assigning each fiber/auxiliary variable its
derivative; the time variable always has derivative 1 and constant
parameters have derivative 0.  Generic divisions performed while
compiling are collected in excluded_locus instead of splitting cases.
"""

from .algebra import (
    ROLE_AUX,
    ROLE_FIBER,
    ROLE_PARAM,
    ROLE_TIME,
    IdealBasis,
    Polynomial,
    RationalFunction,
    VariableRegistry,
    groebner_basis,
    normal_form,
    poly_exact_div,
    poly_gcd,
)
from .errors import (
    DegenerateLeadingDerivative,
    DenominatorVanishesOnVariety,
    MalformedRHS,
    NotSolvable,
)
from .parsing import MODE_DVARIETY, MODE_EXPLICIT, MODE_IMPLICIT


def _project(poly, new_registry):
    """Move a polynomial to a registry that may drop unused variables."""
    pos = {}
    for i, n in enumerate(poly.registry.names):
        pos[i] = new_registry.index(n) if n in new_registry else None
    width = len(new_registry)
    out = {}
    for e, c in poly.terms.items():
        ee = [0] * width
        for i, x in enumerate(e):
            if not x:
                continue
            j = pos[i]
            if j is None:
                raise ValueError(f"variable {poly.registry.names[i]!r} not in target registry")
            ee[j] = x
        out[tuple(ee)] = c
    return Polynomial(new_registry, out)


def _project_rf(rf, new_registry):
    return RationalFunction(_project(rf.num, new_registry), _project(rf.den, new_registry))


class DVariety:
    """Variety plus rational section of its shifted tangent bundle."""

    def __init__(self, registry, ideal, section, excluded_locus=(), irreducible=True):
        self.registry = registry
        if not isinstance(ideal, IdealBasis):
            ideal = IdealBasis(registry, ideal)
        if not ideal.groebner:
            ideal = groebner_basis(ideal)
        self.ideal = ideal
        self.section = dict(section)
        self.excluded_locus = _dedupe_locus(excluded_locus)
        self.irreducible = irreducible
        for name in self._section_names():
            if name not in self.section:
                raise ValueError(f"missing section entry for {name!r}")
        for name, rf in self.section.items():
            if normal_form(Polynomial(registry, dict(rf.den.terms)), self.ideal).is_zero():
                raise DenominatorVanishesOnVariety(
                    f"section denominator for {name!r} vanishes on the variety"
                )

    def _section_names(self):
        reg = self.registry
        return [reg.names[i] for i in reg.indices_with_role(ROLE_FIBER, ROLE_AUX)]

    @property
    def fiber_names(self):
        return tuple(self.registry.names[i] for i in self.registry.fiber_indices)

    @property
    def aux_names(self):
        return tuple(self.registry.names[i] for i in self.registry.aux_indices)

    def dimension_of_v(self):
        """Dimension of the underlying variety V (fiber variables cut by the ideal)."""
        from .algebra import ideal_dimension

        return ideal_dimension(self.ideal, self.registry.fiber_indices)

    def __repr__(self):
        return f"{type(self).__name__}(vars={self.registry.names})"


class Fibration(DVariety):
    """D-variety fibered over the time line; section(t) = 1 implicitly."""


class ProductSystem(Fibration):
    """Fibered product over the time line with a recorded w/v split."""

    def __init__(self, registry, ideal, section, w_vars, v_vars, excluded_locus=(), irreducible=True):
        super().__init__(registry, ideal, section, excluded_locus, irreducible)
        self.w_vars = tuple(w_vars)
        self.v_vars = tuple(v_vars)


def _dedupe_locus(polys):
    out = []
    for p in polys:
        if p is None or p.is_zero() or p.is_constant():
            continue
        if all(p != q for q in out):
            out.append(p)
    return out


# ---------------------------------------------------------------------------
# compilation from problem specs
# ---------------------------------------------------------------------------


def _ode_registry(spec):
    reg = spec.registry
    names = [reg.time_name]
    names += [reg.names[i] for i in reg.fiber_indices]
    names += [reg.names[i] for i in reg.indices_with_role(ROLE_PARAM)]
    roles = (
        [ROLE_TIME]
        + [ROLE_FIBER] * len(reg.fiber_indices)
        + [ROLE_PARAM] * len(reg.indices_with_role(ROLE_PARAM))
    )
    return VariableRegistry(names, roles)


def compile_explicit_ode(spec):
    """Order reduction of y^(n) = f(t, y, ..., y^(n-1)) to a trivial variety
    with section (y', y'', ..., f)."""
    if spec.mode != MODE_EXPLICIT:
        raise ValueError("spec is not an explicit ODE")
    reg = _ode_registry(spec)
    fibers = [reg.names[i] for i in reg.fiber_indices]
    allowed = set(reg.names)
    rhs = spec.rhs_or_F
    for i in sorted(rhs.num.variables_used() | rhs.den.variables_used()):
        if spec.registry.names[i] not in allowed:
            raise MalformedRHS(
                f"right-hand side mentions {spec.registry.names[i]!r}, which is not "
                "t, a lower derivative, or a parameter"
            )
    rhs = _project_rf(rhs, reg)
    section = {}
    for k in range(len(fibers) - 1):
        section[fibers[k]] = RationalFunction.variable(reg, fibers[k + 1])
    section[fibers[-1]] = rhs
    locus = [rhs.den] if not rhs.den.is_constant() else []
    return Fibration(reg, IdealBasis(reg, []), section, locus)


def _vanishes_on_hypersurface(F, A):
    # A lies in the radical of <F> iff every irreducible factor of F divides A
    r = F
    while True:
        g = poly_gcd(r, A)
        if g.is_constant():
            return r.is_constant()
        r = poly_exact_div(r, g)


def compile_implicit_ode(spec):
    """One total differentiation of F = 0, then a single generic division
    to solve for the new top derivative."""
    if spec.mode != MODE_IMPLICIT:
        raise ValueError("spec is not an implicit ODE")
    reg = _ode_registry(spec)
    fibers = [reg.names[i] for i in reg.fiber_indices]
    F = _project(spec.rhs_or_F.num, reg)
    if not fibers:
        raise DegenerateLeadingDerivative("equation has no derivative dependence")
    top = fibers[-1]
    A = F.diff(top)
    if A.is_zero():
        raise DegenerateLeadingDerivative(
            f"dF/d{top} is identically zero; differentiate or reduce the order first"
        )
    B = F.coefficient_derivation()
    for k in range(len(fibers) - 1):
        B = B + Polynomial.variable(reg, fibers[k + 1]) * F.diff(fibers[k])
    ideal = groebner_basis(IdealBasis(reg, [F]))
    if _vanishes_on_hypersurface(F, A):
        raise NotSolvable(
            f"dF/d{top} vanishes on the variety; the derived relation cannot be "
            "solved by a single generic division"
        )
    solved = RationalFunction(-B, A)
    section = {}
    for k in range(len(fibers) - 1):
        section[fibers[k]] = RationalFunction.variable(reg, fibers[k + 1])
    section[top] = solved
    locus = [A]
    if not solved.den.is_constant():
        locus.append(solved.den)
    return Fibration(reg, ideal, section, locus)


def build_dvariety(spec):
    """Fibration from explicitly supplied ideal generators and section."""
    if spec.mode != MODE_DVARIETY:
        raise ValueError("spec is not in dvariety mode")
    reg = _ode_registry(spec)
    gens = [_project(g, reg) for g in spec.ideal_gens]
    section = {n: _project_rf(rf, reg) for n, rf in spec.section.items()}
    locus = [rf.den for rf in section.values() if not rf.den.is_constant()]
    return Fibration(reg, IdealBasis(reg, gens), section, locus)


def _aux_fibration(spec):
    """The auxiliary system W assembled from the declared derivation rules."""
    reg = spec.registry
    names = [reg.time_name] + [n for n, _ in spec.aux_w]
    names += [reg.names[i] for i in reg.indices_with_role(ROLE_PARAM)]
    roles = [ROLE_TIME] + [ROLE_FIBER] * len(spec.aux_w)
    roles += [ROLE_PARAM] * len(reg.indices_with_role(ROLE_PARAM))
    wreg = VariableRegistry(names, roles)
    section = {n: _project_rf(rf, wreg) for n, rf in spec.aux_w}
    return Fibration(wreg, IdealBasis(wreg, []), section)


def build_system(spec):
    """Compile a ProblemSpec to its Fibration, producted with W when aux
    rules are present."""
    if spec.mode == MODE_EXPLICIT:
        V = compile_explicit_ode(spec)
    elif spec.mode == MODE_IMPLICIT:
        V = compile_implicit_ode(spec)
    else:
        V = build_dvariety(spec)
    if not spec.aux_w:
        return V
    return fibered_product(_aux_fibration(spec), V)


# ---------------------------------------------------------------------------
# core operations
# ---------------------------------------------------------------------------


def shifted_tangent_residual(P, V):
    """Residual of the shifted-tangent condition for P along the section:
    sum_i dP/dx_i * s_i + dP/dt, reduced modulo the ideal."""
    if P.registry != V.registry:
        P = P.relabel(V.registry)
    total = RationalFunction(P.coefficient_derivation())
    for name, s in V.section.items():
        total = total + s * RationalFunction(P.diff(name))
    return normal_form(total, V.ideal)


class SectionReport:
    """Per-generator residuals of the section condition."""

    def __init__(self, residuals):
        self.residuals = residuals  # list of (generator, residual)

    @property
    def passed(self):
        return all(r.is_zero() for _, r in self.residuals)

    def failures(self):
        return [(g, r) for g, r in self.residuals if not r.is_zero()]

    def __repr__(self):
        state = "pass" if self.passed else "fail"
        return f"SectionReport({state}, {len(self.residuals)} generators)"


def verify_section(V):
    """Check the section condition on every ideal generator."""
    return SectionReport([(g, shifted_tangent_residual(g, V)) for g in V.ideal.generators])


def lie_derivative(h, V):
    """dh/dt + sum s_x * dh/dx over all sectioned variables, mod the ideal."""
    if isinstance(h, Polynomial):
        h = RationalFunction(h)
    if h.registry != V.registry:
        h = h.relabel(V.registry)
    nf_den = normal_form(h.den, V.ideal) if V.ideal.generators else h.den
    if nf_den.is_zero():
        raise DenominatorVanishesOnVariety(f"denominator {h.den} vanishes on the variety")
    t = V.registry.time_name
    total = h.diff(t) if t is not None else RationalFunction(Polynomial.zero(V.registry))
    for name, s in V.section.items():
        total = total + s * h.diff(name)
    return normal_form(total, V.ideal)


def fibered_product(W, V):
    """Join two fibrations over the shared time line; W's fiber variables
    become auxiliary coordinates of the product."""
    if W is None or not W.fiber_names:
        if isinstance(V, ProductSystem):
            return V
        return ProductSystem(
            V.registry, V.ideal, V.section, (), V.fiber_names, V.excluded_locus, V.irreducible
        )
    if W.registry.time_name != V.registry.time_name:
        raise ValueError("fibered product needs a shared time variable")
    taken = set(V.registry.names)
    rename = {}
    for n in W.fiber_names + W.aux_names:
        if n in taken:
            k = 1
            while f"{n}_{k}" in taken:
                k += 1
            rename[n] = f"{n}_{k}"
            taken.add(f"{n}_{k}")
    w_names = [rename.get(n, n) for n in W.fiber_names + W.aux_names]
    v_names = list(V.fiber_names + V.aux_names)
    params = []
    for source in (W.registry, V.registry):
        for i in source.indices_with_role(ROLE_PARAM):
            if source.names[i] not in params:
                params.append(source.names[i])
    names = [V.registry.time_name] + w_names + v_names + params
    roles = [ROLE_TIME] + [ROLE_AUX] * len(w_names) + [ROLE_FIBER] * len(v_names)
    roles += [ROLE_PARAM] * len(params)
    reg = VariableRegistry(names, roles)

    w_renamed = VariableRegistry(
        [rename.get(n, n) for n in W.registry.names], W.registry.roles
    )

    def from_w(p):
        return _project(Polynomial(w_renamed, dict(p.terms)), reg)

    def from_w_rf(rf):
        return RationalFunction(from_w(rf.num), from_w(rf.den))

    gens = [from_w(g) for g in W.ideal.generators] + [_project(g, reg) for g in V.ideal.generators]
    section = {rename.get(n, n): from_w_rf(s) for n, s in W.section.items()}
    section.update({n: _project_rf(s, reg) for n, s in V.section.items()})
    locus = [from_w(p) for p in W.excluded_locus] + [_project(p, reg) for p in V.excluded_locus]
    return ProductSystem(
        reg,
        IdealBasis(reg, gens),
        section,
        tuple(w_names),
        tuple(v_names),
        locus,
        W.irreducible and V.irreducible,
    )


def v_direction_names(sys):
    """The variable names spanning the V-part (all fiber variables)."""
    if isinstance(sys, ProductSystem):
        return sys.v_vars
    return sys.fiber_names
