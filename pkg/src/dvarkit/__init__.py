"""dvarkit: rational D-varieties, first integrals, and degree-bounded
algebraic integrability checks, with a numeric trajectory oracle."""

__version__ = "0.1.0"

from .algebra import (
    IdealBasis,
    Polynomial,
    RationalFunction,
    VariableRegistry,
    coefficient_derivation,
    groebner_basis,
    ideal_dimension,
    matrix_rank_mod_ideal,
    normal_form,
    normalize_ratfunc,
    partial_derivative,
)
from .dvariety import (
    DVariety,
    Fibration,
    ProductSystem,
    build_system,
    compile_explicit_ode,
    compile_implicit_ode,
    fibered_product,
    lie_derivative,
    shifted_tangent_residual,
    verify_section,
)
from .integrals import (
    FirstIntegral,
    IndependenceReport,
    IntegrabilityReport,
    darboux_polynomials,
    generic_fiber_degree,
    independence_test,
    integrability_report,
    level_set_dimension,
    search_polynomial_integrals,
    search_rational_integrals,
    verify_first_integral,
    w_independence_test,
)
from .numeric import Trajectory, check_constancy, integrate_flow
from .parsing import ProblemSpec, emit_problem_file, parse_expression, parse_problem_file
