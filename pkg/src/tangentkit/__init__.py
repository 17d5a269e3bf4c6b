"""Numerical tangent-category calculus on finite-dimensional charts.

Iterated tangent (multi-dual) arithmetic, Lie brackets of charted groups
by two independent constructions, central extensions by 2-cocycles and
their differentiation, simplex integration of algebra cocycles, period
homomorphisms, and lattice/coset arithmetic — every identity verified
numerically at desk scale.
"""

from ._kernels import BACKEND
from .catalog import catalog_listing, get_cocycle, get_lattice, get_omega
from .cocycle import (
    AlgebraCocycle,
    GroupCocycle,
    coboundary_of,
    differentiate_cocycle,
    extend_algebra,
    extend_group,
    mixed_hessian,
    verify_extension_differentiation,
)
from .ekdl import (
    FourierLoopElement,
    dl_quotient,
    ek_cocycle,
    ek_extension_check,
)
from .errors import ChartConsistencyError, DomainError, FiberMismatchError
from .groups import get_group
from .jet import (
    JetScalar,
    JetVector,
    fiber_add,
    fiber_sub,
    flip,
    footprint,
    lambda2,
    seed,
    vertical_lift,
    zero_section,
)
from .lattice import Lattice, QuadraticRational, coset_equal, is_discrete, reduce
from .liegroup import (
    ChartedGroup,
    LieAlgebraData,
    bracket_conjugation,
    bracket_delta,
    structure_constants,
)
from .program import (
    GraphProgram,
    SmoothProgram,
    compose,
    format_program,
    parse_program,
    partial_tangent,
    tangent,
    trace,
)
from .report import Check, Report
from .suites import SUITE_NAMES, run_suite
from .vanest import (
    QuadratureRule,
    TwoCycle,
    check_d2,
    fundamental_cycle,
    integrate_f0,
    period,
    square_rule,
    triangle_rule,
    vanest_cocycle,
)

__version__ = "0.1.0"
