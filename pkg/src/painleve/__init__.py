"""Nonlinear eigenvalue analysis of the first and second Painleve
transcendents: adaptive integration through movable poles via complex
detours, separatrix shooting by bisection, Richardson extrapolation of the
critical-value tables, and closed-form WKB cross-checks.
"""

__version__ = "0.1.0"

from .asymptotics import (
    RichardsonResult,
    WkbConstants,
    WkbSpec,
    closed_form_constants,
    extract_constant,
    gamma_fn,
    hermitian_quartic_energy,
    richardson,
    wkb_energy,
)
from .classify import ClassificationError, ClassTag, SolutionClass, classify, count_toy_maxima
from .equations import (
    PAINLEVE_I,
    EnergyValue,
    PAINLEVE_II,
    TOY_MODEL,
    BranchSign,
    Equation,
    EquationKind,
    InitialData,
    asymptotic_branch,
    branch_curve,
    energy,
    energy_series,
    equation_from_name,
    fluctuation_integral,
    rhs,
)
from .eigensolver import (
    BisectionError,
    EigenvalueRecord,
    ModeKind,
    PartialTableError,
    SearchMode,
    bisect,
    eigen_table,
    scan_brackets,
    separatrix_check,
    toy_eigen_table,
)
from .integrator import (
    DegenerateDerivativeError,
    Direction,
    IntegrationConfig,
    IntegrationError,
    PoleEvent,
    PurityError,
    State,
    StepUnderflowError,
    Trajectory,
    detour,
    estimate_pole,
    integrate,
)

__all__ = [
    "BisectionError",
    "BranchSign",
    "ClassTag",
    "ClassificationError",
    "DegenerateDerivativeError",
    "Direction",
    "EigenvalueRecord",
    "EnergyValue",
    "Equation",
    "EquationKind",
    "InitialData",
    "IntegrationConfig",
    "IntegrationError",
    "ModeKind",
    "PAINLEVE_I",
    "PAINLEVE_II",
    "PartialTableError",
    "PoleEvent",
    "PurityError",
    "RichardsonResult",
    "SearchMode",
    "SolutionClass",
    "State",
    "StepUnderflowError",
    "TOY_MODEL",
    "Trajectory",
    "WkbConstants",
    "WkbSpec",
    "asymptotic_branch",
    "bisect",
    "branch_curve",
    "classify",
    "closed_form_constants",
    "count_toy_maxima",
    "detour",
    "eigen_table",
    "energy",
    "energy_series",
    "equation_from_name",
    "estimate_pole",
    "extract_constant",
    "fluctuation_integral",
    "gamma_fn",
    "hermitian_quartic_energy",
    "integrate",
    "rhs",
    "richardson",
    "scan_brackets",
    "separatrix_check",
    "toy_eigen_table",
    "wkb_energy",
]
