"""Spectrally accurate solver for multi-order fractional differential
equations in Caputo form, built on simultaneous Jacobi-Pineiro quadratures."""

from .errors import (
    AbscissaeFailureError,
    BalancingFailureError,
    ComplexSpectrumError,
    ConstructionFailureError,
    FhbvmError,
    InvalidParameterError,
    NumericalFailureError,
    SingularMatrixError,
    StepFailureError,
    UnsupportedProblemError,
)
from .mesh import Mesh, build_mesh
from .mop_quadrature import (
    MopRecurrence,
    QuadratureSet,
    balance,
    build_hessenberg,
    build_quadrature,
    mop_recurrence,
    phi_nodes,
    select_qk,
)
from .ortho_poly import (
    GaussRule,
    JacobiBasis,
    eval_basis,
    frac_int_basis,
    gauss_rule,
    make_basis,
    tail_kernels,
)
from .problems import FdeProblem, exact_p3, make_problem, registry, taylor_term
from .solver import (
    SolverConfig,
    StepHistory,
    Trajectory,
    advance,
    dense_eval,
    memory_term,
    mescd,
    solve,
)

__version__ = "0.1.0"

__all__ = [
    "AbscissaeFailureError",
    "BalancingFailureError",
    "ComplexSpectrumError",
    "ConstructionFailureError",
    "FhbvmError",
    "InvalidParameterError",
    "NumericalFailureError",
    "SingularMatrixError",
    "StepFailureError",
    "UnsupportedProblemError",
    "Mesh",
    "build_mesh",
    "MopRecurrence",
    "QuadratureSet",
    "balance",
    "build_hessenberg",
    "build_quadrature",
    "mop_recurrence",
    "phi_nodes",
    "select_qk",
    "GaussRule",
    "JacobiBasis",
    "eval_basis",
    "frac_int_basis",
    "gauss_rule",
    "make_basis",
    "tail_kernels",
    "FdeProblem",
    "exact_p3",
    "make_problem",
    "registry",
    "taylor_term",
    "SolverConfig",
    "StepHistory",
    "Trajectory",
    "advance",
    "dense_eval",
    "memory_term",
    "mescd",
    "solve",
]
