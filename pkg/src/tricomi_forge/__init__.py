"""tricomi-forge: exact solutions of f_xx + a(x)*f_yy = 0, built and verified.

Feed a known solution t(x, y) into the integral construction rule to obtain
a new one, iterate to grow solution families, derive boundary-value
solutions, and verify everything both symbolically (residual identically
zero) and numerically (quadrature fallback plus grid residual reports).
"""

from .expr import (
    Var, Expr, Constant, Variable, Sum, Product, Power, Sin, Cos, ExpFn,
    X, Y, ZERO, ONE, parse, render, simplify, substitute, evaluate,
    differentiate, antiderivative, definite_integral, equivalent, equivalence,
    ParseError, UnknownIdentifier, IllegalBound, EvalDomainError,
)
from .tricomi import (
    TricomiProblem, SolutionRecord, DerivationTrace, ConstructionPath,
    residual_expr, first_order_residuals, construct_solution, derivation_trace,
    iterate_solutions, dirichlet_solution, neumann_check,
    SeedNotASolution, NotSymbolicallyIntegrable, BoundaryHypothesisViolated,
    DerivationError,
)
from .numeric import (
    Grid, VerificationReport, Method, MaxDepthExceeded,
    quad, numeric_f, NumericSolution, fd_second_derivative, verify_on_grid,
)
from .kernels import backend_name

__version__ = "0.1.0"

__all__ = [
    "Var", "Expr", "Constant", "Variable", "Sum", "Product", "Power",
    "Sin", "Cos", "ExpFn", "X", "Y", "ZERO", "ONE",
    "parse", "render", "simplify", "substitute", "evaluate",
    "differentiate", "antiderivative", "definite_integral",
    "equivalent", "equivalence",
    "ParseError", "UnknownIdentifier", "IllegalBound", "EvalDomainError",
    "TricomiProblem", "SolutionRecord", "DerivationTrace", "ConstructionPath",
    "residual_expr", "first_order_residuals", "construct_solution",
    "derivation_trace", "iterate_solutions", "dirichlet_solution",
    "neumann_check", "SeedNotASolution", "NotSymbolicallyIntegrable",
    "BoundaryHypothesisViolated", "DerivationError",
    "Grid", "VerificationReport", "Method", "MaxDepthExceeded",
    "quad", "numeric_f", "NumericSolution", "fd_second_derivative",
    "verify_on_grid", "backend_name",
]
