"""Numeric fallback and independent verification.

When the symbolic construction leaves the integrable class, the same
integral rule is evaluated pointwise by nested adaptive Simpson quadrature
(:func:`numeric_f` / :class:`NumericSolution`). Verification reports measure
the residual f_xx + a(x)*f_yy over a lattice, either by evaluating the
symbolically differentiated residual or by second-order finite differences.

All reductions run in row-major lattice order, so reports are reproducible
bit-for-bit for a fixed backend (and the two backends agree bitwise).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Callable, Literal, Union

import numpy as np

from .expr import EvalDomainError, Expr, ZERO, simplify, substitute, differentiate, Var, Constant
from .kernels import (
    MaxDepthExceeded, Tape, adaptive_simpson, compile_tape,
    construction_grid_fd, construction_value, eval_grid, eval_tape,
)
from .tricomi import TricomiProblem, residual_expr

__all__ = [
    "Grid", "VerificationReport", "Method", "MaxDepthExceeded",
    "DEFAULT_QUAD_TOL", "DEFAULT_FD_STEP",
    "quad", "numeric_f", "NumericSolution", "fd_second_derivative",
    "verify_on_grid", "grid_values",
]

DEFAULT_QUAD_TOL = 1e-10
DEFAULT_FD_STEP = 1e-3


@dataclass(frozen=True)
class Grid:
    """Closed tensor lattice of nx * ny points including all endpoints."""

    x_min: float
    x_max: float
    y_min: float
    y_max: float
    nx: int
    ny: int

    def __post_init__(self):
        if not (self.x_min < self.x_max and self.y_min < self.y_max):
            raise ValueError("grid bounds must satisfy min < max")
        if self.nx < 2 or self.ny < 2:
            raise ValueError("grid needs at least 2 points per axis")

    def xs(self) -> np.ndarray:
        step = (self.x_max - self.x_min) / (self.nx - 1)
        return np.array([self.x_min + i * step for i in range(self.nx)])

    def ys(self) -> np.ndarray:
        step = (self.y_max - self.y_min) / (self.ny - 1)
        return np.array([self.y_min + j * step for j in range(self.ny)])


class Method(Enum):
    SYMBOLIC_EXPR_EVAL = "symbolic_expr_eval"
    FINITE_DIFFERENCE = "finite_difference"


@dataclass(frozen=True)
class VerificationReport:
    grid: Grid
    max_abs_residual: float
    mean_abs_residual: float
    symbolic_zero: bool
    worst_point: tuple[float, float, float]
    method: Method


def quad(f: Callable[[float], float], lower: float, upper: float,
         tol: float = DEFAULT_QUAD_TOL) -> float:
    """Adaptive Simpson integral of ``f`` over [lower, upper].

    Exactly zero for coincident bounds, antisymmetric under bound swap, and
    accurate to about ``tol`` on smooth integrands (not guaranteed for
    pathological ones). Raises :class:`MaxDepthExceeded` past 50 levels of
    subdivision.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    return adaptive_simpson(f, lower, upper, tol)


class NumericSolution:
    """Pointwise evaluator of the construction rule via nested quadrature.

    Callable as f(x, y). The seed t stays symbolic so that t_y comes from
    exact differentiation; only the integrals are numeric. The inner
    integral of the double term runs at tol/10, the outer two at tol.
    """

    def __init__(self, problem: TricomiProblem, t: Expr,
                 tol: float = DEFAULT_QUAD_TOL):
        if tol <= 0:
            raise ValueError("tol must be positive")
        self.problem = problem
        self.t = simplify(t)
        self.tol = tol
        boundary_slope = substitute(differentiate(self.t, Var.Y), Var.Y,
                                    Constant(problem.base_y))
        self._t_tape = compile_tape(self.t)
        self._w_tape = compile_tape(simplify(problem.coeff_a * boundary_slope))
        self._a_tape = compile_tape(problem.coeff_a)
        self._base_x = float(problem.base_x)
        self._base_y = float(problem.base_y)

    def __call__(self, x: float, y: float) -> float:
        return construction_value(self._t_tape, self._w_tape,
                                  self._base_x, self._base_y,
                                  float(x), float(y), self.tol)


def numeric_f(problem: TricomiProblem, t: Expr, x: float, y: float,
              tol: float = DEFAULT_QUAD_TOL) -> float:
    """One-shot :class:`NumericSolution` evaluation at (x, y)."""
    return NumericSolution(problem, t, tol)(x, y)


def fd_second_derivative(f: Callable[[float, float], float],
                         which: Literal["xx", "yy"],
                         x: float, y: float, h: float) -> float:
    """Central second difference along x or y; O(h^2) for C^4 functions."""
    if h <= 0:
        raise ValueError("h must be positive")
    inv_h2 = 1.0 / (h * h)
    if which == "xx":
        return (f(x + h, y) - 2.0 * f(x, y) + f(x - h, y)) * inv_h2
    if which == "yy":
        return (f(x, y + h) - 2.0 * f(x, y) + f(x, y - h)) * inv_h2
    raise ValueError(f"which must be 'xx' or 'yy', not {which!r}")


Evaluable = Union[Expr, Callable[[float, float], float]]


def grid_values(problem: TricomiProblem, f: Evaluable, grid: Grid,
                fd_step: float = DEFAULT_FD_STEP,
                ) -> tuple[np.ndarray, np.ndarray, Method, bool]:
    """Lattice values of f and of the residual f_xx + a(x)*f_yy.

    Symbolic f: derivatives are taken symbolically and the residual is
    evaluated at every lattice point. Callable f: five-point finite
    differences with step ``fd_step``; the residual exists only at interior
    points and the border rows stay NaN.

    Returns (f_grid, residual_grid, method, symbolic_zero).
    """
    xs, ys = grid.xs(), grid.ys()
    if isinstance(f, Expr):
        f = simplify(f)
        residual = residual_expr(problem, f)
        f_grid = eval_grid(compile_tape(f), xs, ys)
        res_grid = eval_grid(compile_tape(residual), xs, ys)
        return f_grid, res_grid, Method.SYMBOLIC_EXPR_EVAL, residual == ZERO

    if fd_step <= 0:
        raise ValueError("fd_step must be positive")
    if isinstance(f, NumericSolution) and f.problem == problem:
        f_grid, res_grid = construction_grid_fd(
            f._t_tape, f._w_tape, f._a_tape, f._base_x, f._base_y, xs, ys,
            fd_step, f.tol)
        return f_grid, res_grid, Method.FINITE_DIFFERENCE, False

    a_tape = compile_tape(problem.coeff_a)
    f_grid = np.empty((grid.nx, grid.ny))
    res_grid = np.full((grid.nx, grid.ny), math.nan)
    for i, x in enumerate(xs):
        for j, y in enumerate(ys):
            f_grid[i, j] = f(x, y)
    inv_h2 = 1.0 / (fd_step * fd_step)
    for i in range(1, grid.nx - 1):
        for j in range(1, grid.ny - 1):
            x, y = xs[i], ys[j]
            center = f_grid[i, j]
            fxx = (f(x + fd_step, y) - 2.0 * center + f(x - fd_step, y)) * inv_h2
            fyy = (f(x, y + fd_step) - 2.0 * center + f(x, y - fd_step)) * inv_h2
            res_grid[i, j] = fxx + eval_tape(a_tape, x, 0.0) * fyy
    return f_grid, res_grid, Method.FINITE_DIFFERENCE, False


def verify_on_grid(problem: TricomiProblem, f: Evaluable, grid: Grid,
                   fd_step: float = DEFAULT_FD_STEP) -> VerificationReport:
    """Residual report over the lattice; see :func:`grid_values`.

    max/mean run over all lattice points for the symbolic method and over
    interior points for the finite-difference method, always in row-major
    order with the first maximizer reported as worst point.
    """
    _, res_grid, method, symbolic_zero = grid_values(problem, f, grid, fd_step)
    xs, ys = grid.xs(), grid.ys()
    max_abs = 0.0
    worst: tuple[float, float, float] | None = None
    total = 0.0
    count = 0
    for i in range(grid.nx):
        for j in range(grid.ny):
            value = res_grid[i, j]
            if math.isnan(value):
                continue
            magnitude = abs(value)
            total += magnitude
            count += 1
            if worst is None or magnitude > max_abs:
                max_abs = magnitude
                worst = (float(xs[i]), float(ys[j]), float(value))
    if worst is None:
        raise ValueError("grid too small: no interior points for FD stencils")
    return VerificationReport(grid=grid, max_abs_residual=max_abs,
                              mean_abs_residual=total / count,
                              symbolic_zero=symbolic_zero,
                              worst_point=worst, method=method)
