"""Constructing new exact solutions of f_xx + a(x)*f_yy = 0 from known ones.

Given a seed solution t(x, y), the construction rule

    f(x, y) = integral_{y0}^{y} t(x, r) dr
              - integral_{x0}^{x} integral_{x0}^{q} a(s) * t_y(s, y0) ds dq

yields another solution. Iterating from t = 1 generates a whole family.
All integrals here are done symbolically; when the seed or coefficient falls
outside the integrable class, :class:`NotSymbolicallyIntegrable` tells the
caller to switch to the quadrature-based evaluator in tricomi_forge.numeric.

Dummy integration variables are represented by x or y themselves: an
antiderivative with the lower bound substituted in *is* the integral as a
function of its upper bound, so no third variable is ever needed.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction

from .expr import (
    Constant, Expr, Var, X, Y, ZERO,
    antiderivative, contains, differentiate, render, simplify, substitute,
)

__all__ = [
    "TricomiProblem", "SolutionRecord", "DerivationTrace", "ConstructionPath",
    "SeedNotASolution", "NotSymbolicallyIntegrable", "BoundaryHypothesisViolated",
    "DerivationError", "residual_expr", "first_order_residuals",
    "construct_solution", "derivation_trace", "iterate_solutions",
    "dirichlet_solution", "neumann_check",
]


class TricomiError(Exception):
    pass


class SeedNotASolution(TricomiError):
    """The seed's residual did not simplify to zero."""

    def __init__(self, residual: Expr, depth: int | None = None):
        at = f" at depth {depth}" if depth is not None else ""
        super().__init__(f"seed is not a solution{at}: residual = {render(residual)}")
        self.residual = residual
        self.depth = depth


class NotSymbolicallyIntegrable(TricomiError):
    """One of the construction integrals left the integrable class."""

    def __init__(self, which: str, integrand: Expr, depth: int | None = None):
        at = f" at depth {depth}" if depth is not None else ""
        super().__init__(
            f"the {which} is outside the symbolic integrable class{at}: "
            f"integrand {render(integrand)}; use the numeric evaluator instead")
        self.which = which
        self.integrand = integrand
        self.depth = depth


class BoundaryHypothesisViolated(TricomiError):
    """t_y(x, y0) is not identically zero."""

    def __init__(self, boundary_derivative: Expr):
        super().__init__(
            "t_y(x, y0) must vanish identically, got "
            f"{render(boundary_derivative)}")
        self.boundary_derivative = boundary_derivative


class DerivationError(TricomiError):
    """An internal consistency check of the derivation trace failed."""


class ConstructionPath(Enum):
    SYMBOLIC = "symbolic"
    HYBRID = "hybrid"


@dataclass(frozen=True)
class TricomiProblem:
    """Coefficient a(x) plus the base point (x0, y0) of both integrals."""

    coeff_a: Expr
    base_x: Fraction = Fraction(0)
    base_y: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "coeff_a", simplify(self.coeff_a))
        object.__setattr__(self, "base_x", Fraction(self.base_x))
        object.__setattr__(self, "base_y", Fraction(self.base_y))
        if contains(self.coeff_a, Var.Y):
            raise ValueError(f"coefficient a(x) must not depend on y: "
                             f"{render(self.coeff_a)}")


@dataclass(frozen=True)
class SolutionRecord:
    """A constructed solution with its provenance and residual certificate."""

    f: Expr
    seed: Expr
    depth: int
    path: ConstructionPath
    problem: TricomiProblem
    residual: Expr


@dataclass(frozen=True)
class DerivationTrace:
    """Intermediate functions of the first-order-system derivation.

    t is the seed (= f_y), u is f_x, g is the y-only integration function,
    h is the x-only integration function, and f the constructed solution.
    """

    t: Expr
    u: Expr
    g: Expr
    h: Expr
    f: Expr


def residual_expr(problem: TricomiProblem, f: Expr) -> Expr:
    """f_xx + a(x) * f_yy in canonical form; zero iff f solves the equation."""
    f_xx = differentiate(differentiate(f, Var.X), Var.X)
    f_yy = differentiate(differentiate(f, Var.Y), Var.Y)
    return simplify(f_xx + problem.coeff_a * f_yy)


def first_order_residuals(problem: TricomiProblem, u: Expr, v: Expr) -> tuple[Expr, Expr]:
    """Residuals (u_x + a*v_y, u_y - v_x) of the equivalent first-order system."""
    first = simplify(differentiate(u, Var.X)
                     + problem.coeff_a * differentiate(v, Var.Y))
    second = simplify(differentiate(u, Var.Y) - differentiate(v, Var.X))
    return first, second


def _integral_from(e: Expr, v: Var, base: Fraction) -> Expr | None:
    """Antiderivative along v anchored at the base point: F - F[v := base]."""
    primitive = antiderivative(e, v)
    if primitive is None:
        return None
    return simplify(primitive - substitute(primitive, v, Constant(base)))


def _boundary_slope(problem: TricomiProblem, t: Expr) -> Expr:
    """t_y evaluated on the base line y = y0, a function of x."""
    return substitute(differentiate(t, Var.Y), Var.Y, Constant(problem.base_y))


def _construction_pieces(problem: TricomiProblem, t: Expr) -> tuple[Expr, Expr]:
    """The two summands of the construction rule: (y-integral of t, h(x))."""
    term1 = _integral_from(t, Var.Y, problem.base_y)
    if term1 is None:
        raise NotSymbolicallyIntegrable("seed integral along y", t)

    w = simplify(problem.coeff_a * _boundary_slope(problem, t))
    inner = _integral_from(w, Var.X, problem.base_x)
    if inner is None:
        raise NotSymbolicallyIntegrable("inner integral of the double term", w)
    outer = _integral_from(inner, Var.X, problem.base_x)
    if outer is None:
        raise NotSymbolicallyIntegrable("outer integral of the double term", inner)
    return term1, simplify(-outer)


def construct_solution(problem: TricomiProblem, t: Expr, depth: int = 1, *,
                       checked: bool = True) -> SolutionRecord:
    """Apply the construction rule to seed ``t``.

    With ``checked`` (default) the seed's residual is verified symbolically
    first and a nonzero residual raises :class:`SeedNotASolution`. Unchecked
    construction is allowed for experimentation; a record whose own residual
    does not certify to zero is marked ``ConstructionPath.HYBRID``.
    """
    t = simplify(t)
    if checked:
        seed_residual = residual_expr(problem, t)
        if seed_residual != ZERO:
            raise SeedNotASolution(seed_residual)

    term1, h = _construction_pieces(problem, t)
    f = simplify(term1 + h)
    residual = residual_expr(problem, f)
    path = ConstructionPath.SYMBOLIC if residual == ZERO else ConstructionPath.HYBRID
    return SolutionRecord(f=f, seed=t, depth=depth, path=path,
                          problem=problem, residual=residual)


def derivation_trace(problem: TricomiProblem, t: Expr) -> DerivationTrace:
    """Full derivation trace (t, u, g, h, f) for a symbolic seed.

    The g computation intentionally keeps its x-dependent form and checks
    that simplification cancels x; a leftover x means either the seed is
    not a solution or the canonicalizer missed a cancellation, and both are
    reported loudly rather than silently pinning x to a value.
    """
    t = simplify(t)
    seed_residual = residual_expr(problem, t)
    if seed_residual != ZERO:
        raise SeedNotASolution(seed_residual)

    x0, y0 = problem.base_x, problem.base_y
    t_x = differentiate(t, Var.X)
    t_yy = differentiate(differentiate(t, Var.Y), Var.Y)

    term1_u = _integral_from(t_x, Var.Y, y0)
    if term1_u is None:
        raise NotSymbolicallyIntegrable("u integral along y", t_x)
    w = simplify(problem.coeff_a * _boundary_slope(problem, t))
    inner = _integral_from(w, Var.X, x0)
    if inner is None:
        raise NotSymbolicallyIntegrable("inner integral of the double term", w)
    u = simplify(term1_u - inner)

    # g(y): integral from y0 to y of [t_x + integral_x0^x a(s) t_yy(s, r) ds] dr
    z = simplify(problem.coeff_a * t_yy)
    inner_g = _integral_from(z, Var.X, x0)
    if inner_g is None:
        raise NotSymbolicallyIntegrable("inner integral of g", z)
    g = _integral_from(simplify(t_x + inner_g), Var.Y, y0)
    if g is None:
        raise NotSymbolicallyIntegrable("outer integral of g", simplify(t_x + inner_g))
    if contains(g, Var.X):
        raise DerivationError(f"g failed to lose its x dependence: {render(g)}")

    term1, h = _construction_pieces(problem, t)
    if contains(h, Var.Y):
        raise DerivationError(f"h failed to lose its y dependence: {render(h)}")
    f = simplify(term1 + h)

    if simplify(differentiate(f, Var.Y) - t) != ZERO:
        raise DerivationError("f_y does not reproduce the seed")
    if simplify(differentiate(f, Var.X) - u) != ZERO:
        raise DerivationError("f_x does not reproduce u")
    return DerivationTrace(t=t, u=u, g=g, h=h, f=f)


def iterate_solutions(problem: TricomiProblem, seed: Expr, n: int) -> list[SolutionRecord]:
    """Repeatedly apply the construction rule; records have depth 1..n."""
    if n < 1:
        raise ValueError("n must be >= 1")
    seed = simplify(seed)
    records: list[SolutionRecord] = []
    current = seed
    for depth in range(1, n + 1):
        try:
            record = construct_solution(problem, current, depth=depth)
        except SeedNotASolution as exc:
            raise SeedNotASolution(exc.residual, depth=depth) from exc
        except NotSymbolicallyIntegrable as exc:
            raise NotSymbolicallyIntegrable(exc.which, exc.integrand,
                                            depth=depth) from exc
        records.append(record)
        current = record.f
    return records


def dirichlet_solution(problem: TricomiProblem, t: Expr) -> SolutionRecord:
    """Solution with f(x, y0) = 0, valid when t_y(x, y0) vanishes identically.

    Under that hypothesis the double-integral term of the construction rule
    is zero, so f reduces to the y-integral of t and vanishes on y = y0.
    """
    t = simplify(t)
    seed_residual = residual_expr(problem, t)
    if seed_residual != ZERO:
        raise SeedNotASolution(seed_residual)
    slope = _boundary_slope(problem, t)
    if slope != ZERO:
        raise BoundaryHypothesisViolated(slope)

    f = _integral_from(t, Var.Y, problem.base_y)
    if f is None:
        raise NotSymbolicallyIntegrable("seed integral along y", t)
    residual = residual_expr(problem, f)
    path = ConstructionPath.SYMBOLIC if residual == ZERO else ConstructionPath.HYBRID
    return SolutionRecord(f=f, seed=t, depth=1, path=path,
                          problem=problem, residual=residual)


def neumann_check(problem: TricomiProblem, t: Expr, record: SolutionRecord) -> Expr:
    """f_y(x, y0) - t(x, y0) for a constructed record; identically zero.

    The constructed f satisfies the slope condition f_y(x, y0) = t(x, y0),
    so a record built from a seed with boundary values g(x) = t(x, y0)
    solves the corresponding Cauchy-Neumann problem.
    """
    y0 = Constant(problem.base_y)
    f_slope = substitute(differentiate(record.f, Var.Y), Var.Y, y0)
    datum = substitute(simplify(t), Var.Y, y0)
    return simplify(f_slope - datum)
