"""Command-line interface.

Subcommands: construct, iterate, trace, verify, bvp. Expressions use the
grammar of tricomi_forge.expr.grammar; base points are rationals like "0" or
"-1/2". Output is byte-deterministic for fixed inputs: text (default), json,
or csv (verify only).

Exit codes: 0 success; 2 malformed input or configuration; 3 a mathematical
precondition failed (seed not a solution, boundary hypothesis violated,
integrand outside the symbolic class); 4 numeric non-convergence.

TRICOMI_FORGE_QUAD_TOL overrides the default quadrature tolerance; the
--quad-tol flag wins over the environment.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .expr import (
    EvalDomainError, Expr, ParseError, Var, contains, parse, render,
)
from .numeric import (
    DEFAULT_FD_STEP, DEFAULT_QUAD_TOL, Grid, MaxDepthExceeded, Method,
    NumericSolution, VerificationReport, grid_values, verify_on_grid,
)
from .tricomi import (
    BoundaryHypothesisViolated, NotSymbolicallyIntegrable, SeedNotASolution,
    SolutionRecord, TricomiProblem, construct_solution, derivation_trace,
    dirichlet_solution, iterate_solutions, neumann_check, residual_expr,
)

__all__ = ["main", "run", "RunConfig"]

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_PRECONDITION = 3
EXIT_NONCONVERGENCE = 4

ENV_QUAD_TOL = "TRICOMI_FORGE_QUAD_TOL"


@dataclass(frozen=True)
class RunConfig:
    command: str
    coeff_a: Expr
    seed_t: Expr
    base_x: Fraction
    base_y: Fraction
    n: int
    grid: Grid
    fd_step: float
    quad_tol: float
    output: str
    unchecked: bool
    bvp_kind: str
    out_path: str | None

    @property
    def problem(self) -> TricomiProblem:
        return TricomiProblem(coeff_a=self.coeff_a, base_x=self.base_x,
                              base_y=self.base_y)


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tricomi-forge",
        description="Construct and verify exact solutions of "
                    "f_xx + a(x)*f_yy = 0.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser, outputs=("text", "json")) -> None:
        p.add_argument("--a", required=True, metavar="EXPR",
                       help="coefficient a(x); must not involve y")
        p.add_argument("--t", required=True, metavar="EXPR",
                       help="seed solution t(x,y)")
        p.add_argument("--base-x", default="0", metavar="RAT",
                       help="lower bound x0 of the x-integrals (default 0)")
        p.add_argument("--base-y", default="0", metavar="RAT",
                       help="lower bound y0 of the y-integral (default 0)")
        p.add_argument("--output", choices=outputs, default="text")
        p.add_argument("--out", metavar="PATH", default=None,
                       help="write the payload to PATH instead of stdout")

    p = sub.add_parser("construct", help="apply the construction rule once")
    common(p)
    p.add_argument("--unchecked", action="store_true",
                   help="skip the seed residual check")

    p = sub.add_parser("iterate", help="iterate the construction rule")
    common(p)
    p.add_argument("--n", type=int, default=1, help="number of iterations")
    p.add_argument("--unchecked", action="store_true",
                   help="skip the seed residual check")

    p = sub.add_parser("trace", help="show the derivation trace (t, u, g, h, f)")
    common(p)

    p = sub.add_parser("verify", help="construct and verify on a grid")
    common(p, outputs=("text", "json", "csv"))
    p.add_argument("--x-min", type=float, default=-1.0)
    p.add_argument("--x-max", type=float, default=1.0)
    p.add_argument("--y-min", type=float, default=-1.0)
    p.add_argument("--y-max", type=float, default=1.0)
    p.add_argument("--nx", type=int, default=21)
    p.add_argument("--ny", type=int, default=21)
    p.add_argument("--fd-step", type=float, default=DEFAULT_FD_STEP)
    p.add_argument("--quad-tol", type=float, default=None,
                   help=f"quadrature tolerance (default {DEFAULT_QUAD_TOL}, "
                        f"or ${ENV_QUAD_TOL})")
    p.add_argument("--unchecked", action="store_true",
                   help="skip the seed residual check")

    p = sub.add_parser("bvp", help="boundary-value constructions")
    common(p)
    p.add_argument("--kind", choices=("dirichlet", "neumann"),
                   default="dirichlet")
    return parser


def _parse_rational(text: str, what: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise ParseError(f"{what} is not a rational: {text!r}", 0) from exc


def _resolve_quad_tol(flag_value: float | None) -> float:
    if flag_value is not None:
        tol = flag_value
    else:
        env = os.environ.get(ENV_QUAD_TOL)
        if env is None:
            return DEFAULT_QUAD_TOL
        try:
            tol = float(env)
        except ValueError as exc:
            raise ParseError(f"{ENV_QUAD_TOL} is not a float: {env!r}", 0) from exc
    if tol <= 0:
        raise ParseError("quadrature tolerance must be positive", 0)
    return tol


def _config_from(args: argparse.Namespace) -> RunConfig:
    coeff_a = parse(args.a)
    if contains(coeff_a, Var.Y):
        raise ParseError("coefficient a(x) must not involve y", 0)
    seed_t = parse(args.t)
    grid = Grid(getattr(args, "x_min", -1.0), getattr(args, "x_max", 1.0),
                getattr(args, "y_min", -1.0), getattr(args, "y_max", 1.0),
                getattr(args, "nx", 21), getattr(args, "ny", 21))
    return RunConfig(
        command=args.command,
        coeff_a=coeff_a,
        seed_t=seed_t,
        base_x=_parse_rational(args.base_x, "--base-x"),
        base_y=_parse_rational(args.base_y, "--base-y"),
        n=getattr(args, "n", 1),
        grid=grid,
        fd_step=getattr(args, "fd_step", DEFAULT_FD_STEP),
        quad_tol=_resolve_quad_tol(getattr(args, "quad_tol", None)),
        output=args.output,
        unchecked=getattr(args, "unchecked", False),
        bvp_kind=getattr(args, "kind", "dirichlet"),
        out_path=args.out,
    )


def _problem_payload(problem: TricomiProblem) -> dict:
    return {"a": render(problem.coeff_a),
            "base_x": str(problem.base_x),
            "base_y": str(problem.base_y)}


def _record_payload(record: SolutionRecord) -> dict:
    return {"problem": _problem_payload(record.problem),
            "seed": render(record.seed),
            "depth": record.depth,
            "path": record.path.value,
            "f": render(record.f),
            "residual": render(record.residual)}


def _g17(value: float) -> str:
    return f"{value:.17g}"


def _report_lines(report: VerificationReport, construction: str) -> list[str]:
    wx, wy, wr = report.worst_point
    return [
        f"construction = {construction}",
        f"method = {report.method.value}",
        f"symbolic_zero = {'true' if report.symbolic_zero else 'false'}",
        f"max_abs_residual = {_g17(report.max_abs_residual)}",
        f"mean_abs_residual = {_g17(report.mean_abs_residual)}",
        f"worst_point = ({_g17(wx)}, {_g17(wy)}) residual {_g17(wr)}",
    ]


def _report_payload(config: RunConfig, report: VerificationReport,
                    construction: str, f_text: str | None) -> dict:
    wx, wy, wr = report.worst_point
    payload = {
        "problem": _problem_payload(config.problem),
        "seed": render(config.seed_t),
        "construction": construction,
        "method": report.method.value,
        "grid": {"x_min": report.grid.x_min, "x_max": report.grid.x_max,
                 "y_min": report.grid.y_min, "y_max": report.grid.y_max,
                 "nx": report.grid.nx, "ny": report.grid.ny},
        "symbolic_zero": report.symbolic_zero,
        "max_abs_residual": report.max_abs_residual,
        "mean_abs_residual": report.mean_abs_residual,
        "worst_point": {"x": wx, "y": wy, "residual": wr},
        "fd_step": config.fd_step,
        "quad_tol": config.quad_tol,
    }
    if f_text is not None:
        payload["f"] = f_text
    return payload


def _cmd_construct(config: RunConfig) -> str:
    record = construct_solution(config.problem, config.seed_t,
                                checked=not config.unchecked)
    if config.output == "json":
        return _json_text(_record_payload(record))
    return f"f(x,y) = {render(record.f)}\n"


def _cmd_iterate(config: RunConfig) -> str:
    if config.n < 1:
        raise ParseError("--n must be >= 1", 0)
    records = iterate_solutions(config.problem, config.seed_t, config.n)
    if config.output == "json":
        return _json_text([_record_payload(r) for r in records])
    lines = [f"f_{r.depth}(x,y) = {render(r.f)}" for r in records]
    return "\n".join(lines) + "\n"


def _cmd_trace(config: RunConfig) -> str:
    trace = derivation_trace(config.problem, config.seed_t)
    if config.output == "json":
        return _json_text({
            "problem": _problem_payload(config.problem),
            "t": render(trace.t),
            "u": render(trace.u),
            "g": render(trace.g),
            "h": render(trace.h),
            "f": render(trace.f),
        })
    return ("t(x,y) = " + render(trace.t) + "\n"
            "u(x,y) = " + render(trace.u) + "\n"
            "g(y) = " + render(trace.g) + "\n"
            "h(x) = " + render(trace.h) + "\n"
            "f(x,y) = " + render(trace.f) + "\n")


def _cmd_verify(config: RunConfig) -> str:
    problem = config.problem
    f_text: str | None = None
    try:
        record = construct_solution(problem, config.seed_t,
                                    checked=not config.unchecked)
        evaluable = record.f
        construction = "symbolic"
        f_text = render(record.f)
    except NotSymbolicallyIntegrable:
        if not config.unchecked:
            seed_residual = residual_expr(problem, config.seed_t)
            from .expr import ZERO
            if seed_residual != ZERO:
                raise SeedNotASolution(seed_residual)
        evaluable = NumericSolution(problem, config.seed_t, tol=config.quad_tol)
        construction = "numeric"

    if config.output == "csv":
        f_grid, res_grid, _, _ = grid_values(problem, evaluable, config.grid,
                                             config.fd_step)
        xs, ys = config.grid.xs(), config.grid.ys()
        rows = ["x,y,f,residual"]
        for i in range(config.grid.nx):
            for j in range(config.grid.ny):
                rows.append(",".join((_g17(xs[i]), _g17(ys[j]),
                                      _g17(f_grid[i, j]), _g17(res_grid[i, j]))))
        return "\n".join(rows) + "\n"

    report = verify_on_grid(problem, evaluable, config.grid, config.fd_step)
    if config.output == "json":
        return _json_text(_report_payload(config, report, construction, f_text))
    lines = _report_lines(report, construction)
    if f_text is not None:
        lines.insert(0, f"f(x,y) = {f_text}")
    return "\n".join(lines) + "\n"


def _cmd_bvp(config: RunConfig) -> str:
    problem = config.problem
    if config.bvp_kind == "dirichlet":
        record = dirichlet_solution(problem, config.seed_t)
        if config.output == "json":
            payload = _record_payload(record)
            payload["boundary"] = {"kind": "dirichlet",
                                   "line": f"y = {problem.base_y}",
                                   "value": "0"}
            return _json_text(payload)
        return (f"f(x,y) = {render(record.f)}\n"
                f"f(x, {problem.base_y}) = 0\n")

    record = construct_solution(problem, config.seed_t)
    datum = neumann_check(problem, config.seed_t, record)
    from .expr import substitute, Constant
    boundary_datum = substitute(config.seed_t, Var.Y, Constant(problem.base_y))
    if config.output == "json":
        payload = _record_payload(record)
        payload["boundary"] = {"kind": "neumann",
                               "line": f"y = {problem.base_y}",
                               "datum": render(boundary_datum),
                               "defect": render(datum)}
        return _json_text(payload)
    return (f"f(x,y) = {render(record.f)}\n"
            f"g(x) = t(x, {problem.base_y}) = {render(boundary_datum)}\n"
            f"f_y(x, {problem.base_y}) - g(x) = {render(datum)}\n")


_COMMANDS = {
    "construct": _cmd_construct,
    "iterate": _cmd_iterate,
    "trace": _cmd_trace,
    "verify": _cmd_verify,
    "bvp": _cmd_bvp,
}


def _json_text(payload) -> str:
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"


def run(argv: Sequence[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_INPUT

    try:
        config = _config_from(args)
        payload = _COMMANDS[config.command](config)
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (SeedNotASolution, BoundaryHypothesisViolated,
            NotSymbolicallyIntegrable, EvalDomainError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    except MaxDepthExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NONCONVERGENCE

    if config.out_path is not None:
        try:
            with open(config.out_path, "w", encoding="utf-8") as handle:
                handle.write(payload)
        except OSError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_INPUT
    else:
        sys.stdout.write(payload)
    return EXIT_OK


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
