"""Pure-Python twin of the compiled kernels.

Every function here mirrors _ckernels exactly: same evaluation order, same
adaptive-Simpson recursion, same rounding. The compiled module is built with
FP contraction disabled so the two backends produce bit-identical results.
"""

from __future__ import annotations

import math
from functools import lru_cache
from typing import Callable

import numpy as np

from ..expr.nodes import EvalDomainError
from .errors import MaxDepthExceeded
from .tape import (
    Tape, OP_ADD, OP_CONST, OP_COS, OP_EXP, OP_MUL, OP_POW, OP_SIN, OP_X, OP_Y,
)

__all__ = ["eval_tape", "eval_grid", "adaptive_simpson",
           "construction_value", "construction_grid_fd", "MAX_DEPTH"]

MAX_DEPTH = 50


@lru_cache(maxsize=256)
def _unpacked(tape: Tape):
    return (tape.codes.tolist(), tape.iargs.tolist(), tape.consts.tolist(),
            tape.stack_size)


def _sin(v: float) -> float:
    try:
        return math.sin(v)
    except ValueError:  # C libm: sin(inf) is NaN
        return math.nan


def _cos(v: float) -> float:
    try:
        return math.cos(v)
    except ValueError:
        return math.nan


def _exp(v: float) -> float:
    try:
        return math.exp(v)
    except OverflowError:  # C libm: exp overflows to inf
        return math.inf


def _run(codes, iargs, consts, stack, x: float, y: float) -> float:
    top = -1
    for i, op in enumerate(codes):
        if op == OP_CONST:
            top += 1
            stack[top] = consts[iargs[i]]
        elif op == OP_X:
            top += 1
            stack[top] = x
        elif op == OP_Y:
            top += 1
            stack[top] = y
        elif op == OP_ADD:
            stack[top - 1] = stack[top - 1] + stack[top]
            top -= 1
        elif op == OP_MUL:
            stack[top - 1] = stack[top - 1] * stack[top]
            top -= 1
        elif op == OP_POW:
            stack[top] = _int_pow(stack[top], iargs[i])
        elif op == OP_SIN:
            stack[top] = _sin(stack[top])
        elif op == OP_COS:
            stack[top] = _cos(stack[top])
        else:
            stack[top] = _exp(stack[top])
    return stack[0]


def _int_pow(base: float, exponent: int) -> float:
    if exponent < 0:
        if base == 0.0:
            raise EvalDomainError("negative power of zero")
        return 1.0 / _int_pow(base, -exponent)
    result = 1.0
    p = base
    k = exponent
    while k:
        if k & 1:
            result *= p
        k >>= 1
        if k:
            p *= p
    return result


def eval_tape(tape: Tape, x: float, y: float) -> float:
    codes, iargs, consts, size = _unpacked(tape)
    return _run(codes, iargs, consts, [0.0] * size, x, y)


def eval_grid(tape: Tape, xs: np.ndarray, ys: np.ndarray) -> np.ndarray:
    codes, iargs, consts, size = _unpacked(tape)
    stack = [0.0] * size
    out = np.empty((len(xs), len(ys)))
    for i, x in enumerate(xs):
        for j, y in enumerate(ys):
            try:
                out[i, j] = _run(codes, iargs, consts, stack, x, y)
            except EvalDomainError as exc:
                raise EvalDomainError(
                    "negative power of zero at lattice point "
                    f"({float(x)}, {float(y)})") from exc
    return out


def adaptive_simpson(f: Callable[[float], float], a: float, b: float,
                     tol: float) -> float:
    """Adaptive Simpson with Richardson extrapolation; raises on depth 50."""
    if a == b:
        return 0.0
    if a > b:
        return -adaptive_simpson(f, b, a, tol)
    fa = f(a)
    m = 0.5 * (a + b)
    fm = f(m)
    fb = f(b)
    whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb)
    return _simpson_step(f, a, b, fa, fm, fb, whole, tol, 0)


def _simpson_step(f, a, b, fa, fm, fb, whole, tol, depth):
    m = 0.5 * (a + b)
    lm = 0.5 * (a + m)
    rm = 0.5 * (m + b)
    flm = f(lm)
    frm = f(rm)
    left = (m - a) / 6.0 * (fa + 4.0 * flm + fm)
    right = (b - m) / 6.0 * (fm + 4.0 * frm + fb)
    delta = left + right - whole
    if abs(delta) <= 15.0 * tol:
        return left + right + delta / 15.0
    if depth >= MAX_DEPTH:
        raise MaxDepthExceeded()
    half = 0.5 * tol
    return (_simpson_step(f, a, m, fa, flm, fm, left, half, depth + 1)
            + _simpson_step(f, m, b, fm, frm, fb, right, half, depth + 1))


def construction_value(t_tape: Tape, w_tape: Tape, base_x: float, base_y: float,
                       x: float, y: float, tol: float) -> float:
    """Evaluate the construction rule at (x, y) by nested adaptive quadrature.

    The first term integrates the seed along y at fixed x; the second is the
    double integral of w(s) = a(s) * t_y(s, y0), inner tolerance tol/10.
    """
    tc, ti, tk, ts = _unpacked(t_tape)
    wc, wi, wk, ws = _unpacked(w_tape)
    t_stack = [0.0] * ts
    w_stack = [0.0] * ws

    def t_at(r: float) -> float:
        return _run(tc, ti, tk, t_stack, x, r)

    def w_at(s: float) -> float:
        return _run(wc, wi, wk, w_stack, s, 0.0)

    inner_tol = tol * 0.1

    def inner(q: float) -> float:
        try:
            return adaptive_simpson(w_at, base_x, q, inner_tol)
        except MaxDepthExceeded as exc:
            exc.which = exc.which or "inner integral of the double term"
            raise

    try:
        term1 = adaptive_simpson(t_at, base_y, y, tol)
    except MaxDepthExceeded as exc:
        exc.which = exc.which or "seed integral along y"
        raise
    try:
        term2 = adaptive_simpson(inner, base_x, x, tol)
    except MaxDepthExceeded as exc:
        exc.which = exc.which or "outer integral of the double term"
        raise
    return term1 - term2


def construction_grid_fd(t_tape: Tape, w_tape: Tape, a_tape: Tape,
                         base_x: float, base_y: float,
                         xs: np.ndarray, ys: np.ndarray,
                         h: float, tol: float) -> tuple[np.ndarray, np.ndarray]:
    """f and finite-difference residual grids for a quadrature-backed solution.

    Returns (f_grid, residual_grid); the residual border is NaN since the
    five-point stencil only exists at interior lattice points. Repeated
    stencil arguments reuse cached integrals, which leaves every value
    bit-identical to an uncached evaluation.
    """
    tc, ti, tk, ts = _unpacked(t_tape)
    wc, wi, wk, ws = _unpacked(w_tape)
    ac, ai, ak, asz = _unpacked(a_tape)
    t_stack = [0.0] * ts
    w_stack = [0.0] * ws
    a_stack = [0.0] * asz

    inner_tol = tol * 0.1

    def w_at(s: float) -> float:
        return _run(wc, wi, wk, w_stack, s, 0.0)

    def inner(q: float) -> float:
        try:
            return adaptive_simpson(w_at, base_x, q, inner_tol)
        except MaxDepthExceeded as exc:
            exc.which = exc.which or "inner integral of the double term"
            raise

    double_cache: dict[float, float] = {}
    seed_cache: dict[tuple[float, float], float] = {}

    def double_term(xv: float) -> float:
        if xv not in double_cache:
            try:
                double_cache[xv] = adaptive_simpson(inner, base_x, xv, tol)
            except MaxDepthExceeded as exc:
                exc.which = exc.which or "outer integral of the double term"
                raise
        return double_cache[xv]

    def seed_term(xv: float, yv: float) -> float:
        key = (xv, yv)
        if key not in seed_cache:
            def t_at(r: float) -> float:
                return _run(tc, ti, tk, t_stack, xv, r)
            try:
                seed_cache[key] = adaptive_simpson(t_at, base_y, yv, tol)
            except MaxDepthExceeded as exc:
                exc.which = exc.which or "seed integral along y"
                raise
        return seed_cache[key]

    def f_at(xv: float, yv: float) -> float:
        return seed_term(xv, yv) - double_term(xv)

    nx, ny = len(xs), len(ys)
    f_grid = np.empty((nx, ny))
    res_grid = np.full((nx, ny), math.nan)
    for i in range(nx):
        for j in range(ny):
            f_grid[i, j] = f_at(xs[i], ys[j])

    inv_h2 = 1.0 / (h * h)
    for i in range(1, nx - 1):
        for j in range(1, ny - 1):
            xv, yv = xs[i], ys[j]
            center = f_grid[i, j]
            fxx = (f_at(xv + h, yv) - 2.0 * center + f_at(xv - h, yv)) * inv_h2
            fyy = (f_at(xv, yv + h) - 2.0 * center + f_at(xv, yv - h)) * inv_h2
            a_val = _run(ac, ai, ak, a_stack, xv, 0.0)
            res_grid[i, j] = fxx + a_val * fyy
    return f_grid, res_grid
