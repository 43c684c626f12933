# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled twin of pykernels; see that module for the algorithm contracts.

Built with FP contraction disabled so results stay bit-identical to the
pure-Python backend.
"""

from libc.math cimport sin as c_sin, cos as c_cos, exp as c_exp, fabs

import numpy as np

from tricomi_forge.expr.nodes import EvalDomainError
from tricomi_forge.kernels.errors import MaxDepthExceeded

cdef enum:
    MAXDEPTH = 50

cdef enum:
    ERR_NONE = 0
    ERR_DOMAIN = 1
    ERR_DEPTH = 2

cdef enum:
    WHICH_NONE = 0
    WHICH_SEED = 1
    WHICH_INNER = 2
    WHICH_OUTER = 3

_WHICH_LABEL = {
    WHICH_SEED: "seed integral along y",
    WHICH_INNER: "inner integral of the double term",
    WHICH_OUTER: "outer integral of the double term",
}


cdef struct TapeRef:
    int* codes
    int* iargs
    double* consts
    int n
    double* stack


cdef double _int_pow(double base, int exponent, int* err):
    cdef double result = 1.0
    cdef double p
    cdef int k
    if exponent < 0:
        if base == 0.0:
            err[0] = ERR_DOMAIN
            return 0.0
        return 1.0 / _int_pow(base, -exponent, err)
    p = base
    k = exponent
    while k:
        if k & 1:
            result *= p
        k >>= 1
        if k:
            p *= p
    return result


cdef double _run(TapeRef* t, double x, double y, int* err):
    cdef int top = -1
    cdef int i, op
    for i in range(t.n):
        op = t.codes[i]
        if op == 0:
            top += 1
            t.stack[top] = t.consts[t.iargs[i]]
        elif op == 1:
            top += 1
            t.stack[top] = x
        elif op == 2:
            top += 1
            t.stack[top] = y
        elif op == 3:
            t.stack[top - 1] = t.stack[top - 1] + t.stack[top]
            top -= 1
        elif op == 4:
            t.stack[top - 1] = t.stack[top - 1] * t.stack[top]
            top -= 1
        elif op == 5:
            t.stack[top] = _int_pow(t.stack[top], t.iargs[i], err)
            if err[0]:
                return 0.0
        elif op == 6:
            t.stack[top] = c_sin(t.stack[top])
        elif op == 7:
            t.stack[top] = c_cos(t.stack[top])
        else:
            t.stack[top] = c_exp(t.stack[top])
    return t.stack[0]


ctypedef double (*integrand_t)(double, void*, int*, int*)


cdef double _step(integrand_t f, void* ctx, double a, double b,
                  double fa, double fm, double fb, double whole,
                  double tol, int depth, int* err, int* which):
    cdef double m = 0.5 * (a + b)
    cdef double lm = 0.5 * (a + m)
    cdef double rm = 0.5 * (m + b)
    cdef double flm = f(lm, ctx, err, which)
    if err[0]:
        return 0.0
    cdef double frm = f(rm, ctx, err, which)
    if err[0]:
        return 0.0
    cdef double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm)
    cdef double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb)
    cdef double delta = left + right - whole
    if fabs(delta) <= 15.0 * tol:
        return left + right + delta / 15.0
    if depth >= MAXDEPTH:
        err[0] = ERR_DEPTH
        return 0.0
    cdef double half = 0.5 * tol
    cdef double first = _step(f, ctx, a, m, fa, flm, fm, left, half, depth + 1,
                              err, which)
    if err[0]:
        return 0.0
    return first + _step(f, ctx, m, b, fm, frm, fb, right, half, depth + 1,
                         err, which)


cdef double _adaptive(integrand_t f, void* ctx, double a, double b,
                      double tol, int* err, int* which):
    if a == b:
        return 0.0
    if a > b:
        return -_adaptive(f, ctx, b, a, tol, err, which)
    cdef double fa = f(a, ctx, err, which)
    if err[0]:
        return 0.0
    cdef double m = 0.5 * (a + b)
    cdef double fm = f(m, ctx, err, which)
    if err[0]:
        return 0.0
    cdef double fb = f(b, ctx, err, which)
    if err[0]:
        return 0.0
    cdef double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb)
    return _step(f, ctx, a, b, fa, fm, fb, whole, tol, 0, err, which)


cdef struct FixedXCtx:
    TapeRef tape
    double x

cdef double _seed_integrand(double r, void* ctx, int* err, int* which):
    cdef FixedXCtx* c = <FixedXCtx*>ctx
    return _run(&c.tape, c.x, r, err)


cdef double _w_integrand(double s, void* ctx, int* err, int* which):
    cdef TapeRef* t = <TapeRef*>ctx
    return _run(t, s, 0.0, err)


cdef struct InnerCtx:
    TapeRef w
    double base_x
    double tol

cdef double _inner_integrand(double q, void* ctx, int* err, int* which):
    cdef InnerCtx* c = <InnerCtx*>ctx
    cdef double v = _adaptive(_w_integrand, &c.w, c.base_x, q, c.tol, err, which)
    if err[0] == ERR_DEPTH and which[0] == WHICH_NONE:
        which[0] = WHICH_INNER
    return v


class _TapeView:
    """Keeps contiguous buffers alive while a TapeRef points at them."""

    def __init__(self, tape):
        self.codes = np.ascontiguousarray(tape.codes, dtype=np.int32)
        self.iargs = np.ascontiguousarray(tape.iargs, dtype=np.int32)
        self.consts = np.ascontiguousarray(tape.consts, dtype=np.float64)
        self.stack = np.empty(max(tape.stack_size, 1), dtype=np.float64)


cdef TapeRef _as_ref(object view):
    cdef TapeRef ref
    cdef int[::1] codes = view.codes
    cdef int[::1] iargs = view.iargs
    cdef double[::1] consts = view.consts
    cdef double[::1] stack = view.stack
    ref.codes = &codes[0]
    ref.iargs = &iargs[0]
    ref.consts = &consts[0]
    ref.n = codes.shape[0]
    ref.stack = &stack[0]
    return ref


cdef _raise_for(int err, int which):
    if err == ERR_DOMAIN:
        raise EvalDomainError("negative power of zero")
    if err == ERR_DEPTH:
        raise MaxDepthExceeded(which=_WHICH_LABEL.get(which))


def eval_tape(tape, double x, double y):
    view = _TapeView(tape)
    cdef TapeRef ref = _as_ref(view)
    cdef int err = ERR_NONE
    cdef double value = _run(&ref, x, y, &err)
    if err:
        _raise_for(err, WHICH_NONE)
    return value


def eval_grid(tape, xs, ys):
    view = _TapeView(tape)
    cdef TapeRef ref = _as_ref(view)
    cdef double[::1] xv = np.ascontiguousarray(xs, dtype=np.float64)
    cdef double[::1] yv = np.ascontiguousarray(ys, dtype=np.float64)
    out = np.empty((xv.shape[0], yv.shape[0]))
    cdef double[:, ::1] ov = out
    cdef int i, j
    cdef int err = ERR_NONE
    for i in range(xv.shape[0]):
        for j in range(yv.shape[0]):
            ov[i, j] = _run(&ref, xv[i], yv[j], &err)
            if err:
                raise EvalDomainError(
                    "negative power of zero at lattice point "
                    f"({xv[i]}, {yv[j]})")
    return out


def construction_value(t_tape, w_tape, double base_x, double base_y,
                       double x, double y, double tol):
    t_view = _TapeView(t_tape)
    w_view = _TapeView(w_tape)
    cdef FixedXCtx tctx
    tctx.tape = _as_ref(t_view)
    tctx.x = x
    cdef InnerCtx ictx
    ictx.w = _as_ref(w_view)
    ictx.base_x = base_x
    ictx.tol = tol * 0.1

    cdef int err = ERR_NONE
    cdef int which = WHICH_NONE
    cdef double term1 = _adaptive(_seed_integrand, &tctx, base_y, y, tol,
                                  &err, &which)
    if err:
        if err == ERR_DEPTH and which == WHICH_NONE:
            which = WHICH_SEED
        _raise_for(err, which)
    cdef double term2 = _adaptive(_inner_integrand, &ictx, base_x, x, tol,
                                  &err, &which)
    if err:
        if err == ERR_DEPTH and which == WHICH_NONE:
            which = WHICH_OUTER
        _raise_for(err, which)
    return term1 - term2


cdef double _double_term(InnerCtx* ictx, double base_x, double tol,
                         dict cache, double xval, int* err, int* which):
    if xval in cache:
        return <double>cache[xval]
    cdef double value = _adaptive(_inner_integrand, ictx, base_x, xval, tol,
                                  err, which)
    if err[0]:
        if err[0] == ERR_DEPTH and which[0] == WHICH_NONE:
            which[0] = WHICH_OUTER
        return 0.0
    cache[xval] = value
    return value


cdef double _seed_term(FixedXCtx* tctx, double base_y, double tol,
                       dict cache, double xval, double yval,
                       int* err, int* which):
    key = (xval, yval)
    if key in cache:
        return <double>cache[key]
    tctx.x = xval
    cdef double value = _adaptive(_seed_integrand, tctx, base_y, yval, tol,
                                  err, which)
    if err[0]:
        if err[0] == ERR_DEPTH and which[0] == WHICH_NONE:
            which[0] = WHICH_SEED
        return 0.0
    cache[key] = value
    return value


cdef double _f_at(FixedXCtx* tctx, InnerCtx* ictx, double base_x, double base_y,
                  double tol, dict dcache, dict scache,
                  double xval, double yval, int* err, int* which):
    cdef double s = _seed_term(tctx, base_y, tol, scache, xval, yval, err, which)
    if err[0]:
        return 0.0
    cdef double d = _double_term(ictx, base_x, tol, dcache, xval, err, which)
    if err[0]:
        return 0.0
    return s - d


def construction_grid_fd(t_tape, w_tape, a_tape, double base_x, double base_y,
                         xs, ys, double h, double tol):
    t_view = _TapeView(t_tape)
    w_view = _TapeView(w_tape)
    a_view = _TapeView(a_tape)
    cdef FixedXCtx tctx
    tctx.tape = _as_ref(t_view)
    tctx.x = 0.0
    cdef TapeRef a_ref = _as_ref(a_view)
    cdef InnerCtx ictx
    ictx.w = _as_ref(w_view)
    ictx.base_x = base_x
    ictx.tol = tol * 0.1

    cdef double[::1] xv = np.ascontiguousarray(xs, dtype=np.float64)
    cdef double[::1] yv = np.ascontiguousarray(ys, dtype=np.float64)
    cdef int nx = xv.shape[0]
    cdef int ny = yv.shape[0]

    f_grid = np.empty((nx, ny))
    res_grid = np.full((nx, ny), np.nan)
    cdef double[:, ::1] fg = f_grid
    cdef double[:, ::1] rg = res_grid

    dcache = {}
    scache = {}
    cdef int err = ERR_NONE
    cdef int which = WHICH_NONE
    cdef int i, j
    cdef double xval, yval, center, fxx, fyy, a_val
    cdef double inv_h2 = 1.0 / (h * h)

    for i in range(nx):
        for j in range(ny):
            fg[i, j] = _f_at(&tctx, &ictx, base_x, base_y, tol, dcache, scache,
                             xv[i], yv[j], &err, &which)
            if err:
                _raise_for(err, which)

    for i in range(1, nx - 1):
        for j in range(1, ny - 1):
            xval = xv[i]
            yval = yv[j]
            center = fg[i, j]
            fxx = (_f_at(&tctx, &ictx, base_x, base_y, tol, dcache, scache,
                         xval + h, yval, &err, &which)
                   - 2.0 * center
                   + _f_at(&tctx, &ictx, base_x, base_y, tol, dcache, scache,
                           xval - h, yval, &err, &which)) * inv_h2
            if err:
                _raise_for(err, which)
            fyy = (_f_at(&tctx, &ictx, base_x, base_y, tol, dcache, scache,
                         xval, yval + h, &err, &which)
                   - 2.0 * center
                   + _f_at(&tctx, &ictx, base_x, base_y, tol, dcache, scache,
                           xval, yval - h, &err, &which)) * inv_h2
            if err:
                _raise_for(err, which)
            a_val = _run(&a_ref, xval, 0.0, &err)
            if err:
                _raise_for(err, WHICH_NONE)
            rg[i, j] = fxx + a_val * fyy
    return f_grid, res_grid
