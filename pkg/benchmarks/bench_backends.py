"""Compare the compiled kernels against the pure-Python fallback.

Usage: python benchmarks/bench_backends.py [--repeat N]

Workloads:
  eval-grid   evaluate a symbolic residual on a 201x201 lattice
  nested-quad one evaluation of the construction rule by nested quadrature
  fd-grid     finite-difference residual verification on a 21x21 lattice
"""

import argparse
import time

import numpy as np

from tricomi_forge.expr import X, Y, exp, parse, power
from tricomi_forge.kernels import compile_tape, pykernels
from tricomi_forge.numeric import NumericSolution
from tricomi_forge.tricomi import TricomiProblem

try:
    from tricomi_forge.kernels import _ckernels
except ImportError:
    _ckernels = None


def timeit(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        start = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - start)
    return best


def workloads():
    problem = TricomiProblem(coeff_a=exp(power(X, 2)))
    solution = NumericSolution(problem, Y, tol=1e-10)
    residual_tape = compile_tape(parse("sin(2*x)*exp(y) - 1/3*x^2*y^3 + cos(x)^2"))
    xs_big = np.linspace(-1.0, 1.0, 201)
    ys_big = np.linspace(-1.0, 1.0, 201)
    xs = np.linspace(-1.0, 1.0, 21)
    ys = np.linspace(-1.0, 1.0, 21)

    def eval_grid(impl):
        return lambda: impl.eval_grid(residual_tape, xs_big, ys_big)

    def nested(impl):
        return lambda: impl.construction_value(
            solution._t_tape, solution._w_tape, 0.0, 0.0, 1.0, 1.0, 1e-10)

    def fd_grid(impl):
        return lambda: impl.construction_grid_fd(
            solution._t_tape, solution._w_tape, solution._a_tape,
            0.0, 0.0, xs, ys, 1e-3, 1e-10)

    return [("eval-grid 201x201", eval_grid),
            ("nested-quad point", nested),
            ("fd-grid 21x21", fd_grid)]


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args()

    if _ckernels is None:
        print("compiled backend not built; showing pure-Python times only")

    print(f"{'workload':<22} {'python':>12} {'compiled':>12} {'speedup':>9}")
    for name, make in workloads():
        py_time = timeit(make(pykernels), args.repeat)
        if _ckernels is not None:
            c_time = timeit(make(_ckernels), args.repeat)
            print(f"{name:<22} {py_time:>11.4f}s {c_time:>11.4f}s "
                  f"{py_time / c_time:>8.1f}x")
        else:
            print(f"{name:<22} {py_time:>11.4f}s {'-':>12} {'-':>9}")


if __name__ == "__main__":
    main()
