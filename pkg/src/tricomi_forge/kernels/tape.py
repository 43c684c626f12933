"""Flat stack programs compiled from expression trees.

The numeric paths evaluate expressions millions of times inside adaptive
quadrature; walking the tree each time is the bottleneck. A tape is the
postorder linearization of a canonical tree into opcode/operand arrays that
both the pure-Python and the compiled kernels execute identically: same
evaluation order, same integer-power algorithm, bit-equal results.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..expr.nodes import (
    Constant, Cos, ExpFn, Expr, Power, Product, Sin, Sum, Var, Variable,
)

__all__ = ["Tape", "compile_tape",
           "OP_CONST", "OP_X", "OP_Y", "OP_ADD", "OP_MUL", "OP_POW",
           "OP_SIN", "OP_COS", "OP_EXP"]

OP_CONST = 0
OP_X = 1
OP_Y = 2
OP_ADD = 3
OP_MUL = 4
OP_POW = 5
OP_SIN = 6
OP_COS = 7
OP_EXP = 8


@dataclass(frozen=True, eq=False)
class Tape:
    """Compiled program; compared by identity (ndarray fields)."""

    codes: np.ndarray    # int32, one opcode per instruction
    iargs: np.ndarray    # int32, constant index or power exponent
    consts: np.ndarray   # float64 constant pool
    stack_size: int


def compile_tape(e: Expr) -> Tape:
    codes: list[int] = []
    iargs: list[int] = []
    consts: list[float] = []

    def emit(op: int, iarg: int = 0) -> None:
        codes.append(op)
        iargs.append(iarg)

    def walk(node: Expr) -> None:
        if isinstance(node, Constant):
            consts.append(float(node.value))
            emit(OP_CONST, len(consts) - 1)
        elif isinstance(node, Variable):
            emit(OP_X if node.var is Var.X else OP_Y)
        elif isinstance(node, Sum):
            walk(node.terms[0])
            for term in node.terms[1:]:
                walk(term)
                emit(OP_ADD)
        elif isinstance(node, Product):
            walk(node.factors[0])
            for factor in node.factors[1:]:
                walk(factor)
                emit(OP_MUL)
        elif isinstance(node, Power):
            walk(node.base)
            emit(OP_POW, node.exponent)
        elif isinstance(node, Sin):
            walk(node.arg)
            emit(OP_SIN)
        elif isinstance(node, Cos):
            walk(node.arg)
            emit(OP_COS)
        elif isinstance(node, ExpFn):
            walk(node.arg)
            emit(OP_EXP)
        else:
            raise TypeError(f"not an Expr node: {node!r}")

    walk(e)

    depth = 0
    peak = 1
    for op in codes:
        if op in (OP_CONST, OP_X, OP_Y):
            depth += 1
        elif op in (OP_ADD, OP_MUL):
            depth -= 1
        peak = max(peak, depth)

    return Tape(codes=np.asarray(codes, dtype=np.int32),
                iargs=np.asarray(iargs, dtype=np.int32),
                consts=np.asarray(consts if consts else [0.0], dtype=np.float64),
                stack_size=peak)
