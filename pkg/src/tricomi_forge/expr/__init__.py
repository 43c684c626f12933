"""Symbolic expression core: trees, parsing, canonical forms, calculus."""

from .nodes import (
    Var, Expr, Constant, Variable, Sum, Product, Power, Sin, Cos, ExpFn,
    X, Y, ZERO, ONE, as_expr, const, add, mul, power, sin, cos, exp,
    simplify, substitute, contains, evaluate, sort_key,
    equivalent, equivalence, EquivalenceResult, EvalDomainError,
)
from .grammar import parse, render, ParseError, UnknownIdentifier
from .calculus import differentiate, antiderivative, definite_integral, IllegalBound

__all__ = [
    "Var", "Expr", "Constant", "Variable", "Sum", "Product", "Power",
    "Sin", "Cos", "ExpFn", "X", "Y", "ZERO", "ONE",
    "as_expr", "const", "add", "mul", "power", "sin", "cos", "exp",
    "simplify", "substitute", "contains", "evaluate", "sort_key",
    "equivalent", "equivalence", "EquivalenceResult", "EvalDomainError",
    "parse", "render", "ParseError", "UnknownIdentifier",
    "differentiate", "antiderivative", "definite_integral", "IllegalBound",
]
