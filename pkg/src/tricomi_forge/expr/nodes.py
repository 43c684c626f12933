"""Immutable expression trees over two variables with exact rational constants.

The node grammar is deliberately small: rational constants, the variables x
and y, n-ary sums and products, integer powers, and the unary functions sin,
cos, exp. Every public operation returns trees in a canonical form so that
structural equality (==) doubles as a reliable "same expression" test:

* sums contain no sums, products contain no products;
* like terms are collected with exact fraction arithmetic and products of
  sums are fully distributed;
* at most one constant per sum/product, the product constant leading;
* terms and factors are sorted by a fixed total ordering;
* ``Power(e, 1)`` never appears and single-element sums/products collapse.

Floating point exists only in :func:`evaluate` results, never inside a tree.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Union

__all__ = [
    "Var", "Expr", "Constant", "Variable", "Sum", "Product", "Power",
    "Sin", "Cos", "ExpFn", "X", "Y", "ZERO", "ONE",
    "as_expr", "const", "add", "mul", "power", "sin", "cos", "exp",
    "simplify", "substitute", "contains", "evaluate", "sort_key",
    "equivalent", "equivalence", "EquivalenceResult", "EvalDomainError",
]


class Var(Enum):
    """The two independent variables of the problem domain."""

    X = "x"
    Y = "y"


class EvalDomainError(ArithmeticError):
    """Raised when evaluation hits a negative power of zero."""


class Expr:
    """Base class for expression nodes. Instances are immutable values.

    Arithmetic operators build *canonical* results, so ``x * x + y`` is
    already in the same form :func:`simplify` would produce.
    """

    def __add__(self, other):
        return add(self, as_expr(other))

    def __radd__(self, other):
        return add(as_expr(other), self)

    def __sub__(self, other):
        return add(self, mul(_NEG_ONE, as_expr(other)))

    def __rsub__(self, other):
        return add(as_expr(other), mul(_NEG_ONE, self))

    def __mul__(self, other):
        return mul(self, as_expr(other))

    def __rmul__(self, other):
        return mul(as_expr(other), self)

    def __neg__(self):
        return mul(_NEG_ONE, self)

    def __pow__(self, exponent: int):
        return power(self, exponent)

    def __str__(self):
        from .grammar import render

        return render(self)


@dataclass(frozen=True)
class Constant(Expr):
    value: Fraction


@dataclass(frozen=True)
class Variable(Expr):
    var: Var


@dataclass(frozen=True)
class Sum(Expr):
    terms: tuple[Expr, ...]


@dataclass(frozen=True)
class Product(Expr):
    factors: tuple[Expr, ...]


@dataclass(frozen=True)
class Power(Expr):
    base: Expr
    exponent: int


@dataclass(frozen=True)
class Sin(Expr):
    arg: Expr


@dataclass(frozen=True)
class Cos(Expr):
    arg: Expr


@dataclass(frozen=True)
class ExpFn(Expr):
    arg: Expr


X = Variable(Var.X)
Y = Variable(Var.Y)
ZERO = Constant(Fraction(0))
ONE = Constant(Fraction(1))
_NEG_ONE = Constant(Fraction(-1))

RationalLike = Union[int, Fraction]


def const(value: RationalLike) -> Constant:
    return Constant(Fraction(value))


def as_expr(value: Union[Expr, RationalLike]) -> Expr:
    if isinstance(value, Expr):
        return value
    return Constant(Fraction(value))


# --------------------------------------------------------------------------
# Canonical ordering.
#
# Node kinds rank Constant < Variable(X) < Variable(Y) < Power < Sin < Cos
# < ExpFn < Product < Sum. Powers compare exponent before base (so y^2 sorts
# ahead of x^3), composite nodes compare child-wise, and constant values act
# as the final tiebreak. Sum terms are ordered by their coefficient-stripped
# monomial so that e.g. 1/2*y^2 and y^2 occupy the same slot.
# --------------------------------------------------------------------------

def sort_key(e: Expr):
    if isinstance(e, Constant):
        return (0, e.value)
    if isinstance(e, Variable):
        return (1,) if e.var is Var.X else (2,)
    if isinstance(e, Power):
        return (3, e.exponent, sort_key(e.base))
    if isinstance(e, Sin):
        return (4, sort_key(e.arg))
    if isinstance(e, Cos):
        return (5, sort_key(e.arg))
    if isinstance(e, ExpFn):
        return (6, sort_key(e.arg))
    if isinstance(e, Product):
        return (7, tuple(sort_key(f) for f in e.factors))
    if isinstance(e, Sum):
        return (8, tuple(sort_key(t) for t in e.terms))
    raise TypeError(f"not an Expr node: {e!r}")


def _split_coefficient(term: Expr) -> tuple[Fraction, Expr]:
    """Split a canonical term into (rational coefficient, monomial part)."""
    if isinstance(term, Constant):
        return term.value, ONE
    if isinstance(term, Product) and isinstance(term.factors[0], Constant):
        rest = term.factors[1:]
        mono = rest[0] if len(rest) == 1 else Product(rest)
        return term.factors[0].value, mono
    return Fraction(1), term


def _term_key(term: Expr):
    coeff, mono = _split_coefficient(term)
    return (sort_key(mono), coeff)


def _with_coefficient(coeff: Fraction, mono: Expr) -> Expr:
    if coeff == 0:
        return ZERO
    if mono == ONE:
        return Constant(coeff)
    if coeff == 1:
        return mono
    if isinstance(mono, Product):
        return Product((Constant(coeff),) + mono.factors)
    return Product((Constant(coeff), mono))


# --------------------------------------------------------------------------
# Smart constructors. Arguments must already be canonical; each constructor
# re-establishes canonical form for the combined node.
# --------------------------------------------------------------------------

def add(*terms: Expr) -> Expr:
    collected: dict[Expr, Fraction] = {}
    order: list[Expr] = []

    def accumulate(term: Expr) -> None:
        if isinstance(term, Sum):
            for t in term.terms:
                accumulate(t)
            return
        coeff, mono = _split_coefficient(term)
        if mono not in collected:
            collected[mono] = Fraction(0)
            order.append(mono)
        collected[mono] += coeff

    for term in terms:
        accumulate(term)

    result = [_with_coefficient(collected[m], m) for m in order if collected[m] != 0]
    if not result:
        return ZERO
    if len(result) == 1:
        return result[0]
    result.sort(key=_term_key)
    return Sum(tuple(result))


def mul(*factors: Expr) -> Expr:
    flat: list[Expr] = []

    def flatten(factor: Expr) -> None:
        if isinstance(factor, Product):
            for f in factor.factors:
                flatten(f)
        else:
            flat.append(factor)

    for factor in factors:
        flatten(factor)

    coeff = Fraction(1)
    exponents: dict[Expr, int] = {}
    order: list[Expr] = []
    for f in flat:
        if isinstance(f, Constant):
            if f.value == 0:
                return ZERO
            coeff *= f.value
            continue
        if isinstance(f, Power):
            base, k = f.base, f.exponent
        else:
            base, k = f, 1
        if base not in exponents:
            exponents[base] = 0
            order.append(base)
        exponents[base] += k

    # net exponents first so reciprocal pairs cancel before any distribution
    plain: list[Expr] = []
    sums: list[Sum] = []
    for b in order:
        k = exponents[b]
        if k == 0:
            continue
        if isinstance(b, Sum):
            if k > 0:
                sums.extend([b] * k)
            else:
                plain.append(Power(b, k))
        elif isinstance(b, Constant):
            if b.value == 0 and k < 0:
                plain.append(Power(b, k))  # undefined everywhere; kept opaque
            else:
                coeff *= b.value ** k
        else:
            plain.append(b if k == 1 else Power(b, k))

    if coeff == 0:
        return ZERO
    if sums:
        acc: list[Expr] = [mul(Constant(coeff), *plain)]
        for s in sums:
            acc = [mul(partial, term) for partial in acc for term in s.terms]
        return add(*acc)

    plain.sort(key=sort_key)
    if not plain:
        return Constant(coeff)
    if coeff != 1:
        plain.insert(0, Constant(coeff))
    if len(plain) == 1:
        return plain[0]
    return Product(tuple(plain))


def power(base: Expr, exponent: int) -> Expr:
    if exponent == 0:
        # x^0 normalizes to 1 (the canonical grammar keeps exponents nonzero)
        return ONE
    if exponent == 1:
        return base
    if isinstance(base, Constant):
        if base.value == 0 and exponent < 0:
            return Power(base, exponent)  # undefined everywhere; evaluate raises
        return Constant(base.value ** exponent)
    if isinstance(base, Power):
        return power(base.base, base.exponent * exponent)
    if isinstance(base, Product):
        return mul(*(power(f, exponent) for f in base.factors))
    if isinstance(base, Sum) and exponent > 0:
        acc: list[Expr] = [ONE]
        for _ in range(exponent):
            acc = [mul(partial, term) for partial in acc for term in base.terms]
        return add(*acc)
    return Power(base, exponent)


def sin(arg: Expr) -> Expr:
    if arg == ZERO:
        return ZERO
    return Sin(arg)


def cos(arg: Expr) -> Expr:
    if arg == ZERO:
        return ONE
    return Cos(arg)


def exp(arg: Expr) -> Expr:
    if arg == ZERO:
        return ONE
    return ExpFn(arg)


def simplify(e: Expr) -> Expr:
    """Return the canonical form of ``e``. Total and idempotent."""
    if isinstance(e, Constant):
        return Constant(Fraction(e.value))
    if isinstance(e, Variable):
        return e
    if isinstance(e, Sum):
        return add(*(simplify(t) for t in e.terms))
    if isinstance(e, Product):
        return mul(*(simplify(f) for f in e.factors))
    if isinstance(e, Power):
        return power(simplify(e.base), e.exponent)
    if isinstance(e, Sin):
        return sin(simplify(e.arg))
    if isinstance(e, Cos):
        return cos(simplify(e.arg))
    if isinstance(e, ExpFn):
        return exp(simplify(e.arg))
    raise TypeError(f"not an Expr node: {e!r}")


def substitute(e: Expr, v: Var, replacement: Expr) -> Expr:
    """Replace every occurrence of ``v`` by ``replacement`` and simplify."""
    replacement = simplify(replacement)

    def walk(node: Expr) -> Expr:
        if isinstance(node, Constant):
            return node
        if isinstance(node, Variable):
            return replacement if node.var is v else node
        if isinstance(node, Sum):
            return add(*(walk(t) for t in node.terms))
        if isinstance(node, Product):
            return mul(*(walk(f) for f in node.factors))
        if isinstance(node, Power):
            return power(walk(node.base), node.exponent)
        if isinstance(node, Sin):
            return sin(walk(node.arg))
        if isinstance(node, Cos):
            return cos(walk(node.arg))
        if isinstance(node, ExpFn):
            return exp(walk(node.arg))
        raise TypeError(f"not an Expr node: {node!r}")

    return walk(e)


def contains(e: Expr, v: Var) -> bool:
    """True if variable ``v`` occurs anywhere in ``e``."""
    if isinstance(e, Variable):
        return e.var is v
    if isinstance(e, Constant):
        return False
    if isinstance(e, Sum):
        return any(contains(t, v) for t in e.terms)
    if isinstance(e, Product):
        return any(contains(f, v) for f in e.factors)
    if isinstance(e, Power):
        return contains(e.base, v)
    if isinstance(e, (Sin, Cos, ExpFn)):
        return contains(e.arg, v)
    raise TypeError(f"not an Expr node: {e!r}")


def _int_pow(base: float, exponent: int) -> float:
    """Binary exponentiation; shared verbatim with the compiled kernels."""
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


def evaluate(e: Expr, x: float, y: float) -> float:
    """IEEE double value of ``e`` at (x, y).

    Raises :class:`EvalDomainError` on a negative power of a zero base.
    """
    if isinstance(e, Constant):
        return float(e.value)
    if isinstance(e, Variable):
        return x if e.var is Var.X else y
    if isinstance(e, Sum):
        acc = evaluate(e.terms[0], x, y)
        for t in e.terms[1:]:
            acc += evaluate(t, x, y)
        return acc
    if isinstance(e, Product):
        acc = evaluate(e.factors[0], x, y)
        for f in e.factors[1:]:
            acc *= evaluate(f, x, y)
        return acc
    if isinstance(e, Power):
        return _int_pow(evaluate(e.base, x, y), e.exponent)
    if isinstance(e, Sin):
        return math.sin(evaluate(e.arg, x, y))
    if isinstance(e, Cos):
        return math.cos(evaluate(e.arg, x, y))
    if isinstance(e, ExpFn):
        return math.exp(evaluate(e.arg, x, y))
    raise TypeError(f"not an Expr node: {e!r}")


@dataclass(frozen=True)
class EquivalenceResult:
    """Outcome of an equivalence check.

    ``probabilistic`` is True when canonicalization could not settle the
    question and the verdict rests on point sampling.
    """

    equal: bool
    probabilistic: bool


_SAMPLE_SEED = 0x7215C0
_SAMPLE_COUNT = 32
_SAMPLE_RTOL = 1e-10


def equivalence(e1: Expr, e2: Expr) -> EquivalenceResult:
    """Decide e1 == e2, canonically if possible, else by deterministic sampling."""
    diff = simplify(e1 - e2)
    if diff == ZERO:
        return EquivalenceResult(True, False)
    if isinstance(diff, Constant):
        return EquivalenceResult(False, False)

    a = simplify(e1)
    b = simplify(e2)
    rng = random.Random(_SAMPLE_SEED)
    agreed = 0
    for _ in range(_SAMPLE_COUNT):
        px = rng.uniform(-2.0, 2.0)
        py = rng.uniform(-2.0, 2.0)
        try:
            va = evaluate(a, px, py)
            vb = evaluate(b, px, py)
        except (EvalDomainError, OverflowError):
            continue
        if math.isnan(va) or math.isnan(vb):
            continue
        if abs(va - vb) > _SAMPLE_RTOL * (1.0 + max(abs(va), abs(vb))):
            return EquivalenceResult(False, True)
        agreed += 1
    return EquivalenceResult(agreed > 0, True)


def equivalent(e1: Expr, e2: Expr) -> bool:
    return equivalence(e1, e2).equal
