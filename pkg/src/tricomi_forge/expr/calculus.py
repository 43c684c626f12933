"""Differentiation and rule-based antidifferentiation.

The antidifferentiator is total exactly on the documented integrable class:
finite sums of terms  c * x^m * y^n * g(lam*x + mu*y + kap)  with rational
constants, nonnegative integer powers, and g one of sin/cos/exp (or absent).
For integration along v the term must either carry no sin/cos/exp involving
v, or consist of a single first-power sin/cos/exp whose argument is linear
in v, multiplied by a factor free of v. Everything else returns None; there
is no search and no integration by parts.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Optional

from .nodes import (
    Constant, Cos, ExpFn, Expr, Power, Product, Sin, Sum, Var, Variable,
    ONE, ZERO, add, contains, cos, exp, mul, power, simplify, sin,
)

__all__ = ["differentiate", "antiderivative", "definite_integral", "IllegalBound"]


class IllegalBound(ValueError):
    """An integration bound contains the integration variable."""


def differentiate(e: Expr, v: Var) -> Expr:
    """Partial derivative of ``e`` with respect to ``v``, in canonical form."""
    return _derivative(simplify(e), v)


def _derivative(e: Expr, v: Var) -> Expr:
    if isinstance(e, Constant):
        return ZERO
    if isinstance(e, Variable):
        return ONE if e.var is v else ZERO
    if isinstance(e, Sum):
        return add(*(_derivative(t, v) for t in e.terms))
    if isinstance(e, Product):
        parts = []
        for i, factor in enumerate(e.factors):
            rest = e.factors[:i] + e.factors[i + 1:]
            parts.append(mul(_derivative(factor, v), *rest))
        return add(*parts)
    if isinstance(e, Power):
        return mul(Constant(Fraction(e.exponent)), power(e.base, e.exponent - 1),
                   _derivative(e.base, v))
    if isinstance(e, Sin):
        return mul(cos(e.arg), _derivative(e.arg, v))
    if isinstance(e, Cos):
        return mul(Constant(Fraction(-1)), sin(e.arg), _derivative(e.arg, v))
    if isinstance(e, ExpFn):
        return mul(exp(e.arg), _derivative(e.arg, v))
    raise TypeError(f"not an Expr node: {e!r}")


def antiderivative(e: Expr, v: Var) -> Optional[Expr]:
    """Antiderivative of ``e`` along ``v`` within the integrable class.

    Returns None when any term falls outside the class; the caller decides
    whether that means an error or a switch to numeric quadrature.
    """
    e = simplify(e)
    terms = e.terms if isinstance(e, Sum) else (e,)
    parts = []
    for term in terms:
        primitive = _integrate_term(term, v)
        if primitive is None:
            return None
        parts.append(primitive)
    return add(*parts)


def _factor_list(term: Expr) -> tuple[Fraction, list[tuple[Expr, int]]]:
    """Decompose a canonical term into coefficient and (base, exponent) pairs."""
    coeff = Fraction(1)
    pairs: list[tuple[Expr, int]] = []
    factors = term.factors if isinstance(term, Product) else (term,)
    for f in factors:
        if isinstance(f, Constant):
            coeff *= f.value
        elif isinstance(f, Power):
            pairs.append((f.base, f.exponent))
        else:
            pairs.append((f, 1))
    return coeff, pairs


def _linear_coefficient(arg: Expr, v: Var) -> Optional[Fraction]:
    """Rational coefficient of ``v`` in ``arg`` if arg = lam*v + mu*other + kap."""
    lam = None
    terms = arg.terms if isinstance(arg, Sum) else (arg,)
    for t in terms:
        if isinstance(t, Constant):
            continue
        if isinstance(t, Variable):
            if t.var is v:
                lam = Fraction(1)
            continue
        if (isinstance(t, Product) and len(t.factors) == 2
                and isinstance(t.factors[0], Constant)
                and isinstance(t.factors[1], Variable)):
            if t.factors[1].var is v:
                lam = t.factors[0].value
            continue
        return None  # nonlinear or irrational structure
    return lam


def _integrate_term(term: Expr, v: Var) -> Optional[Expr]:
    if isinstance(term, Constant):
        return mul(term, Variable(v))

    coeff, pairs = _factor_list(term)
    v_power = 0
    transcendental: Optional[Expr] = None
    free_factors: list[Expr] = []

    for base, k in pairs:
        if isinstance(base, Variable):
            if k < 0:
                return None  # negative powers are outside the class
            if base.var is v:
                v_power = k
            else:
                free_factors.append(power(base, k))
        elif isinstance(base, (Sin, Cos, ExpFn)):
            if transcendental is not None or k != 1:
                return None  # a single first-power sin/cos/exp factor at most
            transcendental = base
        else:
            return None  # sums under negative powers etc.

    if transcendental is None or not contains(transcendental, v):
        # v enters only through v^m: plain power rule, the rest is coefficient.
        if transcendental is not None:
            free_factors.append(transcendental)
        new_coeff = Constant(coeff / (v_power + 1))
        return mul(new_coeff, power(Variable(v), v_power + 1), *free_factors)

    if v_power != 0:
        return None  # needs integration by parts
    lam = _linear_coefficient(transcendental.arg, v)
    if lam is None or lam == 0:
        return None

    if isinstance(transcendental, Sin):
        primitive = mul(Constant(-1 / lam), cos(transcendental.arg))
    elif isinstance(transcendental, Cos):
        primitive = mul(Constant(1 / lam), sin(transcendental.arg))
    else:
        primitive = mul(Constant(1 / lam), exp(transcendental.arg))
    return mul(Constant(coeff), primitive, *free_factors)


def definite_integral(e: Expr, v: Var, lower: Expr, upper: Expr) -> Optional[Expr]:
    """F(upper) - F(lower) for F = antiderivative(e, v), or None.

    Bounds must be free of ``v``, with one exception: a bound that *is* the
    bare variable v denotes the running-bound form (the integral as a
    function of v) and substitutes as the identity.
    """
    from .nodes import substitute

    lower = simplify(lower)
    upper = simplify(upper)
    for bound in (lower, upper):
        if bound == Variable(v):
            continue
        if contains(bound, v):
            raise IllegalBound(
                f"integration bound {bound} contains the integration variable")
    primitive = antiderivative(e, v)
    if primitive is None:
        return None
    return simplify(substitute(primitive, v, upper) - substitute(primitive, v, lower))
