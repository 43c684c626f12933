from fractions import Fraction

import pytest

from tricomi_forge.expr import (
    Constant, ParseError, Power, Product, Sum, UnknownIdentifier, Variable,
    Var, X, Y, ZERO, cos, parse, power, render, simplify, sin,
)


def test_single_token_variable():
    assert parse("y") == Variable(Var.Y)
    assert parse("x") == Variable(Var.X)


def test_paper_closed_form_structure():
    e = parse("(1/2)*y^2 - (1/6)*x^3")
    expected = Sum((
        Product((Constant(Fraction(1, 2)), Power(Y, 2))),
        Product((Constant(Fraction(-1, 6)), Power(X, 3))),
    ))
    assert e == expected


def test_unbalanced_parenthesis_position():
    with pytest.raises(ParseError) as excinfo:
        parse("cos(x")
    assert excinfo.value.position == 5


@pytest.mark.parametrize("text", ["", "x +", "2x", "x*", "()", "^2", "1//2",
                                  "x^", "x^y", "sin x", "1/0", "x..2"])
def test_malformed_inputs(text):
    with pytest.raises(ParseError):
        parse(text)


@pytest.mark.parametrize("name", ["z", "tan(x)", "sinh(x)", "foo + 1"])
def test_unknown_identifiers(name):
    with pytest.raises(UnknownIdentifier):
        parse(name)


def test_numbers_are_exact_rationals():
    assert parse("0.5") == Constant(Fraction(1, 2))
    assert parse("2.25") == Constant(Fraction(9, 4))
    assert parse("7/3") == Constant(Fraction(7, 3))
    assert parse("12") == Constant(Fraction(12))
    assert parse("-3/4") == Constant(Fraction(-3, 4))


def test_negative_exponents_both_spellings():
    assert parse("x^-2") == parse("x^(-2)") == Power(X, -2)
    assert render(Power(X, -2)) == "x^(-2)"


def test_unary_minus_binds_the_atom():
    # per the grammar, '-' grabs the atom before '^' applies
    assert parse("-x^2") == Power(X, 2)
    assert parse("-(x^2)") == Product((Constant(Fraction(-1)), Power(X, 2)))
    assert parse("-1/6*x^3") == Product((Constant(Fraction(-1, 6)), Power(X, 3)))


def test_no_juxtaposition():
    with pytest.raises(ParseError):
        parse("2 x")


def test_function_calls_and_nesting():
    assert parse("sin(cos(x))") == sin(cos(X))
    assert parse("exp(x + y)^2") == power(parse("exp(x+y)"), 2)


def test_whitespace_insensitive():
    assert parse("  1/2 * y ^ 2 -  1/6*x^3 ") == parse("1/2*y^2-1/6*x^3")


@pytest.mark.parametrize("text, expected", [
    ("1/2*y^2 - 1/6*x^3", "1/2*y^2 - 1/6*x^3"),
    ("-1 + 1/2*y^2 + cos(x)", "-1 + 1/2*y^2 + cos(x)"),
    ("x*x", "x^2"),
    ("y + y + 1", "1 + 2*y"),
    ("-(x^2)", "-(x^2)"),
    ("(x + y)^(-2)", "(x + y)^(-2)"),
    ("0.5*y", "1/2*y"),
])
def test_render_goldens(text, expected):
    assert render(parse(text)) == expected


def test_round_trip_on_goldens():
    for text in ["1/2*y^2 - 1/6*x^3", "-1 + 1/2*y^2 + cos(x)",
                 "sin(2*x + 3*y)", "x^(-1) + (x + y)^(-2)",
                 "-(x^2) - y", "exp(x)^3*cos(y)"]:
        e = parse(text)
        assert parse(render(e)) == e


def test_leading_negative_power_is_parenthesized():
    e = simplify(Product((Constant(Fraction(-1)), Power(X, 2))))
    assert render(e) == "-(x^2)"
    assert parse(render(e)) == e
    e2 = simplify(Sum((Product((Constant(Fraction(-1)), Power(cos(X), 2))), Y)))
    assert parse(render(e2)) == e2


def test_zero_renders_and_parses():
    assert render(ZERO) == "0"
    assert parse("0") == ZERO
