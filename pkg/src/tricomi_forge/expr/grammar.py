"""Parsing and rendering of the expression grammar.

    expr   := term (('+'|'-') term)*
    term   := factor ('*' factor)*
    factor := atom ('^' integer)?
    atom   := number | 'x' | 'y' | '(' expr ')' | func '(' expr ')' | '-' atom
    func   := 'sin' | 'cos' | 'exp'
    number := integer | integer '/' integer | decimal

Juxtaposition is not multiplication ("2x" is an error). Decimals are exact:
"0.5" parses to the rational 1/2. Exponents are integers; a negative exponent
may be parenthesized, "x^-2" and "x^(-2)" both work. Rendering emits the same
grammar deterministically from canonical form, so parse(render(e)) returns
simplify(e) for every tree.
"""

from __future__ import annotations

from fractions import Fraction

from .nodes import (
    Constant, Cos, ExpFn, Expr, Power, Product, Sin, Sum, Var, Variable,
    ONE, simplify, _split_coefficient,
)

__all__ = ["parse", "render", "ParseError", "UnknownIdentifier"]


class ParseError(ValueError):
    """Malformed expression text; ``position`` is a character offset."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class UnknownIdentifier(ParseError):
    """Identifier other than x, y, sin, cos, exp."""


_FUNCTIONS = {"sin": Sin, "cos": Cos, "exp": ExpFn}


class _Scanner:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def skip_ws(self) -> None:
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self.skip_ws()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def take(self, char: str) -> bool:
        if self.peek() == char:
            self.pos += 1
            return True
        return False

    def expect(self, char: str) -> None:
        if not self.take(char):
            got = self.peek() or "end of input"
            raise ParseError(f"expected '{char}', got {got!r}", self.pos)

    def at_end(self) -> bool:
        self.skip_ws()
        return self.pos >= len(self.text)

    def digits(self) -> str:
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if self.pos == start:
            raise ParseError("expected digits", self.pos)
        return self.text[start:self.pos]

    def identifier(self) -> str:
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isalpha():
            self.pos += 1
        return self.text[start:self.pos]


def parse(text: str) -> Expr:
    """Parse ``text`` and return its canonical form.

    Raises :class:`ParseError` (with position) on malformed input and
    :class:`UnknownIdentifier` for names outside the grammar.
    """
    scanner = _Scanner(text)
    tree = _parse_expr(scanner)
    if not scanner.at_end():
        raise ParseError(f"unexpected {scanner.peek()!r}", scanner.pos)
    return simplify(tree)


def _parse_expr(s: _Scanner) -> Expr:
    terms = [_parse_term(s)]
    while True:
        if s.take("+"):
            terms.append(_parse_term(s))
        elif s.take("-"):
            terms.append(Product((Constant(Fraction(-1)), _parse_term(s))))
        else:
            break
    return terms[0] if len(terms) == 1 else Sum(tuple(terms))


def _parse_term(s: _Scanner) -> Expr:
    factors = [_parse_factor(s)]
    while s.take("*"):
        factors.append(_parse_factor(s))
    return factors[0] if len(factors) == 1 else Product(tuple(factors))


def _parse_factor(s: _Scanner) -> Expr:
    atom = _parse_atom(s)
    if s.take("^"):
        return Power(atom, _parse_exponent(s))
    return atom


def _parse_exponent(s: _Scanner) -> int:
    if s.take("("):
        sign = -1 if s.take("-") else 1
        s.skip_ws()
        value = sign * int(s.digits())
        s.expect(")")
        return value
    sign = -1 if s.take("-") else 1
    s.skip_ws()
    return sign * int(s.digits())


def _parse_atom(s: _Scanner) -> Expr:
    ch = s.peek()
    if ch == "":
        raise ParseError("unexpected end of input", s.pos)
    if ch == "-":
        s.take("-")
        return Product((Constant(Fraction(-1)), _parse_atom(s)))
    if ch == "(":
        s.take("(")
        inner = _parse_expr(s)
        s.expect(")")
        return inner
    if ch.isdigit() or ch == ".":
        return _parse_number(s)
    if ch.isalpha():
        name = s.identifier()
        if name == "x":
            return Variable(Var.X)
        if name == "y":
            return Variable(Var.Y)
        if name in _FUNCTIONS:
            s.expect("(")
            inner = _parse_expr(s)
            s.expect(")")
            return _FUNCTIONS[name](inner)
        raise UnknownIdentifier(f"unknown identifier {name!r}", s.pos - len(name))
    raise ParseError(f"unexpected {ch!r}", s.pos)


def _parse_number(s: _Scanner) -> Constant:
    s.skip_ws()
    start = s.pos
    intpart = s.digits()
    if s.pos < len(s.text) and s.text[s.pos] == ".":
        s.pos += 1
        fracpart = s.digits()
        return Constant(Fraction(f"{intpart}.{fracpart}"))
    if s.peek() == "/":
        s.take("/")
        s.skip_ws()
        denom = s.digits()
        if int(denom) == 0:
            raise ParseError("zero denominator", start)
        return Constant(Fraction(int(intpart), int(denom)))
    return Constant(Fraction(int(intpart)))


# --------------------------------------------------------------------------
# Rendering. Sums print sign-separated terms; a leading negative term is
# parenthesized when its first factor carries an exponent, because in this
# grammar unary minus binds the atom before '^' ("-x^2" reads as (-x)^2).
# --------------------------------------------------------------------------

def render(e: Expr) -> str:
    """Deterministic grammar string for ``e`` (any tree, canonical or not)."""
    if isinstance(e, Sum):
        parts = []
        for i, term in enumerate(e.terms):
            coeff, _ = _split_coefficient(term)
            if i == 0:
                parts.append(_render_leading(term))
            elif coeff < 0:
                parts.append(" - " + _render_term(_negate(term)))
            else:
                parts.append(" + " + _render_term(term))
        return "".join(parts)
    return _render_leading(e)


def _negate(term: Expr) -> Expr:
    coeff, mono = _split_coefficient(term)
    from .nodes import _with_coefficient

    return _with_coefficient(-coeff, mono)


def _render_leading(term: Expr) -> str:
    coeff, mono = _split_coefficient(term)
    if coeff >= 0:
        return _render_term(term)
    positive = _negate(term)
    if _starts_with_exponent(positive):
        return "-(" + _render_term(positive) + ")"
    return "-" + _render_term(positive)


def _starts_with_exponent(term: Expr) -> bool:
    if isinstance(term, Power):
        return True
    if isinstance(term, Product):
        first = term.factors[0]
        if isinstance(first, Constant):
            return False
        return isinstance(first, Power)
    return False


def _render_term(term: Expr) -> str:
    if isinstance(term, Product):
        return "*".join(_render_factor(f) for f in term.factors)
    return _render_factor(term)


def _render_factor(f: Expr) -> str:
    if isinstance(f, Power):
        base = _render_atom(f.base, parenthesize_always=True)
        if f.exponent < 0:
            return f"{base}^({f.exponent})"
        return f"{base}^{f.exponent}"
    return _render_atom(f, parenthesize_always=False)


def _render_atom(e: Expr, parenthesize_always: bool) -> str:
    if isinstance(e, Constant):
        text = str(e.value)
        if parenthesize_always and e.value < 0:
            return f"({text})"
        return text
    if isinstance(e, Variable):
        return e.var.value
    if isinstance(e, Sin):
        return f"sin({render(e.arg)})"
    if isinstance(e, Cos):
        return f"cos({render(e.arg)})"
    if isinstance(e, ExpFn):
        return f"exp({render(e.arg)})"
    if isinstance(e, (Sum, Product, Power)):
        return f"({render(e)})"
    raise TypeError(f"not an Expr node: {e!r}")
