"""Text surface for superpolynomials: lexer, parser, canonical printer and the
line-oriented machine encoding.

Grammar (ASCII, explicit ``*``)::

    expr     := term (('+' | '-') term)*
    term     := factor ('*' factor)*
    factor   := '-' factor | power
    power    := atom ('^' NUMBER)*
    atom     := NUMBER ['/' NUMBER] | IDENT | '(' expr ')'
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple, Union

from .algebra import Monomial, SuperPolynomial, VariableTable
from .errors import (
    ExprSyntaxError,
    IllegalCharacterError,
    NonNaturalExponentError,
    ParseError,
    UnknownIdentifierError,
)

_PUNCT = {
    "+": "plus",
    "-": "minus",
    "*": "star",
    "^": "caret",
    "(": "lparen",
    ")": "rparen",
    "/": "slash",
}


@dataclass(frozen=True)
class Token:
    kind: str
    lexeme: str
    line: int
    column: int


def tokenize(text: str) -> List[Token]:
    tokens = []
    line, col = 1, 1
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch == "\n":
            line += 1
            col = 1
            i += 1
            continue
        if ch in " \t\r":
            i += 1
            col += 1
            continue
        start_col = col
        if ch.isascii() and ch.isdigit():
            j = i
            while j < n and text[j].isascii() and text[j].isdigit():
                j += 1
            tokens.append(Token("number", text[i:j], line, start_col))
        elif ch.isascii() and (ch.isalpha() or ch == "_"):
            j = i
            while j < n and text[j].isascii() and (text[j].isalnum() or text[j] == "_"):
                j += 1
            tokens.append(Token("identifier", text[i:j], line, start_col))
        elif ch in _PUNCT:
            j = i + 1
            tokens.append(Token(_PUNCT[ch], ch, line, start_col))
        else:
            raise IllegalCharacterError(f"illegal character {ch!r}", line, start_col)
        col += j - i
        i = j
    return tokens


class _Parser:
    def __init__(self, tokens: Sequence[Token], table: VariableTable):
        self.tokens = list(tokens)
        self.pos = 0
        self.table = table

    def peek(self) -> Optional[Token]:
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def advance(self) -> Token:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def _end_position(self):
        if not self.tokens:
            return 1, 1
        last = self.tokens[-1]
        return last.line, last.column + len(last.lexeme)

    def error(self, message, tok: Optional[Token] = None, cls=ExprSyntaxError):
        if tok is None:
            line, col = self._end_position()
        else:
            line, col = tok.line, tok.column
        return cls(message, line, col)

    def expect(self, kind: str) -> Token:
        tok = self.peek()
        if tok is None or tok.kind != kind:
            what = "end of input" if tok is None else repr(tok.lexeme)
            raise self.error(f"expected {kind}, found {what}", tok)
        return self.advance()

    def parse(self) -> SuperPolynomial:
        if not self.tokens:
            raise self.error("empty expression")
        result = self.expr()
        tok = self.peek()
        if tok is not None:
            raise self.error(f"unexpected {tok.lexeme!r}", tok)
        return result

    def expr(self) -> SuperPolynomial:
        result = self.term()
        while True:
            tok = self.peek()
            if tok is None or tok.kind not in ("plus", "minus"):
                return result
            self.advance()
            rhs = self.term()
            result = result + rhs if tok.kind == "plus" else result - rhs

    def term(self) -> SuperPolynomial:
        result = self.factor()
        while True:
            tok = self.peek()
            if tok is None or tok.kind != "star":
                return result
            self.advance()
            result = result * self.factor()

    def factor(self) -> SuperPolynomial:
        tok = self.peek()
        if tok is not None and tok.kind == "minus":
            self.advance()
            return -self.factor()
        return self.power()

    def power(self) -> SuperPolynomial:
        base = self.atom()
        while True:
            tok = self.peek()
            if tok is None or tok.kind != "caret":
                return base
            self.advance()
            exp_tok = self.peek()
            if exp_tok is None or exp_tok.kind != "number":
                raise self.error(
                    "exponent must be a natural number", exp_tok or tok, NonNaturalExponentError
                )
            self.advance()
            nxt = self.peek()
            if nxt is not None and nxt.kind == "slash":
                raise self.error(
                    "exponent must be a natural number", exp_tok, NonNaturalExponentError
                )
            base = base ** int(exp_tok.lexeme)

    def atom(self) -> SuperPolynomial:
        tok = self.peek()
        if tok is None:
            raise self.error("unexpected end of input")
        if tok.kind == "number":
            self.advance()
            value = Fraction(int(tok.lexeme))
            nxt = self.peek()
            if nxt is not None and nxt.kind == "slash":
                self.advance()
                den_tok = self.expect("number")
                den = int(den_tok.lexeme)
                if den == 0:
                    raise self.error("zero denominator", den_tok)
                value /= den
            return SuperPolynomial.constant(self.table, value)
        if tok.kind == "identifier":
            self.advance()
            if tok.lexeme not in self.table:
                raise self.error(
                    f"unknown identifier {tok.lexeme!r}", tok, UnknownIdentifierError
                )
            return SuperPolynomial.var(self.table, tok.lexeme)
        if tok.kind == "lparen":
            self.advance()
            inner = self.expr()
            self.expect("rparen")
            return inner
        raise self.error(f"unexpected {tok.lexeme!r}", tok)


def parse_expression(source: Union[str, Sequence[Token]], table: VariableTable) -> SuperPolynomial:
    """Parse text (or a token list) into a canonical superpolynomial.

    Odd variables raised to a power of 2 or more give 0, as the algebra
    dictates.
    """
    tokens = tokenize(source) if isinstance(source, str) else source
    return _Parser(tokens, table).parse()


# -- printing ---------------------------------------------------------


def monomial_sort_key(m: Monomial, n_odd: int):
    # graded lex: higher total degree first, then larger exponents on earlier variables
    odd_vec = [0] * n_odd
    for i in m.odd:
        odd_vec[i] = 1
    return (-m.degree,) + tuple(-e for e in m.even) + tuple(-x for x in odd_vec)


def format_monomial(m: Monomial, table: VariableTable) -> str:
    parts = []
    for name, e in zip(table.even_vars, m.even):
        if e == 1:
            parts.append(name)
        elif e > 1:
            parts.append(f"{name}^{e}")
    parts.extend(table.odd_vars[i] for i in m.odd)
    return "*".join(parts) if parts else "1"


def format_rational(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def _format_term(m: Monomial, c: Fraction, table: VariableTable) -> str:
    # c is positive here
    if m.is_constant():
        return format_rational(c)
    mono = format_monomial(m, table)
    return mono if c == 1 else f"{format_rational(c)}*{mono}"


def format_canonical(f: SuperPolynomial) -> str:
    if f.is_zero():
        return "0"
    n_odd = f.table.n_odd
    items = sorted(f.items(), key=lambda mc: monomial_sort_key(mc[0], n_odd))
    out = []
    for k, (m, c) in enumerate(items):
        body = _format_term(m, abs(c), f.table)
        if k == 0:
            out.append(body if c > 0 else f"-{body}")
        else:
            out.append(f" + {body}" if c > 0 else f" - {body}")
    return "".join(out)


def format_series(series) -> str:
    """One-line rendering ``c0 + (c1)*hbar + (c2)*hbar^2``; zero orders are skipped."""
    pieces = []
    for k, c in enumerate(series.coeffs):
        if c.is_zero():
            continue
        text = format_canonical(c)
        if k == 0:
            pieces.append(text)
            continue
        h = "hbar" if k == 1 else f"hbar^{k}"
        if len(c) == 1 and next(iter(c.items()))[0].is_constant():
            coeff = next(iter(c.items()))[1]
            mag = "" if abs(coeff) == 1 else f"{format_rational(abs(coeff))}*"
            pieces.append(("-" if coeff < 0 else "") + mag + h)
        else:
            pieces.append(f"({text})*{h}")
    if not pieces:
        return "0"
    line = pieces[0]
    for p in pieces[1:]:
        line += f" - {p[1:]}" if p.startswith("-") else f" + {p}"
    return line


# -- machine encoding ---------------------------------------------------

ENCODING_HEADER = "superbracket-encoding 1"


def table_digest(table: VariableTable) -> str:
    text = "even:" + ",".join(table.even_vars) + ";odd:" + ",".join(table.odd_vars)
    return hashlib.sha256(text.encode("ascii")).hexdigest()[:16]


def _poly_lines(f: SuperPolynomial) -> List[str]:
    n_odd = f.table.n_odd
    items = sorted(f.items(), key=lambda mc: monomial_sort_key(mc[0], n_odd))
    lines = [f"poly {len(items)}"]
    for m, c in items:
        lines.append(f"term {format_monomial(m, f.table)} {c.numerator} {c.denominator}")
    lines.append("end")
    return lines


def to_machine_encoding(obj) -> str:
    """Stable text encoding of a polynomial, a formal series or a check report.

    Polynomials and series start with the header line and the table digest;
    see ``docs/formats.md`` for the full grammar.
    """
    from .deformation import FormalSeries

    if isinstance(obj, SuperPolynomial):
        lines = [ENCODING_HEADER, f"table {table_digest(obj.table)}"] + _poly_lines(obj)
    elif isinstance(obj, FormalSeries):
        lines = [ENCODING_HEADER, f"table {table_digest(obj.table)}", f"series {obj.order}"]
        for k, c in enumerate(obj.coeffs):
            lines.append(f"order {k}")
            lines.extend(_poly_lines(c))
        lines.append("endseries")
    elif hasattr(obj, "encoding_lines"):
        lines = [ENCODING_HEADER] + obj.encoding_lines()
    else:
        raise TypeError(f"cannot encode {type(obj).__name__}")
    return "\n".join(lines) + "\n"


def _parse_monomial(text: str, table: VariableTable) -> Tuple[Monomial, int]:
    # monomials in the encoding are canonical, but parse generally and keep the sign
    p = parse_expression(text, table)
    if len(p) != 1:
        raise ParseError(f"bad monomial {text!r}")
    (m, c), = p.items()
    return m, int(c)


def _read_poly(lines: List[str], pos: int, table: VariableTable) -> Tuple[SuperPolynomial, int]:
    head = lines[pos].split()
    if len(head) != 2 or head[0] != "poly":
        raise ParseError(f"expected 'poly <n>', found {lines[pos]!r}", pos + 1, 1)
    n = int(head[1])
    terms = {}
    for k in range(n):
        parts = lines[pos + 1 + k].split()
        if len(parts) != 4 or parts[0] != "term":
            raise ParseError(f"bad term line {lines[pos + 1 + k]!r}", pos + 2 + k, 1)
        m, sign = _parse_monomial(parts[1], table)
        terms[m] = sign * Fraction(int(parts[2]), int(parts[3]))
    end = pos + 1 + n
    if end >= len(lines) or lines[end] != "end":
        raise ParseError("missing 'end'", end + 1, 1)
    return SuperPolynomial(table, terms), end + 1


def from_machine_encoding(text: str, table: VariableTable):
    """Decode a polynomial or series produced by :func:`to_machine_encoding`."""
    from .deformation import FormalSeries

    lines = [ln.strip() for ln in text.strip().splitlines()]
    if len(lines) < 2 or lines[0] != ENCODING_HEADER:
        raise ParseError("missing encoding header")
    digest = lines[1].split()
    if len(digest) != 2 or digest[0] != "table":
        raise ParseError("missing table digest", 2, 1)
    if digest[1] != table_digest(table):
        raise ParseError("encoding was produced for a different variable table", 2, 1)
    if lines[2].startswith("poly"):
        poly, _ = _read_poly(lines, 2, table)
        return poly
    if lines[2].startswith("series"):
        order = int(lines[2].split()[1])
        pos = 3
        coeffs = []
        for k in range(order + 1):
            if lines[pos] != f"order {k}":
                raise ParseError(f"expected 'order {k}'", pos + 1, 1)
            c, pos = _read_poly(lines, pos + 1, table)
            coeffs.append(c)
        return FormalSeries(table, order, coeffs)
    raise ParseError(f"unknown block {lines[2]!r}", 3, 1)
