"""Parser for the session command language.

Grammar (one statement per ``;``, brace-delimited declarations need no
trailing ``;``, ``#`` starts a comment running to end of line)::

    basis W = { e1 e2 };
    let P : W = (1, 0);
    let k = ket[P; (0, 1), (2, 3)];
    let f = poly[W]{ x.e1^2 * x.e2 - 3/2 };
    linmap phi : !W -> V { |0|_P -> (0, 2); |e1|_P -> (1, 0); }
    linear psi : W -> V { e1 -> (0, 1); e2 -> (1, 0); }
    set cap 8;
    set format machine;
    delta k;   eps k;   d k;   fractions k;
    pair f k;  raction f k;  creation (1, 1) k;
    promote phi k;  map psi k;

Wherever a bound element name is expected, queries also accept an inline
``ket[...]`` literal, and ``pair``/``raction`` accept an inline
``poly[...]{...}``.  Scalars are exact rationals written ``p/q`` or as bare
integers; float literals are rejected.  Every command round-trips through
:func:`command_source` to canonical text.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Union

from .errors import ParseError

KEYWORDS = {
    "basis",
    "let",
    "ket",
    "poly",
    "linmap",
    "linear",
    "set",
    "delta",
    "eps",
    "d",
    "pair",
    "raction",
    "creation",
    "promote",
    "map",
    "fractions",
}

QUERY_KINDS = (
    "delta",
    "eps",
    "d",
    "pair",
    "raction",
    "creation",
    "promote",
    "map",
    "fractions",
)


# ---------------------------------------------------------------------------
# Tokens

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>[ \t\r]+)
  | (?P<comment>\#[^\n]*)
  | (?P<newline>\n)
  | (?P<name>[A-Za-z][A-Za-z0-9_]*)
  | (?P<int>[0-9]+)
  | (?P<arrow>->)
  | (?P<punct>[{}()\[\];,:=|^*+\-/._!])
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class Token:
    kind: str  # "name" | "int" | punctuation text | "eof"
    text: str
    line: int
    column: int


def _tokenize(source: str) -> list[Token]:
    tokens: list[Token] = []
    line, line_start = 1, 0
    pos = 0
    while pos < len(source):
        match = _TOKEN_RE.match(source, pos)
        if match is None:
            raise ParseError(
                f"unexpected character {source[pos]!r}", line, pos - line_start + 1
            )
        column = pos - line_start + 1
        pos = match.end()
        if match.lastgroup == "newline":
            line += 1
            line_start = pos
        elif match.lastgroup in ("ws", "comment"):
            pass
        elif match.lastgroup == "name":
            tokens.append(Token("name", match.group(), line, column))
        elif match.lastgroup == "int":
            tokens.append(Token("int", match.group(), line, column))
        else:
            tokens.append(Token(match.group(), match.group(), line, column))
    tokens.append(Token("eof", "", line, len(source) - line_start + 1))
    return tokens


# ---------------------------------------------------------------------------
# AST: polynomial expressions, value references, commands

class PolyExpr:
    """Base class for polynomial expression nodes."""


@dataclass(frozen=True)
class PolyConst(PolyExpr):
    value: Fraction


@dataclass(frozen=True)
class PolyVar(PolyExpr):
    label: str


@dataclass(frozen=True)
class PolyPow(PolyExpr):
    base: PolyExpr
    exponent: int


@dataclass(frozen=True)
class PolyNeg(PolyExpr):
    operand: PolyExpr


@dataclass(frozen=True)
class PolyMul(PolyExpr):
    left: PolyExpr
    right: PolyExpr


@dataclass(frozen=True)
class PolyAdd(PolyExpr):
    left: PolyExpr
    right: PolyExpr


@dataclass(frozen=True)
class PolySub(PolyExpr):
    left: PolyExpr
    right: PolyExpr


@dataclass(frozen=True)
class VecName:
    name: str


@dataclass(frozen=True)
class VecCoords:
    coords: tuple[Fraction, ...]


VecRef = Union[VecName, VecCoords]


@dataclass(frozen=True)
class KetLiteral:
    point: str
    vectors: tuple[VecRef, ...]


@dataclass(frozen=True)
class BangName:
    name: str


BangRef = Union[BangName, KetLiteral]


@dataclass(frozen=True)
class PolyLiteral:
    context: str
    expr: PolyExpr


@dataclass(frozen=True)
class PolyName:
    name: str


PolyRef = Union[PolyName, PolyLiteral]


@dataclass(frozen=True)
class KetPattern:
    """A table key in a linmap block: a content multiset at a named point."""

    content: tuple[tuple[str, int], ...]
    point: str


@dataclass(frozen=True)
class BasisDecl:
    name: str
    labels: tuple[str, ...]
    line: int = field(default=0, compare=False)


@dataclass(frozen=True)
class LetVector:
    name: str
    context: str
    coords: tuple[Fraction, ...]
    line: int = field(default=0, compare=False)


@dataclass(frozen=True)
class LetKet:
    name: str
    ket: KetLiteral
    line: int = field(default=0, compare=False)


@dataclass(frozen=True)
class LetPoly:
    name: str
    context: str
    expr: PolyExpr
    line: int = field(default=0, compare=False)


@dataclass(frozen=True)
class LinMapDecl:
    name: str
    domain: str
    codomain: str
    entries: tuple[tuple[KetPattern, tuple[Fraction, ...]], ...]
    line: int = field(default=0, compare=False)


@dataclass(frozen=True)
class LinearDecl:
    name: str
    domain: str
    codomain: str
    entries: tuple[tuple[str, tuple[Fraction, ...]], ...]
    line: int = field(default=0, compare=False)


@dataclass(frozen=True)
class SetOption:
    option: str  # "cap" | "format"
    value: Union[int, str]
    line: int = field(default=0, compare=False)


@dataclass(frozen=True)
class Query:
    kind: str
    bang: BangRef
    poly: Union[PolyRef, None] = None
    vec: Union[VecRef, None] = None
    map_name: Union[str, None] = None
    line: int = field(default=0, compare=False)


Command = Union[
    BasisDecl, LetVector, LetKet, LetPoly, LinMapDecl, LinearDecl, SetOption, Query
]


# ---------------------------------------------------------------------------
# Parsing

class _Parser:
    def __init__(self, tokens: list[Token]):
        self.tokens = tokens
        self.pos = 0

    def peek(self, offset: int = 0) -> Token:
        return self.tokens[min(self.pos + offset, len(self.tokens) - 1)]

    def advance(self) -> Token:
        token = self.peek()
        if token.kind != "eof":
            self.pos += 1
        return token

    def error(self, message: str, token: Token | None = None) -> ParseError:
        token = token or self.peek()
        return ParseError(message, token.line, token.column)

    def expect(self, kind: str, what: str | None = None) -> Token:
        token = self.peek()
        if token.kind != kind:
            shown = what or f"{kind!r}"
            found = token.text if token.kind != "eof" else "end of input"
            raise self.error(f"expected {shown}, found {found!r}")
        return self.advance()

    def expect_name(self, what: str = "a name") -> str:
        return self.expect("name", what).text

    def binding_name(self) -> str:
        token = self.peek()
        name = self.expect_name("a binding name")
        if name in KEYWORDS:
            raise self.error(f"{name!r} is a reserved word", token)
        return name

    def end_statement(self) -> None:
        self.expect(";", "';' ending the statement")

    # -- scalars ------------------------------------------------------------

    def rational(self) -> Fraction:
        sign = 1
        if self.peek().kind == "-":
            self.advance()
            sign = -1
        numerator = int(self.expect("int", "an integer").text)
        if self.peek().kind == "/":
            self.advance()
            token = self.peek()
            denominator = int(self.expect("int", "a denominator").text)
            if denominator == 0:
                raise self.error("zero denominator", token)
            return Fraction(sign * numerator, denominator)
        return Fraction(sign * numerator)

    def coords(self) -> tuple[Fraction, ...]:
        self.expect("(", "'('")
        out: list[Fraction] = []
        if self.peek().kind != ")":
            out.append(self.rational())
            while self.peek().kind == ",":
                self.advance()
                out.append(self.rational())
        self.expect(")", "')' or ',' in a coordinate list")
        return tuple(out)

    # -- value references ----------------------------------------------------

    def vec_ref(self) -> VecRef:
        if self.peek().kind == "(":
            return VecCoords(self.coords())
        return VecName(self.expect_name("a vector name or '('"))

    def ket_literal(self) -> KetLiteral:
        self.expect("name")  # the 'ket' keyword, already checked by caller
        self.expect("[", "'[' after 'ket'")
        point = self.expect_name("a point name")
        self.expect(";", "';' after the point name")
        vectors: list[VecRef] = []
        if self.peek().kind != "]":
            vectors.append(self.vec_ref())
            while self.peek().kind == ",":
                self.advance()
                vectors.append(self.vec_ref())
        self.expect("]", "']' closing the ket")
        return KetLiteral(point, tuple(vectors))

    def bang_ref(self) -> BangRef:
        token = self.peek()
        if token.kind == "name" and token.text == "ket":
            return self.ket_literal()
        return BangName(self.expect_name("an element name or 'ket['"))

    def poly_literal(self) -> PolyLiteral:
        self.expect("name")  # the 'poly' keyword
        self.expect("[", "'[' after 'poly'")
        context = self.expect_name("a basis name")
        self.expect("]", "']'")
        self.expect("{", "'{' opening the polynomial")
        expr = self.poly_expr()
        self.expect("}", "'}' closing the polynomial")
        return PolyLiteral(context, expr)

    def poly_ref(self) -> PolyRef:
        token = self.peek()
        if token.kind == "name" and token.text == "poly":
            return self.poly_literal()
        return PolyName(self.expect_name("a polynomial name or 'poly['"))

    # -- polynomial expressions ----------------------------------------------

    def poly_expr(self) -> PolyExpr:
        expr = self.poly_term()
        while self.peek().kind in ("+", "-"):
            op = self.advance().kind
            right = self.poly_term()
            expr = PolyAdd(expr, right) if op == "+" else PolySub(expr, right)
        return expr

    def poly_term(self) -> PolyExpr:
        expr = self.poly_factor()
        while self.peek().kind == "*":
            self.advance()
            expr = PolyMul(expr, self.poly_factor())
        return expr

    def poly_factor(self) -> PolyExpr:
        if self.peek().kind == "-":
            self.advance()
            return PolyNeg(self.poly_factor())
        return self.poly_power()

    def poly_power(self) -> PolyExpr:
        base = self.poly_atom()
        if self.peek().kind == "^":
            self.advance()
            exponent = int(self.expect("int", "a non-negative exponent").text)
            return PolyPow(base, exponent)
        return base

    def poly_atom(self) -> PolyExpr:
        token = self.peek()
        if token.kind == "name" and token.text == "x":
            self.advance()
            self.expect(".", "'.' after 'x'")
            return PolyVar(self.expect_name("a basis label"))
        if token.kind == "int":
            numerator = int(self.advance().text)
            if self.peek().kind == "/":
                self.advance()
                denom_token = self.peek()
                denominator = int(self.expect("int", "a denominator").text)
                if denominator == 0:
                    raise self.error("zero denominator", denom_token)
                return PolyConst(Fraction(numerator, denominator))
            return PolyConst(Fraction(numerator))
        if token.kind == "(":
            self.advance()
            expr = self.poly_expr()
            self.expect(")", "')'")
            return expr
        raise self.error(
            "expected 'x.<label>', a rational, or '(' in a polynomial expression"
        )

    # -- statements -----------------------------------------------------------

    def basis_decl(self, line: int) -> BasisDecl:
        self.advance()  # 'basis'
        name = self.binding_name()
        self.expect("=", "'='")
        self.expect("{", "'{'")
        labels: list[str] = []
        while self.peek().kind == "name":
            labels.append(self.advance().text)
        if not labels:
            raise self.error("a basis needs at least one label")
        self.expect("}", "'}' closing the label list")
        self.end_statement()
        return BasisDecl(name, tuple(labels), line)

    def let_decl(self, line: int) -> Command:
        self.advance()  # 'let'
        name = self.binding_name()
        context: str | None = None
        if self.peek().kind == ":":
            self.advance()
            context = self.expect_name("a basis name")
        self.expect("=", "'='")
        token = self.peek()
        if token.kind == "(":
            if context is None:
                raise self.error("a vector binding needs a ': <basis>' annotation")
            coords = self.coords()
            self.end_statement()
            return LetVector(name, context, coords, line)
        if token.kind == "name" and token.text == "ket":
            if context is not None:
                raise self.error("ket bindings take their context from the point")
            literal = self.ket_literal()
            self.end_statement()
            return LetKet(name, literal, line)
        if token.kind == "name" and token.text == "poly":
            if context is not None:
                raise self.error("poly bindings name their context in 'poly[...]'")
            literal = self.poly_literal()
            self.end_statement()
            return LetPoly(name, literal.context, literal.expr, line)
        raise self.error("expected a coordinate list, 'ket[', or 'poly[' after '='")

    def ket_pattern(self) -> KetPattern:
        self.expect("|", "'|' opening a ket pattern")
        content: list[tuple[str, int]] = []
        if self.peek().kind == "int" and self.peek().text == "0":
            self.advance()
        else:
            while self.peek().kind == "name":
                label = self.advance().text
                mult = 1
                if self.peek().kind == "^":
                    self.advance()
                    token = self.peek()
                    mult = int(self.expect("int", "a multiplicity").text)
                    if mult == 0:
                        raise self.error("zero multiplicity in a ket pattern", token)
                content.append((label, mult))
            if not content:
                raise self.error("expected '0' or labels inside the ket pattern")
        self.expect("|", "'|' closing the ket pattern")
        self.expect("_", "'_' before the point name")
        point = self.expect_name("a point name")
        return KetPattern(tuple(content), point)

    def linmap_decl(self, line: int) -> LinMapDecl:
        self.advance()  # 'linmap'
        name = self.binding_name()
        self.expect(":", "':'")
        self.expect("!", "'!' before the domain basis")
        domain = self.expect_name("a basis name")
        self.expect("->", "'->'")
        codomain = self.expect_name("a basis name")
        self.expect("{", "'{'")
        entries: list[tuple[KetPattern, tuple[Fraction, ...]]] = []
        while self.peek().kind == "|":
            pattern = self.ket_pattern()
            self.expect("->", "'->'")
            coords = self.coords()
            self.expect(";", "';' after a table entry")
            entries.append((pattern, coords))
        self.expect("}", "'}' closing the table")
        if self.peek().kind == ";":
            self.advance()
        return LinMapDecl(name, domain, codomain, tuple(entries), line)

    def linear_decl(self, line: int) -> LinearDecl:
        self.advance()  # 'linear'
        name = self.binding_name()
        self.expect(":", "':'")
        domain = self.expect_name("a basis name")
        self.expect("->", "'->'")
        codomain = self.expect_name("a basis name")
        self.expect("{", "'{'")
        entries: list[tuple[str, tuple[Fraction, ...]]] = []
        while self.peek().kind == "name":
            label = self.advance().text
            self.expect("->", "'->'")
            coords = self.coords()
            self.expect(";", "';' after an image entry")
            entries.append((label, coords))
        self.expect("}", "'}' closing the image list")
        if self.peek().kind == ";":
            self.advance()
        return LinearDecl(name, domain, codomain, tuple(entries), line)

    def set_stmt(self, line: int) -> SetOption:
        self.advance()  # 'set'
        option = self.expect_name("'cap' or 'format'")
        if option == "cap":
            value: Union[int, str] = int(self.expect("int", "a cap value").text)
        elif option == "format":
            value = self.expect_name("'text' or 'machine'")
            if value not in ("text", "machine"):
                raise self.error("format must be 'text' or 'machine'")
        else:
            raise self.error(f"unknown option {option!r}; use 'cap' or 'format'")
        self.end_statement()
        return SetOption(option, value, line)

    def query(self, line: int) -> Query:
        kind = self.advance().text
        if kind in ("delta", "eps", "d", "fractions"):
            bang = self.bang_ref()
        elif kind in ("pair", "raction"):
            poly = self.poly_ref()
            bang = self.bang_ref()
            self.end_statement()
            return Query(kind, bang, poly=poly, line=line)
        elif kind == "creation":
            vec = self.vec_ref()
            bang = self.bang_ref()
            self.end_statement()
            return Query(kind, bang, vec=vec, line=line)
        elif kind in ("promote", "map"):
            map_name = self.expect_name("a map name")
            bang = self.bang_ref()
            self.end_statement()
            return Query(kind, bang, map_name=map_name, line=line)
        else:  # pragma: no cover - dispatch guarantees a query keyword
            raise self.error(f"unknown query {kind!r}")
        self.end_statement()
        return Query(kind, bang, line=line)

    def statement(self) -> Command:
        token = self.peek()
        line = token.line
        if token.kind != "name":
            raise self.error(f"expected a statement, found {token.text!r}")
        head = token.text
        if head == "basis":
            return self.basis_decl(line)
        if head == "let":
            return self.let_decl(line)
        if head == "linmap":
            return self.linmap_decl(line)
        if head == "linear":
            return self.linear_decl(line)
        if head == "set":
            return self.set_stmt(line)
        if head in QUERY_KINDS:
            return self.query(line)
        raise self.error(f"unknown statement {head!r}")

    def program(self) -> list[Command]:
        commands: list[Command] = []
        while self.peek().kind != "eof":
            commands.append(self.statement())
        return commands


def parse(source: str) -> list[Command]:
    """Parse source text into a list of commands; raises ParseError with position."""
    return _Parser(_tokenize(source)).program()


# ---------------------------------------------------------------------------
# Canonical source text

def _rational_source(value: Fraction) -> str:
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def _coords_source(coords: tuple[Fraction, ...]) -> str:
    return "(" + ", ".join(_rational_source(c) for c in coords) + ")"


def _vec_ref_source(ref: VecRef) -> str:
    if isinstance(ref, VecName):
        return ref.name
    return _coords_source(ref.coords)


def _ket_literal_source(literal: KetLiteral) -> str:
    vectors = ", ".join(_vec_ref_source(v) for v in literal.vectors)
    head = f"ket[{literal.point};"
    return f"{head} {vectors}]" if vectors else f"{head}]"


def _bang_ref_source(ref: BangRef) -> str:
    if isinstance(ref, BangName):
        return ref.name
    return _ket_literal_source(ref)


# Precedence levels: additive 1, multiplicative 2, unary minus 3, power 4, atom 5.
def _expr_source(expr: PolyExpr, parent_level: int = 0) -> str:
    if isinstance(expr, PolyConst):
        text, level = _rational_source(expr.value), 5
    elif isinstance(expr, PolyVar):
        text, level = f"x.{expr.label}", 5
    elif isinstance(expr, PolyPow):
        text, level = f"{_expr_source(expr.base, 5)}^{expr.exponent}", 4
    elif isinstance(expr, PolyNeg):
        text, level = f"-{_expr_source(expr.operand, 3)}", 3
    elif isinstance(expr, PolyMul):
        text = f"{_expr_source(expr.left, 2)} * {_expr_source(expr.right, 3)}"
        level = 2
    elif isinstance(expr, PolyAdd):
        text = f"{_expr_source(expr.left, 1)} + {_expr_source(expr.right, 2)}"
        level = 1
    elif isinstance(expr, PolySub):
        text = f"{_expr_source(expr.left, 1)} - {_expr_source(expr.right, 2)}"
        level = 1
    else:  # pragma: no cover
        raise TypeError(f"not a polynomial expression: {expr!r}")
    return f"({text})" if level < parent_level else text


def _poly_ref_source(ref: PolyRef) -> str:
    if isinstance(ref, PolyName):
        return ref.name
    return f"poly[{ref.context}]{{ {_expr_source(ref.expr)} }}"


def _ket_pattern_source(pattern: KetPattern) -> str:
    if not pattern.content:
        inner = "0"
    else:
        inner = " ".join(
            f"{label}^{mult}" if mult > 1 else label for label, mult in pattern.content
        )
    return f"|{inner}|_{pattern.point}"


def command_source(command: Command) -> str:
    """Canonical source text; reparsing it yields an equal command."""
    if isinstance(command, BasisDecl):
        return f"basis {command.name} = {{ {' '.join(command.labels)} }};"
    if isinstance(command, LetVector):
        return f"let {command.name} : {command.context} = {_coords_source(command.coords)};"
    if isinstance(command, LetKet):
        return f"let {command.name} = {_ket_literal_source(command.ket)};"
    if isinstance(command, LetPoly):
        return (
            f"let {command.name} = poly[{command.context}]"
            f"{{ {_expr_source(command.expr)} }};"
        )
    if isinstance(command, LinMapDecl):
        entries = " ".join(
            f"{_ket_pattern_source(p)} -> {_coords_source(c)};"
            for p, c in command.entries
        )
        body = f"{{ {entries} }}" if command.entries else "{ }"
        return f"linmap {command.name} : !{command.domain} -> {command.codomain} {body}"
    if isinstance(command, LinearDecl):
        entries = " ".join(
            f"{label} -> {_coords_source(c)};" for label, c in command.entries
        )
        body = f"{{ {entries} }}" if command.entries else "{ }"
        return f"linear {command.name} : {command.domain} -> {command.codomain} {body}"
    if isinstance(command, SetOption):
        return f"set {command.option} {command.value};"
    if isinstance(command, Query):
        parts = [command.kind]
        if command.poly is not None:
            parts.append(_poly_ref_source(command.poly))
        if command.vec is not None:
            parts.append(_vec_ref_source(command.vec))
        if command.map_name is not None:
            parts.append(command.map_name)
        parts.append(_bang_ref_source(command.bang))
        return " ".join(parts) + ";"
    raise TypeError(f"not a command: {command!r}")  # pragma: no cover
