"""Session state and command execution for the expression language.

A session owns the declared bases and one namespace per binding kind
(vectors, polynomials, elements, ket tables, linear maps) plus the two
options (partition cap, output format).  Bindings are immutable once
defined; executing commands either extends the session or produces query
results, never both.  The command layer adds no semantics of its own: each
query result is exactly the value of the corresponding library call.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .errors import EngineError, EvaluationError
from .scalar_poly import Basis, Polynomial, Vector
from .bang_core import (
    BangElement,
    CanonicalKet,
    coproduct,
    counit,
    creation,
    dereliction,
    ket,
    poly_action,
    residue_pair,
    to_fractions,
)
from .lifting import (
    DEFAULT_PARTITION_CAP,
    LinearMapSpec,
    MatrixMapSpec,
    bang_map,
    promote,
)
from . import parser as ast
from .parser import Command, command_source

ResultValue = object  # Fraction | Vector | BangElement | TensorElement | fractions list


@dataclass(frozen=True)
class Result:
    """One query outcome: the command, the query kind, and the raw library value."""

    command: ast.Query
    kind: str
    value: ResultValue


class CommandError(EngineError):
    """An error raised while executing one command, with the command attached.

    Query results produced before the failing command survive on
    ``partial_results`` so callers can still report them.
    """

    def __init__(
        self,
        command: Command,
        cause: EngineError,
        partial_results: tuple["Result", ...] = (),
    ):
        source = command_source(command)
        super().__init__(f"{cause} [while executing: {source}]")
        self.command = command
        self.cause = cause
        self.command_text = source
        self.line = getattr(command, "line", 0)
        self.partial_results = partial_results


@dataclass
class Session:
    partition_cap: int = DEFAULT_PARTITION_CAP
    output_format: str = "text"
    bases: dict[str, Basis] = field(default_factory=dict)
    vectors: dict[str, Vector] = field(default_factory=dict)
    polys: dict[str, Polynomial] = field(default_factory=dict)
    bangs: dict[str, BangElement] = field(default_factory=dict)
    linmaps: dict[str, LinearMapSpec] = field(default_factory=dict)
    linears: dict[str, MatrixMapSpec] = field(default_factory=dict)

    # -- lookups -------------------------------------------------------------

    def basis(self, name: str) -> Basis:
        try:
            return self.bases[name]
        except KeyError:
            raise EvaluationError(f"unknown basis {name!r}") from None

    def _lookup(self, kind: str, table: dict, name: str):
        try:
            return table[name]
        except KeyError:
            raise EvaluationError(f"unknown {kind} {name!r}") from None

    def _bind(self, kind: str, table: dict, name: str, value) -> None:
        if name in table:
            raise EvaluationError(f"{kind} {name!r} is already defined")
        table[name] = value

    # -- value construction ---------------------------------------------------

    def vector_from_coords(self, basis: Basis, coords: tuple[Fraction, ...]) -> Vector:
        if len(coords) != len(basis):
            raise EvaluationError(
                f"expected {len(basis)} coordinates for basis {basis.labels!r}, "
                f"got {len(coords)}"
            )
        return Vector.make(basis, dict(zip(basis.labels, coords)))

    def resolve_vec(self, ref: ast.VecRef, basis_hint: Basis | None) -> Vector:
        if isinstance(ref, ast.VecName):
            return self._lookup("vector", self.vectors, ref.name)
        if basis_hint is None:
            raise EvaluationError(
                "a coordinate literal needs a context; bind it with 'let' first"
            )
        return self.vector_from_coords(basis_hint, ref.coords)

    def resolve_ket_literal(self, literal: ast.KetLiteral) -> BangElement:
        point = self._lookup("vector", self.vectors, literal.point)
        directions = [self.resolve_vec(v, point.basis) for v in literal.vectors]
        return ket(point, directions)

    def resolve_bang(self, ref: ast.BangRef) -> BangElement:
        if isinstance(ref, ast.BangName):
            return self._lookup("element", self.bangs, ref.name)
        return self.resolve_ket_literal(ref)

    def poly_from_expr(self, basis: Basis, expr: ast.PolyExpr) -> Polynomial:
        if isinstance(expr, ast.PolyConst):
            return Polynomial.constant(basis, expr.value)
        if isinstance(expr, ast.PolyVar):
            return Polynomial.variable(basis, expr.label)
        if isinstance(expr, ast.PolyPow):
            return self.poly_from_expr(basis, expr.base) ** expr.exponent
        if isinstance(expr, ast.PolyNeg):
            return -self.poly_from_expr(basis, expr.operand)
        if isinstance(expr, ast.PolyMul):
            return self.poly_from_expr(basis, expr.left) * self.poly_from_expr(
                basis, expr.right
            )
        if isinstance(expr, ast.PolyAdd):
            return self.poly_from_expr(basis, expr.left) + self.poly_from_expr(
                basis, expr.right
            )
        if isinstance(expr, ast.PolySub):
            return self.poly_from_expr(basis, expr.left) - self.poly_from_expr(
                basis, expr.right
            )
        raise EvaluationError(f"not a polynomial expression: {expr!r}")

    def resolve_poly(self, ref: ast.PolyRef) -> Polynomial:
        if isinstance(ref, ast.PolyName):
            return self._lookup("polynomial", self.polys, ref.name)
        return self.poly_from_expr(self.basis(ref.context), ref.expr)

    # -- command execution ------------------------------------------------------

    def _execute_one(self, command: Command) -> Result | None:
        if isinstance(command, ast.BasisDecl):
            if command.name in self.bases:
                raise EvaluationError(f"basis {command.name!r} is already defined")
            self.bases[command.name] = Basis(command.labels)
            return None
        if isinstance(command, ast.LetVector):
            basis = self.basis(command.context)
            value = self.vector_from_coords(basis, command.coords)
            self._bind("vector", self.vectors, command.name, value)
            return None
        if isinstance(command, ast.LetKet):
            value = self.resolve_ket_literal(command.ket)
            self._bind("element", self.bangs, command.name, value)
            return None
        if isinstance(command, ast.LetPoly):
            basis = self.basis(command.context)
            value = self.poly_from_expr(basis, command.expr)
            self._bind("polynomial", self.polys, command.name, value)
            return None
        if isinstance(command, ast.LinMapDecl):
            self._bind(
                "ket table", self.linmaps, command.name, self._build_linmap(command)
            )
            return None
        if isinstance(command, ast.LinearDecl):
            self._bind(
                "linear map", self.linears, command.name, self._build_linear(command)
            )
            return None
        if isinstance(command, ast.SetOption):
            if command.option == "cap":
                if int(command.value) < 0:
                    raise EvaluationError("the partition cap must be non-negative")
                self.partition_cap = int(command.value)
            else:
                self.output_format = str(command.value)
            return None
        if isinstance(command, ast.Query):
            return self._execute_query(command)
        raise EvaluationError(f"unknown command: {command!r}")

    def _build_linmap(self, command: ast.LinMapDecl) -> LinearMapSpec:
        domain = self.basis(command.domain)
        codomain = self.basis(command.codomain)
        table: dict[CanonicalKet, Vector] = {}
        for pattern, coords in command.entries:
            point = self._lookup("vector", self.vectors, pattern.point)
            if point.basis != domain:
                raise EvaluationError(
                    f"point {pattern.point!r} is not over the domain basis "
                    f"{domain.labels!r}"
                )
            multiplicities: dict[str, int] = {}
            for label, mult in pattern.content:
                multiplicities[label] = multiplicities.get(label, 0) + mult
            key = CanonicalKet.make(point, multiplicities)
            if key in table:
                raise EvaluationError(
                    f"table {command.name!r} lists the same ket twice"
                )
            table[key] = self.vector_from_coords(codomain, coords)
        return LinearMapSpec.make(domain, codomain, table)

    def _build_linear(self, command: ast.LinearDecl) -> MatrixMapSpec:
        domain = self.basis(command.domain)
        codomain = self.basis(command.codomain)
        images: dict[str, Vector] = {}
        for label, coords in command.entries:
            if label in images:
                raise EvaluationError(f"duplicate image for label {label!r}")
            images[label] = self.vector_from_coords(codomain, coords)
        return MatrixMapSpec.make(domain, codomain, images)

    def _execute_query(self, command: ast.Query) -> Result:
        kind = command.kind
        element = self.resolve_bang(command.bang)
        if kind == "delta":
            value: ResultValue = coproduct(element)
        elif kind == "eps":
            value = counit(element)
        elif kind == "d":
            value = dereliction(element)
        elif kind == "pair":
            value = residue_pair(self.resolve_poly(command.poly), element)
        elif kind == "raction":
            value = poly_action(self.resolve_poly(command.poly), element)
        elif kind == "creation":
            value = creation(self.resolve_vec(command.vec, element.basis), element)
        elif kind == "promote":
            phi = self._lookup("ket table", self.linmaps, command.map_name)
            value = promote(phi, element, self.partition_cap)
        elif kind == "map":
            psi = self._lookup("linear map", self.linears, command.map_name)
            value = bang_map(psi, element)
        elif kind == "fractions":
            value = to_fractions(element)
        else:
            raise EvaluationError(f"unknown query kind {kind!r}")
        return Result(command, kind, value)


def execute(session: Session, commands: list[Command]) -> list[Result]:
    """Run commands in order, mutating the session; collect query results.

    The first failing command aborts execution; the raised CommandError
    carries the command and the underlying error.
    """
    results: list[Result] = []
    for command in commands:
        try:
            outcome = session._execute_one(command)
        except EngineError as err:
            raise CommandError(command, err, tuple(results)) from err
        if outcome is not None:
            results.append(outcome)
    return results
