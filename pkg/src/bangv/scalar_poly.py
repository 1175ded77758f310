"""Exact scalars, sparse vectors over a named basis, sparse multivariate polynomials.

Scalars are ``fractions.Fraction``: everything in this package is exact
rational arithmetic, with no floating point anywhere.  The coefficient field
is Q; coordinates from algebraic extensions are out of scope.

A :class:`Basis` is an ordered tuple of distinct string labels and acts as a
context: values built over different bases never mix, and every canonical
ordering (vector entries, monomials, kets) follows the declared label order.
Because labels are opaque, "dimension" is just however many labels were
declared; computations only ever touch the labels they mention, so large or
conceptually infinite spaces cost nothing extra.

:class:`Vector` is a finitely supported map label -> Fraction with no stored
zeros.  :class:`Polynomial` is a finitely supported map monomial -> Fraction,
where a monomial is a tuple of ``(label, exponent)`` pairs with positive
exponents sorted in basis order.  Both equalities are structural, which the
canonical forms make sound.  All values are immutable; all operations are
pure functions.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Union

from .errors import ContextError

Rational = Fraction

RationalLike = Union[int, str, Fraction]

# A monomial: ((label, exponent), ...) with exponents > 0, sorted in basis order.
Monomial = tuple[tuple[str, int], ...]


def as_rational(value: RationalLike) -> Fraction:
    """Coerce an int, a Fraction, or a ``"p/q"`` string to an exact Fraction."""
    return Fraction(value)


def format_rational(value: Fraction) -> str:
    """Serialize as ``p/q``, or just ``p`` when the denominator is 1."""
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


@dataclass(frozen=True)
class Basis:
    """An ordered tuple of distinct labels; the context all values belong to.

    Two bases are the same context exactly when their label tuples are equal,
    so session-level names for a basis never affect value identity.
    """

    labels: tuple[str, ...]
    _index: dict[str, int] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        index: dict[str, int] = {}
        for pos, label in enumerate(self.labels):
            if label in index:
                raise ValueError(f"duplicate basis label {label!r}")
            index[label] = pos
        object.__setattr__(self, "_index", index)

    @classmethod
    def of(cls, *labels: str) -> "Basis":
        return cls(tuple(labels))

    def __contains__(self, label: str) -> bool:
        return label in self._index

    def __len__(self) -> int:
        return len(self.labels)

    def position(self, label: str) -> int:
        try:
            return self._index[label]
        except KeyError:
            raise ContextError(
                f"label {label!r} is not part of the basis {self.labels!r}"
            ) from None


def require_same_context(a, b) -> None:
    """Raise ContextError unless both values carry the same basis."""
    if a.basis != b.basis:
        raise ContextError(
            f"values belong to different basis contexts: "
            f"{a.basis.labels!r} vs {b.basis.labels!r}"
        )


@dataclass(frozen=True)
class Vector:
    """A finitely supported map label -> Fraction, in canonical zero-free form."""

    basis: Basis
    entries: tuple[tuple[str, Fraction], ...]

    @classmethod
    def make(cls, basis: Basis, entries: Mapping[str, RationalLike] = {}) -> "Vector":
        cleaned: dict[str, Fraction] = {}
        for label, value in entries.items():
            basis.position(label)
            coeff = Fraction(value)
            if coeff:
                cleaned[label] = coeff
        ordered = tuple(sorted(cleaned.items(), key=lambda kv: basis.position(kv[0])))
        return cls(basis, ordered)

    @classmethod
    def zero(cls, basis: Basis) -> "Vector":
        return cls(basis, ())

    @classmethod
    def unit(cls, basis: Basis, label: str) -> "Vector":
        basis.position(label)
        return cls(basis, ((label, Fraction(1)),))

    def coord(self, label: str) -> Fraction:
        self.basis.position(label)
        for entry_label, value in self.entries:
            if entry_label == label:
                return value
        return Fraction(0)

    def coords(self) -> tuple[Fraction, ...]:
        """Dense coordinate tuple in basis order."""
        dense = [Fraction(0)] * len(self.basis)
        for label, value in self.entries:
            dense[self.basis.position(label)] = value
        return tuple(dense)

    def as_dict(self) -> dict[str, Fraction]:
        return dict(self.entries)

    def is_zero(self) -> bool:
        return not self.entries

    def __add__(self, other: "Vector") -> "Vector":
        require_same_context(self, other)
        acc = dict(self.entries)
        for label, value in other.entries:
            acc[label] = acc.get(label, Fraction(0)) + value
        return Vector.make(self.basis, acc)

    def __sub__(self, other: "Vector") -> "Vector":
        return self + (-other)

    def __neg__(self) -> "Vector":
        return Vector(self.basis, tuple((l, -v) for l, v in self.entries))

    def scale(self, scalar: RationalLike) -> "Vector":
        coeff = Fraction(scalar)
        if not coeff:
            return Vector.zero(self.basis)
        return Vector(self.basis, tuple((l, coeff * v) for l, v in self.entries))

    def __rmul__(self, scalar: RationalLike) -> "Vector":
        return self.scale(scalar)


def _normalize_monomial(basis: Basis, exponents: Mapping[str, int]) -> Monomial:
    cleaned: dict[str, int] = {}
    for label, exp in exponents.items():
        basis.position(label)
        if exp < 0:
            raise ValueError(f"negative exponent {exp} for {label!r}")
        if exp:
            cleaned[label] = int(exp)
    return tuple(sorted(cleaned.items(), key=lambda kv: basis.position(kv[0])))


def _monomial_degree(monomial: Monomial) -> int:
    return sum(exp for _, exp in monomial)


def _monomial_key(basis: Basis, monomial: Monomial) -> tuple:
    dense = [0] * len(basis)
    for label, exp in monomial:
        dense[basis.position(label)] = exp
    return (_monomial_degree(monomial), tuple(dense))


def _monomial_mul(basis: Basis, a: Monomial, b: Monomial) -> Monomial:
    acc = dict(a)
    for label, exp in b:
        acc[label] = acc.get(label, 0) + exp
    return _normalize_monomial(basis, acc)


@dataclass(frozen=True)
class Polynomial:
    """A sparse polynomial with Fraction coefficients over a basis context.

    The variables are in bijection with the basis labels; the empty monomial
    ``()`` is the constant term.  Terms are stored sorted by (total degree,
    dense exponent tuple), never with a zero coefficient.
    """

    basis: Basis
    terms: tuple[tuple[Monomial, Fraction], ...]

    @classmethod
    def make(
        cls,
        basis: Basis,
        terms: Mapping[Monomial, RationalLike]
        | Iterable[tuple[Monomial, RationalLike]] = {},
    ) -> "Polynomial":
        items = terms.items() if isinstance(terms, Mapping) else terms
        acc: dict[Monomial, Fraction] = {}
        for monomial, value in items:
            normalized = _normalize_monomial(basis, dict(monomial))
            acc[normalized] = acc.get(normalized, Fraction(0)) + Fraction(value)
        cleaned = {m: c for m, c in acc.items() if c}
        ordered = tuple(
            sorted(cleaned.items(), key=lambda kv: _monomial_key(basis, kv[0]))
        )
        return cls(basis, ordered)

    @classmethod
    def zero(cls, basis: Basis) -> "Polynomial":
        return cls(basis, ())

    @classmethod
    def constant(cls, basis: Basis, value: RationalLike) -> "Polynomial":
        coeff = Fraction(value)
        if not coeff:
            return cls.zero(basis)
        return cls(basis, (((), coeff),))

    @classmethod
    def variable(cls, basis: Basis, label: str) -> "Polynomial":
        basis.position(label)
        return cls(basis, ((((label, 1),), Fraction(1)),))

    def is_zero(self) -> bool:
        return not self.terms

    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        if not self.terms:
            return -1
        return max(_monomial_degree(m) for m, _ in self.terms)

    def constant_term(self) -> Fraction:
        for monomial, coeff in self.terms:
            if not monomial:
                return coeff
        return Fraction(0)

    def coefficient(self, monomial: Monomial) -> Fraction:
        wanted = _normalize_monomial(self.basis, dict(monomial))
        for m, c in self.terms:
            if m == wanted:
                return c
        return Fraction(0)

    def __add__(self, other: "Polynomial") -> "Polynomial":
        require_same_context(self, other)
        acc = dict(self.terms)
        for monomial, coeff in other.terms:
            acc[monomial] = acc.get(monomial, Fraction(0)) + coeff
        return Polynomial.make(self.basis, acc)

    def __sub__(self, other: "Polynomial") -> "Polynomial":
        return self + (-other)

    def __neg__(self) -> "Polynomial":
        return Polynomial(self.basis, tuple((m, -c) for m, c in self.terms))

    def scale(self, scalar: RationalLike) -> "Polynomial":
        coeff = Fraction(scalar)
        if not coeff:
            return Polynomial.zero(self.basis)
        return Polynomial(self.basis, tuple((m, coeff * c) for m, c in self.terms))

    def __rmul__(self, scalar: RationalLike) -> "Polynomial":
        return self.scale(scalar)

    def __mul__(self, other: "Polynomial") -> "Polynomial":
        require_same_context(self, other)
        acc: dict[Monomial, Fraction] = {}
        for mono_a, coeff_a in self.terms:
            for mono_b, coeff_b in other.terms:
                product = _monomial_mul(self.basis, mono_a, mono_b)
                acc[product] = acc.get(product, Fraction(0)) + coeff_a * coeff_b
        return Polynomial.make(self.basis, acc)

    def __pow__(self, exponent: int) -> "Polynomial":
        if exponent < 0:
            raise ValueError("polynomial powers must be non-negative")
        result = Polynomial.constant(self.basis, 1)
        for _ in range(exponent):
            result = result * self
        return result

    def partial(self, label: str) -> "Polynomial":
        """Formal partial derivative with respect to the variable of `label`."""
        self.basis.position(label)
        acc: dict[Monomial, Fraction] = {}
        for monomial, coeff in self.terms:
            exponents = dict(monomial)
            exp = exponents.get(label, 0)
            if not exp:
                continue
            exponents[label] = exp - 1
            lowered = _normalize_monomial(self.basis, exponents)
            acc[lowered] = acc.get(lowered, Fraction(0)) + coeff * exp
        return Polynomial.make(self.basis, acc)

    def evaluate(self, point: Vector) -> Fraction:
        """Exact value at the point; absent point entries read as zero."""
        require_same_context(self, point)
        total = Fraction(0)
        for monomial, coeff in self.terms:
            value = coeff
            for label, exp in monomial:
                value *= point.coord(label) ** exp
                if not value:
                    break
            total += value
        return total


def directional_derivative(direction: Vector, f: Polynomial) -> Polynomial:
    """Apply the first-order operator sum_i v_i d/dx_i once."""
    require_same_context(direction, f)
    result = Polynomial.zero(f.basis)
    for label, coeff in direction.entries:
        result = result + f.partial(label).scale(coeff)
    return result


def apply_diff_op(directions: Iterable[Vector], f: Polynomial) -> Polynomial:
    """Apply one directional derivative per vector, in sequence.

    The operators commute, so the order of `directions` never changes the
    result; the empty sequence is the identity.
    """
    for direction in directions:
        f = directional_derivative(direction, f)
    return f
