"""The coalgebra of kets over points: canonical basis, structure maps, actions.

An element is a finite rational combination of canonical kets.  A canonical
ket pairs a point (a vector in the basis context) with a multiset of basis
labels, stored as positive multiplicities; the degree-zero ket over a point P
is the vacuum over P.  The ket basis is the engine's normal form throughout:
the alternative generalised-fraction basis differs from it term by term by a
product of factorials and only appears at the conversion boundary
(:func:`to_fractions` / :func:`from_fractions`).

On canonical kets the structure maps are:

* coproduct: split the content multiset in all ways, weighting each split by
  the product of binomial coefficients counting how many expanded subsets
  merge to it;
* counit: the coefficient sum over vacuum terms (degree-zero kets);
* dereliction: a vacuum over P goes to P, a degree-one ket goes to its single
  creation vector, higher degrees go to zero;
* the polynomial action: a variable x_i acts on a ket by lowering the
  multiplicity of ``i`` (with the multiplicity as coefficient) plus scaling
  by the i-th coordinate of the point;
* the residue pairing of a polynomial against a ket differentiates the
  polynomial once per content entry and evaluates at the point.

Everything is immutable and pure, and the zero (empty) element is mapped to
zero by every operation.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb, factorial
from typing import Iterable, Iterator, Mapping

from .errors import ContextError
from .scalar_poly import (
    Basis,
    Polynomial,
    RationalLike,
    Vector,
    require_same_context,
)

# A content multiset: ((label, multiplicity), ...) with multiplicities > 0,
# sorted in basis order.  Shared by kets and generalised fractions.
Content = tuple[tuple[str, int], ...]


def normalize_content(basis: Basis, multiplicities: Mapping[str, int]) -> Content:
    cleaned: dict[str, int] = {}
    for label, mult in multiplicities.items():
        basis.position(label)
        if mult < 0:
            raise ValueError(f"negative multiplicity {mult} for {label!r}")
        if mult:
            cleaned[label] = int(mult)
    return tuple(sorted(cleaned.items(), key=lambda kv: basis.position(kv[0])))


def content_degree(content: Content) -> int:
    return sum(mult for _, mult in content)


def labels_of_content(content: Content) -> tuple[str, ...]:
    """Expand a content multiset into its label sequence, in stored order."""
    out: list[str] = []
    for label, mult in content:
        out.extend([label] * mult)
    return tuple(out)


def content_of_labels(basis: Basis, labels: Iterable[str]) -> Content:
    """Collect a label sequence back into a content multiset."""
    counts: dict[str, int] = {}
    for label in labels:
        counts[label] = counts.get(label, 0) + 1
    return normalize_content(basis, counts)


def iter_subcontents(content: Content) -> Iterator[tuple[Content, Content, int]]:
    """Yield (part, complement, weight) over all sub-multisets of `content`.

    The weight is the product of binomial coefficients counting the expanded
    label subsets that collapse to this split; summing over the splits with
    these weights reproduces the subset sum over expanded labels.
    """
    items = list(content)

    def rec(i: int, part: list[tuple[str, int]], rest: list[tuple[str, int]], weight: int):
        if i == len(items):
            yield tuple(part), tuple(rest), weight
            return
        label, mult = items[i]
        for taken in range(mult + 1):
            if taken:
                part.append((label, taken))
            if taken < mult:
                rest.append((label, mult - taken))
            yield from rec(i + 1, part, rest, weight * comb(mult, taken))
            if taken:
                part.pop()
            if taken < mult:
                rest.pop()

    yield from rec(0, [], [], 1)


@dataclass(frozen=True)
class CanonicalKet:
    """A point plus a multiset of creation labels; the canonical basis of the coalgebra."""

    point: Vector
    content: Content

    @classmethod
    def make(cls, point: Vector, multiplicities: Mapping[str, int] = {}) -> "CanonicalKet":
        return cls(point, normalize_content(point.basis, multiplicities))

    @property
    def basis(self) -> Basis:
        return self.point.basis

    def degree(self) -> int:
        return content_degree(self.content)

    def multiplicity(self, label: str) -> int:
        for entry_label, mult in self.content:
            if entry_label == label:
                return mult
        return 0

    def sort_key(self) -> tuple:
        dense = [0] * len(self.basis)
        for label, mult in self.content:
            dense[self.basis.position(label)] = mult
        return (self.point.coords(), -self.degree(), tuple(dense))


@dataclass(frozen=True)
class GeneralizedFraction:
    """A basis symbol of the fraction presentation: a point plus pole exponents."""

    point: Vector
    exponents: Content

    @classmethod
    def make(cls, point: Vector, exponents: Mapping[str, int] = {}) -> "GeneralizedFraction":
        return cls(point, normalize_content(point.basis, exponents))

    @property
    def basis(self) -> Basis:
        return self.point.basis


@dataclass(frozen=True)
class BangElement:
    """A finite rational combination of canonical kets over one basis context."""

    basis: Basis
    terms: tuple[tuple[CanonicalKet, Fraction], ...]

    @classmethod
    def make(
        cls, basis: Basis, terms: Mapping[CanonicalKet, RationalLike] = {}
    ) -> "BangElement":
        cleaned: dict[CanonicalKet, Fraction] = {}
        for ket_term, value in terms.items():
            if ket_term.basis != basis:
                raise ContextError(
                    f"ket over basis {ket_term.basis.labels!r} cannot enter an "
                    f"element over {basis.labels!r}"
                )
            coeff = Fraction(value)
            if coeff:
                cleaned[ket_term] = coeff
        ordered = tuple(sorted(cleaned.items(), key=lambda kv: kv[0].sort_key()))
        return cls(basis, ordered)

    @classmethod
    def zero(cls, basis: Basis) -> "BangElement":
        return cls(basis, ())

    def is_zero(self) -> bool:
        return not self.terms

    def coefficient(self, ket_term: CanonicalKet) -> Fraction:
        for k, c in self.terms:
            if k == ket_term:
                return c
        return Fraction(0)

    def __add__(self, other: "BangElement") -> "BangElement":
        require_same_context(self, other)
        acc = dict(self.terms)
        for k, c in other.terms:
            acc[k] = acc.get(k, Fraction(0)) + c
        return BangElement.make(self.basis, acc)

    def __sub__(self, other: "BangElement") -> "BangElement":
        return self + (-other)

    def __neg__(self) -> "BangElement":
        return BangElement(self.basis, tuple((k, -c) for k, c in self.terms))

    def scale(self, scalar: RationalLike) -> "BangElement":
        coeff = Fraction(scalar)
        if not coeff:
            return BangElement.zero(self.basis)
        return BangElement(self.basis, tuple((k, coeff * c) for k, c in self.terms))

    def __rmul__(self, scalar: RationalLike) -> "BangElement":
        return self.scale(scalar)


@dataclass(frozen=True)
class TensorElement:
    """An element of the two-fold tensor square, as combinations of ket pairs."""

    basis: Basis
    terms: tuple[tuple[tuple[CanonicalKet, CanonicalKet], Fraction], ...]

    @classmethod
    def make(
        cls,
        basis: Basis,
        terms: Mapping[tuple[CanonicalKet, CanonicalKet], RationalLike] = {},
    ) -> "TensorElement":
        cleaned: dict[tuple[CanonicalKet, CanonicalKet], Fraction] = {}
        for pair, value in terms.items():
            coeff = Fraction(value)
            if coeff:
                cleaned[pair] = coeff
        ordered = tuple(
            sorted(
                cleaned.items(),
                key=lambda kv: (kv[0][0].sort_key(), kv[0][1].sort_key()),
            )
        )
        return cls(basis, ordered)

    @classmethod
    def zero(cls, basis: Basis) -> "TensorElement":
        return cls(basis, ())

    def is_zero(self) -> bool:
        return not self.terms

    def coefficient(self, pair: tuple[CanonicalKet, CanonicalKet]) -> Fraction:
        for p, c in self.terms:
            if p == pair:
                return c
        return Fraction(0)

    def swap(self) -> "TensorElement":
        return TensorElement.make(
            self.basis, {(right, left): c for (left, right), c in self.terms}
        )


def vacuum(point: Vector) -> BangElement:
    """The degree-zero ket over `point`, with coefficient one."""
    return BangElement.make(point.basis, {CanonicalKet.make(point): 1})


def creation(direction: Vector, element: BangElement) -> BangElement:
    """Act with the creation operator of `direction`, expanded multilinearly.

    On a canonical ket this appends one copy of each basis label weighted by
    the direction's coordinate; the zero direction annihilates everything.
    """
    require_same_context(direction, element)
    acc: dict[CanonicalKet, Fraction] = {}
    for ket_term, coeff in element.terms:
        for label, weight in direction.entries:
            raised = dict(ket_term.content)
            raised[label] = raised.get(label, 0) + 1
            new_ket = CanonicalKet.make(ket_term.point, raised)
            acc[new_ket] = acc.get(new_ket, Fraction(0)) + coeff * weight
    return BangElement.make(element.basis, acc)


def ket(point: Vector, directions: Iterable[Vector] = ()) -> BangElement:
    """The element built by applying one creation operator per direction to the vacuum.

    Multilinear and symmetric in the directions; any zero direction gives the
    zero element.
    """
    element = vacuum(point)
    for direction in directions:
        element = creation(direction, element)
    return element


def coproduct(element: BangElement) -> TensorElement:
    """Split each ket's content multiset in all ways, binomially weighted."""
    acc: dict[tuple[CanonicalKet, CanonicalKet], Fraction] = {}
    for ket_term, coeff in element.terms:
        for part, rest, weight in iter_subcontents(ket_term.content):
            pair = (
                CanonicalKet(ket_term.point, part),
                CanonicalKet(ket_term.point, rest),
            )
            acc[pair] = acc.get(pair, Fraction(0)) + coeff * weight
    return TensorElement.make(element.basis, acc)


def counit(element: BangElement) -> Fraction:
    """The coefficient sum over vacuum terms; kets of positive degree count zero."""
    total = Fraction(0)
    for ket_term, coeff in element.terms:
        if not ket_term.content:
            total += coeff
    return total


def dereliction(element: BangElement) -> Vector:
    """Project out the point-plus-first-order data of each term.

    Vacuum terms contribute their point, degree-one terms contribute their
    single creation vector, and everything of higher degree is dropped.
    """
    acc: dict[str, Fraction] = {}
    for ket_term, coeff in element.terms:
        degree = ket_term.degree()
        if degree == 0:
            for label, value in ket_term.point.entries:
                acc[label] = acc.get(label, Fraction(0)) + coeff * value
        elif degree == 1:
            label = ket_term.content[0][0]
            acc[label] = acc.get(label, Fraction(0)) + coeff
    return Vector.make(element.basis, acc)


def _variable_action(label: str, element: BangElement) -> BangElement:
    acc: dict[CanonicalKet, Fraction] = {}

    def add(k: CanonicalKet, c: Fraction) -> None:
        acc[k] = acc.get(k, Fraction(0)) + c

    for ket_term, coeff in element.terms:
        mult = ket_term.multiplicity(label)
        if mult:
            lowered = dict(ket_term.content)
            lowered[label] = mult - 1
            add(CanonicalKet.make(ket_term.point, lowered), coeff * mult)
        point_coord = ket_term.point.coord(label)
        if point_coord:
            add(ket_term, coeff * point_coord)
    return BangElement.make(element.basis, acc)


def poly_action(f: Polynomial, element: BangElement) -> BangElement:
    """The module action of the polynomial ring.

    The variable of label ``i`` acts on a ket by lowering the multiplicity of
    ``i``, with the old multiplicity as coefficient, plus scaling by the i-th
    coordinate of the point; monomials act by iterating, sums act linearly.
    """
    require_same_context(f, element)
    result = BangElement.zero(element.basis)
    for monomial, coeff in f.terms:
        current = element.scale(coeff)
        for label, exp in monomial:
            for _ in range(exp):
                current = _variable_action(label, current)
        result = result + current
    return result


def residue_pair(f: Polynomial, element: BangElement) -> Fraction:
    """Pair a polynomial against an element of the coalgebra.

    For a canonical ket the pairing differentiates `f` once per content entry
    and evaluates at the point; it agrees with taking the counit of the
    polynomial action.
    """
    require_same_context(f, element)
    total = Fraction(0)
    for ket_term, coeff in element.terms:
        g = f
        for label, mult in ket_term.content:
            for _ in range(mult):
                g = g.partial(label)
            if g.is_zero():
                break
        total += coeff * g.evaluate(ket_term.point)
    return total


def content_factorial(content: Content) -> int:
    out = 1
    for _, mult in content:
        out *= factorial(mult)
    return out


def to_fractions(element: BangElement) -> list[tuple[GeneralizedFraction, Fraction]]:
    """Rewrite in the generalised-fraction basis.

    A ket equals the matching fraction times the product of factorials of its
    multiplicities, so each coefficient is scaled up by that product.
    """
    out = []
    for ket_term, coeff in element.terms:
        fraction_symbol = GeneralizedFraction(ket_term.point, ket_term.content)
        out.append((fraction_symbol, coeff * content_factorial(ket_term.content)))
    return out


def from_fractions(
    basis: Basis, items: Iterable[tuple[GeneralizedFraction, RationalLike]]
) -> BangElement:
    """Inverse of :func:`to_fractions`; the round trip is the identity."""
    acc: dict[CanonicalKet, Fraction] = {}
    for fraction_symbol, value in items:
        ket_term = CanonicalKet(fraction_symbol.point, fraction_symbol.exponents)
        coeff = Fraction(value) / content_factorial(fraction_symbol.exponents)
        acc[ket_term] = acc.get(ket_term, Fraction(0)) + coeff
    return BangElement.make(basis, acc)
