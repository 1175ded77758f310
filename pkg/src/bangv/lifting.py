"""Lifting linear maps into the coalgebra: set partitions, promotion, functoriality.

A linear map out of the coalgebra is given by a finite table from canonical
kets to vectors, with absent kets reading as zero (:class:`LinearMapSpec`).
Its unique lift to a coalgebra morphism sends a degree-s ket to a sum over
the set partitions of its s creation slots: each block is fed back through
the table and the resulting vectors create a new ket over the image of the
vacuum (:func:`promote`).  Applying the lift to a single input ket therefore
only ever queries the table on kets at the same point whose content is a
sub-multiset of the input content (vacuum included); no other entries matter.

For a plain linear map between the underlying spaces (:class:`MatrixMapSpec`)
the induced morphism just maps point and creation vectors through
(:func:`bang_map`).

Two independent scalar pairings certify the lift:
:func:`pair_with_coproduct` contracts a polynomial against iterated
coproducts pushed through the table, while :func:`pair_with_partitions` sums
partition-indexed differential operators applied to the polynomial and
evaluated at the image point.  Both equal the residue pairing of the
polynomial against the promoted element.

Set partitions are enumerated as restricted growth strings in lexicographic
order, so block lists are canonical (sorted by least element) and the
enumeration is reproducible.  Counts grow like Bell numbers, so enumeration
beyond the configured cap is refused rather than attempted.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Mapping

from .errors import ContextError, SizeLimitError
from .scalar_poly import (
    Basis,
    Polynomial,
    Vector,
    apply_diff_op,
)
from .bang_core import (
    BangElement,
    CanonicalKet,
    Content,
    content_of_labels,
    counit,
    iter_subcontents,
    ket,
    labels_of_content,
)

DEFAULT_PARTITION_CAP = 12


def bell_number(size: int) -> int:
    """Number of set partitions of a size-element set (Bell triangle recurrence)."""
    if size < 0:
        raise ValueError("size must be non-negative")
    row = [1]
    for _ in range(size):
        nxt = [row[-1]]
        for value in row:
            nxt.append(nxt[-1] + value)
        row = nxt
    return row[0]


@dataclass(frozen=True)
class SetPartition:
    """A partition of ``range(size)`` into disjoint non-empty blocks.

    Blocks are sorted by least element and each block is sorted ascending,
    which makes the representation canonical.
    """

    size: int
    blocks: tuple[tuple[int, ...], ...]

    def length(self) -> int:
        return len(self.blocks)


def _iter_restricted_growth(size: int) -> Iterator[tuple[int, ...]]:
    """All restricted growth strings of the given length, lexicographically."""
    if size == 0:
        yield ()
        return
    string = [0] * size

    def rec(i: int, max_seen: int) -> Iterator[tuple[int, ...]]:
        if i == size:
            yield tuple(string)
            return
        for value in range(max_seen + 2):
            string[i] = value
            yield from rec(i + 1, max(max_seen, value))

    yield from rec(1, 0)


def set_partitions(size: int, cap: int = DEFAULT_PARTITION_CAP) -> list[SetPartition]:
    """All set partitions of ``range(size)``, exactly once, in canonical order.

    The order follows the lexicographic order of restricted growth strings;
    sizes above `cap` raise :class:`SizeLimitError` instead of enumerating.
    """
    if size < 0:
        raise ValueError("size must be non-negative")
    if size > cap:
        raise SizeLimitError(
            f"refusing to enumerate Bell({size}) = {bell_number(size)} set "
            f"partitions; the cap is {cap}"
        )
    out = []
    for string in _iter_restricted_growth(size):
        block_count = (max(string) + 1) if string else 0
        blocks: list[list[int]] = [[] for _ in range(block_count)]
        for position, block_id in enumerate(string):
            blocks[block_id].append(position)
        out.append(SetPartition(size, tuple(tuple(block) for block in blocks)))
    return out


@dataclass(frozen=True)
class LinearMapSpec:
    """A finite table from canonical kets to vectors; absent kets map to zero.

    Linear extension over ket coefficients defines a linear map from the
    whole coalgebra over `domain` into the space spanned by `codomain`.
    """

    domain: Basis
    codomain: Basis
    table: tuple[tuple[CanonicalKet, Vector], ...]

    @classmethod
    def make(
        cls, domain: Basis, codomain: Basis, table: Mapping[CanonicalKet, Vector] = {}
    ) -> "LinearMapSpec":
        cleaned: dict[CanonicalKet, Vector] = {}
        for ket_term, value in table.items():
            if ket_term.basis != domain:
                raise ContextError(
                    f"table ket over {ket_term.basis.labels!r} does not live in "
                    f"the domain {domain.labels!r}"
                )
            if value.basis != codomain:
                raise ContextError(
                    f"table value over {value.basis.labels!r} does not live in "
                    f"the codomain {codomain.labels!r}"
                )
            if not value.is_zero():
                cleaned[ket_term] = value
        ordered = tuple(sorted(cleaned.items(), key=lambda kv: kv[0].sort_key()))
        return cls(domain, codomain, ordered)

    def image(self, ket_term: CanonicalKet) -> Vector:
        for k, v in self.table:
            if k == ket_term:
                return v
        return Vector.zero(self.codomain)


@dataclass(frozen=True)
class MatrixMapSpec:
    """A linear map between the underlying spaces, by images of basis labels."""

    domain: Basis
    codomain: Basis
    images: tuple[tuple[str, Vector], ...]

    @classmethod
    def make(
        cls, domain: Basis, codomain: Basis, images: Mapping[str, Vector] = {}
    ) -> "MatrixMapSpec":
        cleaned: dict[str, Vector] = {}
        for label, value in images.items():
            domain.position(label)
            if value.basis != codomain:
                raise ContextError(
                    f"image over {value.basis.labels!r} does not live in the "
                    f"codomain {codomain.labels!r}"
                )
            if not value.is_zero():
                cleaned[label] = value
        ordered = tuple(sorted(cleaned.items(), key=lambda kv: domain.position(kv[0])))
        return cls(domain, codomain, ordered)

    @classmethod
    def identity(cls, basis: Basis) -> "MatrixMapSpec":
        return cls.make(basis, basis, {l: Vector.unit(basis, l) for l in basis.labels})

    def image_of(self, label: str) -> Vector:
        self.domain.position(label)
        for l, v in self.images:
            if l == label:
                return v
        return Vector.zero(self.codomain)

    def apply(self, vector: Vector) -> Vector:
        if vector.basis != self.domain:
            raise ContextError(
                f"vector over {vector.basis.labels!r} is not in the domain "
                f"{self.domain.labels!r}"
            )
        out = Vector.zero(self.codomain)
        for label, coeff in vector.entries:
            out = out + self.image_of(label).scale(coeff)
        return out


def compose(outer: MatrixMapSpec, inner: MatrixMapSpec) -> MatrixMapSpec:
    if inner.codomain != outer.domain:
        raise ContextError("maps do not compose: codomain/domain mismatch")
    return MatrixMapSpec.make(
        inner.domain,
        outer.codomain,
        {label: outer.apply(inner.image_of(label)) for label in inner.domain.labels},
    )


def _require_domain(phi: LinearMapSpec, element: BangElement) -> None:
    if element.basis != phi.domain:
        raise ContextError(
            f"element over {element.basis.labels!r} is not in the map's domain "
            f"{phi.domain.labels!r}"
        )


def eval_map(phi: LinearMapSpec, element: BangElement) -> Vector:
    """Linear extension of the table over an element's ket terms."""
    _require_domain(phi, element)
    out = Vector.zero(phi.codomain)
    for ket_term, coeff in element.terms:
        out = out + phi.image(ket_term).scale(coeff)
    return out


def promote_ket_terms(
    phi: LinearMapSpec,
    ket_term: CanonicalKet,
    partition_cap: int = DEFAULT_PARTITION_CAP,
) -> list[tuple[SetPartition, BangElement]]:
    """Per-partition contributions of promoting one canonical ket.

    Exposed separately so the pre-merge term structure is observable; the sum
    of the contributions is the promoted element.  Blocks whose table image
    is the zero vector make their whole contribution zero.
    """
    labels = labels_of_content(ket_term.content)
    image_point = phi.image(CanonicalKet(ket_term.point, ()))
    out = []
    for partition in set_partitions(len(labels), partition_cap):
        directions = []
        for block in partition.blocks:
            block_content = content_of_labels(
                ket_term.basis, (labels[i] for i in block)
            )
            directions.append(phi.image(CanonicalKet(ket_term.point, block_content)))
        out.append((partition, ket(image_point, directions)))
    return out


def promote(
    phi: LinearMapSpec,
    element: BangElement,
    partition_cap: int = DEFAULT_PARTITION_CAP,
) -> BangElement:
    """The unique lift of the table to a coalgebra morphism.

    Each ket is sent to the sum over set partitions of its creation slots,
    each block fed through the table and the collected vectors creating a new
    ket over the image of the vacuum.  The lift composed with dereliction
    gives back the table's linear extension.
    """
    _require_domain(phi, element)
    out = BangElement.zero(phi.codomain)
    for ket_term, coeff in element.terms:
        for _, contribution in promote_ket_terms(phi, ket_term, partition_cap):
            out = out + contribution.scale(coeff)
    return out


def bang_map(psi: MatrixMapSpec, element: BangElement) -> BangElement:
    """The coalgebra morphism induced by a linear map of the underlying spaces.

    Points and creation vectors are pushed through the map; the result is
    re-canonicalized in the codomain basis.
    """
    if element.basis != psi.domain:
        raise ContextError(
            f"element over {element.basis.labels!r} is not in the map's domain "
            f"{psi.domain.labels!r}"
        )
    out = BangElement.zero(psi.codomain)
    for ket_term, coeff in element.terms:
        image_point = psi.apply(ket_term.point)
        directions = [
            psi.image_of(label) for label in labels_of_content(ket_term.content)
        ]
        out = out + ket(image_point, directions).scale(coeff)
    return out


def _iter_content_splits(
    content: Content, parts: int
) -> Iterator[tuple[tuple[Content, ...], int]]:
    """All ordered splits of a content multiset into `parts` parts, with weights.

    The weight of a split is the number of expanded label assignments that
    collapse to it; this is the `parts`-fold iterated coproduct of a single
    ket, read off on canonical contents.
    """
    if parts == 1:
        yield (content,), 1
        return
    for part, rest, weight in iter_subcontents(content):
        for tail, tail_weight in _iter_content_splits(rest, parts - 1):
            yield (part,) + tail, weight * tail_weight


def pair_with_coproduct(
    f: Polynomial, phi: LinearMapSpec, element: BangElement
) -> Fraction:
    """Contract a polynomial against iterated coproducts pushed through the table.

    A degree-q monomial is matched against the q-fold coproduct: every split
    of a ket's content into q parts contributes the product, over the
    monomial's variables with repetition, of the named coordinate of the
    table image of that part.  The constant term contributes via the counit.
    Only the coproduct power matching each monomial's degree is ever needed.
    """
    _require_domain(phi, element)
    if f.basis != phi.codomain:
        raise ContextError(
            f"polynomial over {f.basis.labels!r} is not over the map's codomain "
            f"{phi.codomain.labels!r}"
        )
    total = Fraction(0)
    for monomial, mono_coeff in f.terms:
        variables = [label for label, exp in monomial for _ in range(exp)]
        if not variables:
            total += mono_coeff * counit(element)
            continue
        for ket_term, coeff in element.terms:
            for split, weight in _iter_content_splits(ket_term.content, len(variables)):
                value = mono_coeff * coeff * weight
                for variable, part in zip(variables, split):
                    value *= phi.image(CanonicalKet(ket_term.point, part)).coord(
                        variable
                    )
                    if not value:
                        break
                total += value
    return total


def pair_with_partitions(
    f: Polynomial,
    phi: LinearMapSpec,
    element: BangElement,
    partition_cap: int = DEFAULT_PARTITION_CAP,
) -> Fraction:
    """Pair via partition-indexed differential operators at the image point.

    For each ket and each set partition of its creation slots, the table
    images of the blocks act as directional derivatives on the polynomial and
    the result is evaluated at the image of the vacuum.  Agrees with
    :func:`pair_with_coproduct` and with the residue pairing against the
    promoted element.
    """
    _require_domain(phi, element)
    if f.basis != phi.codomain:
        raise ContextError(
            f"polynomial over {f.basis.labels!r} is not over the map's codomain "
            f"{phi.codomain.labels!r}"
        )
    total = Fraction(0)
    for ket_term, coeff in element.terms:
        labels = labels_of_content(ket_term.content)
        image_point = phi.image(CanonicalKet(ket_term.point, ()))
        for partition in set_partitions(len(labels), partition_cap):
            directions = []
            for block in partition.blocks:
                block_content = content_of_labels(
                    ket_term.basis, (labels[i] for i in block)
                )
                directions.append(
                    phi.image(CanonicalKet(ket_term.point, block_content))
                )
            derived = apply_diff_op(directions, f)
            total += coeff * derived.evaluate(image_point)
    return total
