"""Shared random generators and independent oracles for the test suite.

Coordinates are kept small (numerators and denominators within 5) so every
check is exact and fast.  The oracles here deliberately avoid the code paths
they certify: the coproduct oracle enumerates expanded label subsets instead
of merging binomially, the partition oracle canonicalizes raw block-id
assignments, and the factorial oracle replays the one-step creation rule on
fraction exponents.
"""

from __future__ import annotations

import itertools
import random
from fractions import Fraction

from bangv import (
    BangElement,
    Basis,
    CanonicalKet,
    LinearMapSpec,
    MatrixMapSpec,
    Polynomial,
    TensorElement,
    Vector,
)
from bangv.bang_core import labels_of_content


def random_rational(rng: random.Random, allow_zero: bool = True) -> Fraction:
    while True:
        value = Fraction(rng.randint(-5, 5), rng.randint(1, 5))
        if value or allow_zero:
            return value


def random_vector(rng: random.Random, basis: Basis, allow_zero: bool = True) -> Vector:
    while True:
        entries = {
            label: random_rational(rng)
            for label in basis.labels
            if rng.random() < 0.8
        }
        vector = Vector.make(basis, entries)
        if allow_zero or not vector.is_zero():
            return vector


def random_content(
    rng: random.Random, basis: Basis, max_degree: int, degree: int | None = None
) -> dict[str, int]:
    if degree is None:
        degree = rng.randint(0, max_degree)
    counts: dict[str, int] = {}
    for _ in range(degree):
        label = rng.choice(basis.labels)
        counts[label] = counts.get(label, 0) + 1
    return counts


def random_ket(
    rng: random.Random, basis: Basis, max_degree: int, degree: int | None = None
) -> CanonicalKet:
    return CanonicalKet.make(
        random_vector(rng, basis), random_content(rng, basis, max_degree, degree)
    )


def random_bang(
    rng: random.Random, basis: Basis, max_terms: int = 3, max_degree: int = 4
) -> BangElement:
    terms = {}
    for _ in range(rng.randint(1, max_terms)):
        terms[random_ket(rng, basis, max_degree)] = random_rational(
            rng, allow_zero=False
        )
    return BangElement.make(basis, terms)


def random_poly(
    rng: random.Random, basis: Basis, max_degree: int = 3, max_terms: int = 4
) -> Polynomial:
    terms = []
    for _ in range(rng.randint(1, max_terms)):
        exponents = random_content(rng, basis, max_degree)
        monomial = tuple(sorted(exponents.items(), key=lambda kv: basis.position(kv[0])))
        terms.append((monomial, random_rational(rng)))
    return Polynomial.make(basis, terms)


def random_matrix_map(
    rng: random.Random, domain: Basis, codomain: Basis
) -> MatrixMapSpec:
    return MatrixMapSpec.make(
        domain,
        codomain,
        {label: random_vector(rng, codomain) for label in domain.labels},
    )


def needed_kets(element: BangElement) -> set[CanonicalKet]:
    """Every ket the lifting of a table can query for this input element.

    These are the kets at each term's point whose content is a sub-multiset
    of the term's content (the vacuum included).
    """
    out: set[CanonicalKet] = set()
    for ket_term, _ in element.terms:
        labels = labels_of_content(ket_term.content)
        for size in range(len(labels) + 1):
            for positions in itertools.combinations(range(len(labels)), size):
                counts: dict[str, int] = {}
                for i in positions:
                    counts[labels[i]] = counts.get(labels[i], 0) + 1
                out.add(CanonicalKet.make(ket_term.point, counts))
    return out


def random_linmap(
    rng: random.Random,
    element: BangElement,
    codomain: Basis,
    zero_chance: float = 0.15,
) -> LinearMapSpec:
    """A random table covering every ket the lifting can query for `element`."""
    table = {}
    for ket_term in needed_kets(element):
        if rng.random() >= zero_chance:
            table[ket_term] = random_vector(rng, codomain)
    return LinearMapSpec.make(element.basis, codomain, table)


def dereliction_table(element: BangElement) -> LinearMapSpec:
    """The dereliction map written out as a finite table over the needed kets."""
    basis = element.basis
    table = {}
    for ket_term in needed_kets(element):
        degree = ket_term.degree()
        if degree == 0:
            table[ket_term] = ket_term.point
        elif degree == 1:
            table[ket_term] = Vector.unit(basis, ket_term.content[0][0])
    return LinearMapSpec.make(basis, basis, table)


def matrix_map_as_table(psi: MatrixMapSpec, element: BangElement) -> LinearMapSpec:
    """Degree-at-most-one table whose lifting should agree with the matrix map."""
    table = {}
    for ket_term in needed_kets(element):
        degree = ket_term.degree()
        if degree == 0:
            table[ket_term] = psi.apply(ket_term.point)
        elif degree == 1:
            table[ket_term] = psi.image_of(ket_term.content[0][0])
    return LinearMapSpec.make(psi.domain, psi.codomain, table)


# ---------------------------------------------------------------------------
# Oracles

def coproduct_by_subsets(element: BangElement) -> dict:
    """Coproduct by enumerating all 2^s subsets of the expanded label list."""
    acc: dict[tuple[CanonicalKet, CanonicalKet], Fraction] = {}
    for ket_term, coeff in element.terms:
        labels = labels_of_content(ket_term.content)
        for size in range(len(labels) + 1):
            for positions in itertools.combinations(range(len(labels)), size):
                chosen = set(positions)
                left: dict[str, int] = {}
                right: dict[str, int] = {}
                for i, label in enumerate(labels):
                    side = left if i in chosen else right
                    side[label] = side.get(label, 0) + 1
                pair = (
                    CanonicalKet.make(ket_term.point, left),
                    CanonicalKet.make(ket_term.point, right),
                )
                acc[pair] = acc.get(pair, Fraction(0)) + coeff
    return {pair: c for pair, c in acc.items() if c}


def tensor_as_dict(element: TensorElement) -> dict:
    return dict(element.terms)


def partitions_by_assignments(size: int) -> set[frozenset[frozenset[int]]]:
    """All set partitions of range(size) by canonicalizing block-id assignments."""
    found: set[frozenset[frozenset[int]]] = set()
    if size == 0:
        found.add(frozenset())
        return found
    for assignment in itertools.product(range(size), repeat=size):
        blocks: dict[int, set[int]] = {}
        for position, block_id in enumerate(assignment):
            blocks.setdefault(block_id, set()).add(position)
        found.add(frozenset(frozenset(block) for block in blocks.values()))
    return found


def factorial_by_creation_steps(content: dict[str, int]) -> int:
    """Accumulate the fraction-basis coefficient by repeated single creations.

    One creation step on exponents ``a`` multiplies by ``a_i + 1``; starting
    from the vacuum this yields the fraction-to-ket normalization factor.
    """
    coefficient = 1
    exponents: dict[str, int] = {}
    for label, mult in content.items():
        for _ in range(mult):
            coefficient *= exponents.get(label, 0) + 1
            exponents[label] = exponents.get(label, 0) + 1
    return coefficient


def all_monomials(basis: Basis, max_degree: int) -> list[Polynomial]:
    """Every monomial of total degree at most `max_degree`, coefficient one."""
    out = []
    labels = basis.labels
    for degree in range(max_degree + 1):
        for combo in itertools.combinations_with_replacement(labels, degree):
            counts: dict[str, int] = {}
            for label in combo:
                counts[label] = counts.get(label, 0) + 1
            monomial = tuple(
                sorted(counts.items(), key=lambda kv: basis.position(kv[0]))
            )
            out.append(Polynomial.make(basis, {monomial: 1}))
    return out
