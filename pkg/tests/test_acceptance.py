"""Acceptance suite: one test per criterion, one PASS line each, exact equality.

Sampling is seeded and deterministic.  Scale: bases of dimension two or
three, ket degrees up to five, coordinates with numerators and denominators
within five.  Every assertion is exact; there are no tolerances anywhere.

Run with ``pytest tests/test_acceptance.py -s`` to see the per-criterion
report lines.
"""

import itertools
import json
import random
from fractions import Fraction
from math import factorial
from pathlib import Path

from bangv import (
    BangElement,
    Basis,
    CanonicalKet,
    MatrixMapSpec,
    Polynomial,
    Vector,
    apply_diff_op,
    bang_map,
    bell_number,
    compose,
    coproduct,
    counit,
    dereliction,
    eval_map,
    from_fractions,
    ket,
    pair_with_coproduct,
    pair_with_partitions,
    poly_action,
    promote,
    promote_ket_terms,
    residue_pair,
    set_partitions,
    to_fractions,
    vacuum,
)
from bangv.bang_core import content_of_labels, labels_of_content
from bangv.cli import main as cli_main

from support import (
    all_monomials,
    dereliction_table,
    factorial_by_creation_steps,
    matrix_map_as_table,
    partitions_by_assignments,
    random_bang,
    random_linmap,
    random_matrix_map,
    random_poly,
    random_vector,
    tensor_as_dict,
)

GOLDEN = Path(__file__).parent / "golden"

W2 = Basis.of("e1", "e2")
W3 = Basis.of("e1", "e2", "e3")
V2 = Basis.of("a", "b")
V3 = Basis.of("a", "b", "c")


def _report(number: int, label: str) -> None:
    print(f"[acceptance] criterion {number:02d} {label}: PASS")


def _single(basis, ket_term):
    return BangElement.make(basis, {ket_term: 1})


def _triple_expansion(element, first):
    """Apply the coproduct to one side of an existing coproduct, as triples."""
    acc = {}
    for (left, right), coeff in coproduct(element).terms:
        inner = left if first else right
        for (a, b), c in coproduct(_single(element.basis, inner)).terms:
            key = (a, b, right) if first else (left, a, b)
            acc[key] = acc.get(key, Fraction(0)) + coeff * c
    return {k: v for k, v in acc.items() if v}


def test_criterion_01_coalgebra_axioms():
    rng = random.Random(101)
    for case in range(200):
        basis = W3 if case % 2 else W2
        element = random_bang(rng, basis, max_terms=2, max_degree=4)
        delta = coproduct(element)
        # coassociativity
        assert _triple_expansion(element, True) == _triple_expansion(element, False)
        # cocommutativity
        assert delta.swap() == delta
        # counit laws
        left, right = {}, {}
        for (a, b), c in delta.terms:
            if a.content == ():
                left[b] = left.get(b, Fraction(0)) + c
            if b.content == ():
                right[a] = right.get(a, Fraction(0)) + c
        assert BangElement.make(basis, left) == element
        assert BangElement.make(basis, right) == element
    for _ in range(50):
        point = random_vector(rng, W3)
        vac = vacuum(point)
        k = CanonicalKet.make(point)
        assert tensor_as_dict(coproduct(vac)) == {(k, k): Fraction(1)}
        assert counit(vac) == 1
    _report(1, "coalgebra axioms (coassociative, counital, cocommutative)")


def test_criterion_02_dereliction_table():
    rng = random.Random(102)
    for _ in range(100):
        point = random_vector(rng, W3)
        direction = random_vector(rng, W3)
        assert dereliction(vacuum(point)) == point
        assert dereliction(ket(point, [direction])) == direction
        degree = rng.randint(2, 5)
        higher = ket(
            point, [random_vector(rng, W3, allow_zero=False) for _ in range(degree)]
        )
        assert dereliction(higher).is_zero()
    _report(2, "dereliction: point, vector, zero above degree one")


def test_criterion_03_pairing_consistency():
    rng = random.Random(103)
    for case in range(200):
        basis = W3 if case % 2 else W2
        element = random_bang(rng, basis, max_terms=2, max_degree=5)
        f = random_poly(rng, basis, max_degree=5)
        direct = residue_pair(f, element)
        assert direct == counit(poly_action(f, element))
        via_diff_ops = Fraction(0)
        for ket_term, coeff in element.terms:
            directions = [
                Vector.unit(basis, label)
                for label in labels_of_content(ket_term.content)
            ]
            derived = apply_diff_op(directions, f)
            via_diff_ops += coeff * derived.evaluate(ket_term.point)
        assert direct == via_diff_ops
    _report(3, "residue pairing = counit of action = derivative route")


def test_criterion_04_fraction_normalization():
    rng = random.Random(104)
    for _ in range(200):
        element = random_bang(rng, W3, max_terms=3, max_degree=5)
        assert from_fractions(W3, to_fractions(element)) == element
    point = random_vector(rng, W3)
    for mults in itertools.product(range(5), repeat=3):
        content = {label: m for label, m in zip(W3.labels, mults) if m}
        element = _single(W3, CanonicalKet.make(point, content))
        ((_, coeff),) = to_fractions(element)
        expected = 1
        for m in content.values():
            expected *= factorial(m)
        assert coeff == expected == factorial_by_creation_steps(content)
    _report(4, "fraction round trip and factorial normalization")


def test_criterion_05_lifting_factorization():
    rng = random.Random(105)
    for case in range(200):
        domain = W3 if case % 2 else W2
        codomain = V2 if case % 3 else V3
        element = random_bang(rng, domain, max_terms=2, max_degree=4)
        phi = random_linmap(rng, element, codomain)
        assert dereliction(promote(phi, element)) == eval_map(phi, element)
    _report(5, "dereliction after promotion recovers the table map")


def test_criterion_06_promotion_is_coalgebra_morphism():
    rng = random.Random(106)
    for case in range(200):
        domain = W2 if case % 2 else W3
        element = random_bang(rng, domain, max_terms=2, max_degree=4)
        phi = random_linmap(rng, element, V2)
        lifted = promote(phi, element)
        assert counit(lifted) == counit(element)
        lhs = tensor_as_dict(coproduct(lifted))
        rhs = {}
        for (left, right), coeff in coproduct(element).terms:
            lifted_left = promote(phi, _single(domain, left))
            lifted_right = promote(phi, _single(domain, right))
            for kl, cl in lifted_left.terms:
                for kr, cr in lifted_right.terms:
                    key = (kl, kr)
                    rhs[key] = rhs.get(key, Fraction(0)) + coeff * cl * cr
        assert lhs == {k: v for k, v in rhs.items() if v}
    _report(6, "promotion commutes with coproduct and counit")


def test_criterion_07_oracle_equivalence_on_all_monomials():
    rng = random.Random(107)
    for case in range(200):
        degree = case % 5  # 0..4
        domain = W2 if case % 2 else W3
        codomain = V2 if case % 3 else V3
        point = random_vector(rng, domain)
        content = {}
        for _ in range(degree):
            label = rng.choice(domain.labels)
            content[label] = content.get(label, 0) + 1
        ket_term = CanonicalKet.make(point, content)
        element = _single(domain, ket_term)
        phi = random_linmap(rng, element, codomain)
        lifted = promote(phi, element)
        for f in all_monomials(codomain, degree):
            reference = residue_pair(f, lifted)
            assert pair_with_coproduct(f, phi, element) == reference
            assert pair_with_partitions(f, phi, element) == reference
    _report(7, "both pairing routes certify the promoted element")


def _recursion_rhs(pair_fn, g, phi, ket_term, label):
    labels = labels_of_content(ket_term.content)
    total = Fraction(0)
    for size in range(len(labels) + 1):
        for chosen in itertools.combinations(range(len(labels)), size):
            chosen_set = set(chosen)
            taken = content_of_labels(ket_term.basis, (labels[i] for i in chosen_set))
            rest = content_of_labels(
                ket_term.basis,
                (labels[i] for i in range(len(labels)) if i not in chosen_set),
            )
            image = phi.image(CanonicalKet(ket_term.point, taken))
            rest_element = _single(
                ket_term.basis, CanonicalKet(ket_term.point, rest)
            )
            total += image.coord(label) * pair_fn(g, phi, rest_element)
    return total


def test_criterion_08_recursion_identity():
    rng = random.Random(108)
    for case in range(100):
        domain = W2 if case % 2 else W3
        element = random_bang(rng, domain, max_terms=1, max_degree=4)
        ((ket_term, _),) = element.terms
        single = _single(domain, ket_term)
        phi = random_linmap(rng, element, V2)
        g = random_poly(rng, V2, max_degree=2)
        label = rng.choice(V2.labels)
        f = Polynomial.variable(V2, label) * g
        for pair_fn in (pair_with_coproduct, pair_with_partitions):
            assert pair_fn(f, phi, single) == _recursion_rhs(
                pair_fn, g, phi, ket_term, label
            )
    _report(8, "recursion identity holds for both pairing routes")


def test_criterion_09_functoriality():
    rng = random.Random(109)
    identity = MatrixMapSpec.identity(W2)
    for _ in range(100):
        element = random_bang(rng, W2, max_terms=2, max_degree=4)
        # identity law
        assert bang_map(identity, element) == element
        # composition law
        first = random_matrix_map(rng, W2, V3)
        second = random_matrix_map(rng, V3, V2)
        assert bang_map(second, bang_map(first, element)) == bang_map(
            compose(second, first), element
        )
        # a matrix map agrees with promoting its degree-at-most-one table
        psi = random_matrix_map(rng, W2, V2)
        assert bang_map(psi, element) == promote(
            matrix_map_as_table(psi, element), element
        )
        # promoting the dereliction is the identity
        assert promote(dereliction_table(element), element) == element
    _report(9, "functor laws and the dereliction lift")


def test_criterion_10_partition_counts():
    expected_bell = (1, 1, 2, 5, 15, 52, 203, 877, 4140)
    for size, count in enumerate(expected_bell):
        partitions = set_partitions(size)
        assert len(partitions) == count == bell_number(size)
        distinct = {
            frozenset(frozenset(block) for block in p.blocks) for p in partitions
        }
        assert len(distinct) == count
        if size <= 5:
            assert distinct == partitions_by_assignments(size)
    rng = random.Random(110)
    point = random_vector(rng, W2)
    for degree in range(7):
        element = _single(W2, CanonicalKet.make(point, {"e1": degree}))
        phi = random_linmap(rng, element, V2, zero_chance=0.0)
        terms = promote_ket_terms(phi, CanonicalKet.make(point, {"e1": degree}))
        assert len(terms) == bell_number(degree)
    _report(10, "set partition counts and pre-merge promotion terms")


def test_criterion_11_cli_golden_and_check(capsys):
    program = str(GOLDEN / "all_queries.bang")
    assert cli_main(["--input", program, "--format", "text"]) == 0
    assert capsys.readouterr().out == (GOLDEN / "all_queries.text.golden").read_text()

    assert cli_main(["--input", program, "--format", "machine"]) == 0
    machine = capsys.readouterr().out
    assert machine == (GOLDEN / "all_queries.machine.golden").read_text()
    assert json.loads(machine)["schema"] == "bang/1"

    assert cli_main(["--check", "--input", str(GOLDEN / "paper_examples.bang")]) == 0
    check_output = capsys.readouterr().out
    assert "0 failed" in check_output
    with capsys.disabled():
        _report(11, "CLI golden outputs byte-identical; annotated checks pass")
