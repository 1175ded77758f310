import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from bangv import (
    Basis,
    ContextError,
    Polynomial,
    Vector,
    apply_diff_op,
    directional_derivative,
    format_rational,
)

from support import random_poly, random_vector

B2 = Basis.of("e1", "e2")
B3 = Basis.of("e1", "e2", "e3")

rationals = st.fractions(min_value=-5, max_value=5, max_denominator=5)


def vectors(basis=B2):
    return st.builds(
        lambda entries: Vector.make(basis, entries),
        st.dictionaries(st.sampled_from(basis.labels), rationals, max_size=len(basis)),
    )


def polynomials(basis=B2, max_degree=3):
    exponents = st.dictionaries(
        st.sampled_from(basis.labels), st.integers(1, max_degree), max_size=2
    )
    monomials = exponents.map(
        lambda e: tuple(sorted(e.items(), key=lambda kv: basis.position(kv[0])))
    )
    return st.builds(
        lambda terms: Polynomial.make(basis, terms),
        st.dictionaries(monomials, rationals, max_size=3),
    )


def test_format_rational():
    assert format_rational(Fraction(6, 4)) == "3/2"
    assert format_rational(Fraction(7)) == "7"
    assert format_rational(Fraction(-3, 2)) == "-3/2"
    assert format_rational(Fraction(0)) == "0"


def test_basis_rejects_duplicate_labels():
    with pytest.raises(ValueError):
        Basis.of("e1", "e1")


def test_vector_additive_inverse_is_empty():
    v = Vector.make(B2, {"e1": 1})
    assert (v + (-v)).entries == ()
    assert (v - v).is_zero()


def test_vector_zero_scale():
    assert Vector.make(B2, {"e1": 3}).scale(0) == Vector.zero(B2)


def test_vector_disjoint_support_add():
    left = Vector.make(B2, {"e1": Fraction(1, 2)})
    right = Vector.make(B2, {"e2": Fraction(1, 3)})
    total = left + right
    assert total.as_dict() == {"e1": Fraction(1, 2), "e2": Fraction(1, 3)}


def test_vector_context_mismatch():
    with pytest.raises(ContextError):
        Vector.make(B2, {"e1": 1}) + Vector.make(B3, {"e1": 1})


def test_vector_unknown_label():
    with pytest.raises(ContextError):
        Vector.make(B2, {"nope": 1})


def test_eval_square():
    f = Polynomial.variable(B2, "e1") ** 2
    assert f.evaluate(Vector.make(B2, {"e1": 3})) == 9


def test_eval_constant():
    one = Polynomial.constant(B2, 1)
    assert one.evaluate(Vector.make(B2, {"e1": 5, "e2": -2})) == 1
    assert one.evaluate(Vector.zero(B2)) == 1


def test_eval_mixed_terms():
    x1 = Polynomial.variable(B2, "e1")
    x2 = Polynomial.variable(B2, "e2")
    f = x1 * x2 - x2
    # hand evaluation: 2*5 - 5
    assert f.evaluate(Vector.make(B2, {"e1": 2, "e2": 5})) == 5


def test_partial_power_rule():
    f = Polynomial.variable(B2, "e1") ** 3
    assert f.partial("e1") == Polynomial.make(B2, {(("e1", 2),): 3})


def test_partial_independent_variable():
    assert Polynomial.variable(B2, "e1").partial("e2").is_zero()


def test_partial_sum():
    x1 = Polynomial.variable(B2, "e1")
    x2 = Polynomial.variable(B2, "e2")
    assert (x1 * x2 + x1).partial("e1") == x2 + Polynomial.constant(B2, 1)


def test_degree_sentinel():
    assert Polynomial.zero(B2).degree() == -1
    assert Polynomial.constant(B2, 5).degree() == 0
    assert (Polynomial.variable(B2, "e1") ** 4).degree() == 4


def test_apply_diff_op_empty_is_identity():
    f = random_poly(random.Random(1), B2)
    assert apply_diff_op([], f) == f


def test_apply_diff_op_zero_vector_annihilates():
    f = Polynomial.variable(B2, "e1") + Polynomial.constant(B2, 2)
    assert apply_diff_op([Vector.zero(B2)], f).is_zero()


def test_apply_diff_op_second_derivative():
    f = Polynomial.variable(B2, "e1") ** 2
    e1 = Vector.unit(B2, "e1")
    assert apply_diff_op([e1, e1], f) == Polynomial.constant(B2, 2)


@given(polynomials(), polynomials(), vectors())
def test_eval_is_ring_homomorphism(f, g, point):
    assert (f * g).evaluate(point) == f.evaluate(point) * g.evaluate(point)
    assert (f + g).evaluate(point) == f.evaluate(point) + g.evaluate(point)


@given(polynomials())
def test_partials_commute(f):
    assert f.partial("e1").partial("e2") == f.partial("e2").partial("e1")


@given(polynomials(), polynomials())
def test_leibniz_rule(f, g):
    lhs = (f * g).partial("e1")
    rhs = f.partial("e1") * g + f * g.partial("e1")
    assert lhs == rhs


@given(polynomials(), vectors(), vectors())
def test_diff_op_permutation_invariant(f, v, w):
    assert apply_diff_op([v, w], f) == apply_diff_op([w, v], f)


@given(polynomials(), vectors(), vectors(), rationals)
def test_diff_op_multilinear(f, v, w, scalar):
    combined = directional_derivative(v + w.scale(scalar), f)
    split = directional_derivative(v, f) + directional_derivative(w, f).scale(scalar)
    assert combined == split


def test_seeded_leibniz_sweep():
    rng = random.Random(7)
    for _ in range(100):
        f = random_poly(rng, B3)
        g = random_poly(rng, B3)
        label = rng.choice(B3.labels)
        assert (f * g).partial(label) == f.partial(label) * g + f * g.partial(label)


def test_seeded_eval_matches_direct_substitution():
    rng = random.Random(11)
    for _ in range(100):
        f = random_poly(rng, B3)
        point = random_vector(rng, B3)
        expected = Fraction(0)
        for monomial, coeff in f.terms:
            term = coeff
            for label, exp in monomial:
                term *= point.coord(label) ** exp
            expected += term
        assert f.evaluate(point) == expected
