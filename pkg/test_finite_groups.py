"""
Tests for group closure, conjugacy classes and element lookup, mostly on G(4,2,2).
"""

from fractions import Fraction

import pytest

from exact_arithmetic import Cyclotomic
from finite_groups import (
    ClosureExceededError,
    ElementNotInGroupError,
    LinearElement,
    RealizationMismatchError,
    TorusElement,
    cm_generator,
    cm_unit_order,
    compose,
    generate_group,
    is_pseudo_reflection,
    monomial_element,
    monomial_torus_element,
    realify,
)

GAUSSIAN = ((0, -1), (1, 0))
EISENSTEIN = ((0, -1), (1, -1))
ZETA6 = ((1, -1), (1, 0))


@pytest.fixture(scope="module")
def g422():
    gens = [monomial_element(2, 0, 0, 4), monomial_element(3, 1, 0, 4), monomial_element(0, 0, 1, 4)]
    return generate_group(gens, names=["alpha", "beta", "gamma"])


def test_g422_order_and_classes(g422):
    assert g422.order == 16
    classes = g422.conjugacy_classes()
    assert len(classes) == 10
    assert sum(classes.sizes) == 16
    assert sorted(classes.sizes) == [1, 1, 1, 1, 2, 2, 2, 2, 2, 2]
    assert classes[0].representative == g422.identity_idx
    assert not g422.is_abelian()
    assert g422.exponent() == 4


def test_class_equation_by_brute_force(g422):
    for c in g422.conjugacy_classes():
        centralizer = g422.centralizer_indices(c.representative)
        assert len(centralizer) * c.size == g422.order
        for h in range(g422.order):
            assert g422.class_of(g422.conjugate_idx(c.representative, h)) == g422.class_of(c.representative)


def test_center_is_scalar(g422):
    center = g422.center()
    assert center.order == 4
    assert all(e.matrix[0][1].is_zero() and e.matrix[0][0] == e.matrix[1][1] for e in center.elements)
    assert center.is_subgroup_of(g422)


def test_words(g422):
    assert g422.evaluate_word("gamma^2") == g422.identity_idx
    assert g422.evaluate_word("Id") == g422.identity_idx
    minus = g422.elem_to_idx(monomial_element(2, 2, 0, 4))
    assert g422.evaluate_word("-Id") == minus
    assert g422.evaluate_word("beta^2") == minus
    assert g422.element_order(g422.evaluate_word("beta")) == 4
    with pytest.raises(ElementNotInGroupError):
        g422.evaluate_word("delta")


def test_inverse_and_powers(g422):
    for g in range(g422.order):
        assert g422.mult_idx(g, g422.inv_idx(g)) == g422.identity_idx
        assert g422.pow_idx(g, g422.element_order(g)) == g422.identity_idx


def test_generated_subgroups(g422):
    gamma = g422.generator_names["gamma"]
    generated = g422.generated_indices([gamma])
    assert generated == sorted({g422.identity_idx, gamma})
    diagonal = g422.generated_subgroup([monomial_element(2, 0, 0, 4), monomial_element(3, 1, 0, 4)])
    assert diagonal.order == 8
    assert diagonal.is_abelian()


def test_lookup_of_foreign_element(g422):
    with pytest.raises(ElementNotInGroupError):
        g422.elem_to_idx(monomial_element(1, 0, 0, 4))
    assert monomial_element(1, 0, 0, 4) not in g422


def test_closure_bound():
    with pytest.raises(ClosureExceededError):
        generate_group([monomial_element(1, 0, 0, 8), monomial_element(0, 0, 1, 8)], bound=5)


def test_composition_of_mixed_kinds():
    with pytest.raises(RealizationMismatchError):
        compose(monomial_element(1, 0, 0, 4), TorusElement([[1, 0], [0, 1]]))


def test_equal_matrices_at_different_conductors():
    assert LinearElement([[1, 0], [0, -1]]) == LinearElement([[1, 0], [0, -1]], 1)
    assert monomial_element(2, 0, 0, 4).with_conductor(4) == LinearElement([["-1", 0], [0, 1]], 4)


@pytest.mark.parametrize("element, expected", [
    (monomial_element(2, 0, 0, 4), True),
    (monomial_element(0, 0, 1, 4), True),
    (monomial_element(2, 2, 0, 4), False),
    (monomial_element(1, 3, 0, 4), False),
])
def test_pseudo_reflections(element, expected):
    assert is_pseudo_reflection(element) is expected


def test_torus_elements_compose_affinely():
    half = TorusElement([[1, 0], [0, 1]], [Fraction(1, 2), 0])
    minus = TorusElement([[-1, 0], [0, -1]])
    product = compose(minus, half)
    assert product.translation == (Fraction(1, 2), Fraction(0))
    assert product.apply((Fraction(1, 4), Fraction(0))) == (Fraction(1, 4), Fraction(0))
    assert compose(half, half).is_identity()
    assert half.is_translation() and not minus.is_translation()


@pytest.mark.parametrize("cm, order", [(GAUSSIAN, 4), (EISENSTEIN, 3), (ZETA6, 6)])
def test_cm_unit_orders(cm, order):
    assert cm_unit_order(cm) == order


def test_realify_gaussian_entries():
    assert cm_generator(GAUSSIAN) == Cyclotomic.zeta(4)
    assert realify([["i"]], GAUSSIAN) == [[0, -1], [1, 0]]
    assert realify([["1+i"]], GAUSSIAN) == [[1, -1], [1, 1]]
    assert realify([[0, 1], [1, 0]], GAUSSIAN) == [[0, 0, 1, 0], [0, 0, 0, 1], [1, 0, 0, 0], [0, 1, 0, 0]]
    with pytest.raises(ValueError):
        realify([["1/2"]], GAUSSIAN)


def test_torus_group_of_order_16():
    gens = [monomial_torus_element(2, 0, 0, 4, GAUSSIAN), monomial_torus_element(3, 1, 0, 4, GAUSSIAN),
            monomial_torus_element(0, 0, 1, 4, GAUSSIAN)]
    group = generate_group(gens)
    assert group.order == 16
    assert len(group.conjugacy_classes()) == 10
    assert not group.is_linear
