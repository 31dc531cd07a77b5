"""
Tests for quotient modules, resolutions and invariant Ext on small groups.

The scalar group mu_4 = <i * Id> keeps everything one-dimensional per weight,
so the Ext groups of twisted skyscrapers can be read off by hand:
Ext^k(O_0, O_0) has weights 0, 1 (twice) and 2.
"""

import pytest

from exact_arithmetic import Cyclotomic, parse_cyclotomic
from finite_groups import LinearElement, generate_group, monomial_element
from equivariant_modules import (
    NotFiniteColengthError,
    NotStableError,
    act_on_poly,
    check_semiorthogonal_sequence,
    direct_sum,
    ext_profile,
    hilbert_ideal_generators,
    ideal_contains,
    invariant_polynomials,
    is_exceptional,
    minimal_resolution,
    module_character,
    parse_poly,
    quotient_module,
    semi_invariant_weight,
)
from rep_theory import Character, Representation, monomial_character


def poly(text, variables=("x", "y")):
    return parse_poly(text, variables)


@pytest.fixture(scope="module")
def mu4():
    return generate_group([monomial_element(1, 1, 0, 4)], names=["zeta"])


@pytest.fixture(scope="module")
def plus_minus():
    return generate_group([LinearElement([[-1, 0], [0, -1]])], names=["minus"])


@pytest.fixture(scope="module")
def trivial_group():
    return generate_group([LinearElement([[1, 0], [0, 1]])])


def twist_by(group, weight):
    return Representation.from_linear_character(monomial_character(group, (weight, 0, 0), 4, f"w{weight}"))


def test_parse_and_print():
    f = poly("x^2 - y^2")
    assert f.coefficient((2, 0)) == 1
    assert f.coefficient((0, 2)) == -1
    assert f.to_string() == "x^2 - y^2"
    assert poly("x*y").to_string() == "x*y"
    assert poly("(1+i)*x*y").coefficient((1, 1)) == parse_cyclotomic("1+i")
    assert poly("u*v^2", ("u", "v")).to_string(("u", "v")) == "u*v^2"
    assert poly("(x+y)^4").degree() == 4
    with pytest.raises(ValueError):
        parse_poly("x +* y")


def test_ideal_membership():
    gens = [poly("x^2"), poly("y^2")]
    assert ideal_contains(gens, poly("x^2*y"))
    assert ideal_contains(gens, poly("x^3 + 5*y^4"))
    assert not ideal_contains(gens, poly("x*y"))
    assert ideal_contains(gens, poly("0"))


def test_quotient_module_dimensions(plus_minus):
    module = quotient_module(plus_minus, [poly("x^2"), poly("y^2")], label="Q")
    assert module.dimension == 4
    assert module.hilbert_function() == {0: 1, 1: 2, 2: 1}
    module.validate()
    chi = module_character(module)
    minus = plus_minus.generator_names["minus"]
    assert chi.at(minus) == 0
    assert chi.at(plus_minus.identity_idx) == 4


def test_quotient_module_errors(plus_minus):
    swap = generate_group([monomial_element(0, 0, 1, 1)])
    with pytest.raises(NotFiniteColengthError):
        quotient_module(plus_minus, [poly("x^2")])
    with pytest.raises(NotStableError):
        quotient_module(swap, [poly("x"), poly("y^2")])
    with pytest.raises(ValueError):
        quotient_module(plus_minus, [poly("x + y^2"), poly("y")])


def test_resolutions(plus_minus):
    koszul = minimal_resolution(quotient_module(plus_minus, [poly("x^2"), poly("y^2")]))
    assert koszul.ranks == (1, 2, 1)
    assert koszul.koszul
    fat_point = minimal_resolution(quotient_module(plus_minus, [poly("x^2"), poly("x*y"), poly("y^2")]))
    assert fat_point.ranks == (1, 3, 2)
    assert not fat_point.koszul
    assert fat_point.degrees[1] == [2, 2, 2]
    assert fat_point.degrees[2] == [3, 3]


def test_general_resolution_agrees_with_koszul(plus_minus):
    module = quotient_module(plus_minus, [poly("x^2"), poly("y^2")])
    assert minimal_resolution(module, use_koszul=False).ranks == (1, 2, 1)
    assert ext_profile(module, module, use_koszul=False).invariants == ext_profile(module, module).invariants


def test_skyscraper_ext_without_group(trivial_group):
    point = quotient_module(trivial_group, [poly("x"), poly("y")], label="O0")
    profile = ext_profile(point, point)
    assert profile.invariants == (1, 2, 1)
    assert profile.dimensions == (1, 2, 1)
    assert not is_exceptional(point)


def test_skyscraper_is_exceptional_for_scalar_mu4(mu4):
    point = quotient_module(mu4, [poly("x"), poly("y")], label="O0")
    profile = ext_profile(point, point)
    assert profile.invariants == (1, 0, 0)
    zeta = mu4.generator_names["zeta"]
    assert profile.characters[1].at(zeta) == Cyclotomic.zeta(4) * 2
    assert profile.characters[2].at(zeta) == -1
    assert is_exceptional(point)


def test_twisted_skyscrapers_form_a_sequence(mu4):
    point = quotient_module(mu4, [poly("x"), poly("y")], label="O0")
    twisted = point.twisted(twist_by(mu4, 3), "O0*w3")
    assert twisted.dimension == 1
    forward = check_semiorthogonal_sequence([point, twisted])
    assert forward.passed
    assert forward.matrix[(0, 1)] == (0, 2, 0)
    backward = check_semiorthogonal_sequence([twisted, point])
    assert not backward.passed
    assert backward.violations == [(1, 0)]
    assert backward.to_json()["violations"] == [["O0", "O0*w3"]]


def test_completely_orthogonal_pairs(mu4):
    point = quotient_module(mu4, [poly("x"), poly("y")], label="O0")
    twisted = point.twisted(twist_by(mu4, 3), "O0*w3")
    report = check_semiorthogonal_sequence([point, twisted], completely_orthogonal=[(0, 1)])
    assert report.violations == [(0, 1)]


def test_direct_sums_resolve_componentwise(mu4):
    point = quotient_module(mu4, [poly("x"), poly("y")], label="O0")
    both = direct_sum([point, point.twisted(twist_by(mu4, 2))], label="S")
    assert both.dimension == 2
    assert minimal_resolution(both).ranks == (2, 4, 2)
    assert ext_profile(both, both).invariants[0] == 2


def test_semi_invariant_weights(mu4, plus_minus):
    zeta = mu4.generator_names["zeta"]
    assert semi_invariant_weight(mu4, poly("x*y")).at(zeta) == -1
    assert semi_invariant_weight(mu4, poly("x^4 + y^4")) == Character.trivial(mu4)
    swap = generate_group([monomial_element(0, 0, 1, 1)])
    assert semi_invariant_weight(swap, poly("x")) is None
    assert semi_invariant_weight(plus_minus, poly("x*y")) == Character.trivial(plus_minus)


def test_invariants_and_hilbert_ideals(mu4, plus_minus):
    assert invariant_polynomials(plus_minus, 1) == []
    assert len(invariant_polynomials(plus_minus, 2)) == 3
    generators = hilbert_ideal_generators(mu4, 4)
    assert len(generators) == 5
    assert all(f.degree() == 4 for f in generators)
    assert [f.degree() for f in hilbert_ideal_generators(plus_minus, 4)] == [2, 2, 2]


def test_group_acts_on_polynomials_through_the_inverse(mu4, plus_minus):
    zeta = mu4.generator_names["zeta"]
    image = act_on_poly(mu4, zeta, poly("x"))
    assert image.coefficient((1, 0)) == -Cyclotomic.zeta(4)
    assert act_on_poly(mu4, zeta, poly("x*y")) == poly("-x*y")
    minus = plus_minus.generator_names["minus"]
    assert act_on_poly(plus_minus, minus, poly("x^2 + y")) == poly("x^2 - y")
