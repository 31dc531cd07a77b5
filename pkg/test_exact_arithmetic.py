"""
Tests for cyclotomic arithmetic and the exact linear algebra built on it.
"""

from fractions import Fraction

import pytest
import sympy

from exact_arithmetic import (
    ConductorMismatchError,
    Cyclotomic,
    cyc_conjugate,
    cyc_mul,
    cyc_normalize,
    cyclotomic_polynomial,
    determinant,
    from_literal,
    identity_matrix,
    inverse,
    kron,
    lift_matrix,
    mat_mul,
    matrices_equal,
    nullspace,
    parse_cyclotomic,
    quotient_action,
    rank,
    restrict_action,
    solve,
    trace,
)


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5, 6, 8, 9, 12, 15])
def test_cyclotomic_polynomial_matches_sympy(n):
    x = sympy.Symbol("x")
    reference = sympy.Poly(sympy.cyclotomic_poly(n, x), x).all_coeffs()
    assert cyclotomic_polynomial(n) == tuple(int(c) for c in reversed(reference))


def test_relations_of_roots_of_unity():
    i = Cyclotomic.zeta(4)
    assert i ** 2 == -1
    assert i ** 4 == 1
    assert i + i.conjugate() == 0
    assert Cyclotomic(3, [1, 1, 1]).is_zero()
    omega = Cyclotomic.zeta(3)
    assert omega ** 3 == 1
    assert omega * omega.conjugate() == 1


def test_values_compare_across_conductors():
    assert Cyclotomic.zeta(8, 2) == Cyclotomic.zeta(4)
    assert hash(Cyclotomic.zeta(8, 2)) == hash(Cyclotomic.zeta(4))
    assert Cyclotomic.zeta(8, 2).minimal().conductor == 4
    assert Cyclotomic.zeta(12, 3) == Cyclotomic.zeta(4)
    assert Cyclotomic.rational(Fraction(1, 2), 12) == Fraction(1, 2)


def test_mixed_conductor_product_lands_in_the_compositum():
    product = Cyclotomic.zeta(3) * Cyclotomic.zeta(4)
    assert product.conductor == 12
    assert product == Cyclotomic.zeta(12, 7)


def test_strict_product_rejects_different_conductors():
    with pytest.raises(ConductorMismatchError):
        cyc_mul(Cyclotomic.zeta(3), Cyclotomic.zeta(4))


def test_inverse_norm_and_division():
    a = parse_cyclotomic("1+i")
    assert a.conductor == 4
    assert a.norm() == 2
    assert a * a.inverse() == 1
    assert a / a == 1
    assert (a ** -1) == a.inverse()
    with pytest.raises(ZeroDivisionError):
        Cyclotomic.zero(4).inverse()


def test_string_forms():
    i = Cyclotomic.zeta(4)
    assert str(i * 2) == "2*i"
    assert str(i * -2) == "-2*i"
    assert str(parse_cyclotomic("1+i")) == "1 + i"
    assert str(Cyclotomic.rational(Fraction(-3, 4), 8)) == "-3/4"


def test_literals():
    assert from_literal(3) == 3
    assert from_literal("1/2") == Fraction(1, 2)
    assert from_literal({"conductor": 4, "coeffs": ["0", "1"]}) == Cyclotomic.zeta(4)
    assert from_literal("z^2", 8) == Cyclotomic.zeta(4)
    assert from_literal("i", 12).conductor == 12
    value = parse_cyclotomic("z - z^2", 5)
    assert from_literal(value.to_literal()) == value


@pytest.mark.parametrize("bad, conductor, error", [
    (True, None, TypeError),
    ("z^2", None, ValueError),
    ("i", 3, ValueError),
    ({"conductor": 4, "coeffs": ["1"]}, None, ValueError),
])
def test_bad_literals(bad, conductor, error):
    with pytest.raises(error):
        from_literal(bad, conductor)


def test_galois_action_fixes_rationals_and_moves_i():
    i = Cyclotomic.zeta(4)
    assert i.galois(3) == -i
    assert Cyclotomic.rational(5, 8).galois(3) == 5
    with pytest.raises(ValueError):
        Cyclotomic.zeta(8).galois(2)


def test_to_complex():
    assert abs(Cyclotomic.zeta(4).to_complex() - 1j) < 1e-12


def test_matrix_inverse_and_determinant():
    a = lift_matrix([[1, 2], [3, 4]], 1)
    assert determinant(a) == -2
    assert matrices_equal(mat_mul(a, inverse(a)), identity_matrix(2))
    singular = lift_matrix([[1, 2], [2, 4]], 1)
    assert rank(singular) == 1
    assert determinant(singular) == 0
    with pytest.raises(ZeroDivisionError):
        inverse(singular)


def test_nullspace_and_solve():
    a = lift_matrix([[1, 1]], 1)
    basis = nullspace(a)
    assert len(basis) == 1
    assert mat_mul(a, [[v] for v in basis[0]])[0][0].is_zero()
    x = solve(lift_matrix([[2, 0], [0, 4]], 1), lift_matrix([[1], [1]], 1))
    assert x[0][0] == Fraction(1, 2) and x[1][0] == Fraction(1, 4)
    with pytest.raises(ValueError):
        solve(lift_matrix([[1], [1]], 1), lift_matrix([[1], [2]], 1))


def test_kron_trace_and_rotation():
    rotation = lift_matrix([[0, -1], [1, 0]], 4)
    assert trace(kron(rotation, rotation)) == 0
    assert trace(kron(identity_matrix(2, 4), rotation)) == 0
    assert determinant(rotation) == 1
    assert matrices_equal(mat_mul(rotation, rotation), lift_matrix([[-1, 0], [0, -1]], 4))


def test_restricted_and_quotient_actions():
    action = lift_matrix([[1, 1], [0, 1]], 1)
    line = [lift_matrix([[1, 0]], 1)[0]]
    assert matrices_equal(restrict_action(action, line), lift_matrix([[1]], 1))
    plane = [list(row) for row in identity_matrix(2)]
    block, dimension = quotient_action(action, line, plane)
    assert dimension == 1
    assert block[0][0] == 1


def test_normal_form_of_raw_polynomials():
    assert cyc_normalize([0, 0, 0, 0, 1], 4) == 1
    assert cyc_normalize([0, 0, 1], 4) == -1
    assert cyc_normalize([1, 1, 1], 3) == 0
    assert cyc_normalize([0, 1], 4) == Cyclotomic.zeta(4)


def test_complex_conjugation():
    i = Cyclotomic.zeta(4)
    assert cyc_conjugate(i) == -i
    assert cyc_conjugate(i) * i == 1
    assert cyc_conjugate(Cyclotomic.rational(Fraction(3, 4))) == Fraction(3, 4)
    omega = Cyclotomic.zeta(3)
    assert cyc_conjugate(omega) == omega * omega
