from fractions import Fraction

import pytest
import sympy
from sympy.matrices.normalforms import smith_normal_form

from lattice import (
    change_coordinates,
    int_mat_mul,
    int_mat_vec,
    invariant_factors,
    kernel_on_torus,
    kernel_rank,
    quotient_lattice_basis,
    saturated_kernel,
    smith_form,
    solve_mod_one,
)

MATRICES = [
    [[2, 0], [0, 4]],
    [[2, 4], [6, 8]],
    [[0, -1, 0, 0], [1, 0, 0, 0], [0, 0, -2, 0], [0, 0, 0, -2]],
    [[-1, -1, 0, 0], [1, -1, 0, 0], [0, 0, 0, 0], [0, 0, 0, 0]],
    [[1, 2, 3], [4, 5, 6], [7, 8, 9]],
]


@pytest.mark.parametrize("matrix", MATRICES)
def test_smith_transforms_diagonalize(matrix):
    smith = smith_form(matrix)
    product = int_mat_mul(int_mat_mul(smith.left, matrix), smith.right)
    for i, row in enumerate(product):
        for j, v in enumerate(row):
            assert v == (smith.diagonal[i] if i == j else 0)
    assert abs(sympy.Matrix(smith.left).det()) == 1
    assert abs(sympy.Matrix(smith.right).det()) == 1


@pytest.mark.parametrize("matrix", MATRICES)
def test_invariant_factors_match_sympy(matrix):
    reference = smith_normal_form(sympy.Matrix(matrix), domain=sympy.ZZ)
    expected = sorted(abs(int(reference[i, i])) for i in range(min(reference.shape)) if reference[i, i])
    assert sorted(invariant_factors(matrix)) == expected


def test_divisibility_chain():
    assert smith_form([[2, 4], [6, 8]]).invariant_factors == [2, 4]
    assert smith_form([[2, 4], [6, 8]]).torsion == 8


def test_saturated_kernel():
    kernel = saturated_kernel([[1, -1]])
    assert len(kernel) == 1
    assert int_mat_vec([[1, -1]], kernel[0]) == [0]
    assert abs(kernel[0][0]) == 1
    assert kernel_rank([[0, 0], [0, 0]]) == 2
    assert kernel_rank([[2, 0], [0, 2]]) == 0


def test_solve_mod_one_counts_against_brute_force():
    matrix = [[-2, 0], [0, -2]]
    solutions = solve_mod_one(matrix, [0, 0], 4)
    brute = {(Fraction(a, 4), Fraction(b, 4)) for a in range(4) for b in range(4)
             if all((Fraction(v) % 1) == 0 for v in int_mat_vec(matrix, [Fraction(a, 4), Fraction(b, 4)]))}
    assert solutions == brute
    assert len(solutions) == 4


def test_solve_mod_one_without_solutions():
    assert solve_mod_one([[0, 0], [0, 0]], [Fraction(1, 2), 0], 4) == set()
    assert solve_mod_one([[-2]], [Fraction(1, 4)], 2) == set()
    assert solve_mod_one([[-2]], [Fraction(1, 4)], 8) == {(Fraction(3, 8),), (Fraction(7, 8),)}


def test_kernel_on_torus():
    order, factors, generators = kernel_on_torus([[2, 0], [0, 1]])
    assert order == 2
    assert factors == [2]
    assert generators == [(Fraction(1, 2), Fraction(0))]
    with pytest.raises(ZeroDivisionError):
        kernel_on_torus([[1, 1], [1, 1]])


def test_quotient_lattice_coordinates():
    basis = quotient_lattice_basis([[Fraction(1, 2), Fraction(1, 2)]], 2)
    to_quotient = change_coordinates(basis)
    image = int_mat_vec(to_quotient, [Fraction(1, 2), Fraction(1, 2)])
    assert all(Fraction(v) % 1 == 0 for v in image)
    assert abs(sympy.Matrix([[sympy.Rational(v.numerator, v.denominator) for v in row] for row in basis]).det()) \
        == sympy.Rational(1, 2)
