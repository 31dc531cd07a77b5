"""
Integer lattice helpers: Smith decomposition with transforms, saturated
kernels, and solving affine congruences on n-torsion of R^m / Z^m.
"""

import itertools
import logging
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import List, Sequence, Set, Tuple

import sympy
from sympy.matrices.normalforms import smith_normal_form

logger = logging.getLogger(__name__)

IntMatrix = List[List[int]]
Point = Tuple[Fraction, ...]


def _identity(size: int) -> IntMatrix:
    return [[1 if i == j else 0 for j in range(size)] for i in range(size)]


def int_mat_mul(a: Sequence[Sequence[int]], b: Sequence[Sequence[int]]) -> IntMatrix:
    cols = len(b[0]) if b else 0
    return [[sum(row[k] * b[k][j] for k in range(len(b))) for j in range(cols)] for row in a]


def int_mat_vec(a: Sequence[Sequence], v: Sequence) -> List:
    return [sum(c * x for c, x in zip(row, v)) for row in a]


def determinant(a: Sequence[Sequence[int]]) -> int:
    return int(sympy.Matrix(a).det())


@dataclass
class SmithDecomposition:
    """left * matrix * right = diag(diagonal), left and right unimodular."""

    diagonal: List[int]
    left: IntMatrix
    right: IntMatrix
    rank: int

    @property
    def invariant_factors(self) -> List[int]:
        return [d for d in self.diagonal if d]

    @property
    def torsion(self) -> int:
        """Product of the nonzero invariant factors."""
        product = 1
        for d in self.invariant_factors:
            product *= d
        return product


def smith_form(matrix: Sequence[Sequence[int]]) -> SmithDecomposition:
    m = [[int(v) for v in row] for row in matrix]
    rows = len(m)
    cols = len(m[0]) if rows else 0
    left, right = _identity(rows), _identity(cols)

    def swap_rows(i, j):
        m[i], m[j] = m[j], m[i]
        left[i], left[j] = left[j], left[i]

    def swap_cols(i, j):
        for row in m:
            row[i], row[j] = row[j], row[i]
        for row in right:
            row[i], row[j] = row[j], row[i]

    def add_row(target, source, q):
        m[target] = [a - q * b for a, b in zip(m[target], m[source])]
        left[target] = [a - q * b for a, b in zip(left[target], left[source])]

    def add_col(target, source, q):
        for row in m:
            row[target] -= q * row[source]
        for row in right:
            row[target] -= q * row[source]

    for s in range(min(rows, cols)):
        while True:
            # move the least nonzero entry of the lower-right block to (s, s)
            entries = [(abs(m[i][j]), i, j) for i in range(s, rows) for j in range(s, cols) if m[i][j]]
            if not entries:
                break
            _, i, j = min(entries)
            if i != s:
                swap_rows(s, i)
            if j != s:
                swap_cols(s, j)
            pivot = m[s][s]
            clean = True
            for i in range(s + 1, rows):
                if m[i][s]:
                    add_row(i, s, m[i][s] // pivot)
                    clean = clean and m[i][s] == 0
            for j in range(s + 1, cols):
                if m[s][j]:
                    add_col(j, s, m[s][j] // pivot)
                    clean = clean and m[s][j] == 0
            if not clean:
                continue
            bad = next(((i, j) for i in range(s + 1, rows) for j in range(s + 1, cols) if m[i][j] % pivot), None)
            if bad is None:
                break
            add_row(s, bad[0], -1)
        if s < rows and s < cols and m[s][s] < 0:
            m[s] = [-v for v in m[s]]
            left[s] = [-v for v in left[s]]

    diagonal = [m[i][i] for i in range(min(rows, cols))]
    rank = sum(1 for d in diagonal if d)
    return SmithDecomposition(diagonal, left, right, rank)


def invariant_factors(matrix: Sequence[Sequence[int]]) -> List[int]:
    """Nonzero invariant factors, cross-checked against sympy's Smith normal form."""
    ours = smith_form(matrix).invariant_factors
    if matrix and matrix[0]:
        reference = smith_normal_form(sympy.Matrix(matrix), domain=sympy.ZZ)
        theirs = [abs(int(reference[i, i])) for i in range(min(reference.shape)) if reference[i, i]]
        if sorted(theirs) != sorted(ours):
            raise ArithmeticError(f"Smith invariants disagree: {ours} vs {theirs}")
    return ours


def saturated_kernel(matrix: Sequence[Sequence[int]]) -> IntMatrix:
    """Integer basis (as rows) of ker(matrix) intersected with Z^m."""
    smith = smith_form(matrix)
    cols = len(smith.right)
    return [[smith.right[i][j] for i in range(cols)] for j in range(smith.rank, cols)]


def kernel_rank(matrix: Sequence[Sequence[int]]) -> int:
    """Dimension over Q of ker(matrix)."""
    size = len(matrix[0]) if matrix else 0
    return size - sympy.Matrix(matrix).rank()


def reduce_point(point: Sequence) -> Point:
    return tuple(Fraction(v) % 1 for v in point)


def solve_mod_one(matrix: Sequence[Sequence[int]], rhs: Sequence[Fraction], n: int) -> Set[Point]:
    """All x in (1/n)Z^m / Z^m with matrix.x = rhs modulo Z^m.

    Substituting x = right.y turns the congruence into diagonal ones,
    d_i y_i = (left.rhs)_i mod 1.
    """
    smith = smith_form(matrix)
    rows = len(smith.left)
    cols = len(smith.right)
    c = [Fraction(v) for v in int_mat_vec(smith.left, [Fraction(r) for r in rhs])]
    for i in range(smith.rank, rows):
        if c[i].denominator != 1:
            return set()
    choices: List[List[Fraction]] = []
    for j in range(cols):
        if j < smith.rank:
            d = smith.diagonal[j]
            options = []
            for k in range(d):
                y = (c[j] + k) / d
                if n % y.denominator == 0:
                    options.append(y % 1)
            if not options:
                return set()
            choices.append(options)
        else:
            choices.append([Fraction(k, n) for k in range(n)])
    solutions = set()
    for y in itertools.product(*choices):
        solutions.add(reduce_point(int_mat_vec(smith.right, y)))
    return solutions


def kernel_on_torus(matrix: Sequence[Sequence[int]]) -> Tuple[int, List[int], List[Point]]:
    """Kernel of x -> matrix.x on R^m / Z^m for a nonsingular integer matrix.

    Returns the order, the invariant factors above 1 and one generator per factor.
    """
    smith = smith_form(matrix)
    if smith.rank < len(matrix):
        raise ZeroDivisionError("matrix is singular")
    order = smith.torsion
    factors, generators = [], []
    size = len(smith.right)
    for j, d in enumerate(smith.diagonal):
        if d > 1:
            column = [Fraction(smith.right[i][j], d) for i in range(size)]
            factors.append(d)
            generators.append(reduce_point(column))
    return order, factors, generators


def quotient_lattice_basis(points: Sequence[Sequence[Fraction]], size: int) -> List[List[Fraction]]:
    """Basis (as columns) of the lattice spanned by Z^size and the given rational points."""
    denominator = 1
    for p in points:
        for v in p:
            v = Fraction(v)
            denominator = denominator * v.denominator // gcd(denominator, v.denominator)
    generators = [[denominator if i == j else 0 for j in range(size)] for i in range(size)]
    for p in points:
        generators.append([int(Fraction(v) * denominator) for v in p])
    spanning = [list(col) for col in zip(*generators)]
    smith = smith_form(spanning)
    left_inverse = sympy.Matrix(smith.left).inv()
    return [[Fraction(int(left_inverse[i, j]) * smith.diagonal[j], denominator) for j in range(size)]
            for i in range(size)]


def change_coordinates(basis: Sequence[Sequence[Fraction]]) -> List[List[Fraction]]:
    """Inverse of a rational basis matrix, mapping R^m / Z^m onto R^m / lattice."""
    inverse = sympy.Matrix([[sympy.Rational(v.numerator, v.denominator) for v in row] for row in basis]).inv()
    return [[Fraction(int(v.p), int(v.q)) for v in inverse.row(i)] for i in range(inverse.rows)]
