"""
Exact arithmetic in cyclotomic fields Q(zeta_N) plus the small amount of
exact linear algebra every other module runs on.

Elements are stored as coefficient vectors in the power basis
1, z, ..., z^(phi(N)-1) of Q[z]/(Phi_N(z)), so equality at a fixed conductor
is a tuple comparison.
"""

import cmath
import logging
from fractions import Fraction
from functools import lru_cache
from math import gcd
from typing import Dict, List, Optional, Sequence, Tuple, Union

import sympy
from sympy.parsing.sympy_parser import (
    convert_xor,
    parse_expr,
    standard_transformations,
)

logger = logging.getLogger(__name__)

Rational = Fraction
Scalar = Union[int, Fraction, "Cyclotomic"]
Matrix = List[List["Cyclotomic"]]

_TRANSFORMS = standard_transformations + (convert_xor,)


class ConductorMismatchError(ValueError):
    """Raised when two cyclotomic values of different conductors meet in a strict operation."""


def _lcm(a: int, b: int) -> int:
    return a * b // gcd(a, b)


def _poly_divmod(num: Sequence[int], den: Sequence[int]) -> Tuple[List[int], List[int]]:
    """Divide integer polynomials (lowest degree first) by a monic divisor."""
    rem = list(num)
    dn = len(den) - 1
    if den[-1] != 1:
        raise ValueError("divisor must be monic")
    quo = [0] * max(len(rem) - dn, 1)
    for k in range(len(rem) - 1, dn - 1, -1):
        c = rem[k]
        if c == 0:
            continue
        quo[k - dn] = c
        for j, d in enumerate(den):
            rem[k - dn + j] -= c * d
    return quo, rem[:dn]


@lru_cache(maxsize=None)
def cyclotomic_polynomial(n: int) -> Tuple[int, ...]:
    """Integer coefficients of Phi_n, lowest degree first.

    Uses Phi_n = (x^n - 1) / prod_{d | n, d < n} Phi_d.
    """
    if n < 1:
        raise ValueError(f"conductor must be positive, got {n}")
    poly = [-1] + [0] * (n - 1) + [1]
    for d in sympy.divisors(n):
        if d == n:
            continue
        poly, rem = _poly_divmod(poly, cyclotomic_polynomial(d))
        if any(rem):
            raise ArithmeticError(f"Phi_{d} does not divide x^{n} - 1")
    while len(poly) > 1 and poly[-1] == 0:
        poly.pop()
    return tuple(poly)


class _FieldData:
    """Precomputed reduction tables for one conductor."""

    def __init__(self, n: int):
        self.n = n
        self.phi_poly = cyclotomic_polynomial(n)
        self.degree = len(self.phi_poly) - 1
        self.units = tuple(k for k in range(n) if gcd(k, n) == 1) if n > 1 else (0,)
        # powers[k] = z^k reduced, for 0 <= k < max(n, 2*degree - 1)
        size = max(n, 2 * self.degree - 1, 1)
        powers: List[Tuple[int, ...]] = []
        current = [1] + [0] * (self.degree - 1)
        for _ in range(size):
            powers.append(tuple(current))
            top = current[-1]
            current = [0] + current[:-1]
            if top:
                for j in range(self.degree):
                    current[j] -= top * self.phi_poly[j]
        self.powers = tuple(powers)


@lru_cache(maxsize=None)
def _field(n: int) -> _FieldData:
    if n < 1:
        raise ValueError(f"conductor must be positive, got {n}")
    return _FieldData(n)


def _as_fraction(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    raise TypeError(f"cannot read {value!r} as a rational number")


class Cyclotomic:
    """An element of Q(zeta_N) in canonical reduced form."""

    __slots__ = ("conductor", "coeffs", "_minimal", "_hash")

    def __init__(self, conductor: int, coeffs: Sequence):
        field = _field(conductor)
        values = [_as_fraction(c) for c in coeffs]
        if len(values) != field.degree:
            values = list(cyc_normalize(values, conductor).coeffs)
        self.conductor = conductor
        self.coeffs: Tuple[Fraction, ...] = tuple(values)
        self._minimal: Optional["Cyclotomic"] = None
        self._hash: Optional[int] = None

    # constructors

    @classmethod
    def _raw(cls, conductor: int, coeffs: Tuple[Fraction, ...]) -> "Cyclotomic":
        obj = cls.__new__(cls)
        obj.conductor = conductor
        obj.coeffs = coeffs
        obj._minimal = None
        obj._hash = None
        return obj

    @classmethod
    def rational(cls, value, conductor: int = 1) -> "Cyclotomic":
        degree = _field(conductor).degree
        return cls._raw(conductor, (_as_fraction(value),) + (Fraction(0),) * (degree - 1))

    @classmethod
    def zero(cls, conductor: int = 1) -> "Cyclotomic":
        return cls.rational(0, conductor)

    @classmethod
    def one(cls, conductor: int = 1) -> "Cyclotomic":
        return cls.rational(1, conductor)

    @classmethod
    def zeta(cls, conductor: int, power: int = 1) -> "Cyclotomic":
        """zeta_N^power."""
        field = _field(conductor)
        row = field.powers[power % conductor]
        return cls._raw(conductor, tuple(Fraction(c) for c in row))

    # predicates

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def is_rational(self) -> bool:
        return not any(self.coeffs[1:])

    def is_one(self) -> bool:
        return self.is_rational() and self.coeffs[0] == 1

    def to_fraction(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self} is not rational")
        return self.coeffs[0]

    # coercion

    def _coerce(self, other) -> Optional[Tuple["Cyclotomic", "Cyclotomic"]]:
        if isinstance(other, (int, Fraction)):
            return self, Cyclotomic.rational(other, self.conductor)
        if not isinstance(other, Cyclotomic):
            return None
        if other.conductor == self.conductor:
            return self, other
        if other.is_rational():
            return self, Cyclotomic.rational(other.coeffs[0], self.conductor)
        if self.is_rational():
            return Cyclotomic.rational(self.coeffs[0], other.conductor), other
        n = _lcm(self.conductor, other.conductor)
        return self.embed(n), other.embed(n)

    # arithmetic

    def __add__(self, other):
        pair = self._coerce(other)
        if pair is None:
            return NotImplemented
        a, b = pair
        return Cyclotomic._raw(a.conductor, tuple(x + y for x, y in zip(a.coeffs, b.coeffs)))

    __radd__ = __add__

    def __neg__(self):
        return Cyclotomic._raw(self.conductor, tuple(-x for x in self.coeffs))

    def __sub__(self, other):
        pair = self._coerce(other)
        if pair is None:
            return NotImplemented
        a, b = pair
        return Cyclotomic._raw(a.conductor, tuple(x - y for x, y in zip(a.coeffs, b.coeffs)))

    def __rsub__(self, other):
        return (-self).__add__(other)

    def __mul__(self, other):
        pair = self._coerce(other)
        if pair is None:
            return NotImplemented
        return cyc_mul(*pair)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise ZeroDivisionError("division by zero")
            return Cyclotomic._raw(self.conductor, tuple(x / other for x in self.coeffs))
        pair = self._coerce(other)
        if pair is None:
            return NotImplemented
        a, b = pair
        return cyc_mul(a, b.inverse())

    def __rtruediv__(self, other):
        pair = self._coerce(other)
        if pair is None:
            return NotImplemented
        a, b = pair
        return cyc_mul(b, a.inverse())

    def __pow__(self, exponent: int):
        if not isinstance(exponent, int):
            return NotImplemented
        base = self if exponent >= 0 else self.inverse()
        exponent = abs(exponent)
        result = Cyclotomic.one(self.conductor)
        while exponent:
            if exponent & 1:
                result = cyc_mul(result, base)
            exponent >>= 1
            if exponent:
                base = cyc_mul(base, base)
        return result

    # field automorphisms and embeddings

    def galois(self, k: int) -> "Cyclotomic":
        """Image under z -> z^k (k a unit mod the conductor)."""
        n = self.conductor
        if n <= 2 or self.is_rational():
            return self
        if gcd(k, n) != 1:
            raise ValueError(f"{k} is not a unit modulo {n}")
        field = _field(n)
        out = [Fraction(0)] * field.degree
        for j, c in enumerate(self.coeffs):
            if c:
                row = field.powers[(j * k) % n]
                for t, r in enumerate(row):
                    if r:
                        out[t] += c * r
        return Cyclotomic._raw(n, tuple(out))

    def conjugate(self) -> "Cyclotomic":
        return cyc_conjugate(self)

    def embed(self, target: int) -> "Cyclotomic":
        """Same value seen in Q(zeta_target); target must be a multiple of the conductor."""
        if target == self.conductor:
            return self
        if self.is_rational():
            return Cyclotomic.rational(self.coeffs[0], target)
        if target % self.conductor:
            raise ConductorMismatchError(f"cannot embed conductor {self.conductor} into {target}")
        field = _field(target)
        step = target // self.conductor
        out = [Fraction(0)] * field.degree
        for j, c in enumerate(self.coeffs):
            if c:
                row = field.powers[(j * step) % target]
                for t, r in enumerate(row):
                    if r:
                        out[t] += c * r
        return Cyclotomic._raw(target, tuple(out))

    def norm(self) -> Fraction:
        if self.is_rational():
            return self.coeffs[0] ** _field(self.conductor).degree
        product = Cyclotomic.one(self.conductor)
        for k in _field(self.conductor).units:
            product = cyc_mul(product, self.galois(k))
        return product.to_fraction()

    def inverse(self) -> "Cyclotomic":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero")
        if self.is_rational():
            return Cyclotomic.rational(1 / self.coeffs[0], self.conductor)
        others = Cyclotomic.one(self.conductor)
        for k in _field(self.conductor).units:
            if k != 1:
                others = cyc_mul(others, self.galois(k))
        total = cyc_mul(self, others).to_fraction()
        return others / total

    def minimal(self) -> "Cyclotomic":
        """The same value written at the smallest conductor that contains it."""
        if self._minimal is not None:
            return self._minimal
        if self.is_rational():
            self._minimal = Cyclotomic.rational(self.coeffs[0], 1)
            return self._minimal
        n = self.conductor
        units = _field(n).units
        for m in sympy.divisors(n):
            if m == n:
                break
            if m % 4 == 2:
                continue
            if all(self.galois(k) == self for k in units if k % m == 1):
                candidate = _solve_in_subfield(self, m)
                if candidate is not None:
                    self._minimal = candidate
                    return candidate
        self._minimal = self
        return self

    # comparison

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.is_rational() and self.coeffs[0] == other
        if not isinstance(other, Cyclotomic):
            return NotImplemented
        if other.conductor == self.conductor:
            return self.coeffs == other.coeffs
        pair = self._coerce(other)
        return pair[0].coeffs == pair[1].coeffs

    def __ne__(self, other):
        result = self.__eq__(other)
        return result if result is NotImplemented else not result

    def __hash__(self):
        if self._hash is None:
            if self.is_rational():
                self._hash = hash(self.coeffs[0])
            else:
                small = self.minimal()
                self._hash = hash((small.conductor, small.coeffs))
        return self._hash

    def __bool__(self):
        return not self.is_zero()

    # display and literals

    def to_complex(self) -> complex:
        n = self.conductor
        return sum(float(c) * cmath.exp(2j * cmath.pi * j / n) for j, c in enumerate(self.coeffs) if c)

    def to_literal(self) -> Dict:
        small = self.minimal()
        return {"conductor": small.conductor, "coeffs": [str(c) for c in small.coeffs]}

    def sort_key(self) -> Tuple:
        small = self.minimal()
        return (small.conductor, small.coeffs)

    def __str__(self):
        small = self.minimal()
        if small.is_rational():
            return str(small.coeffs[0])
        symbol = "i" if small.conductor == 4 else f"z{small.conductor}"
        terms = []
        for j, c in enumerate(small.coeffs):
            if not c:
                continue
            if j == 0:
                terms.append(str(c))
                continue
            base = symbol if j == 1 else f"{symbol}^{j}"
            if c == 1:
                terms.append(base)
            elif c == -1:
                terms.append(f"-{base}")
            else:
                terms.append(f"{c}*{base}")
        return " + ".join(terms).replace("+ -", "- ")

    def __repr__(self):
        return f"Cyclotomic({self})"


def _solve_in_subfield(a: Cyclotomic, m: int) -> Optional[Cyclotomic]:
    """Find b in Q(zeta_m) whose image in Q(zeta_N) is a, if one exists."""
    degree = _field(m).degree
    columns = [Cyclotomic.zeta(m, j).embed(a.conductor).coeffs for j in range(degree)]
    rows = [[Fraction(columns[j][t]) for j in range(degree)] + [a.coeffs[t]] for t in range(len(a.coeffs))]
    reduced, pivots = _fraction_rref(rows)
    if degree in pivots:
        return None
    solution = [Fraction(0)] * degree
    for r, p in enumerate(pivots):
        solution[p] = reduced[r][degree]
    return Cyclotomic._raw(m, tuple(solution))


def _fraction_rref(rows: List[List[Fraction]]) -> Tuple[List[List[Fraction]], List[int]]:
    rows = [list(r) for r in rows]
    pivots: List[int] = []
    if not rows:
        return rows, pivots
    width = len(rows[0])
    r = 0
    for col in range(width):
        pivot = next((i for i in range(r, len(rows)) if rows[i][col] != 0), None)
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        lead = rows[r][col]
        rows[r] = [v / lead for v in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][col] != 0:
                f = rows[i][col]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        pivots.append(col)
        r += 1
        if r == len(rows):
            break
    return rows, pivots


def cyc_normalize(raw: Sequence, conductor: int) -> Cyclotomic:
    """Reduce a raw polynomial in z (lowest degree first) to canonical form mod Phi_N."""
    field = _field(conductor)
    out = [Fraction(0)] * field.degree
    for k, c in enumerate(raw):
        c = _as_fraction(c)
        if not c:
            continue
        row = field.powers[k % conductor]
        for t, r in enumerate(row):
            if r:
                out[t] += c * r
    return Cyclotomic._raw(conductor, tuple(out))


def cyc_mul(a: Cyclotomic, b: Cyclotomic) -> Cyclotomic:
    """Product of two elements of the same cyclotomic field."""
    if a.conductor != b.conductor:
        raise ConductorMismatchError(f"conductors {a.conductor} and {b.conductor} differ")
    n = a.conductor
    if a.is_rational():
        s = a.coeffs[0]
        return Cyclotomic._raw(n, tuple(s * c for c in b.coeffs)) if s else Cyclotomic.zero(n)
    if b.is_rational():
        s = b.coeffs[0]
        return Cyclotomic._raw(n, tuple(s * c for c in a.coeffs)) if s else Cyclotomic.zero(n)
    field = _field(n)
    conv: Dict[int, Fraction] = {}
    for i, x in enumerate(a.coeffs):
        if not x:
            continue
        for j, y in enumerate(b.coeffs):
            if y:
                conv[i + j] = conv.get(i + j, Fraction(0)) + x * y
    out = [Fraction(0)] * field.degree
    for k, c in conv.items():
        if not c:
            continue
        row = field.powers[k]
        for t, r in enumerate(row):
            if r:
                out[t] += c * r
    return Cyclotomic._raw(n, tuple(out))


def cyc_conjugate(a: Cyclotomic) -> Cyclotomic:
    """Complex conjugation z -> z^-1."""
    if a.conductor <= 2:
        return a
    return a.galois(a.conductor - 1)


def parse_cyclotomic(text: str, conductor: Optional[int] = None) -> Cyclotomic:
    """Parse an ASCII expression in i (zeta_4) and z (zeta_N), e.g. "1+i" or "z^2 - 1"."""
    if conductor is None:
        if "z" in text:
            raise ValueError(f"expression {text!r} uses z but no conductor was given")
        conductor = 4 if "i" in text else 1
    z = sympy.Symbol("z")
    local = {"z": z}
    if conductor % 4 == 0:
        local["i"] = local["I"] = z ** (conductor // 4)
    elif "i" in text:
        raise ValueError(f"'i' needs a conductor divisible by 4, got {conductor}")
    try:
        expr = sympy.expand(parse_expr(text, local_dict=local, transformations=_TRANSFORMS))
        poly = sympy.Poly(expr, z, domain="QQ")
    except Exception as e:
        raise ValueError(f"cannot parse cyclotomic expression {text!r}: {e}") from e
    coeffs = [Fraction(int(c.p), int(c.q)) for c in reversed(poly.all_coeffs())]
    return cyc_normalize(coeffs, conductor)


def from_literal(value, conductor: Optional[int] = None) -> Cyclotomic:
    """Read a scenario literal: an int, a "p/q" string, an expression or a {conductor, coeffs} record."""
    if isinstance(value, Cyclotomic):
        return value if conductor is None else value.embed(_lcm(conductor, value.conductor))
    if isinstance(value, dict):
        n = int(value["conductor"])
        coeffs = [_as_fraction(c) for c in value["coeffs"]]
        if len(coeffs) != _field(n).degree:
            raise ValueError(f"conductor {n} needs {_field(n).degree} coefficients, got {len(coeffs)}")
        result = Cyclotomic(n, coeffs)
    elif isinstance(value, bool):
        raise TypeError("booleans are not cyclotomic literals")
    elif isinstance(value, (int, Fraction)):
        result = Cyclotomic.rational(value, 1)
    elif isinstance(value, str):
        try:
            result = Cyclotomic.rational(Fraction(value.strip()), 1)
        except ValueError:
            result = parse_cyclotomic(value, conductor)
    else:
        raise TypeError(f"unsupported cyclotomic literal {value!r}")
    if conductor is not None and conductor % result.conductor == 0:
        return result.embed(conductor)
    return result


# Exact linear algebra. Matrices are lists of rows of Cyclotomic values
# sharing one conductor.


def identity_matrix(size: int, conductor: int = 1) -> Matrix:
    one, zero = Cyclotomic.one(conductor), Cyclotomic.zero(conductor)
    return [[one if i == j else zero for j in range(size)] for i in range(size)]


def zero_matrix(rows: int, cols: int, conductor: int = 1) -> Matrix:
    zero = Cyclotomic.zero(conductor)
    return [[zero] * cols for _ in range(rows)]


def matrix_conductor(m: Matrix) -> int:
    n = 1
    for row in m:
        for v in row:
            n = _lcm(n, v.conductor)
    return n


def lift_matrix(m: Sequence[Sequence], conductor: int) -> Matrix:
    """Entries read as literals and embedded at the given conductor."""
    return [[from_literal(v).minimal().embed(conductor) for v in row] for row in m]


def mat_mul(a: Matrix, b: Matrix) -> Matrix:
    if not a:
        return []
    inner = len(b)
    cols = len(b[0]) if b else 0
    if a and len(a[0]) != inner:
        raise ValueError(f"shape mismatch: {len(a)}x{len(a[0])} times {inner}x{cols}")
    n = matrix_conductor(a) if a else 1
    zero = Cyclotomic.zero(n)
    out = []
    for row in a:
        acc = [zero] * cols
        for k, x in enumerate(row):
            if x.is_zero():
                continue
            brow = b[k]
            for j in range(cols):
                y = brow[j]
                if not y.is_zero():
                    acc[j] = acc[j] + x * y
        out.append(acc)
    return out


def mat_vec(a: Matrix, v: Sequence[Cyclotomic]) -> List[Cyclotomic]:
    return [col[0] for col in mat_mul(a, [[x] for x in v])] if a else []


def mat_add(a: Matrix, b: Matrix) -> Matrix:
    return [[x + y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def mat_sub(a: Matrix, b: Matrix) -> Matrix:
    return [[x - y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def mat_scale(a: Matrix, s: Scalar) -> Matrix:
    return [[x * s for x in row] for row in a]


def transpose(a: Matrix) -> Matrix:
    return [list(col) for col in zip(*a)] if a else []


def trace(a: Matrix) -> Cyclotomic:
    total = Cyclotomic.zero(matrix_conductor(a) if a else 1)
    for i, row in enumerate(a):
        total = total + row[i]
    return total


def kron(a: Matrix, b: Matrix) -> Matrix:
    out = []
    for ra in a:
        for rb in b:
            out.append([x * y if not (x.is_zero() or y.is_zero()) else Cyclotomic.zero(x.conductor)
                        for x in ra for y in rb])
    return out


def block_diagonal(blocks: Sequence[Matrix], conductor: int = 1) -> Matrix:
    size = sum(len(b) for b in blocks)
    out = zero_matrix(size, size, conductor)
    offset = 0
    for block in blocks:
        for i, row in enumerate(block):
            for j, v in enumerate(row):
                out[offset + i][offset + j] = v
        offset += len(block)
    return out


def is_zero_matrix(a: Matrix) -> bool:
    return all(v.is_zero() for row in a for v in row)


def matrices_equal(a: Matrix, b: Matrix) -> bool:
    if len(a) != len(b):
        return False
    return all(len(ra) == len(rb) and all(x == y for x, y in zip(ra, rb)) for ra, rb in zip(a, b))


def rref(a: Matrix) -> Tuple[Matrix, List[int]]:
    """Reduced row echelon form and pivot columns."""
    rows = [list(r) for r in a]
    pivots: List[int] = []
    if not rows:
        return rows, pivots
    width = len(rows[0])
    r = 0
    for col in range(width):
        if r == len(rows):
            break
        pivot = next((i for i in range(r, len(rows)) if not rows[i][col].is_zero()), None)
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        lead = rows[r][col]
        if not lead.is_one():
            inv = lead.inverse()
            rows[r] = [v * inv if not v.is_zero() else v for v in rows[r]]
        base = rows[r]
        support = [j for j in range(col, width) if not base[j].is_zero()]
        for i in range(len(rows)):
            if i == r:
                continue
            f = rows[i][col]
            if f.is_zero():
                continue
            target = rows[i]
            for j in support:
                target[j] = target[j] - f * base[j]
        pivots.append(col)
        r += 1
    return rows, pivots


def rank(a: Matrix) -> int:
    return len(rref(a)[1]) if a and a[0] else 0


def nullspace(a: Matrix, width: Optional[int] = None, conductor: Optional[int] = None) -> List[List[Cyclotomic]]:
    """Basis of {v : a v = 0}, as a list of vectors."""
    if width is None:
        width = len(a[0]) if a else 0
    n = conductor or (matrix_conductor(a) if a else 1)
    reduced, pivots = rref(a) if a else ([], [])
    free = [j for j in range(width) if j not in pivots]
    basis = []
    for f in free:
        vec = [Cyclotomic.zero(n)] * width
        vec[f] = Cyclotomic.one(n)
        for r, p in enumerate(pivots):
            vec[p] = -reduced[r][f]
        basis.append(vec)
    return basis


def column_space(vectors: Sequence[Sequence[Cyclotomic]]) -> List[List[Cyclotomic]]:
    """An independent subset spanning the same space as the given vectors."""
    if not vectors:
        return []
    as_columns = transpose([list(v) for v in vectors])
    _, pivots = rref(as_columns)
    return [list(vectors[p]) for p in pivots]


def solve(a: Matrix, b: Matrix) -> Matrix:
    """X with a X = b, raising ValueError when no solution exists."""
    if not a:
        return []
    width = len(a[0])
    extra = len(b[0]) if b else 0
    augmented = [list(ra) + list(rb) for ra, rb in zip(a, b)]
    reduced, pivots = rref(augmented)
    if any(p >= width for p in pivots):
        raise ValueError("linear system has no solution")
    n = matrix_conductor(augmented)
    x = zero_matrix(width, extra, n)
    for r, p in enumerate(pivots):
        x[p] = reduced[r][width:]
    return x


def inverse(a: Matrix) -> Matrix:
    size = len(a)
    n = matrix_conductor(a) if a else 1
    reduced, pivots = rref([list(row) + ident for row, ident in zip(a, identity_matrix(size, n))])
    if pivots[:size] != list(range(size)):
        raise ZeroDivisionError("matrix is singular")
    return [row[size:] for row in reduced]


def restrict_action(action: Matrix, basis: Sequence[Sequence[Cyclotomic]]) -> Matrix:
    """Matrix of action on the span of an invariant independent set of vectors."""
    if not basis:
        return []
    b = transpose([list(v) for v in basis])
    return solve(b, mat_mul(action, b))


def quotient_action(action: Matrix, sub: Sequence[Sequence[Cyclotomic]],
                    space: Sequence[Sequence[Cyclotomic]]) -> Tuple[Matrix, int]:
    """Action induced on span(space)/span(sub), with sub contained in space.

    Returns the matrix and the quotient dimension.
    """
    completed = list(column_space(list(sub) + list(space)))
    k = len(column_space(list(sub))) if sub else 0
    full = restrict_action(action, completed)
    block = [row[k:] for row in full[k:]]
    return block, len(completed) - k


def determinant(a: Matrix) -> Cyclotomic:
    rows = [list(r) for r in a]
    size = len(rows)
    n = matrix_conductor(rows) if rows else 1
    result = Cyclotomic.one(n)
    for col in range(size):
        pivot = next((i for i in range(col, size) if not rows[i][col].is_zero()), None)
        if pivot is None:
            return Cyclotomic.zero(n)
        if pivot != col:
            rows[col], rows[pivot] = rows[pivot], rows[col]
            result = -result
        lead = rows[col][col]
        result = result * lead
        inv = lead.inverse()
        for i in range(col + 1, size):
            f = rows[i][col]
            if f.is_zero():
                continue
            f = f * inv
            rows[i] = [x - f * y for x, y in zip(rows[i], rows[col])]
    return result
