"""
Finite groups realized either as cyclotomic matrices (linear models) or as
affine maps on a real torus R^{2g}/Z^{2g} (torus models).

Groups are enumerated by breadth-first closure from generators and then
handled by element index, with the element list kept sorted by a canonical
serialization key so every derived ordering is deterministic.
"""

import logging
import os
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple, Union

import sympy

from exact_arithmetic import (
    Cyclotomic,
    Matrix,
    from_literal,
    identity_matrix,
    mat_mul,
    mat_sub,
    matrix_conductor,
    rank,
)

logger = logging.getLogger(__name__)

DEFAULT_CLOSURE_BOUND = int(os.environ.get("SOD_CLOSURE_BOUND", "10000"))
CAYLEY_TABLE_THRESHOLD = 256


class RealizationMismatchError(ValueError):
    """Raised when elements of different kinds or dimensions are composed."""


class ClosureExceededError(RuntimeError):
    """Raised when closure under composition grows past the allowed bound."""


class ElementNotInGroupError(LookupError):
    """Raised when an element is looked up in a group that does not contain it."""


def _lcm(a: int, b: int) -> int:
    return a * b // gcd(a, b)


class LinearElement:
    """A d x d matrix over Q(zeta_N) acting linearly."""

    __slots__ = ("matrix", "conductor", "_key")

    def __init__(self, matrix: Sequence[Sequence], conductor: Optional[int] = None):
        rows = [[from_literal(v) for v in row] for row in matrix]
        if any(len(row) != len(rows) for row in rows):
            raise ValueError("linear elements need a square matrix")
        n = conductor or matrix_conductor(rows)
        self.matrix: Tuple[Tuple[Cyclotomic, ...], ...] = tuple(
            tuple(v.minimal().embed(n) for v in row) for row in rows
        )
        self.conductor = n
        self._key: Optional[Tuple] = None

    @property
    def dimension(self) -> int:
        return len(self.matrix)

    def as_matrix(self) -> Matrix:
        return [list(row) for row in self.matrix]

    def key(self) -> Tuple:
        if self._key is None:
            self._key = tuple(v.coeffs for row in self.matrix for v in row)
        return self._key

    def with_conductor(self, conductor: int) -> "LinearElement":
        return self if conductor == self.conductor else LinearElement(self.matrix, conductor)

    def is_identity(self) -> bool:
        return all((v.is_one() if i == j else v.is_zero())
                   for i, row in enumerate(self.matrix) for j, v in enumerate(row))

    def __eq__(self, other):
        return isinstance(other, LinearElement) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def serialize(self) -> List[List[str]]:
        return [[str(v) for v in row] for row in self.matrix]

    def __repr__(self):
        rows = "; ".join(", ".join(str(v) for v in row) for row in self.matrix)
        return f"LinearElement([{rows}])"


class TorusElement:
    """Affine map x -> L x + t on R^{2g}/Z^{2g}, L integral, t rational mod 1."""

    __slots__ = ("linear", "translation", "_key")

    def __init__(self, linear: Sequence[Sequence[int]], translation: Optional[Sequence] = None):
        size = len(linear)
        self.linear: Tuple[Tuple[int, ...], ...] = tuple(tuple(int(v) for v in row) for row in linear)
        if any(len(row) != size for row in self.linear):
            raise ValueError("torus elements need a square linear part")
        if translation is None:
            translation = [0] * size
        if len(translation) != size:
            raise ValueError(f"translation has length {len(translation)}, expected {size}")
        self.translation: Tuple[Fraction, ...] = tuple(Fraction(v) % 1 for v in translation)
        self._key: Optional[Tuple] = None

    @property
    def dimension(self) -> int:
        return len(self.linear)

    def key(self) -> Tuple:
        if self._key is None:
            self._key = (tuple(v for row in self.linear for v in row), self.translation)
        return self._key

    def is_identity(self) -> bool:
        return self.is_translation() and not any(self.translation)

    def is_translation(self) -> bool:
        return all(v == (1 if i == j else 0) for i, row in enumerate(self.linear) for j, v in enumerate(row))

    def apply(self, point: Sequence[Fraction]) -> Tuple[Fraction, ...]:
        return tuple(
            (sum(c * p for c, p in zip(row, point)) + t) % 1
            for row, t in zip(self.linear, self.translation)
        )

    def __eq__(self, other):
        return isinstance(other, TorusElement) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def serialize(self) -> Dict:
        return {"linear": [list(row) for row in self.linear], "translation": [str(v) for v in self.translation]}

    def __repr__(self):
        t = ", ".join(str(v) for v in self.translation)
        return f"TorusElement(linear={[list(r) for r in self.linear]}, translation=[{t}])"


GroupElement = Union[LinearElement, TorusElement]


def compose(a: GroupElement, b: GroupElement) -> GroupElement:
    """a o b: apply b first, then a."""
    if type(a) is not type(b) or a.dimension != b.dimension:
        raise RealizationMismatchError(f"cannot compose {type(a).__name__} of dimension {a.dimension} "
                                       f"with {type(b).__name__} of dimension {b.dimension}")
    if isinstance(a, LinearElement):
        n = _lcm(a.conductor, b.conductor)
        product = mat_mul(a.with_conductor(n).as_matrix(), b.with_conductor(n).as_matrix())
        return LinearElement(product, n)
    size = a.dimension
    linear = [[sum(a.linear[i][k] * b.linear[k][j] for k in range(size)) for j in range(size)]
              for i in range(size)]
    shift = [sum(a.linear[i][k] * b.translation[k] for k in range(size)) + a.translation[i]
             for i in range(size)]
    return TorusElement(linear, shift)


def identity_like(e: GroupElement) -> GroupElement:
    if isinstance(e, LinearElement):
        return LinearElement(identity_matrix(e.dimension, e.conductor), e.conductor)
    return TorusElement([[1 if i == j else 0 for j in range(e.dimension)] for i in range(e.dimension)])


def monomial_element(a: int, b: int, c: int, m: int) -> LinearElement:
    """diag(zeta_m^a, zeta_m^b) composed with the coordinate swap c times."""
    one, zero = Cyclotomic.one(m), Cyclotomic.zero(m)
    diagonal = [[Cyclotomic.zeta(m, a), zero], [zero, Cyclotomic.zeta(m, b)]]
    swap = [[zero, one], [one, zero]]
    matrix = mat_mul(diagonal, swap) if c % 2 else diagonal
    return LinearElement(matrix, m if m > 2 else 1)


def cm_unit_order(cm: Sequence[Sequence[int]]) -> int:
    """Multiplicative order of an integral 2x2 CM matrix."""
    current = sympy.Matrix(cm)
    identity = sympy.eye(len(cm))
    power = current
    for k in range(1, 13):
        if power == identity:
            return k
        power = power * current
    raise ValueError(f"CM matrix {cm} does not have finite order")


def realify(matrix: Sequence[Sequence], cm: Sequence[Sequence[int]], omega: Optional[Cyclotomic] = None
            ) -> List[List[int]]:
    """Realify a g x g matrix over Z[omega] into a 2g x 2g integer matrix.

    Each entry a + b*omega becomes the block a*I + b*J, with J the integral
    matrix of multiplication by omega on the lattice basis (1, omega).
    """
    if omega is None:
        omega = cm_generator(cm)
    size = len(matrix)
    out = [[0] * (2 * size) for _ in range(2 * size)]
    im_omega = omega - omega.conjugate()
    for i, row in enumerate(matrix):
        for j, value in enumerate(row):
            c = from_literal(value).minimal()
            imaginary = c - c.conjugate()
            b = (imaginary / im_omega) if not imaginary.is_zero() else Cyclotomic.zero(1)
            a = c - b * omega
            if not (a.is_rational() and b.is_rational()):
                raise ValueError(f"entry {c} is not in the CM order")
            a, b = a.to_fraction(), b.to_fraction()
            if a.denominator != 1 or b.denominator != 1:
                raise ValueError(f"entry {c} is not integral in the CM order")
            for r in range(2):
                for s in range(2):
                    out[2 * i + r][2 * j + s] = int(a) * (1 if r == s else 0) + int(b) * cm[r][s]
    return out


def cm_generator(cm: Sequence[Sequence[int]]) -> Cyclotomic:
    """The root of unity whose multiplication matrix is cm."""
    order = cm_unit_order(cm)
    trace = cm[0][0] + cm[1][1]
    for k in range(1, order):
        if gcd(k, order) == 1:
            candidate = Cyclotomic.zeta(order, k)
            if candidate + candidate.conjugate() == trace:
                return candidate.minimal()
    raise ValueError(f"CM matrix {cm} is not a primitive root of unity")


def monomial_torus_element(a: int, b: int, c: int, m: int, cm: Sequence[Sequence[int]],
                           translation: Optional[Sequence] = None) -> TorusElement:
    """diag(zeta_m^a, zeta_m^b) * swap^c acting on E x E through the CM matrix."""
    unit = cm_unit_order(cm)
    if unit % m and m not in (1, 2):
        raise ValueError(f"zeta_{m} is not a unit for CM matrix {cm}")
    step = unit // m if m > 1 else 0
    cm_matrix = sympy.Matrix(cm)
    blocks = [cm_matrix ** ((a * step) % unit), cm_matrix ** ((b * step) % unit)]
    if m == 2:
        blocks = [(-1) ** (a % 2) * sympy.eye(2), (-1) ** (b % 2) * sympy.eye(2)]
    linear = sympy.diag(*blocks)
    if c % 2:
        swap = sympy.Matrix([[0, 0, 1, 0], [0, 0, 0, 1], [1, 0, 0, 0], [0, 1, 0, 0]])
        linear = linear * swap
    return TorusElement(linear.tolist(), translation)


def is_pseudo_reflection(e: GroupElement) -> bool:
    """True when the fixed space of the linear part has complex codimension one."""
    if isinstance(e, LinearElement):
        n = e.conductor
        return rank(mat_sub(e.as_matrix(), identity_matrix(e.dimension, n))) == 1
    linear = sympy.Matrix(e.linear) - sympy.eye(e.dimension)
    return linear.rank() == 2


def generate_group(generators: Sequence[GroupElement], bound: Optional[int] = None,
                   names: Optional[Sequence[str]] = None) -> "FiniteGroup":
    """Breadth-first closure of the generators under composition."""
    if not generators:
        raise ValueError("at least one generator is required")
    bound = bound or DEFAULT_CLOSURE_BOUND
    gens = list(generators)
    if isinstance(gens[0], LinearElement):
        n = 1
        for g in gens:
            n = _lcm(n, g.conductor)
        gens = [g.with_conductor(n) for g in gens]
    identity = identity_like(gens[0])
    seen = {identity.key(): identity}
    frontier = [identity]
    while frontier:
        next_frontier = []
        for element in frontier:
            for g in gens:
                product = compose(element, g)
                k = product.key()
                if k not in seen:
                    seen[k] = product
                    next_frontier.append(product)
                    if len(seen) > bound:
                        raise ClosureExceededError(f"closure exceeded {bound} elements")
        frontier = next_frontier
    group = FiniteGroup(list(seen.values()))
    if names:
        group.generator_names = {name: group.elem_to_idx(g) for name, g in zip(names, gens)}
    logger.info(f"Generated group of order {group.order}")
    return group


@dataclass(frozen=True)
class ConjugacyClass:
    representative: int
    members: FrozenSet[int]

    @property
    def size(self) -> int:
        return len(self.members)


class ConjugacyPartition:
    """Conjugacy classes of a group, identity class first, then by representative key."""

    def __init__(self, classes: List[ConjugacyClass]):
        self.classes = classes
        self.class_of: Dict[int, int] = {m: c for c, cls in enumerate(classes) for m in cls.members}

    def __len__(self):
        return len(self.classes)

    def __iter__(self):
        return iter(self.classes)

    def __getitem__(self, item: int) -> ConjugacyClass:
        return self.classes[item]

    @property
    def representatives(self) -> List[int]:
        return [c.representative for c in self.classes]

    @property
    def sizes(self) -> List[int]:
        return [c.size for c in self.classes]


class FiniteGroup:
    """A finite group held as a sorted list of elements addressed by index."""

    def __init__(self, elements: Iterable[GroupElement]):
        unique = {e.key(): e for e in elements}
        self.elements: List[GroupElement] = [unique[k] for k in sorted(unique)]
        self._index = {e.key(): i for i, e in enumerate(self.elements)}
        self.identity_idx = next((i for i, e in enumerate(self.elements) if e.is_identity()), None)
        if self.identity_idx is None:
            raise ValueError("element set does not contain the identity")
        self.generator_names: Dict[str, int] = {}
        self._table: Optional[List[List[int]]] = None
        self._inverses: Dict[int, int] = {}
        self._orders: Dict[int, int] = {}
        self._classes: Optional[ConjugacyPartition] = None

    @property
    def order(self) -> int:
        return len(self.elements)

    def __len__(self):
        return len(self.elements)

    def __contains__(self, element: GroupElement) -> bool:
        return element.key() in self._index

    @property
    def is_linear(self) -> bool:
        return isinstance(self.elements[0], LinearElement)

    @property
    def identity(self) -> GroupElement:
        return self.elements[self.identity_idx]

    def elem_to_idx(self, element: GroupElement) -> int:
        try:
            if isinstance(element, LinearElement) and self.is_linear:
                element = element.with_conductor(self.elements[0].conductor)
            return self._index[element.key()]
        except (KeyError, ValueError):
            raise ElementNotInGroupError(f"{element!r} is not in this group of order {self.order}")

    def idx_to_elem(self, idx: int) -> GroupElement:
        return self.elements[idx]

    def key_of(self, idx: int) -> Tuple:
        return self.elements[idx].key()

    def mult_idx(self, a: int, b: int) -> int:
        if self.order > CAYLEY_TABLE_THRESHOLD:
            if self._table is None:
                logger.info(f"Building Cayley table for group of order {self.order}")
                self._table = [[self._index[compose(x, y).key()] for y in self.elements] for x in self.elements]
            return self._table[a][b]
        return self._index[compose(self.elements[a], self.elements[b]).key()]

    def element_order(self, idx: int) -> int:
        if idx not in self._orders:
            k, current = 1, idx
            while current != self.identity_idx:
                current = self.mult_idx(current, idx)
                k += 1
            self._orders[idx] = k
        return self._orders[idx]

    def inv_idx(self, idx: int) -> int:
        if idx not in self._inverses:
            k = self.element_order(idx)
            current = self.identity_idx
            for _ in range(k - 1):
                current = self.mult_idx(current, idx)
            self._inverses[idx] = current
            self._inverses[current] = idx
        return self._inverses[idx]

    def pow_idx(self, idx: int, power: int) -> int:
        power %= self.element_order(idx)
        current = self.identity_idx
        for _ in range(power):
            current = self.mult_idx(current, idx)
        return current

    def conjugate_idx(self, g: int, h: int) -> int:
        """h g h^-1."""
        return self.mult_idx(self.mult_idx(h, g), self.inv_idx(h))

    def exponent(self) -> int:
        result = 1
        for i in range(self.order):
            result = _lcm(result, self.element_order(i))
        return result

    def conjugacy_classes(self) -> ConjugacyPartition:
        if self._classes is None:
            seen = set()
            classes = []
            for g in range(self.order):
                if g in seen:
                    continue
                members = frozenset(self.conjugate_idx(g, h) for h in range(self.order))
                seen |= members
                classes.append(ConjugacyClass(min(members, key=self.key_of), members))
            classes.sort(key=lambda c: (c.representative != self.identity_idx, self.key_of(c.representative)))
            self._classes = ConjugacyPartition(classes)
            logger.debug(f"Found {len(classes)} conjugacy classes")
        return self._classes

    def class_of(self, idx: int) -> int:
        return self.conjugacy_classes().class_of[idx]

    def centralizer_indices(self, g: int) -> List[int]:
        return [h for h in range(self.order) if self.mult_idx(h, g) == self.mult_idx(g, h)]

    def centralizer(self, element: GroupElement) -> "FiniteGroup":
        g = self.elem_to_idx(element)
        return self.subgroup(self.centralizer_indices(g))

    def subgroup(self, indices: Iterable[int]) -> "FiniteGroup":
        return FiniteGroup(self.elements[i] for i in indices)

    def generated_indices(self, generators: Iterable[int]) -> List[int]:
        members = {self.identity_idx}
        frontier = [self.identity_idx]
        gens = list(generators)
        while frontier:
            nxt = []
            for x in frontier:
                for g in gens:
                    y = self.mult_idx(x, g)
                    if y not in members:
                        members.add(y)
                        nxt.append(y)
            frontier = nxt
        return sorted(members)

    def generated_subgroup(self, elements: Iterable[GroupElement]) -> "FiniteGroup":
        return self.subgroup(self.generated_indices(self.elem_to_idx(e) for e in elements))

    def center_indices(self) -> List[int]:
        return sorted(m for c in self.conjugacy_classes() if c.size == 1 for m in c.members)

    def center(self) -> "FiniteGroup":
        return self.subgroup(self.center_indices())

    def is_abelian(self) -> bool:
        return len(self.conjugacy_classes()) == self.order

    def is_subgroup_of(self, other: "FiniteGroup") -> bool:
        return all(e in other for e in self.elements)

    def evaluate_word(self, word: str) -> int:
        """Index of a product of named generators, e.g. "beta^2*alpha" or "-Id"."""
        text = word.replace(" ", "")
        negate = text.startswith("-")
        if negate:
            text = text[1:]
        current = self.identity_idx
        for token in filter(None, text.split("*")):
            name, _, power = token.partition("^")
            if name in ("Id", "1", "e"):
                idx = self.identity_idx
            elif name in self.generator_names:
                idx = self.generator_names[name]
            else:
                raise ElementNotInGroupError(f"unknown generator {name!r} in word {word!r}")
            current = self.mult_idx(current, self.pow_idx(idx, int(power) if power else 1))
        if negate:
            minus = self._negative_identity()
            current = self.mult_idx(minus, current)
        return current

    def _negative_identity(self) -> int:
        e = self.identity
        if isinstance(e, LinearElement):
            negative = LinearElement([[-v for v in row] for row in e.as_matrix()], e.conductor)
        else:
            negative = TorusElement([[-v for v in row] for row in e.linear])
        return self.elem_to_idx(negative)

    def __repr__(self):
        kind = "linear" if self.is_linear else "torus"
        return f"FiniteGroup(order={self.order}, {kind})"
