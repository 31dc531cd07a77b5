"""
Exact character theory for abelian groups and abelian-by-C2 groups.

Characters are stored as one Cyclotomic value per conjugacy class, in the
class order fixed by FiniteGroup.conjugacy_classes().
"""

import itertools
import logging
from fractions import Fraction
from math import gcd
from typing import Callable, Dict, List, Mapping, Optional, Sequence, Tuple, Union

import sympy
from sympy.matrices.normalforms import smith_normal_form

from exact_arithmetic import (
    Cyclotomic,
    Matrix,
    block_diagonal,
    determinant,
    inverse,
    kron,
    mat_mul,
    matrices_equal,
    trace,
    transpose,
)
from finite_groups import FiniteGroup, LinearElement
from name_matching import NameMatcher

logger = logging.getLogger(__name__)


class NotAbelianError(ValueError):
    """Raised when an abelian group is required."""


class UnsupportedStructureError(ValueError):
    """Raised when a group is neither abelian nor abelian-by-C2."""


class NotHomomorphismError(ValueError):
    """Raised when a matrix assignment fails the homomorphism spot-check."""


class NonIntegralMultiplicityError(ArithmeticError):
    """Raised when a class function is not an integral combination of irreducibles."""


class VirtualCharacterError(ValueError):
    """Raised when a genuine character is required but a virtual one was supplied."""


class GroupMismatchError(ValueError):
    """Raised when class functions on different groups are combined."""


def _lcm(a: int, b: int) -> int:
    return a * b // gcd(a, b)


class Character:
    """A class function with exact values, one per conjugacy class."""

    def __init__(self, group: FiniteGroup, values: Sequence[Cyclotomic], label: Optional[str] = None):
        classes = group.conjugacy_classes()
        if len(values) != len(classes):
            raise ValueError(f"expected {len(classes)} class values, got {len(values)}")
        self.group = group
        self.values: Tuple[Cyclotomic, ...] = tuple(
            v if isinstance(v, Cyclotomic) else Cyclotomic.rational(v) for v in values)
        self.label = label

    @classmethod
    def trivial(cls, group: FiniteGroup) -> "Character":
        return cls(group, [Cyclotomic.one()] * len(group.conjugacy_classes()), "1")

    @classmethod
    def regular(cls, group: FiniteGroup) -> "Character":
        values = [Cyclotomic.rational(group.order if c.representative == group.identity_idx else 0)
                  for c in group.conjugacy_classes()]
        return cls(group, values, "R")

    @property
    def degree(self) -> int:
        value = self.at(self.group.identity_idx)
        if not value.is_rational() or value.to_fraction().denominator != 1:
            raise ValueError(f"character value at the identity is {value}")
        return int(value.to_fraction())

    def at(self, idx: int) -> Cyclotomic:
        return self.values[self.group.class_of(idx)]

    def is_linear(self) -> bool:
        return self.degree == 1

    def _check(self, other: "Character"):
        if not isinstance(other, Character):
            raise TypeError(f"expected a Character, got {type(other).__name__}")
        if other.group is not self.group:
            raise GroupMismatchError("characters belong to different groups")

    def __add__(self, other: "Character") -> "Character":
        self._check(other)
        return Character(self.group, [a + b for a, b in zip(self.values, other.values)])

    def __sub__(self, other: "Character") -> "Character":
        self._check(other)
        return Character(self.group, [a - b for a, b in zip(self.values, other.values)])

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return Character(self.group, [a * other for a in self.values])
        self._check(other)
        label = f"{self.label}{other.label}" if self.label and other.label else None
        return Character(self.group, [a * b for a, b in zip(self.values, other.values)], label)

    __rmul__ = __mul__

    def dual(self) -> "Character":
        return Character(self.group, [v.conjugate() for v in self.values])

    def _at_squares(self) -> List[Cyclotomic]:
        return [self.at(self.group.mult_idx(c.representative, c.representative))
                for c in self.group.conjugacy_classes()]

    def exterior_square(self) -> "Character":
        return Character(self.group, [(v * v - s) / 2 for v, s in zip(self.values, self._at_squares())])

    def symmetric_square(self) -> "Character":
        return Character(self.group, [(v * v + s) / 2 for v, s in zip(self.values, self._at_squares())])

    def power(self, k: int) -> "Character":
        result = Character.trivial(self.group)
        for _ in range(k):
            result = result * self
        return result

    def order(self) -> int:
        """Order of a linear character in the group of linear characters."""
        if not self.is_linear():
            raise ValueError(f"character {self.label or ''} of degree {self.degree} has no order")
        trivial = Character.trivial(self.group)
        current, k = self, 1
        while current != trivial:
            current, k = current * self, k + 1
        return k

    def kernel_indices(self) -> List[int]:
        d = self.degree
        return [i for i in range(self.group.order) if self.at(i) == d]

    def __eq__(self, other):
        if not isinstance(other, Character):
            return NotImplemented
        return other.group is self.group and all(a == b for a, b in zip(self.values, other.values))

    def __hash__(self):
        return hash(self.values)

    def __repr__(self):
        name = self.label or "Character"
        return f"{name}({', '.join(str(v) for v in self.values)})"


class CharacterTable:
    """Irreducible characters of a group with display labels."""

    def __init__(self, group: FiniteGroup, irreducibles: Sequence[Character], labels: Optional[Sequence[str]] = None):
        self.group = group
        self.irreducibles = list(irreducibles)
        self.labels = list(labels) if labels else [f"rho{k + 1}" for k in range(len(self.irreducibles))]
        for chi, label in zip(self.irreducibles, self.labels):
            chi.label = label
        self._matcher = NameMatcher("character", self.labels)

    def __len__(self):
        return len(self.irreducibles)

    def __iter__(self):
        return iter(self.irreducibles)

    @property
    def degrees(self) -> List[int]:
        return [chi.degree for chi in self.irreducibles]

    def get(self, label: str) -> Character:
        return self.irreducibles[self.labels.index(self._matcher.resolve(label))]

    def label_of(self, character: Character) -> Optional[str]:
        for chi, label in zip(self.irreducibles, self.labels):
            if chi == character:
                return label
        return None

    def rows_orthonormal(self) -> bool:
        for i, a in enumerate(self.irreducibles):
            for j, b in enumerate(self.irreducibles):
                if inner_product(a, b) != (1 if i == j else 0):
                    return False
        return True

    def columns_orthogonal(self) -> bool:
        classes = self.group.conjugacy_classes()
        for s, cs in enumerate(classes):
            for t, ct in enumerate(classes):
                total = Cyclotomic.zero()
                for chi in self.irreducibles:
                    total = total + chi.values[s] * chi.values[t].conjugate()
                expected = self.group.order // cs.size if s == t else 0
                if total != expected:
                    return False
        return True

    def to_json(self) -> Dict:
        classes = self.group.conjugacy_classes()
        return {
            "classes": [
                {"representative": self.group.idx_to_elem(c.representative).serialize(), "size": c.size}
                for c in classes
            ],
            "rows": [
                {"label": label, "values": [v.to_literal() for v in chi.values]}
                for label, chi in zip(self.labels, self.irreducibles)
            ],
        }


def _relation_lattice(group: FiniteGroup, generators: List[int]) -> List[List[int]]:
    orders = [group.element_order(g) for g in generators]
    relations = []
    for i, d in enumerate(orders):
        row = [0] * len(generators)
        row[i] = d
        relations.append(row)
    for exponents in itertools.product(*(range(d) for d in orders)):
        if not any(exponents):
            continue
        current = group.identity_idx
        for g, e in zip(generators, exponents):
            current = group.mult_idx(current, group.pow_idx(g, e))
        if current == group.identity_idx:
            relations.append(list(exponents))
    return relations


def _small_generating_set(group: FiniteGroup) -> List[int]:
    chosen: List[int] = []
    span = {group.identity_idx}
    for idx in sorted(range(group.order), key=lambda i: -group.element_order(i)):
        if idx in span:
            continue
        chosen.append(idx)
        span = set(group.generated_indices(chosen))
        if len(span) == group.order:
            break
    return chosen


def abelian_invariant_factors(group: FiniteGroup) -> List[Tuple[int, int]]:
    """Independent generators (index, order) with orders d1 | d2 | ... and product |K|."""
    if not group.is_abelian():
        raise NotAbelianError(f"group of order {group.order} is not abelian")
    if group.order == 1:
        return []
    generators = _small_generating_set(group)
    relations = sympy.Matrix(_relation_lattice(group, generators))
    snf = smith_normal_form(relations, domain=sympy.ZZ)
    diagonal = [abs(int(snf[i, i])) for i in range(min(snf.shape))]
    factors = sorted(d for d in diagonal if d > 1)
    logger.debug(f"Invariant factors {factors} for abelian group of order {group.order}")

    def search(position: int, chosen: List[int], span_size: int) -> Optional[List[int]]:
        if position < 0:
            return chosen
        d = factors[position]
        for idx in range(group.order):
            if group.element_order(idx) != d:
                continue
            span = group.generated_indices(chosen + [idx])
            if len(span) == span_size * d:
                found = search(position - 1, chosen + [idx], span_size * d)
                if found is not None:
                    return found
        return None

    chosen = search(len(factors) - 1, [], 1)
    if chosen is None:
        raise ArithmeticError("no independent generators found for the invariant factors")
    chosen.reverse()
    return [(idx, group.element_order(idx)) for idx in chosen]


def _dual_group(group: FiniteGroup) -> Tuple[List[Tuple[int, ...]], Dict[int, Tuple[int, ...]], List[int]]:
    """Exponent coordinates of every element with respect to invariant-factor generators."""
    factors = abelian_invariant_factors(group)
    orders = [d for _, d in factors]
    coords: Dict[int, Tuple[int, ...]] = {}
    for exponents in itertools.product(*(range(d) for d in orders)):
        current = group.identity_idx
        for (g, _), e in zip(factors, exponents):
            current = group.mult_idx(current, group.pow_idx(g, e))
        coords[current] = exponents
    characters = list(itertools.product(*(range(d) for d in orders)))
    return characters, coords, orders


def _abelian_values(exponents: Sequence[int], coords: Sequence[int], orders: Sequence[int],
                    conductor: int) -> Cyclotomic:
    power = sum(m * e * (conductor // d) for m, e, d in zip(exponents, coords, orders))
    return Cyclotomic.zeta(conductor, power).minimal() if conductor > 1 else Cyclotomic.one()


def _find_abelian_index_two(group: FiniteGroup) -> Optional[List[int]]:
    center = set(group.center_indices())
    half = group.order // 2
    for c in group.conjugacy_classes():
        g = c.representative
        if g in center:
            continue
        indices = group.centralizer_indices(g)
        if len(indices) == half and group.subgroup(indices).is_abelian():
            return indices
    return None


def _sort_rows(rows: List[Character]) -> List[Character]:
    def key(chi: Character):
        trivial = all(v == 1 for v in chi.values)
        return (chi.degree, not trivial, tuple(v.sort_key() for v in chi.values))
    return sorted(rows, key=key)


def character_table(group: FiniteGroup) -> CharacterTable:
    """Irreducible characters via the dual group or Clifford theory over an abelian index-2 subgroup."""
    classes = group.conjugacy_classes()
    reps = classes.representatives
    if group.is_abelian():
        characters, coords, orders = _dual_group(group)
        conductor = 1
        for d in orders:
            conductor = _lcm(conductor, d)
        rows = [Character(group, [_abelian_values(m, coords[r], orders, conductor) for r in reps])
                for m in characters]
        table = CharacterTable(group, _sort_rows(rows))
        logger.info(f"Built abelian character table with {len(table)} rows")
        return table

    k_indices = _find_abelian_index_two(group)
    if k_indices is None:
        raise UnsupportedStructureError(f"no abelian index-2 subgroup in group of order {group.order}")
    k_set = set(k_indices)
    sigma = next((i for i in range(group.order) if i not in k_set and group.element_order(i) == 2), None)
    if sigma is None:
        raise UnsupportedStructureError("the index-2 extension does not split")
    subgroup = group.subgroup(k_indices)
    characters, coords_local, orders = _dual_group(subgroup)
    coords = {group.elem_to_idx(subgroup.idx_to_elem(i)): c for i, c in coords_local.items()}
    conductor = 1
    for d in orders:
        conductor = _lcm(conductor, d)

    def k_value(m: Tuple[int, ...], k: int) -> Cyclotomic:
        return _abelian_values(m, coords[k], orders, conductor)

    swapped = [group.conjugate_idx(k, sigma) for k in k_indices]
    by_values = {tuple(k_value(m, k) for k in k_indices): m for m in characters}

    rows: List[Character] = []
    handled = set()
    for m in characters:
        if m in handled:
            continue
        partner = by_values[tuple(k_value(m, k) for k in swapped)]
        handled.update({m, partner})
        if partner == m:
            for sign in (1, -1):
                values = []
                for r in reps:
                    if r in k_set:
                        values.append(k_value(m, r))
                    else:
                        values.append(k_value(m, group.mult_idx(r, sigma)) * sign)
                rows.append(Character(group, values))
        else:
            values = [k_value(m, r) + k_value(partner, r) if r in k_set else Cyclotomic.zero() for r in reps]
            rows.append(Character(group, values))

    table = CharacterTable(group, _sort_rows(rows))
    total = sum(d * d for d in table.degrees)
    if total != group.order or len(table) != len(classes):
        raise UnsupportedStructureError(f"Clifford construction gave degrees {table.degrees} for order {group.order}")
    logger.info(f"Built character table with {len(table)} rows, degrees {table.degrees}")
    return table


def inner_product(a: Character, b: Character) -> Cyclotomic:
    """(1/|G|) sum_g a(g) conj(b(g))."""
    a._check(b)
    total = Cyclotomic.zero()
    for c, x, y in zip(a.group.conjugacy_classes(), a.values, b.values):
        if x.is_zero() or y.is_zero():
            continue
        total = total + x * y.conjugate() * c.size
    return total / a.group.order


def decompose_character(character: Character, table: CharacterTable) -> Dict[str, int]:
    """Multiplicities of the irreducibles in a genuine character, in table order."""
    multiplicities: Dict[str, int] = {}
    rebuilt = Character(character.group, [Cyclotomic.zero()] * len(character.values))
    for chi, label in zip(table.irreducibles, table.labels):
        m = inner_product(character, chi)
        if not m.is_rational() or m.to_fraction().denominator != 1:
            raise NonIntegralMultiplicityError(f"multiplicity of {label} is {m}")
        m = int(m.to_fraction())
        if m < 0:
            raise VirtualCharacterError(f"{label} occurs with multiplicity {m}")
        if m:
            multiplicities[label] = m
            rebuilt = rebuilt + chi * m
    if rebuilt != character:
        raise NonIntegralMultiplicityError("class function is not spanned by the irreducibles")
    return multiplicities


def virtual_decomposition(character: Character, table: CharacterTable) -> Dict[str, int]:
    """Like decompose_character but allowing negative multiplicities."""
    out: Dict[str, int] = {}
    for chi, label in zip(table.irreducibles, table.labels):
        m = inner_product(character, chi)
        if not m.is_rational() or m.to_fraction().denominator != 1:
            raise NonIntegralMultiplicityError(f"multiplicity of {label} is {m}")
        if m:
            out[label] = int(m.to_fraction())
    return out


def _spot_check_pairs(group: FiniteGroup) -> List[int]:
    if group.generator_names:
        return sorted(set(group.generator_names.values()))
    if group.order <= 64:
        return list(range(group.order))
    return list(range(16))


def trace_character(group: FiniteGroup, action: Union[Mapping[int, Matrix], Callable[[int], Matrix]]) -> Character:
    """Character of a matrix representation given per element index."""
    lookup = action if callable(action) else action.__getitem__
    sample = _spot_check_pairs(group)
    for g in sample:
        for h in sample:
            if not matrices_equal(mat_mul(lookup(g), lookup(h)), lookup(group.mult_idx(g, h))):
                raise NotHomomorphismError(f"action fails rho(g)rho(h) = rho(gh) at elements {g}, {h}")
    return Character(group, [trace(lookup(c.representative)) for c in group.conjugacy_classes()])


def element_exponents(element: LinearElement, m: int) -> Tuple[int, int, int]:
    """(a, b, c) with element = diag(zeta_m^a, zeta_m^b) * swap^c."""
    rows = element.matrix
    c = 0 if rows[0][1].is_zero() else 1
    first, second = (rows[0][0], rows[1][1]) if c == 0 else (rows[0][1], rows[1][0])

    def log(value: Cyclotomic) -> int:
        for k in range(m):
            if value == Cyclotomic.zeta(m, k):
                return k
        raise ValueError(f"{value} is not an {m}-th root of unity")

    return log(first), log(second), c


def monomial_character(group: FiniteGroup, exponents: Sequence[int], m: int, label: Optional[str] = None) -> Character:
    """Linear character zeta_m^(pa*a + pb*b) * (-1)^(pc*c) of a monomial 2x2 group."""
    pa, pb, pc = exponents
    values = []
    for c in group.conjugacy_classes():
        a, b, swap = element_exponents(group.idx_to_elem(c.representative), m)
        value = Cyclotomic.zeta(m, pa * a + pb * b) * (-1 if (pc * swap) % 2 else 1)
        values.append(value.minimal())
    return Character(group, values, label)


def quotient_character(group: FiniteGroup, normal_indices: Sequence[int], label: Optional[str] = None) -> Character:
    """Nontrivial character of G/N for an index-2 subgroup N."""
    members = set(normal_indices)
    if 2 * len(members) != group.order:
        raise ValueError(f"subgroup of order {len(members)} is not of index 2 in order {group.order}")
    values = [Cyclotomic.one() if c.representative in members else -Cyclotomic.one()
              for c in group.conjugacy_classes()]
    return Character(group, values, label)


def product_closure(generators: Mapping[str, Character]) -> Dict[str, Character]:
    """All products of the named linear characters over nonempty subsets, named by concatenation."""
    names = list(generators)
    out: Dict[str, Character] = {}
    for size in range(1, len(names) + 1):
        for subset in itertools.combinations(names, size):
            chi = generators[subset[0]]
            for name in subset[1:]:
                chi = chi * generators[name]
            out["".join(subset)] = chi
    return out


def assign_labels(table: CharacterTable, named: Mapping[str, Character]) -> CharacterTable:
    """Relabel table rows by the first named character equal to each row; others become rho<k>."""
    labels = []
    unmatched = 0
    for chi in table.irreducibles:
        label = next((name for name, candidate in named.items() if candidate == chi), None)
        if label is None:
            unmatched += 1
            label = f"rho{unmatched}"
        labels.append(label)
    if unmatched:
        logger.warning(f"{unmatched} irreducible characters have no named match")
    return CharacterTable(table.group, table.irreducibles, labels)


class Representation:
    """Matrices for every group element, indexed like the group."""

    def __init__(self, group: FiniteGroup, matrices: Sequence[Matrix], label: Optional[str] = None):
        if len(matrices) != group.order:
            raise ValueError(f"need {group.order} matrices, got {len(matrices)}")
        self.group = group
        self.matrices = [[list(row) for row in m] for m in matrices]
        self.label = label

    @property
    def dimension(self) -> int:
        return len(self.matrices[0])

    def __call__(self, idx: int) -> Matrix:
        return self.matrices[idx]

    @classmethod
    def natural(cls, group: FiniteGroup) -> "Representation":
        if not group.is_linear:
            raise TypeError("the natural representation needs a linear group")
        return cls(group, [e.as_matrix() for e in group.elements], "V")

    @classmethod
    def trivial(cls, group: FiniteGroup) -> "Representation":
        return cls(group, [[[Cyclotomic.one()]] for _ in range(group.order)], "1")

    @classmethod
    def from_linear_character(cls, character: Character) -> "Representation":
        if character.degree != 1:
            raise ValueError(f"character {character.label} has degree {character.degree}")
        group = character.group
        return cls(group, [[[character.at(i)]] for i in range(group.order)], character.label)

    def dual(self) -> "Representation":
        label = f"{self.label}_dual" if self.label else None
        return Representation(self.group, [transpose(inverse(m)) for m in self.matrices], label)

    def tensor(self, other: "Representation") -> "Representation":
        label = f"{self.label}{other.label}" if self.label and other.label else None
        return Representation(self.group, [kron(a, b) for a, b in zip(self.matrices, other.matrices)], label)

    def direct_sum(self, other: "Representation") -> "Representation":
        return Representation(self.group, [block_diagonal([a, b]) for a, b in zip(self.matrices, other.matrices)])

    def det(self) -> "Representation":
        return Representation(self.group, [[[determinant(m)]] for m in self.matrices], f"det({self.label})")

    def character(self) -> Character:
        chi = trace_character(self.group, self)
        chi.label = self.label
        return chi
